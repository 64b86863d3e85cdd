//! Total-momentum block decomposition of the translation-invariant ring.
//!
//! Basis configurations are grouped into translation orbits ("classes"). In
//! the two-flip sector a class is a flip separation `r ∈ 1..=⌊N/2⌋`; in the
//! one-flip sector there is a single class. For total momentum
//! `K = 2πq/N` the block basis vectors are
//!
//! ```text
//! |q, c⟩ = norm_c⁻¹ Σ_a exp(iK(a + r_c/2)) T^a |rep_c⟩ ,
//! ```
//!
//! with the phase referenced to the centre of the pair. The ring Hamiltonian
//! has no matrix elements between different `q`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::chain::{sorted_pair, HamiltonianBlock, Sector};
use crate::error::{Error, Result};

/// One translation orbit of basis configurations.
#[derive(Debug, Clone)]
pub struct OrbitClass {
    /// Flip separation (0 in the one-flip sector).
    pub separation: usize,
    /// Number of distinct configurations in the orbit.
    pub orbit_len: usize,
    /// Centre offset of the representative, `r/2`.
    pub offset: f64,
    norm: f64,
    /// Basis index of `T^a rep` for `a = 0..N`.
    members: Vec<usize>,
}

/// Coefficients of a state in the block basis, block `q` stored contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockVector {
    pub data: Vec<Complex64>,
    offsets: Vec<usize>,
}

impl BlockVector {
    pub fn block(&self, q: usize) -> &[Complex64] {
        &self.data[self.offsets[q]..self.offsets[q + 1]]
    }

    pub fn block_mut(&mut self, q: usize) -> &mut [Complex64] {
        let (a, b) = (self.offsets[q], self.offsets[q + 1]);
        &mut self.data[a..b]
    }

    pub fn n_blocks(&self) -> usize {
        self.offsets.len() - 1
    }
}

pub struct MomentumBlocks {
    n_sites: usize,
    sector: Sector,
    classes: Vec<OrbitClass>,
    /// `(class, translation)` of each basis configuration.
    locate: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    fft_forward: Arc<dyn Fft<f64>>,
    fft_inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for MomentumBlocks {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MomentumBlocks")
            .field("n_sites", &self.n_sites)
            .field("sector", &self.sector)
            .field("classes", &self.classes.len())
            .finish()
    }
}

impl MomentumBlocks {
    pub fn new(sector: Sector, n_sites: usize) -> Result<Self> {
        if n_sites < 4 {
            return Err(Error::InvalidParams(format!(
                "N must be at least 4, got {n_sites}"
            )));
        }
        let n = n_sites;
        let dim = sector.dimension(n);
        let mut classes = Vec::new();
        let mut locate = vec![(usize::MAX, 0); dim];
        match sector {
            Sector::One => {
                classes.push(OrbitClass {
                    separation: 0,
                    orbit_len: n,
                    offset: 0.0,
                    norm: (n as f64).sqrt(),
                    members: (0..n).collect(),
                });
                for (a, slot) in locate.iter_mut().enumerate() {
                    *slot = (0, a);
                }
            }
            Sector::Two => {
                for r in 1..=n / 2 {
                    let orbit_len = if 2 * r == n { n / 2 } else { n };
                    let members = (0..n)
                        .map(|a| {
                            let (n1, n2) = sorted_pair(a, (a + r) % n);
                            crate::chain::pair_index_unchecked(n1, n2, n)
                        })
                        .collect::<Vec<_>>();
                    let class = classes.len();
                    for (a, &m) in members.iter().enumerate().take(orbit_len) {
                        locate[m] = (class, a);
                    }
                    classes.push(OrbitClass {
                        separation: r,
                        orbit_len,
                        offset: r as f64 / 2.0,
                        norm: (n as f64 * (n / orbit_len) as f64).sqrt(),
                        members,
                    });
                }
            }
        }
        debug_assert!(locate.iter().all(|&(c, _)| c != usize::MAX));
        let mut offsets = vec![0];
        for q in 0..n {
            let d = classes
                .iter()
                .filter(|c| Self::class_allowed(c, q, n))
                .count();
            offsets.push(offsets[q] + d);
        }
        debug_assert_eq!(offsets[n], dim);
        let mut planner = FftPlanner::new();
        Ok(MomentumBlocks {
            n_sites,
            sector,
            classes,
            locate,
            offsets,
            fft_forward: planner.plan_fft_forward(n),
            fft_inverse: planner.plan_fft_inverse(n),
        })
    }

    /// A class contributes to block `q` when its orbit closes with phase one.
    fn class_allowed(class: &OrbitClass, q: usize, n: usize) -> bool {
        (q * class.orbit_len).is_multiple_of(n)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn n_blocks(&self) -> usize {
        self.n_sites
    }

    pub fn classes(&self) -> &[OrbitClass] {
        &self.classes
    }

    /// `K = 2πq/N`.
    pub fn momentum(&self, q: usize) -> f64 {
        2.0 * PI * q as f64 / self.n_sites as f64
    }

    pub fn block_dim(&self, q: usize) -> usize {
        self.offsets[q + 1] - self.offsets[q]
    }

    pub fn block_dims(&self) -> Vec<usize> {
        (0..self.n_sites).map(|q| self.block_dim(q)).collect()
    }

    /// Classes spanning block `q`, in block order.
    pub fn block_classes(&self, q: usize) -> impl Iterator<Item = &OrbitClass> + '_ {
        let n = self.n_sites;
        self.classes
            .iter()
            .filter(move |c| Self::class_allowed(c, q, n))
    }

    fn zero_blocks(&self) -> BlockVector {
        BlockVector {
            data: vec![Complex64::new(0.0, 0.0); self.offsets[self.n_sites]],
            offsets: self.offsets.clone(),
        }
    }

    /// Forward change of basis, site configurations to momentum blocks.
    pub fn to_blocks(&self, amps: &[Complex64]) -> Result<BlockVector> {
        let mut out = self.zero_blocks();
        self.to_blocks_into(
            amps,
            &mut out,
            &mut vec![Complex64::new(0.0, 0.0); self.n_sites],
        )?;
        Ok(out)
    }

    pub(crate) fn to_blocks_into(
        &self,
        amps: &[Complex64],
        out: &mut BlockVector,
        scratch: &mut [Complex64],
    ) -> Result<()> {
        let dim = self.offsets[self.n_sites];
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: amps.len(),
            });
        }
        let n = self.n_sites;
        for (ci, class) in self.classes.iter().enumerate() {
            for (a, &m) in class.members.iter().enumerate() {
                scratch[a] = amps[m];
            }
            self.fft_forward.process(scratch);
            for q in 0..n {
                if !Self::class_allowed(class, q, n) {
                    continue;
                }
                let k = self.momentum(q);
                let phase = Complex64::from_polar(1.0 / class.norm, -k * class.offset);
                out.data[self.offsets[q] + ci] = scratch[q] * phase;
            }
        }
        Ok(())
    }

    /// Inverse change of basis.
    pub fn from_blocks(&self, blocks: &BlockVector) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.offsets[self.n_sites]];
        self.from_blocks_into(
            blocks,
            &mut out,
            &mut vec![Complex64::new(0.0, 0.0); self.n_sites],
        );
        out
    }

    pub(crate) fn from_blocks_into(
        &self,
        blocks: &BlockVector,
        out: &mut [Complex64],
        scratch: &mut [Complex64],
    ) {
        let n = self.n_sites;
        for (ci, class) in self.classes.iter().enumerate() {
            let scale = (n / class.orbit_len) as f64 / class.norm;
            for q in 0..n {
                scratch[q] = if Self::class_allowed(class, q, n) {
                    let k = self.momentum(q);
                    blocks.data[self.offsets[q] + ci]
                        * Complex64::from_polar(scale, k * class.offset)
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
            self.fft_inverse.process(scratch);
            for a in 0..class.orbit_len {
                out[class.members[a]] = scratch[a];
            }
        }
    }

    /// Explicit basis vector `|q, c⟩` in the site basis (`c` is the position
    /// inside block `q`).
    pub fn basis_vector(&self, q: usize, c: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.offsets[self.n_sites]];
        let class = &self.classes[c];
        let k = self.momentum(q);
        for (a, &m) in class.members.iter().enumerate() {
            v[m] += Complex64::from_polar(1.0 / class.norm, k * (a as f64 + class.offset));
        }
        v
    }

    /// Block `q` of `H - shift` in the `|q, c⟩` basis.
    ///
    /// Only the representative rows of `H` are read; translation invariance
    /// supplies the rest.
    pub fn block_hamiltonian(
        &self,
        h: &HamiltonianBlock,
        q: usize,
        shift: f64,
    ) -> Result<DMatrix<Complex64>> {
        if h.sector != self.sector || h.dimension != self.offsets[self.n_sites] {
            return Err(Error::DimensionMismatch {
                expected: self.offsets[self.n_sites],
                found: h.dimension,
            });
        }
        let n = self.n_sites;
        let k = self.momentum(q);
        let d = self.block_dim(q);
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for (ci, class) in self.classes.iter().enumerate() {
            if !Self::class_allowed(class, q, n) {
                continue;
            }
            let rep = class.members[0];
            for (target, amp) in h.row(rep) {
                let amp = if target == rep { amp - shift } else { amp };
                let (cj, shift_a) = self.locate[target];
                let tclass = &self.classes[cj];
                if !Self::class_allowed(tclass, q, n) {
                    continue;
                }
                let weight = (n / tclass.orbit_len) as f64 * n as f64 / (class.norm * tclass.norm);
                let phase = k * (class.offset - shift_a as f64 - tclass.offset);
                m[(cj, ci)] += Complex64::from_polar(amp * weight, phase);
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{build_two_excitation_h, ChainParams};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn block_dimensions_partition_the_sector() {
        for n in [4usize, 5, 8, 9, 12] {
            let mb = MomentumBlocks::new(Sector::Two, n).unwrap();
            let dims = mb.block_dims();
            assert_eq!(dims.iter().sum::<usize>(), n * (n - 1) / 2);
            for d in dims {
                assert!(d == n / 2 || d == (n - 1) / 2, "N={n}, d={d}");
            }
        }
        let mb = MomentumBlocks::new(Sector::Two, 8).unwrap();
        assert_eq!(mb.block_dims().iter().sum::<usize>(), 28);
    }

    #[test]
    fn change_of_basis_is_unitary() {
        for n in [8usize, 9, 12] {
            let mb = MomentumBlocks::new(Sector::Two, n).unwrap();
            let m = n * (n - 1) / 2;
            let mut u = DMatrix::<Complex64>::zeros(m, m);
            let mut col = 0;
            for q in 0..n {
                for ci in 0..mb.block_dim(q) {
                    let v = mb.basis_vector(q, ci);
                    for (row, x) in v.iter().enumerate() {
                        u[(row, col)] = *x;
                    }
                    col += 1;
                }
            }
            let gram = u.adjoint() * &u;
            let err = (gram - DMatrix::<Complex64>::identity(m, m))
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "N={n}: {err}");
        }
    }

    #[test]
    fn transforms_match_explicit_basis_and_round_trip() {
        let n = 10;
        let mb = MomentumBlocks::new(Sector::Two, n).unwrap();
        let m = 45;
        let psi: Vec<Complex64> = (0..m)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()))
            .collect();
        let blocks = mb.to_blocks(&psi).unwrap();
        for q in 0..n {
            for ci in 0..mb.block_dim(q) {
                let v = mb.basis_vector(q, ci);
                let expect: Complex64 = v.iter().zip(&psi).map(|(a, b)| a.conj() * b).sum();
                assert!((expect - blocks.block(q)[ci]).norm() < 1e-12);
            }
        }
        let back = mb.from_blocks(&blocks);
        for (a, b) in back.iter().zip(&psi) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(mb.to_blocks(&psi[1..]).is_err());
    }

    #[test]
    fn block_hamiltonian_matches_projection() {
        for n in [8usize, 9] {
            let p = ChainParams::new(n, 1.0, 0.8).with_field(0.1);
            let h = build_two_excitation_h(&p).unwrap();
            let mb = MomentumBlocks::new(Sector::Two, n).unwrap();
            let mut hv = vec![c(0.0); h.dimension];
            for q in 0..n {
                let blk = mb.block_hamiltonian(&h, q, 0.3).unwrap();
                for cj in 0..mb.block_dim(q) {
                    let v = mb.basis_vector(q, cj);
                    h.apply(&v, &mut hv);
                    for ci in 0..mb.block_dim(q) {
                        let w = mb.basis_vector(q, ci);
                        let mut e: Complex64 = w.iter().zip(&hv).map(|(a, b)| a.conj() * b).sum();
                        if ci == cj {
                            e -= 0.3;
                        }
                        assert!((e - blk[(ci, cj)]).norm() < 1e-12, "N={n} q={q}");
                    }
                }
            }
        }
    }
}
