//! One-period Floquet map `U(T) = Kick · exp(-iT·H_hc)` in a fixed sector.
//!
//! The free half-step is diagonalized once per parameter set, block by
//! block in total momentum; a period then costs one change of basis, two
//! dense products per block, the inverse change of basis, and the diagonal
//! kick.
//!
//! Kick convention: every flipped site at `n` picks up
//! `exp(-i·(B_Q/2)·(n - n0)²)`. The uniform part of the sector diagonal
//! (`2B + JΔ` or `4B + 2JΔ`) is dropped from the free step; it is a global
//! phase inside the sector.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::chain::{build_sector_h, pairs, ChainParams, HamiltonianBlock, Sector, State};
use crate::error::{Error, Result};
use crate::momentum::{BlockVector, MomentumBlocks};

/// Eigenvectors of one momentum block. Blocks are real symmetric in the
/// centre-phased basis; the complex variant is kept for completeness.
#[derive(Debug, Clone)]
pub enum BlockVectors {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

#[derive(Debug, Clone)]
pub struct BlockEigensystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: BlockVectors,
    /// `exp(-iT·E_k)`.
    propagator_phases: Vec<Complex64>,
}

impl BlockEigensystem {
    fn diagonalize(block: DMatrix<Complex64>, period: f64, label: usize) -> Result<Self> {
        let d = block.nrows();
        let scale = block.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let max_imag = block.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let (eigenvalues, eigenvectors) = if max_imag <= 1e-13 * scale {
            let real = block.map(|z| z.re);
            let eig = SymmetricEigen::try_new(real, 1e-15, 10_000)
                .ok_or(Error::Diagonalization { block: label })?;
            (
                eig.eigenvalues.iter().copied().collect::<Vec<_>>(),
                BlockVectors::Real(eig.eigenvectors),
            )
        } else {
            let eig = SymmetricEigen::try_new(block, 1e-15, 10_000)
                .ok_or(Error::Diagonalization { block: label })?;
            (
                eig.eigenvalues.iter().copied().collect::<Vec<_>>(),
                BlockVectors::Complex(eig.eigenvectors),
            )
        };
        if eigenvalues.len() != d || eigenvalues.iter().any(|e| !e.is_finite()) {
            return Err(Error::Diagonalization { block: label });
        }
        let propagator_phases = eigenvalues
            .iter()
            .map(|&e| Complex64::from_polar(1.0, -period * e))
            .collect();
        Ok(BlockEigensystem {
            eigenvalues,
            eigenvectors,
            propagator_phases,
        })
    }

    /// `c ← V · diag(exp(-iTE)) · V† · c`.
    fn propagate(&self, c: &mut [Complex64], tmp: &mut [Complex64]) {
        let d = c.len();
        match &self.eigenvectors {
            BlockVectors::Real(v) => {
                let data = v.as_slice();
                for k in 0..d {
                    let col = &data[k * d..(k + 1) * d];
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (x, y) in col.iter().zip(c.iter()) {
                        acc += y * *x;
                    }
                    tmp[k] = acc * self.propagator_phases[k];
                }
                c.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
                for k in 0..d {
                    let col = &data[k * d..(k + 1) * d];
                    let t = tmp[k];
                    for (z, x) in c.iter_mut().zip(col) {
                        *z += t * *x;
                    }
                }
            }
            BlockVectors::Complex(v) => {
                let data = v.as_slice();
                for k in 0..d {
                    let col = &data[k * d..(k + 1) * d];
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (x, y) in col.iter().zip(c.iter()) {
                        acc += x.conj() * y;
                    }
                    tmp[k] = acc * self.propagator_phases[k];
                }
                c.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
                for k in 0..d {
                    let col = &data[k * d..(k + 1) * d];
                    let t = tmp[k];
                    for (z, x) in c.iter_mut().zip(col) {
                        *z += t * x;
                    }
                }
            }
        }
    }
}

/// Diagonal of the kick factor over the sector basis.
pub fn build_kick_phases(params: &ChainParams, sector: Sector) -> Result<Vec<Complex64>> {
    params.validate()?;
    let half = params.b_q / 2.0;
    let site_phase = |n: usize| {
        let x = n as f64 - params.n0;
        x * x
    };
    Ok(match sector {
        Sector::One => (0..params.n_sites)
            .map(|n| Complex64::from_polar(1.0, -half * site_phase(n)))
            .collect(),
        Sector::Two => pairs(params.n_sites)
            .map(|(n1, n2)| Complex64::from_polar(1.0, -half * (site_phase(n1) + site_phase(n2))))
            .collect(),
    })
}

/// Scratch buffers for repeated application.
#[derive(Debug, Clone)]
pub struct Workspace {
    blocks: BlockVector,
    fft: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

#[derive(Debug)]
pub struct FloquetOperator {
    params: ChainParams,
    sector: Sector,
    kick_phases: Vec<Complex64>,
    momentum: MomentumBlocks,
    eigensystems: Vec<BlockEigensystem>,
    sector_shift: f64,
}

impl FloquetOperator {
    pub fn build(params: &ChainParams, sector: Sector) -> Result<Self> {
        let h = build_sector_h(params, sector)?;
        Self::from_hamiltonian(params, &h)
    }

    /// Builds from an already assembled sector Hamiltonian.
    pub fn from_hamiltonian(params: &ChainParams, h: &HamiltonianBlock) -> Result<Self> {
        params.validate()?;
        let sector = h.sector;
        let momentum = MomentumBlocks::new(sector, params.n_sites)?;
        let mut eigensystems = Vec::with_capacity(params.n_sites);
        for q in 0..params.n_sites {
            let block = momentum.block_hamiltonian(h, q, h.sector_shift)?;
            eigensystems.push(BlockEigensystem::diagonalize(block, params.period, q)?);
        }
        Ok(FloquetOperator {
            params: *params,
            sector,
            kick_phases: build_kick_phases(params, sector)?,
            momentum,
            eigensystems,
            sector_shift: h.sector_shift,
        })
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn dimension(&self) -> usize {
        self.kick_phases.len()
    }

    pub fn kick_phases(&self) -> &[Complex64] {
        &self.kick_phases
    }

    /// The uniform diagonal removed from the free step.
    pub fn sector_shift(&self) -> f64 {
        self.sector_shift
    }

    pub fn momentum_blocks(&self) -> &MomentumBlocks {
        &self.momentum
    }

    /// Per-block spectra of `H_hc - sector_shift`.
    pub fn eigensystems(&self) -> &[BlockEigensystem] {
        &self.eigensystems
    }

    /// All eigenvalues of `H_hc - sector_shift`, unsorted.
    pub fn free_spectrum(&self) -> Vec<f64> {
        self.eigensystems
            .iter()
            .flat_map(|e| e.eigenvalues.iter().copied())
            .collect()
    }

    pub fn workspace(&self) -> Workspace {
        let blocks = self
            .momentum
            .to_blocks(&vec![Complex64::new(0.0, 0.0); self.dimension()])
            .unwrap();
        let max_d = self.momentum.block_dims().into_iter().max().unwrap_or(1);
        Workspace {
            blocks,
            fft: vec![Complex64::new(0.0, 0.0); self.params.n_sites],
            tmp: vec![Complex64::new(0.0, 0.0); max_d],
        }
    }

    fn check(&self, state: &State) -> Result<()> {
        if state.sector() != self.sector || state.n_sites() != self.params.n_sites {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: state.amps().len(),
            });
        }
        Ok(())
    }

    /// `exp(-iT(H_hc - shift))` applied in place, without the kick.
    pub fn free_step_in_place(&self, state: &mut State, ws: &mut Workspace) -> Result<()> {
        self.check(state)?;
        self.momentum
            .to_blocks_into(state.amps(), &mut ws.blocks, &mut ws.fft)?;
        for (q, eig) in self.eigensystems.iter().enumerate() {
            let c = ws.blocks.block_mut(q);
            let d = c.len();
            eig.propagate(c, &mut ws.tmp[..d]);
        }
        self.momentum
            .from_blocks_into(&ws.blocks, state.amps_mut(), &mut ws.fft);
        Ok(())
    }

    /// One period in place.
    pub fn apply_in_place(&self, state: &mut State, ws: &mut Workspace) -> Result<()> {
        self.free_step_in_place(state, ws)?;
        for (a, k) in state.amps_mut().iter_mut().zip(&self.kick_phases) {
            *a *= k;
        }
        Ok(())
    }

    /// `U(T)·state`.
    pub fn apply(&self, state: &State) -> Result<State> {
        let mut out = state.clone();
        let mut ws = self.workspace();
        self.apply_in_place(&mut out, &mut ws)?;
        Ok(out)
    }

    /// Dense matrix of `U(T)`; intended for small rings.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        let dim = self.dimension();
        let mut u = DMatrix::<Complex64>::zeros(dim, dim);
        let mut ws = self.workspace();
        for col in 0..dim {
            let mut amps = vec![Complex64::new(0.0, 0.0); dim];
            amps[col] = Complex64::new(1.0, 0.0);
            let mut s = State::from_amplitudes(self.sector, self.params.n_sites, amps)?;
            self.apply_in_place(&mut s, &mut ws)?;
            for (row, z) in s.amps().iter().enumerate() {
                u[(row, col)] = *z;
            }
        }
        Ok(u)
    }
}

/// What an observer sees after each period.
#[derive(Debug, Clone, Copy)]
pub struct EvolutionRecord<'a> {
    /// Number of completed periods.
    pub period: usize,
    pub state: &'a State,
}

pub trait Observer {
    fn observe(&mut self, record: &EvolutionRecord<'_>) -> Result<()>;
}

impl<F> Observer for F
where
    F: FnMut(&EvolutionRecord<'_>) -> Result<()>,
{
    fn observe(&mut self, record: &EvolutionRecord<'_>) -> Result<()> {
        self(record)
    }
}

/// Applies `op` `n_periods` times, calling every observer at `t = 0` and
/// after each period. Returns the final state.
pub fn evolve(
    op: &FloquetOperator,
    initial: State,
    n_periods: usize,
    observers: &mut [&mut dyn Observer],
) -> Result<State> {
    op.check(&initial)?;
    let mut state = initial.normalized()?;
    let mut ws = op.workspace();
    for obs in observers.iter_mut() {
        obs.observe(&EvolutionRecord {
            period: 0,
            state: &state,
        })?;
    }
    for period in 1..=n_periods {
        op.apply_in_place(&mut state, &mut ws)?;
        for obs in observers.iter_mut() {
            obs.observe(&EvolutionRecord {
                period,
                state: &state,
            })?;
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::pair_index;

    fn max_dev_from_identity(u: &DMatrix<Complex64>) -> f64 {
        let g = u.adjoint() * u;
        let n = g.nrows();
        (g - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn kick_phases() {
        let p = ChainParams::new(12, 1.0, 1.0);
        assert!(build_kick_phases(&p, Sector::Two)
            .unwrap()
            .iter()
            .all(|z| (z - 1.0).norm() == 0.0));
        let p = p.with_kick(0.7, 5.0);
        let two = build_kick_phases(&p, Sector::Two).unwrap();
        let z = two[pair_index(5, 6, 12).unwrap()];
        assert!((z - Complex64::from_polar(1.0, -0.35)).norm() < 1e-15);
        assert!(two.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
        let one = build_kick_phases(&p, Sector::One).unwrap();
        for d in 1..5 {
            assert!((one[5 + d] - one[5 - d]).norm() < 1e-15);
        }
    }

    #[test]
    fn identity_dynamics() {
        let p = ChainParams::new(10, 0.0, 1.3);
        let op = FloquetOperator::build(&p, Sector::Two).unwrap();
        let s = State::flip_pair(10, 2, 7).unwrap();
        let out = op.apply(&s).unwrap();
        let ov = s.inner(&out).unwrap();
        assert!((ov.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unitary_in_both_sectors() {
        let p = ChainParams::new(12, 1.0, 1.0).with_kick(0.3, 5.0);
        let op = FloquetOperator::build(&p, Sector::Two).unwrap();
        assert!(max_dev_from_identity(&op.to_dense().unwrap()) < 1e-10);
        let op1 = FloquetOperator::build(&p, Sector::One).unwrap();
        assert!(max_dev_from_identity(&op1.to_dense().unwrap()) < 1e-12);
    }

    #[test]
    fn one_flip_free_spectrum_is_dispersion() {
        let p = ChainParams::new(16, 1.0, 0.4).with_field(0.2);
        let op = FloquetOperator::build(&p, Sector::One).unwrap();
        let mut got = op.free_spectrum();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut want: Vec<f64> = (0..16)
            .map(|q| -(2.0 * std::f64::consts::PI * q as f64 / 16.0).cos())
            .collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn evolve_calls_observers() {
        let p = ChainParams::new(8, 1.0, 0.5).with_kick(0.2, 3.0);
        let op = FloquetOperator::build(&p, Sector::Two).unwrap();
        let mut seen = Vec::new();
        let mut obs = |r: &EvolutionRecord<'_>| -> Result<()> {
            seen.push((r.period, r.state.norm()));
            Ok(())
        };
        evolve(&op, State::flip_pair(8, 3, 4).unwrap(), 0, &mut [&mut obs]).unwrap();
        assert_eq!(seen.len(), 1);
        seen.clear();
        let mut obs = |r: &EvolutionRecord<'_>| -> Result<()> {
            seen.push((r.period, r.state.norm()));
            Ok(())
        };
        evolve(&op, State::flip_pair(8, 3, 4).unwrap(), 5, &mut [&mut obs]).unwrap();
        assert_eq!(
            seen.iter().map(|s| s.0).collect::<Vec<_>>(),
            vec![0, 1, 2, 3, 4, 5]
        );
        assert!(seen.iter().all(|s| (s.1 - 1.0).abs() < 1e-10));
        assert!(evolve(&op, State::single_flip(8, 1).unwrap(), 1, &mut []).is_err());
    }
}
