//! Parameters, states and the fixed-magnetization blocks of the XXZ ring.
//!
//! Sites are labelled `0..N` internally. The two-flip sector uses ordered
//! pairs `(n1, n2)` with `n1 < n2`, indexed lexicographically by
//! [`pair_index`]. Energies are measured from the all-up reference state
//! `-J·Δ·N/4 - B·N`, which each block carries as `energy_offset`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Physical and kick parameters of the kicked XXZ ring (`ħ = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    /// Number of sites `N` (at least 4).
    pub n_sites: usize,
    /// Exchange coupling `J`.
    pub j: f64,
    /// Anisotropy `Δ`.
    pub delta: f64,
    /// Uniform field `B`.
    pub b: f64,
    /// Kick amplitude `B_Q`; doubles as the effective Planck constant of the
    /// scattering image.
    pub b_q: f64,
    /// Minimum of the parabolic kick field, in 0-based site units. May be
    /// half-integer.
    pub n0: f64,
    /// Kick period `T`.
    pub period: f64,
}

impl ChainParams {
    /// Unkicked ring with `B = 0`, `T = 1` and the kick minimum at the site
    /// labelled `N/2` in 1-based units.
    pub fn new(n_sites: usize, j: f64, delta: f64) -> Self {
        ChainParams {
            n_sites,
            j,
            delta,
            b: 0.0,
            b_q: 0.0,
            n0: (n_sites / 2) as f64 - 1.0,
            period: 1.0,
        }
    }

    pub fn with_kick(mut self, b_q: f64, n0: f64) -> Self {
        self.b_q = b_q;
        self.n0 = n0;
        self
    }

    pub fn with_field(mut self, b: f64) -> Self {
        self.b = b;
        self
    }

    pub fn with_period(mut self, period: f64) -> Self {
        self.period = period;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 4 {
            return Err(Error::InvalidParams(format!(
                "N must be at least 4, got {}",
                self.n_sites
            )));
        }
        if !(self.period > 0.0) || !self.period.is_finite() {
            return Err(Error::InvalidParams(format!(
                "T must be positive, got {}",
                self.period
            )));
        }
        if !(self.b_q >= 0.0) || !self.b_q.is_finite() {
            return Err(Error::InvalidParams(format!(
                "B_Q must be non-negative, got {}",
                self.b_q
            )));
        }
        for (name, v) in [
            ("J", self.j),
            ("Delta", self.delta),
            ("B", self.b),
            ("n0", self.n0),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// `J·T`, the Bessel argument of the free half-step.
    pub fn beta(&self) -> f64 {
        self.j * self.period
    }

    /// Number of ordered pairs `N(N-1)/2`.
    pub fn pair_count(&self) -> usize {
        self.n_sites * (self.n_sites - 1) / 2
    }

    /// Energy of the all-up state, `-J·Δ·N/4 - B·N`.
    pub fn reference_energy(&self) -> f64 {
        let n = self.n_sites as f64;
        -self.j * self.delta * n / 4.0 - self.b * n
    }
}

/// Number of flipped spins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sector {
    One,
    Two,
}

impl Sector {
    pub fn flips(self) -> usize {
        match self {
            Sector::One => 1,
            Sector::Two => 2,
        }
    }

    pub fn dimension(self, n_sites: usize) -> usize {
        match self {
            Sector::One => n_sites,
            Sector::Two => n_sites * (n_sites - 1) / 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sector::One => "one-excitation",
            Sector::Two => "two-excitation",
        }
    }
}

/// Index of the ordered pair `(n1, n2)`, `n1 < n2 < N`, in lexicographic
/// order.
pub fn pair_index(n1: usize, n2: usize, n_sites: usize) -> Result<usize> {
    if n1 >= n2 || n2 >= n_sites {
        return Err(Error::InvalidPair { n1, n2, n_sites });
    }
    Ok(pair_index_unchecked(n1, n2, n_sites))
}

#[inline]
pub(crate) fn pair_index_unchecked(n1: usize, n2: usize, n_sites: usize) -> usize {
    n1 * (2 * n_sites - n1 - 1) / 2 + (n2 - n1 - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_unindex(index: usize, n_sites: usize) -> Result<(usize, usize)> {
    let m = n_sites * n_sites.saturating_sub(1) / 2;
    if index >= m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: index,
        });
    }
    // Rows shrink by one per n1; walk them instead of solving the quadratic.
    let mut n1 = 0;
    let mut start = 0;
    loop {
        let row = n_sites - n1 - 1;
        if index < start + row {
            return Ok((n1, n1 + 1 + index - start));
        }
        start += row;
        n1 += 1;
    }
}

/// All ordered pairs in index order.
pub fn pairs(n_sites: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n_sites).flat_map(move |n1| (n1 + 1..n_sites).map(move |n2| (n1, n2)))
}

/// Unordered pair of ring sites, sorted.
#[inline]
pub(crate) fn sorted_pair(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Amplitudes over the one- or two-flip basis.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    sector: Sector,
    n_sites: usize,
    amps: Vec<Complex64>,
}

impl State {
    /// Wraps raw amplitudes. The vector length must match the sector
    /// dimension; normalization is left to the caller (see
    /// [`State::normalized`]).
    pub fn from_amplitudes(sector: Sector, n_sites: usize, amps: Vec<Complex64>) -> Result<Self> {
        let expected = sector.dimension(n_sites);
        if amps.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: amps.len(),
            });
        }
        Ok(State {
            sector,
            n_sites,
            amps,
        })
    }

    /// A single flip at `site`.
    pub fn single_flip(n_sites: usize, site: usize) -> Result<Self> {
        if site >= n_sites {
            return Err(Error::SiteOutOfRange { site, n_sites });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n_sites];
        amps[site] = Complex64::new(1.0, 0.0);
        Ok(State {
            sector: Sector::One,
            n_sites,
            amps,
        })
    }

    /// Two flips at distinct sites `a` and `b` (any order).
    pub fn flip_pair(n_sites: usize, a: usize, b: usize) -> Result<Self> {
        let (n1, n2) = sorted_pair(a, b);
        let idx = pair_index(n1, n2, n_sites)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); n_sites * (n_sites - 1) / 2];
        amps[idx] = Complex64::new(1.0, 0.0);
        Ok(State {
            sector: Sector::Two,
            n_sites,
            amps,
        })
    }

    /// Renormalizes to unit norm. Deviations above `1e-8` are logged.
    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParams(
                "state has zero or non-finite norm".into(),
            ));
        }
        if (norm - 1.0).abs() > 1e-8 {
            log::warn!("initial state norm {norm} renormalized to 1");
        }
        let inv = 1.0 / norm;
        self.amps.iter_mut().for_each(|a| *a *= inv);
        Ok(self)
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &State) -> Result<Complex64> {
        if self.sector != other.sector || self.amps.len() != other.amps.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amps.len(),
                found: other.amps.len(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Amplitude of `|n1, n2⟩` (two-flip sector, any order of sites).
    pub fn pair_amplitude(&self, a: usize, b: usize) -> Result<Complex64> {
        if self.sector != Sector::Two {
            return Err(Error::WrongSector {
                expected: "two-excitation",
            });
        }
        let (n1, n2) = sorted_pair(a, b);
        Ok(self.amps[pair_index(n1, n2, self.n_sites)?])
    }
}

/// A fixed-magnetization block of the ring Hamiltonian in sparse triplet form.
#[derive(Debug, Clone)]
pub struct HamiltonianBlock {
    pub dimension: usize,
    /// `(row, col, value)`, sorted by row then column, duplicates merged.
    pub entries: Vec<(usize, usize, f64)>,
    pub sector: Sector,
    /// Energy of the all-up state; block eigenvalues are measured from it.
    pub energy_offset: f64,
    /// The uniform part of the diagonal (`2B + JΔ` or `4B + 2JΔ`). It only
    /// adds a global phase inside the sector and is removed before evolving.
    pub sector_shift: f64,
    row_start: Vec<usize>,
}

impl HamiltonianBlock {
    fn from_triplets(
        dimension: usize,
        mut entries: Vec<(usize, usize, f64)>,
        sector: Sector,
        energy_offset: f64,
        sector_shift: f64,
    ) -> Self {
        entries.sort_by_key(|a| (a.0, a.1));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        let mut row_start = vec![0; dimension + 1];
        for &(r, _, _) in &merged {
            row_start[r + 1] += 1;
        }
        for i in 0..dimension {
            row_start[i + 1] += row_start[i];
        }
        HamiltonianBlock {
            dimension,
            entries: merged,
            sector,
            energy_offset,
            sector_shift,
            row_start,
        }
    }

    /// Entries of one row as `(col, value)`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries[self.row_start[r]..self.row_start[r + 1]]
            .iter()
            .map(|&(_, c, v)| (c, v))
    }

    /// `y = (H - shift)·x`.
    pub fn apply_shifted(&self, x: &[Complex64], y: &mut [Complex64], shift: f64) {
        for r in 0..self.dimension {
            let mut acc = -x[r] * shift;
            for (c, v) in self.row(r) {
                acc += x[c] * v;
            }
            y[r] = acc;
        }
    }

    /// `y = H·x`.
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.apply_shifted(x, y, 0.0)
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.dimension, self.dimension);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    /// Gershgorin bounds on the spectrum.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for r in 0..self.dimension {
            let mut diag = 0.0;
            let mut radius = 0.0;
            for (c, v) in self.row(r) {
                if c == r {
                    diag += v;
                } else {
                    radius += v.abs();
                }
            }
            lo = lo.min(diag - radius);
            hi = hi.max(diag + radius);
        }
        (lo, hi)
    }

    pub fn max_row_degree(&self) -> usize {
        (0..self.dimension)
            .map(|r| self.row_start[r + 1] - self.row_start[r])
            .max()
            .unwrap_or(0)
    }
}

/// Single-flip block: hopping `-J/2` to both ring neighbours, diagonal
/// `2B + JΔ`, so the eigenvalues are `2B + J(Δ - cos κ)`.
pub fn build_one_excitation_h(params: &ChainParams) -> Result<HamiltonianBlock> {
    params.validate()?;
    let n = params.n_sites;
    let hop = -params.j / 2.0;
    let diag = 2.0 * params.b + params.j * params.delta;
    let mut entries = Vec::with_capacity(3 * n);
    for site in 0..n {
        entries.push((site, site, diag));
        entries.push((site, (site + 1) % n, hop));
        entries.push((site, (site + n - 1) % n, hop));
    }
    Ok(HamiltonianBlock::from_triplets(
        n,
        entries,
        Sector::One,
        params.reference_energy(),
        diag,
    ))
}

/// Whether two sites are ring neighbours, including the wrap pair `(0, N-1)`.
#[inline]
pub fn adjacent(n1: usize, n2: usize, n_sites: usize) -> bool {
    let (a, b) = sorted_pair(n1, n2);
    b - a == 1 || (a == 0 && b == n_sites - 1)
}

/// Two-flip block over ordered pairs. Each flip hops by one site with
/// amplitude `-J/2`, never onto the other flip; the diagonal is
/// `4B + 2JΔ` lowered by `JΔ` for neighbouring flips.
pub fn build_two_excitation_h(params: &ChainParams) -> Result<HamiltonianBlock> {
    params.validate()?;
    let n = params.n_sites;
    let hop = -params.j / 2.0;
    let shift = 4.0 * params.b + 2.0 * params.j * params.delta;
    let mut entries = Vec::with_capacity(5 * params.pair_count());
    for (n1, n2) in pairs(n) {
        let row = pair_index_unchecked(n1, n2, n);
        let diag = if adjacent(n1, n2, n) {
            shift - params.j * params.delta
        } else {
            shift
        };
        entries.push((row, row, diag));
        for (moving, other) in [(n1, n2), (n2, n1)] {
            for target in [(moving + 1) % n, (moving + n - 1) % n] {
                if target == other {
                    continue;
                }
                let (a, b) = sorted_pair(target, other);
                entries.push((row, pair_index_unchecked(a, b, n), hop));
            }
        }
    }
    Ok(HamiltonianBlock::from_triplets(
        params.pair_count(),
        entries,
        Sector::Two,
        params.reference_energy(),
        shift,
    ))
}

/// Builds the block for either sector.
pub fn build_sector_h(params: &ChainParams, sector: Sector) -> Result<HamiltonianBlock> {
    match sector {
        Sector::One => build_one_excitation_h(params),
        Sector::Two => build_two_excitation_h(params),
    }
}
