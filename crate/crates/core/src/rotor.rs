//! Kicked-rotor images of the spin chain: the classical standard map, the
//! quantum kicked rotor (QKR) in a plane-wave basis, and the parameter
//! dictionary that maps chain parameters onto rotor parameters.
//!
//! Conventions. Standard map is kick-then-drift, `p' = p + K sin x`,
//! `x' = x + p' (mod 2π)`. The QKR step is `U = exp(-iτl²/2)·exp(+i(K/τ)cos x)`,
//! whose plane-wave elements are `exp(-iτl²/2)·i^{l'-l}·J_{l'-l}(K/τ)`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftPlanner};

use crate::bessel::{bessel_j, i_pow};
use crate::chain::ChainParams;
use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorParams {
    /// Stochasticity parameter `K = kT`.
    pub k: f64,
    /// Effective Planck constant.
    pub tau: f64,
    /// Number of plane waves; momenta run over `[-basis/2, basis/2)`.
    pub basis_size: usize,
}

impl RotorParams {
    pub fn new(k: f64, tau: f64, basis_size: usize) -> Self {
        RotorParams { k, tau, basis_size }
    }

    /// Kick strength in the plane-wave basis, `K/τ`.
    pub fn kick_strength(&self) -> f64 {
        self.k / self.tau
    }

    fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0) || !self.k.is_finite() {
            return Err(Error::InvalidParams(format!(
                "rotor needs tau > 0 and finite K (K={}, tau={})",
                self.k, self.tau
            )));
        }
        if self.basis_size < 16 {
            return Err(Error::InvalidParams(format!(
                "rotor basis {} too small",
                self.basis_size
            )));
        }
        Ok(())
    }
}

/// One kick-then-drift step of the standard map.
pub fn standard_map_step(x: f64, p: f64, k: f64) -> (f64, f64) {
    let p1 = p + k * x.sin();
    ((x + p1).rem_euclid(TWO_PI), p1)
}

/// Jacobian `∂(x', p')/∂(x, p)` of one step.
pub fn standard_map_jacobian(x: f64, k: f64) -> [[f64; 2]; 2] {
    let c = k * x.cos();
    [[1.0 + c, 1.0], [c, 1.0]]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceleratorMode {
    /// Least-squares slope of `p_n` against `n`.
    pub drift: f64,
    /// Winding number `j` when the drift sits within 10% of `2πj`.
    pub j: Option<u32>,
    /// RMS deviation of `p_n` from the fitted line.
    pub residual: f64,
}

/// Fits `p_n` over `n_steps` iterations and flags an accelerator mode when the
/// drift is within 10% of `2πj` (j ≥ 1) and the trajectory stays on the line
/// to within a fraction of a momentum cell.
pub fn detect_accelerator_mode(k: f64, x0: f64, p0: f64, n_steps: usize) -> AcceleratorMode {
    let n_steps = n_steps.max(10);
    let mut ps = Vec::with_capacity(n_steps + 1);
    let (mut x, mut p) = (x0.rem_euclid(TWO_PI), p0);
    ps.push(p);
    for _ in 0..n_steps {
        (x, p) = standard_map_step(x, p, k);
        ps.push(p);
    }
    let (slope, intercept) = linear_fit(&ps);
    let residual = (ps
        .iter()
        .enumerate()
        .map(|(n, v)| (v - slope * n as f64 - intercept).powi(2))
        .sum::<f64>()
        / ps.len() as f64)
        .sqrt();
    let j = (slope.abs() / TWO_PI).round();
    let flagged = j >= 1.0 && (slope.abs() - TWO_PI * j).abs() <= 0.1 * TWO_PI * j && residual < PI;
    AcceleratorMode {
        drift: slope,
        j: flagged.then_some(j as u32),
        residual,
    }
}

/// Scans a grid of initial conditions `(x, p0)` and returns the mode with the
/// largest winding number found, if any.
pub fn scan_accelerator_modes(
    k: f64,
    p0: f64,
    n_grid: usize,
    n_steps: usize,
) -> Option<(f64, AcceleratorMode)> {
    let mut best: Option<(f64, AcceleratorMode)> = None;
    for i in 0..n_grid {
        let x = TWO_PI * (i as f64 + 0.5) / n_grid as f64;
        let m = detect_accelerator_mode(k, x, p0, n_steps);
        if let Some(j) = m.j {
            if best.is_none_or(|(_, b)| b.j.unwrap_or(0) < j) {
                best = Some((x, m));
            }
        }
    }
    best
}

/// Least-squares line through `(n, y_n)`; returns `(slope, intercept)`.
pub fn linear_fit(y: &[f64]) -> (f64, f64) {
    let x: Vec<f64> = (0..y.len()).map(|n| n as f64).collect();
    linear_fit_xy(&x, y)
}

pub fn linear_fit_xy(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

/// Least-squares parabola `a + b·x + c·x²`; returns `([a, b, c], R²)`.
pub fn quadratic_fit_xy(x: &[f64], y: &[f64]) -> ([f64; 3], f64) {
    let mut m = nalgebra::Matrix3::<f64>::zeros();
    let mut r = nalgebra::Vector3::<f64>::zeros();
    for (&xi, &yi) in x.iter().zip(y) {
        let f = [1.0, xi, xi * xi];
        for a in 0..3 {
            r[a] += f[a] * yi;
            for b in 0..3 {
                m[(a, b)] += f[a] * f[b];
            }
        }
    }
    let c = m.lu().solve(&r).unwrap_or_else(nalgebra::Vector3::zeros);
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| (yi - c[0] - c[1] * xi - c[2] * xi * xi).powi(2))
        .sum();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    ([c[0], c[1], c[2]], r2)
}

/// `⟨l|U|l'⟩ = exp(-iτl²/2)·i^{l'-l}·J_{l'-l}(K/τ)`.
pub fn qkr_propagator_element(l: i64, lp: i64, params: &RotorParams) -> Complex64 {
    let tau = params.tau;
    let phase = Complex64::from_polar(1.0, -0.5 * tau * (l * l) as f64);
    phase * i_pow(lp - l) * bessel_j(lp - l, params.kick_strength())
}

/// FFT-based QKR stepper over `basis_size` plane waves.
pub struct QkrPropagator {
    params: RotorParams,
    kick: Vec<Complex64>,
    free: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl std::fmt::Debug for QkrPropagator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QkrPropagator")
            .field("params", &self.params)
            .finish()
    }
}

impl QkrPropagator {
    pub fn new(params: RotorParams) -> Result<Self> {
        params.validate()?;
        let m = params.basis_size;
        let ks = params.kick_strength();
        let kick = (0..m)
            .map(|j| Complex64::from_polar(1.0, ks * (TWO_PI * j as f64 / m as f64).cos()))
            .collect();
        let mut out = QkrPropagator {
            params,
            kick,
            free: Vec::new(),
            forward: FftPlanner::new().plan_fft_forward(m),
            inverse: FftPlanner::new().plan_fft_inverse(m),
            scratch: Vec::new(),
        };
        out.free = (0..m)
            .map(|i| {
                let l = out.momentum(i) as f64;
                Complex64::from_polar(1.0, -0.5 * params.tau * l * l)
            })
            .collect();
        let len = out
            .forward
            .get_inplace_scratch_len()
            .max(out.inverse.get_inplace_scratch_len());
        out.scratch = vec![Complex64::new(0.0, 0.0); len];
        Ok(out)
    }

    pub fn params(&self) -> &RotorParams {
        &self.params
    }

    /// Momentum `l` stored at array slot `i` (FFT ordering).
    pub fn momentum(&self, i: usize) -> i64 {
        let m = self.params.basis_size;
        if i < m.div_ceil(2) {
            i as i64
        } else {
            i as i64 - m as i64
        }
    }

    /// Array slot of momentum `l`.
    pub fn slot(&self, l: i64) -> Result<usize> {
        let m = self.params.basis_size as i64;
        if l < -(m / 2) || l >= m - m / 2 {
            return Err(Error::InvalidParams(format!(
                "momentum {l} outside basis of {m}"
            )));
        }
        Ok(l.rem_euclid(m) as usize)
    }

    /// Plane wave `|l⟩`.
    pub fn plane_wave(&self, l: i64) -> Result<Vec<Complex64>> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.params.basis_size];
        v[self.slot(l)?] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    /// One period in place.
    pub fn step(&mut self, state: &mut [Complex64]) {
        let m = self.params.basis_size as f64;
        self.inverse.process_with_scratch(state, &mut self.scratch);
        for (a, k) in state.iter_mut().zip(&self.kick) {
            *a *= k;
        }
        self.forward.process_with_scratch(state, &mut self.scratch);
        for (a, f) in state.iter_mut().zip(&self.free) {
            *a *= f / m;
        }
    }

    /// `⟨(lτ)²⟩`.
    pub fn second_moment(&self, state: &[Complex64]) -> f64 {
        let tau = self.params.tau;
        state
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let p = self.momentum(i) as f64 * tau;
                a.norm_sqr() * p * p
            })
            .sum()
    }

    /// Population in the outer eighth of the basis on either side.
    pub fn edge_population(&self, state: &[Complex64]) -> f64 {
        let m = self.params.basis_size as i64;
        let edge = m / 2 - m / 8;
        state
            .iter()
            .enumerate()
            .filter(|(i, _)| self.momentum(*i).abs() >= edge)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Momentum distribution ordered by `l` from `-basis/2`.
    pub fn distribution(&self, state: &[Complex64]) -> Vec<(i64, f64)> {
        let mut v: Vec<(i64, f64)> = state
            .iter()
            .enumerate()
            .map(|(i, a)| (self.momentum(i), a.norm_sqr()))
            .collect();
        v.sort_by_key(|e| e.0);
        v
    }
}

const EDGE_LIMIT: f64 = 1e-10;

/// `⟨(lτ)²⟩` at periods `0..=n_periods` from `initial` (FFT slot ordering).
pub fn qkr_moment_series(
    params: &RotorParams,
    initial: &[Complex64],
    n_periods: usize,
) -> Result<Vec<f64>> {
    let mut prop = QkrPropagator::new(*params)?;
    if initial.len() != params.basis_size {
        return Err(Error::DimensionMismatch {
            expected: params.basis_size,
            found: initial.len(),
        });
    }
    let mut state = initial.to_vec();
    let mut out = Vec::with_capacity(n_periods + 1);
    out.push(prop.second_moment(&state));
    for period in 1..=n_periods {
        prop.step(&mut state);
        let edge = prop.edge_population(&state);
        if edge > EDGE_LIMIT {
            return Err(Error::BasisOverflow { period, edge });
        }
        out.push(prop.second_moment(&state));
    }
    Ok(out)
}

/// Momentum distribution averaged over periods `from..=to`, starting from
/// `|l0⟩`. Returned as `(l, probability)` sorted by `l`.
pub fn qkr_time_averaged_distribution(
    params: &RotorParams,
    l0: i64,
    from: usize,
    to: usize,
) -> Result<Vec<(i64, f64)>> {
    let mut prop = QkrPropagator::new(*params)?;
    let mut state = prop.plane_wave(l0)?;
    let mut acc = vec![0.0; params.basis_size];
    for period in 1..=to {
        prop.step(&mut state);
        let edge = prop.edge_population(&state);
        if edge > EDGE_LIMIT {
            return Err(Error::BasisOverflow { period, edge });
        }
        if period >= from {
            for (s, a) in acc.iter_mut().zip(&state) {
                *s += a.norm_sqr();
            }
        }
    }
    let count = (to + 1 - from.min(to + 1)) as f64;
    let mut v: Vec<(i64, f64)> = acc
        .iter()
        .enumerate()
        .map(|(i, s)| (prop.momentum(i), s / count))
        .collect();
    v.sort_by_key(|e| e.0);
    Ok(v)
}

/// Classical ensemble `⟨p²⟩` per step for `x` uniform on `[0, 2π)` and `p = p0`.
pub fn classical_moment_series(
    k: f64,
    p0: f64,
    n_traj: usize,
    n_steps: usize,
    seed: u64,
) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs: Vec<f64> = (0..n_traj).map(|_| rng.random::<f64>() * TWO_PI).collect();
    let mut ps = vec![p0; n_traj];
    let mut out = Vec::with_capacity(n_steps + 1);
    let moment = |ps: &[f64]| ps.iter().map(|p| p * p).sum::<f64>() / n_traj as f64;
    out.push(moment(&ps));
    for _ in 0..n_steps {
        for (x, p) in xs.iter_mut().zip(ps.iter_mut()) {
            (*x, *p) = standard_map_step(*x, *p, k);
        }
        out.push(moment(&ps));
    }
    out
}

/// Rotor parameters of the scattering (`s`) and bound-pair (`b`) images.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageDictionary {
    pub k_s: f64,
    pub tau_s: f64,
    pub k_b: Option<f64>,
    pub tau_b: Option<f64>,
    delta: f64,
}

impl ImageDictionary {
    /// Accelerator-mode hop of a single flip, `2πj/B_Q` sites per period.
    pub fn am_hop(&self, j: u32) -> f64 {
        TWO_PI * j as f64 / self.tau_s
    }

    /// Bound-pair hop quoted for the slow mode, `π/(ΔB_Q)` sites per period.
    pub fn am2_hop(&self) -> Option<f64> {
        self.k_b.map(|_| PI / (self.delta * self.tau_s))
    }

    /// Hop of a `j` accelerator mode in the bound image, `2πj/τ_b` pair sites
    /// per period.
    pub fn bound_image_hop(&self, j: u32) -> Option<f64> {
        self.tau_b.map(|t| TWO_PI * j as f64 / t)
    }
}

/// `K_s = JT·B_Q`, `τ_s = B_Q`, and for `Δ > 0`: `K_b = K_s/Δ`, `τ_b = 2B_Q`.
pub fn image_parameters(params: &ChainParams) -> ImageDictionary {
    let k_s = params.j * params.period * params.b_q;
    let tau_s = params.b_q;
    let bound = params.delta > 0.0;
    ImageDictionary {
        k_s,
        tau_s,
        k_b: bound.then(|| k_s / params.delta),
        tau_b: bound.then_some(2.0 * params.b_q),
        delta: params.delta,
    }
}
