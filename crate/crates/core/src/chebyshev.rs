//! Chebyshev-polynomial propagator `exp(-it(H - shift))·ψ`.
//!
//! Independent of the eigendecomposition path: only sparse products with the
//! Hamiltonian block are used.

use num_complex::Complex64;

use crate::bessel::bessel_j_sequence;
use crate::chain::HamiltonianBlock;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct ChebyshevOptions {
    /// Bound on the discarded tail `2 Σ_{k>K} |J_k(a·t)|`.
    pub tolerance: f64,
    /// Spectral interval of `H`; Gershgorin bounds when `None`.
    pub bounds: Option<(f64, f64)>,
    /// Constant subtracted from `H` before exponentiating.
    pub shift: f64,
}

impl Default for ChebyshevOptions {
    fn default() -> Self {
        ChebyshevOptions {
            tolerance: 1e-12,
            bounds: None,
            shift: 0.0,
        }
    }
}

/// Polynomial degree needed for the requested tail, and the tail achieved.
fn truncation(z: f64, tolerance: f64, cap: usize) -> (Vec<f64>, usize, f64) {
    let j = bessel_j_sequence(z, cap + 1);
    // suffix[k] = 2 Σ_{m ≥ k} |J_m|
    let mut suffix = vec![0.0; cap + 3];
    for k in (0..=cap + 1).rev() {
        suffix[k] = suffix[k + 1] + 2.0 * j[k].abs();
    }
    for k in 0..=cap {
        if suffix[k + 1] < tolerance {
            return (j, k, suffix[k + 1]);
        }
    }
    (j, cap, suffix[cap + 1])
}

/// `exp(-it(H - shift))·state`.
pub fn chebyshev_apply(
    h: &HamiltonianBlock,
    state: &[Complex64],
    t: f64,
    options: &ChebyshevOptions,
) -> Result<Vec<Complex64>> {
    if state.len() != h.dimension {
        return Err(Error::DimensionMismatch {
            expected: h.dimension,
            found: state.len(),
        });
    }
    let (lo, hi) = options.bounds.unwrap_or_else(|| h.spectral_bounds());
    let (lo, hi) = (lo - options.shift, hi - options.shift);
    let a = 0.5 * (hi - lo);
    let b = 0.5 * (hi + lo);
    let centre_phase = Complex64::from_polar(1.0, -b * t);
    if a <= 0.0 || t == 0.0 {
        return Ok(state.iter().map(|z| z * centre_phase).collect());
    }
    let z = a * t.abs();
    let radius = lo.abs().max(hi.abs());
    let cap = (4.0 * radius * t.abs()).ceil() as usize + 64;
    let (jk, degree, tail) = truncation(z, options.tolerance, cap.max(z.ceil() as usize + 64));
    if tail >= options.tolerance {
        return Err(Error::ChebyshevNonConvergence {
            cap,
            tolerance: options.tolerance,
            tail,
        });
    }

    // H̃ = (H - shift - b) / a
    let total_shift = options.shift + b;
    let scaled = |x: &[Complex64], y: &mut [Complex64]| {
        h.apply_shifted(x, y, total_shift);
        y.iter_mut().for_each(|v| *v /= a);
    };
    // (-i)^k, with the sign of t folded in.
    let step = if t > 0.0 {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::new(0.0, 1.0)
    };

    let n = state.len();
    let mut prev: Vec<Complex64> = state.to_vec();
    let mut cur = vec![Complex64::new(0.0, 0.0); n];
    let mut next = vec![Complex64::new(0.0, 0.0); n];
    let mut out: Vec<Complex64> = state.iter().map(|v| v * jk[0]).collect();
    if degree >= 1 {
        scaled(&prev, &mut cur);
        let c = step * (2.0 * jk[1]);
        out.iter_mut().zip(&cur).for_each(|(o, v)| *o += c * v);
    }
    let mut coeff_phase = step;
    for k in 2..=degree {
        scaled(&cur, &mut next);
        for (nx, pv) in next.iter_mut().zip(&prev) {
            *nx = 2.0 * *nx - pv;
        }
        coeff_phase *= step;
        let c = coeff_phase * (2.0 * jk[k]);
        out.iter_mut().zip(&next).for_each(|(o, v)| *o += c * v);
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    out.iter_mut().for_each(|v| *v *= centre_phase);
    Ok(out)
}
