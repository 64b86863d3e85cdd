//! Two-magnon Bethe ansatz on the ring.
//!
//! Amplitudes `a(n1,n2) = e^{i(κ1 n1 + κ2 n2 + θ/2)} + e^{i(κ1 n2 + κ2 n1 - θ/2)}`
//! solve the two-flip block when the contact condition
//!
//! ```text
//! e^{iθ}(1 + e^{iK} - 2Δe^{iκ2}) + (1 + e^{iK} - 2Δe^{iκ1}) = 0,   K = κ1 + κ2
//! ```
//!
//! holds together with the ring quantization `Nκ1 - θ = 2πλ1`,
//! `Nκ2 + θ = 2πλ2`. Writing `κ1,2 = K/2 ± q` with `K = 2πP/N` and
//! `c = cos(K/2)`, the contact condition becomes
//! `(-1)^P e^{iNq}(c - Δe^{-iq}) + (c - Δe^{iq}) = 0`. Real `q` are scattering
//! states; `q = iv` (or `π + iv` when `c < 0`) are bound pairs, handled through
//! `w = e^{-v}` so that nothing overflows.
//!
//! The enumerator scans every total-momentum block, counts roots against the
//! block dimension, and reports any shortfall instead of filling it in.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use crate::chain::{build_two_excitation_h, pairs, ChainParams, Sector, State};
use crate::error::{Error, Result};
use crate::momentum::MomentumBlocks;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest ring handled by [`enumerate_spectrum`].
pub const MAX_ENUMERATION_SITES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootClass {
    Scattering,
    Bound,
    Free,
}

impl RootClass {
    pub fn name(self) -> &'static str {
        match self {
            RootClass::Scattering => "scattering",
            RootClass::Bound => "bound",
            RootClass::Free => "free",
        }
    }
}

/// Real parametrization of a bound pair in block `P`:
/// relative amplitude `σ^r (w^r + s·w^{N-r})` with `σ = -1` when `cos(K/2) < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundForm {
    /// `e^{-v}`, in `[0, 1)`.
    pub w: f64,
    /// `w - |cos(K/2)|/Δ`, the finite-ring correction to the string.
    pub string_offset: f64,
    s: f64,
    flipped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetheRoot {
    pub lambda1: usize,
    pub lambda2: usize,
    pub kappa1: Complex64,
    pub kappa2: Complex64,
    pub theta: Complex64,
    pub class: RootClass,
    /// Largest violation of the contact and quantization conditions.
    pub residual: f64,
    /// Total-momentum index `P` in `0..N`, `K = 2πP/N`.
    pub block: usize,
    pub bound: Option<BoundForm>,
}

impl BetheRoot {
    /// `κ_c = 2π(λ1 + λ2)/N`.
    pub fn kappa_c(&self, n_sites: usize) -> f64 {
        2.0 * PI * (self.lambda1 + self.lambda2) as f64 / n_sites as f64
    }

    /// `κ_r = (π(λ1 - λ2) + θ)/N`.
    pub fn kappa_r(&self, n_sites: usize) -> Complex64 {
        (PI * (self.lambda1 as f64 - self.lambda2 as f64) + self.theta) / n_sites as f64
    }

    /// Total momentum reduced to `[0, 2π)`.
    pub fn total_momentum(&self, n_sites: usize) -> f64 {
        2.0 * PI * self.block as f64 / n_sites as f64
    }
}

fn half_cos(p: usize, n: usize) -> f64 {
    let c = (PI * p as f64 / n as f64).cos();
    if c.abs() < 1e-14 {
        0.0
    } else {
        c
    }
}

fn parity(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `g(w) = c' - Δw + s c' w^N - sΔ w^{N-1}`.
fn bound_polynomial(w: f64, cp: f64, delta: f64, s: f64, n: usize) -> f64 {
    let wn1 = w.powi(n as i32 - 1);
    cp - delta * w + s * wn1 * (cp * w - delta)
}

fn contact_residual(k1: Complex64, k2: Complex64, theta: Complex64, delta: f64) -> f64 {
    let ek = (I * (k1 + k2)).exp();
    let a = |k: Complex64| 1.0 + ek - 2.0 * delta * (I * k).exp();
    if theta.im >= 0.0 {
        ((I * theta).exp() * a(k2) + a(k1)).norm()
    } else {
        (a(k2) + (-I * theta).exp() * a(k1)).norm()
    }
}

fn label_of(x: Complex64) -> (i64, f64) {
    let v = x / (2.0 * PI);
    let l = v.re.round();
    (l as i64, ((v.re - l).powi(2) + v.im.powi(2)).sqrt())
}

/// Assembles a root from quasi-momenta and phase, deriving the Bethe numbers.
fn finalize(
    params: &ChainParams,
    block: usize,
    k1: Complex64,
    k2: Complex64,
    theta: Complex64,
    bound: Option<BoundForm>,
) -> BetheRoot {
    let n = params.n_sites;
    let nf = n as f64;
    let (l1, e1) = label_of(nf * k1 - theta);
    let (l2, e2) = label_of(nf * k2 + theta);
    let contact = match bound {
        Some(b) => {
            let cp = half_cos(block, n).abs();
            2.0 * bound_polynomial(b.w, cp, params.delta, b.s, n).abs()
        }
        None => contact_residual(k1, k2, theta, params.delta),
    };
    let residual = contact.max(e1 * 2.0 * PI).max(e2 * 2.0 * PI);
    let l1 = l1.rem_euclid(n as i64) as usize;
    let l2 = l2.rem_euclid(n as i64) as usize;
    let class = if bound.is_some() {
        RootClass::Bound
    } else if params.delta == 0.0 {
        RootClass::Free
    } else {
        RootClass::Scattering
    };
    if l1 <= l2 {
        BetheRoot {
            lambda1: l1,
            lambda2: l2,
            kappa1: k1,
            kappa2: k2,
            theta,
            class,
            residual,
            block,
            bound,
        }
    } else {
        BetheRoot {
            lambda1: l2,
            lambda2: l1,
            kappa1: k2,
            kappa2: k1,
            theta: -theta,
            class,
            residual,
            block,
            bound,
        }
    }
}

fn wave_root(params: &ChainParams, block: usize, q: f64, theta: f64) -> BetheRoot {
    let half_k = PI * block as f64 / params.n_sites as f64;
    finalize(
        params,
        block,
        Complex64::new(half_k + q, 0.0),
        Complex64::new(half_k - q, 0.0),
        Complex64::new(theta, 0.0),
        None,
    )
}

fn bound_root(params: &ChainParams, block: usize, form: BoundForm) -> BetheRoot {
    let n = params.n_sites;
    let half_k = PI * block as f64 / n as f64;
    let v = -(form.w.max(1e-300)).ln();
    let q = Complex64::new(if form.flipped { PI } else { 0.0 }, v);
    let d = (block % 2) as f64;
    let theta = n as f64 * q + PI * d;
    let k1 = half_k + q;
    finalize(params, block, k1, k1.conj(), theta, Some(form))
}

/// Scattering phase for real `q`: `θ = 2·arg(c - Δe^{iq}) + π`, in `[0, 2π)`.
fn scattering_phase(q: f64, c: f64, delta: f64) -> f64 {
    let phi = (-delta * q.sin()).atan2(c - delta * q.cos());
    (2.0 * phi + PI).rem_euclid(2.0 * PI)
}

/// Real roots `q ∈ (0, π)` of `Nq - 2φ(q) - π(P+1) ∈ 2πℤ`.
fn scattering_momenta(params: &ChainParams, block: usize) -> Vec<f64> {
    let n = params.n_sites;
    let nf = n as f64;
    let c = half_cos(block, n);
    let delta = params.delta;
    if delta == 0.0 {
        // q = π(P + 1 + 2m)/N
        let mut out = Vec::new();
        let p = block as i64;
        for m in -(n as i64)..=(n as i64) {
            let num = p + 1 + 2 * m;
            if num > 0 && num < n as i64 {
                out.push(PI * num as f64 / nf);
            }
        }
        return out;
    }
    let u = |q: f64| {
        let phi = (-delta * q.sin()).atan2(c - delta * q.cos());
        (nf * q - 2.0 * phi - PI * (block as f64 + 1.0)) / (2.0 * PI)
    };
    let grid = (256 * n).max(8192);
    let eps = 1e-10;
    let qs = |i: usize| eps + (PI - 2.0 * eps) * i as f64 / grid as f64;
    let mut out = Vec::new();
    let mut q_prev = qs(0);
    let mut u_prev = u(q_prev);
    for i in 1..=grid {
        let q_next = qs(i);
        let u_next = u(q_next);
        let (lo, hi) = if u_prev < u_next {
            (u_prev, u_next)
        } else {
            (u_next, u_prev)
        };
        // levels m with lo < m ≤ hi
        let mut m = lo.floor() + 1.0;
        while m <= hi {
            let (mut a, mut b) = (q_prev, q_next);
            let fa = u(a) - m;
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let fm = u(mid) - m;
                if (fm < 0.0) == (fa < 0.0) {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            out.push(0.5 * (a + b));
            m += 1.0;
        }
        q_prev = q_next;
        u_prev = u_next;
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    out
}

/// Solves `g(w) = 0` on `[0, 1)` near the string value `c'/Δ`.
fn bound_forms(params: &ChainParams, block: usize) -> Vec<BoundForm> {
    let n = params.n_sites;
    let delta = params.delta;
    if delta <= 0.0 {
        return Vec::new();
    }
    let c = half_cos(block, n);
    let cp = c.abs();
    let flipped = c < 0.0;
    let s = if flipped {
        parity(block + n)
    } else {
        parity(block)
    };
    let w0 = cp / delta;
    let make = |w: f64| BoundForm {
        w,
        string_offset: w - w0,
        s,
        flipped,
    };
    if cp == 0.0 {
        return vec![make(0.0)];
    }
    let g = |w: f64| bound_polynomial(w, cp, delta, s, n);
    let mut found: Vec<f64> = Vec::new();
    // Fixed point w = w0 + s w^{N-1}(c'w - Δ)/Δ converges whenever the string
    // is well inside the unit interval.
    if w0 < 1.0 {
        let mut w = w0;
        for _ in 0..500 {
            let next = w0 + s * w.powi(n as i32 - 1) * (cp * w - delta) / delta;
            if !(0.0..1.0).contains(&next) {
                break;
            }
            let done = (next - w).abs() <= 1e-17 * w.max(1e-300);
            w = next;
            if done {
                break;
            }
        }
        if (0.0..1.0).contains(&w) && g(w).abs() < 1e-13 {
            found.push(w);
        }
    }
    // Sign-change scan for roots the iteration cannot reach.
    let grid = 4096;
    let top = 1.0 - 1e-7;
    let ws = |i: usize| top * i as f64 / grid as f64;
    for i in 0..grid {
        let (mut a, mut b) = (ws(i), ws(i + 1));
        let (ga, gb) = (g(a), g(b));
        if ga == 0.0 {
            found.push(a);
            continue;
        }
        if (ga < 0.0) == (gb < 0.0) {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if (g(mid) < 0.0) == (ga < 0.0) {
                a = mid;
            } else {
                b = mid;
            }
        }
        let w = if g(a).abs() < g(b).abs() { a } else { b };
        found.push(w);
    }
    // w → 1 is the trivial q = 0 solution and carries no state.
    found.retain(|&w| w < 1.0 - 1e-6);
    found.sort_by(|a, b| a.partial_cmp(b).unwrap());
    found.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * (1.0 + b.abs()));
    found.into_iter().map(make).collect()
}

/// Robust bound-pair energy relative to `E0`, exact in `w`:
/// `E - E0 = 4B + 2JΔ - Jc'w - JΔ(1 + s w^{N-2})/(1 + s w^N)`.
fn bound_energy(form: &BoundForm, block: usize, params: &ChainParams) -> f64 {
    let n = params.n_sites as i32;
    let cp = half_cos(block, params.n_sites).abs();
    let (j, d, w, s) = (params.j, params.delta, form.w, form.s);
    4.0 * params.b + 2.0 * j * d
        - j * cp * w
        - j * d * (1.0 + s * w.powi(n - 2)) / (1.0 + s * w.powi(n))
}

/// `E - E0 = 4B + J(2Δ - cos κ1 - cos κ2)`, evaluated in complex arithmetic.
pub fn two_magnon_energy_complex(root: &BetheRoot, params: &ChainParams) -> Complex64 {
    4.0 * params.b + params.j * (2.0 * params.delta - root.kappa1.cos() - root.kappa2.cos())
}

/// Energy of a root relative to the all-up state. Bound pairs use the exact
/// `w` form, which stays finite when `cos(K/2) = 0`.
pub fn two_magnon_energy(root: &BetheRoot, params: &ChainParams) -> f64 {
    match &root.bound {
        Some(form) => bound_energy(form, root.block, params),
        None => two_magnon_energy_complex(root, params).re,
    }
}

/// Infinite-ring bound band `E - E0 = 4B + JΔ - (J/2Δ)(1 + cos κ_total)`.
pub fn bound_band_energy(kappa_total: f64, params: &ChainParams) -> Result<f64> {
    if params.delta <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "bound band needs Delta > 0, got {}",
            params.delta
        )));
    }
    let (j, d) = (params.j, params.delta);
    Ok(4.0 * params.b + j * d - j / (2.0 * d) * (1.0 + kappa_total.cos()))
}

/// `two_magnon_energy - bound_band_energy` for a bound root, computed from the
/// string offset so it keeps relative precision when it is far below the
/// energy scale: `JΔ·ε·(1 - c'w/Δ)/w`.
pub fn bound_band_deviation(root: &BetheRoot, params: &ChainParams) -> Option<f64> {
    let form = root.bound?;
    let cp = half_cos(root.block, params.n_sites).abs();
    if cp == 0.0 {
        return Some(0.0);
    }
    let d = params.delta;
    Some(params.j * d * form.string_offset * (1.0 - cp * form.w / d) / form.w)
}

/// Newton iteration on `θ` with `κ1 = (2πλ1 + θ)/N`, `κ2 = (2πλ2 - θ)/N`.
fn newton_theta(params: &ChainParams, l1: usize, l2: usize, seed: Complex64) -> Option<Complex64> {
    let nf = params.n_sites as f64;
    let delta = params.delta;
    let kk = 2.0 * PI * (l1 + l2) as f64 / nf;
    let ek = Complex64::from_polar(1.0, kk);
    let kappas = |t: Complex64| {
        (
            (2.0 * PI * l1 as f64 + t) / nf,
            (2.0 * PI * l2 as f64 - t) / nf,
        )
    };
    let mut theta = seed;
    for _ in 0..200 {
        let (k1, k2) = kappas(theta);
        let e1 = (I * k1).exp();
        let e2 = (I * k2).exp();
        let a1 = 1.0 + ek - 2.0 * delta * e1;
        let a2 = 1.0 + ek - 2.0 * delta * e2;
        let da1 = -2.0 * delta * I * e1 / nf;
        let da2 = 2.0 * delta * I * e2 / nf;
        let (f, df) = if theta.im >= 0.0 {
            let et = (I * theta).exp();
            (et * a2 + a1, I * et * a2 + et * da2 + da1)
        } else {
            let et = (-I * theta).exp();
            (a2 + et * a1, da2 - I * et * a1 + et * da1)
        };
        if !f.is_finite() {
            return None;
        }
        if f.norm() < 1e-15 {
            break;
        }
        if df.norm() == 0.0 {
            return None;
        }
        let mut step = f / df;
        if step.norm() > 1.0 {
            step /= step.norm();
        }
        theta -= step;
        if step.norm() < 1e-15 * theta.norm().max(1.0) {
            break;
        }
    }
    let (k1, k2) = kappas(theta);
    (contact_residual(k1, k2, theta, delta) < 1e-10).then_some(theta)
}

/// Relative wavefunction norm² of a candidate; zero for the trivial
/// solutions `q ≡ 0 (mod π)` that carry no state.
fn relative_weight(q: Complex64, theta: Complex64, n: usize) -> f64 {
    if (q.im.abs() * n as f64) > 600.0 {
        return 1.0;
    }
    (1..n)
        .map(|r| {
            let r = r as f64;
            ((-I * q * r + I * theta / 2.0).exp() + (I * q * r - I * theta / 2.0).exp()).norm_sqr()
        })
        .sum::<f64>()
        / (1..n)
            .map(|r| {
                let r = r as f64;
                (-I * q * r + I * theta / 2.0).exp().norm_sqr()
                    + (I * q * r - I * theta / 2.0).exp().norm_sqr()
            })
            .sum::<f64>()
}

/// Solves the Bethe equations for the quantum numbers `(λ1, λ2)` by Newton
/// iteration in `θ`. Seeds: the caller's, the free value `θ = π`, the bound
/// string, and a few spread-out real values. Candidates that solve the
/// equations but carry no state are rejected.
pub fn solve_root(
    params: &ChainParams,
    lambda1: usize,
    lambda2: usize,
    seed: Option<Complex64>,
) -> Result<BetheRoot> {
    params.validate()?;
    let n = params.n_sites;
    if lambda1 > lambda2 || lambda2 >= n {
        return Err(Error::InvalidParams(format!(
            "Bethe numbers need 0 <= lambda1 <= lambda2 < N, got ({lambda1}, {lambda2})"
        )));
    }
    if params.delta < 0.0 {
        return Err(Error::InvalidParams("Bethe solver needs Delta >= 0".into()));
    }
    let nf = n as f64;
    let fail = Error::RootNotConverged { lambda1, lambda2 };
    let p_total = lambda1 + lambda2;
    let block = p_total % n;
    let d = (lambda2 - lambda1) as f64;
    let kappas = |t: Complex64| {
        (
            (2.0 * PI * lambda1 as f64 + t) / nf,
            (2.0 * PI * lambda2 as f64 - t) / nf,
        )
    };

    let mut seeds: Vec<Complex64> = seed.into_iter().collect();
    seeds.push(Complex64::new(PI, 0.0));
    let c_u = (PI * p_total as f64 / nf).cos();
    if params.delta > 0.0 && c_u.abs() > 1e-14 && c_u.abs() < params.delta {
        let v0 = (params.delta / c_u.abs()).ln();
        let q0 = Complex64::new(if c_u < 0.0 { PI } else { 0.0 }, v0);
        seeds.push(nf * q0 + PI * d);
    }
    for k in 1..8 {
        seeds.push(Complex64::new(2.0 * PI * k as f64 / 8.0, 0.0));
    }
    if params.delta == 0.0 {
        seeds.clear();
        seeds.push(Complex64::new(PI, 0.0));
    }

    for s in seeds {
        let Some(theta) = newton_theta(params, lambda1, lambda2, s) else {
            continue;
        };
        let theta = if params.delta == 0.0 {
            Complex64::new(PI, 0.0)
        } else {
            theta
        };
        let (k1, k2) = kappas(theta);
        let q = (k1 - k2) / 2.0;
        if relative_weight(q, theta, n) < 1e-8 {
            continue;
        }
        if theta.im.abs() < 1e-8 {
            let theta = Complex64::new(theta.re, 0.0);
            let (k1, k2) = kappas(theta);
            return Ok(finalize(
                params,
                block,
                Complex64::new(k1.re, 0.0),
                Complex64::new(k2.re, 0.0),
                theta,
                None,
            ));
        }
        // bound pair: express through the reduced block
        let w = (-q.im.abs()).exp();
        let forms = bound_forms(params, block);
        if let Some(form) = forms
            .into_iter()
            .min_by(|a, b| (a.w - w).abs().partial_cmp(&(b.w - w).abs()).unwrap())
            .filter(|f| (f.w - w).abs() < 1e-6 * w.max(1e-12) + 1e-12)
        {
            let mut root = finalize(params, block, k1, k2, theta, Some(form));
            let quantization = root.residual;
            root.residual = quantization.max(contact_residual(k1, k2, theta, params.delta));
            return Ok(root);
        }
    }
    Err(fail)
}

/// Shortfall of roots in one total-momentum block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnresolvedBlock {
    pub block: usize,
    pub expected: usize,
    pub found: usize,
}

#[derive(Debug, Clone)]
pub struct SpectrumCatalog {
    pub n_sites: usize,
    pub roots: Vec<BetheRoot>,
    pub energies: Vec<f64>,
    pub unresolved: Vec<UnresolvedBlock>,
}

impl SpectrumCatalog {
    pub fn count(&self, class: RootClass) -> usize {
        self.roots.iter().filter(|r| r.class == class).count()
    }

    pub fn sector_dimension(&self) -> usize {
        self.n_sites * (self.n_sites - 1) / 2
    }

    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty() && self.roots.len() == self.sector_dimension()
    }

    pub fn resolved_fraction(&self) -> f64 {
        self.roots.len().min(self.sector_dimension()) as f64 / self.sector_dimension() as f64
    }

    pub fn sorted_energies(&self) -> Vec<f64> {
        let mut e = self.energies.clone();
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        e
    }

    /// Roots of one total-momentum block with their energies.
    pub fn block(&self, p: usize) -> impl Iterator<Item = (&BetheRoot, f64)> + '_ {
        self.roots
            .iter()
            .zip(self.energies.iter().copied())
            .filter(move |(r, _)| r.block == p)
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(
            out,
            "lambda1,lambda2,re_k1,im_k1,re_k2,im_k2,re_theta,im_theta,class,energy,residual"
        )?;
        for (r, e) in self.roots.iter().zip(&self.energies) {
            writeln!(
                out,
                "{},{},{:?},{:?},{:?},{:?},{:?},{:?},{},{:?},{:?}",
                r.lambda1,
                r.lambda2,
                r.kappa1.re,
                r.kappa1.im,
                r.kappa2.re,
                r.kappa2.im,
                r.theta.re,
                r.theta.im,
                r.class.name(),
                e,
                r.residual
            )?;
        }
        Ok(())
    }
}

fn state_residual(params: &ChainParams, root: &BetheRoot, energy: f64) -> Result<f64> {
    let h = build_two_excitation_h(params)?;
    let psi = build_eigenstate(root, params)?;
    let mut hpsi = vec![Complex64::new(0.0, 0.0); h.dimension];
    h.apply(psi.amps(), &mut hpsi);
    Ok(hpsi
        .iter()
        .zip(psi.amps())
        .map(|(a, b)| (a - energy * b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Enumerates the two-flip spectrum block by block.
pub fn enumerate_spectrum(params: &ChainParams) -> Result<SpectrumCatalog> {
    params.validate()?;
    let n = params.n_sites;
    if n > MAX_ENUMERATION_SITES {
        return Err(Error::InvalidParams(format!(
            "Bethe enumeration is limited to N <= {MAX_ENUMERATION_SITES}, got {n}"
        )));
    }
    if params.delta < 0.0 {
        return Err(Error::InvalidParams("Bethe solver needs Delta >= 0".into()));
    }
    let blocks = MomentumBlocks::new(Sector::Two, n)?;
    let mut roots = Vec::new();
    let mut energies = Vec::new();
    let mut unresolved = Vec::new();
    for p in 0..n {
        let expected = blocks.block_dim(p);
        let c = half_cos(p, n);
        let mut found: Vec<BetheRoot> = Vec::new();
        for q in scattering_momenta(params, p) {
            let theta = if params.delta == 0.0 {
                PI
            } else {
                scattering_phase(q, c, params.delta)
            };
            found.push(wave_root(params, p, q, theta));
        }
        for form in bound_forms(params, p) {
            found.push(bound_root(params, p, form));
        }
        if found.len() < expected && params.delta > 0.0 && (c.abs() - params.delta).abs() < 1e-9 {
            // Limit root: κ1 = κ2 (q = 0, or π when c < 0) with θ = 0.
            let q = if c < 0.0 { PI } else { 0.0 };
            let root = wave_root(params, p, q, 0.0);
            let e = two_magnon_energy(&root, params);
            if state_residual(params, &root, e)? < 1e-8 {
                found.push(root);
            }
        }
        if found.len() != expected {
            log::warn!(
                "block {p}: {} Bethe roots for dimension {expected}",
                found.len()
            );
            unresolved.push(UnresolvedBlock {
                block: p,
                expected,
                found: found.len(),
            });
        }
        for r in found {
            energies.push(two_magnon_energy(&r, params));
            roots.push(r);
        }
    }
    Ok(SpectrumCatalog {
        n_sites: n,
        roots,
        energies,
        unresolved,
    })
}

/// Normalized eigenstate of a root. Bound pairs are built from the decaying
/// arrangement `w^{r-1} + s·w^{N-r-1}` so no exponentially large factor
/// appears.
pub fn build_eigenstate(root: &BetheRoot, params: &ChainParams) -> Result<State> {
    let n = params.n_sites;
    let half_k = PI * root.block as f64 / n as f64;
    let amps: Vec<Complex64> = match &root.bound {
        Some(form) => pairs(n)
            .map(|(n1, n2)| {
                let r = (n2 - n1) as i32;
                let sigma = if form.flipped && r % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                let rel = form.w.powi(r - 1) + form.s * form.w.powi(n as i32 - r - 1);
                Complex64::from_polar(sigma * rel, half_k * (n1 + n2) as f64)
            })
            .collect(),
        None => pairs(n)
            .map(|(n1, n2)| {
                let (a, b) = (n1 as f64, n2 as f64);
                (I * (root.kappa1 * a + root.kappa2 * b + root.theta / 2.0)).exp()
                    + (I * (root.kappa1 * b + root.kappa2 * a - root.theta / 2.0)).exp()
            })
            .collect(),
    };
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 1e-12) || !norm.is_finite() {
        return Err(Error::InvalidParams(format!(
            "root ({}, {}) carries no state",
            root.lambda1, root.lambda2
        )));
    }
    State::from_amplitudes(Sector::Two, n, amps.into_iter().map(|z| z / norm).collect())
}

/// Scattering amplitude in centre-of-mass and relative coordinates,
/// `e^{iκ_c(n1+n2)/2}[sin(κ_r(n1-n2+1)) - (cos(κ_c/2)/Δ) sin(κ_r(n1-n2))]`.
pub fn scattering_amplitude_rc(
    root: &BetheRoot,
    params: &ChainParams,
    n1: usize,
    n2: usize,
) -> Result<Complex64> {
    if params.delta == 0.0 {
        return Err(Error::InvalidParams(
            "centre/relative form divides by Delta".into(),
        ));
    }
    if root.bound.is_some() {
        return Err(Error::InvalidParams(
            "centre/relative form applies to scattering roots".into(),
        ));
    }
    let n = params.n_sites;
    let kc = root.kappa_c(n);
    let kr = root.kappa_r(n).re;
    let x = n1 as f64 - n2 as f64;
    let rel = (kr * (x + 1.0)).sin() - (kc / 2.0).cos() / params.delta * (kr * x).sin();
    Ok(Complex64::from_polar(1.0, kc * (n1 + n2) as f64 / 2.0) * rel)
}
