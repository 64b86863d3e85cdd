//! Closed-form propagators of the XX0 chain (`Δ = 0`).
//!
//! After a Jordan-Wigner transformation the flips are free fermions hopping
//! with amplitude `-J/2`. One flip spreads as `i^{n-m} J_{n-m}(JT)`; two flips
//! spread as the 2×2 determinant of single-flip elements. On a finite ring the
//! infinite-chain forms hold only away from wrap-around, so comparisons are
//! made inside the window `|n - m| ≤ N/4`.

use num_complex::Complex64;

use crate::bessel::{bessel_j, i_pow, BesselTable};
use crate::chain::ChainParams;
use crate::error::{Error, Result};

/// Parameters of the Bessel propagator. `beta` is stored non-negative; a
/// negative coupling is absorbed by reversing the Bessel order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselPropagatorSpec {
    beta: f64,
    reversed: bool,
    pub b_q: f64,
    pub n0: f64,
    /// `None` for the infinite chain.
    pub n_sites: Option<usize>,
}

impl BesselPropagatorSpec {
    pub fn new(beta: f64, b_q: f64, n0: f64) -> Self {
        BesselPropagatorSpec {
            beta: beta.abs(),
            reversed: beta < 0.0,
            b_q,
            n0,
            n_sites: None,
        }
    }

    pub fn on_ring(mut self, n_sites: usize) -> Self {
        self.n_sites = Some(n_sites);
        self
    }

    pub fn from_params(params: &ChainParams) -> Self {
        Self::new(params.beta(), params.b_q, params.n0)
    }

    /// `|JT|`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn order(&self, k: i64) -> i64 {
        if self.reversed {
            -k
        } else {
            k
        }
    }

    fn kick(&self, n: i64) -> Complex64 {
        let x = n as f64 - self.n0;
        Complex64::from_polar(1.0, -0.5 * self.b_q * x * x)
    }

    /// `i^{n-m} J_{n-m}(β)` without the kick, summed over ring images when a
    /// ring length is set.
    fn free(&self, n: i64, m: i64, table: Option<&BesselTable>) -> Complex64 {
        let term = |k: i64| {
            let j = match table {
                Some(t) => t.get(self.order(k)),
                None => bessel_j(self.order(k), self.beta),
            };
            i_pow(k) * j
        };
        match self.n_sites {
            None => term(n - m),
            Some(len) => {
                let len = len as i64;
                let base = (n - m).rem_euclid(len);
                let reach = self.beta.ceil() as i64 + 60;
                let mut acc = Complex64::new(0.0, 0.0);
                let mut k = base - ((reach + base) / len + 1) * len;
                while k <= reach {
                    if k.abs() <= reach {
                        acc += term(k);
                    }
                    k += len;
                }
                acc
            }
        }
    }
}

/// Free single-flip factor `⟨n|exp(-iT·H_hop)|m⟩` on the infinite chain.
pub fn free_single_flip(n: i64, m: i64, beta: f64) -> Complex64 {
    i_pow(n - m) * bessel_j(n - m, beta)
}

/// `⟨n|U(T)|m⟩ = exp(-i(B_Q/2)(n-n0)²)·i^{m-n}·J_{m-n}(β)`.
pub fn single_flip_element(n: i64, m: i64, spec: &BesselPropagatorSpec) -> Complex64 {
    spec.kick(n) * spec.free(n, m, None)
}

/// Same element with a precomputed Bessel table covering `spec.beta()`.
pub fn single_flip_element_tabulated(
    n: i64,
    m: i64,
    spec: &BesselPropagatorSpec,
    table: &BesselTable,
) -> Complex64 {
    spec.kick(n) * spec.free(n, m, Some(table))
}

/// `⟨n1,n2|U(T)|m1,m2⟩` as the Wick determinant of single-flip elements:
/// `kick·i^{n1+n2-m1-m2}[J_{n1-m1}J_{n2-m2} - J_{n1-m2}J_{n2-m1}]`.
pub fn two_flip_element(
    n1: i64,
    n2: i64,
    m1: i64,
    m2: i64,
    spec: &BesselPropagatorSpec,
) -> Complex64 {
    let inf = BesselPropagatorSpec {
        n_sites: None,
        ..*spec
    };
    let e = |a: i64, b: i64| inf.free(a, b, None);
    inf.kick(n1) * inf.kick(n2) * (e(n1, m1) * e(n2, m2) - e(n1, m2) * e(n2, m1))
}

/// Two-flip element with a shared Bessel table.
pub fn two_flip_element_tabulated(
    n1: i64,
    n2: i64,
    m1: i64,
    m2: i64,
    spec: &BesselPropagatorSpec,
    table: &BesselTable,
) -> Complex64 {
    let inf = BesselPropagatorSpec {
        n_sites: None,
        ..*spec
    };
    let e = |a: i64, b: i64| inf.free(a, b, Some(table));
    inf.kick(n1) * inf.kick(n2) * (e(n1, m1) * e(n2, m2) - e(n1, m2) * e(n2, m1))
}

/// `⟨P↓_n⟩` one period after preparing `|n0, n0+1⟩` at `Δ = 0`:
/// `J²_{n-n0}(β) + J²_{n-n0-1}(β)`.
pub fn one_period_magnetization(n: i64, n0: i64, beta: f64) -> f64 {
    bessel_j(n - n0, beta).powi(2) + bessel_j(n - n0 - 1, beta).powi(2)
}

/// Whole one-period profile on a ring of `n_sites`, with wrap-around images
/// folded in. Exact for the ring because the two occupied orbitals are
/// orthogonal and the fermion density is additive.
pub fn one_period_magnetization_ring(n_sites: usize, n0: usize, beta: f64) -> Result<Vec<f64>> {
    if n0 + 1 >= n_sites {
        return Err(Error::SiteOutOfRange {
            site: n0 + 1,
            n_sites,
        });
    }
    let spec = BesselPropagatorSpec::new(beta, 0.0, 0.0).on_ring(n_sites);
    let table = BesselTable::covering(beta);
    Ok((0..n_sites as i64)
        .map(|n| {
            spec.free(n, n0 as i64, Some(&table)).norm_sqr()
                + spec.free(n, n0 as i64 + 1, Some(&table)).norm_sqr()
        })
        .collect())
}

/// Whether `|a - b| ≤ N/4`, the window where infinite-chain forms are compared
/// with ring dynamics.
pub fn in_interior_window(a: usize, b: usize, n_sites: usize) -> bool {
    4 * a.abs_diff(b) <= n_sites
}

/// Two-flip spectrum of the XX0 ring relative to the all-up energy, from the
/// fermion picture: with two fermions the Jordan-Wigner boundary condition is
/// antiperiodic, so `κ = 2π(I + ½)/N` and `E = 4B - J(cos κ1 + cos κ2)` over
/// distinct momentum pairs.
pub fn xx0_two_flip_spectrum(params: &ChainParams) -> Result<Vec<f64>> {
    params.validate()?;
    let n = params.n_sites;
    let k: Vec<f64> = (0..n)
        .map(|i| 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / n as f64)
        .collect();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            out.push(4.0 * params.b - params.j * (k[a].cos() + k[b].cos()));
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_beta_is_diagonal_phase() {
        let spec = BesselPropagatorSpec::new(0.0, 0.4, 3.0);
        assert!(
            (single_flip_element(5, 5, &spec) - Complex64::from_polar(1.0, -0.8)).norm() < 1e-15
        );
        assert_eq!(single_flip_element(5, 6, &spec).norm(), 0.0);
    }

    #[test]
    fn row_sum_rule() {
        let spec = BesselPropagatorSpec::new(130.0, 0.1, 0.0);
        let t = BesselTable::covering(130.0);
        let s: f64 = (-400..=400)
            .map(|m| single_flip_element_tabulated(0, m, &spec, &t).norm_sqr())
            .sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_beta_reverses_order() {
        let a = BesselPropagatorSpec::new(-3.0, 0.0, 0.0);
        for d in -6..=6 {
            let x = single_flip_element(d, 0, &a);
            let y = i_pow(d) * bessel_j(d, -3.0);
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn ring_form_is_unitary_row() {
        let spec = BesselPropagatorSpec::new(40.0, 0.0, 0.0).on_ring(24);
        let t = BesselTable::covering(40.0);
        let s: f64 = (0..24).map(|m| spec.free(0, m, Some(&t)).norm_sqr()).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn determinant_properties() {
        let spec = BesselPropagatorSpec::new(5.0, 0.3, 10.0);
        let a = two_flip_element(9, 12, 10, 11, &spec);
        let b = two_flip_element(9, 12, 11, 10, &spec);
        assert!((a + b).norm() < 1e-15);
        assert_eq!(two_flip_element(9, 12, 10, 10, &spec).norm(), 0.0);
    }

    #[test]
    fn magnetization_closed_form() {
        for n in -3..5 {
            let want = if n == 0 || n == 1 { 1.0 } else { 0.0 };
            assert_eq!(one_period_magnetization(n, 0, 0.0), want);
        }
        let total: f64 = (-200..=200)
            .map(|n| one_period_magnetization(n, 0, 65.0))
            .sum();
        assert!((total - 2.0).abs() < 1e-10);
        let ring = one_period_magnetization_ring(64, 30, 5.0).unwrap();
        for n in 20..40 {
            assert!((ring[n] - one_period_magnetization(n as i64, 30, 5.0)).abs() < 1e-12);
        }
    }
}
