//! Measured quantities: on-site magnetization, two-site correlations,
//! centre-of-mass moments, nearest-neighbour fidelity and localization fits.

use num_complex::Complex64;

use crate::chain::{pair_index_unchecked, pairs, ChainParams, Sector, State};
use crate::error::{Error, Result};
use crate::floquet::{EvolutionRecord, FloquetOperator, Observer, Workspace};

/// `⟨P↓_n⟩` for every site.
pub fn magnetization_profile(state: &State) -> Vec<f64> {
    let n = state.n_sites();
    match state.sector() {
        Sector::One => state.amps().iter().map(|a| a.norm_sqr()).collect(),
        Sector::Two => {
            let mut out = vec![0.0; n];
            for ((n1, n2), a) in pairs(n).zip(state.amps()) {
                let p = a.norm_sqr();
                out[n1] += p;
                out[n2] += p;
            }
            out
        }
    }
}

/// `⟨P↓_{n1} P↓_{n2}⟩`, symmetric with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    n_sites: usize,
    values: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn get(&self, n1: usize, n2: usize) -> f64 {
        self.values[n1 * self.n_sites + n2]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.values
            .chunks(self.n_sites)
            .map(|r| r.iter().sum())
            .collect()
    }

    /// Sum over unordered pairs.
    pub fn total(&self) -> f64 {
        0.5 * self.values.iter().sum::<f64>()
    }

    /// Weight of pairs whose ring separation is at most `max_sep`.
    pub fn near_diagonal_mass(&self, max_sep: usize) -> f64 {
        let n = self.n_sites;
        pairs(n)
            .filter(|&(a, b)| (b - a).min(n - (b - a)) <= max_sep)
            .map(|(a, b)| self.get(a, b))
            .sum()
    }

    /// Position and value of the largest entry with `n1 < n2`.
    pub fn argmax(&self) -> ((usize, usize), f64) {
        pairs(self.n_sites)
            .map(|(a, b)| ((a, b), self.get(a, b)))
            .fold(((0, 1), f64::NEG_INFINITY), |acc, x| {
                if x.1 > acc.1 {
                    x
                } else {
                    acc
                }
            })
    }

    /// Upper-triangle entries `(n1, n2, value)` with `n1 < n2`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        pairs(self.n_sites).map(move |(a, b)| (a, b, self.get(a, b)))
    }
}

pub fn two_site_correlation(state: &State) -> Result<CorrelationMatrix> {
    if state.sector() != Sector::Two {
        return Err(Error::WrongSector {
            expected: "two-flip",
        });
    }
    let n = state.n_sites();
    let mut values = vec![0.0; n * n];
    for ((a, b), amp) in pairs(n).zip(state.amps()) {
        let p = amp.norm_sqr();
        values[a * n + b] = p;
        values[b * n + a] = p;
    }
    Ok(CorrelationMatrix { n_sites: n, values })
}

/// `Σ |a(n1,n2)|² (n1 + n2 - 2n0)² B_Q²`.
pub fn com_second_moment(state: &State, n0: f64, b_q: f64) -> Result<f64> {
    if state.sector() != Sector::Two {
        return Err(Error::WrongSector {
            expected: "two-flip",
        });
    }
    Ok(pairs(state.n_sites())
        .zip(state.amps())
        .map(|((a, b), amp)| {
            let x = (a + b) as f64 - 2.0 * n0;
            amp.norm_sqr() * x * x
        })
        .sum::<f64>()
        * b_q
        * b_q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityRecord {
    pub period: usize,
    pub fidelity: f64,
}

/// Nearest-neighbour approximation to bound-pair dynamics at large `Δ`: the
/// pair `|n, n+1⟩` hops like a single flip with coupling `J/(2Δ)` and feels
/// the kick `exp(-iB_Q(n - (n0 - ½))²)`. Evolved on the ring as a one-flip
/// problem with `J' = J/(2Δ)`, `B_Q' = 2B_Q`, `n0' = n0 - ½`; pair
/// `(n, n+1)` is slot `n` and the wrap pair `(0, N-1)` is slot `N-1`.
#[derive(Debug)]
pub struct NnApproximant {
    op: FloquetOperator,
    state: State,
    ws: Workspace,
    period: usize,
}

impl NnApproximant {
    pub fn new(params: &ChainParams, m: usize, kicked: bool) -> Result<Self> {
        params.validate()?;
        if params.delta <= 0.0 {
            return Err(Error::InvalidParams(
                "nearest-neighbour approximant needs Delta > 0".into(),
            ));
        }
        let n = params.n_sites;
        if m >= n {
            return Err(Error::SiteOutOfRange {
                site: m,
                n_sites: n,
            });
        }
        let b_q = if kicked { 2.0 * params.b_q } else { 0.0 };
        let p = ChainParams::new(n, params.j / (2.0 * params.delta), 0.0)
            .with_kick(b_q, params.n0 - 0.5)
            .with_period(params.period);
        let op = FloquetOperator::build(&p, Sector::One)?;
        let ws = op.workspace();
        Ok(NnApproximant {
            op,
            state: State::single_flip(n, m)?,
            ws,
            period: 0,
        })
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn step(&mut self) -> Result<()> {
        self.op.apply_in_place(&mut self.state, &mut self.ws)?;
        self.period += 1;
        Ok(())
    }

    /// Embeds the approximant into the two-flip basis.
    pub fn embedded(&self) -> Result<State> {
        let n = self.state.n_sites();
        let mut amps = vec![Complex64::new(0.0, 0.0); n * (n - 1) / 2];
        for (slot, a) in self.state.amps().iter().enumerate() {
            let (x, y) = if slot + 1 < n {
                (slot, slot + 1)
            } else {
                (0, n - 1)
            };
            amps[pair_index_unchecked(x, y, n)] = *a;
        }
        State::from_amplitudes(Sector::Two, n, amps)
    }

    /// `|⟨ψ_nn|ψ_exact⟩|²`.
    pub fn fidelity(&self, exact: &State) -> Result<FidelityRecord> {
        let n = self.state.n_sites();
        if exact.sector() != Sector::Two || exact.n_sites() != n {
            return Err(Error::WrongSector {
                expected: "two-flip",
            });
        }
        let mut ov = Complex64::new(0.0, 0.0);
        for (slot, a) in self.state.amps().iter().enumerate() {
            let (x, y) = if slot + 1 < n {
                (slot, slot + 1)
            } else {
                (0, n - 1)
            };
            ov += a.conj() * exact.amps()[pair_index_unchecked(x, y, n)];
        }
        let norm = self.state.norm().powi(2) * exact.norm().powi(2);
        Ok(FidelityRecord {
            period: self.period,
            fidelity: ov.norm_sqr() / norm,
        })
    }
}

/// Fidelity per period of the exact evolution of `|m, m+1⟩` against the
/// nearest-neighbour approximant, periods `0..=n_periods`.
pub fn nn_fidelity_series(
    params: &ChainParams,
    m: usize,
    n_periods: usize,
    kicked: bool,
) -> Result<Vec<FidelityRecord>> {
    let exact_params = if kicked {
        *params
    } else {
        ChainParams {
            b_q: 0.0,
            ..*params
        }
    };
    let op = FloquetOperator::build(&exact_params, Sector::Two)?;
    let mut ws = op.workspace();
    let n = params.n_sites;
    let mut exact = State::flip_pair(n, m, (m + 1) % n)?;
    let mut approx = NnApproximant::new(params, m, kicked)?;
    let mut out = vec![approx.fidelity(&exact)?];
    for _ in 0..n_periods {
        op.apply_in_place(&mut exact, &mut ws)?;
        approx.step()?;
        out.push(approx.fidelity(&exact)?);
    }
    Ok(out)
}

/// Least-squares fit of `log P` against `|position - center|` over points with
/// `P ∈ [1e-12, 1e-2]`, returning `L` from `P ~ exp(-2|n - center|/L)`.
pub fn localization_fit(profile: &[f64], center: f64) -> Result<f64> {
    localization_fit_window(profile, center, 1e-12, 1e-2)
}

pub fn localization_fit_window(profile: &[f64], center: f64, lo: f64, hi: f64) -> Result<f64> {
    let max = profile.iter().copied().fold(0.0, f64::max);
    let min = profile
        .iter()
        .copied()
        .filter(|&p| p > 0.0)
        .fold(f64::INFINITY, f64::min);
    if !(max > 0.0) || max / min < 1e6 {
        return Err(Error::InsufficientRange(format!(
            "profile spans {:.1} decades, need 6",
            (max / min).log10()
        )));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = profile
        .iter()
        .enumerate()
        .filter(|(_, &p)| p >= lo && p <= hi)
        .map(|(n, &p)| ((n as f64 - center).abs(), p.ln()))
        .unzip();
    if xs.len() < 4 {
        return Err(Error::InsufficientRange(format!(
            "only {} points inside the fit window",
            xs.len()
        )));
    }
    let (slope, _) = crate::rotor::linear_fit_xy(&xs, &ys);
    if !(slope < 0.0) {
        return Err(Error::InsufficientRange(format!(
            "profile does not decay (slope {slope})"
        )));
    }
    Ok(-2.0 / slope)
}

/// Index of the largest value among `sites`.
pub fn argmax_over(
    profile: &[f64],
    sites: impl IntoIterator<Item = usize>,
) -> Option<(usize, f64)> {
    sites.into_iter().map(|s| (s, profile[s])).fold(
        None,
        |acc: Option<(usize, f64)>, x| match acc {
            Some(a) if a.1 >= x.1 => Some(a),
            _ => Some(x),
        },
    )
}

/// Signed ring displacement `to - from` in `(-N/2, N/2]`.
pub fn ring_displacement(from: f64, to: f64, n_sites: usize) -> f64 {
    let n = n_sites as f64;
    let d = (to - from).rem_euclid(n);
    if d > n / 2.0 {
        d - n
    } else {
        d
    }
}

/// Per-period records collected during [`crate::floquet::evolve`].
#[derive(Debug, Clone, Default)]
pub struct ObservableSeries {
    pub record_profiles: bool,
    pub record_states: bool,
    /// `(n0, B_Q)` when the centre-of-mass moment is wanted.
    pub moment: Option<(f64, f64)>,
    pub periods: Vec<usize>,
    pub profiles: Vec<Vec<f64>>,
    pub moments: Vec<f64>,
    pub states: Vec<State>,
    /// Running sum of profiles for periods in `average_window`.
    pub average_window: Option<(usize, usize)>,
    pub profile_sum: Vec<f64>,
    pub averaged: usize,
}

impl ObservableSeries {
    pub fn profiles() -> Self {
        ObservableSeries {
            record_profiles: true,
            ..Default::default()
        }
    }

    pub fn with_moment(mut self, n0: f64, b_q: f64) -> Self {
        self.moment = Some((n0, b_q));
        self
    }

    pub fn with_states(mut self) -> Self {
        self.record_states = true;
        self
    }

    pub fn averaging(mut self, from: usize, to: usize) -> Self {
        self.average_window = Some((from, to));
        self
    }

    /// Mean profile over the averaging window.
    pub fn averaged_profile(&self) -> Option<Vec<f64>> {
        (self.averaged > 0).then(|| {
            self.profile_sum
                .iter()
                .map(|v| v / self.averaged as f64)
                .collect()
        })
    }
}

impl Observer for ObservableSeries {
    fn observe(&mut self, record: &EvolutionRecord<'_>) -> Result<()> {
        self.periods.push(record.period);
        let need_profile = self.record_profiles
            || self
                .average_window
                .is_some_and(|(a, b)| (a..=b).contains(&record.period));
        if need_profile {
            let p = magnetization_profile(record.state);
            if let Some((a, b)) = self.average_window {
                if (a..=b).contains(&record.period) {
                    if self.profile_sum.is_empty() {
                        self.profile_sum = vec![0.0; p.len()];
                    }
                    self.profile_sum
                        .iter_mut()
                        .zip(&p)
                        .for_each(|(s, v)| *s += v);
                    self.averaged += 1;
                }
            }
            if self.record_profiles {
                self.profiles.push(p);
            }
        }
        if let Some((n0, b_q)) = self.moment {
            self.moments.push(com_second_moment(record.state, n0, b_q)?);
        }
        if self.record_states {
            self.states.push(record.state.clone());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::pair_index;

    #[test]
    fn profiles_and_correlations() {
        let s = State::flip_pair(10, 4, 5).unwrap();
        let p = magnetization_profile(&s);
        assert_eq!(p.iter().sum::<f64>(), 2.0);
        assert_eq!((p[4], p[5]), (1.0, 1.0));
        let c = two_site_correlation(&State::flip_pair(10, 3, 7).unwrap()).unwrap();
        assert_eq!((c.get(3, 7), c.get(7, 3), c.total()), (1.0, 1.0, 1.0));
        assert!(two_site_correlation(&State::single_flip(10, 3).unwrap()).is_err());

        let m = 28;
        let amps = vec![Complex64::new(1.0 / (m as f64).sqrt(), 0.0); m];
        let s = State::from_amplitudes(Sector::Two, 8, amps).unwrap();
        for v in magnetization_profile(&s) {
            assert!((v - 0.25).abs() < 1e-12);
        }
        let c = two_site_correlation(&s).unwrap();
        for (a, b) in c.row_sums().iter().zip(magnetization_profile(&s)) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn moments() {
        let s = State::flip_pair(40, 15, 25).unwrap();
        assert_eq!(com_second_moment(&s, 20.0, 0.7).unwrap(), 0.0);
        let s = State::flip_pair(40, 20, 30).unwrap();
        assert!((com_second_moment(&s, 20.0, 1.0).unwrap() - 100.0).abs() < 1e-12);
    }

    #[test]
    fn fit_recovers_synthetic_length() {
        let prof: Vec<f64> = (0..201)
            .map(|n| (-2.0 * (n as f64 - 100.0).abs() / 7.0).exp())
            .collect();
        let l = localization_fit(&prof, 100.0).unwrap();
        assert!((l - 7.0).abs() < 0.07);
        let flat = vec![0.5; 50];
        assert!(matches!(
            localization_fit(&flat, 25.0),
            Err(Error::InsufficientRange(_))
        ));
    }

    #[test]
    fn approximant_starts_at_unit_fidelity() {
        let p = ChainParams::new(24, 10.0, 2.0).with_kick(1.0, 12.0);
        let f = nn_fidelity_series(&p, 12, 2, true).unwrap();
        assert_eq!(f[0].fidelity, 1.0);
        assert!(f.iter().all(|r| r.fidelity <= 1.0 + 1e-12));
        let a = NnApproximant::new(&p, 23, true)
            .unwrap()
            .embedded()
            .unwrap();
        assert_eq!(
            a.amps()[pair_index(0, 23, 24).unwrap()],
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn displacement_wraps() {
        assert_eq!(ring_displacement(10.0, 390.0, 400), -20.0);
        assert_eq!(ring_displacement(390.0, 10.0, 400), 20.0);
    }
}
