//! Batch experiments driven by a `key = value` configuration.
//!
//! [`run_experiment`] computes every table in memory and [`emit_outputs`]
//! writes them with headers, checksums and a `manifest.json`. Nothing in the
//! output depends on wall-clock time, so identical configurations give
//! byte-identical files.

pub mod config;
pub mod output;
pub mod tracking;

use std::path::Path;

use crate::bethe::{bound_band_deviation, bound_band_energy, enumerate_spectrum, RootClass};
use crate::chain::{ChainParams, Sector, State};
use crate::error::{Error, Result};
use crate::floquet::{evolve, FloquetOperator};
use crate::observables::{
    localization_fit, nn_fidelity_series, two_site_correlation, CorrelationMatrix, ObservableSeries,
};
use crate::rotor::{
    classical_moment_series, image_parameters, linear_fit_xy, qkr_moment_series,
    qkr_time_averaged_distribution, quadratic_fit_xy, QkrPropagator, RotorParams,
};

pub use config::{parse_config, Coupling, Experiment, RunConfig};
pub use output::{num, OutputFile, OutputManifest, CONVENTIONS};
pub use tracking::{family_speed, track_peak_families, PeakTrack};

/// Near-diagonal band used for the bound-pair correlation mass.
pub const NEAR_DIAGONAL: usize = 3;
/// Peaks weaker than this fraction of the strongest one on their side are
/// not used to seed a family.
pub const SEED_FRACTION: f64 = 0.05;

/// Tables and scalar results of one run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub config: RunConfig,
    pub files: Vec<OutputFile>,
    /// Scalar results, also written to `summary.csv`.
    pub metrics: Vec<(String, f64)>,
    header: Vec<String>,
}

impl RunOutput {
    pub fn metric(&self, key: &str) -> Option<f64> {
        self.metrics.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn file(&self, name: &str) -> Option<&OutputFile> {
        self.files.iter().find(|f| f.name == name)
    }
}

/// Short label for file names and metric keys: `2`, `0.5`.
pub fn label(x: f64) -> String {
    format!("{x}")
}

fn param_line(p: &ChainParams) -> String {
    let img = image_parameters(p);
    let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), num);
    format!(
        "N={} J={} Delta={} B={} B_Q={} T={} n0={} | K_s={} tau_s={} K_b={} tau_b={}",
        p.n_sites,
        num(p.j),
        num(p.delta),
        num(p.b),
        num(p.b_q),
        num(p.period),
        num(p.n0 + 1.0),
        num(img.k_s),
        num(img.tau_s),
        opt(img.k_b),
        opt(img.tau_b)
    )
}

struct Runner<'a> {
    cfg: &'a RunConfig,
    files: Vec<OutputFile>,
    metrics: Vec<(String, f64)>,
    header: Vec<String>,
}

impl Runner<'_> {
    fn params(&mut self, delta: f64, b_q: f64) -> Result<ChainParams> {
        let p = self.cfg.chain_params(delta, b_q);
        p.validate()?;
        let line = param_line(&p);
        if !self.header.contains(&line) {
            self.header.push(line);
        }
        Ok(p)
    }

    fn metric(&mut self, key: impl Into<String>, v: f64) {
        self.metrics.push((key.into(), v));
    }

    fn centre_site(&self) -> usize {
        self.cfg.n0.round() as usize
    }

    fn pair_sites(&self, default: (usize, usize)) -> Result<(usize, usize)> {
        match self.cfg.sites.as_deref() {
            None => Ok(default),
            Some([a, b]) => Ok((*a, *b)),
            Some(_) => Err(Error::InvalidParams(format!(
                "{} needs two flip sites",
                self.cfg.experiment
            ))),
        }
    }

    fn nn_default(&self) -> (usize, usize) {
        let c = self.centre_site();
        (c, (c + 1) % self.cfg.n_sites)
    }

    fn evolve_pair(
        &self,
        p: &ChainParams,
        sites: (usize, usize),
        series: &mut ObservableSeries,
    ) -> Result<State> {
        let op = FloquetOperator::build(p, Sector::Two)?;
        evolve(
            &op,
            State::flip_pair(p.n_sites, sites.0, sites.1)?,
            self.cfg.n_periods,
            &mut [series],
        )
    }

    fn profile_file(name: String, profiles: &[Vec<f64>], periods: &[usize]) -> OutputFile {
        let mut f = OutputFile::new(name, &["period", "site", "value"]);
        for (period, prof) in periods.iter().zip(profiles) {
            for (s, v) in prof.iter().enumerate() {
                f.row([period.to_string(), (s + 1).to_string(), num(*v)]);
            }
        }
        f
    }

    fn fig1(&mut self) -> Result<()> {
        self.cfg.check_caps(true)?;
        let b_q = self.cfg.b_qs[0];
        let sites = self.pair_sites(self.nn_default())?;
        let mut peaks = OutputFile::new(
            "peaks.csv",
            &[
                "delta",
                "family",
                "side",
                "period",
                "site",
                "displacement",
                "value",
            ],
        );
        peaks.note(format!(
            "peaks: argmax beyond {} sites of n0, association window +-ceil(K_s) around the extrapolated position",
            tracking::CORE_EXCLUSION
        ));
        for &delta in &self.cfg.deltas.clone() {
            let p = self.params(delta, b_q)?;
            let mut series = ObservableSeries::profiles();
            self.evolve_pair(&p, sites, &mut series)?;
            let lab = label(delta);
            let mut f = Self::profile_file(
                format!("profiles_delta{lab}.csv"),
                &series.profiles,
                &series.periods,
            );
            f.note(format!(
                "initial flips at sites {} and {}",
                sites.0 + 1,
                sites.1 + 1
            ));
            self.files.push(f);

            let img = image_parameters(&p);
            let tracks = track_peak_families(&series.profiles, p.n0, img.k_s, SEED_FRACTION);
            for t in &tracks {
                for (period, ((d, s), v)) in t
                    .displacements
                    .iter()
                    .zip(&t.sites)
                    .zip(&t.values)
                    .enumerate()
                {
                    peaks.row([
                        num(delta),
                        t.family.to_string(),
                        t.side.to_string(),
                        period.to_string(),
                        (s + 1).to_string(),
                        num(*d),
                        num(*v),
                    ]);
                }
            }
            let fast = family_speed(&tracks, "fast");
            let slow = family_speed(&tracks, "slow");
            if let Some(v) = fast {
                self.metric(format!("delta{lab}.fast_speed"), v);
            }
            if let Some(v) = slow {
                self.metric(format!("delta{lab}.slow_speed"), v);
            }
            if let (Some(a), Some(b)) = (fast, slow) {
                self.metric(format!("delta{lab}.speed_ratio"), a / b);
            }
            self.metric(format!("delta{lab}.am_hop_j2"), img.am_hop(2));
            if let Some(h) = img.am2_hop() {
                self.metric(format!("delta{lab}.am2_hop"), h);
            }
            if let Some(h) = img.bound_image_hop(1) {
                self.metric(format!("delta{lab}.bound_image_hop_j1"), h);
            }
        }
        self.files.push(peaks);
        Ok(())
    }

    fn correlation_metrics(&mut self, lab: &str, c: &CorrelationMatrix, n0: f64) {
        let n = c.n_sites();
        let fold = |s: usize| {
            let mut d = (s as f64 - n0).rem_euclid(n as f64);
            if d > n as f64 / 2.0 {
                d -= n as f64;
            }
            d
        };
        let core = tracking::CORE_EXCLUSION;
        let (mut anti, mut same) = (0.0, 0.0);
        for (n1, n2, v) in c.entries() {
            if n1 >= n2 {
                continue;
            }
            let (d1, d2) = (fold(n1), fold(n2));
            if d1.abs() <= core || d2.abs() <= core {
                continue;
            }
            if d1 * d2 < 0.0 {
                anti += v;
            } else if n1.abs_diff(n2).min(n - n1.abs_diff(n2)) > NEAR_DIAGONAL {
                same += v;
            }
        }
        self.metric(
            format!("delta{lab}.near_diagonal_mass"),
            c.near_diagonal_mass(NEAR_DIAGONAL),
        );
        self.metric(format!("delta{lab}.anticorrelated_mass"), anti);
        self.metric(format!("delta{lab}.same_side_far_mass"), same);
    }

    fn fig2(&mut self) -> Result<()> {
        self.cfg.check_caps(true)?;
        let b_q = self.cfg.b_qs[0];
        let sites = self.pair_sites(self.nn_default())?;
        for &delta in &self.cfg.deltas.clone() {
            let p = self.params(delta, b_q)?;
            let op = FloquetOperator::build(&p, Sector::Two)?;
            let psi = op.apply(&State::flip_pair(p.n_sites, sites.0, sites.1)?)?;
            let c = two_site_correlation(&psi)?;
            let lab = label(delta);
            let mut f = OutputFile::new(
                format!("correlation_delta{lab}.csv"),
                &["n1", "n2", "value"],
            );
            f.note(format!(
                "t = T from flips at sites {} and {}; upper triangle n1 < n2",
                sites.0 + 1,
                sites.1 + 1
            ));
            for (n1, n2, v) in c.entries() {
                if n1 < n2 {
                    f.row([(n1 + 1).to_string(), (n2 + 1).to_string(), num(v)]);
                }
            }
            self.files.push(f);
            self.correlation_metrics(&lab, &c, p.n0);
        }
        Ok(())
    }

    fn fig3(&mut self) -> Result<()> {
        self.cfg.check_caps(true)?;
        let m = match self.cfg.sites.as_deref() {
            None => self.centre_site(),
            Some([a]) => *a,
            Some([a, b]) if (a + 1) % self.cfg.n_sites == *b => *a,
            Some(_) => {
                return Err(Error::InvalidParams(
                    "fig3 starts from a nearest-neighbour pair".into(),
                ))
            }
        };
        let mut f = OutputFile::new("fidelity.csv", &["delta", "B_Q", "period", "fidelity"]);
        f.note(format!(
            "F = |<psi_nn|psi_exact>|^2 with psi_nn the normalized nearest-neighbour approximant ({}), pair starts at sites {} and {}",
            if self.cfg.kicked { "kicked, J' = J/(2 Delta), B_Q' = 2 B_Q, centre n0 - 1/2" } else { "unkicked hopping J' = J/(2 Delta)" },
            m + 1,
            (m + 1) % self.cfg.n_sites + 1
        ));
        for &delta in &self.cfg.deltas.clone() {
            for &b_q in &self.cfg.b_qs.clone() {
                let p = self.params(delta, b_q)?;
                let series = nn_fidelity_series(&p, m, self.cfg.n_periods, self.cfg.kicked)?;
                for r in &series {
                    f.row([num(delta), num(b_q), r.period.to_string(), num(r.fidelity)]);
                }
                for r in series.iter().take(3) {
                    self.metric(
                        format!("delta{}.bq{}.F{}", label(delta), label(b_q), r.period),
                        r.fidelity,
                    );
                }
                if let Some(last) = series.last() {
                    self.metric(
                        format!("delta{}.bq{}.F_final", label(delta), label(b_q)),
                        last.fidelity,
                    );
                }
            }
        }
        self.files.push(f);
        Ok(())
    }

    fn fig4(&mut self) -> Result<()> {
        self.cfg.check_caps(true)?;
        let b_q = self.cfg.b_qs[0];
        let c = self.centre_site();
        let n = self.cfg.n_sites;
        let sites = self.pair_sites(((c + n - 5) % n, (c + 5) % n))?;
        let n_periods = self.cfg.n_periods;
        let from = n_periods / 2;
        let mut f = OutputFile::new("moments.csv", &["delta", "period", "moment"]);
        f.note(format!(
            "moment = <(n1 + n2 - 2 n0)^2> B_Q^2, flips start at sites {} and {}; late window periods {from}..={n_periods}",
            sites.0 + 1,
            sites.1 + 1
        ));
        let mut k_s = 0.0;
        for &delta in &self.cfg.deltas.clone() {
            let p = self.params(delta, b_q)?;
            k_s = image_parameters(&p).k_s;
            let mut series = ObservableSeries::default().with_moment(p.n0, b_q);
            self.evolve_pair(&p, sites, &mut series)?;
            for (period, m) in series.periods.iter().zip(&series.moments) {
                f.row([num(delta), period.to_string(), num(*m)]);
            }
            let (slope, band) = late_trend(&series.moments, from);
            let lab = label(delta);
            self.metric(format!("delta{lab}.late_slope"), slope);
            self.metric(
                format!("delta{lab}.late_drift"),
                slope * (n_periods - from) as f64,
            );
            self.metric(format!("delta{lab}.late_band"), band);
            self.metric(
                format!("delta{lab}.final_moment"),
                *series.moments.last().unwrap_or(&0.0),
            );
        }
        self.files.push(f);

        let classical =
            classical_moment_series(k_s, 0.0, self.cfg.n_trajectories, n_periods, self.cfg.seed);
        let mut g = OutputFile::new("classical.csv", &["period", "p2"]);
        g.note(format!(
            "standard map at K = K_s, {} trajectories, x uniform, p = 0, seed {}; one rotor, compare 2 <p^2> with the pair moment",
            self.cfg.n_trajectories, self.cfg.seed
        ));
        for (period, v) in classical.iter().enumerate() {
            g.row([period.to_string(), num(*v)]);
        }
        self.files.push(g);
        Ok(())
    }

    fn bethe(&mut self) -> Result<()> {
        for &delta in &self.cfg.deltas.clone() {
            let p = self.params(delta, self.cfg.b_qs[0])?;
            let cat = enumerate_spectrum(&p)?;
            let lab = label(delta);
            let mut buf = Vec::new();
            cat.write_csv(&mut buf)
                .map_err(|e| Error::io(format!("catalog_delta{lab}.csv"), e))?;
            let text = String::from_utf8(buf).expect("catalog is ASCII");
            let mut lines = text.lines();
            let columns: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
            let mut f = OutputFile::new(format!("catalog_delta{lab}.csv"), &columns);
            f.note(
                "energies relative to the all-up state; Bethe numbers 0-based, lambda1 <= lambda2",
            );
            for u in &cat.unresolved {
                f.note(format!(
                    "unresolved block P={}: {} of {} roots",
                    u.block, u.found, u.expected
                ));
            }
            for l in lines {
                f.row(l.split(','));
            }
            self.files.push(f);

            let op = FloquetOperator::build(&p, Sector::Two)?;
            let mut exact: Vec<f64> = op
                .free_spectrum()
                .iter()
                .map(|e| e + op.sector_shift())
                .collect();
            exact.sort_by(f64::total_cmp);
            let bethe = cat.sorted_energies();
            let gap = if bethe.len() == exact.len() {
                bethe
                    .iter()
                    .zip(&exact)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            } else {
                f64::INFINITY
            };
            self.metric(
                format!("delta{lab}.resolved_fraction"),
                cat.resolved_fraction(),
            );
            self.metric(format!("delta{lab}.max_energy_gap"), gap);
            self.metric(
                format!("delta{lab}.bound"),
                cat.count(RootClass::Bound) as f64,
            );
            self.metric(
                format!("delta{lab}.scattering"),
                cat.count(RootClass::Scattering) as f64,
            );

            if delta > 0.0 {
                let mut g = OutputFile::new(
                    format!("bound_band_delta{lab}.csv"),
                    &["P", "K", "energy", "band", "deviation"],
                );
                g.note("band: 4B + J Delta - (J/2Delta)(1 + cos K)");
                let mut worst: f64 = 0.0;
                for (r, e) in cat.roots.iter().zip(&cat.energies) {
                    if let Some(dev) = bound_band_deviation(r, &p) {
                        let k = r.total_momentum(p.n_sites);
                        g.row([
                            r.block.to_string(),
                            num(k),
                            num(*e),
                            num(bound_band_energy(k, &p)?),
                            num(dev),
                        ]);
                        worst = worst.max(dev.abs());
                    }
                }
                self.metric(format!("delta{lab}.max_band_deviation"), worst);
                self.files.push(g);
            }
        }
        Ok(())
    }

    fn resonance(&mut self) -> Result<()> {
        self.cfg.check_caps(true)?;
        let delta = self.cfg.deltas[0];
        let b_q = self.cfg.b_qs[0];
        let p = self.params(delta, b_q)?;
        let n = p.n_sites;
        let c = self.centre_site();
        let nn = self.pair_sites(self.nn_default())?;
        let sep = self.cfg.control_separation.max(2);
        let control = ((c + n - sep / 2) % n, (c + sep - sep / 2) % n);
        let op = FloquetOperator::build(&p, Sector::Two)?;

        let mut f = OutputFile::new("moments.csv", &["run", "period", "moment"]);
        f.note(format!(
            "nn: flips at {} and {}; control: flips at {} and {}; moment = <(n1 + n2 - 2 n0)^2> B_Q^2",
            nn.0 + 1,
            nn.1 + 1,
            control.0 + 1,
            control.1 + 1
        ));
        f.note("growth = least-squares slope of the moment over all periods");
        let x: Vec<f64> = (0..=self.cfg.n_periods).map(|t| t as f64).collect();
        let mut growth = [0.0; 2];
        for (i, (name, sites)) in [("nn", nn), ("control", control)].into_iter().enumerate() {
            let mut series = ObservableSeries::default().with_moment(p.n0, b_q);
            evolve(
                &op,
                State::flip_pair(n, sites.0, sites.1)?,
                self.cfg.n_periods,
                &mut [&mut series],
            )?;
            for (period, m) in series.periods.iter().zip(&series.moments) {
                f.row([name.to_string(), period.to_string(), num(*m)]);
            }
            let (coef, r2) = quadratic_fit_xy(&x, &series.moments);
            growth[i] = linear_fit_xy(&x, &series.moments).0;
            self.metric(format!("{name}.quadratic_r2"), r2);
            self.metric(format!("{name}.quadratic_coefficient"), coef[2]);
            self.metric(format!("{name}.growth"), growth[i]);
        }
        self.metric(
            "growth_ratio",
            if growth[1].abs() > 0.0 {
                growth[0] / growth[1].abs()
            } else {
                f64::INFINITY
            },
        );

        // the bare bound-image rotor
        let img = image_parameters(&p);
        let (k_b, tau_b) = (img.k_b.unwrap_or(0.0), img.tau_b.unwrap_or(0.0));
        let basis = (8.0 * (k_b / tau_b).abs() * self.cfg.n_periods as f64).max(256.0) as usize;
        let rp = RotorParams::new(k_b, tau_b, basis.next_power_of_two());
        let prop = QkrPropagator::new(rp)?;
        let qkr = qkr_moment_series(&rp, &prop.plane_wave(0)?, self.cfg.n_periods)?;
        let mut g = OutputFile::new("qkr_moments.csv", &["period", "moment"]);
        g.note(format!(
            "QKR at K = K_b = {}, tau = tau_b = {}, start l = 0; moment <(l tau)^2>",
            num(k_b),
            num(tau_b)
        ));
        for (period, m) in qkr.iter().enumerate() {
            g.row([period.to_string(), num(*m)]);
        }
        let (_, r2) = quadratic_fit_xy(&x, &qkr);
        self.metric("qkr.quadratic_r2", r2);
        self.files.push(f);
        self.files.push(g);
        Ok(())
    }

    fn evolve(&mut self) -> Result<()> {
        let b_q = self.cfg.b_qs[0];
        let sites: Vec<usize> = self
            .cfg
            .sites
            .clone()
            .unwrap_or_else(|| vec![self.centre_site()]);
        let two = sites.len() == 2;
        self.cfg.check_caps(two)?;
        for &delta in &self.cfg.deltas.clone() {
            let p = self.params(delta, b_q)?;
            let lab = label(delta);
            let (op, initial) = if two {
                (
                    FloquetOperator::build(&p, Sector::Two)?,
                    State::flip_pair(p.n_sites, sites[0], sites[1])?,
                )
            } else {
                (
                    FloquetOperator::build(&p, Sector::One)?,
                    State::single_flip(p.n_sites, sites[0])?,
                )
            };
            let mut series = ObservableSeries::profiles();
            if two {
                series = series.with_moment(p.n0, b_q);
            }
            if let Some((a, b)) = self.cfg.average {
                series = series.averaging(a, b);
            }
            evolve(&op, initial, self.cfg.n_periods, &mut [&mut series])?;
            let mut f = Self::profile_file(
                format!("profiles_delta{lab}.csv"),
                &series.profiles,
                &series.periods,
            );
            f.note(format!(
                "initial flips at sites {:?}",
                sites.iter().map(|s| s + 1).collect::<Vec<_>>()
            ));
            self.files.push(f);
            if two {
                let mut g =
                    OutputFile::new(format!("moments_delta{lab}.csv"), &["period", "moment"]);
                for (period, m) in series.periods.iter().zip(&series.moments) {
                    g.row([period.to_string(), num(*m)]);
                }
                self.files.push(g);
            }
            if let (Some((a, b)), Some(avg)) = (self.cfg.average, series.averaged_profile()) {
                let centre = if two {
                    (sites[0] + sites[1]) as f64 / 2.0
                } else {
                    sites[0] as f64
                };
                let mut g = OutputFile::new(format!("averaged_delta{lab}.csv"), &["site", "value"]);
                g.note(format!("profile averaged over periods {a}..={b}"));
                for (s, v) in avg.iter().enumerate() {
                    g.row([(s + 1).to_string(), num(*v)]);
                }
                self.files.push(g);
                let l = localization_fit(&avg, centre);
                if let Ok(l) = l {
                    self.metric(format!("delta{lab}.localization_length"), l);
                }
                self.metric(
                    format!("delta{lab}.predicted_length"),
                    p.beta().powi(2) / 4.0,
                );
                if !two && delta == 0.0 {
                    // same fit on the matched rotor, started from l = 0
                    let rp = RotorParams::new(image_parameters(&p).k_s, b_q, p.n_sites);
                    let dist = qkr_time_averaged_distribution(&rp, 0, a, b)?;
                    let probs: Vec<f64> = dist.iter().map(|d| d.1).collect();
                    let centre = dist.iter().position(|d| d.0 == 0).unwrap_or(0) as f64;
                    if let Ok(lq) = localization_fit(&probs, centre) {
                        self.metric(format!("delta{lab}.qkr_localization_length"), lq);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Least-squares slope over `series[from..]` and twice the residual RMS.
pub fn late_trend(series: &[f64], from: usize) -> (f64, f64) {
    let tail = &series[from.min(series.len())..];
    if tail.len() < 2 {
        return (0.0, 0.0);
    }
    let x: Vec<f64> = (from..from + tail.len()).map(|t| t as f64).collect();
    let (slope, icpt) = linear_fit_xy(&x, tail);
    let rms = (x
        .iter()
        .zip(tail)
        .map(|(t, y)| (y - slope * t - icpt).powi(2))
        .sum::<f64>()
        / tail.len() as f64)
        .sqrt();
    (slope, 2.0 * rms)
}

/// Runs the configured experiment without touching the file system.
pub fn run_experiment(config: &RunConfig) -> Result<RunOutput> {
    let mut r = Runner {
        cfg: config,
        files: Vec::new(),
        metrics: Vec::new(),
        header: Vec::new(),
    };
    match config.experiment {
        Experiment::Fig1 => r.fig1()?,
        Experiment::Fig2 => r.fig2()?,
        Experiment::Fig3 => r.fig3()?,
        Experiment::Fig4 => r.fig4()?,
        Experiment::Bethe => r.bethe()?,
        Experiment::Resonance => r.resonance()?,
        Experiment::Evolve => r.evolve()?,
    }
    let mut summary = OutputFile::new("summary.csv", &["key", "value"]);
    for (k, v) in &r.metrics {
        summary.row([k.clone(), num(*v)]);
    }
    r.files.push(summary);
    Ok(RunOutput {
        config: config.clone(),
        files: r.files,
        metrics: r.metrics,
        header: r.header,
    })
}

/// Writes every table plus `manifest.json` into `dir`.
pub fn emit_outputs(run: &RunOutput, dir: &Path) -> Result<OutputManifest> {
    let manifest = OutputManifest {
        code_version: format!("kickedxxz {}", env!("CARGO_PKG_VERSION")),
        experiment: run.config.experiment.name().to_string(),
        config: run.config.echo.clone(),
        override_caps: run.config.override_caps,
        substitutions: run.config.substitutions.clone(),
        conventions: CONVENTIONS.iter().map(|s| s.to_string()).collect(),
        header: run.header.clone(),
        files: Vec::new(),
    };
    output::write_files(dir, &run.files, manifest)
}

/// Parses `text`, runs it and writes the results into `dir`.
pub fn run_config_text(text: &str, dir: &Path) -> Result<(RunOutput, OutputManifest)> {
    let cfg = parse_config(text)?;
    let run = run_experiment(&cfg)?;
    let manifest = emit_outputs(&run, dir)?;
    Ok((run, manifest))
}
