//! `key = value` run configurations.
//!
//! Lines are trimmed; blank lines and lines starting with `#` are skipped, and
//! a trailing `# comment` after a value is dropped. Keys are case-sensitive and
//! unknown keys are rejected. Sites are 1-based in the file and 0-based once
//! parsed. Numbers may carry a `pi` suffix (`4pi`, `0.5pi`, `pi`).

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::chain::ChainParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Bethe,
    Resonance,
    Evolve,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig1 => "fig1",
            Experiment::Fig2 => "fig2",
            Experiment::Fig3 => "fig3",
            Experiment::Fig4 => "fig4",
            Experiment::Bethe => "bethe",
            Experiment::Resonance => "resonance",
            Experiment::Evolve => "evolve",
        }
    }

    fn needs_periods(self) -> bool {
        !matches!(self, Experiment::Bethe | Experiment::Fig2)
    }
}

impl FromStr for Experiment {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "fig1" => Experiment::Fig1,
            "fig2" => Experiment::Fig2,
            "fig3" => Experiment::Fig3,
            "fig4" => Experiment::Fig4,
            "bethe" => Experiment::Bethe,
            "resonance" => Experiment::Resonance,
            "evolve" => Experiment::Evolve,
            other => {
                return Err(format!(
                    "unknown experiment '{other}' (expected fig1, fig2, fig3, fig4, bethe, resonance or evolve)"
                ))
            }
        })
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How the exchange coupling is given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    /// `J` directly.
    J(f64),
    /// `K_s = J·T·B_Q`; needs a single non-zero `B_Q`.
    K(f64),
    /// `J·T/Δ` held fixed while `Δ` is swept.
    JtPerDelta(f64),
}

/// Desk-scale caps enforced unless `override_caps` is set.
pub const MAX_TWO_FLIP_SITES: usize = 400;
pub const MAX_ONE_FLIP_SITES: usize = 4096;
pub const MAX_PERIODS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub n_sites: usize,
    pub coupling: Coupling,
    pub deltas: Vec<f64>,
    pub b_qs: Vec<f64>,
    pub b: f64,
    pub period: f64,
    /// Kick centre, 0-based.
    pub n0: f64,
    pub n_periods: usize,
    /// Initial flips, 0-based. `None` means the experiment's default.
    pub sites: Option<Vec<usize>>,
    pub out_dir: Option<PathBuf>,
    pub seed: u64,
    pub n_trajectories: usize,
    pub override_caps: bool,
    /// Fig. 3: kicked approximant (`true`) or the unkicked hopping form.
    pub kicked: bool,
    /// Time-averaging window for `evolve`, inclusive.
    pub average: Option<(usize, usize)>,
    /// Flip separation of the resonance control run.
    pub control_separation: usize,
    /// Keys as written, for the output headers.
    pub echo: Vec<(String, String)>,
    /// Human-readable notes on scale substitutions.
    pub substitutions: Vec<String>,
}

const KEYS: &[&str] = &[
    "experiment",
    "N",
    "J",
    "K",
    "JT_per_Delta",
    "Delta",
    "B_Q",
    "tau_b",
    "B",
    "T",
    "n0",
    "n_periods",
    "sites",
    "out",
    "seed",
    "n_trajectories",
    "override_caps",
    "kicked",
    "average_from",
    "average_to",
    "control_separation",
    "scale_N",
    "scale_JT",
];

fn parse_number(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let v = if let Some(head) = s.strip_suffix("pi") {
        let head = head.trim().trim_end_matches('*').trim();
        let k = if head.is_empty() {
            1.0
        } else {
            head.parse::<f64>().map_err(|e| format!("'{s}': {e}"))?
        };
        k * PI
    } else {
        s.parse::<f64>().map_err(|e| format!("'{s}': {e}"))?
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(parse_number)
        .collect::<std::result::Result<_, _>>()?;
    if v.is_empty() {
        return Err("empty list".into());
    }
    Ok(v)
}

fn parse_count(s: &str) -> std::result::Result<usize, String> {
    s.trim().parse::<usize>().map_err(|e| format!("'{s}': {e}"))
}

fn parse_bool(s: &str) -> std::result::Result<bool, String> {
    match s.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(format!("'{other}' is not a boolean")),
    }
}

/// Raw key/value lines with their line numbers.
struct Entries {
    map: BTreeMap<String, (usize, String)>,
    order: Vec<(String, String)>,
}

impl Entries {
    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.map.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn parsed<T>(
        &self,
        key: &str,
        f: impl Fn(&str) -> std::result::Result<T, String>,
    ) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some((line, v)) => f(v).map(Some).map_err(|msg| Error::Config {
                line,
                msg: format!("{key}: {msg}"),
            }),
        }
    }

    fn line(&self, key: &str) -> usize {
        self.get(key).map_or(0, |(l, _)| l)
    }
}

fn tokenize(text: &str) -> Result<Entries> {
    let mut map = BTreeMap::new();
    let mut order = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (k, v) = content.split_once('=').ok_or_else(|| Error::Config {
            line,
            msg: format!("expected 'key = value', got '{content}'"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(Error::Config {
                line,
                msg: format!("unknown key '{k}'"),
            });
        }
        if v.is_empty() {
            return Err(Error::Config {
                line,
                msg: format!("key '{k}' has no value"),
            });
        }
        if map.insert(k.to_string(), (line, v.to_string())).is_some() {
            return Err(Error::Config {
                line,
                msg: format!("duplicate key '{k}'"),
            });
        }
        order.push((k.to_string(), v.to_string()));
    }
    Ok(Entries { map, order })
}

/// Parses and validates a run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let e = tokenize(text)?;
    let missing = |key: &str| Error::Config {
        line: 0,
        msg: format!("missing required key '{key}'"),
    };

    let experiment: Experiment = e
        .parsed("experiment", |s| s.parse())?
        .ok_or_else(|| missing("experiment"))?;
    let mut n_sites = e.parsed("N", parse_count)?.ok_or_else(|| missing("N"))?;
    let period = e.parsed("T", parse_number)?.unwrap_or(1.0);
    if !(period > 0.0) {
        return Err(Error::Config {
            line: e.line("T"),
            msg: "T must be positive".into(),
        });
    }
    let b = e.parsed("B", parse_number)?.unwrap_or(0.0);

    let deltas = match e.parsed("Delta", parse_list)? {
        Some(d) => d,
        None if experiment == Experiment::Resonance => vec![4.0],
        None => return Err(missing("Delta")),
    };
    if let Some(d) = deltas.iter().find(|d| **d < 0.0) {
        return Err(Error::Config {
            line: e.line("Delta"),
            msg: format!("Delta must be non-negative, got {d}"),
        });
    }

    let b_qs = match (e.parsed("B_Q", parse_list)?, e.parsed("tau_b", parse_list)?) {
        (Some(_), Some(_)) => {
            return Err(Error::Config {
                line: e.line("tau_b"),
                msg: "give either B_Q or tau_b, not both".into(),
            })
        }
        (Some(v), None) => v,
        (None, Some(t)) => t.into_iter().map(|t| t / 2.0).collect(),
        (None, None) => vec![0.0],
    };
    if let Some(v) = b_qs.iter().find(|v| **v < 0.0) {
        return Err(Error::Config {
            line: e.line("B_Q"),
            msg: format!("B_Q must be non-negative, got {v}"),
        });
    }

    let couplings = [
        e.parsed("J", parse_number)?.map(Coupling::J),
        e.parsed("K", parse_number)?.map(Coupling::K),
        e.parsed("JT_per_Delta", parse_number)?
            .map(Coupling::JtPerDelta),
    ];
    let mut given = couplings.iter().flatten();
    let mut coupling = *given.next().ok_or_else(|| missing("J"))?;
    if given.next().is_some() {
        return Err(Error::Config {
            line: 0,
            msg: "give exactly one of J, K, JT_per_Delta".into(),
        });
    }
    if let Coupling::K(_) = coupling {
        if b_qs.len() != 1 || b_qs[0] == 0.0 {
            return Err(Error::Config {
                line: e.line("K"),
                msg: "K sets J = K/(T·B_Q) and needs a single non-zero B_Q".into(),
            });
        }
    }
    if let Coupling::JtPerDelta(_) = coupling {
        if let Some(d) = deltas.iter().find(|d| **d == 0.0) {
            return Err(Error::Config {
                line: e.line("JT_per_Delta"),
                msg: format!("JT_per_Delta needs Delta > 0, got {d}"),
            });
        }
    }

    let mut substitutions = Vec::new();
    if let Some(n) = e.parsed("scale_N", parse_count)? {
        substitutions.push(format!("N {n_sites} -> {n}"));
        n_sites = n;
    }
    if let Some(jt) = e.parsed("scale_JT", parse_number)? {
        let j = jt / period;
        substitutions.push(format!("JT -> {jt:?} (J = {j:?})"));
        coupling = Coupling::J(j);
    }
    if n_sites < 4 {
        return Err(Error::Config {
            line: e.line("N"),
            msg: format!("N must be at least 4, got {n_sites}"),
        });
    }

    let to_site = |v: f64, key: &str| -> Result<f64> {
        if v < 1.0 || v > n_sites as f64 {
            return Err(Error::Config {
                line: e.line(key),
                msg: format!("{key} = {v} is outside 1..={n_sites}"),
            });
        }
        Ok(v - 1.0)
    };
    let n0 = match e.parsed("n0", parse_number)? {
        Some(v) => to_site(v, "n0")?,
        None => (n_sites / 2) as f64 - 1.0,
    };
    let sites = match e.parsed("sites", |s| {
        s.split(',')
            .map(parse_count)
            .collect::<std::result::Result<Vec<_>, _>>()
    })? {
        None => None,
        Some(v) => {
            let line = e.line("sites");
            if v.is_empty() || v.len() > 2 {
                return Err(Error::Config {
                    line,
                    msg: "sites takes one or two 1-based sites".into(),
                });
            }
            if let Some(s) = v.iter().find(|s| **s < 1 || **s > n_sites) {
                return Err(Error::Config {
                    line,
                    msg: format!("site {s} is outside 1..={n_sites}"),
                });
            }
            if v.len() == 2 && v[0] == v[1] {
                return Err(Error::Config {
                    line,
                    msg: "the two flips must sit on different sites".into(),
                });
            }
            Some(v.into_iter().map(|s| s - 1).collect())
        }
    };

    let n_periods = match e.parsed("n_periods", parse_count)? {
        Some(p) => p,
        None if experiment.needs_periods() => return Err(missing("n_periods")),
        None => 1,
    };

    let average = match (
        e.parsed("average_from", parse_count)?,
        e.parsed("average_to", parse_count)?,
    ) {
        (None, None) => None,
        (Some(a), Some(b)) if a <= b && b <= n_periods => Some((a, b)),
        (Some(_), Some(_)) => {
            return Err(Error::Config {
                line: e.line("average_to"),
                msg: "averaging window needs average_from <= average_to <= n_periods".into(),
            })
        }
        _ => {
            return Err(Error::Config {
                line: 0,
                msg: "give both average_from and average_to".into(),
            })
        }
    };

    let config = RunConfig {
        experiment,
        n_sites,
        coupling,
        deltas,
        b_qs,
        b,
        period,
        n0,
        n_periods,
        sites,
        out_dir: e.get("out").map(|(_, v)| PathBuf::from(v)),
        seed: e
            .parsed("seed", |s| {
                s.trim().parse::<u64>().map_err(|x| x.to_string())
            })?
            .unwrap_or(0),
        n_trajectories: e.parsed("n_trajectories", parse_count)?.unwrap_or(2000),
        override_caps: e.parsed("override_caps", parse_bool)?.unwrap_or(false),
        kicked: e.parsed("kicked", parse_bool)?.unwrap_or(true),
        average,
        control_separation: e.parsed("control_separation", parse_count)?.unwrap_or(20),
        echo: e.order.clone(),
        substitutions,
    };
    config.check_experiment_needs(&e)?;
    Ok(config)
}

impl RunConfig {
    fn check_experiment_needs(&self, e: &Entries) -> Result<()> {
        let line = e.line("Delta");
        match self.experiment {
            Experiment::Fig3 => {
                if let Some(d) = self.deltas.iter().find(|d| **d <= 0.0) {
                    return Err(Error::Config {
                        line,
                        msg: format!("fidelity experiment requires Delta > 0 (the approximant divides by Delta), got {d}"),
                    });
                }
            }
            Experiment::Resonance => {
                if self.deltas.len() != 1 || self.deltas[0] <= 0.0 {
                    return Err(Error::Config {
                        line,
                        msg: "resonance needs a single Delta > 0".into(),
                    });
                }
                if self.b_qs.len() != 1 || self.b_qs[0] <= 0.0 {
                    return Err(Error::Config {
                        line: e.line("B_Q"),
                        msg: "resonance needs a single B_Q > 0".into(),
                    });
                }
            }
            Experiment::Fig1 | Experiment::Fig2 | Experiment::Fig4 | Experiment::Evolve => {
                if self.b_qs.len() != 1 {
                    return Err(Error::Config {
                        line: e.line("B_Q"),
                        msg: format!("{} takes a single B_Q", self.experiment),
                    });
                }
            }
            Experiment::Bethe => {}
        }
        Ok(())
    }

    /// `J` for a given `Δ` and `B_Q`.
    pub fn coupling_for(&self, delta: f64, b_q: f64) -> f64 {
        match self.coupling {
            Coupling::J(j) => j,
            Coupling::K(k) => k / (self.period * b_q),
            Coupling::JtPerDelta(r) => r * delta / self.period,
        }
    }

    pub fn chain_params(&self, delta: f64, b_q: f64) -> ChainParams {
        ChainParams::new(self.n_sites, self.coupling_for(delta, b_q), delta)
            .with_kick(b_q, self.n0)
            .with_field(self.b)
            .with_period(self.period)
    }

    /// Desk-scale caps for a run in the given sector.
    pub fn check_caps(&self, two_flip: bool) -> Result<()> {
        if self.override_caps {
            return Ok(());
        }
        let cap = if two_flip {
            MAX_TWO_FLIP_SITES
        } else {
            MAX_ONE_FLIP_SITES
        };
        if self.n_sites > cap {
            let sector = if two_flip { "two-flip" } else { "one-flip" };
            return Err(Error::CapExceeded(format!(
                "N = {} > {cap} for a {sector} run",
                self.n_sites
            )));
        }
        if self.n_periods > MAX_PERIODS {
            return Err(Error::CapExceeded(format!(
                "n_periods = {} > {MAX_PERIODS}",
                self.n_periods
            )));
        }
        Ok(())
    }
}
