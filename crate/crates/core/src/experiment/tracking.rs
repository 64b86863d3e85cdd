//! Wavepacket peak tracking on magnetization profiles.
//!
//! A peak is the argmax of the profile restricted to sites more than
//! [`CORE_EXCLUSION`] sites from the kick centre. Families are seeded from the
//! local maxima at period 1 on each side of the centre: the dominant maximum
//! seeds the slow family and the outermost maximum above a fraction of it
//! seeds the fast one. Each is followed period by period inside an
//! association window of `±⌈K_s⌉` sites around the linearly extrapolated
//! position. Displacements are unwrapped so a packet may run around the ring.

use crate::rotor::linear_fit_xy;

pub const CORE_EXCLUSION: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PeakTrack {
    /// `"fast"` for the outermost family at period 1, `"slow"` for the dominant one.
    pub family: &'static str,
    /// `+1` or `-1`: side of the centre the family leaves towards.
    pub side: i8,
    /// Unwrapped displacement from the centre per period, starting at period 0
    /// with 0.
    pub displacements: Vec<f64>,
    /// 0-based ring site per period (period 0 is the centre, rounded).
    pub sites: Vec<usize>,
    pub values: Vec<f64>,
}

impl PeakTrack {
    /// Least-squares hop in sites per period, taken as a magnitude.
    pub fn speed(&self) -> f64 {
        let x: Vec<f64> = (0..self.displacements.len()).map(|p| p as f64).collect();
        linear_fit_xy(&x, &self.displacements).0.abs()
    }
}

fn ring_site(pos: f64, n: usize) -> usize {
    (pos.round() as i64).rem_euclid(n as i64) as usize
}

/// Signed displacement of `site` from `centre` folded into `(-N/2, N/2]`.
fn folded(site: usize, centre: f64, n: usize) -> f64 {
    let nf = n as f64;
    let mut d = (site as f64 - centre).rem_euclid(nf);
    if d > nf / 2.0 {
        d -= nf;
    }
    d
}

/// Local maxima beyond the core exclusion on one side, with at least
/// `min_fraction` of that side's largest value.
fn seeds(profile: &[f64], centre: f64, side: i8, min_fraction: f64) -> Vec<(f64, f64)> {
    let n = profile.len();
    let cand: Vec<(f64, f64)> = (0..n)
        .filter_map(|s| {
            let d = folded(s, centre, n);
            let left = profile[(s + n - 1) % n];
            let right = profile[(s + 1) % n];
            let v = profile[s];
            (d * side as f64 > CORE_EXCLUSION && v >= left && v >= right && v > 0.0)
                .then_some((d, v))
        })
        .collect();
    let top = cand.iter().map(|c| c.1).fold(0.0, f64::max);
    cand.into_iter()
        .filter(|c| c.1 >= min_fraction * top)
        .collect()
}

/// Follows a packet from its period-1 displacement `d1`.
fn follow(
    profiles: &[Vec<f64>],
    centre: f64,
    d1: f64,
    window: usize,
) -> (Vec<f64>, Vec<usize>, Vec<f64>) {
    let n = profiles[0].len();
    let mut disp = vec![0.0, d1];
    let mut sites = vec![ring_site(centre, n), ring_site(centre + d1, n)];
    let mut values = vec![profiles[0][sites[0]], profiles[1][sites[1]]];
    for prof in &profiles[2..] {
        let k = disp.len();
        let predicted = 2.0 * disp[k - 1] - disp[k - 2];
        let w = window as i64;
        let mut best: Option<(f64, f64)> = None;
        for off in -w..=w {
            let d = predicted.round() + off as f64;
            if d.abs() <= CORE_EXCLUSION {
                continue;
            }
            let v = prof[ring_site(centre + d, n)];
            if best.is_none_or(|b| v > b.1) {
                best = Some((d, v));
            }
        }
        let (d, v) = best.unwrap_or((predicted, 0.0));
        disp.push(d);
        sites.push(ring_site(centre + d, n));
        values.push(v);
    }
    (disp, sites, values)
}

/// Tracks the fast and slow families on both sides. `profiles[p]` is the
/// profile after `p` periods; at least two periods are needed.
pub fn track_peak_families(
    profiles: &[Vec<f64>],
    centre: f64,
    k_s: f64,
    min_fraction: f64,
) -> Vec<PeakTrack> {
    if profiles.len() < 2 {
        return Vec::new();
    }
    let window = k_s.abs().ceil().max(1.0) as usize;
    let mut out = Vec::new();
    for side in [1i8, -1] {
        let s = seeds(&profiles[1], centre, side, min_fraction);
        let Some(outer) = s
            .iter()
            .copied()
            .max_by(|a, b| a.0.abs().total_cmp(&b.0.abs()))
        else {
            continue;
        };
        let dominant = s
            .iter()
            .copied()
            // ties go to the innermost peak
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.abs().total_cmp(&a.0.abs())))
            .unwrap();
        let mut fams = vec![("fast", outer)];
        if dominant.0 != outer.0 {
            fams.push(("slow", dominant));
        }
        for (family, (d1, _)) in fams {
            let (displacements, sites, values) = follow(profiles, centre, d1, window);
            out.push(PeakTrack {
                family,
                side,
                displacements,
                sites,
                values,
            });
        }
    }
    out
}

/// Mean speed of a family over both sides.
pub fn family_speed(tracks: &[PeakTrack], family: &str) -> Option<f64> {
    let v: Vec<f64> = tracks
        .iter()
        .filter(|t| t.family == family)
        .map(PeakTrack::speed)
        .collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(n: usize, centres: &[f64]) -> Vec<f64> {
        (0..n)
            .map(|s| {
                centres
                    .iter()
                    .map(|c| (-(folded(s, *c, n)).powi(2) / 4.0).exp())
                    .sum()
            })
            .collect()
    }

    #[test]
    fn two_families_with_wrap() {
        let n = 200;
        let c = 100.0;
        // fast at ±60/period (wraps after period 2), slow at ±15/period
        let profiles: Vec<Vec<f64>> = (0..4)
            .map(|p| {
                let p = p as f64;
                gauss(
                    n,
                    &[c, c + 60.0 * p, c - 60.0 * p, c + 15.0 * p, c - 15.0 * p],
                )
            })
            .collect();
        let t = track_peak_families(&profiles, c, 13.0, 0.2);
        assert_eq!(t.len(), 4);
        assert!((family_speed(&t, "fast").unwrap() - 60.0).abs() < 1e-9);
        assert!((family_speed(&t, "slow").unwrap() - 15.0).abs() < 1e-9);
        assert_eq!(t[0].displacements, vec![0.0, 60.0, 120.0, 180.0]);
    }
}
