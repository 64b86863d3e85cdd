//! Acceptance harness: one PASS/FAIL line per criterion.
//!
//! A criterion prints FAIL when its stated target is not met. Independently of
//! that verdict, each criterion carries checks that must hold for the code to
//! be correct (`require`); any broken requirement makes the target exit
//! non-zero. Where a stated target is known to be unreachable the line says
//! why and the requirement checks the physically consistent statement.

use std::fs;
use std::path::Path;
use std::time::Instant;

use kickedxxz::bessel::bessel_j;
use kickedxxz::bethe::{bound_band_deviation, bound_band_energy, enumerate_spectrum, RootClass};
use kickedxxz::chain::{build_sector_h, pair_index, ChainParams, Sector, State};
use kickedxxz::chebyshev::{chebyshev_apply, ChebyshevOptions};
use kickedxxz::experiment::{emit_outputs, parse_config, run_experiment, RunOutput};
use kickedxxz::fermion::{one_period_magnetization, two_flip_element, BesselPropagatorSpec};
use kickedxxz::floquet::FloquetOperator;
use kickedxxz::observables::magnetization_profile;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Harness {
    broken: Vec<String>,
}

impl Harness {
    fn report(&self, k: usize, name: &str, pass: bool, detail: String, t: Instant) {
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {k:2} {verdict} [{name}] {detail} ({:.1} s)",
            t.elapsed().as_secs_f64()
        );
    }

    fn require(&mut self, k: usize, ok: bool, what: &str) {
        if !ok {
            println!("    requirement broken in criterion {k}: {what}");
            self.broken.push(format!("{k}: {what}"));
        }
    }
}

fn run(text: &str) -> RunOutput {
    run_experiment(&parse_config(text).expect("config")).expect("run")
}

fn metric(r: &RunOutput, key: &str) -> f64 {
    r.metric(key)
        .unwrap_or_else(|| panic!("missing metric {key}"))
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> State {
    let amps = (0..Sector::Two.dimension(n))
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    State::from_amplitudes(Sector::Two, n, amps)
        .unwrap()
        .normalized()
        .unwrap()
}

fn sorted_exact(p: &ChainParams) -> Vec<f64> {
    let h = build_sector_h(p, Sector::Two).unwrap();
    let mut e: Vec<f64> = SymmetricEigen::new(h.to_dense())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    e.sort_by(f64::total_cmp);
    e
}

fn c1(h: &mut Harness) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut unit, mut cheb): (f64, f64) = (0.0, 0.0);
    for n in [8, 12, 16] {
        for delta in [0.0, 0.5, 1.0, 2.0] {
            let p = ChainParams::new(n, 3.0, delta).with_kick(0.5, (n / 2) as f64);
            let hb = build_sector_h(&p, Sector::Two).unwrap();
            let op = FloquetOperator::from_hamiltonian(&p, &hb).unwrap();
            let u = op.to_dense().unwrap();
            let d = u.nrows();
            unit = unit.max(
                (u.adjoint() * &u - DMatrix::identity(d, d))
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max),
            );
            let opts = ChebyshevOptions {
                shift: op.sector_shift(),
                ..Default::default()
            };
            for _ in 0..20 {
                let psi = random_state(&mut rng, n);
                let a = op.apply(&psi).unwrap();
                let free = chebyshev_apply(&hb, psi.amps(), p.period, &opts).unwrap();
                for ((x, y), k) in a.amps().iter().zip(&free).zip(op.kick_phases()) {
                    cheb = cheb.max((x - y * k).norm());
                }
            }
        }
    }
    let pass = unit < 1e-10 && cheb < 1e-8 && t.elapsed().as_secs() < 60;
    h.report(
        1,
        "unitarity & oracle equivalence",
        pass,
        format!("max|U+U-I| = {unit:.1e}, max|eig - Chebyshev| = {cheb:.1e}"),
        t,
    );
    h.require(1, pass, "unitarity and Chebyshev agreement");
}

fn c2(h: &mut Harness) {
    let t = Instant::now();
    let n = 32;
    let p = ChainParams::new(n, 5.0, 0.0).with_kick(0.3, 15.0);
    let u = FloquetOperator::build(&p, Sector::Two)
        .unwrap()
        .to_dense()
        .unwrap();
    let spec = BesselPropagatorSpec::from_params(&p);
    let interior = 8..=24usize;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for m1 in interior.clone() {
        for m2 in m1 + 1..=24 {
            for n1 in interior.clone() {
                for n2 in n1 + 1..=24 {
                    // converged interior: every Bessel index in the determinant,
                    // including the exchange pairings, is at most N/4 so ring
                    // images sit at distance >= 3N/4
                    let far = [(n1, m1), (n2, m2), (n1, m2), (n2, m1)]
                        .iter()
                        .any(|(a, b)| a.abs_diff(*b) > n / 4);
                    if far {
                        continue;
                    }
                    let want = two_flip_element(n1 as i64, n2 as i64, m1 as i64, m2 as i64, &spec);
                    let got = u[(
                        pair_index(n1, n2, n).unwrap(),
                        pair_index(m1, m2, n).unwrap(),
                    )];
                    worst = worst.max((got - want).norm());
                    count += 1;
                }
            }
        }
    }
    let pass = worst < 1e-8;
    h.report(
        2,
        "Delta=0 Bessel determinant",
        pass,
        format!("{count} interior entries, max deviation {worst:.1e}"),
        t,
    );
    h.require(2, pass, "determinant form");
}

fn c3(h: &mut Harness) {
    let t = Instant::now();
    let (n, n0, beta) = (256usize, 127usize, 65.0);
    let p = ChainParams::new(n, beta, 0.0).with_kick(0.2, n0 as f64);
    let op = FloquetOperator::build(&p, Sector::Two).unwrap();
    let prof = magnetization_profile(&op.apply(&State::flip_pair(n, n0, n0 + 1).unwrap()).unwrap());
    let (mut quoted, mut mirrored): (f64, f64) = (0.0, 0.0);
    for (s, v) in prof.iter().enumerate() {
        let d = s as i64 - n0 as i64;
        quoted = quoted.max((v - bessel_j(d, beta).powi(2) - bessel_j(d + 1, beta).powi(2)).abs());
        mirrored = mirrored.max((v - one_period_magnetization(s as i64, n0 as i64, beta)).abs());
    }
    let pass = quoted < 1e-8;
    h.report(
        3,
        "one-period magnetization",
        pass,
        format!(
            "vs J^2(n-n0)+J^2(n-n0+1): {quoted:.1e}; vs J^2(n-n0)+J^2(n-n0-1) (two independent flips at n0, n0+1): {mirrored:.1e}; the quoted index describes flips at n0-1, n0"
        ),
        t,
    );
    h.require(3, mirrored < 1e-8, "independent-flip profile of |n0, n0+1>");
}

fn c4(h: &mut Harness) {
    let t = Instant::now();
    let (mut gap, mut resolved): (f64, f64) = (0.0, 1.0);
    for n in [12, 16] {
        for delta in [0.5, 1.0, 2.0] {
            let p = ChainParams::new(n, 1.0, delta);
            let cat = enumerate_spectrum(&p).unwrap();
            resolved = resolved.min(cat.resolved_fraction());
            let exact = sorted_exact(&p);
            let bethe = cat.sorted_energies();
            gap = if bethe.len() == exact.len() {
                gap.max(
                    bethe
                        .iter()
                        .zip(&exact)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max),
                )
            } else {
                f64::INFINITY
            };
        }
    }
    // Δ = 3: one bound pair per momentum, all below the two-magnon continuum
    let mut classified = true;
    for n in [12, 16] {
        let p = ChainParams::new(n, 1.0, 3.0);
        let cat = enumerate_spectrum(&p).unwrap();
        let bound_max = cat
            .roots
            .iter()
            .zip(&cat.energies)
            .filter(|(r, _)| r.class == RootClass::Bound)
            .map(|(_, e)| *e)
            .fold(f64::MIN, f64::max);
        let scat_min = cat
            .roots
            .iter()
            .zip(&cat.energies)
            .filter(|(r, _)| r.class != RootClass::Bound)
            .map(|(_, e)| *e)
            .fold(f64::MAX, f64::min);
        classified &= cat.count(RootClass::Bound) == n && bound_max < scat_min;
    }
    let pass = gap < 1e-7 && resolved >= 0.98 && classified && t.elapsed().as_secs() < 120;
    h.report(4, "Bethe completeness", pass, format!("max |E_Bethe - E_exact| = {gap:.1e}, resolved >= {resolved}, Delta=3 bands separated: {classified}"), t);
    h.require(4, pass, "Bethe spectrum");
}

fn c5(h: &mut Harness) {
    let t = Instant::now();
    let mut devs = Vec::new();
    for n in [16, 32, 64] {
        let p = ChainParams::new(n, 1.0, 3.0);
        let cat = enumerate_spectrum(&p).unwrap();
        let d = cat
            .roots
            .iter()
            .filter_map(|r| bound_band_deviation(r, &p))
            .fold(0.0f64, |a, d| a.max(d.abs()));
        let direct = cat
            .roots
            .iter()
            .zip(&cat.energies)
            .filter(|(r, _)| r.bound.is_some())
            .map(|(r, e)| (e - bound_band_energy(r.total_momentum(n), &p).unwrap()).abs())
            .fold(0.0f64, f64::max);
        devs.push((n, d, direct));
    }
    let pass = devs[0].1 > devs[1].1 && devs[1].1 > devs[2].1;
    let detail = devs
        .iter()
        .map(|(n, d, e)| format!("N={n}: {d:.2e} (direct {e:.1e})"))
        .collect::<Vec<_>>()
        .join(", ");
    h.report(5, "bound-band dispersion", pass, detail, t);
    h.require(5, pass, "monotone bound-band deviation");
}

fn c6(h: &mut Harness) {
    let t = Instant::now();
    let f1 = run("experiment=fig1\nN=400\nJ=130\nDelta=2\nB_Q=0.1\nn_periods=3\n");
    let ratio = metric(&f1, "delta2.speed_ratio");
    let (fast, slow) = (
        metric(&f1, "delta2.fast_speed"),
        metric(&f1, "delta2.slow_speed"),
    );
    let f2 = run("experiment=fig2\nN=400\nJ=130\nDelta=2\nB_Q=0.1\n");
    let near = metric(&f2, "delta2.near_diagonal_mass");
    let anti = metric(&f2, "delta2.anticorrelated_mass");
    let same = metric(&f2, "delta2.same_side_far_mass");
    let target = 8.0;
    let pass = (ratio / target - 1.0).abs() <= 0.3 && near > 0.2 && anti > same;
    h.report(
        6,
        "accelerator-mode speed ratio",
        pass,
        format!(
            "AM {fast:.1} sites/period, AM2 {slow:.1} sites/period, ratio {ratio:.2} vs 2j*Delta = {target}; \
             AM2 hop matches 2pi/tau_b = {:.1}, not pi/(Delta B_Q) = {:.1}; near-diagonal mass {near:.3}, \
             anticorrelated {anti:.3} vs same-side far {same:.3}",
            metric(&f1, "delta2.bound_image_hop_j1"),
            metric(&f1, "delta2.am2_hop")
        ),
        t,
    );
    h.require(
        6,
        (ratio / 4.0 - 1.0).abs() <= 0.3,
        "speed ratio within 30% of 2*Delta = 4",
    );
    h.require(
        6,
        near > 0.2 && anti > same,
        "correlation structure at t = T",
    );
}

fn c7(h: &mut Harness) {
    let t = Instant::now();
    let r = run("experiment=evolve\nN=512\nK=5\nB_Q=1\nDelta=0\nn_periods=400\naverage_from=200\naverage_to=400\n");
    let l = metric(&r, "delta0.localization_length");
    let lq = metric(&r, "delta0.qkr_localization_length");
    let target = 6.25;
    let within2 = l / target <= 2.0 && target / l <= 2.0;
    let qkr_ok = (lq / l - 1.0).abs() <= 0.1;
    h.report(
        7,
        "localization length",
        within2 && qkr_ok,
        format!(
            "L = {l:.2} vs (JT)^2/4 = {target} (ratio {:.2}); matched QKR L = {lq:.2}",
            l / target
        ),
        t,
    );
    h.require(7, qkr_ok, "spin chain and rotor agree within 10%");
    h.require(7, l.is_finite() && l > 0.0, "finite localization length");
}

fn c8_c11(h: &mut Harness) {
    let text =
        fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/fig4.conf"))
            .unwrap();
    let t = Instant::now();
    let r = run(&text);
    let s: Vec<f64> = (0..3)
        .map(|d| metric(&r, &format!("delta{d}.late_slope")))
        .collect();
    let drift: Vec<f64> = (0..3)
        .map(|d| metric(&r, &format!("delta{d}.late_drift")))
        .collect();
    let band: Vec<f64> = (0..3)
        .map(|d| metric(&r, &format!("delta{d}.late_band")))
        .collect();
    let saturates = drift[0].abs() <= band[0];
    let grows = (1..3).all(|d| s[d] > 0.0 && drift[d] > band[d]);
    let equal = s[1].max(s[2]) / s[1].min(s[2]) <= 1.5;
    let pass = saturates && grows && equal;
    h.report(
        8,
        "centre-of-mass diffusion",
        pass,
        format!(
            "late slopes {:.3}, {:.3}, {:.3} for Delta = 0, 1, 2; Delta=0 drift {:.0} within band {:.0}",
            s[0], s[1], s[2], drift[0], band[0]
        ),
        t,
    );
    h.require(8, pass, "fig4 trends");

    let t = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    emit_outputs(&r, &a).unwrap();
    emit_outputs(&run(&text), &b).unwrap();
    let mut same = true;
    let mut files = 0;
    for e in fs::read_dir(&a).unwrap() {
        let e = e.unwrap();
        same &= fs::read(e.path()).unwrap() == fs::read(b.join(e.file_name())).unwrap();
        files += 1;
    }
    h.report(
        11,
        "determinism",
        same,
        format!("{files} files compared byte for byte"),
        t,
    );
    h.require(11, same, "byte-identical reruns");
}

fn c9(h: &mut Harness) {
    let t = Instant::now();
    let r = run("experiment=fig3\nN=200\nJT_per_Delta=5\nDelta=2,8\nB_Q=0.5,1,2\nn_periods=5\n");
    let f = r.file("fidelity.csv").unwrap();
    let rows: Vec<(f64, f64, usize, f64)> = f
        .body()
        .lines()
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            (
                c[0].parse().unwrap(),
                c[1].parse().unwrap(),
                c[2].parse().unwrap(),
                c[3].parse().unwrap(),
            )
        })
        .collect();
    let series = |d: f64, b: f64| {
        rows.iter()
            .filter(|r| r.0 == d && r.1 == b)
            .map(|r| r.3)
            .collect::<Vec<_>>()
    };
    let mut monotone = true;
    let mut start = true;
    let mut improves = true;
    for b in [0.5, 1.0, 2.0] {
        let s2 = series(2.0, b);
        monotone &= s2.windows(2).all(|w| w[1] <= w[0] + 1e-3);
        start &= s2[0] == 1.0 && series(8.0, b)[0] == 1.0;
        improves &= series(8.0, b)[2] > s2[2];
    }
    let pass = monotone && start && improves;
    h.report(
        9,
        "nearest-neighbour fidelity",
        pass,
        format!(
            "Delta=2 F(5) = {:.3}/{:.3}/{:.3} for B_Q = 0.5/1/2, F(2) at Delta=8: {:.3}/{:.3}/{:.3}",
            series(2.0, 0.5)[5],
            series(2.0, 1.0)[5],
            series(2.0, 2.0)[5],
            series(8.0, 0.5)[2],
            series(8.0, 1.0)[2],
            series(8.0, 2.0)[2]
        ),
        t,
    );
    h.require(9, pass, "fidelity trends");
}

fn c10(h: &mut Harness) {
    let t = Instant::now();
    let r = run("experiment=resonance\nN=128\nJ=8\nDelta=4\ntau_b=4pi\nn_periods=10\n");
    let qkr = metric(&r, "qkr.quadratic_r2");
    let nn = metric(&r, "nn.quadratic_r2");
    let ratio = metric(&r, "growth_ratio");
    let pass = qkr > 0.99 && nn > 0.99 && ratio >= 5.0;
    h.report(
        10,
        "resonance",
        pass,
        format!("QKR tau=4pi R^2 = {qkr:.5}, NN pair R^2 = {nn:.5}, growth vs separated pair {ratio:.3e}x"),
        t,
    );
    h.require(10, pass, "resonant bound-pair transport");
}

fn main() {
    let mut h = Harness { broken: Vec::new() };
    c1(&mut h);
    c2(&mut h);
    c3(&mut h);
    c4(&mut h);
    c5(&mut h);
    c6(&mut h);
    c7(&mut h);
    c8_c11(&mut h);
    c9(&mut h);
    c10(&mut h);
    if !h.broken.is_empty() {
        eprintln!("broken requirements: {:?}", h.broken);
        std::process::exit(1);
    }
}
