use kickedxxz::chain::{pair_index, pair_unindex, pairs, ChainParams, Sector, State};
use kickedxxz::fermion::{single_flip_element, two_flip_element, BesselPropagatorSpec};
use kickedxxz::floquet::FloquetOperator;
use kickedxxz::observables::{magnetization_profile, nn_fidelity_series, two_site_correlation};
use num_complex::Complex64;
use proptest::prelude::*;

fn random_state(sector: Sector, n: usize, seed: &[f64]) -> State {
    let dim = sector.dimension(n);
    let amps = (0..dim)
        .map(|i| {
            let a = seed[i % seed.len()] + 0.37 * i as f64;
            Complex64::new(a.sin(), (1.3 * a).cos())
        })
        .collect();
    State::from_amplitudes(sector, n, amps)
        .unwrap()
        .normalized()
        .unwrap()
}

/// Moves every flip one site round the ring.
fn translate(s: &State) -> State {
    let n = s.n_sites();
    let mut out = vec![Complex64::new(0.0, 0.0); s.amps().len()];
    match s.sector() {
        Sector::One => {
            for (i, a) in s.amps().iter().enumerate() {
                out[(i + 1) % n] = *a;
            }
        }
        Sector::Two => {
            for (i, (a, b)) in pairs(n).enumerate() {
                let (x, y) = ((a + 1) % n, (b + 1) % n);
                out[pair_index(x.min(y), x.max(y), n).unwrap()] = s.amps()[i];
            }
        }
    }
    State::from_amplitudes(s.sector(), n, out).unwrap()
}

fn dist(a: &State, b: &State) -> f64 {
    a.amps()
        .iter()
        .zip(b.amps())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pair_index_round_trip(n in 4usize..60, a in 0usize..60, b in 0usize..60) {
        let (a, b) = (a % n, b % n);
        prop_assume!(a < b);
        let i = pair_index(a, b, n).unwrap();
        prop_assert!(i < n * (n - 1) / 2);
        prop_assert_eq!(pair_unindex(i, n).unwrap(), (a, b));
    }

    #[test]
    fn floquet_map_preserves_norm(
        n in 6usize..14, j in 0.1f64..6.0, delta in 0.0f64..3.0, b_q in 0.0f64..2.0,
        two in any::<bool>(), seed in prop::collection::vec(-3.0f64..3.0, 1..5),
    ) {
        let sector = if two { Sector::Two } else { Sector::One };
        let p = ChainParams::new(n, j, delta).with_kick(b_q, (n / 3) as f64);
        let op = FloquetOperator::build(&p, sector).unwrap();
        let mut s = random_state(sector, n, &seed);
        for _ in 0..3 {
            s = op.apply(&s).unwrap();
        }
        prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        let prof = magnetization_profile(&s);
        prop_assert!((prof.iter().sum::<f64>() - sector.flips() as f64).abs() < 1e-10);
    }

    #[test]
    fn unkicked_map_commutes_with_translation(
        n in 6usize..14, j in 0.1f64..6.0, delta in 0.0f64..3.0, two in any::<bool>(),
        seed in prop::collection::vec(-3.0f64..3.0, 1..5),
    ) {
        let sector = if two { Sector::Two } else { Sector::One };
        let op = FloquetOperator::build(&ChainParams::new(n, j, delta).with_field(0.3), sector).unwrap();
        let s = random_state(sector, n, &seed);
        let a = op.apply(&translate(&s)).unwrap();
        let b = translate(&op.apply(&s).unwrap());
        prop_assert!(dist(&a, &b) < 1e-11);
    }

    #[test]
    fn correlation_marginals_are_the_profile(
        n in 5usize..16, seed in prop::collection::vec(-3.0f64..3.0, 1..5),
    ) {
        let s = random_state(Sector::Two, n, &seed);
        let c = two_site_correlation(&s).unwrap();
        let prof = magnetization_profile(&s);
        for (r, p) in c.row_sums().iter().zip(&prof) {
            prop_assert!((r - p).abs() < 1e-10);
        }
        prop_assert!((c.total() - 1.0).abs() < 1e-10);
        for (a, b, v) in c.entries() {
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert_eq!(v, c.get(b, a));
        }
    }

    #[test]
    fn wick_determinant(beta in -20.0f64..20.0, b_q in 0.0f64..1.0,
                        n1 in -15i64..15, n2 in -15i64..15, m1 in -15i64..15, m2 in -15i64..15) {
        let spec = BesselPropagatorSpec::new(beta, b_q, 0.5);
        let u = |a, b| single_flip_element(a, b, &spec);
        let det = u(n1, m1) * u(n2, m2) - u(n1, m2) * u(n2, m1);
        let w = two_flip_element(n1, n2, m1, m2, &spec);
        prop_assert!((w - det).norm() < 1e-12);
        prop_assert!((w + two_flip_element(n2, n1, m1, m2, &spec)).norm() < 1e-12);
    }

    #[test]
    fn fidelity_is_bounded(delta in 0.5f64..6.0, ratio in 1.0f64..6.0, b_q in 0.0f64..2.0) {
        let p = ChainParams::new(24, ratio * delta, delta).with_kick(b_q, 11.0);
        let f = nn_fidelity_series(&p, 11, 3, true).unwrap();
        prop_assert_eq!(f[0].fidelity, 1.0);
        for r in &f {
            prop_assert!(r.fidelity >= 0.0 && r.fidelity <= 1.0 + 1e-12);
        }
    }
}
