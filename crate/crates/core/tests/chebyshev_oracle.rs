//! The eigendecomposition engine against the Chebyshev propagator and the
//! unitarity of the assembled Floquet matrices.

use kickedxxz::chain::{build_sector_h, ChainParams, Sector, State};
use kickedxxz::chebyshev::{chebyshev_apply, ChebyshevOptions};
use kickedxxz::floquet::FloquetOperator;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_state(rng: &mut ChaCha8Rng, sector: Sector, n: usize) -> State {
    let amps = (0..sector.dimension(n))
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    State::from_amplitudes(sector, n, amps)
        .unwrap()
        .normalized()
        .unwrap()
}

#[test]
fn unitary_and_matches_chebyshev() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in [8, 12, 16] {
        for delta in [0.0, 0.5, 1.0, 2.0] {
            let p = ChainParams::new(n, 2.5, delta)
                .with_kick(0.4, (n / 2) as f64 - 0.5)
                .with_field(0.1);
            let h = build_sector_h(&p, Sector::Two).unwrap();
            let op = FloquetOperator::from_hamiltonian(&p, &h).unwrap();
            let u = op.to_dense().unwrap();
            let dim = u.nrows();
            let dev = (u.adjoint() * &u - DMatrix::<Complex64>::identity(dim, dim))
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(dev < 1e-10, "N={n} Delta={delta}: {dev}");

            let opts = ChebyshevOptions {
                shift: op.sector_shift(),
                ..Default::default()
            };
            for _ in 0..20 {
                let psi = random_state(&mut rng, Sector::Two, n);
                let a = op.apply(&psi).unwrap();
                let free = chebyshev_apply(&h, psi.amps(), p.period, &opts).unwrap();
                let b: Vec<Complex64> = free
                    .iter()
                    .zip(op.kick_phases())
                    .map(|(x, k)| x * k)
                    .collect();
                let err = a
                    .amps()
                    .iter()
                    .zip(&b)
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max);
                assert!(err < 1e-8, "N={n} Delta={delta}: {err}");
            }
        }
    }
}

#[test]
fn one_flip_sector_matches_chebyshev_at_long_times() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let p = ChainParams::new(64, 130.0, 1.0).with_kick(0.1, 31.0);
    let h = build_sector_h(&p, Sector::One).unwrap();
    let op = FloquetOperator::from_hamiltonian(&p, &h).unwrap();
    let opts = ChebyshevOptions {
        shift: op.sector_shift(),
        ..Default::default()
    };
    let psi = random_state(&mut rng, Sector::One, 64);
    let mut ws = op.workspace();
    let mut a = psi.clone();
    op.free_step_in_place(&mut a, &mut ws).unwrap();
    let b = chebyshev_apply(&h, psi.amps(), p.period, &opts).unwrap();
    let err = a
        .amps()
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    assert!(err < 1e-9, "{err}");
}
