//! At Δ = 0 the flips are free fermions: compare the engine with the Bessel
//! determinant and the one-period magnetization.
use kickedxxz::chain::{ChainParams, Sector, State};
use kickedxxz::fermion::{
    in_interior_window, one_period_magnetization, two_flip_element, BesselPropagatorSpec,
};
use kickedxxz::floquet::FloquetOperator;
use kickedxxz::observables::magnetization_profile;

fn main() -> kickedxxz::Result<()> {
    let n = 64;
    let params = ChainParams::new(n, 5.0, 0.0).with_kick(0.3, 31.0);
    let op = FloquetOperator::build(&params, Sector::Two)?;
    let spec = BesselPropagatorSpec::from_params(&params);

    let (m1, m2) = (30, 33);
    let out = op.apply(&State::flip_pair(n, m1, m2)?)?;
    let mut worst: f64 = 0.0;
    for n1 in 20..44 {
        for n2 in n1 + 1..44 {
            if in_interior_window(n1, m1, n) && in_interior_window(n2, m2, n) {
                let want = two_flip_element(n1 as i64, n2 as i64, m1 as i64, m2 as i64, &spec);
                worst = worst.max((out.pair_amplitude(n1, n2)? - want).norm());
            }
        }
    }
    println!("engine vs determinant, interior entries: {worst:.2e}");

    let n0 = 31;
    let prof = magnetization_profile(&op.apply(&State::flip_pair(n, n0, n0 + 1)?)?);
    let dev = (20..44)
        .map(|s| (prof[s] - one_period_magnetization(s as i64, n0 as i64, params.beta())).abs())
        .fold(0.0, f64::max);
    println!("one-period profile vs J^2(n-n0) + J^2(n-n0-1): {dev:.2e}");
    Ok(())
}
