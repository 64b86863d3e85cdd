//! Kicks a neighbouring pair of flips for a few periods and prints where the
//! magnetization went.
use kickedxxz::chain::{ChainParams, Sector, State};
use kickedxxz::floquet::{evolve, EvolutionRecord, FloquetOperator};
use kickedxxz::observables::magnetization_profile;

fn main() -> kickedxxz::Result<()> {
    let n = 96;
    let params = ChainParams::new(n, 20.0, 2.0).with_kick(0.4, 47.0);
    let op = FloquetOperator::build(&params, Sector::Two)?;
    println!(
        "two-flip Floquet operator on {n} sites, dimension {}",
        op.dimension()
    );

    let mut show = |r: &EvolutionRecord<'_>| -> kickedxxz::Result<()> {
        let p = magnetization_profile(r.state);
        let (peak, v) = p
            .iter()
            .enumerate()
            .fold((0, 0.0), |a, (i, &v)| if v > a.1 { (i, v) } else { a });
        println!(
            "period {:2}: norm {:.12}, sum <P> = {:.12}, peak {peak} ({v:.3})",
            r.period,
            r.state.norm(),
            p.iter().sum::<f64>()
        );
        Ok(())
    };
    evolve(&op, State::flip_pair(n, 47, 48)?, 5, &mut [&mut show])?;
    Ok(())
}
