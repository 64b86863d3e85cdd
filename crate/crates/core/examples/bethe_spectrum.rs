//! Enumerates every two-magnon Bethe root of a ring and checks the energies
//! against the sector spectrum.
use kickedxxz::bethe::{bound_band_energy, enumerate_spectrum, RootClass};
use kickedxxz::chain::{ChainParams, Sector};
use kickedxxz::floquet::FloquetOperator;

fn main() -> kickedxxz::Result<()> {
    for delta in [0.5, 1.0, 3.0] {
        let params = ChainParams::new(12, 1.0, delta);
        let cat = enumerate_spectrum(&params)?;
        let op = FloquetOperator::build(&params, Sector::Two)?;
        let mut exact: Vec<f64> = op
            .free_spectrum()
            .iter()
            .map(|e| e + op.sector_shift())
            .collect();
        exact.sort_by(f64::total_cmp);
        let gap = cat
            .sorted_energies()
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!(
            "Delta={delta}: {} scattering + {} bound of {} states, max gap {gap:.1e}",
            cat.count(RootClass::Scattering),
            cat.count(RootClass::Bound),
            cat.sector_dimension()
        );
        if delta > 2.0 {
            for (root, e) in cat
                .roots
                .iter()
                .zip(&cat.energies)
                .filter(|(r, _)| r.bound.is_some())
                .take(4)
            {
                let k = root.total_momentum(params.n_sites);
                println!(
                    "  bound K={k:.3}: E={e:.6}, band {:.6}",
                    bound_band_energy(k, &params)?
                );
            }
        }
    }
    Ok(())
}
