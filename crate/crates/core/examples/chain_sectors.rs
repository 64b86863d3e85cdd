//! Builds the one- and two-flip blocks of a small ring and prints their
//! spectra next to the magnon dispersion.
use kickedxxz::chain::{build_sector_h, pair_index, pair_unindex, ChainParams, Sector};
use nalgebra::SymmetricEigen;

fn main() -> kickedxxz::Result<()> {
    let params = ChainParams::new(8, 1.0, 2.0);
    for sector in [Sector::One, Sector::Two] {
        let h = build_sector_h(&params, sector)?;
        let mut e: Vec<f64> = SymmetricEigen::new(h.to_dense())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        e.sort_by(f64::total_cmp);
        println!(
            "{} block: dim {}, E - E0 in [{:.4}, {:.4}]",
            sector.name(),
            h.dimension,
            e[0],
            e[e.len() - 1]
        );
    }
    // one magnon: E - E0 = 2B + JΔ - J cos κ
    let n = params.n_sites;
    let magnons: Vec<String> = (0..n)
        .map(|q| {
            let k = 2.0 * std::f64::consts::PI * q as f64 / n as f64;
            format!("{:.3}", params.j * (params.delta - k.cos()))
        })
        .collect();
    println!("magnon energies: {}", magnons.join(" "));

    let idx = pair_index(2, 5, n)?;
    println!("pair (2,5) -> index {idx} -> {:?}", pair_unindex(idx, n)?);
    Ok(())
}
