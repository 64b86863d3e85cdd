//! Cross-checks the block-diagonal free step against a Chebyshev expansion
//! of the same Hamiltonian.
use kickedxxz::chain::{build_two_excitation_h, ChainParams, Sector, State};
use kickedxxz::chebyshev::{chebyshev_apply, ChebyshevOptions};
use kickedxxz::floquet::FloquetOperator;
use num_complex::Complex64;

fn main() -> kickedxxz::Result<()> {
    let params = ChainParams::new(16, 3.0, 0.7).with_field(0.2);
    let h = build_two_excitation_h(&params)?;
    let op = FloquetOperator::from_hamiltonian(&params, &h)?;
    let amps: Vec<Complex64> = (0..h.dimension)
        .map(|i| Complex64::new((0.3 * i as f64).sin(), (1.7 * i as f64).cos()))
        .collect();
    let psi = State::from_amplitudes(Sector::Two, 16, amps)?.normalized()?;

    let mut a = psi.clone();
    op.free_step_in_place(&mut a, &mut op.workspace())?;
    let opts = ChebyshevOptions {
        shift: op.sector_shift(),
        ..Default::default()
    };
    let b = chebyshev_apply(&h, psi.amps(), params.period, &opts)?;
    let err = a
        .amps()
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    println!("max |eigen - chebyshev| = {err:.2e}");
    Ok(())
}
