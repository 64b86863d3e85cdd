//! The rotor images: dynamical localization, the primary resonance, the
//! antiresonance, and a standard-map accelerator mode.
use kickedxxz::observables::localization_fit;
use kickedxxz::rotor::{
    classical_moment_series, qkr_moment_series, qkr_time_averaged_distribution,
    scan_accelerator_modes, QkrPropagator, RotorParams,
};
use std::f64::consts::PI;

fn main() -> kickedxxz::Result<()> {
    let loc = RotorParams::new(5.0, 1.0, 512);
    let dist = qkr_time_averaged_distribution(&loc, 0, 200, 400)?;
    let probs: Vec<f64> = dist.iter().map(|d| d.1).collect();
    let centre = dist.iter().position(|d| d.0 == 0).unwrap() as f64;
    println!(
        "K=5, tau=1: localization length {:.2}",
        localization_fit(&probs, centre)?
    );

    let classical = classical_moment_series(5.0, 0.0, 4000, 50, 1);
    println!("classical <p^2> after 50 kicks: {:.1}", classical[50]);

    for (name, tau) in [
        ("resonance tau=4pi", 4.0 * PI),
        ("antiresonance tau=2pi", 2.0 * PI),
    ] {
        let p = RotorParams::new(tau, tau, 256);
        let psi = QkrPropagator::new(p)?.plane_wave(0)?;
        let m = qkr_moment_series(&p, &psi, 8)?;
        println!(
            "{name}: {:?}",
            m.iter()
                .map(|v| (v * 10.0).round() / 10.0)
                .collect::<Vec<_>>()
        );
    }

    if let Some((x, mode)) = scan_accelerator_modes(6.5, 0.0, 400, 200) {
        println!(
            "K=6.5: accelerator mode from x={x:.3}, drift {:.3} per kick (j={:?})",
            mode.drift, mode.j
        );
    }
    Ok(())
}
