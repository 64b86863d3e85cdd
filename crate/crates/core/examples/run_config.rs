//! Runs a configuration through the experiment harness and writes the CSV
//! tables to a directory (first argument, default ./out-example).
use std::path::PathBuf;

use kickedxxz::experiment::{emit_outputs, parse_config, run_experiment};

const CONFIG: &str = "
experiment = fig4
N = 64
K = 5
B_Q = 1
Delta = 0, 1
n_periods = 40
n_trajectories = 500
";

fn main() -> kickedxxz::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out-example"));
    let run = run_experiment(&parse_config(CONFIG)?)?;
    let manifest = emit_outputs(&run, &dir)?;
    for f in &manifest.files {
        println!("{:<16} {:>6} rows  {}", f.name, f.rows, &f.sha256[..16]);
    }
    for (k, v) in &run.metrics {
        println!("{k} = {v:.4}");
    }
    Ok(())
}
