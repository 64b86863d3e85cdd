use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kickedxxz::bethe::enumerate_spectrum;
use kickedxxz::experiment::{emit_outputs, parse_config, run_experiment, Experiment};

#[derive(Parser)]
#[command(name = "kickedxxz", version, about = "Kicked XXZ ring experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file and write CSV outputs.
    Run {
        config: PathBuf,
        /// Output directory (default: the config's `out` key, else ./out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Lift the desk-scale caps on N and n_periods.
        #[arg(long)]
        override_caps: bool,
    },
    /// Print the Bethe root catalog of a config to stdout.
    Bethe { config: PathBuf },
}

fn run(cli: Cli) -> kickedxxz::Result<()> {
    match cli.command {
        Command::Run {
            config,
            out,
            override_caps,
        } => {
            let text = fs::read_to_string(&config).map_err(|e| io_error(&config, e))?;
            let mut cfg = parse_config(&text)?;
            if override_caps && !cfg.override_caps {
                cfg.override_caps = true;
                cfg.echo
                    .push(("override_caps".into(), "true (command line)".into()));
            }
            let dir = out
                .or_else(|| cfg.out_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out"));
            let result = run_experiment(&cfg)?;
            let manifest = emit_outputs(&result, &dir)?;
            for (k, v) in &result.metrics {
                eprintln!("{k} = {v:?}");
            }
            eprintln!(
                "wrote {} files to {}",
                manifest.files.len() + 1,
                dir.display()
            );
        }
        Command::Bethe { config } => {
            let text = fs::read_to_string(&config).map_err(|e| io_error(&config, e))?;
            let cfg = parse_config(&text)?;
            if cfg.experiment != Experiment::Bethe {
                return Err(kickedxxz::Error::InvalidParams(format!(
                    "bethe subcommand needs experiment=bethe, got {}",
                    cfg.experiment
                )));
            }
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            for &delta in &cfg.deltas {
                let p = cfg.chain_params(delta, cfg.b_qs[0]);
                let cat = enumerate_spectrum(&p)?;
                let pipe = |e| io_error("<stdout>", e);
                writeln!(
                    w,
                    "# N={} J={:?} Delta={delta:?} B={:?}",
                    p.n_sites, p.j, p.b
                )
                .map_err(pipe)?;
                cat.write_csv(&mut w).map_err(pipe)?;
                eprintln!(
                    "Delta={delta}: {} roots for {} states, {} unresolved blocks",
                    cat.roots.len(),
                    cat.sector_dimension(),
                    cat.unresolved.len()
                );
            }
        }
    }
    Ok(())
}

fn io_error(path: impl Into<PathBuf>, source: std::io::Error) -> kickedxxz::Error {
    kickedxxz::Error::Io {
        path: path.into(),
        source,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kickedxxz: {e}");
            ExitCode::FAILURE
        }
    }
}
