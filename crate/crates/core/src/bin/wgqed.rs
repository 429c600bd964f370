use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wgqed::config::SimulationConfig;
use wgqed::dynamics::CheckAction;
use wgqed::observables::AveragingMode;
use wgqed::output::run_curves;
use wgqed::presets::{preset, Curve, PRESET_NAMES};
use wgqed::sweep::{run_sweep, GridSpec};

#[derive(Parser)]
#[command(name = "wgqed", version, about = "Single-photon driven atom chains in a chiral waveguide")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a preset or a config file and write CSV, summary and manifest.
    Run {
        /// Preset name (fig2, fig3, fig3c, fig4, fig5a, fig5b).
        preset: Option<String>,
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        avg_mode: Option<AveragingMode>,
        #[arg(long)]
        check: Option<CheckAction>,
    },
    /// Run a parameter grid and aggregate the summaries into sweep.csv.
    Sweep {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value = "sweep-out")]
        out: PathBuf,
    },
    /// Check a config file and print the resolved conventions.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Write every curve of a preset as a standalone config file.
    Dump {
        preset: String,
        #[arg(long, default_value = "configs")]
        out: PathBuf,
    },
}

fn curves_for(preset_name: Option<String>, config: Option<PathBuf>) -> wgqed::Result<(String, Vec<Curve>)> {
    match (preset_name, config) {
        (Some(name), None) => Ok((name.clone(), preset(&name)?.curves)),
        (None, Some(path)) => {
            let cfg = SimulationConfig::load(&path)?;
            Ok((cfg.name.clone(), vec![cfg.as_curve()]))
        }
        _ => Err(wgqed::Error::UnknownPreset(format!(
            "give a preset ({}) or --config PATH",
            PRESET_NAMES.join(", ")
        ))),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> wgqed::Result<ExitCode> {
    match command {
        Command::Run { preset, config, out, dt, t_end, avg_mode, check } => {
            let (name, mut curves) = curves_for(preset, config)?;
            for c in &mut curves {
                let s = &mut c.integrator;
                s.dt = dt.unwrap_or(s.dt);
                s.t_end = t_end.unwrap_or(s.t_end);
                s.averaging = avg_mode.unwrap_or(s.averaging);
                s.check = check.unwrap_or(s.check);
            }
            let result = run_curves(&name, &curves, &out)?;
            for s in &result.summaries {
                println!(
                    "{:<14} N={} peak P {:.4} at t={:.2}  peak C {:.4} at t={:.2}",
                    s.label, s.n_atoms, s.peak_population, s.peak_population_time, s.peak_concurrence, s.peak_concurrence_time
                );
            }
            println!("wrote {} files to {}", result.files.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { grid, workers, out } => {
            let report = run_sweep(&GridSpec::load(&grid)?, workers, &out)?;
            println!("{} points, {} failed, table {}", report.rows.len(), report.failures(), report.table.display());
            Ok(if report.failures() == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Validate { config } => match SimulationConfig::load(&config) {
            Ok(cfg) => {
                let report = cfg.validate();
                print!("{report}");
                Ok(if report.valid { ExitCode::SUCCESS } else { ExitCode::FAILURE })
            }
            Err(wgqed::Error::Config { path, message }) => {
                println!("invalid\n  {path}: {message}");
                Ok(ExitCode::FAILURE)
            }
            Err(e) => Err(e),
        },
        Command::Dump { preset: name, out } => {
            std::fs::create_dir_all(&out)?;
            for curve in preset(&name)?.curves {
                let path = out.join(format!("{name}_{}.json", curve.label));
                std::fs::write(&path, SimulationConfig::from_curve(&curve).to_json()?)?;
                println!("{}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
