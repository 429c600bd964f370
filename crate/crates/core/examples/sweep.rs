//! A small grid over atom number and decay scale, written to a temporary
//! directory and printed.
//!
//! cargo run --release --example sweep

use wgqed::config::SimulationConfig;
use wgqed::presets::preset;
use wgqed::sweep::{read_table, run_sweep, GridAxes, GridSpec};

fn main() -> wgqed::Result<()> {
    let base = SimulationConfig::from_curve(&preset("fig2")?.curves[1]);
    let grid = GridSpec {
        base,
        axes: GridAxes { n_atoms: vec![2, 3, 4], decay_scale: vec![1.0, 0.5], ..Default::default() },
    };
    let dir = std::env::temp_dir().join("wgqed-sweep-example");
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let report = run_sweep(&grid, workers, &dir)?;
    println!("{} points, {} failed, table at {}", report.rows.len(), report.failures(), report.table.display());
    for row in read_table(&report.table)? {
        println!(
            "N = {:>2}  scale = {:>4}  max P = {:>8.4}  max C = {:>8.4}",
            row["n_atoms"], row["decay_scale"],
            row["peak_population"].parse::<f64>().unwrap_or(f64::NAN),
            row["peak_concurrence"].parse::<f64>().unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
