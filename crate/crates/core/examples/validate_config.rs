//! Builds configs in code, validates them and prints the reports, including
//! one with a negative rate and one with sub-wavelength spacing.
//!
//! cargo run --example validate_config

use wgqed::config::SimulationConfig;
use wgqed::presets::preset;

fn main() -> wgqed::Result<()> {
    let good = SimulationConfig::from_curve(&preset("fig2")?.curves[2]);
    println!("{}", good.to_json()?);
    print!("{}", good.validate());

    let mut bad = good.clone();
    bad.chain.atoms[1].gamma_right = -0.3;
    bad.pulse.width = 0.0;
    print!("\n{}", bad.validate());

    let mut delayed = good.clone();
    for (i, atom) in delayed.chain.atoms.iter_mut().enumerate() {
        atom.position = i as f64 / 16.0;
    }
    print!("\n{}", delayed.validate());

    match SimulationConfig::from_json(r#"{"chain": {"atoms": []}, "pulse": {"mean": 5}}"#) {
        Ok(_) => println!("\nunexpectedly parsed"),
        Err(e) => println!("\nmalformed config: {e}"),
    }
    Ok(())
}
