//! How long concurrence survives at the reference and the reduced decay
//! rate, in units of the pulse duration.
//!
//! cargo run --release --example survival

use wgqed::output::CurveSummary;
use wgqed::presets::preset;

fn main() -> wgqed::Result<()> {
    let p = preset("fig3c")?;
    for n in 2..=5 {
        let mut row = Vec::new();
        for tag in ["g1", "g0.1"] {
            let curve = p.curve(&format!("N{n}_{tag}")).expect("preset curve");
            let traj = wgqed::integrate(&curve.chain, &curve.pulse, &curve.integrator)?;
            row.push(CurveSummary::of(&curve.label, &traj)?);
        }
        println!(
            "N = {n}: survival {:.2} -> {:.2} pulses (x{:.2}), peak C {:.4} -> {:.4}",
            row[0].concurrence_survival_pulses,
            row[1].concurrence_survival_pulses,
            row[1].concurrence_survival / row[0].concurrence_survival,
            row[0].peak_concurrence,
            row[1].peak_concurrence
        );
    }
    Ok(())
}
