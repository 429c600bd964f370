//! Excitation probability and pairwise concurrence for symmetric chains of
//! one to five atoms driven by the reference pulse.
//!
//! cargo run --release --example populations

use wgqed::output::CurveSummary;
use wgqed::presets::preset;

fn main() -> wgqed::Result<()> {
    println!("{:>5} {:>10} {:>8} {:>10} {:>8} {:>10}", "curve", "max P", "t(P)", "max C", "t(C)", "P_G(end)");
    for curve in preset("fig2")?.curves {
        let traj = wgqed::integrate(&curve.chain, &curve.pulse, &curve.integrator)?;
        let s = CurveSummary::of(&curve.label, &traj)?;
        println!(
            "{:>5} {:>10.4} {:>8.2} {:>10.4} {:>8.2} {:>10.6}",
            s.label, s.peak_population, s.peak_population_time, s.peak_concurrence, s.peak_concurrence_time,
            s.final_ground_population
        );
    }
    Ok(())
}
