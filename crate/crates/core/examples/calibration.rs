//! Single-atom peak excitation under each drive-coefficient and pulse
//! normalization choice, next to the adiabatic estimate.
//!
//! cargo run --release --example calibration

use wgqed::model::{DriveCoefficient, Normalization};
use wgqed::oracles::{analytic_single_atom_excitation, SingleAtomAnalytic};
use wgqed::presets::{pinned_pulse, PINNED_DRIVE, PINNED_NORMALIZATION};
use wgqed::IntegratorSettings;

fn main() -> wgqed::Result<()> {
    let settings = IntegratorSettings { t_end: 12.0, ..Default::default() };
    for drive in [DriveCoefficient::Sqrt2Gamma, DriveCoefficient::SqrtGamma] {
        for norm in [Normalization::UnitArea, Normalization::L2Normalized] {
            let pulse = wgqed::PulseSpec { drive_coefficient: drive, normalization: norm, ..pinned_pulse() };
            let oracle = SingleAtomAnalytic::new(1.0, 0.0, pulse)?;
            let traj = wgqed::integrate(&oracle.chain(), &pulse, &settings)?;
            let (t, p) = traj
                .times
                .iter()
                .zip(traj.series(|r| r.p_single))
                .fold((0.0, f64::MIN), |best, (&t, p)| if p > best.1 { (t, p) } else { best });
            let pinned = if drive == PINNED_DRIVE && norm == PINNED_NORMALIZATION { "  <- pinned" } else { "" };
            println!(
                "{drive:?}/{norm:?}: max P = {p:.4} at t = {t:.2}, adiabatic at t = 5: {:.4}{pinned}",
                analytic_single_atom_excitation(5.0, &oracle)
            );
        }
    }
    Ok(())
}
