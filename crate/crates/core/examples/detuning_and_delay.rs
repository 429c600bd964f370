//! Detuned against resonant atoms, and the effect of the inter-atomic
//! separation under both coupling forms.
//!
//! cargo run --release --example detuning_and_delay

use wgqed::model::CouplingForm;
use wgqed::output::CurveSummary;
use wgqed::presets::preset;

fn peak_c(curve: &wgqed::presets::Curve) -> wgqed::Result<(f64, f64)> {
    let traj = wgqed::integrate(&curve.chain, &curve.pulse, &curve.integrator)?;
    let s = CurveSummary::of(&curve.label, &traj)?;
    Ok((s.peak_concurrence, traj.max_trace_error()))
}

fn main() -> wgqed::Result<()> {
    let a = preset("fig5a")?;
    for n in 2..=5 {
        let (res, _) = peak_c(a.curve(&format!("N{n}_resonant")).unwrap())?;
        let (det, _) = peak_c(a.curve(&format!("N{n}_detuned")).unwrap())?;
        println!("N = {n}: max C resonant {res:.4}, detuned {det:.4}, gap {:.4}", res - det);
    }
    println!();
    for curve in preset("fig5b")?.curves {
        let (langevin, _) = peak_c(&curve)?;
        let mut printed = curve.clone();
        printed.chain.coupling_form = CouplingForm::AsPrinted;
        let (c, trace_err) = peak_c(&printed)?;
        println!("{:>8}: max C langevin {langevin:.4}, as-printed {c:.4} (trace error {trace_err:.2e})", curve.label);
    }
    Ok(())
}
