//! Integrator against independent single-atom references: direct quadrature
//! of the coherence, and the adiabatic population for a slow pulse.
//!
//! cargo run --release --example oracle_checks

use wgqed::dynamics::{evolve_to, initial_state};
use wgqed::model::{CouplingForm, Generator};
use wgqed::oracles::{analytic_single_atom_excitation, rho10_quadrature_oracle, SingleAtomAnalytic};
use wgqed::presets::pinned_pulse;
use wgqed::PulseSpec;

fn main() -> wgqed::Result<()> {
    let pulse = pinned_pulse();
    for form in [CouplingForm::AsPrinted, CouplingForm::Langevin] {
        let mut cfg = SingleAtomAnalytic::new(1.0, 0.3, pulse)?.chain();
        cfg.coupling_form = form;
        let gen = Generator::new(&cfg, &pulse)?;
        let mut state = initial_state(&cfg);
        for t in [3.0, 5.0, 8.0] {
            state = evolve_to(&gen, state, t, 1e-3)?;
            let oracle = rho10_quadrature_oracle(&cfg, &pulse, t)?;
            println!("{form:?} t = {t}: |rho_10 - quadrature| = {:.2e}", state.rho_10.max_abs_diff(&oracle));
        }
    }

    let slow = PulseSpec { mean: 60.0, width: 20.0, ..pulse };
    let oracle = SingleAtomAnalytic::new(1.0, 0.0, slow)?;
    let settings = wgqed::IntegratorSettings { t_end: 60.0, dt: 1e-2, sample_every: 1.0, ..Default::default() };
    let traj = wgqed::integrate(&oracle.chain(), &slow, &settings)?;
    let p = traj.records.last().unwrap().p_single;
    let a = analytic_single_atom_excitation(60.0, &oracle);
    println!("adiabatic limit at the pulse centre: integrated {p:.6e}, analytic {a:.6e}, rel {:.2e}", (p - a).abs() / a);
    Ok(())
}
