//! Chiral coupling, gamma_R / gamma_L = 5, against the bidirectional chain.
//! Also reports the smallest eigenvalue seen, which goes negative here under
//! the pinned drive coefficient.
//!
//! cargo run --release --example chirality

use wgqed::output::CurveSummary;
use wgqed::presets::preset;

fn main() -> wgqed::Result<()> {
    let chiral = preset("fig4")?;
    let symmetric = preset("fig2")?;
    for (c, s) in chiral.curves.iter().zip(&symmetric.curves) {
        let tc = wgqed::integrate(&c.chain, &c.pulse, &c.integrator)?;
        let ts = wgqed::integrate(&s.chain, &s.pulse, &s.integrator)?;
        let (sc, ss) = (CurveSummary::of(&c.label, &tc)?, CurveSummary::of(&s.label, &ts)?);
        println!(
            "{}: max P {:.4} (sym {:.4}), max C {:.4} (sym {:.4}), min eigenvalue {:.3e}",
            c.label, sc.peak_population, ss.peak_population, sc.peak_concurrence, ss.peak_concurrence, sc.min_eigenvalue
        );
    }
    Ok(())
}
