//! Concurrence of textbook two-qubit states and of the W state reduced to a
//! pair.
//!
//! cargo run --example concurrence_basics

use wgqed::observables::{avg_pairwise_concurrence, concurrence, AveragingMode};
use wgqed::operator::partial_trace_pair;
use wgqed::{Operator, C64};

fn main() -> wgqed::Result<()> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = Operator::projector(&[C64::new(h, 0.0), C64::default(), C64::default(), C64::new(h, 0.0)]);
    println!("Bell (|gg> + |ee>)/sqrt2: C = {:.6}", concurrence(&bell)?);

    let product = Operator::basis_outer(4, 1, 1);
    println!("product |ge>:            C = {:.6}", concurrence(&product)?);

    for p in [0.2, 1.0 / 3.0, 0.5, 0.9] {
        let werner = bell.scale_real(p);
        let mut mixed = Operator::identity(4).scale_real((1.0 - p) / 4.0);
        mixed.axpy(C64::new(1.0, 0.0), &werner);
        println!("Werner p = {p:.3}:         C = {:.6}", concurrence(&mixed)?);
    }

    for n in 2..=5 {
        let dim = 1 << n;
        let mut psi = vec![C64::default(); dim];
        for i in 0..n {
            psi[1 << i] = C64::new(1.0 / (n as f64).sqrt(), 0.0);
        }
        let w = Operator::projector(&psi);
        let pair = partial_trace_pair(&w, (1, 2), n)?;
        println!(
            "W state N = {n}: pair C = {:.6}, all-pairs average {:.6}",
            concurrence(&pair)?,
            avg_pairwise_concurrence(&w, n, AveragingMode::AllPairs)?
        );
    }
    Ok(())
}
