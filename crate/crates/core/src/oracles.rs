//! Independent references for the simulator: the adiabatic single-atom
//! formula, a direct quadrature of the single-atom coherence, and the
//! stationarity of the vacuum-vacuum operator.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::model::{AtomParams, ChainConfig, CouplingForm, PulseSpec};
use crate::operator::Operator;

/// Single atom with `gamma_left = gamma_right = gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingleAtomAnalytic {
    pub gamma: f64,
    pub detuning: f64,
    pub pulse: PulseSpec,
}

impl SingleAtomAnalytic {
    pub fn new(gamma: f64, detuning: f64, pulse: PulseSpec) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(Error::config("gamma", format!("must be positive, got {gamma}")));
        }
        Ok(Self { gamma, detuning, pulse })
    }

    pub fn chain(&self) -> ChainConfig {
        let atom = AtomParams { detuning: self.detuning, ..AtomParams::symmetric(self.gamma) };
        ChainConfig::new(vec![atom])
    }
}

/// Excited population when the atom follows the pulse adiabatically:
/// `c_s sqrt(gamma) |g|^2 / (Delta^2 + gamma^2)`, with `c_s` the configured
/// drive coefficient. The total decay rate is `2 gamma`.
pub fn analytic_single_atom_excitation(t: f64, oracle: &SingleAtomAnalytic) -> f64 {
    let g = oracle.pulse.amplitude(t);
    let c_s = oracle.pulse.drive_coefficient.factor(oracle.gamma);
    let c_10 = oracle.gamma.sqrt();
    c_s * c_10 * g * g / (oracle.detuning.powi(2) + oracle.gamma.powi(2))
}

/// Largest entry-wise drift of `rho_00` over a trajectory.
pub fn stationarity_check_rho00(traj: &Trajectory) -> f64 {
    traj.max_rho00_drift()
}

/// Quadrature step used by [`rho10_quadrature_oracle`].
pub const QUADRATURE_STEP: f64 = 2e-3;

/// `rho_10(t)` of a single ground-state atom by direct quadrature of
///
/// `x(t) = -c phase int_{t0}^{t} g(t') exp(-(i Delta + Gamma / 2)(t - t')) dt'`
///
/// with `rho_10 = x |e><g|`, composite Simpson on a grid of spacing close to
/// [`QUADRATURE_STEP`], starting at `t0 = 0`.
pub fn rho10_quadrature_oracle(cfg: &ChainConfig, pulse: &PulseSpec, t: f64) -> Result<Operator> {
    if cfg.n_atoms() != 1 {
        return Err(Error::config("chain.atoms", "quadrature oracle is single-atom only"));
    }
    let atom = cfg.atoms[0];
    let mut out = Operator::zeros(2);
    if t <= 0.0 {
        return Ok(out);
    }
    let theta = cfg.drive_phase(1);
    let phase = match cfg.coupling_form {
        CouplingForm::AsPrinted => C64::from_polar(1.0, -theta),
        CouplingForm::Langevin => C64::from_polar(1.0, theta),
    };
    let kappa = C64::new(atom.gamma_avg(), atom.detuning);
    let integrand = |s: f64| pulse.amplitude(s) * (-kappa * (t - s)).exp();

    let mut intervals = (t / QUADRATURE_STEP).ceil() as usize;
    intervals += intervals % 2;
    let h = t / intervals as f64;
    let mut acc = integrand(0.0) + integrand(t);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += integrand(k as f64 * h) * w;
    }
    let integral = acc * (h / 3.0);
    out[(1, 0)] = -phase * atom.gamma_right.sqrt() * integral;
    Ok(out)
}
