//! Named parameter sets for the reference scenarios.
//!
//! Every curve carries its full chain, pulse and integrator configuration so
//! nothing depends on library defaults at run time.

use serde::{Deserialize, Serialize};

use crate::dynamics::IntegratorSettings;
use crate::error::{Error, Result};
use crate::model::{AtomParams, ChainConfig, CouplingForm, DriveCoefficient, Normalization, PhaseConvention, PulseSpec};

pub const PRESET_NAMES: [&str; 6] = ["fig2", "fig3", "fig3c", "fig4", "fig5a", "fig5b"];

/// Reference pulse: mean `5`, width `1.5`, both in inverse reference decay rates.
pub const PULSE_MEAN: f64 = 5.0;
pub const PULSE_WIDTH: f64 = 1.5;
/// Reduced decay rate of the small-decay scenario.
pub const SMALL_GAMMA: f64 = 0.1;
/// `gamma_R / gamma_L` of the chiral scenario.
pub const CHIRAL_RATIO: f64 = 5.0;
pub const DETUNING: f64 = 0.5;
/// Separations, in resonant wavelengths, of the delay scenario.
pub const SEPARATIONS: [(&str, f64); 3] = [("L", 1.0), ("L/8", 0.125), ("L/16", 0.0625)];
/// Integration window long enough for the slow-decay curves to die out.
pub const SLOW_T_END: f64 = 30.0;

/// Convention pinned for every preset by the single-atom calibration.
pub const PINNED_DRIVE: DriveCoefficient = DriveCoefficient::Sqrt2Gamma;
pub const PINNED_NORMALIZATION: Normalization = Normalization::L2Normalized;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    /// File-name friendly label, unique inside its preset.
    pub label: String,
    pub chain: ChainConfig,
    pub pulse: PulseSpec,
    pub integrator: IntegratorSettings,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub name: String,
    pub description: String,
    pub curves: Vec<Curve>,
}

impl Preset {
    pub fn curve(&self, label: &str) -> Option<&Curve> {
        self.curves.iter().find(|c| c.label == label)
    }
}

pub fn pinned_pulse() -> PulseSpec {
    PulseSpec {
        mean: PULSE_MEAN,
        width: PULSE_WIDTH,
        normalization: PINNED_NORMALIZATION,
        drive_coefficient: PINNED_DRIVE,
    }
}

/// `n` atoms with the given per-channel rates, one resonant wavelength apart.
pub fn chain(n: usize, gamma_left: f64, gamma_right: f64) -> ChainConfig {
    let atom = AtomParams { gamma_left, gamma_right, detuning: 0.0, position: 0.0 };
    let mut cfg = ChainConfig::new(vec![atom; n]).with_spacing(1.0);
    cfg.k0_wavelengths = 1.0;
    cfg.phase_convention = PhaseConvention::Wavelength;
    cfg.coupling_form = CouplingForm::AsPrinted;
    cfg
}

/// Per-channel rates `(gamma_L, gamma_R)` with `gamma_R / gamma_L = ratio`
/// and `gamma_L + gamma_R = 2`.
pub fn chiral_rates(ratio: f64) -> (f64, f64) {
    let left = 2.0 / (1.0 + ratio);
    (left, 2.0 - left)
}

fn settings(t_end: f64) -> IntegratorSettings {
    IntegratorSettings { t_end, ..IntegratorSettings::default() }
}

fn curve(label: String, chain: ChainConfig, t_end: f64) -> Curve {
    Curve { label, chain, pulse: pinned_pulse(), integrator: settings(t_end) }
}

fn fig2() -> Preset {
    Preset {
        name: "fig2".into(),
        description: "resonant symmetric chains, N = 1..5".into(),
        curves: (1..=5).map(|n| curve(format!("N{n}"), chain(n, 1.0, 1.0), 15.0)).collect(),
    }
}

fn fig3() -> Preset {
    Preset {
        name: "fig3".into(),
        description: format!("small decay gamma = {SMALL_GAMMA}, N = 2..5"),
        curves: (2..=5)
            .map(|n| curve(format!("N{n}"), chain(n, SMALL_GAMMA, SMALL_GAMMA), SLOW_T_END))
            .collect(),
    }
}

fn fig3c() -> Preset {
    let mut curves = Vec::new();
    for (tag, gamma) in [("g1", 1.0), ("g0.1", SMALL_GAMMA)] {
        for n in 2..=5 {
            curves.push(curve(format!("N{n}_{tag}"), chain(n, gamma, gamma), SLOW_T_END));
        }
    }
    Preset { name: "fig3c".into(), description: "survival times, N = 2..5 at two decay scales".into(), curves }
}

fn fig4() -> Preset {
    let (left, right) = chiral_rates(CHIRAL_RATIO);
    Preset {
        name: "fig4".into(),
        description: format!("chiral coupling gamma_R / gamma_L = {CHIRAL_RATIO}, N = 1..5"),
        curves: (1..=5).map(|n| curve(format!("N{n}"), chain(n, left, right), 15.0)).collect(),
    }
}

fn fig5a() -> Preset {
    let mut curves = Vec::new();
    for n in 2..=5 {
        curves.push(curve(format!("N{n}_resonant"), chain(n, 1.0, 1.0), 15.0));
        curves.push(curve(format!("N{n}_detuned"), chain(n, 1.0, 1.0).with_detuning(DETUNING), 15.0));
    }
    Preset { name: "fig5a".into(), description: format!("detuning {DETUNING} versus resonance, N = 2..5"), curves }
}

fn fig5b() -> Preset {
    let mut curves = Vec::new();
    for n in 2..=4 {
        for (tag, d) in SEPARATIONS {
            let mut cfg = chain(n, 1.0, 1.0).with_spacing(d);
            cfg.coupling_form = CouplingForm::Langevin;
            curves.push(curve(format!("N{n}_{}", tag.replace('/', "_")), cfg, 15.0));
        }
    }
    Preset { name: "fig5b".into(), description: "separations L, L/8, L/16 with L one wavelength".into(), curves }
}

pub fn preset(name: &str) -> Result<Preset> {
    match name {
        "fig2" => Ok(fig2()),
        "fig3" => Ok(fig3()),
        "fig3c" => Ok(fig3c()),
        "fig4" => Ok(fig4()),
        "fig5a" => Ok(fig5a()),
        "fig5b" => Ok(fig5b()),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}
