//! JSON run configuration and its validation report.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::IntegratorSettings;
use crate::error::{Error, Result};
use crate::model::{ChainConfig, CouplingForm, DriveCoefficient, Normalization, PhaseConvention, PulseSpec};
use crate::observables::{pairs, pair_key, AveragingMode};
use crate::presets::Curve;

/// One simulation: a chain, a pulse and integrator settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub chain: ChainConfig,
    pub pulse: PulseSpec,
    #[serde(default)]
    pub integrator: IntegratorSettings,
}

fn default_name() -> String {
    "run".into()
}

impl SimulationConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::config(
                format!("line {}, column {}", e.line(), e.column()),
                e.to_string(),
            )
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_curve(curve: &Curve) -> Self {
        Self {
            name: curve.label.clone(),
            chain: curve.chain.clone(),
            pulse: curve.pulse,
            integrator: curve.integrator,
        }
    }

    pub fn as_curve(&self) -> Curve {
        Curve {
            label: self.name.clone(),
            chain: self.chain.clone(),
            pulse: self.pulse,
            integrator: self.integrator,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut findings: Vec<Finding> = self
            .chain
            .findings()
            .into_iter()
            .chain(self.pulse.findings())
            .chain(self.integrator.findings())
            .map(|(path, message)| Finding { path, message })
            .collect();
        if !self.name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) || self.name.is_empty() {
            findings.push(Finding {
                path: "name".into(),
                message: "must be non-empty and use only letters, digits, '-', '_' or '.'".into(),
            });
        }
        let phases = if findings.iter().any(|f| f.path.starts_with("chain")) {
            Vec::new()
        } else {
            pairs(self.chain.n_atoms())
                .map(|(i, j)| PairPhase { pair: pair_key((i, j)), phase: self.chain.pair_phase(j, i) })
                .collect()
        };
        ValidationReport { valid: findings.is_empty(), findings, conventions: Conventions::of(self), phases }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub path: String,
    pub message: String,
}

/// Convention flags in force for a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub drive_coefficient: DriveCoefficient,
    pub normalization: Normalization,
    pub phase_convention: PhaseConvention,
    pub coupling_form: CouplingForm,
    pub averaging: AveragingMode,
}

impl Conventions {
    pub fn of(cfg: &SimulationConfig) -> Self {
        Self {
            drive_coefficient: cfg.pulse.drive_coefficient,
            normalization: cfg.pulse.normalization,
            phase_convention: cfg.chain.phase_convention,
            coupling_form: cfg.chain.coupling_form,
            averaging: cfg.integrator.averaging,
        }
    }
}

/// Propagation phase `phi_ji` of a pair `i-j`, `i < j`, in radians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairPhase {
    pub pair: String,
    pub phase: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub findings: Vec<Finding>,
    pub conventions: Conventions,
    pub phases: Vec<PairPhase>,
}

impl ValidationReport {
    /// First finding as an error, if any.
    pub fn into_result(self) -> Result<()> {
        match self.findings.into_iter().next() {
            None => Ok(()),
            Some(f) => Err(Error::Config { path: f.path, message: f.message }),
        }
    }
}

/// Serialized name of a unit enum variant.
fn tag<T: Serialize>(value: &T) -> String {
    serde_json::to_value(value).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{}", if self.valid { "valid" } else { "invalid" })?;
        for finding in &self.findings {
            writeln!(f, "  {}: {}", finding.path, finding.message)?;
        }
        let c = &self.conventions;
        writeln!(
            f,
            "conventions: drive_coefficient={} normalization={} phase_convention={} coupling_form={} averaging={}",
            tag(&c.drive_coefficient),
            tag(&c.normalization),
            tag(&c.phase_convention),
            tag(&c.coupling_form),
            tag(&c.averaging)
        )?;
        for p in &self.phases {
            writeln!(f, "phase {}: {:.6} rad", p.pair, p.phase)?;
        }
        Ok(())
    }
}
