//! Joint fixed-step integration of the `(rho_00, rho_10, rho_s)` hierarchy.
//!
//! `rho_00` evolves under the chain Liouvillian alone, `rho_10` is driven by
//! `rho_00`, and `rho_s` is driven by `rho_10`. Nothing feeds back up the
//! hierarchy. `rho_01` is never stored; it is always `rho_10^dagger`.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ChainConfig, Generator, PulseSpec};
use crate::observables::{self, AveragingMode, ObservableRecord};
use crate::operator::Operator;

#[derive(Clone, Debug, PartialEq)]
pub struct HierarchyState {
    pub rho_s: Operator,
    pub rho_10: Operator,
    pub rho_00: Operator,
    pub t: f64,
}

/// Time derivative of each member of the hierarchy.
#[derive(Clone, Debug, PartialEq)]
pub struct HierarchyDerivative {
    pub rho_s: Operator,
    pub rho_10: Operator,
    pub rho_00: Operator,
}

impl HierarchyState {
    fn offset(&self, k: &HierarchyDerivative, h: f64) -> Self {
        let mut out = self.clone();
        out.rho_s.axpy(h.into(), &k.rho_s);
        out.rho_10.axpy(h.into(), &k.rho_10);
        out.rho_00.axpy(h.into(), &k.rho_00);
        out.t += h;
        out
    }

    pub fn is_finite(&self) -> bool {
        self.rho_s.is_finite() && self.rho_10.is_finite() && self.rho_00.is_finite()
    }

    /// `rho_01 = rho_10^dagger`.
    pub fn rho_01(&self) -> Operator {
        self.rho_10.adjoint()
    }
}

/// All atoms in the ground state, no reservoir coherence, at `t = 0`.
pub fn initial_state(cfg: &ChainConfig) -> HierarchyState {
    initial_state_at(cfg, 0.0)
}

pub fn initial_state_at(cfg: &ChainConfig, t0: f64) -> HierarchyState {
    let dim = cfg.dim();
    HierarchyState {
        rho_s: Operator::basis_outer(dim, 0, 0),
        rho_10: Operator::zeros(dim),
        rho_00: Operator::basis_outer(dim, 0, 0),
        t: t0,
    }
}

pub fn rhs(gen: &Generator, state: &HierarchyState, t: f64) -> Result<HierarchyDerivative> {
    let dim = gen.dim();
    state.rho_s.ensure_dim(dim)?;
    state.rho_10.ensure_dim(dim)?;
    state.rho_00.ensure_dim(dim)?;
    let g = gen.drive_amplitude(t);

    let rho_00 = gen.apply_liouvillian(&state.rho_00);
    let mut rho_10 = gen.apply_liouvillian(&state.rho_10);
    gen.add_drive_10(&state.rho_00, g, &mut rho_10);
    let mut rho_s = gen.apply_liouvillian(&state.rho_s);
    gen.add_drive_s(&state.rho_10, g, &mut rho_s);
    Ok(HierarchyDerivative { rho_s, rho_10, rho_00 })
}

/// One classical fourth-order Runge-Kutta step.
pub fn rk4_step(gen: &Generator, state: &HierarchyState, dt: f64) -> Result<HierarchyState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::config("integrator.dt", format!("step must be positive, got {dt}")));
    }
    let t = state.t;
    let k1 = rhs(gen, state, t)?;
    let k2 = rhs(gen, &state.offset(&k1, 0.5 * dt), t + 0.5 * dt)?;
    let k3 = rhs(gen, &state.offset(&k2, 0.5 * dt), t + 0.5 * dt)?;
    let k4 = rhs(gen, &state.offset(&k3, dt), t + dt)?;

    let mut next = state.clone();
    let w = [dt / 6.0, dt / 3.0, dt / 3.0, dt / 6.0];
    for (k, wk) in [&k1, &k2, &k3, &k4].into_iter().zip(w) {
        next.rho_s.axpy(wk.into(), &k.rho_s);
        next.rho_10.axpy(wk.into(), &k.rho_10);
        next.rho_00.axpy(wk.into(), &k.rho_00);
    }
    next.t = t + dt;
    if !next.is_finite() {
        return Err(Error::BlowUp { t: next.t });
    }
    Ok(next)
}

/// What to do when a sampled state violates an invariant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckAction {
    #[default]
    Warn,
    Abort,
}

impl std::str::FromStr for CheckAction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "warn" => Ok(CheckAction::Warn),
            "abort" => Ok(CheckAction::Abort),
            other => Err(format!("unknown check action `{other}` (expected warn or abort)")),
        }
    }
}

/// Thresholds applied at sample points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantTolerances {
    pub trace: f64,
    pub hermiticity: f64,
    pub positivity: f64,
}

impl Default for InvariantTolerances {
    fn default() -> Self {
        Self { trace: 1e-6, hermiticity: 1e-8, positivity: 1e-6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSettings {
    pub t0: f64,
    pub t_end: f64,
    pub dt: f64,
    /// Interval between recorded samples.
    pub sample_every: f64,
    #[serde(default)]
    pub check: CheckAction,
    #[serde(default)]
    pub tolerances: InvariantTolerances,
    #[serde(default)]
    pub averaging: AveragingMode,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            t0: 0.0,
            t_end: 15.0,
            dt: 1e-3,
            sample_every: 0.01,
            check: CheckAction::Warn,
            tolerances: InvariantTolerances::default(),
            averaging: AveragingMode::AllPairs,
        }
    }
}

impl IntegratorSettings {
    pub fn findings(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            out.push(("integrator.dt".into(), format!("must be positive, got {}", self.dt)));
        }
        if !(self.t_end > self.t0) {
            out.push(("integrator.t_end".into(), format!("must exceed t0 = {}", self.t0)));
        }
        if !(self.sample_every >= self.dt) {
            out.push(("integrator.sample_every".into(), "must be at least one step".into()));
        }
        out
    }

    fn validate(&self) -> Result<()> {
        match self.findings().into_iter().next() {
            None => Ok(()),
            Some((path, message)) => Err(Error::Config { path, message }),
        }
    }

    fn steps(&self) -> (usize, usize) {
        let total = ((self.t_end - self.t0) / self.dt).round() as usize;
        let stride = ((self.sample_every / self.dt).round() as usize).max(1);
        (total, stride)
    }
}

/// Invariant diagnostics at one sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleDiagnostics {
    /// `|tr(rho_s) - 1|`.
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
    /// `max |rho_00(t) - rho_00(t0)|`.
    pub rho00_drift: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub records: Vec<ObservableRecord>,
    pub diagnostics: Vec<SampleDiagnostics>,
    pub chain: ChainConfig,
    pub pulse: PulseSpec,
    pub settings: IntegratorSettings,
    /// Human-readable invariant breaches seen in warn mode.
    pub breaches: Vec<String>,
}

impl Trajectory {
    pub fn series(&self, f: impl Fn(&ObservableRecord) -> f64) -> Vec<f64> {
        self.records.iter().map(f).collect()
    }

    pub fn max_trace_error(&self) -> f64 {
        self.diagnostics.iter().map(|d| d.trace_error).fold(0.0, f64::max)
    }

    pub fn max_hermiticity_error(&self) -> f64 {
        self.diagnostics.iter().map(|d| d.hermiticity_error).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.diagnostics.iter().map(|d| d.min_eigenvalue).fold(f64::INFINITY, f64::min)
    }

    pub fn max_rho00_drift(&self) -> f64 {
        self.diagnostics.iter().map(|d| d.rho00_drift).fold(0.0, f64::max)
    }
}

fn diagnose(state: &HierarchyState, rho00_start: &Operator) -> SampleDiagnostics {
    SampleDiagnostics {
        trace_error: (state.rho_s.trace() - 1.0).norm(),
        hermiticity_error: state.rho_s.hermiticity_error(),
        min_eigenvalue: state.rho_s.min_hermitian_eigenvalue(),
        rho00_drift: state.rho_00.max_abs_diff(rho00_start),
    }
}

fn breach(d: &SampleDiagnostics, tol: &InvariantTolerances) -> Option<String> {
    let mut parts = Vec::new();
    if d.trace_error > tol.trace {
        parts.push(format!("trace error {:.3e}", d.trace_error));
    }
    if d.hermiticity_error > tol.hermiticity {
        parts.push(format!("hermiticity error {:.3e}", d.hermiticity_error));
    }
    if d.min_eigenvalue < -tol.positivity {
        parts.push(format!("min eigenvalue {:.3e}", d.min_eigenvalue));
    }
    (!parts.is_empty()).then(|| parts.join(", "))
}

/// Integrates from the ground state with fixed-step RK4, sampling observables
/// and invariants every `settings.sample_every`.
pub fn integrate(cfg: &ChainConfig, pulse: &PulseSpec, settings: &IntegratorSettings) -> Result<Trajectory> {
    integrate_from(cfg, pulse, settings, initial_state_at(cfg, settings.t0))
}

pub fn integrate_from(
    cfg: &ChainConfig,
    pulse: &PulseSpec,
    settings: &IntegratorSettings,
    start: HierarchyState,
) -> Result<Trajectory> {
    settings.validate()?;
    let gen = Generator::new(cfg, pulse)?;
    let n = cfg.n_atoms();
    let (total, stride) = settings.steps();
    let rho00_start = start.rho_00.clone();

    let mut traj = Trajectory {
        times: Vec::with_capacity(total / stride + 1),
        records: Vec::with_capacity(total / stride + 1),
        diagnostics: Vec::with_capacity(total / stride + 1),
        chain: cfg.clone(),
        pulse: *pulse,
        settings: *settings,
        breaches: Vec::new(),
    };
    let mut state = start;
    // warn once per run so long breaches do not flood the log
    let mut warned = false;
    for step in 0..=total {
        if step % stride == 0 || step == total {
            let diag = diagnose(&state, &rho00_start);
            if let Some(message) = breach(&diag, &settings.tolerances) {
                match settings.check {
                    CheckAction::Abort => return Err(Error::Invariant { t: state.t, message }),
                    CheckAction::Warn => {
                        if !warned {
                            warn!("t = {:.4}: {message} (n_atoms = {n})", state.t);
                            warned = true;
                        }
                        traj.breaches.push(format!("t = {:.4}: {message}", state.t));
                    }
                }
            }
            let record = observables::record(&state.rho_s, n, state.t, pulse, settings.averaging)?;
            traj.times.push(state.t);
            traj.records.push(record);
            traj.diagnostics.push(diag);
        }
        if step < total {
            state = rk4_step(&gen, &state, settings.dt)?;
        }
    }
    Ok(traj)
}

/// Integrates and returns only the final hierarchy state.
pub fn evolve_to(gen: &Generator, start: HierarchyState, t_end: f64, dt: f64) -> Result<HierarchyState> {
    let steps = ((t_end - start.t) / dt).round() as usize;
    let mut state = start;
    for _ in 0..steps {
        state = rk4_step(gen, &state, dt)?;
    }
    Ok(state)
}
