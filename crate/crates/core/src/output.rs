//! Running curves and writing their CSV time series, summary and manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Conventions, SimulationConfig};
use crate::dynamics::{integrate, Trajectory};
use crate::error::Result;
use crate::observables::{pair_key, pairs, survival_time, ThresholdMode, REFERENCE_PULSE_DURATION};
use crate::presets::Curve;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const SUMMARY_FILE: &str = "summary.json";
const MANIFEST_LINE: &str = "# manifest: manifest.json";

/// Peak and survival figures of one trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub label: String,
    pub n_atoms: usize,
    pub peak_population: f64,
    pub peak_population_time: f64,
    pub peak_concurrence: f64,
    pub peak_concurrence_time: f64,
    /// Time with `P >= 2%` of its peak.
    pub population_survival: f64,
    /// Time with `C >= 2%` of its peak.
    pub concurrence_survival: f64,
    pub population_survival_pulses: f64,
    pub concurrence_survival_pulses: f64,
    pub final_ground_population: f64,
    pub max_trace_error: f64,
    pub max_hermiticity_error: f64,
    pub min_eigenvalue: f64,
    pub max_rho00_drift: f64,
    pub invariant_breaches: usize,
}

impl CurveSummary {
    pub fn of(label: &str, traj: &Trajectory) -> Result<Self> {
        let p = traj.series(|r| r.p_single);
        let c = traj.series(|r| r.avg_concurrence);
        let sp = survival_time(&traj.times, &p, ThresholdMode::default())?;
        let sc = survival_time(&traj.times, &c, ThresholdMode::default())?;
        Ok(Self {
            label: label.to_string(),
            n_atoms: traj.chain.n_atoms(),
            peak_population: sp.peak_value,
            peak_population_time: sp.peak_time,
            peak_concurrence: sc.peak_value,
            peak_concurrence_time: sc.peak_time,
            population_survival: sp.survival_time,
            concurrence_survival: sc.survival_time,
            population_survival_pulses: sp.in_pulse_durations(REFERENCE_PULSE_DURATION),
            concurrence_survival_pulses: sc.in_pulse_durations(REFERENCE_PULSE_DURATION),
            final_ground_population: traj.records.last().map_or(0.0, |r| r.p_ground),
            max_trace_error: traj.max_trace_error(),
            max_hermiticity_error: traj.max_hermiticity_error(),
            min_eigenvalue: traj.min_eigenvalue(),
            max_rho00_drift: traj.max_rho00_drift(),
            invariant_breaches: traj.breaches.len(),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveManifest {
    pub config: SimulationConfig,
    pub conventions: Conventions,
    pub files: Vec<String>,
}

/// Self-description written next to every run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub name: String,
    pub version: String,
    /// Product basis ordering used for every density matrix.
    pub basis: String,
    pub curves: Vec<CurveManifest>,
    pub wall_clock_seconds: f64,
}

pub const BASIS_DESCRIPTION: &str =
    "atom-1-major product basis; atom i excited iff bit (N - i) of the index is set; two atoms: |gg>, |ge>, |eg>, |ee>";

/// Output of a finished run.
#[derive(Debug)]
pub struct RunOutput {
    pub trajectories: Vec<(String, Trajectory)>,
    pub summaries: Vec<CurveSummary>,
    pub files: Vec<PathBuf>,
}

fn fmt(x: f64) -> String {
    format!("{x:.12e}")
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let mut file = fs::File::create(path)?;
    writeln!(file, "{MANIFEST_LINE}")?;
    Ok(csv::Writer::from_writer(file))
}

/// Writes `<label>_populations.csv` and `<label>_concurrence.csv`.
pub fn write_curve_csv(dir: &Path, label: &str, traj: &Trajectory) -> Result<Vec<PathBuf>> {
    let pop_path = dir.join(format!("{label}_populations.csv"));
    let mut w = csv_writer(&pop_path)?;
    w.write_record(["t", "p_single", "p_ground", "pulse_value"])?;
    for r in &traj.records {
        w.write_record([fmt(r.t), fmt(r.p_single), fmt(r.p_ground), fmt(r.pulse_value)])?;
    }
    w.flush()?;

    let conc_path = dir.join(format!("{label}_concurrence.csv"));
    let keys: Vec<String> = pairs(traj.chain.n_atoms()).map(pair_key).collect();
    let mut w = csv_writer(&conc_path)?;
    let header: Vec<String> = ["t".to_string(), "avg_concurrence".to_string()]
        .into_iter()
        .chain(keys.iter().map(|k| format!("c_{k}")))
        .collect();
    w.write_record(&header)?;
    for r in &traj.records {
        let row: Vec<String> = [fmt(r.t), fmt(r.avg_concurrence)]
            .into_iter()
            .chain(keys.iter().map(|k| fmt(r.pairwise_concurrences.get(k).copied().unwrap_or(0.0))))
            .collect();
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(vec![pop_path, conc_path])
}

/// Integrates every curve on the current rayon pool, then writes all artifacts into `dir`.
pub fn run_curves(name: &str, curves: &[Curve], dir: &Path) -> Result<RunOutput> {
    for curve in curves {
        SimulationConfig::from_curve(curve).validate().into_result()?;
    }
    fs::create_dir_all(dir)?;
    let start = Instant::now();
    let trajectories = curves
        .par_iter()
        .map(|curve| {
            log::info!("integrating {name}/{}", curve.label);
            Ok((curve.label.clone(), integrate(&curve.chain, &curve.pulse, &curve.integrator)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let elapsed = start.elapsed().as_secs_f64();

    let mut files = Vec::new();
    let mut summaries = Vec::new();
    let mut manifests = Vec::new();
    for (curve, (label, traj)) in curves.iter().zip(&trajectories) {
        let written = write_curve_csv(dir, label, traj)?;
        summaries.push(CurveSummary::of(label, traj)?);
        let config = SimulationConfig::from_curve(curve);
        manifests.push(CurveManifest {
            conventions: Conventions::of(&config),
            config,
            files: written.iter().filter_map(|p| p.file_name()).map(|f| f.to_string_lossy().into_owned()).collect(),
        });
        files.extend(written);
    }
    let summary_path = dir.join(SUMMARY_FILE);
    fs::write(&summary_path, serde_json::to_string_pretty(&summaries)?)?;
    let manifest = RunManifest {
        name: name.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        basis: BASIS_DESCRIPTION.to_string(),
        curves: manifests,
        wall_clock_seconds: elapsed,
    };
    let manifest_path = dir.join(MANIFEST_FILE);
    fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)?)?;
    files.push(summary_path);
    files.push(manifest_path);
    Ok(RunOutput { trajectories, summaries, files })
}
