//! Cartesian parameter sweeps over a base configuration.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SimulationConfig;
use crate::dynamics::integrate;
use crate::error::{Error, Result};
use crate::model::AtomParams;
use crate::output::CurveSummary;

pub const SWEEP_FILE: &str = "sweep.csv";

/// Values to scan. Absent axes keep the base value.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridAxes {
    #[serde(default)]
    pub n_atoms: Vec<usize>,
    /// Multiplies both rates of every atom.
    #[serde(default)]
    pub decay_scale: Vec<f64>,
    /// `gamma_R / gamma_L`, keeping each atom's total rate.
    #[serde(default)]
    pub chirality: Vec<f64>,
    #[serde(default)]
    pub detuning: Vec<f64>,
    /// Uniform spacing between neighbours, in resonant wavelengths.
    #[serde(default)]
    pub separation: Vec<f64>,
    #[serde(default)]
    pub pulse_width: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub base: SimulationConfig,
    #[serde(default)]
    pub axes: GridAxes,
}

/// One expanded grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct GridPoint {
    /// Axis name to value, in the fixed axis order.
    pub coords: Vec<(&'static str, f64)>,
    pub config: SimulationConfig,
}

impl GridPoint {
    pub fn label(&self) -> String {
        if self.coords.is_empty() {
            return "base".into();
        }
        self.coords.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
    }
}

const AXIS_NAMES: [&str; 6] = ["n_atoms", "decay_scale", "chirality", "detuning", "separation", "pulse_width"];

fn axis_values(axes: &GridAxes) -> Vec<(&'static str, Vec<f64>)> {
    let lists = [
        axes.n_atoms.iter().map(|&n| n as f64).collect(),
        axes.decay_scale.clone(),
        axes.chirality.clone(),
        axes.detuning.clone(),
        axes.separation.clone(),
        axes.pulse_width.clone(),
    ];
    AXIS_NAMES.into_iter().zip(lists).filter(|(_, v): &(_, Vec<f64>)| !v.is_empty()).collect()
}

fn base_spacing(cfg: &SimulationConfig) -> f64 {
    match cfg.chain.atoms.as_slice() {
        [a, b, ..] => b.position - a.position,
        _ => 0.0,
    }
}

fn apply(config: &mut SimulationConfig, axis: &str, value: f64) -> Result<()> {
    match axis {
        "n_atoms" => {
            let template: AtomParams = *config
                .chain
                .atoms
                .first()
                .ok_or_else(|| Error::config("base.chain.atoms", "n_atoms axis needs a template atom"))?;
            let spacing = base_spacing(config);
            config.chain.atoms = vec![template; value as usize];
            config.chain = config.chain.clone().with_spacing(spacing);
        }
        "decay_scale" => {
            for a in &mut config.chain.atoms {
                a.gamma_left *= value;
                a.gamma_right *= value;
            }
        }
        "chirality" => {
            for a in &mut config.chain.atoms {
                let total = a.gamma_left + a.gamma_right;
                a.gamma_left = total / (1.0 + value);
                a.gamma_right = total - a.gamma_left;
            }
        }
        "detuning" => {
            for a in &mut config.chain.atoms {
                a.detuning = value;
            }
        }
        "separation" => config.chain = config.chain.clone().with_spacing(value),
        "pulse_width" => config.pulse.width = value,
        other => return Err(Error::config("axes", format!("unknown axis {other}"))),
    }
    Ok(())
}

impl GridSpec {
    pub fn load(path: &Path) -> Result<Self> {
        serde_json::from_str(&fs::read_to_string(path)?)
            .map_err(|e| Error::config(format!("line {}, column {}", e.line(), e.column()), e.to_string()))
    }

    /// Cartesian product of the axes, last axis fastest. Axes are applied in
    /// the fixed order `n_atoms`, `decay_scale`, `chirality`, `detuning`,
    /// `separation`, `pulse_width`.
    pub fn expand(&self) -> Result<Vec<GridPoint>> {
        let axes = axis_values(&self.axes);
        if axes.iter().any(|(_, v)| v.iter().any(|x| !x.is_finite())) {
            return Err(Error::config("axes", "grid values must be finite"));
        }
        let mut points = vec![GridPoint { coords: Vec::new(), config: self.base.clone() }];
        for (name, values) in axes {
            let mut next = Vec::with_capacity(points.len() * values.len());
            for p in &points {
                for &v in &values {
                    let mut q = p.clone();
                    apply(&mut q.config, name, v)?;
                    q.coords.push((name, v));
                    next.push(q);
                }
            }
            points = next;
        }
        Ok(points)
    }
}

/// Result of one grid point; failures keep their coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub coords: Vec<(&'static str, f64)>,
    pub outcome: std::result::Result<CurveSummary, String>,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub table: PathBuf,
}

impl SweepReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome.is_err()).count()
    }
}

fn run_point(point: &GridPoint) -> std::result::Result<CurveSummary, String> {
    let cfg = &point.config;
    cfg.validate().into_result().map_err(|e| e.to_string())?;
    let traj = integrate(&cfg.chain, &cfg.pulse, &cfg.integrator).map_err(|e| e.to_string())?;
    CurveSummary::of(&point.label(), &traj).map_err(|e| e.to_string())
}

/// Runs every grid point on a pool of `workers` threads and writes
/// `sweep.csv` into `out_dir`. Rows follow grid order whatever the worker
/// count.
pub fn run_sweep(grid: &GridSpec, workers: usize, out_dir: &Path) -> Result<SweepReport> {
    let points = grid.expand()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::config("workers", e.to_string()))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        points
            .par_iter()
            .map(|p| SweepRow { coords: p.coords.clone(), outcome: run_point(p) })
            .collect()
    });
    fs::create_dir_all(out_dir)?;
    let table = out_dir.join(SWEEP_FILE);
    write_table(&table, &rows)?;
    Ok(SweepReport { rows, table })
}

const SUMMARY_COLUMNS: [&str; 8] = [
    "peak_population",
    "peak_population_time",
    "peak_concurrence",
    "peak_concurrence_time",
    "population_survival",
    "concurrence_survival",
    "max_trace_error",
    "min_eigenvalue",
];

fn summary_fields(s: &CurveSummary) -> [f64; 8] {
    [
        s.peak_population,
        s.peak_population_time,
        s.peak_concurrence,
        s.peak_concurrence_time,
        s.population_survival,
        s.concurrence_survival,
        s.max_trace_error,
        s.min_eigenvalue,
    ]
}

fn write_table(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let axis_names: Vec<&str> = rows.first().map(|r| r.coords.iter().map(|(k, _)| *k).collect()).unwrap_or_default();
    let mut w = csv::Writer::from_path(path)?;
    let header: Vec<&str> = axis_names.iter().copied().chain(["status"]).chain(SUMMARY_COLUMNS).chain(["error"]).collect();
    w.write_record(&header)?;
    for row in rows {
        let mut rec: Vec<String> = row.coords.iter().map(|(_, v)| v.to_string()).collect();
        match &row.outcome {
            Ok(s) => {
                rec.push("ok".into());
                rec.extend(summary_fields(s).iter().map(|x| format!("{x:.12e}")));
                rec.push(String::new());
            }
            Err(e) => {
                rec.push("failed".into());
                rec.extend(std::iter::repeat_n(String::new(), SUMMARY_COLUMNS.len()));
                rec.push(e.clone());
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the coordinates and status of every row of a sweep table.
pub fn read_table(path: &Path) -> Result<Vec<BTreeMap<String, String>>> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    r.records()
        .map(|rec| Ok(headers.iter().zip(rec?.iter()).map(|(h, v)| (h.to_string(), v.to_string())).collect()))
        .collect()
}
