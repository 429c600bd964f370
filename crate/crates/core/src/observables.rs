//! Populations, concurrences and survival statistics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::eigen::{eigenvalues_4x4, CLAMP_THRESHOLD};
use crate::error::{Error, Result};
use crate::model::PulseSpec;
use crate::operator::{atom_mask, kron, partial_trace_pair, pauli_y, Operator};

/// Pulse duration used as the unit for reported survival times.
pub const REFERENCE_PULSE_DURATION: f64 = 4.85;

/// Normalization of the pairwise concurrence average.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AveragingMode {
    /// Mean over all `N (N - 1) / 2` pairs.
    #[default]
    AllPairs,
    /// Sum over all pairs divided by `N / 2`.
    HalfChain,
}

impl std::str::FromStr for AveragingMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "all-pairs" => Ok(AveragingMode::AllPairs),
            "half-chain" => Ok(AveragingMode::HalfChain),
            other => Err(format!("unknown averaging mode `{other}` (expected all-pairs or half-chain)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub t: f64,
    pub p_single: f64,
    pub p_ground: f64,
    /// Keyed by `"i-j"` with 1-based atom indices, `i < j`.
    pub pairwise_concurrences: BTreeMap<String, f64>,
    pub avg_concurrence: f64,
    /// `|Omega(t)| = 2 |g(t)|` in code units.
    pub pulse_value: f64,
}

/// Probability that exactly one atom is excited.
pub fn prob_single_excitation(rho: &Operator) -> f64 {
    let Ok(n) = rho.n_qubits() else { return 0.0 };
    (1..=n).map(|i| rho[(atom_mask(i, n), atom_mask(i, n))].re).sum()
}

/// Probability that every atom is in the ground state.
pub fn prob_ground(rho: &Operator) -> f64 {
    rho[(0, 0)].re
}

/// `rho (sigma_y (x) sigma_y) rho^* (sigma_y (x) sigma_y)`.
pub fn spin_flip_product(rho_pair: &Operator) -> Operator {
    let yy = kron(&pauli_y(), &pauli_y());
    rho_pair.matmul(&yy).matmul(&rho_pair.conj()).matmul(&yy)
}

/// Wootters concurrence of a two-qubit density matrix.
pub fn concurrence(rho_pair: &Operator) -> Result<f64> {
    rho_pair.ensure_dim(4)?;
    let spectrum = eigenvalues_4x4(&spin_flip_product(rho_pair))?.clamp_physical(CLAMP_THRESHOLD);
    let roots: Vec<f64> = spectrum.values.iter().map(|z| z.re.max(0.0).sqrt()).collect();
    let c = roots[0] - roots[1] - roots[2] - roots[3];
    Ok(c.clamp(0.0, 1.0))
}

/// `2 rho_c - |rho_4|` with `rho_c = <eg|rho|eg>` and `rho_4 = <gg|rho|ee>`.
///
/// Only meaningful for identical atoms under a symmetric drive, where the
/// populations and the exchange coherence of the single-excitation block
/// coincide.
pub fn concurrence_shortcut_2atom(rho: &Operator) -> Result<f64> {
    rho.ensure_dim(4)?;
    Ok(2.0 * rho[(2, 2)].re - rho[(0, 3)].norm())
}

/// Checks the shortcut against the general formula.
pub fn shortcut_discrepancy(rho: &Operator) -> Result<f64> {
    Ok((concurrence_shortcut_2atom(rho)? - concurrence(rho)?).abs())
}

pub fn pairs(n_atoms: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n_atoms).flat_map(move |i| (i + 1..=n_atoms).map(move |j| (i, j)))
}

pub fn pair_key((i, j): (usize, usize)) -> String {
    format!("{i}-{j}")
}

/// Concurrence of every reduced pair `(i, j)`, `i < j`.
pub fn pairwise_concurrences(rho_full: &Operator, n_atoms: usize) -> Result<Vec<((usize, usize), f64)>> {
    pairs(n_atoms)
        .map(|pair| Ok((pair, concurrence(&partial_trace_pair(rho_full, pair, n_atoms)?)?)))
        .collect()
}

fn average(values: &[f64], n_atoms: usize, mode: AveragingMode) -> f64 {
    let sum: f64 = values.iter().sum();
    match mode {
        AveragingMode::AllPairs => sum / values.len() as f64,
        AveragingMode::HalfChain => sum / (n_atoms as f64 / 2.0),
    }
}

pub fn avg_pairwise_concurrence(rho_full: &Operator, n_atoms: usize, mode: AveragingMode) -> Result<f64> {
    if n_atoms < 2 {
        return Err(Error::config("n_atoms", "pairwise concurrence needs at least two atoms"));
    }
    let values: Vec<f64> = pairwise_concurrences(rho_full, n_atoms)?.into_iter().map(|(_, c)| c).collect();
    Ok(average(&values, n_atoms, mode))
}

/// Observable bundle for one sample of `rho_s`.
pub fn record(rho_s: &Operator, n_atoms: usize, t: f64, pulse: &PulseSpec, mode: AveragingMode) -> Result<ObservableRecord> {
    let mut pairwise_concurrences = BTreeMap::new();
    let mut avg_concurrence = 0.0;
    if n_atoms >= 2 {
        let pc = self::pairwise_concurrences(rho_s, n_atoms)?;
        let values: Vec<f64> = pc.iter().map(|&(_, c)| c).collect();
        avg_concurrence = average(&values, n_atoms, mode);
        pairwise_concurrences = pc.into_iter().map(|(p, c)| (pair_key(p), c)).collect();
    }
    Ok(ObservableRecord {
        t,
        p_single: prob_single_excitation(rho_s),
        p_ground: prob_ground(rho_s),
        pairwise_concurrences,
        avg_concurrence,
        pulse_value: 2.0 * pulse.amplitude(t).abs(),
    })
}

/// Threshold used to decide whether a curve is "alive".
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum ThresholdMode {
    /// Fraction of the curve's own peak.
    FractionOfPeak(f64),
    Absolute(f64),
}

impl Default for ThresholdMode {
    fn default() -> Self {
        ThresholdMode::FractionOfPeak(0.02)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurvivalSummary {
    pub peak_value: f64,
    pub peak_time: f64,
    /// Total time spent at or above the threshold.
    pub survival_time: f64,
    pub threshold_used: f64,
    /// Set when the curve never rises above zero.
    pub all_zero: bool,
}

impl SurvivalSummary {
    pub fn in_pulse_durations(&self, pulse_duration: f64) -> f64 {
        self.survival_time / pulse_duration
    }
}

/// Survival statistics of a sampled curve. Each maximal run of consecutive
/// samples at or above the threshold contributes the time span from its first
/// to its last sample.
pub fn survival_time(times: &[f64], values: &[f64], mode: ThresholdMode) -> Result<SurvivalSummary> {
    if times.is_empty() || times.len() != values.len() {
        return Err(Error::config("series", "survival time needs a non-empty series with matching time grid"));
    }
    let (peak_idx, &peak_value) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    let threshold = match mode {
        ThresholdMode::FractionOfPeak(f) => f * peak_value,
        ThresholdMode::Absolute(x) => x,
    };
    if peak_value <= 0.0 {
        return Ok(SurvivalSummary {
            peak_value,
            peak_time: times[peak_idx],
            survival_time: 0.0,
            threshold_used: threshold,
            all_zero: true,
        });
    }
    let mut total = 0.0;
    let mut run_start: Option<usize> = None;
    for k in 0..=values.len() {
        let alive = k < values.len() && values[k] >= threshold;
        match (alive, run_start) {
            (true, None) => run_start = Some(k),
            (false, Some(s)) => {
                total += times[k - 1] - times[s];
                run_start = None;
            }
            _ => {}
        }
    }
    Ok(SurvivalSummary {
        peak_value,
        peak_time: times[peak_idx],
        survival_time: total,
        threshold_used: threshold,
        all_zero: false,
    })
}

/// Time at which `values` first reaches `level`, if ever.
pub fn onset_time(times: &[f64], values: &[f64], level: f64) -> Option<f64> {
    times.iter().zip(values).find(|(_, &v)| v >= level).map(|(&t, _)| t)
}

/// True if the curve falls below `low` after exceeding `high`, then exceeds
/// `high` again.
pub fn has_death_and_revival(values: &[f64], low: f64, high: f64) -> bool {
    let mut stage = 0;
    for &v in values {
        stage = match stage {
            0 if v > high => 1,
            1 if v < low => 2,
            2 if v > high => return true,
            s => s,
        };
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;
    use proptest::prelude::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn bell() -> Operator {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Operator::projector(&[c(0.0), c(h), c(h), c(0.0)])
    }

    /// Werner concurrence from the closed form `max(0, (3p - 1) / 2)`.
    fn werner_oracle(p: f64) -> f64 {
        ((3.0 * p - 1.0) / 2.0).max(0.0)
    }

    fn werner(p: f64) -> Operator {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phi_plus = Operator::projector(&[c(h), c(0.0), c(0.0), c(h)]);
        &phi_plus.scale_real(p) + &Operator::identity(4).scale_real((1.0 - p) / 4.0)
    }

    #[test]
    fn populations_of_basis_states() {
        let n = 3;
        let ground = Operator::basis_outer(8, 0, 0);
        assert_eq!(prob_single_excitation(&ground), 0.0);
        assert_eq!(prob_ground(&ground), 1.0);
        let one = atom_mask(1, n);
        assert_eq!(prob_single_excitation(&Operator::basis_outer(8, one, one)), 1.0);
        assert_eq!(prob_ground(&Operator::identity(2).scale_real(0.5)), 0.5);
    }

    #[test]
    fn bell_state_is_maximally_entangled() {
        assert!((concurrence(&bell()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_states_are_unentangled() {
        let plus = Operator::projector(&[c(0.6), C64::new(0.0, 0.8)]);
        let mixed = Operator::from_diagonal(&[c(0.3), c(0.7)]);
        assert!(concurrence(&kron(&plus, &mixed)).unwrap().abs() < 1e-12);
        assert_eq!(concurrence(&Operator::basis_outer(4, 0, 0)).unwrap(), 0.0);
    }

    #[test]
    fn werner_state_matches_closed_form() {
        assert!((concurrence(&werner(0.5)).unwrap() - 0.25).abs() < 1e-12);
        for p in [0.1, 1.0 / 3.0, 0.6, 0.9, 1.0] {
            assert!((concurrence(&werner(p)).unwrap() - werner_oracle(p)).abs() < 1e-9, "p = {p}");
        }
    }

    #[test]
    fn shortcut_cases() {
        assert_eq!(concurrence_shortcut_2atom(&Operator::basis_outer(4, 0, 0)).unwrap(), 0.0);
        assert!((concurrence_shortcut_2atom(&bell()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_atom_average_equals_pair() {
        let rho = werner(0.8);
        let single = concurrence(&rho).unwrap();
        for mode in [AveragingMode::AllPairs, AveragingMode::HalfChain] {
            assert!((avg_pairwise_concurrence(&rho, 2, mode).unwrap() - single).abs() < 1e-15);
        }
        assert!(avg_pairwise_concurrence(&Operator::identity(2), 1, AveragingMode::AllPairs).is_err());
    }

    #[test]
    fn w_state_pair_concurrence() {
        // (|100> + |010> + |001>)/sqrt 3: every pair has concurrence 2/3
        let s = 1.0 / 3f64.sqrt();
        let mut psi = vec![c(0.0); 8];
        for i in 1..=3 {
            psi[atom_mask(i, 3)] = c(s);
        }
        let rho = Operator::projector(&psi);
        let avg = avg_pairwise_concurrence(&rho, 3, AveragingMode::AllPairs).unwrap();
        assert!((avg - 2.0 / 3.0).abs() < 1e-10);
        let literal = avg_pairwise_concurrence(&rho, 3, AveragingMode::HalfChain).unwrap();
        assert!((literal - 3.0 * (2.0 / 3.0) / 1.5).abs() < 1e-10);
    }

    #[test]
    fn survival_of_rectangle() {
        let times: Vec<f64> = (0..=100).map(|k| k as f64 * 0.1).collect();
        let values: Vec<f64> = times.iter().map(|&t| if (2.0..=5.0 + 1e-9).contains(&t) { 1.0 } else { 0.0 }).collect();
        let s = survival_time(&times, &values, ThresholdMode::default()).unwrap();
        assert!((s.survival_time - 3.0).abs() < 1e-9);
        assert_eq!(s.peak_value, 1.0);
        assert!((s.in_pulse_durations(REFERENCE_PULSE_DURATION) - 3.0 / 4.85).abs() < 1e-9);
    }

    #[test]
    fn survival_of_zero_curve() {
        let times = [0.0, 1.0, 2.0];
        let s = survival_time(&times, &[0.0; 3], ThresholdMode::default()).unwrap();
        assert_eq!(s.survival_time, 0.0);
        assert!(s.all_zero);
        assert!(survival_time(&[], &[], ThresholdMode::default()).is_err());
    }

    #[test]
    fn death_and_revival_detection() {
        assert!(has_death_and_revival(&[0.0, 0.2, 0.0, 0.05], 1e-3, 1e-2));
        assert!(!has_death_and_revival(&[0.0, 0.2, 0.1, 0.0], 1e-3, 1e-2));
    }

    fn random_local_unitary(a: f64, b: f64, c_: f64) -> Operator {
        // exp(-i (a X + b Y + c Z)) in closed form
        let norm = (a * a + b * b + c_ * c_).sqrt().max(1e-12);
        let (s, co) = norm.sin_cos();
        let (x, y, z) = (a / norm, b / norm, c_ / norm);
        let i = C64::new(0.0, 1.0);
        let data = vec![
            c(co) - i * s * z,
            -i * s * (c(x) - i * y),
            -i * s * (c(x) + i * y),
            c(co) + i * s * z,
        ];
        Operator::from_vec(2, data).unwrap()
    }

    proptest! {
        #[test]
        fn concurrence_is_local_unitary_invariant(
            p in 0.0f64..1.0,
            u in prop::collection::vec(-3.0f64..3.0, 6),
        ) {
            let rho = werner(p);
            let a = random_local_unitary(u[0], u[1], u[2]);
            let b = random_local_unitary(u[3], u[4], u[5]);
            let ab = kron(&a, &b);
            let rotated = ab.matmul(&rho).matmul(&ab.adjoint());
            let delta = (concurrence(&rotated).unwrap() - concurrence(&rho).unwrap()).abs();
            prop_assert!(delta < 1e-8);
        }

        #[test]
        fn concurrence_in_unit_interval(w in prop::collection::vec(-1.0f64..1.0, 8), mix in 0.0f64..1.0) {
            let psi: Vec<C64> = (0..4).map(|k| C64::new(w[2 * k], w[2 * k + 1])).collect();
            let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            prop_assume!(norm > 1e-3);
            let psi: Vec<C64> = psi.iter().map(|z| z / norm).collect();
            let rho = &Operator::projector(&psi).scale_real(mix) + &Operator::identity(4).scale_real((1.0 - mix) / 4.0);
            let value = concurrence(&rho).unwrap();
            prop_assert!((0.0..=1.0).contains(&value));
        }

        #[test]
        fn all_pairs_average_is_permutation_invariant(w in prop::collection::vec(-1.0f64..1.0, 16)) {
            let psi: Vec<C64> = (0..8).map(|k| C64::new(w[2 * k], w[2 * k + 1])).collect();
            let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            prop_assume!(norm > 1e-3);
            let psi: Vec<C64> = psi.iter().map(|z| z / norm).collect();
            let rho = Operator::projector(&psi);
            // relabel atoms (1, 2, 3) -> (3, 1, 2)
            let perm = |b: usize| ((b & 1) << 2) | (b >> 1);
            let relabeled = rho.permute_basis(perm);
            let a = avg_pairwise_concurrence(&rho, 3, AveragingMode::AllPairs).unwrap();
            let b = avg_pairwise_concurrence(&relabeled, 3, AveragingMode::AllPairs).unwrap();
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}
