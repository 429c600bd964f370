//! Chain and pulse configuration, and the right-hand-side superoperators of
//! the single-photon Fock-state hierarchy.
//!
//! Code units: the reference decay rate is 1, times are in units of its
//! inverse, positions in units of the resonant wavelength.
//!
//! The `apply_*` functions are written directly in terms of dense
//! `sigma_i^-` matrices and are the reference route. [`Generator`] is the
//! bit-indexed form used by the integrator; the two are cross-checked in
//! tests.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{atom_mask, atomic_lowering, Operator};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomParams {
    /// Decay rate into the left-moving continuum.
    pub gamma_left: f64,
    /// Decay rate into the right-moving continuum.
    pub gamma_right: f64,
    /// Transition frequency minus pulse carrier frequency.
    pub detuning: f64,
    /// Position along the waveguide, in resonant wavelengths.
    pub position: f64,
}

impl AtomParams {
    pub fn symmetric(gamma: f64) -> Self {
        Self { gamma_left: gamma, gamma_right: gamma, detuning: 0.0, position: 0.0 }
    }

    /// Per-channel average `(gamma_R + gamma_L) / 2`.
    pub fn gamma_avg(&self) -> f64 {
        0.5 * (self.gamma_left + self.gamma_right)
    }
}

/// How a position difference is turned into a propagation phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseConvention {
    /// `phi_ij = 2 pi k0 (d_i - d_j)`.
    #[default]
    Wavelength,
    /// `phi_ij = 2 pi D` with `D = 2 pi k0 (d_i - d_j)`, the literal
    /// reading of the printed exponent (2 pi applied twice).
    DoubleCounted,
}

/// Placement of the propagation phases in the cooperative-decay terms and in
/// the drive of the coherence operator. Both forms coincide when every
/// relative phase is a multiple of 2 pi.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingForm {
    /// Phases exactly as printed. Not trace preserving for
    /// `sin(phi_ij) != 0`, and the coherence drive carries the absolute
    /// phase `exp(-i k0 d_i)`.
    #[default]
    AsPrinted,
    /// Phases as produced by the combined Langevin equation: the
    /// cooperative part is trace preserving and only relative phases enter
    /// the drive.
    Langevin,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub atoms: Vec<AtomParams>,
    /// Photon wavenumber in inverse resonant wavelengths.
    pub k0_wavelengths: f64,
    #[serde(default)]
    pub phase_convention: PhaseConvention,
    #[serde(default)]
    pub coupling_form: CouplingForm,
}

impl ChainConfig {
    pub fn new(atoms: Vec<AtomParams>) -> Self {
        Self {
            atoms,
            k0_wavelengths: 1.0,
            phase_convention: PhaseConvention::default(),
            coupling_form: CouplingForm::default(),
        }
    }

    /// `n` identical atoms with `gamma_left = gamma_right = gamma`, all at
    /// the same position.
    pub fn uniform(n: usize, gamma: f64) -> Self {
        Self::new(vec![AtomParams::symmetric(gamma); n])
    }

    #[inline]
    pub fn n_atoms(&self) -> usize {
        self.atoms.len()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        1 << self.atoms.len()
    }

    pub fn with_spacing(mut self, spacing: f64) -> Self {
        for (k, atom) in self.atoms.iter_mut().enumerate() {
            atom.position = k as f64 * spacing;
        }
        self
    }

    pub fn with_detuning(mut self, detuning: f64) -> Self {
        for atom in &mut self.atoms {
            atom.detuning = detuning;
        }
        self
    }

    /// Drive phase `k0 d_i` of atom `i` (1-based).
    pub fn drive_phase(&self, i: usize) -> f64 {
        TAU * self.k0_wavelengths * self.atoms[i - 1].position
    }

    /// Relative phase `phi_ij` between atoms `i` and `j` (1-based).
    pub fn pair_phase(&self, i: usize, j: usize) -> f64 {
        let d = TAU * self.k0_wavelengths * (self.atoms[i - 1].position - self.atoms[j - 1].position);
        match self.phase_convention {
            PhaseConvention::Wavelength => d,
            PhaseConvention::DoubleCounted => TAU * d,
        }
    }

    /// Cooperative prefactor for the ordered pair `(i, j)`: right-moving
    /// rates couple `i > j`, left-moving rates couple `i < j`.
    pub fn pair_rate(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (&self.atoms[i - 1], &self.atoms[j - 1]);
        if i > j {
            (a.gamma_right * b.gamma_right).sqrt()
        } else if i < j {
            (a.gamma_left * b.gamma_left).sqrt()
        } else {
            0.0
        }
    }

    /// Schema and physical checks; each finding carries a field path.
    pub fn findings(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        if self.atoms.is_empty() {
            out.push(("chain.atoms".into(), "at least one atom is required".into()));
        }
        if self.atoms.len() > 12 {
            out.push(("chain.atoms".into(), format!("{} atoms exceeds the dense limit of 12", self.atoms.len())));
        }
        if !self.k0_wavelengths.is_finite() {
            out.push(("chain.k0_wavelengths".into(), "must be finite".into()));
        }
        for (k, a) in self.atoms.iter().enumerate() {
            let p = |f: &str| format!("chain.atoms[{k}].{f}");
            for (name, v) in [("gamma_left", a.gamma_left), ("gamma_right", a.gamma_right)] {
                if !v.is_finite() || v < 0.0 {
                    out.push((p(name), format!("must be a non-negative rate, got {v}")));
                }
            }
            if !a.detuning.is_finite() {
                out.push((p("detuning"), "must be finite".into()));
            }
            if !a.position.is_finite() {
                out.push((p("position"), "must be finite".into()));
            }
            if k > 0 && a.position < self.atoms[k - 1].position {
                out.push((p("position"), "positions must be non-decreasing along the chain".into()));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.findings().into_iter().next() {
            None => Ok(()),
            Some((path, message)) => Err(Error::Config { path, message }),
        }
    }
}

/// Normalization of the Gaussian temporal envelope.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `exp(-(t - mean)^2 / 2 width^2) / (sqrt(2 pi) width)`: unit area.
    UnitArea,
    /// Same shape scaled so that `integral |g|^2 dt = 1`.
    #[default]
    L2Normalized,
}

/// Prefactor of the drive terms in the system-density equation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DriveCoefficient {
    /// `sqrt(2 gamma_R)`.
    #[default]
    Sqrt2Gamma,
    /// `sqrt(gamma_R)`, matching the coherence-operator drive.
    SqrtGamma,
}

impl DriveCoefficient {
    pub fn factor(self, gamma_right: f64) -> f64 {
        match self {
            DriveCoefficient::Sqrt2Gamma => (2.0 * gamma_right).sqrt(),
            DriveCoefficient::SqrtGamma => gamma_right.sqrt(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSpec {
    pub mean: f64,
    pub width: f64,
    #[serde(default)]
    pub normalization: Normalization,
    #[serde(default)]
    pub drive_coefficient: DriveCoefficient,
}

impl PulseSpec {
    pub fn gaussian(mean: f64, width: f64) -> Self {
        Self {
            mean,
            width,
            normalization: Normalization::default(),
            drive_coefficient: DriveCoefficient::default(),
        }
    }

    pub fn findings(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        if !(self.width.is_finite() && self.width > 0.0) {
            out.push(("pulse.width".into(), format!("must be positive, got {}", self.width)));
        }
        if !self.mean.is_finite() {
            out.push(("pulse.mean".into(), "must be finite".into()));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.findings().into_iter().next() {
            None => Ok(()),
            Some((path, message)) => Err(Error::Config { path, message }),
        }
    }

    /// `g(t)`.
    #[inline]
    pub fn amplitude(&self, t: f64) -> f64 {
        let x = (t - self.mean) / self.width;
        let shape = (-0.5 * x * x).exp();
        match self.normalization {
            Normalization::UnitArea => shape / ((2.0 * PI).sqrt() * self.width),
            Normalization::L2Normalized => shape / (PI * self.width * self.width).powf(0.25),
        }
    }
}

/// Sampled drive amplitude `g(t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveSample {
    pub g_value: C64,
}

pub fn gaussian_envelope(t: f64, spec: &PulseSpec) -> DriveSample {
    DriveSample { g_value: C64::new(spec.amplitude(t), 0.0) }
}

/// `H = sum_i Delta_i sigma_i^+ sigma_i^-`, diagonal in the product basis.
pub fn build_hamiltonian(cfg: &ChainConfig) -> Operator {
    let n = cfg.n_atoms();
    let diag: Vec<C64> = (0..cfg.dim())
        .map(|b| {
            let e: f64 = (1..=n).filter(|&i| b & atom_mask(i, n) != 0).map(|i| cfg.atoms[i - 1].detuning).sum();
            C64::new(e, 0.0)
        })
        .collect();
    Operator::from_diagonal(&diag)
}

fn lowering_ops(cfg: &ChainConfig) -> Vec<Operator> {
    let n = cfg.n_atoms();
    (1..=n).map(|i| atomic_lowering(i, n).expect("index in range")).collect()
}

/// `-i [H, rho]`.
pub fn apply_coherent(rho: &Operator, cfg: &ChainConfig) -> Result<Operator> {
    rho.ensure_dim(cfg.dim())?;
    let h = build_hamiltonian(cfg);
    Ok(h.commutator(rho).scale(C64::new(0.0, -1.0)))
}

/// `-sum_i gamma_i (s_i^+ s_i rho - 2 s_i rho s_i^+ + rho s_i^+ s_i)`, with
/// `gamma_i = (gamma_iR + gamma_iL) / 2`.
pub fn apply_pure_decay(rho: &Operator, cfg: &ChainConfig) -> Result<Operator> {
    rho.ensure_dim(cfg.dim())?;
    let mut out = Operator::zeros(cfg.dim());
    for (s, atom) in lowering_ops(cfg).iter().zip(&cfg.atoms) {
        let sd = s.adjoint();
        let n = sd.matmul(s);
        let jump = s.matmul(rho).matmul(&sd);
        let mut term = &n.matmul(rho) + &rho.matmul(&n);
        term.axpy(C64::new(-2.0, 0.0), &jump);
        out.axpy(C64::new(-atom.gamma_avg(), 0.0), &term);
    }
    Ok(out)
}

/// Waveguide-mediated cooperative decay, summed over ordered pairs `i != j`.
pub fn apply_cooperative_decay(rho: &Operator, cfg: &ChainConfig) -> Result<Operator> {
    rho.ensure_dim(cfg.dim())?;
    let n = cfg.n_atoms();
    let mut out = Operator::zeros(cfg.dim());
    if n < 2 {
        return Ok(out);
    }
    let s = lowering_ops(cfg);
    let sd: Vec<Operator> = s.iter().map(Operator::adjoint).collect();
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            let rate = cfg.pair_rate(i, j);
            if rate == 0.0 {
                continue;
            }
            let phase = C64::from_polar(1.0, cfg.pair_phase(i, j));
            let (si, sj, sid, sjd) = (&s[i - 1], &s[j - 1], &sd[i - 1], &sd[j - 1]);
            let hop_left = sid.matmul(sj).matmul(rho);
            let jump_ij = si.matmul(rho).matmul(sjd);
            let jump_ji = sj.matmul(rho).matmul(sid);
            let hop_right = rho.matmul(sjd).matmul(si);
            // {(A - B) e^{-i phi} - (C - D) e^{+i phi}} for the printed form;
            // the Langevin form moves the phases of A and D.
            let (pa, pd) = match cfg.coupling_form {
                CouplingForm::AsPrinted => (phase.conj(), phase),
                CouplingForm::Langevin => (phase, phase.conj()),
            };
            let mut term = hop_left.scale(pa);
            term.axpy(-phase.conj(), &jump_ij);
            term.axpy(-phase, &jump_ji);
            term.axpy(pd, &hop_right);
            out.axpy(C64::new(-rate, 0.0), &term);
        }
    }
    Ok(out)
}

/// Drive contribution to `d rho_s / dt`, with `rho_01 = rho_10^dagger`.
pub fn apply_drive_s(
    rho01: &Operator,
    rho10: &Operator,
    t: f64,
    cfg: &ChainConfig,
    pulse: &PulseSpec,
) -> Result<Operator> {
    rho01.ensure_dim(cfg.dim())?;
    rho10.ensure_dim(cfg.dim())?;
    let g = gaussian_envelope(t, pulse).g_value;
    let mut out = Operator::zeros(cfg.dim());
    for (k, s) in lowering_ops(cfg).iter().enumerate() {
        let atom = &cfg.atoms[k];
        let coeff = pulse.drive_coefficient.factor(atom.gamma_right);
        let phase = C64::from_polar(1.0, cfg.drive_phase(k + 1));
        out.axpy(g * phase * coeff, &rho01.commutator(&s.adjoint()));
        out.axpy(g.conj() * phase.conj() * coeff, &s.commutator(rho10));
    }
    Ok(out)
}

/// Source term feeding `rho_10` from `rho_00`.
pub fn apply_drive_10(rho00: &Operator, t: f64, cfg: &ChainConfig, pulse: &PulseSpec) -> Result<Operator> {
    rho00.ensure_dim(cfg.dim())?;
    let g = gaussian_envelope(t, pulse).g_value;
    let mut out = Operator::zeros(cfg.dim());
    for (k, s) in lowering_ops(cfg).iter().enumerate() {
        let coeff = cfg.atoms[k].gamma_right.sqrt();
        out.axpy(g.conj() * source_phase(cfg, k + 1) * coeff, &rho00.commutator(&s.adjoint()));
    }
    Ok(out)
}

fn source_phase(cfg: &ChainConfig, i: usize) -> C64 {
    let theta = cfg.drive_phase(i);
    match cfg.coupling_form {
        CouplingForm::AsPrinted => C64::from_polar(1.0, -theta),
        CouplingForm::Langevin => C64::from_polar(1.0, theta),
    }
}

/// `L_cs + L_pd + L_cd`.
pub fn apply_liouvillian(rho: &Operator, cfg: &ChainConfig) -> Result<Operator> {
    let mut out = apply_coherent(rho, cfg)?;
    out += &apply_pure_decay(rho, cfg)?;
    out += &apply_cooperative_decay(rho, cfg)?;
    Ok(out)
}

/// Precomputed, bit-indexed form of the chain Liouvillian and drive terms.
///
/// The Liouvillian is stored as `L[X] = A X + X B + sum J_ab s_a X s_b^+`
/// where `A` and `B` are a diagonal plus excitation-hopping terms
/// `s_a^+ s_b`. Every product with a lowering operator is a masked index
/// shift, so one application costs `O(N^2 4^N)`.
#[derive(Clone, Debug)]
pub struct Generator {
    n: usize,
    dim: usize,
    left_diag: Vec<C64>,
    right_diag: Vec<C64>,
    /// `(mask_up, mask_down, coefficient)` for `coefficient * s_up^+ s_down X`.
    left_hops: Vec<(usize, usize, C64)>,
    /// `(mask_up, mask_down, coefficient)` for `coefficient * X s_up^+ s_down`.
    right_hops: Vec<(usize, usize, C64)>,
    /// `(mask_a, mask_b, coefficient)` for `coefficient * s_a X s_b^+`.
    jumps: Vec<(usize, usize, C64)>,
    /// Basis indices ordered by excitation number.
    by_level: Vec<usize>,
    /// `level_len[k]`: number of basis states with at most `k` excitations.
    level_len: Vec<usize>,
    /// Per atom: `(mask, coefficient of g^* [s_i, rho_10])` in the system drive.
    drive_s: Vec<(usize, C64)>,
    /// Per atom: `(mask, coefficient of g^* [rho_00, s_i^+])` in the coherence drive.
    drive_10: Vec<(usize, C64)>,
    pulse: PulseSpec,
}

impl Generator {
    pub fn new(cfg: &ChainConfig, pulse: &PulseSpec) -> Result<Self> {
        cfg.validate()?;
        pulse.validate()?;
        let n = cfg.n_atoms();
        let dim = cfg.dim();
        let mut left_diag = vec![ZERO; dim];
        let mut right_diag = vec![ZERO; dim];
        for b in 0..dim {
            for i in (1..=n).filter(|&i| b & atom_mask(i, n) != 0) {
                let atom = &cfg.atoms[i - 1];
                left_diag[b] += C64::new(-atom.gamma_avg(), -atom.detuning);
                right_diag[b] += C64::new(-atom.gamma_avg(), atom.detuning);
            }
        }
        let mut left_hops = Vec::new();
        let mut right_hops = Vec::new();
        let mut jumps = Vec::new();
        for i in 1..=n {
            let mi = atom_mask(i, n);
            jumps.push((mi, mi, C64::new(2.0 * cfg.atoms[i - 1].gamma_avg(), 0.0)));
            for j in (1..=n).filter(|&j| j != i) {
                let rate = cfg.pair_rate(i, j);
                if rate == 0.0 {
                    continue;
                }
                let mj = atom_mask(j, n);
                let phase = C64::from_polar(1.0, cfg.pair_phase(i, j));
                let (pa, pd) = match cfg.coupling_form {
                    CouplingForm::AsPrinted => (phase.conj(), phase),
                    CouplingForm::Langevin => (phase, phase.conj()),
                };
                left_hops.push((mi, mj, -rate * pa));
                right_hops.push((mj, mi, -rate * pd));
                jumps.push((mi, mj, rate * phase.conj()));
                jumps.push((mj, mi, rate * phase));
            }
        }
        let drive_s = (1..=n)
            .map(|i| {
                let coeff = pulse.drive_coefficient.factor(cfg.atoms[i - 1].gamma_right);
                (atom_mask(i, n), C64::from_polar(coeff, -cfg.drive_phase(i)))
            })
            .collect();
        let drive_10 = (1..=n)
            .map(|i| (atom_mask(i, n), source_phase(cfg, i) * cfg.atoms[i - 1].gamma_right.sqrt()))
            .collect();
        let mut by_level: Vec<usize> = (0..dim).collect();
        by_level.sort_by_key(|b| b.count_ones());
        let level_len = (0..=n).map(|k| by_level.iter().filter(|b| b.count_ones() as usize <= k).count()).collect();
        Ok(Self {
            n,
            dim,
            left_diag,
            right_diag,
            left_hops,
            right_hops,
            jumps,
            by_level,
            level_len,
            drive_s,
            drive_10,
            pulse: *pulse,
        })
    }

    pub fn n_atoms(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pulse(&self) -> &PulseSpec {
        &self.pulse
    }

    /// Basis states with at most `k` excitations.
    fn up_to(&self, k: usize) -> &[usize] {
        &self.by_level[..self.level_len[k.min(self.n)]]
    }

    /// Highest excitation number carried by a non-zero row and by a
    /// non-zero column of `x`, or `None` when `x` vanishes.
    ///
    /// Every term of the generator maps the block of states with at most
    /// `(k_row, k_col)` excitations into itself, so entries outside it are
    /// exact zeros that need not be visited. Starting from the ground state,
    /// this keeps the work proportional to the populated block.
    fn support(&self, x: &Operator) -> Option<(usize, usize)> {
        let d = self.dim;
        let xs = x.as_slice();
        let mut seen = None;
        for r in 0..d {
            for c in 0..d {
                if xs[r * d + c] != ZERO {
                    let (kr, kc) = seen.unwrap_or((0, 0));
                    seen = Some((kr.max(r.count_ones() as usize), kc.max(c.count_ones() as usize)));
                }
            }
        }
        seen
    }

    /// `out += L[x]`.
    pub fn apply_liouvillian_into(&self, x: &Operator, out: &mut Operator) {
        let Some((kr, kc)) = self.support(x) else { return };
        let (rows, cols) = (self.up_to(kr), self.up_to(kc));
        let d = self.dim;
        let xs = x.as_slice();
        let os = out.as_mut_slice();
        for &r in rows {
            let ld = self.left_diag[r];
            for &c in cols {
                os[r * d + c] += (ld + self.right_diag[c]) * xs[r * d + c];
            }
        }
        for &(up, down, coeff) in &self.left_hops {
            for &r in rows.iter().filter(|&&r| r & up != 0 && r & down == 0) {
                let (srow, orow) = ((r ^ up ^ down) * d, r * d);
                for &c in cols {
                    os[orow + c] += coeff * xs[srow + c];
                }
            }
        }
        for &(up, down, coeff) in &self.right_hops {
            for &c in cols.iter().filter(|&&c| c & down != 0 && c & up == 0) {
                let src = c ^ up ^ down;
                for &r in rows {
                    os[r * d + c] += coeff * xs[r * d + src];
                }
            }
        }
        for &(ma, mb, coeff) in &self.jumps {
            for &r in rows.iter().filter(|&&r| r & ma == 0) {
                let (srow, orow) = ((r | ma) * d, r * d);
                for &c in cols.iter().filter(|&&c| c & mb == 0) {
                    os[orow + c] += coeff * xs[srow + (c | mb)];
                }
            }
        }
    }

    pub fn apply_liouvillian(&self, x: &Operator) -> Operator {
        let mut out = Operator::zeros(self.dim);
        self.apply_liouvillian_into(x, &mut out);
        out
    }

    /// `out += sum_i c_i g^* [rho_00, s_i^+]`.
    pub fn add_drive_10(&self, rho00: &Operator, g: C64, out: &mut Operator) {
        let Some((kr, kc)) = self.support(rho00) else { return };
        let d = self.dim;
        let x = rho00.as_slice();
        let os = out.as_mut_slice();
        for &(m, coeff) in &self.drive_10 {
            let k = coeff * g.conj();
            // (rho s^+)[r, c] = rho[r, c | m] for c ground in m
            for &r in self.up_to(kr) {
                for &c in self.up_to(kc).iter().filter(|&&c| c & m == 0) {
                    os[r * d + c] += k * x[r * d + (c | m)];
                }
            }
            // (s^+ rho)[r, c] = rho[r ^ m, c] for r excited in m
            for &r in self.up_to(kr + 1).iter().filter(|&&r| r & m != 0) {
                for &c in self.up_to(kc) {
                    os[r * d + c] -= k * x[(r ^ m) * d + c];
                }
            }
        }
    }

    /// `out += T + T^dagger` with `T = sum_i c_i g^* [s_i, rho_10]`.
    pub fn add_drive_s(&self, rho10: &Operator, g: C64, out: &mut Operator) {
        let Some((kr, kc)) = self.support(rho10) else { return };
        let d = self.dim;
        let x = rho10.as_slice();
        let mut t = vec![ZERO; d * d];
        for &(m, coeff) in &self.drive_s {
            let k = coeff * g.conj();
            // (s rho)[r, c] = rho[r | m, c] for r ground in m
            for &r in self.up_to(kr).iter().filter(|&&r| r & m == 0) {
                for &c in self.up_to(kc) {
                    t[r * d + c] += k * x[(r | m) * d + c];
                }
            }
            // (rho s)[r, c] = rho[r, c ^ m] for c excited in m
            for &r in self.up_to(kr) {
                for &c in self.up_to(kc + 1).iter().filter(|&&c| c & m != 0) {
                    t[r * d + c] -= k * x[r * d + (c ^ m)];
                }
            }
        }
        let span = self.up_to(kr.max(kc + 1));
        let os = out.as_mut_slice();
        for &r in span {
            for &c in span {
                os[r * d + c] += t[r * d + c] + t[c * d + r].conj();
            }
        }
    }

    #[inline]
    pub fn drive_amplitude(&self, t: f64) -> C64 {
        C64::new(self.pulse.amplitude(t), 0.0)
    }
}
