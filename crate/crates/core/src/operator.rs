//! Dense complex operators on an N-qubit register.
//!
//! Basis ordering is atom-1-major: basis index `b` has atom `i` (1-based)
//! excited iff bit `N - i` of `b` is set, so `|g...g>` is index 0 and atom 1
//! is the leftmost tensor factor. For two atoms the ordering is
//! `|gg>, |ge>, |eg>, |ee>`.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Row-major dense complex square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    dim: usize,
    data: Vec<C64>,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for k in 0..dim {
            out[(k, k)] = C64::new(1.0, 0.0);
        }
        out
    }

    pub fn from_vec(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, actual: data.len() });
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: row.len() });
            }
            data.extend(row.iter().map(|&x| C64::new(x, 0.0)));
        }
        Ok(Self { dim, data })
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut out = Self::zeros(diag.len());
        for (k, &d) in diag.iter().enumerate() {
            out[(k, k)] = d;
        }
        out
    }

    /// `|psi><psi|`.
    pub fn projector(psi: &[C64]) -> Self {
        let dim = psi.len();
        let mut out = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                out[(r, c)] = psi[r] * psi[c].conj();
            }
        }
        out
    }

    /// `|a><b|` on a register of dimension `dim`.
    pub fn basis_outer(dim: usize, a: usize, b: usize) -> Self {
        let mut out = Self::zeros(dim);
        out[(a, b)] = C64::new(1.0, 0.0);
        out
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    /// Number of qubits the operator acts on.
    pub fn n_qubits(&self) -> Result<usize> {
        if self.dim.is_power_of_two() {
            Ok(self.dim.trailing_zeros() as usize)
        } else {
            Err(Error::NotPowerOfTwo(self.dim))
        }
    }

    pub fn ensure_dim(&self, expected: usize) -> Result<()> {
        if self.dim == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, actual: self.dim })
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        out
    }

    /// Entry-wise complex conjugate (not the adjoint).
    pub fn conj(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: C64, other: &Self) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            let row = &self.data[r * n..(r + 1) * n];
            let orow = &mut out.data[r * n..(r + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let brow = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `[self, rhs] = self*rhs - rhs*self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) - &rhs.matmul(self)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `max |A - A^dagger|` over entries.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                let d = self.data[r * n + c] - self.data[c * n + r].conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Eigenvalues of the Hermitian part `(A + A^dagger)/2`, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        let m = DMatrix::from_fn(n, n, |r, c| 0.5 * (self[(r, c)] + self[(c, r)].conj()));
        let mut vals: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        vals
    }

    pub fn min_hermitian_eigenvalue(&self) -> f64 {
        self.hermitian_eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Conjugates by a basis permutation: `out[p(r), p(c)] = self[r, c]`.
    pub fn permute_basis(&self, perm: impl Fn(usize) -> usize) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out[(perm(r), perm(c))] = self[(r, c)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Operator {
    type Output = C64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for Operator {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim);
        Operator { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim);
        Operator { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl AddAssign<&Operator> for Operator {
    fn add_assign(&mut self, rhs: &Operator) {
        assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Neg for &Operator {
    type Output = Operator;

    fn neg(self) -> Operator {
        self.scale_real(-1.0)
    }
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        self.matmul(rhs)
    }
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &Operator, b: &Operator) -> Operator {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut out = Operator::zeros(n);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Single-qubit `|g><e|` in the (g, e) ordering.
pub fn lowering_2x2() -> Operator {
    Operator::basis_outer(2, 0, 1)
}

pub fn pauli_y() -> Operator {
    let mut y = Operator::zeros(2);
    y[(0, 1)] = C64::new(0.0, -1.0);
    y[(1, 0)] = C64::new(0.0, 1.0);
    y
}

/// Bit mask of atom `i` (1-based) in an `n_atoms` register.
#[inline]
pub fn atom_mask(i: usize, n_atoms: usize) -> usize {
    1 << (n_atoms - i)
}

/// `I (x) ... (x) |g><e| (x) ... (x) I` with the lowering factor at slot `i`.
pub fn atomic_lowering(i: usize, n_atoms: usize) -> Result<Operator> {
    if i == 0 || i > n_atoms {
        return Err(Error::AtomIndex { index: i, n_atoms });
    }
    let mut out = Operator::identity(1);
    for slot in 1..=n_atoms {
        let factor = if slot == i { lowering_2x2() } else { Operator::identity(2) };
        out = kron(&out, &factor);
    }
    Ok(out)
}

/// Reduced 4x4 density matrix of atoms `keep = (a, b)`, in the order given.
///
/// The kept pair is ordered with `keep.0` as the leading factor, so
/// `partial_trace_pair(rho, (3, 1), n)` is the swap of `(1, 3)`.
pub fn partial_trace_pair(rho: &Operator, keep: (usize, usize), n_atoms: usize) -> Result<Operator> {
    let (a, b) = keep;
    if a == b || a == 0 || b == 0 || a > n_atoms || b > n_atoms {
        return Err(Error::InvalidPair(a, b));
    }
    let dim = 1usize << n_atoms;
    rho.ensure_dim(dim)?;
    let (ma, mb) = (atom_mask(a, n_atoms), atom_mask(b, n_atoms));
    let keep_mask = ma | mb;
    let local = |idx: usize| ((idx & ma != 0) as usize) << 1 | (idx & mb != 0) as usize;

    let mut out = Operator::zeros(4);
    for env in (0..dim).filter(|e| e & keep_mask == 0) {
        for pr in 0..4usize {
            let r = env | if pr & 2 != 0 { ma } else { 0 } | if pr & 1 != 0 { mb } else { 0 };
            for pc in 0..4usize {
                let c = env | if pc & 2 != 0 { ma } else { 0 } | if pc & 1 != 0 { mb } else { 0 };
                debug_assert_eq!((local(r), local(c)), (pr, pc));
                out[(pr, pc)] += rho[(r, c)];
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn kron_of_identities() {
        assert_eq!(kron(&Operator::identity(2), &Operator::identity(2)), Operator::identity(4));
    }

    #[test]
    fn kron_sigma_y_pair_is_antidiagonal() {
        let yy = kron(&pauli_y(), &pauli_y());
        // reading the antidiagonal from the top-right corner
        let anti: Vec<C64> = (0..4).map(|r| yy[(r, 3 - r)]).collect();
        assert_eq!(anti, vec![c(-1.0), c(1.0), c(1.0), c(-1.0)]);
        for r in 0..4 {
            for col in 0..4 {
                if r + col != 3 {
                    assert_eq!(yy[(r, col)], c(0.0));
                }
            }
        }
    }

    #[test]
    fn embedded_lowering_matches_kron() {
        let s1 = atomic_lowering(1, 2).unwrap();
        assert_eq!(s1, kron(&lowering_2x2(), &Operator::identity(2)));
    }

    #[test]
    fn lowering_maps_excited_to_ground() {
        let s = atomic_lowering(1, 1).unwrap();
        // column of |e> has a 1 in the |g> row
        assert_eq!(s[(0, 1)], c(1.0));
        assert_eq!(s.max_abs(), 1.0);
    }

    #[test]
    fn lowering_is_nilpotent() {
        let s = atomic_lowering(2, 2).unwrap();
        assert_eq!(s.matmul(&s).max_abs(), 0.0);
    }

    #[test]
    fn commutation_relations() {
        let n = 3;
        for i in 1..=n {
            for j in 1..=n {
                let si = atomic_lowering(i, n).unwrap();
                let sj = atomic_lowering(j, n).unwrap();
                let comm = si.adjoint().commutator(&sj);
                if i == j {
                    // sigma_z = |e><e| - |g><g| on slot i
                    let mut z = Operator::zeros(1 << n);
                    for b in 0..1 << n {
                        let excited = b & atom_mask(i, n) != 0;
                        z[(b, b)] = c(if excited { 1.0 } else { -1.0 });
                    }
                    assert!(comm.max_abs_diff(&z) < 1e-15);
                } else {
                    assert_eq!(comm.max_abs(), 0.0, "[s{i}^+, s{j}^-] should vanish");
                }
            }
        }
    }

    #[test]
    fn lowering_index_out_of_range() {
        assert!(matches!(atomic_lowering(0, 2), Err(Error::AtomIndex { .. })));
        assert!(matches!(atomic_lowering(3, 2), Err(Error::AtomIndex { .. })));
    }

    #[test]
    fn partial_trace_of_ground_state() {
        let rho = Operator::basis_outer(8, 0, 0);
        for pair in [(1, 2), (1, 3), (2, 3)] {
            assert_eq!(partial_trace_pair(&rho, pair, 3).unwrap(), Operator::basis_outer(4, 0, 0));
        }
    }

    #[test]
    fn partial_trace_recovers_bell_factor() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = Operator::projector(&[c(0.0), c(h), c(h), c(0.0)]);
        let rho = kron(&bell, &Operator::basis_outer(2, 0, 0));
        let reduced = partial_trace_pair(&rho, (1, 2), 3).unwrap();
        assert!(reduced.max_abs_diff(&bell) < 1e-15);
    }

    /// Brute force: sum over every index of the traced atom.
    fn brute_force_trace_out_middle(rho: &Operator) -> Operator {
        let mut out = Operator::zeros(4);
        for a in 0..2 {
            for b in 0..2 {
                for ap in 0..2 {
                    for bp in 0..2 {
                        let mut acc = c(0.0);
                        for m in 0..2 {
                            acc += rho[(a * 4 + m * 2 + b, ap * 4 + m * 2 + bp)];
                        }
                        out[(a * 2 + b, ap * 2 + bp)] = acc;
                    }
                }
            }
        }
        out
    }

    #[test]
    fn partial_trace_non_adjacent_pair() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = Operator::projector(&[c(0.0), c(h), c(h), c(0.0)]);
        let rho = kron(&bell, &Operator::basis_outer(2, 0, 0));
        let reduced = partial_trace_pair(&rho, (1, 3), 3).unwrap();
        assert!(reduced.max_abs_diff(&brute_force_trace_out_middle(&rho)) < 1e-15);
        let expected = kron(&Operator::identity(2).scale_real(0.5), &Operator::basis_outer(2, 0, 0));
        assert!(reduced.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_pairs() {
        let rho = Operator::identity(8);
        assert!(partial_trace_pair(&rho, (2, 2), 3).is_err());
        assert!(partial_trace_pair(&rho, (0, 2), 3).is_err());
        assert!(partial_trace_pair(&rho, (1, 4), 3).is_err());
        assert!(partial_trace_pair(&rho, (1, 2), 2).is_err());
    }

    #[test]
    fn hermitian_eigenvalues_of_diagonal() {
        let m = Operator::from_real_rows(&[&[3.0, 0.0], &[0.0, -1.0]]).unwrap();
        assert_eq!(m.hermitian_eigenvalues(), vec![-1.0, 3.0]);
    }
}
