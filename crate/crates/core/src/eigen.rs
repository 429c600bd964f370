//! Eigenvalues of small dense complex matrices.
//!
//! Householder reduction to upper Hessenberg form followed by single-shift
//! complex QR iteration (Wilkinson shift, Givens rotations) with deflation.
//! No eigenvectors are accumulated.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operator::Operator;

/// Sweep budget for the QR iteration.
pub const MAX_SWEEPS: usize = 200;
/// Relative subdiagonal size below which an entry is deflated.
pub const SUBDIAGONAL_TOL: f64 = 1e-12;
/// Threshold used when clamping round-off in spectra that are known to be
/// real and non-negative.
pub const CLAMP_THRESHOLD: f64 = 1e-9;

/// Eigenvalues ordered by descending real part.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub values: Vec<C64>,
}

impl Spectrum {
    fn sorted(mut values: Vec<C64>) -> Self {
        values.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest imaginary magnitude in the spectrum.
    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Zeroes real and imaginary parts whose magnitude is below `threshold`.
    /// Larger values, including genuine negative eigenvalues, are left alone.
    pub fn clamp_physical(&self, threshold: f64) -> Self {
        let values = self
            .values
            .iter()
            .map(|z| {
                let im = if z.im.abs() < threshold { 0.0 } else { z.im };
                let re = if z.re.abs() < threshold { 0.0 } else { z.re };
                C64::new(re, im)
            })
            .collect();
        Self::sorted(values)
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }
}

/// All eigenvalues of a 4x4 complex matrix (not assumed Hermitian).
pub fn eigenvalues_4x4(m: &Operator) -> Result<Spectrum> {
    m.ensure_dim(4)?;
    eigenvalues(m)
}

/// All eigenvalues of a small dense complex matrix.
pub fn eigenvalues(m: &Operator) -> Result<Spectrum> {
    let n = m.dim();
    let mut h: Vec<Vec<C64>> = (0..n).map(|r| (0..n).map(|c| m[(r, c)]).collect()).collect();
    to_hessenberg(&mut h);
    let scale = h.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(Spectrum::sorted(vec![C64::new(0.0, 0.0); n]));
    }

    let mut values = vec![C64::new(0.0, 0.0); n];
    let mut hi = n;
    let mut sweeps = 0;
    let mut since_deflation = 0;
    while hi > 0 {
        let last = hi - 1;
        // locate the start of the unreduced block ending at `last`
        let mut lo = last;
        while lo > 0 {
            let off = h[lo][lo - 1].norm();
            let mut diag = h[lo][lo].norm() + h[lo - 1][lo - 1].norm();
            if diag == 0.0 {
                diag = scale;
            }
            if off <= SUBDIAGONAL_TOL * diag {
                h[lo][lo - 1] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == last {
            values[last] = h[last][last];
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if sweeps >= MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        since_deflation += 1;

        let shift = if since_deflation % 11 == 10 {
            // exceptional shift to break cycles
            h[last][last] + C64::new(0.75 * h[last][last - 1].norm(), 0.0)
        } else {
            wilkinson_shift(h[last - 1][last - 1], h[last - 1][last], h[last][last - 1], h[last][last])
        };
        qr_sweep(&mut h, lo, last, shift);
    }
    Ok(Spectrum::sorted(values))
}

/// Eigenvalue of the 2x2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let (l1, l2) = (half_tr + disc, half_tr - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Rotation `(c, s)` with `[[c, s], [-conj(s), c]] * [x, y]^T = [r, 0]^T`.
fn givens(x: C64, y: C64) -> (f64, C64) {
    let (ax, ay) = (x.norm(), y.norm());
    if ay == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if ax == 0.0 {
        return (0.0, C64::new(1.0, 0.0));
    }
    let rho = ax.hypot(ay);
    (ax / rho, (x / ax) * y.conj() / rho)
}

fn qr_sweep(h: &mut [Vec<C64>], lo: usize, hi: usize, shift: C64) {
    for k in lo..=hi {
        h[k][k] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[k][k], h[k + 1][k]);
        for col in k..=hi {
            let (top, bot) = (h[k][col], h[k + 1][col]);
            h[k][col] = top * c + s * bot;
            h[k + 1][col] = -s.conj() * top + bot * c;
        }
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + offset;
        let rows_end = (k + 2).min(hi);
        for row in h.iter_mut().take(rows_end + 1).skip(lo) {
            let (left, right) = (row[k], row[k + 1]);
            row[k] = left * c + right * s.conj();
            row[k + 1] = -left * s + right * c;
        }
    }
    for k in lo..=hi {
        h[k][k] += shift;
    }
}

fn to_hessenberg(a: &mut [Vec<C64>]) {
    let n = a.len();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let norm: f64 = (k + 1..n).map(|r| a[r][k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[k + 1][k];
        let phase = if x0.norm() == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<C64> = (k + 1..n).map(|r| a[r][k]).collect();
        v[0] -= alpha;
        let vnorm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // A <- (I - 2 v v^dagger) A
        for col in 0..n {
            let dot: C64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * a[k + 1 + i][col]).sum();
            for (i, vi) in v.iter().enumerate() {
                a[k + 1 + i][col] -= *vi * dot * 2.0;
            }
        }
        // A <- A (I - 2 v v^dagger)
        for row in a.iter_mut() {
            let dot: C64 = v.iter().enumerate().map(|(i, vi)| row[k + 1 + i] * vi).sum();
            for (i, vi) in v.iter().enumerate() {
                row[k + 1 + i] -= dot * vi.conj() * 2.0;
            }
        }
        for r in k + 2..n {
            a[r][k] = C64::new(0.0, 0.0);
        }
    }
}
