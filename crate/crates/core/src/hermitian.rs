//! Dense complex matrices with a Hermitian specialization.
//!
//! Everything in the crate is small and dense (qubits up to a handful of
//! qudit levels), so matrices are stored row-major in a flat `Vec` and the
//! eigensolver is a cyclic complex Jacobi sweep, which is accurate to a few
//! ulps on the eigenvalues of well-scaled inputs.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Relative tolerance below which a PSD input may have negative eigenvalues
/// before matrix functions refuse it.
pub const PSD_TOL: f64 = 1e-9;

/// Default relative rank cutoff for pseudo-inverses.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 64;

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for j in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|k| {
                    let z = self[(j, k)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for j in 0..dim {
            m[(j, j)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for j in 0..dim {
            for k in 0..dim {
                data.push(f(j, k));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a square.
    pub fn from_row_major(entries: Vec<C64>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != entries.len() {
            return Err(Error::InvalidMatrix(format!(
                "{} entries do not form a square matrix",
                entries.len()
            )));
        }
        let m = Self { dim, data: entries };
        m.check_finite()?;
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidMatrix("rows are not all of length dim".into()));
        }
        Self::from_row_major(rows.iter().flatten().copied().collect())
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len(), "outer product of unequal lengths");
        Self::from_fn(u.len(), |j, k| u[j] * v[k].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub(crate) fn check_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidMatrix("non-finite entry".into()))
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |j, k| self[(k, j)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |j, k| self[(k, j)])
    }

    pub fn scale(&self, a: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * a).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|j| self[(j, j)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `true` when the stored entries satisfy `a[j][k] == conj(a[k][j])` bit for bit.
    pub fn is_exactly_hermitian(&self) -> bool {
        (0..self.dim).all(|j| (j..self.dim).all(|k| self[(j, k)] == self[(k, j)].conj()))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|j| (0..self.dim).map(|k| self[(j, k)] * v[k]).sum())
            .collect()
    }

    /// Column `k` as a vector.
    pub fn column(&self, k: usize) -> Vec<C64> {
        (0..self.dim).map(|j| self[(j, k)]).collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (j, k): (usize, usize)) -> &C64 {
        &self.data[j * self.dim + k]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (j, k): (usize, usize)) -> &mut C64 {
        &mut self.data[j * self.dim + k]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for j in 0..n {
            for l in 0..n {
                let a = self.data[j * n + l];
                if a == ZERO {
                    continue;
                }
                for k in 0..n {
                    out.data[j * n + k] += a * rhs.data[l * n + k];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// A complex matrix whose stored entries are exactly Hermitian.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian{:?}", self.0)
    }
}

impl HermitianMatrix {
    /// Validates `m` as Hermitian up to rounding and stores its exact Hermitian part.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        m.check_finite()?;
        let scale = m.frobenius_norm().max(1.0);
        let asym = m.max_abs_diff(&m.adjoint());
        if asym > 1e-10 * scale {
            return Err(Error::InvalidMatrix(format!(
                "not Hermitian (max |a - a^dagger| = {asym:e})"
            )));
        }
        Ok(Self::hermitian_part(&m))
    }

    /// `(m + m^dagger) / 2` without any validation.
    pub fn hermitian_part(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let mut h = ComplexMatrix::zeros(n);
        for j in 0..n {
            h[(j, j)] = C64::new(m[(j, j)].re, 0.0);
            for k in (j + 1)..n {
                let z = (m[(j, k)] + m[(k, j)].conj()) * 0.5;
                h[(j, k)] = z;
                h[(k, j)] = z.conj();
            }
        }
        Self(h)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::new(ComplexMatrix::from_rows(&rows)?)
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = ComplexMatrix::zeros(values.len());
        for (j, &v) in values.iter().enumerate() {
            m[(j, j)] = C64::new(v, 0.0);
        }
        Self(m)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    /// Rank-one projector `|v><v|` (not normalized).
    pub fn projector(v: &[C64]) -> Self {
        Self::hermitian_part(&ComplexMatrix::outer(v, v))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn scale(&self, a: f64) -> Self {
        Self(self.0.scale(C64::new(a, 0.0)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    /// `self * inner * self`, which is Hermitian for Hermitian factors.
    pub fn sandwich(&self, inner: &Self) -> Self {
        Self::hermitian_part(&(&(&self.0 * &inner.0) * &self.0))
    }

    /// `U * self * U^dagger` for an arbitrary (typically unitary) `U`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self::hermitian_part(&(&(u * &self.0) * &u.adjoint()))
    }

    /// `Re tr(self * other)`; exact for Hermitian pairs since the trace is real.
    pub fn trace_product(&self, other: &Self) -> f64 {
        let n = self.dim();
        assert_eq!(n, other.dim());
        let mut acc = 0.0;
        for j in 0..n {
            for k in 0..n {
                acc += (self.0[(j, k)] * other.0[(k, j)]).re;
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    pub fn eig(&self) -> Result<EigenSystem> {
        eig_hermitian(self)
    }

    /// Spectral norm, i.e. the largest eigenvalue modulus.
    pub fn spectral_norm(&self) -> Result<f64> {
        let es = self.eig()?;
        Ok(es.values.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(*self.eig()?.values.last().expect("nonempty spectrum"))
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = C64;

    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

/// Eigenvalues sorted descending with matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `V f(Lambda) V^dagger`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for (l, &w) in fv.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for j in 0..n {
                let vj = self.vectors[(j, l)] * w;
                for k in j..n {
                    out[(j, k)] += vj * self.vectors[(k, l)].conj();
                }
            }
        }
        for j in 0..n {
            out[(j, j)].im = 0.0;
            for k in (j + 1)..n {
                out[(k, j)] = out[(j, k)].conj();
            }
        }
        HermitianMatrix(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn eig_hermitian(h: &HermitianMatrix) -> Result<EigenSystem> {
    let m = h.as_matrix();
    m.check_finite()?;
    let n = m.dim();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);

    let total = a.frobenius_norm();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|j| ((j + 1)..n).map(move |k| (j, k)))
            .map(|(j, k)| a[(j, k)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-17 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|j| a[(j, j)].re).collect();
    order.sort_by(|&x, &y| diag[y].total_cmp(&diag[x]));
    let values = order.iter().map(|&j| diag[j]).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(EigenSystem { values, vectors })
}

/// Zeroes `a[p][q]` with the unitary `U = diag(1, e^{-i phi}) R(theta)` acting on
/// columns `p, q`, and accumulates `U` into `v`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim();
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if r <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let phase = apq / r;
    let zeta = (aqq - app) / (2.0 * r);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let upp = C64::new(c, 0.0);
    let upq = C64::new(s, 0.0);
    let uqp = -phase.conj() * s;
    let uqq = phase.conj() * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * upp + akq * uqp;
        a[(k, q)] = akp * upq + akq * uqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
        a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * upp + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
}

/// `true` iff the smallest eigenvalue is at least `-tol * max(1, ||H||_2)`.
pub fn is_psd(h: &HermitianMatrix, tol: f64) -> Result<bool> {
    let es = eig_hermitian(h)?;
    let min = *es.values.last().expect("nonempty spectrum");
    Ok(min >= -tol * es.max_abs().max(1.0))
}

fn psd_eig(h: &HermitianMatrix) -> Result<EigenSystem> {
    let es = eig_hermitian(h)?;
    let min = *es.values.last().expect("nonempty spectrum");
    if min < -PSD_TOL * es.max_abs().max(1.0) {
        return Err(Error::NotPsd(min));
    }
    Ok(es)
}

/// Principal square root of a PSD matrix; slightly negative eigenvalues clamp to zero.
pub fn mat_sqrt_psd(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(psd_eig(h)?.map(|l| l.max(0.0).sqrt()))
}

/// Moore-Penrose pseudo-inverse square root: eigenvalues above `rank_tol * lambda_max`
/// map to `lambda^{-1/2}`, the rest to zero.
pub fn pinv_sqrt(h: &HermitianMatrix, rank_tol: f64) -> Result<HermitianMatrix> {
    let es = psd_eig(h)?;
    let cutoff = rank_tol * es.values[0].max(0.0);
    Ok(es.map(|l| if l > cutoff && l > 0.0 { 1.0 / l.sqrt() } else { 0.0 }))
}

/// Orthogonal projector onto the numerical range of a PSD matrix.
pub fn range_projector(h: &HermitianMatrix, rank_tol: f64) -> Result<HermitianMatrix> {
    let es = psd_eig(h)?;
    let cutoff = rank_tol * es.values[0].max(0.0);
    Ok(es.map(|l| if l > cutoff && l > 0.0 { 1.0 } else { 0.0 }))
}

/// Numerical rank of a PSD matrix relative to its largest eigenvalue.
pub fn psd_rank(h: &HermitianMatrix, rank_tol: f64) -> Result<usize> {
    let es = psd_eig(h)?;
    let cutoff = rank_tol * es.values[0].max(0.0);
    Ok(es.values.iter().filter(|&&l| l > cutoff && l > 0.0).count())
}

/// Sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    a.check_finite()?;
    if a.is_exactly_hermitian() {
        let h = HermitianMatrix(a.clone());
        return Ok(eig_hermitian(&h)?.values.iter().map(|v| v.abs()).sum());
    }
    let gram = HermitianMatrix::hermitian_part(&(&a.adjoint() * a));
    Ok(eig_hermitian(&gram)?
        .values
        .iter()
        .map(|v| v.max(0.0).sqrt())
        .sum())
}

/// Closed-form square root of a 2x2 PSD matrix: `(S + sI) / t` with
/// `s = sqrt(det S)` and `t = sqrt(tr S + 2s)`.
pub fn sqrt_2x2_levinger(s: &HermitianMatrix) -> Result<HermitianMatrix> {
    if s.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            got: s.dim(),
        });
    }
    s.as_matrix().check_finite()?;
    let a = s[(0, 0)].re;
    let d = s[(1, 1)].re;
    let b = s[(0, 1)];
    let tau = a + d;
    let delta = a * d - b.norm_sqr();
    let scale = tau.abs().max(1.0);
    if a < -PSD_TOL * scale || d < -PSD_TOL * scale || delta < -PSD_TOL * scale * scale {
        return Err(Error::NotPsd(
            0.5 * (tau - (tau * tau - 4.0 * delta).max(0.0).sqrt()),
        ));
    }
    if a == 0.0 && d == 0.0 && b == ZERO {
        return Ok(HermitianMatrix::zeros(2));
    }
    let root_det = delta.max(0.0).sqrt();
    let t2 = tau + 2.0 * root_det;
    if t2 <= 0.0 {
        return Err(Error::DegenerateSqrt);
    }
    let t = t2.sqrt();
    let shifted = s.add(&HermitianMatrix::identity(2).scale(root_det));
    Ok(shifted.scale(1.0 / t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{random_hermitian, random_psd, random_unitary, rng};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pauli_x() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn eig_diagonal() {
        let es = eig_hermitian(&HermitianMatrix::diag(&[1.0, 2.0])).unwrap();
        assert_eq!(es.values, vec![2.0, 1.0]);
        assert!((es.vectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((es.vectors[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eig_pauli_x() {
        let es = pauli_x().eig().unwrap();
        assert!((es.values[0] - 1.0).abs() < 1e-15);
        assert!((es.values[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn eig_reconstructs_random_inputs() {
        let mut r = rng(1);
        for d in [2, 3, 4, 6] {
            for _ in 0..50 {
                let h = random_hermitian(d, &mut r);
                let es = h.eig().unwrap();
                let back = es.map(|l| l);
                let scale = h.frobenius_norm().max(1.0);
                let resid = (back.as_matrix() - h.as_matrix()).frobenius_norm();
                assert!(resid <= 1e-10 * scale, "residual {resid}");
                let vtv = &es.vectors.adjoint() * &es.vectors;
                assert!(vtv.max_abs_diff(&ComplexMatrix::identity(d)) < 1e-10);
                assert!(es.values.windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    fn eig_rejects_non_finite() {
        let m = ComplexMatrix::from_fn(2, |_, _| c(f64::NAN, 0.0));
        assert!(HermitianMatrix::new(m).is_err());
        assert!(matches!(
            ComplexMatrix::from_row_major(vec![c(f64::INFINITY, 0.0)]),
            Err(Error::InvalidMatrix(_))
        ));
    }

    #[test]
    fn new_rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]])
            .unwrap();
        assert!(matches!(HermitianMatrix::new(m), Err(Error::InvalidMatrix(_))));
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&HermitianMatrix::identity(3), 0.0).unwrap());
        assert!(!is_psd(&HermitianMatrix::diag(&[1.0, -1.0]), 1e-9).unwrap());
        let jitter = HermitianMatrix::diag(&[1.0, 0.0]).sub(&HermitianMatrix::identity(2).scale(1e-12));
        assert!(is_psd(&jitter, 1e-9).unwrap());
    }

    #[test]
    fn sqrt_examples() {
        let r = mat_sqrt_psd(&HermitianMatrix::diag(&[4.0, 9.0])).unwrap();
        assert!(r.max_abs_diff(&HermitianMatrix::diag(&[2.0, 3.0])) < 1e-15);
        let z = mat_sqrt_psd(&HermitianMatrix::zeros(3)).unwrap();
        assert_eq!(z, HermitianMatrix::zeros(3));
        let q = mat_sqrt_psd(&HermitianMatrix::identity(2).scale(0.25)).unwrap();
        assert!(q.max_abs_diff(&HermitianMatrix::identity(2).scale(0.5)) < 1e-15);
        assert!((q.trace() - 1.0).abs() < 1e-15);
        assert!(matches!(
            mat_sqrt_psd(&HermitianMatrix::diag(&[1.0, -0.5])),
            Err(Error::NotPsd(_))
        ));
    }

    #[test]
    fn pinv_sqrt_examples() {
        let r = pinv_sqrt(&HermitianMatrix::diag(&[4.0, 0.0]), DEFAULT_RANK_TOL).unwrap();
        assert!(r.max_abs_diff(&HermitianMatrix::diag(&[0.5, 0.0])) < 1e-15);
        let i = pinv_sqrt(&HermitianMatrix::identity(3), DEFAULT_RANK_TOL).unwrap();
        assert!(i.max_abs_diff(&HermitianMatrix::identity(3)) < 1e-15);
        let s = HermitianMatrix::diag(&[2.0 / 3.0, 1.0 / 3.0]);
        let r = pinv_sqrt(&s, DEFAULT_RANK_TOL).unwrap();
        let want = HermitianMatrix::diag(&[1.5_f64.sqrt(), 3.0_f64.sqrt()]);
        assert!(r.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(pauli_x().as_matrix()).unwrap() - 2.0).abs() < 1e-15);
        let half_z = HermitianMatrix::diag(&[0.5, -0.5]);
        assert!((trace_norm(half_z.as_matrix()).unwrap() - 1.0).abs() < 1e-15);
        let v = [c(0.6, 0.0), c(0.0, 0.8)];
        let pure = HermitianMatrix::projector(&v);
        assert!((trace_norm(pure.as_matrix()).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trace_norm_unitarily_invariant() {
        let mut r = rng(7);
        for d in [2, 3, 4] {
            for _ in 0..30 {
                let a = random_hermitian(d, &mut r).into_matrix();
                let u = random_unitary(d, &mut r);
                let w = random_unitary(d, &mut r);
                let before = trace_norm(&a).unwrap();
                let after = trace_norm(&(&(&u * &a) * &w)).unwrap();
                assert!((before - after).abs() <= 1e-10 * before.max(1.0));
            }
        }
    }

    #[test]
    fn levinger_examples() {
        let s = HermitianMatrix::diag(&[2.0, 0.0]);
        let r = sqrt_2x2_levinger(&s).unwrap();
        assert!(r.max_abs_diff(&HermitianMatrix::diag(&[2.0_f64.sqrt(), 0.0])) < 1e-15);
        assert_eq!(
            sqrt_2x2_levinger(&HermitianMatrix::zeros(2)).unwrap(),
            HermitianMatrix::zeros(2)
        );
        assert!(matches!(
            sqrt_2x2_levinger(&HermitianMatrix::identity(3)),
            Err(Error::WrongDimension { .. })
        ));
        assert!(matches!(
            sqrt_2x2_levinger(&HermitianMatrix::diag(&[1.0, -1.0])),
            Err(Error::NotPsd(_))
        ));
    }

    #[test]
    fn levinger_equidistant_invariants() {
        // S for the equidistant triple with the 1/3 factors dropped.
        let alpha: f64 = 0.5;
        let cos_t = 1.0 - 1.0 / (2.0 * alpha * alpha);
        let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
        let e = c(cos_t, sin_t);
        let off = (c(1.0, 0.0) + e.conj()) * alpha * (1.0 - alpha * alpha).sqrt();
        let s = HermitianMatrix::new(
            ComplexMatrix::from_rows(&[
                vec![c(1.0 + 2.0 * alpha * alpha, 0.0), off],
                vec![off.conj(), c(2.0 * (1.0 - alpha * alpha), 0.0)],
            ])
            .unwrap(),
        )
        .unwrap();
        let tau = s.trace();
        let delta = (s[(0, 0)] * s[(1, 1)] - s[(0, 1)] * s[(1, 0)]).re;
        assert!((tau - 3.0).abs() < 1e-14);
        assert!((delta - 9.0 / 4.0).abs() < 1e-14);
        let a = sqrt_2x2_levinger(&s).unwrap();
        let b = mat_sqrt_psd(&s).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn levinger_matches_eigen_sqrt() {
        let mut r = rng(11);
        for _ in 0..1000 {
            let s = random_psd(2, &mut r);
            let a = sqrt_2x2_levinger(&s).unwrap();
            let b = mat_sqrt_psd(&s).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-10, "{:?} vs {:?}", a, b);
        }
    }

    #[test]
    fn pinv_sqrt_gives_range_projector() {
        let mut r = rng(3);
        for d in [2, 3, 4] {
            for rank in 1..=d {
                let mut h = HermitianMatrix::zeros(d);
                for _ in 0..rank {
                    let v = crate::testutil::random_ket(d, &mut r);
                    h = h.add(&HermitianMatrix::projector(&v));
                }
                let x = pinv_sqrt(&h, DEFAULT_RANK_TOL).unwrap();
                let p = x.sandwich(&h);
                let p2 = HermitianMatrix::hermitian_part(&(p.as_matrix() * p.as_matrix()));
                assert!(p.max_abs_diff(&p2) < 1e-9);
                assert!((p.trace() - rank as f64).abs() < 1e-9);
                let hx = h.as_matrix() * x.as_matrix();
                let xh = x.as_matrix() * h.as_matrix();
                assert!(hx.max_abs_diff(&xh) < 1e-9);
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn psd_strategy(d: usize) -> impl Strategy<Value = HermitianMatrix> {
            proptest::collection::vec(-1.0f64..1.0, 2 * d * d).prop_map(move |xs| {
                let g = ComplexMatrix::from_fn(d, |j, k| {
                    C64::new(xs[2 * (j * d + k)], xs[2 * (j * d + k) + 1])
                });
                HermitianMatrix::hermitian_part(&(&g * &g.adjoint()))
            })
        }

        proptest! {
            #[test]
            fn sqrt_squares_back(h in (2usize..5).prop_flat_map(psd_strategy)) {
                let r = mat_sqrt_psd(&h).unwrap();
                let back = r.as_matrix() * r.as_matrix();
                let err = (&back - h.as_matrix()).frobenius_norm();
                prop_assert!(err <= 1e-9 * h.frobenius_norm().max(1e-300) + 1e-15);
                prop_assert!(is_psd(&r, 1e-12).unwrap());
            }
        }
    }
}
