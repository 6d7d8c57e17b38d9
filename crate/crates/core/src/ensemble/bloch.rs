//! Generalized Bloch vectors in the Gell-Mann basis.
//!
//! Basis order is every symmetric `beta_jk`, then every antisymmetric
//! `gamma_jk` (both lexicographic in `j < k`), then the diagonal `alpha_j`,
//! `j = 1..d-1`. For `d = 2` this is `(sigma_x, sigma_y, sigma_z)`.
//!
//! The expansion `rho = (I + sqrt(d(d-1)/2) lambda . r) / d` gives pure states
//! unit-norm Bloch vectors and `tr(rho sigma) = (1 + (d-1) r . s) / d`.

use crate::error::{Error, Result};
use crate::hermitian::{ComplexMatrix, HermitianMatrix, C64};

use super::DensityMatrix;

/// Real coordinates in the `d^2 - 1` dimensional Gell-Mann basis.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochVector(pub Vec<f64>);

impl BlochVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Hilbert-space dimension implied by the coordinate count.
    pub fn hilbert_dim(&self) -> Option<usize> {
        let d = ((self.0.len() + 1) as f64).sqrt().round() as usize;
        (d >= 2 && d * d == self.0.len() + 1).then_some(d)
    }
}

/// Traceless Hermitian basis with `tr(l_i l_j) = 2 delta_ij`.
pub fn gell_mann_basis(d: usize) -> Vec<HermitianMatrix> {
    let mut out = Vec::with_capacity(d * d - 1);
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|j| ((j + 1)..d).map(move |k| (j, k)))
        .collect();
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d);
        m[(j, k)] = C64::new(1.0, 0.0);
        m[(k, j)] = C64::new(1.0, 0.0);
        out.push(HermitianMatrix::hermitian_part(&m));
    }
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d);
        m[(j, k)] = C64::new(0.0, -1.0);
        m[(k, j)] = C64::new(0.0, 1.0);
        out.push(HermitianMatrix::hermitian_part(&m));
    }
    for j in 1..d {
        let norm = (2.0 / (j * (j + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        for x in diag.iter_mut().take(j) {
            *x = norm;
        }
        diag[j] = -(j as f64) * norm;
        out.push(HermitianMatrix::diag(&diag));
    }
    out
}

fn expansion_coefficient(d: usize) -> f64 {
    ((d * (d - 1)) as f64 / 2.0).sqrt()
}

pub fn bloch_from_state(rho: &DensityMatrix) -> BlochVector {
    let d = rho.dim();
    let scale = d as f64 / (2.0 * expansion_coefficient(d));
    BlochVector(
        gell_mann_basis(d)
            .iter()
            .map(|l| scale * rho.matrix().trace_product(l))
            .collect(),
    )
}

/// Inverse of [`bloch_from_state`]; fails with `NotPsd` when `r` lies outside
/// the state space.
pub fn state_from_bloch(r: &BlochVector, d: usize) -> Result<DensityMatrix> {
    if d < 2 || r.0.len() != d * d - 1 {
        return Err(Error::DimensionMismatch {
            expected: d * d - 1,
            got: r.0.len(),
        });
    }
    let c = expansion_coefficient(d);
    let m = gell_mann_basis(d)
        .iter()
        .zip(&r.0)
        .fold(HermitianMatrix::identity(d), |acc, (l, &x)| acc.add(&l.scale(c * x)));
    DensityMatrix::new(m.scale(1.0 / d as f64))
}

/// Bloch inner product of two pure states with normalized fidelity `fhat`.
pub fn bloch_inner_from_fidelity(fhat: f64, d: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&fhat) {
        return Err(Error::InvalidFidelity(format!("{fhat} outside [0, 1]")));
    }
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension {d} < 2")));
    }
    let d = d as f64;
    Ok((d * fhat * fhat - 1.0) / (d - 1.0))
}

/// Reflection of a qubit Bloch vector across the xy-plane: `rho -> X rho^T X`.
pub fn reflect_qubit(rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            got: rho.dim(),
        });
    }
    match rho.ket() {
        // X conj(|v>) spans X rho^T X.
        Some(k) => DensityMatrix::from_ket(&[k[1].conj(), k[0].conj()]),
        None => {
            let x = HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])?;
            let t = HermitianMatrix::hermitian_part(&rho.matrix().as_matrix().transpose());
            DensityMatrix::new(x.sandwich(&t))
        }
    }
}
