//! Ensembles rebuilt from reduced representations.

use crate::error::{Error, Result};
use crate::hermitian::{eig_hermitian, HermitianMatrix, C64, DEFAULT_RANK_TOL};

use super::bloch::{bloch_inner_from_fidelity, BlochVector};
use super::{Ensemble, FidelityMatrix, GramMatrix};

/// Pure ensemble in dimension `rank(G)` whose Gram matrix is `G`.
///
/// Uses `G = A^dagger A` with `A = Lambda^{1/2} V^dagger` from the eigensystem,
/// so singular Gram matrices factor without trouble. The columns of `A` are the
/// weighted kets.
pub fn ensemble_from_gram(g: &GramMatrix) -> Result<Ensemble> {
    let es = eig_hermitian(g.matrix())?;
    let n = g.len();
    let cutoff = DEFAULT_RANK_TOL * es.values[0].max(0.0);
    let rank = es.values.iter().filter(|&&l| l > cutoff && l > 0.0).count().max(1);
    let priors: Vec<f64> = (0..n).map(|i| g.matrix()[(i, i)].re).collect();

    let mut kets = Vec::with_capacity(n);
    for i in 0..n {
        let weighted: Vec<C64> = (0..rank)
            .map(|k| es.vectors[(i, k)].conj() * es.values[k].max(0.0).sqrt())
            .collect();
        let norm = weighted.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let ket = if norm > 0.0 {
            weighted
        } else {
            let mut e0 = vec![C64::new(0.0, 0.0); rank];
            e0[0] = C64::new(1.0, 0.0);
            e0
        };
        kets.push(ket);
    }
    Ensemble::from_kets(priors, &kets)
}

/// Qubit pure ensemble whose pairwise fidelities are `F`.
///
/// The Bloch inner products `M_ij = 2 F^_ij^2 - 1` are factored as
/// `M = B^T B` with `B` 3xN; each column of `B` is a unit Bloch vector.
pub fn qubit_ensemble_from_fidelity(f: &FidelityMatrix) -> Result<Ensemble> {
    let n = f.len();
    if n == 0 {
        return Err(Error::InvalidFidelity("empty fidelity matrix".into()));
    }
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let fhat = f.normalized[i][j];
            if fhat > 1.0 + 1e-9 {
                return Err(Error::NotRealizableInQubit(format!(
                    "normalized fidelity {fhat} exceeds 1"
                )));
            }
            rows[i][j] = bloch_inner_from_fidelity(fhat.min(1.0), 2)?;
        }
    }
    let m = HermitianMatrix::from_real_rows(&rows)?;
    let es = eig_hermitian(&m)?;
    let scale = es.max_abs().max(1.0);
    let min = *es.values.last().expect("nonempty");
    if min < -1e-8 * scale {
        return Err(Error::NotRealizableInQubit(format!(
            "Bloch Gram matrix has eigenvalue {min:e}"
        )));
    }
    if n > 3 && es.values[3] > 1e-8 * scale {
        return Err(Error::NotRealizableInQubit(format!(
            "Bloch Gram matrix has rank > 3 (4th eigenvalue {:e})",
            es.values[3]
        )));
    }

    let priors: Vec<f64> = (0..n).map(|i| f.unnormalized[i][i]).collect();
    let mut kets = Vec::with_capacity(n);
    for i in 0..n {
        let mut r = [0.0; 3];
        for (k, x) in r.iter_mut().enumerate().take(n.min(3)) {
            *x = es.vectors[(i, k)].re * es.values[k].max(0.0).sqrt();
        }
        kets.push(ket_from_bloch(&BlochVector(r.to_vec())));
    }
    Ensemble::from_kets(priors, &kets)
}

/// Qubit ket for the (normalized) Bloch direction `r`.
pub(crate) fn ket_from_bloch(r: &BlochVector) -> Vec<C64> {
    let norm = r.norm();
    let (x, y, z) = if norm > 0.0 {
        (r.0[0] / norm, r.0[1] / norm, r.0[2] / norm)
    } else {
        (0.0, 0.0, 1.0)
    };
    let polar = z.clamp(-1.0, 1.0).acos();
    let azimuth = y.atan2(x);
    vec![
        C64::new((polar / 2.0).cos(), 0.0),
        C64::from_polar((polar / 2.0).sin(), azimuth),
    ]
}
