//! Problem instances: prior-weighted density matrices.
//!
//! An [`Ensemble`] is the list `{p_i sigma_i}`. Indices are zero-based
//! everywhere in the crate.

mod bloch;
mod families;
mod reconstruct;

pub use bloch::{
    bloch_from_state, bloch_inner_from_fidelity, gell_mann_basis, reflect_qubit, state_from_bloch,
    BlochVector,
};
pub(crate) use families::check_mirror_params;
pub use families::{equidistant_phase_cos, equidistant_triple, mirror_symmetric};
pub use reconstruct::{ensemble_from_gram, qubit_ensemble_from_fidelity};

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hermitian::{eig_hermitian, is_psd, ComplexMatrix, HermitianMatrix, C64, PSD_TOL};

/// Set of state indices, e.g. the support of an optimal measurement.
pub type IndexSet = BTreeSet<usize>;

/// Tolerance on unit trace, prior sums and purity.
pub const STATE_TOL: f64 = 1e-9;

/// Unit-trace positive semidefinite matrix, optionally remembering the ket it
/// was built from so that Gram matrices keep the caller's phases.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    ket: Option<Vec<C64>>,
}

impl DensityMatrix {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let tr = matrix.trace();
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidMatrix(format!("trace {tr} is not 1")));
        }
        if !is_psd(&matrix, PSD_TOL)? {
            return Err(Error::NotPsd(matrix.min_eigenvalue()?));
        }
        Ok(Self { matrix, ket: None })
    }

    /// Pure state `|v><v| / <v|v>`.
    pub fn from_ket(v: &[C64]) -> Result<Self> {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if v.is_empty() || !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidMatrix("ket must be finite and nonzero".into()));
        }
        let ket: Vec<C64> = v.iter().map(|z| z / norm).collect();
        Ok(Self {
            matrix: HermitianMatrix::projector(&ket),
            ket: Some(ket),
        })
    }

    pub fn from_real_ket(v: &[f64]) -> Result<Self> {
        let v: Vec<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_ket(&v)
    }

    /// Computational basis state `|k>` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); d];
        v[k] = C64::new(1.0, 0.0);
        Self::from_ket(&v).expect("basis ket is valid")
    }

    /// Wraps a matrix already known to be a density matrix.
    pub(crate) fn new_unchecked(matrix: HermitianMatrix) -> Self {
        Self { matrix, ket: None }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: HermitianMatrix::identity(d).scale(1.0 / d as f64),
            ket: None,
        }
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn ket(&self) -> Option<&[C64]> {
        self.ket.as_deref()
    }

    pub fn is_pure(&self) -> Result<bool> {
        if self.ket.is_some() {
            return Ok(true);
        }
        let es = eig_hermitian(&self.matrix)?;
        Ok(es.values[0] >= 1.0 - STATE_TOL)
    }

    /// Unit ket spanning a pure state. A stored ket is returned as is; otherwise
    /// the dominant eigenvector is used with its first nonzero coordinate made
    /// real and positive.
    pub fn pure_ket(&self) -> Option<Vec<C64>> {
        if let Some(k) = &self.ket {
            return Some(k.clone());
        }
        let es = eig_hermitian(&self.matrix).ok()?;
        if es.values[0] < 1.0 - STATE_TOL {
            return None;
        }
        let mut v = es.vector(0);
        if let Some(lead) = v.iter().copied().find(|z| z.norm() > 1e-9) {
            let phase = lead.conj() / lead.norm();
            for z in &mut v {
                *z *= phase;
            }
        }
        Some(v)
    }

    pub fn conjugated_by(&self, u: &ComplexMatrix) -> Self {
        Self {
            matrix: self.matrix.conjugate_by(u),
            ket: self.ket.as_ref().map(|k| u.apply(k)),
        }
    }
}

/// Priors and states of a discrimination problem.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    dim: usize,
    priors: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Ensemble {
    pub fn new(priors: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if priors.is_empty() {
            return Err(Error::InvalidEnsemble("no states".into()));
        }
        if priors.len() != states.len() {
            return Err(Error::InvalidEnsemble(format!(
                "{} priors for {} states",
                priors.len(),
                states.len()
            )));
        }
        if let Some((i, p)) = priors
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < 0.0)
        {
            return Err(Error::InvalidEnsemble(format!("prior {i} = {p} is negative")));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidEnsemble(format!("priors sum to {total}")));
        }
        let dim = states[0].dim();
        if let Some((i, s)) = states.iter().enumerate().find(|(_, s)| s.dim() != dim) {
            return Err(Error::InvalidEnsemble(format!(
                "state {i} has dimension {} (expected {dim})",
                s.dim()
            )));
        }
        Ok(Self { dim, priors, states })
    }

    /// Pure-state ensemble from (unnormalized) kets.
    pub fn from_kets(priors: Vec<f64>, kets: &[Vec<C64>]) -> Result<Self> {
        let states = kets
            .iter()
            .map(|k| DensityMatrix::from_ket(k))
            .collect::<Result<Vec<_>>>()?;
        Self::new(priors, states)
    }

    pub fn len(&self) -> usize {
        self.priors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.priors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    /// `p_i sigma_i`.
    pub fn weighted(&self, i: usize) -> HermitianMatrix {
        self.states[i].matrix().scale(self.priors[i])
    }

    pub fn weighted_all(&self) -> Vec<HermitianMatrix> {
        (0..self.len()).map(|i| self.weighted(i)).collect()
    }

    /// Ensemble average `S = sum_i p_i sigma_i` over the given indices.
    pub fn average_over(&self, indices: impl IntoIterator<Item = usize>) -> HermitianMatrix {
        indices
            .into_iter()
            .fold(HermitianMatrix::zeros(self.dim), |acc, i| acc.add(&self.weighted(i)))
    }

    pub fn average(&self) -> HermitianMatrix {
        self.average_over(0..self.len())
    }

    pub fn is_equiprobable(&self, tol: f64) -> bool {
        let target = 1.0 / self.len() as f64;
        self.priors.iter().all(|p| (p - target).abs() <= tol)
    }

    pub fn is_pure(&self) -> Result<bool> {
        for s in &self.states {
            if !s.is_pure()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Restriction to `indices` with priors renormalized by their total `p_+`.
    /// Returns `(p_+, restricted ensemble)`.
    pub fn restrict(&self, indices: &IndexSet) -> Result<(f64, Ensemble)> {
        if indices.is_empty() {
            return Err(Error::InvalidSupport("empty index set".into()));
        }
        if let Some(&i) = indices.iter().find(|&&i| i >= self.len()) {
            return Err(Error::InvalidSupport(format!(
                "index {i} out of range for {} states",
                self.len()
            )));
        }
        let p_plus: f64 = indices.iter().map(|&i| self.priors[i]).sum();
        if p_plus <= 0.0 {
            return Err(Error::InvalidSupport("support carries zero prior mass".into()));
        }
        let priors = indices.iter().map(|&i| self.priors[i] / p_plus).collect();
        let states = indices.iter().map(|&i| self.states[i].clone()).collect();
        Ok((p_plus, Ensemble::new(priors, states)?))
    }

    /// The ensemble `{U sigma_i U^dagger}` with unchanged priors.
    pub fn conjugated_by(&self, u: &ComplexMatrix) -> Self {
        Self {
            dim: self.dim,
            priors: self.priors.clone(),
            states: self.states.iter().map(|s| s.conjugated_by(u)).collect(),
        }
    }

    /// Unit kets of every state, or `NotPure` naming the first mixed one.
    pub fn pure_kets(&self) -> Result<Vec<Vec<C64>>> {
        self.states
            .iter()
            .enumerate()
            .map(|(i, s)| s.pure_ket().ok_or(Error::NotPure(i)))
            .collect()
    }

    pub fn all_indices(&self) -> IndexSet {
        (0..self.len()).collect()
    }
}

fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Gram matrix `G_ij = <psi~_i|psi~_j>` of a pure ensemble.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix(HermitianMatrix);

impl GramMatrix {
    pub fn new(g: HermitianMatrix) -> Result<Self> {
        if !is_psd(&g, PSD_TOL)? {
            return Err(Error::NotPsd(g.min_eigenvalue()?));
        }
        Ok(Self(g))
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.0.dim() == 0
    }
}

/// Unnormalized (`F_ij = |<psi~_i|psi~_j>|`) and normalized
/// (`F^_ij = |<psi_i|psi_j>|`) fidelity matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct FidelityMatrix {
    pub unnormalized: Vec<Vec<f64>>,
    pub normalized: Vec<Vec<f64>>,
}

impl FidelityMatrix {
    /// Builds both forms from the unnormalized matrix. Diagonal entries are the
    /// priors and must be positive.
    pub fn from_unnormalized(f: Vec<Vec<f64>>) -> Result<Self> {
        let n = f.len();
        if f.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidFidelity("matrix is not square".into()));
        }
        for (i, row) in f.iter().enumerate() {
            if !(row[i] > 0.0) {
                return Err(Error::InvalidFidelity(format!(
                    "diagonal entry {i} must be positive"
                )));
            }
            if row.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(Error::InvalidFidelity(format!("row {i} has a negative entry")));
            }
        }
        let normalized = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            1.0
                        } else {
                            f[i][j] / (f[i][i] * f[j][j]).sqrt()
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            unnormalized: f,
            normalized,
        })
    }

    pub fn len(&self) -> usize {
        self.unnormalized.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unnormalized.is_empty()
    }
}

/// Gram matrix of a pure ensemble, using each state's stored ket or its
/// phase-fixed dominant eigenvector.
pub fn gram(e: &Ensemble) -> Result<GramMatrix> {
    let kets = e.pure_kets()?;
    let n = e.len();
    let p = e.priors();
    let g = ComplexMatrix::from_fn(n, |i, j| inner(&kets[i], &kets[j]) * (p[i] * p[j]).sqrt());
    Ok(GramMatrix(HermitianMatrix::hermitian_part(&g)))
}

/// Pairwise fidelities of a pure ensemble.
pub fn fidelity_matrix(e: &Ensemble) -> Result<FidelityMatrix> {
    let kets = e.pure_kets()?;
    let n = e.len();
    let p = e.priors();
    let normalized: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 1.0 } else { inner(&kets[i], &kets[j]).norm().min(1.0) })
                .collect()
        })
        .collect();
    let unnormalized = (0..n)
        .map(|i| (0..n).map(|j| (p[i] * p[j]).sqrt() * normalized[i][j]).collect())
        .collect();
    Ok(FidelityMatrix {
        unnormalized,
        normalized,
    })
}
