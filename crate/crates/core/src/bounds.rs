//! Upper and lower bounds on the optimal success probability, with variants
//! that use knowledge of the support `I+` of an optimal measurement.
//!
//! Every pruned bound is the base bound applied to the ensemble restricted to
//! the support and renormalized, scaled back by the retained prior mass.

use serde::Serialize;

use crate::analytic::{check_support, mirror_pgm_success, pgm_plus_success, pgm_success};
use crate::ensemble::{check_mirror_params, fidelity_matrix, Ensemble, IndexSet};
use crate::error::{Error, Result};
use crate::hermitian::{mat_sqrt_psd, trace_norm, HermitianMatrix};

const RADICAND_TOL: f64 = 1e-12;
const EQUIPROBABLE_TOL: f64 = 1e-12;

fn checked_sqrt(x: f64, what: &str) -> Result<f64> {
    if x < -RADICAND_TOL || x.is_nan() {
        return Err(Error::InvalidInput(format!("{what}: negative radicand {x:e}")));
    }
    Ok(x.max(0.0).sqrt())
}

/// `sqrt((N-1)/N (P_pgm - 1/N)) + 1/N`.
pub fn bound_renes(p_pgm: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be positive".into()));
    }
    let n = n as f64;
    let root = checked_sqrt((n - 1.0) / n * (p_pgm - 1.0 / n), "PGM bound")?;
    Ok(root + 1.0 / n)
}

/// The PGM bound for the pruned ensemble, scaled by `p+`.
pub fn bound_renes_pruned(e: &Ensemble, support: &IndexSet) -> Result<f64> {
    let (mass, _) = e.restrict(support)?;
    let plus = pgm_plus_success(e, support)?;
    Ok(mass * bound_renes(plus / mass, support.len())?)
}

/// `1 - sum_{i<j} F_ij^2` with prior-weighted fidelities; pure states only.
pub fn bound_fidelity(e: &Ensemble) -> Result<f64> {
    let f = fidelity_matrix(e)?;
    let mut acc = 0.0;
    for i in 0..e.len() {
        for j in (i + 1)..e.len() {
            acc += f.unnormalized[i][j].powi(2);
        }
    }
    Ok(1.0 - acc)
}

pub fn bound_fidelity_pruned(e: &Ensemble, support: &IndexSet) -> Result<f64> {
    e.pure_kets()?;
    let (mass, sub) = e.restrict(support)?;
    Ok(mass * bound_fidelity(&sub)?)
}

/// `tr sqrt(sum_i s_i^2)`.
pub fn bound_sqrt_sum(e: &Ensemble) -> Result<f64> {
    sqrt_sum_over(e, 0..e.len())
}

/// `tr sqrt(sum_{i in I+} s_i^2)`, never larger than [`bound_sqrt_sum`].
pub fn bound_sqrt_sum_pruned(e: &Ensemble, support: &IndexSet) -> Result<f64> {
    check_support(e, support)?;
    sqrt_sum_over(e, support.iter().copied())
}

pub(crate) fn sqrt_sum_over(e: &Ensemble, idx: impl IntoIterator<Item = usize>) -> Result<f64> {
    let sum = idx.into_iter().fold(HermitianMatrix::zeros(e.dim()), |acc, i| {
        let w = e.weighted(i);
        acc.add(&HermitianMatrix::hermitian_part(&(w.as_matrix() * w.as_matrix())))
    });
    Ok(mat_sqrt_psd(&sum)?.trace())
}

/// `(tr sqrt(sum_i s_i^2))^2`, a lower bound.
pub fn lower_sqrt_sum(e: &Ensemble) -> Result<f64> {
    Ok(bound_sqrt_sum(e)?.powi(2))
}

/// `1/2 + 1/2 min_j { sum_i ||s_i - s_j||_1 - p_j (N - 2) }` and the minimizing
/// `j` (smallest index on ties).
pub fn bound_trace_norm(e: &Ensemble) -> Result<(f64, usize)> {
    let n = e.len();
    let w = e.weighted_all();
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let t = trace_norm(w[i].sub(&w[j]).as_matrix())?;
            dist[i][j] = t;
            dist[j][i] = t;
        }
    }
    let mut best = (f64::INFINITY, 0);
    for j in 0..n {
        let v = dist[j].iter().sum::<f64>() - e.priors()[j] * (n as f64 - 2.0);
        if v < best.0 {
            best = (v, j);
        }
    }
    Ok((0.5 + 0.5 * best.0, best.1))
}

/// Trace-norm bound on `I+ u {j_hat}` for equiprobable ensembles:
/// `(min_{j in J} sum_{i in J} ||sigma_i - sigma_j||_1 + 2) / 2N`.
pub fn bound_trace_norm_pruned(e: &Ensemble, support: &IndexSet, j_hat: usize) -> Result<f64> {
    if !e.is_equiprobable(EQUIPROBABLE_TOL) {
        return Err(Error::NotApplicable(
            "pruned trace-norm bound needs equiprobable states".into(),
        ));
    }
    check_support(e, support)?;
    if j_hat >= e.len() {
        return Err(Error::InvalidSupport(format!("j_hat = {j_hat} out of range")));
    }
    let mut set = support.clone();
    set.insert(j_hat);
    let (mass, sub) = e.restrict(&set)?;
    Ok(mass * bound_trace_norm(&sub)?.0)
}

/// Optional value with the reason it is missing.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BoundValue {
    pub value: Option<f64>,
    pub note: Option<String>,
}

impl BoundValue {
    fn from_result(r: Result<f64>) -> Self {
        match r {
            Ok(v) => Self {
                value: Some(v),
                note: None,
            },
            Err(e) => Self::absent(e.to_string()),
        }
    }

    fn absent(note: impl Into<String>) -> Self {
        Self {
            value: None,
            note: Some(note.into()),
        }
    }

    pub fn applicable(&self) -> bool {
        self.value.is_some()
    }
}

/// Every bound evaluated on one ensemble.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BoundsReport {
    pub pgm_renes: BoundValue,
    pub pgm_renes_pruned: BoundValue,
    pub fidelity: BoundValue,
    pub fidelity_pruned: BoundValue,
    pub sqrt_sum: BoundValue,
    pub sqrt_sum_pruned: BoundValue,
    pub trace_norm: BoundValue,
    pub trace_norm_pruned: BoundValue,
    pub lower_sqrt_sum: BoundValue,
}

impl BoundsReport {
    /// Upper bounds by name, in report order.
    pub fn upper_bounds(&self) -> [(&'static str, &BoundValue); 8] {
        [
            ("pgm_renes", &self.pgm_renes),
            ("pgm_renes_pruned", &self.pgm_renes_pruned),
            ("fidelity", &self.fidelity),
            ("fidelity_pruned", &self.fidelity_pruned),
            ("sqrt_sum", &self.sqrt_sum),
            ("sqrt_sum_pruned", &self.sqrt_sum_pruned),
            ("trace_norm", &self.trace_norm),
            ("trace_norm_pruned", &self.trace_norm_pruned),
        ]
    }

    pub fn entries(&self) -> Vec<(&'static str, &BoundValue)> {
        let mut v = self.upper_bounds().to_vec();
        v.push(("lower_sqrt_sum", &self.lower_sqrt_sum));
        v
    }

    /// Smallest applicable upper bound.
    pub fn min_upper(&self) -> Option<f64> {
        self.upper_bounds()
            .iter()
            .filter_map(|(_, b)| b.value)
            .reduce(f64::min)
    }

    /// `name,value,applicable` rows with a header; missing values are empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,value,applicable\n");
        for (name, b) in self.entries() {
            let v = b.value.map(|x| format!("{x:.15}")).unwrap_or_default();
            out.push_str(&format!("{name},{v},{}\n", b.applicable()));
        }
        out
    }
}

/// Evaluates every bound; pruned entries need `support`. Failures become
/// absent entries carrying the error text.
pub fn bounds_report(e: &Ensemble, support: Option<&IndexSet>) -> BoundsReport {
    let no_support = || BoundValue::absent("support not given");
    let trace = bound_trace_norm(e);
    let j_hat = trace.as_ref().ok().map(|t| t.1);
    let pruned = |f: &dyn Fn(&IndexSet) -> Result<f64>| match support {
        Some(s) => BoundValue::from_result(f(s)),
        None => no_support(),
    };
    BoundsReport {
        pgm_renes: BoundValue::from_result(pgm_success(e).and_then(|p| bound_renes(p, e.len()))),
        pgm_renes_pruned: pruned(&|s| bound_renes_pruned(e, s)),
        fidelity: BoundValue::from_result(bound_fidelity(e)),
        fidelity_pruned: pruned(&|s| bound_fidelity_pruned(e, s)),
        sqrt_sum: BoundValue::from_result(bound_sqrt_sum(e)),
        sqrt_sum_pruned: pruned(&|s| bound_sqrt_sum_pruned(e, s)),
        trace_norm: match &trace {
            Ok((v, _)) => BoundValue::from_result(Ok(*v)),
            Err(err) => BoundValue::absent(err.to_string()),
        },
        trace_norm_pruned: match j_hat {
            Some(j) => pruned(&|s| bound_trace_norm_pruned(e, s, j)),
            None => BoundValue::absent("trace-norm bound unavailable"),
        },
        lower_sqrt_sum: BoundValue::from_result(lower_sqrt_sum(e)),
    }
}

/// PGM bound for the mirror triple from its closed-form PGM success.
pub fn mirror_bound_naive(p: f64, theta: f64) -> Result<f64> {
    bound_renes(mirror_pgm_success(p, theta)?, 3)
}

/// Pruned PGM bound for the mirror triple with support `{0, 1}`:
/// `p (sqrt(2 cos t sin t) + 1)`.
pub fn mirror_bound_pruned(p: f64, theta: f64) -> Result<f64> {
    check_mirror_params(p, theta)?;
    Ok(p * ((2.0 * theta.cos() * theta.sin()).max(0.0).sqrt() + 1.0))
}

/// `naive - pruned`; non-negative when pruning tightens the PGM bound.
pub fn mirror_improvement_slack(p: f64, theta: f64) -> Result<f64> {
    Ok(mirror_bound_naive(p, theta)? - mirror_bound_pruned(p, theta)?)
}

/// `1 - p^2 cos^2 2t - 2p(1-2p) cos^2 t`.
pub fn mirror_fidelity_bound(p: f64, theta: f64) -> Result<f64> {
    check_mirror_params(p, theta)?;
    let c2 = (2.0 * theta).cos().powi(2);
    Ok(1.0 - p * p * c2 - 2.0 * p * (1.0 - 2.0 * p) * theta.cos().powi(2))
}

/// `2p (1 - cos^2(2t) / 4)`, the fidelity bound on the pair `{0, 1}`.
pub fn mirror_fidelity_bound_pruned(p: f64, theta: f64) -> Result<f64> {
    check_mirror_params(p, theta)?;
    Ok(2.0 * p * (1.0 - 0.25 * (2.0 * theta).cos().powi(2)))
}

/// Both sides of `(|I+| - 1)(P_pgm+ - 1/N) <= (N - 1)(P_pgm - 1/N)` for an
/// equiprobable ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PgmPruningCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl PgmPruningCheck {
    pub fn holds(&self, slack: f64) -> bool {
        self.lhs <= self.rhs + slack
    }
}

pub fn equiprobable_pgm_inequality(e: &Ensemble, support: &IndexSet) -> Result<PgmPruningCheck> {
    if !e.is_equiprobable(EQUIPROBABLE_TOL) {
        return Err(Error::NotApplicable("inequality is stated for equiprobable states".into()));
    }
    let n = e.len() as f64;
    let plus = pgm_plus_success(e, support)?;
    let full = pgm_success(e)?;
    Ok(PgmPruningCheck {
        lhs: (support.len() as f64 - 1.0) * (plus - 1.0 / n),
        rhs: (n - 1.0) * (full - 1.0 / n),
    })
}

/// `(sqrt(1 - |<psi_1|psi_2>|^2) + 2) / 6`: the PGM success above which the
/// pruned bound is tighter for an equiprobable qubit triple with support `{0, 1}`.
pub fn qubit_triple_pgm_threshold(overlap_sq: f64) -> f64 {
    ((1.0 - overlap_sq).max(0.0).sqrt() + 2.0) / 6.0
}
