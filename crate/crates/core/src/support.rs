//! The support `I+` of an optimal measurement: read off a solved POVM, or
//! bracketed from both sides without solving.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::sqrt_sum_over;
use crate::ensemble::{Ensemble, IndexSet};
use crate::error::{Error, Result};
use crate::hermitian::{eig_hermitian, HermitianMatrix};
use crate::sampling::{instance, RngSeed};
use crate::solver::{solve_with, Povm, SolveOptions};

/// Operators with trace above this count as nonvanishing.
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-6;
/// Traces in this band are reported as ambiguous.
pub const AMBIGUOUS_BAND: (f64, f64) = (1e-8, 1e-4);
/// Strict-dominance threshold for the superset test.
pub const DOMINANCE_TOL: f64 = 1e-10;
/// Margin by which the leave-one-out bound must fall short in the subset test.
pub const SUBSET_MARGIN: f64 = 1e-12;
/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.576;

/// Indices whose operator has trace above `tol`.
pub fn extract_support(m: &Povm, tol: f64) -> IndexSet {
    m.operators()
        .iter()
        .enumerate()
        .filter(|(_, op)| op.trace() > tol)
        .map(|(i, _)| i)
        .collect()
}

/// Whether any operator trace falls in [`AMBIGUOUS_BAND`].
pub fn support_is_ambiguous(m: &Povm) -> bool {
    m.traces()
        .iter()
        .any(|t| (AMBIGUOUS_BAND.0..=AMBIGUOUS_BAND.1).contains(t))
}

/// Indices that every optimal measurement uses: `i` is kept when the bound
/// `tr sqrt(sum_{j != i} s_j^2)` falls below the lower bound
/// `(tr sqrt(sum_j s_j^2))^2`.
pub fn subset_of_support(e: &Ensemble) -> Result<IndexSet> {
    let lower = sqrt_sum_over(e, 0..e.len())?.powi(2);
    let mut out = IndexSet::new();
    for i in 0..e.len() {
        let loo = sqrt_sum_over(e, (0..e.len()).filter(|&j| j != i))?;
        if loo < lower - SUBSET_MARGIN {
            out.insert(i);
        }
    }
    Ok(out)
}

/// Fixed weights or the coordinate search for the superset test.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SupersetOptions {
    /// `N - 1` weights over the other states, in index order. Defaults to uniform.
    pub weights: Option<Vec<f64>>,
    /// Improve the weights for each index before testing.
    pub search: bool,
}

/// Indices not excluded by strict dominance: `i` is dropped when
/// `sum_{j != i} w_j s_j - s_i` is positive definite.
pub fn superset_of_support(e: &Ensemble, weights: Option<&[f64]>) -> Result<IndexSet> {
    superset_with(
        e,
        &SupersetOptions {
            weights: weights.map(<[f64]>::to_vec),
            search: false,
        },
    )
}

pub fn superset_with(e: &Ensemble, opts: &SupersetOptions) -> Result<IndexSet> {
    let n = e.len();
    if n == 1 {
        return Ok(e.all_indices());
    }
    let w = match &opts.weights {
        Some(w) => {
            check_weights(w, n)?;
            w.clone()
        }
        None => vec![1.0 / (n - 1) as f64; n - 1],
    };
    let weighted = e.weighted_all();
    let mut out = IndexSet::new();
    for i in 0..n {
        let margin = if opts.search {
            search_weights(&weighted, i, w.clone())?
        } else {
            dominance_margin(&weighted, i, &w)?
        };
        if margin <= DOMINANCE_TOL {
            out.insert(i);
        }
    }
    Ok(out)
}

fn check_weights(w: &[f64], n: usize) -> Result<()> {
    if w.len() != n - 1 {
        return Err(Error::InvalidWeights(format!(
            "expected {} weights, got {}",
            n - 1,
            w.len()
        )));
    }
    if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidWeights("weights must be nonnegative".into()));
    }
    let total: f64 = w.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidWeights(format!("weights sum to {total}")));
    }
    Ok(())
}

/// `lambda_min(sum_{j != i} w_j s_j - s_i)`.
fn dominance_margin(weighted: &[HermitianMatrix], i: usize, w: &[f64]) -> Result<f64> {
    let d = weighted[0].dim();
    let mix = weighted
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .zip(w)
        .fold(HermitianMatrix::zeros(d), |acc, ((_, s), &wj)| acc.add(&s.scale(wj)));
    let es = eig_hermitian(&mix.sub(&weighted[i]))?;
    Ok(es.values[d - 1])
}

/// Coordinate ascent on the dominance margin over the simplex: repeatedly try
/// moving a fraction of the weight onto one coordinate, halving the step when
/// nothing improves.
fn search_weights(weighted: &[HermitianMatrix], i: usize, mut w: Vec<f64>) -> Result<f64> {
    let mut best = dominance_margin(weighted, i, &w)?;
    let mut step = 0.5;
    while step > 1e-4 && best <= DOMINANCE_TOL {
        let mut improved = false;
        for k in 0..w.len() {
            let trial: Vec<f64> = w
                .iter()
                .enumerate()
                .map(|(j, x)| (1.0 - step) * x + if j == k { step } else { 0.0 })
                .collect();
            let m = dominance_margin(weighted, i, &trial)?;
            if m > best {
                best = m;
                w = trial;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(best)
}

/// Both brackets and, optionally, the solver's support.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupportEstimate {
    pub subset: IndexSet,
    pub superset: IndexSet,
    pub exact: Option<IndexSet>,
    /// `subset == superset`: the support is pinned down without solving.
    pub coincide: bool,
    /// Some operator trace fell in [`AMBIGUOUS_BAND`].
    pub ambiguous: bool,
    /// Certified gap of the solve, when one was run.
    pub gap: Option<f64>,
    pub converged: bool,
}

impl SupportEstimate {
    /// `subset <= exact <= superset` (vacuous without `exact`).
    pub fn is_sound(&self) -> bool {
        self.subset.is_subset(&self.superset)
            && self
                .exact
                .as_ref()
                .is_none_or(|x| self.subset.is_subset(x) && x.is_subset(&self.superset))
    }
}

/// Settings for [`estimate_support_with`] and the coincidence experiment.
#[derive(Clone, Debug)]
pub struct SupportOptions {
    pub superset: SupersetOptions,
    pub solver: SolveOptions,
    pub support_tol: f64,
}

impl Default for SupportOptions {
    fn default() -> Self {
        Self {
            superset: SupersetOptions::default(),
            solver: SolveOptions::default(),
            support_tol: DEFAULT_SUPPORT_TOL,
        }
    }
}

pub fn estimate_support(e: &Ensemble, solve: bool) -> Result<SupportEstimate> {
    estimate_support_with(e, solve, &SupportOptions::default())
}

pub fn estimate_support_with(
    e: &Ensemble,
    solve: bool,
    opts: &SupportOptions,
) -> Result<SupportEstimate> {
    let subset = subset_of_support(e)?;
    let superset = superset_with(e, &opts.superset)?;
    let coincide = subset == superset;
    let (exact, ambiguous, gap, converged) = if solve {
        let (res, converged) = match solve_with(e, &opts.solver) {
            Ok(r) => (r, true),
            Err(Error::NotConverged(r)) => (*r, false),
            Err(err) => return Err(err),
        };
        (
            Some(extract_support(&res.povm, opts.support_tol)),
            support_is_ambiguous(&res.povm),
            Some(res.gap),
            converged,
        )
    } else {
        (None, false, None, true)
    };
    Ok(SupportEstimate {
        subset,
        superset,
        exact,
        coincide,
        ambiguous,
        gap,
        converged,
    })
}

/// One sampled instance of the coincidence experiment.
#[derive(Clone, Debug, Serialize)]
pub struct InstanceRecord {
    pub index: u64,
    pub priors: Vec<f64>,
    #[serde(flatten)]
    pub estimate: SupportEstimate,
}

/// A rate with its 99% normal-approximation interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rate {
    pub rate: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Rate {
    pub fn from_counts(hits: usize, n: usize) -> Self {
        if n == 0 {
            return Self {
                rate: 0.0,
                lo: 0.0,
                hi: 1.0,
            };
        }
        let p = hits as f64 / n as f64;
        let half = Z99 * (p * (1.0 - p) / n as f64).sqrt();
        Self {
            rate: p,
            lo: (p - half).max(0.0),
            hi: (p + half).min(1.0),
        }
    }
}

/// Aggregate of the coincidence experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoincidenceStats {
    pub instances: usize,
    /// `subset == solver support`.
    pub subset_match: Rate,
    /// `superset == solver support`.
    pub superset_match: Rate,
    /// `subset == superset`.
    pub coincide: Rate,
    /// Instances with an operator trace in the ambiguous band.
    pub ambiguous: usize,
    pub not_converged: usize,
    /// Indices where `subset <= solver support <= superset` failed.
    pub violations: Vec<u64>,
}

impl CoincidenceStats {
    pub fn from_records(records: &[InstanceRecord]) -> Self {
        let n = records.len();
        let count = |f: &dyn Fn(&SupportEstimate) -> bool| records.iter().filter(|r| f(&r.estimate)).count();
        Self {
            instances: n,
            subset_match: Rate::from_counts(count(&|s| s.exact.as_ref() == Some(&s.subset)), n),
            superset_match: Rate::from_counts(count(&|s| s.exact.as_ref() == Some(&s.superset)), n),
            coincide: Rate::from_counts(count(&|s| s.coincide), n),
            ambiguous: count(&|s| s.ambiguous),
            not_converged: count(&|s| !s.converged),
            violations: records
                .iter()
                .filter(|r| !r.estimate.is_sound())
                .map(|r| r.index)
                .collect(),
        }
    }

    /// One CSV row per rate: `metric,rate,ci99_lo,ci99_hi`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,rate,ci99_lo,ci99_hi\n");
        for (name, r) in [
            ("subset_match", self.subset_match),
            ("superset_match", self.superset_match),
            ("coincide", self.coincide),
        ] {
            out.push_str(&format!("{name},{:.6},{:.6},{:.6}\n", r.rate, r.lo, r.hi));
        }
        out
    }
}

/// Per-instance results for instances `0..instances` of the stream `seed`,
/// in index order regardless of scheduling.
pub fn coincidence_records(
    instances: usize,
    n: usize,
    d: usize,
    seed: RngSeed,
    opts: &SupportOptions,
) -> Result<Vec<InstanceRecord>> {
    if instances == 0 || n == 0 || d == 0 {
        return Err(Error::InvalidParameter(
            "instances, N and d must be positive".into(),
        ));
    }
    (0..instances as u64)
        .into_par_iter()
        .map(|index| {
            let e = instance(seed, index, n, d);
            let estimate = estimate_support_with(&e, true, opts)?;
            Ok(InstanceRecord {
                index,
                priors: e.priors().to_vec(),
                estimate,
            })
        })
        .collect()
}

/// Sampled support experiment: HS states, flat Dirichlet priors, uniform
/// superset weights.
pub fn coincidence_experiment(
    instances: usize,
    n: usize,
    d: usize,
    seed: RngSeed,
) -> Result<CoincidenceStats> {
    let records = coincidence_records(instances, n, d, seed, &SupportOptions::default())?;
    Ok(CoincidenceStats::from_records(&records))
}
