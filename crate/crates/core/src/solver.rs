//! Optimal minimum-error measurements with a dual optimality certificate.
//!
//! The primal is improved by the self-consistent map
//! `E_i <- L^{-1/2} s_i E_i s_i L^{-1/2}` with `L = sum_j s_j E_j s_j` and
//! `s_i = p_i sigma_i`. Termination is decided by a dual bound built from the
//! current iterate, so the reported gap is rigorous regardless of how far the
//! iteration got.
//!
//! Operators that are heading to zero do so slowly. Whenever some operators
//! have small trace, the problem restricted to the others is solved and the
//! embedded solution is accepted if its certificate for the full problem
//! still closes to `tol`.

use serde::Serialize;

use crate::analytic::{helstrom_povm, pgm};
use crate::ensemble::{Ensemble, IndexSet};
use crate::error::{Error, Result};
use crate::hermitian::{eig_hermitian, pinv_sqrt, psd_rank, HermitianMatrix, DEFAULT_RANK_TOL};

/// Default certified gap.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default iteration cap.
pub const DEFAULT_MAX_ITER: usize = 100_000;

const ITER_RANK_TOL: f64 = 1e-12;
const START_MIX: f64 = 1e-3;
/// Operators below this trace are candidates for being dropped by the polish step.
const POLISH_TRACE: f64 = 1e-3;
const POLISH_BUDGET: usize = 20_000;

/// Measurement: one PSD operator per outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    dim: usize,
    operators: Vec<HermitianMatrix>,
}

impl Povm {
    /// Wraps operators of a common dimension. Use [`validate_povm`] to check
    /// positivity and completeness.
    pub fn new(operators: Vec<HermitianMatrix>) -> Result<Self> {
        let dim = operators
            .first()
            .ok_or_else(|| Error::InvalidInput("POVM has no operators".into()))?
            .dim();
        if let Some(op) = operators.iter().find(|op| op.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: op.dim(),
            });
        }
        Ok(Self { dim, operators })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[HermitianMatrix] {
        &self.operators
    }

    pub fn traces(&self) -> Vec<f64> {
        self.operators.iter().map(HermitianMatrix::trace).collect()
    }

    pub fn total(&self) -> HermitianMatrix {
        self.operators
            .iter()
            .fold(HermitianMatrix::zeros(self.dim), |acc, e| acc.add(e))
    }
}

/// Reasons `m` fails to be a POVM at tolerance `tol`; empty when valid.
pub fn povm_violations(m: &Povm, tol: f64) -> Vec<String> {
    let mut out = Vec::new();
    for (i, op) in m.operators().iter().enumerate() {
        match op.min_eigenvalue() {
            Ok(l) if l < -tol => out.push(format!("operator {i} has eigenvalue {l:e}")),
            Ok(_) => {}
            Err(e) => out.push(format!("operator {i}: {e}")),
        }
    }
    let dev = m
        .total()
        .max_abs_diff(&HermitianMatrix::identity(m.dim()));
    if dev > tol {
        out.push(format!("operators sum to identity only within {dev:e}"));
    }
    out
}

/// Positivity of each operator and completeness, both at `tol`.
pub fn validate_povm(m: &Povm, tol: f64) -> bool {
    povm_violations(m, tol).is_empty()
}

/// `sum_i p_i tr(sigma_i E_i)`.
pub fn success_probability(e: &Ensemble, m: &Povm) -> Result<f64> {
    if e.len() != m.len() || e.dim() != m.dim() {
        return Err(Error::InvalidInput(format!(
            "ensemble has {} states of dimension {}, POVM has {} outcomes of dimension {}",
            e.len(),
            e.dim(),
            m.len(),
            m.dim()
        )));
    }
    let p: f64 = (0..e.len())
        .map(|i| e.priors()[i] * e.states()[i].matrix().trace_product(&m.operators()[i]))
        .sum();
    Ok(clamp_unit(p))
}

fn clamp_unit(p: f64) -> f64 {
    if (-1e-12..0.0).contains(&p) {
        0.0
    } else if (1.0..=1.0 + 1e-12).contains(&p) {
        1.0
    } else {
        p
    }
}

/// Dual certificate derived from a candidate measurement.
#[derive(Clone, Debug)]
pub struct Certificate {
    /// `(Z + Z^dagger)/2` with `Z = sum_i s_i E_i`.
    pub gamma: HermitianMatrix,
    /// Smallest `c >= 0` with `gamma + c I >= s_i` for every `i`.
    pub shift: f64,
    /// `tr(gamma) + d c`, an upper bound on the optimal success probability.
    pub upper_bound: f64,
}

/// Builds the dual certificate from `m`. `gamma + shift I` dominates every
/// weighted state, so its trace bounds every POVM's success probability.
pub fn certificate(e: &Ensemble, m: &Povm) -> Result<Certificate> {
    certificate_from(&e.weighted_all(), m.operators())
}

fn certificate_from(weighted: &[HermitianMatrix], ops: &[HermitianMatrix]) -> Result<Certificate> {
    let d = weighted[0].dim();
    let mut z = crate::hermitian::ComplexMatrix::zeros(d);
    for (s, op) in weighted.iter().zip(ops) {
        z = &z + &(s.as_matrix() * op.as_matrix());
    }
    let gamma = HermitianMatrix::hermitian_part(&z);
    let mut shift = 0.0_f64;
    for s in weighted {
        let l = eig_hermitian(&gamma.sub(s))?;
        shift = shift.max(-l.values[d - 1]);
    }
    let upper_bound = gamma.trace() + d as f64 * shift;
    Ok(Certificate {
        gamma,
        shift,
        upper_bound,
    })
}

/// Solver configuration.
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Required certified gap.
    pub tol: f64,
    pub max_iter: usize,
    /// Iterations between certificate evaluations.
    pub check_every: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            check_every: 10,
        }
    }
}

/// A measurement together with its certified optimality gap.
#[derive(Clone, Debug, Serialize)]
pub struct SolveResult {
    #[serde(skip)]
    pub povm: Povm,
    pub p_success: f64,
    pub upper_bound: f64,
    pub gap: f64,
    pub iterations: usize,
}

/// Step-by-step access to the fixed-point iteration.
#[derive(Clone, Debug)]
pub struct FixedPoint {
    weighted: Vec<HermitianMatrix>,
    ops: Vec<HermitianMatrix>,
    iterations: usize,
}

impl FixedPoint {
    /// Starts from the PGM, mixed with `I/N` when the average state is singular.
    pub fn new(e: &Ensemble) -> Result<Self> {
        let weighted = e.weighted_all();
        let mut ops = pgm(e)?.operators;
        if psd_rank(&e.average(), DEFAULT_RANK_TOL)? < e.dim() {
            let flat = HermitianMatrix::identity(e.dim()).scale(START_MIX / e.len() as f64);
            for op in &mut ops {
                *op = op.scale(1.0 - START_MIX).add(&flat);
            }
        }
        Ok(Self {
            weighted,
            ops,
            iterations: 0,
        })
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Current operators. They sum to the projector onto the range of `L`,
    /// which may be smaller than the full space.
    pub fn operators(&self) -> &[HermitianMatrix] {
        &self.ops
    }

    pub fn p_success(&self) -> f64 {
        clamp_unit(
            self.weighted
                .iter()
                .zip(&self.ops)
                .map(|(s, op)| s.trace_product(op))
                .sum(),
        )
    }

    /// One application of the map.
    pub fn step(&mut self) -> Result<()> {
        let blocks: Vec<HermitianMatrix> = self
            .weighted
            .iter()
            .zip(&self.ops)
            .map(|(s, op)| s.sandwich(op))
            .collect();
        let lambda = blocks
            .iter()
            .fold(HermitianMatrix::zeros(self.weighted[0].dim()), |acc, b| acc.add(b));
        let r = pinv_sqrt(&lambda, ITER_RANK_TOL)?;
        self.ops = blocks.iter().map(|b| r.sandwich(b)).collect();
        self.iterations += 1;
        Ok(())
    }

    /// Completes the iterate to a POVM: the part of the identity outside the
    /// range of `L` is handed out in proportion to the operator traces, so
    /// operators that have vanished stay vanished.
    pub fn povm(&self) -> Povm {
        let d = self.weighted[0].dim();
        let total = self
            .ops
            .iter()
            .fold(HermitianMatrix::zeros(d), |acc, op| acc.add(op));
        let rest = HermitianMatrix::identity(d).sub(&total);
        let traces: Vec<f64> = self.ops.iter().map(|op| op.trace().max(0.0)).collect();
        let mass: f64 = traces.iter().sum();
        let n = self.ops.len() as f64;
        let ops = self
            .ops
            .iter()
            .zip(&traces)
            .map(|(op, t)| {
                let w = if mass > 0.0 { t / mass } else { 1.0 / n };
                op.add(&rest.scale(w))
            })
            .collect();
        Povm { dim: d, operators: ops }
    }

    /// Completed POVM with its certificate.
    pub fn result(&self) -> Result<SolveResult> {
        let povm = self.povm();
        let p_success = clamp_unit(
            self.weighted
                .iter()
                .zip(povm.operators())
                .map(|(s, op)| s.trace_product(op))
                .sum(),
        );
        let cert = certificate_from(&self.weighted, povm.operators())?;
        let upper_bound = cert.upper_bound.max(p_success);
        Ok(SolveResult {
            povm,
            p_success,
            upper_bound,
            gap: upper_bound - p_success,
            iterations: self.iterations,
        })
    }
}

/// Optimal POVM with gap at most `tol`, or `NotConverged` carrying the best
/// certified result after `max_iter` iterations.
pub fn solve_optimal(e: &Ensemble, tol: f64, max_iter: usize) -> Result<SolveResult> {
    solve_with(
        e,
        &SolveOptions {
            tol,
            max_iter,
            ..SolveOptions::default()
        },
    )
}

pub fn solve_with(e: &Ensemble, opts: &SolveOptions) -> Result<SolveResult> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol = {} must be positive", opts.tol)));
    }
    if e.len() <= 2 {
        return exact_small(e, opts.tol);
    }
    let mut fp = FixedPoint::new(e)?;
    let every = opts.check_every.max(1);
    let mut tried: Vec<IndexSet> = Vec::new();
    let mut extra = 0;
    loop {
        if fp.iterations() % every == 0 || fp.iterations() >= opts.max_iter {
            let res = fp.result()?;
            let converged = res.gap <= opts.tol;
            let keep: IndexSet = fp
                .operators()
                .iter()
                .enumerate()
                .filter(|(_, op)| op.trace() >= POLISH_TRACE)
                .map(|(i, _)| i)
                .collect();
            if !keep.is_empty() && keep.len() < e.len() && !tried.contains(&keep) {
                let budget = (opts.max_iter.saturating_sub(fp.iterations())).min(POLISH_BUDGET);
                let (polished, used) = polish(e, &keep, opts.tol, budget, opts.check_every)?;
                extra += used;
                tried.push(keep);
                if let Some(mut r) = polished {
                    r.iterations += fp.iterations() + extra - used;
                    return Ok(r);
                }
            }
            if converged {
                return Ok(SolveResult {
                    iterations: res.iterations + extra,
                    ..res
                });
            }
            if fp.iterations() >= opts.max_iter {
                return Err(Error::NotConverged(Box::new(SolveResult {
                    iterations: res.iterations + extra,
                    ..res
                })));
            }
        }
        fp.step()?;
    }
}

/// Optimum with the operators in `zero` forced to vanish: the problem on the
/// remaining states, embedded back. The certificate is for the restricted
/// problem, scaled by the retained prior mass.
pub fn solve_forced_zero(
    e: &Ensemble,
    zero: &IndexSet,
    tol: f64,
    max_iter: usize,
) -> Result<SolveResult> {
    let keep: IndexSet = e.all_indices().difference(zero).copied().collect();
    let (mass, sub) = e.restrict(&keep)?;
    let scaled = SolveOptions {
        tol: tol / mass.max(tol),
        max_iter,
        ..SolveOptions::default()
    };
    let embed = |r: SolveResult| -> Result<SolveResult> {
        let mut ops = vec![HermitianMatrix::zeros(e.dim()); e.len()];
        for (slot, op) in keep.iter().zip(r.povm.operators) {
            ops[*slot] = op;
        }
        Ok(SolveResult {
            povm: Povm::new(ops)?,
            p_success: mass * r.p_success,
            upper_bound: mass * r.upper_bound,
            gap: mass * r.gap,
            iterations: r.iterations,
        })
    };
    match solve_with(&sub, &scaled) {
        Ok(r) => embed(r),
        Err(Error::NotConverged(r)) => Err(Error::NotConverged(Box::new(embed(*r)?))),
        Err(err) => Err(err),
    }
}

/// One or two states: the trivial measurement or the Helstrom projector.
fn exact_small(e: &Ensemble, tol: f64) -> Result<SolveResult> {
    let povm = if e.len() == 1 {
        Povm::new(vec![HermitianMatrix::identity(e.dim())])?
    } else {
        helstrom_povm(e)?
    };
    let p_success = success_probability(e, &povm)?;
    let upper_bound = certificate(e, &povm)?.upper_bound.max(p_success);
    let res = SolveResult {
        povm,
        p_success,
        upper_bound,
        gap: upper_bound - p_success,
        iterations: 0,
    };
    if res.gap <= tol {
        Ok(res)
    } else {
        Err(Error::NotConverged(Box::new(res)))
    }
}

/// Solves the problem restricted to `keep`, embeds it with zero operators
/// elsewhere and keeps it only if the full-problem certificate closes.
/// Returns the accepted result (if any) and the iterations spent.
fn polish(
    e: &Ensemble,
    keep: &IndexSet,
    tol: f64,
    budget: usize,
    check_every: usize,
) -> Result<(Option<SolveResult>, usize)> {
    let (mass, sub) = e.restrict(keep)?;
    let opts = SolveOptions {
        tol: 0.5 * tol / mass.max(tol),
        max_iter: budget,
        check_every,
    };
    let (sub_povm, used) = match solve_with(&sub, &opts) {
        Ok(r) => (r.povm, r.iterations),
        Err(Error::NotConverged(r)) => return Ok((None, r.iterations)),
        Err(err) => return Err(err),
    };
    let mut ops = vec![HermitianMatrix::zeros(e.dim()); e.len()];
    for (slot, op) in keep.iter().zip(sub_povm.operators) {
        ops[*slot] = op;
    }
    let povm = Povm::new(ops)?;
    let p_success = success_probability(e, &povm)?;
    let upper_bound = certificate(e, &povm)?.upper_bound.max(p_success);
    let gap = upper_bound - p_success;
    let accepted = (gap <= tol).then_some(SolveResult {
        povm,
        p_success,
        upper_bound,
        gap,
        iterations: used,
    });
    Ok((accepted, used))
}
