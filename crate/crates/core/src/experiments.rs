//! Data behind the figures, and the randomized probe of the equiprobable
//! PGM pruning inequality. Rows come out in index order regardless of how
//! the work was scheduled.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{equidistant_popt, mirror_region_condition, pgm_success};
use crate::bounds::{equiprobable_pgm_inequality, mirror_improvement_slack, qubit_triple_pgm_threshold};
use crate::ensemble::{
    bloch_from_state, equidistant_triple, BlochVector, DensityMatrix, Ensemble, IndexSet,
};
use crate::error::{Error, Result};
use crate::hermitian::C64;
use crate::io::{csv, ensemble_to_toml};
use crate::sampling::{instance, RngSeed};
use crate::solver::{solve_with, SolveOptions, SolveResult};
use crate::support::{
    coincidence_records, extract_support, support_is_ambiguous, CoincidenceStats, InstanceRecord,
    SupportOptions, DEFAULT_SUPPORT_TOL,
};

/// Solves, keeping a non-converged result with a flag instead of failing.
fn solve_lenient(e: &Ensemble, opts: &SolveOptions) -> Result<(SolveResult, bool)> {
    match solve_with(e, opts) {
        Ok(r) => Ok((r, true)),
        Err(Error::NotConverged(r)) => Ok((*r, false)),
        Err(err) => Err(err),
    }
}

fn fmt_set(s: &IndexSet) -> String {
    s.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

#[derive(Clone, Debug, Serialize)]
pub struct Fig1Row {
    pub alpha: f64,
    pub closed_form: f64,
    pub solver: f64,
    pub gap: f64,
    pub converged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Fig1 {
    pub rows: Vec<Fig1Row>,
    pub max_discrepancy: f64,
}

impl Fig1 {
    pub fn converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }

    pub fn to_csv(&self) -> String {
        csv(
            &["alpha", "closed_form", "solver", "discrepancy", "gap"],
            self.rows.iter().map(|r| {
                vec![
                    r.alpha.to_string(),
                    r.closed_form.to_string(),
                    r.solver.to_string(),
                    (r.solver - r.closed_form).abs().to_string(),
                    r.gap.to_string(),
                ]
            }),
        )
    }
}

/// Optimal success of the equidistant triple: closed form against the solver
/// at `steps` evenly spaced values of alpha.
pub fn fig1(alpha_min: f64, alpha_max: f64, steps: usize, opts: &SolveOptions) -> Result<Fig1> {
    if !(0.5..=1.0).contains(&alpha_min) || !(0.5..=1.0).contains(&alpha_max) || alpha_min > alpha_max {
        return Err(Error::InvalidParameter(format!(
            "alpha range [{alpha_min}, {alpha_max}] must lie in [1/2, 1]"
        )));
    }
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    let alphas: Vec<f64> = (0..steps)
        .map(|k| {
            if steps == 1 {
                alpha_min
            } else {
                alpha_min + (alpha_max - alpha_min) * k as f64 / (steps - 1) as f64
            }
        })
        .collect();
    let rows = alphas
        .par_iter()
        .map(|&alpha| {
            let (r, converged) = solve_lenient(&equidistant_triple(alpha)?, opts)?;
            Ok(Fig1Row {
                alpha,
                closed_form: equidistant_popt(alpha)?,
                solver: r.p_success,
                gap: r.gap,
                converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_discrepancy = rows
        .iter()
        .map(|r| (r.solver - r.closed_form).abs())
        .fold(0.0, f64::max);
    Ok(Fig1 {
        rows,
        max_discrepancy,
    })
}

/// Classification of a mirror-triple parameter point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Fig2Class {
    /// Support is `{0, 1}` and pruning tightens the PGM bound.
    Black,
    /// Support is `{0, 1}` but pruning loosens the PGM bound.
    Red,
    /// Outside the support region.
    Neither,
}

impl Fig2Class {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Black => "black",
            Self::Red => "red",
            Self::Neither => "neither",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Fig2Row {
    pub theta: f64,
    pub p: f64,
    pub in_region: bool,
    /// `naive - pruned` PGM bound; absent if the naive bound is undefined.
    pub slack: Option<f64>,
    pub class: Fig2Class,
}

impl Fig2Row {
    pub fn pruning_tightens(&self) -> Option<bool> {
        self.slack.map(|s| s >= 0.0)
    }
}

/// The `grid x grid` mesh `theta in [0, pi/2]`, `p in [0, 1/2]` for the mirror triple.
pub fn fig2(grid: usize) -> Result<Vec<Fig2Row>> {
    if grid < 2 {
        return Err(Error::InvalidParameter("grid must be at least 2".into()));
    }
    let g = (grid - 1) as f64;
    let rows = (0..grid * grid)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / grid, k % grid);
            let theta = FRAC_PI_2 * i as f64 / g;
            let p = 0.5 * j as f64 / g;
            let in_region = mirror_region_condition(p, theta);
            let slack = mirror_improvement_slack(p, theta).ok();
            let class = match (in_region, slack.map(|s| s >= 0.0)) {
                (false, _) => Fig2Class::Neither,
                (true, Some(true)) => Fig2Class::Black,
                (true, _) => Fig2Class::Red,
            };
            Fig2Row {
                theta,
                p,
                in_region,
                slack,
                class,
            }
        })
        .collect();
    Ok(rows)
}

pub fn fig2_csv(rows: &[Fig2Row]) -> String {
    csv(
        &["theta", "p", "in_region", "pruning_tightens", "slack", "class"],
        rows.iter().map(|r| {
            vec![
                r.theta.to_string(),
                r.p.to_string(),
                r.in_region.to_string(),
                r.pruning_tightens().map(|b| b.to_string()).unwrap_or_default(),
                r.slack.map(|s| s.to_string()).unwrap_or_default(),
                r.class.as_str().to_string(),
            ]
        }),
    )
}

/// Region of the third state's Bloch direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Fig3Tag {
    /// The optimal measurement ignores the third state.
    G,
    /// Not G, but the first two states are the least overlapping pair.
    B,
    R,
}

impl Fig3Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::G => "G",
            Self::B => "B",
            Self::R => "R",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Fig3Row {
    pub polar: f64,
    pub azimuth: f64,
    pub bloch: [f64; 3],
    pub tag: Fig3Tag,
    pub p_opt: f64,
    pub p_pgm: f64,
    /// PGM success clears the threshold above which pruning tightens the bound.
    pub pgm_condition: bool,
    pub converged: bool,
}

/// Equiprobable `|+>`, `|+i>`, `psi_3`.
pub fn fig3_ensemble(polar: f64, azimuth: f64) -> Ensemble {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let kets = [
        vec![C64::new(s, 0.0), C64::new(s, 0.0)],
        vec![C64::new(s, 0.0), C64::new(0.0, s)],
        vec![
            C64::new((polar / 2.0).cos(), 0.0),
            C64::from_polar((polar / 2.0).sin(), azimuth),
        ],
    ];
    Ensemble::from_kets(vec![1.0 / 3.0; 3], &kets).expect("valid kets")
}

/// Sweep of the third state over a `grid x grid` polar/azimuth mesh
/// (polar `i pi / (grid-1)`, azimuth `2 pi k / grid`).
pub fn fig3(grid: usize, opts: &SolveOptions) -> Result<Vec<Fig3Row>> {
    if grid < 2 {
        return Err(Error::InvalidParameter("grid must be at least 2".into()));
    }
    let threshold = qubit_triple_pgm_threshold(0.5);
    let pair: IndexSet = [0, 1].into_iter().collect();
    (0..grid * grid)
        .into_par_iter()
        .map(|k| {
            let polar = PI * (k / grid) as f64 / (grid - 1) as f64;
            let azimuth = 2.0 * PI * (k % grid) as f64 / grid as f64;
            let e = fig3_ensemble(polar, azimuth);
            let r3 = bloch_from_state(&e.states()[2]);
            let (res, converged) = solve_lenient(&e, opts)?;
            let p_pgm = pgm_success(&e)?;
            let tag = if extract_support(&res.povm, DEFAULT_SUPPORT_TOL) == pair {
                Fig3Tag::G
            } else if r3.0[0] >= 0.0 && r3.0[1] >= 0.0 {
                // Overlap^2 = (1 + r.s)/2 and r1.r2 = 0, so {0,1} is the least
                // overlapping pair iff both dots are nonnegative.
                Fig3Tag::B
            } else {
                Fig3Tag::R
            };
            Ok(Fig3Row {
                polar,
                azimuth,
                bloch: [r3.0[0], r3.0[1], r3.0[2]],
                tag,
                p_opt: res.p_success,
                p_pgm,
                pgm_condition: p_pgm >= threshold,
                converged,
            })
        })
        .collect()
}

pub fn fig3_csv(rows: &[Fig3Row]) -> String {
    csv(
        &["polar", "azimuth", "x", "y", "z", "tag", "p_opt", "p_pgm", "pgm_condition"],
        rows.iter().map(|r| {
            vec![
                r.polar.to_string(),
                r.azimuth.to_string(),
                r.bloch[0].to_string(),
                r.bloch[1].to_string(),
                r.bloch[2].to_string(),
                r.tag.as_str().to_string(),
                r.p_opt.to_string(),
                r.p_pgm.to_string(),
                r.pgm_condition.to_string(),
            ]
        }),
    )
}

/// Result of the sampled support experiment.
#[derive(Clone, Debug)]
pub struct Fig4 {
    pub stats: CoincidenceStats,
    pub records: Vec<InstanceRecord>,
}

/// Support brackets on `instances` qubit triples with HS states and flat
/// Dirichlet priors.
pub fn fig4(instances: usize, seed: RngSeed, opts: &SupportOptions) -> Result<Fig4> {
    let records = coincidence_records(instances, 3, 2, seed, opts)?;
    Ok(Fig4 {
        stats: CoincidenceStats::from_records(&records),
        records,
    })
}

/// Per-instance log: sets are `;`-separated index lists.
pub fn fig4_log_csv(records: &[InstanceRecord]) -> String {
    csv(
        &["index", "priors", "subset", "exact", "superset", "coincide", "ambiguous", "gap"],
        records.iter().map(|r| {
            let s = &r.estimate;
            vec![
                r.index.to_string(),
                r.priors.iter().map(f64::to_string).collect::<Vec<_>>().join(";"),
                fmt_set(&s.subset),
                s.exact.as_ref().map(fmt_set).unwrap_or_default(),
                fmt_set(&s.superset),
                s.coincide.to_string(),
                s.ambiguous.to_string(),
                s.gap.map(|g| g.to_string()).unwrap_or_default(),
            ]
        }),
    )
}

/// Counterexample to the equiprobable pruning inequality, with the
/// ensemble to reproduce it.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub index: u64,
    pub n: usize,
    pub d: usize,
    pub support: IndexSet,
    pub lhs: f64,
    pub rhs: f64,
    pub ensemble_toml: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ProbeReport {
    pub checked: usize,
    /// Instances whose support was a proper subset, where the inequality has content.
    pub proper_support: usize,
    /// Instances skipped because the solve did not converge or the support was ambiguous.
    pub skipped: usize,
    pub counterexamples: Vec<Counterexample>,
}

/// Equiprobable `n`-state instance `index`: HS states with flat priors.
pub fn equiprobable_instance(seed: RngSeed, index: u64, n: usize, d: usize) -> Ensemble {
    let e = instance(seed, index, n, d);
    Ensemble::new(vec![1.0 / n as f64; n], e.states().to_vec()).expect("valid ensemble")
}

/// Tests `(|I+| - 1)(P_pgm+ - 1/N) <= (N - 1)(P_pgm - 1/N)` with the solver's
/// support on `instances` random equiprobable ensembles, cycling through
/// `configs` of `(N, d)` by index.
pub fn pgm_pruning_probe(
    instances: usize,
    configs: &[(usize, usize)],
    seed: RngSeed,
    slack: f64,
    opts: &SolveOptions,
) -> Result<ProbeReport> {
    if configs.is_empty() {
        return Err(Error::InvalidParameter("no (N, d) configurations".into()));
    }
    let outcomes = (0..instances as u64)
        .into_par_iter()
        .map(|index| {
            let (n, d) = configs[index as usize % configs.len()];
            let e = equiprobable_instance(seed, index, n, d);
            let (res, converged) = solve_lenient(&e, opts)?;
            if !converged || support_is_ambiguous(&res.povm) {
                return Ok(None);
            }
            let support = extract_support(&res.povm, DEFAULT_SUPPORT_TOL);
            let check = equiprobable_pgm_inequality(&e, &support)?;
            let bad = (!check.holds(slack)).then(|| Counterexample {
                index,
                n,
                d,
                support: support.clone(),
                lhs: check.lhs,
                rhs: check.rhs,
                ensemble_toml: ensemble_to_toml(&e),
            });
            Ok(Some((support.len() < n, bad)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = ProbeReport::default();
    for o in outcomes {
        match o {
            None => report.skipped += 1,
            Some((proper, bad)) => {
                report.checked += 1;
                report.proper_support += usize::from(proper);
                report.counterexamples.extend(bad);
            }
        }
    }
    Ok(report)
}

/// Bloch vector of the third state in [`fig3_ensemble`].
pub fn fig3_bloch(polar: f64, azimuth: f64) -> BlochVector {
    bloch_from_state(&DensityMatrix::from_ket(&[
        C64::new((polar / 2.0).cos(), 0.0),
        C64::from_polar((polar / 2.0).sin(), azimuth),
    ])
    .expect("unit ket"))
}
