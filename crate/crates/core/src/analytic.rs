//! Closed-form measurements and success probabilities.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::ensemble::{check_mirror_params, Ensemble, IndexSet};
use crate::error::{Error, Result};
use crate::hermitian::{
    eig_hermitian, pinv_sqrt, range_projector, trace_norm, HermitianMatrix, DEFAULT_RANK_TOL,
};
use crate::solver::{success_probability, Povm};

/// Pretty good measurement `E_i = S^{-1/2} s_i S^{-1/2}`. The identity outside
/// the range of `S` is shared equally so the result is a complete POVM.
pub fn pgm(e: &Ensemble) -> Result<Povm> {
    let s = e.average();
    let r = pinv_sqrt(&s, DEFAULT_RANK_TOL)?;
    let kernel = HermitianMatrix::identity(e.dim()).sub(&range_projector(&s, DEFAULT_RANK_TOL)?);
    let share = kernel.scale(1.0 / e.len() as f64);
    Povm::new(
        (0..e.len())
            .map(|i| r.sandwich(&e.weighted(i)).add(&share))
            .collect(),
    )
}

pub fn pgm_success(e: &Ensemble) -> Result<f64> {
    success_probability(e, &pgm(e)?)
}

/// Success of the PGM built from the states in `support` only, with
/// `S_+ = sum_{i in support} s_i`; outcomes outside `support` never fire.
pub fn pgm_plus_success(e: &Ensemble, support: &IndexSet) -> Result<f64> {
    check_support(e, support)?;
    let s = e.average_over(support.iter().copied());
    let r = pinv_sqrt(&s, DEFAULT_RANK_TOL)?;
    Ok(support
        .iter()
        .map(|&i| {
            let w = e.weighted(i);
            w.trace_product(&r.sandwich(&w))
        })
        .sum())
}

pub(crate) fn check_support(e: &Ensemble, support: &IndexSet) -> Result<()> {
    if support.is_empty() {
        return Err(Error::InvalidSupport("empty index set".into()));
    }
    if let Some(&i) = support.iter().find(|&&i| i >= e.len()) {
        return Err(Error::InvalidSupport(format!(
            "index {i} out of range for {} states",
            e.len()
        )));
    }
    Ok(())
}

/// Optimal two-outcome measurement: the projector onto the positive part of
/// `s_1 - s_2`. The null space of the difference goes to the likelier state.
pub fn helstrom_povm(e: &Ensemble) -> Result<Povm> {
    check_pair(e)?;
    let diff = e.weighted(0).sub(&e.weighted(1));
    let es = eig_hermitian(&diff)?;
    let cutoff = 1e-14 * es.max_abs();
    let tie = if e.priors()[0] >= e.priors()[1] { 1.0 } else { 0.0 };
    let first = es.map(|l| {
        if l > cutoff {
            1.0
        } else if l < -cutoff {
            0.0
        } else {
            tie
        }
    });
    let second = HermitianMatrix::identity(e.dim()).sub(&first);
    Povm::new(vec![first, second])
}

fn check_pair(e: &Ensemble) -> Result<()> {
    if e.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "Helstrom measurement needs 2 states, got {}",
            e.len()
        )));
    }
    Ok(())
}

/// `(1 + sqrt(1 - 4 p_1 p_2 |<a|b>|^2)) / 2` for two pure states.
pub fn helstrom_two(e: &Ensemble) -> Result<f64> {
    check_pair(e)?;
    let kets = e.pure_kets()?;
    let ov: f64 = kets[0]
        .iter()
        .zip(&kets[1])
        .map(|(a, b)| a.conj() * b)
        .sum::<crate::hermitian::C64>()
        .norm_sqr();
    let (p1, p2) = (e.priors()[0], e.priors()[1]);
    Ok(0.5 * (1.0 + (1.0 - 4.0 * p1 * p2 * ov).max(0.0).sqrt()))
}

/// `(1 + ||s_1 - s_2||_1) / 2`, valid for mixed states.
pub fn helstrom_trace_norm(e: &Ensemble) -> Result<f64> {
    check_pair(e)?;
    let diff = e.weighted(0).sub(&e.weighted(1));
    Ok(0.5 * (1.0 + trace_norm(diff.as_matrix())?))
}

/// Optimal success for the equidistant triple: `(2 sqrt3 / 9) sqrt(1 - a^2) + 1/3`.
pub fn equidistant_popt(alpha: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&alpha) {
        return Err(Error::InvalidAlpha(alpha));
    }
    Ok(2.0 * 3f64.sqrt() / 9.0 * (1.0 - alpha * alpha).sqrt() + 1.0 / 3.0)
}

/// PGM success for the mirror-symmetric triple.
pub fn mirror_pgm_success(p: f64, theta: f64) -> Result<f64> {
    check_mirror_params(p, theta)?;
    let (s, c) = theta.sin_cos();
    let a = 1.0 - 2.0 * p * s * s;
    let (first, second) = if a > 0.0 {
        (p.sqrt() * c * c / a.sqrt(), (1.0 - 2.0 * p).powi(2) / a)
    } else {
        // p = 1/2, theta = pi/2: the third prior and the cosine both vanish.
        (0.0, 0.0)
    };
    Ok(2.0 * p * (first + s * FRAC_1_SQRT_2).powi(2) + second)
}

/// Smallest `p` for which the optimal measurement ignores the third state.
pub fn mirror_region_threshold(theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    1.0 / (2.0 + c * (c + s))
}

/// Whether the optimal measurement for the mirror triple has support `{0, 1}`.
pub fn mirror_region_condition(p: f64, theta: f64) -> bool {
    p >= mirror_region_threshold(theta)
}

/// `p (cos t + sin t)^2`, the PGM success on the pair `{0, 1}`.
pub fn mirror_pgm_plus_success(p: f64, theta: f64) -> Result<f64> {
    check_mirror_params(p, theta)?;
    Ok(p * (theta.cos() + theta.sin()).powi(2))
}

/// `p (1 + sin 2t)`, the optimum inside the region.
pub fn mirror_popt_in_region(p: f64, theta: f64) -> Result<f64> {
    check_mirror_params(p, theta)?;
    if !mirror_region_condition(p, theta) {
        return Err(Error::NotApplicable(format!(
            "p = {p} below threshold {} at theta = {theta}",
            mirror_region_threshold(theta)
        )));
    }
    Ok(p * (1.0 + (2.0 * theta).sin()))
}
