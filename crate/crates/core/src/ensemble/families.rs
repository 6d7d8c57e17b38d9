//! Named ensemble families with closed-form behaviour.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::hermitian::C64;

use super::Ensemble;

/// `cos(theta)` of the relative phase that makes `|<psi_2|psi_3>| = alpha` in
/// [`equidistant_triple`]; algebraically `(2a^4 - 3a^2 + 1) / (2a^2 (a^2 - 1))`,
/// evaluated in the cancelled form `1 - 1 / (2a^2)`, which is also defined at `a = 1`.
pub fn equidistant_phase_cos(alpha: f64) -> f64 {
    (1.0 - 1.0 / (2.0 * alpha * alpha)).clamp(-1.0, 1.0)
}

/// Three equiprobable qubit states with every pairwise fidelity equal to `alpha`:
/// `|0>`, `a|0> + sqrt(1-a^2)|1>` and `a|0> + e^{i theta} sqrt(1-a^2)|1>`.
pub fn equidistant_triple(alpha: f64) -> Result<Ensemble> {
    if !(0.5..=1.0).contains(&alpha) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let cos_t = equidistant_phase_cos(alpha);
    let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
    let b = (1.0 - alpha * alpha).max(0.0).sqrt();
    let kets = [
        vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        vec![C64::new(alpha, 0.0), C64::new(b, 0.0)],
        vec![C64::new(alpha, 0.0), C64::new(cos_t * b, sin_t * b)],
    ];
    Ensemble::from_kets(vec![1.0 / 3.0; 3], &kets)
}

/// Mirror-symmetric qubit triple: priors `(p, p, 1-2p)` and states
/// `cos t|0> + sin t|1>`, `cos t|0> - sin t|1>`, `|0>`.
pub fn mirror_symmetric(p: f64, theta: f64) -> Result<Ensemble> {
    check_mirror_params(p, theta)?;
    let (s, c) = theta.sin_cos();
    let kets = [
        vec![C64::new(c, 0.0), C64::new(s, 0.0)],
        vec![C64::new(c, 0.0), C64::new(-s, 0.0)],
        vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
    ];
    Ensemble::from_kets(vec![p, p, 1.0 - 2.0 * p], &kets)
}

pub(crate) fn check_mirror_params(p: f64, theta: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1/2]")));
    }
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(Error::InvalidParameter(format!(
            "theta = {theta} outside [0, pi/2]"
        )));
    }
    Ok(())
}
