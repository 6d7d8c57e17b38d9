//! Reference values, some computed independently at high precision.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use qsd::analytic::{equidistant_popt, mirror_pgm_success, mirror_popt_in_region, mirror_region_threshold, pgm_success};
use qsd::bounds::{mirror_improvement_slack, qubit_triple_pgm_threshold};
use qsd::ensemble::{equidistant_triple, mirror_symmetric};
use qsd::solver::solve_optimal;

#[test]
fn equidistant_values() {
    assert!((equidistant_popt(0.5).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    assert!((equidistant_popt(1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    // 50-digit evaluation of (2 sqrt3 / 9) sqrt(1/2) + 1/3.
    let want = 0.605_498_860_309_242;
    assert!((equidistant_popt(FRAC_1_SQRT_2).unwrap() - want).abs() < 1e-14);
    let r = solve_optimal(&equidistant_triple(FRAC_1_SQRT_2).unwrap(), 1e-10, 100_000).unwrap();
    assert!((r.p_success - want).abs() < 1e-9);
}

#[test]
fn mirror_third_quarter_pi() {
    let (p, theta) = (1.0 / 3.0, FRAC_PI_4);
    // High-precision PGM value at this point.
    let want = 0.652_368_927_062_182_5;
    assert!((mirror_pgm_success(p, theta).unwrap() - want).abs() < 1e-14);
    let e = mirror_symmetric(p, theta).unwrap();
    assert!((pgm_success(&e).unwrap() - want).abs() < 1e-12);
    // Region boundary passes through this point, where P_opt = 2/3.
    assert!((mirror_region_threshold(theta) - p).abs() < 1e-15);
    assert!((mirror_popt_in_region(p, theta).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    assert!(mirror_improvement_slack(p, theta).unwrap() >= -1e-12);
}

#[test]
fn qubit_triple_threshold_for_orthogonal_bloch_pair() {
    // |+> and |+i> have |<.|.>|^2 = 1/2.
    assert!((qubit_triple_pgm_threshold(0.5) - (FRAC_1_SQRT_2 + 2.0) / 6.0).abs() < 1e-15);
}
