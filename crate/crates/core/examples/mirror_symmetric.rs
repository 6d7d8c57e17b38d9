//! Mirror-symmetric triple: where the optimum ignores the third state, and
//! whether pruning tightens the PGM bound there.

use std::f64::consts::FRAC_PI_4;

use qsd::analytic::{mirror_pgm_plus_success, mirror_pgm_success, mirror_popt_in_region, mirror_region_condition, mirror_region_threshold};
use qsd::bounds::{mirror_bound_naive, mirror_bound_pruned};
use qsd::ensemble::mirror_symmetric;
use qsd::solver::solve_optimal;
use qsd::support::{extract_support, DEFAULT_SUPPORT_TOL};

fn main() -> qsd::Result<()> {
    for (p, theta) in [(1.0 / 3.0, FRAC_PI_4), (0.45, 0.3), (0.2, 1.2), (0.3, 0.2)] {
        let e = mirror_symmetric(p, theta)?;
        let r = solve_optimal(&e, 1e-10, 100_000)?;
        println!("p = {p:.4}, theta = {theta:.4} (threshold p > {:.4})", mirror_region_threshold(theta));
        println!("  region condition  {}", mirror_region_condition(p, theta));
        println!("  solver support    {:?}", extract_support(&r.povm, DEFAULT_SUPPORT_TOL));
        println!("  P_opt solver      {:.10}", r.p_success);
        if let Ok(v) = mirror_popt_in_region(p, theta) {
            println!("  P_opt closed      {v:.10}");
        }
        println!("  P_pgm / P_pgm+    {:.10} / {:.10}", mirror_pgm_success(p, theta)?, mirror_pgm_plus_success(p, theta)?);
        if let (Ok(a), Ok(b)) = (mirror_bound_naive(p, theta), mirror_bound_pruned(p, theta)) {
            println!("  PGM bound naive / pruned  {a:.6} / {b:.6}");
        }
    }
    Ok(())
}
