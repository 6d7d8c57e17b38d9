//! Two-state discrimination: trace-norm formula, pure-state formula, solver.

use qsd::analytic::{helstrom_trace_norm, helstrom_two};
use qsd::sampling::{instance, random_pure_ensemble, RngSeed};
use qsd::solver::solve_optimal;

fn main() -> qsd::Result<()> {
    let mut rng = RngSeed(3).instance_rng(0);
    for d in [2, 3, 4] {
        let e = random_pure_ensemble(2, d, &mut rng);
        println!(
            "pure d = {d}: overlap formula {:.12}, trace norm {:.12}, solver {:.12}",
            helstrom_two(&e)?,
            helstrom_trace_norm(&e)?,
            solve_optimal(&e, 1e-10, 100_000)?.p_success
        );
        let m = instance(RngSeed(3), d as u64, 2, d);
        println!(
            "mixed d = {d}: trace norm {:.12}, solver {:.12}",
            helstrom_trace_norm(&m)?,
            solve_optimal(&m, 1e-10, 100_000)?.p_success
        );
    }
    Ok(())
}
