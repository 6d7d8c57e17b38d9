//! Every bound on a few random instances, next to the certified optimum.

use qsd::bounds::bounds_report;
use qsd::sampling::{instance, RngSeed};
use qsd::solver::solve_optimal;
use qsd::support::{extract_support, DEFAULT_SUPPORT_TOL};

fn main() -> qsd::Result<()> {
    for (index, (n, d)) in [(3, 2), (4, 2), (3, 3), (5, 3)].into_iter().enumerate() {
        let e = instance(RngSeed(7), index as u64, n, d);
        let r = solve_optimal(&e, 1e-10, 100_000)?;
        let support = extract_support(&r.povm, DEFAULT_SUPPORT_TOL);
        println!("N = {n}, d = {d}: P_opt = {:.8}, support {support:?}", r.p_success);
        for (name, b) in bounds_report(&e, Some(&support)).entries() {
            match b.value {
                Some(v) => println!("  {name:<18} {v:.8}"),
                None => println!("  {name:<18} -  ({})", b.note.as_deref().unwrap_or("")),
            }
        }
    }
    Ok(())
}
