//! Equidistant qubit triple: closed-form optimum against the certified solver.
//!
//! cargo run --release --example equidistant_triple [steps]

use qsd::analytic::{equidistant_popt, pgm_success};
use qsd::ensemble::equidistant_triple;
use qsd::solver::solve_optimal;

fn main() -> qsd::Result<()> {
    let steps: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(11);
    println!("{:>6} {:>12} {:>12} {:>12} {:>10}", "alpha", "closed", "solver", "pgm", "gap");
    for k in 0..steps {
        let alpha = 0.5 + 0.5 * k as f64 / (steps.max(2) - 1) as f64;
        let e = equidistant_triple(alpha)?;
        let r = solve_optimal(&e, 1e-10, 100_000)?;
        println!(
            "{alpha:6.3} {:12.9} {:12.9} {:12.9} {:10.1e}",
            equidistant_popt(alpha)?,
            r.p_success,
            pgm_success(&e)?,
            r.gap
        );
    }
    Ok(())
}
