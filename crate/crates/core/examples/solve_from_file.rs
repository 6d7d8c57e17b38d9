//! Reads an ensemble file, solves it and checks the dual certificate.
//!
//! cargo run --release --example solve_from_file [path]

use qsd::io::read_ensemble;
use qsd::solver::{certificate, solve_optimal, validate_povm};

fn main() -> qsd::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/dominated.toml").into());
    let e = read_ensemble(&path)?;
    let r = solve_optimal(&e, 1e-10, 100_000)?;
    let cert = certificate(&e, &r.povm)?;
    println!("{path}: N = {}, d = {}", e.len(), e.dim());
    println!("P_opt       {:.12}", r.p_success);
    println!("upper bound {:.12} (shift {:.1e})", cert.upper_bound, cert.shift);
    println!("valid POVM  {}", validate_povm(&r.povm, 1e-9));
    for (i, t) in r.povm.traces().iter().enumerate() {
        println!("tr E_{i} = {t:.3e}");
    }
    Ok(())
}
