//! Subset/superset support brackets on random qubit triples.
//!
//! cargo run --release --example support_coincidence [instances] [seed]

use qsd::sampling::RngSeed;
use qsd::support::coincidence_experiment;

fn main() -> qsd::Result<()> {
    let mut args = std::env::args().skip(1);
    let instances = args.next().and_then(|s| s.parse().ok()).unwrap_or(2000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let stats = coincidence_experiment(instances, 3, 2, RngSeed(seed))?;
    print!("{}", stats.to_csv());
    println!(
        "instances {}, ambiguous {}, not converged {}, violations {}",
        stats.instances,
        stats.ambiguous,
        stats.not_converged,
        stats.violations.len()
    );
    Ok(())
}
