//! Looks for equiprobable ensembles where pruning to the support loosens the
//! PGM bound; any hit is written out as an ensemble file.
//!
//! cargo run --release --example pgm_pruning_probe [instances] [out-dir]

use qsd::experiments::pgm_pruning_probe;
use qsd::sampling::RngSeed;
use qsd::solver::SolveOptions;

fn main() -> qsd::Result<()> {
    let mut args = std::env::args().skip(1);
    let instances = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let out = args.next().unwrap_or_else(|| "pgm_probe_counterexamples".into());
    let configs = [(3, 2), (3, 3), (4, 2), (4, 3)];
    let rep = pgm_pruning_probe(instances, &configs, RngSeed(17), 1e-12, &SolveOptions::default())?;
    println!(
        "checked {}, proper support {}, skipped {}, counterexamples {}",
        rep.checked,
        rep.proper_support,
        rep.skipped,
        rep.counterexamples.len()
    );
    if !rep.counterexamples.is_empty() {
        std::fs::create_dir_all(&out).map_err(|e| qsd::Error::InvalidInput(e.to_string()))?;
        for c in &rep.counterexamples {
            let path = format!("{out}/instance_{}.toml", c.index);
            std::fs::write(&path, &c.ensemble_toml).map_err(|e| qsd::Error::InvalidInput(e.to_string()))?;
            println!("  {path}: lhs {:.3e} > rhs {:.3e}, support {:?}", c.lhs, c.rhs, c.support);
        }
    }
    Ok(())
}
