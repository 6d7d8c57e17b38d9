//! Third state swept over the Bloch sphere against |+> and |+i>.
//!
//! cargo run --release --example qubit_triple_sweep [grid]

use qsd::experiments::{fig3, Fig3Tag};
use qsd::solver::SolveOptions;

fn main() -> qsd::Result<()> {
    let grid = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(21);
    let rows = fig3(grid, &SolveOptions::default())?;
    for tag in [Fig3Tag::G, Fig3Tag::B, Fig3Tag::R] {
        let of: Vec<_> = rows.iter().filter(|r| r.tag == tag).collect();
        println!(
            "{}: {:4} directions, PGM threshold met in {}",
            tag.as_str(),
            of.len(),
            of.iter().filter(|r| r.pgm_condition).count()
        );
    }
    Ok(())
}
