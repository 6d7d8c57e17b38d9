//! A qubit pure ensemble is fixed, up to unitaries and reflection, by its
//! weighted fidelities; so is its optimal success probability.

use qsd::ensemble::{ensemble_from_gram, fidelity_matrix, gram, qubit_ensemble_from_fidelity};
use qsd::sampling::{random_pure_ensemble, RngSeed};
use qsd::solver::solve_optimal;

fn main() -> qsd::Result<()> {
    let mut rng = RngSeed(11).instance_rng(0);
    for n in 2..=5 {
        let e = random_pure_ensemble(n, 2, &mut rng);
        let from_f = qubit_ensemble_from_fidelity(&fidelity_matrix(&e)?)?;
        let from_g = ensemble_from_gram(&gram(&e)?)?;
        let p = |x| solve_optimal(x, 1e-10, 100_000).map(|r| r.p_success);
        println!(
            "N = {n}: original {:.9}, from fidelities {:.9}, from Gram {:.9}",
            p(&e)?,
            p(&from_f)?,
            p(&from_g)?
        );
    }
    Ok(())
}
