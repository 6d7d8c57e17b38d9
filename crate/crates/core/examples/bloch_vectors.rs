//! Generalized Bloch vectors: conversions and the fidelity relation.

use qsd::ensemble::{bloch_from_state, bloch_inner_from_fidelity, reflect_qubit, state_from_bloch, BlochVector, DensityMatrix};
use qsd::hermitian::C64;
use qsd::sampling::{random_ket, RngSeed};

fn main() -> qsd::Result<()> {
    let plus_i = DensityMatrix::from_ket(&[C64::new(1.0, 0.0), C64::new(0.0, 1.0)])?;
    println!("|+i> -> {:?}", bloch_from_state(&plus_i).0);
    println!("reflected -> {:?}", bloch_from_state(&reflect_qubit(&plus_i)?).0);

    let mut rng = RngSeed(5).instance_rng(0);
    for d in [2, 3, 4] {
        let (a, b) = (random_ket(d, &mut rng), random_ket(d, &mut rng));
        let f: f64 = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum::<C64>().norm();
        let (ra, rb) = (
            bloch_from_state(&DensityMatrix::from_ket(&a)?),
            bloch_from_state(&DensityMatrix::from_ket(&b)?),
        );
        println!(
            "d = {d}: |r| = {:.12}, r.s = {:.12}, from fidelity {:.12}",
            ra.norm(),
            ra.dot(&rb),
            bloch_inner_from_fidelity(f.min(1.0), d)?
        );
    }
    let outside = state_from_bloch(&BlochVector(vec![0.0, 0.0, 1.2]), 2);
    println!("|r| = 1.2 in d = 2: {}", outside.unwrap_err());
    Ok(())
}
