//! Shared helpers for unit tests.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ensemble::DensityMatrix;
use crate::hermitian::HermitianMatrix;
pub use crate::sampling::{random_ket, random_pure_ensemble, random_unitary};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_hermitian(d: usize, r: &mut ChaCha8Rng) -> HermitianMatrix {
    HermitianMatrix::hermitian_part(&crate::sampling::ginibre(d, r))
}

pub fn random_psd(d: usize, r: &mut ChaCha8Rng) -> HermitianMatrix {
    let g = crate::sampling::ginibre(d, r);
    HermitianMatrix::hermitian_part(&(&g * &g.adjoint()))
}

pub fn random_density(d: usize, r: &mut ChaCha8Rng) -> DensityMatrix {
    crate::sampling::sample_hs_density(d, r)
}
