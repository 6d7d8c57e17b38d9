//! Random problem instances.
//!
//! Every instance is a pure function of `(seed, index)`: the generator for
//! instance `i` is ChaCha8 keyed by the seed with stream number `i`, so
//! workers can pull instances in any order and get identical results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::ensemble::{DensityMatrix, Ensemble};
use crate::hermitian::{ComplexMatrix, HermitianMatrix, C64};

/// 64-bit experiment seed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Independent generator for instance `index`.
    pub fn instance_rng(self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(index);
        rng
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Ginibre matrix of iid standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, |_, _| complex_gaussian(rng))
}

/// Hilbert-Schmidt random density matrix `G G^dagger / tr(G G^dagger)`.
pub fn sample_hs_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    assert!(d >= 1, "dimension must be positive");
    let g = ginibre(d, rng);
    let w = HermitianMatrix::hermitian_part(&(&g * &g.adjoint()));
    let tr = w.trace();
    DensityMatrix::new_unchecked(w.scale(1.0 / tr))
}

/// Uniform draw from the probability simplex (Dirichlet with unit parameters),
/// as normalized iid standard exponentials.
pub fn sample_dirichlet_uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    assert!(n >= 1, "need at least one coordinate");
    if n == 1 {
        return vec![1.0];
    }
    let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    draws.iter().map(|x| x / total).collect()
}

/// Dirichlet priors with iid Hilbert-Schmidt states.
pub fn sample_instance<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Ensemble {
    let priors = sample_dirichlet_uniform(n, rng);
    let states = (0..n).map(|_| sample_hs_density(d, rng)).collect();
    Ensemble::new(priors, states).expect("sampled ensemble is valid")
}

/// Instance `index` of the stream identified by `seed`.
pub fn instance(seed: RngSeed, index: u64, n: usize, d: usize) -> Ensemble {
    sample_instance(n, d, &mut seed.instance_rng(index))
}

/// Haar-random unit ket.
pub fn random_ket<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Haar-random unitary from Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(d, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    for k in 0..d {
        let mut v = g.column(k);
        for q in &cols {
            let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(q) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(d, |j, k| cols[k][j])
}

/// Dirichlet priors with Haar-random pure states.
pub fn random_pure_ensemble<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Ensemble {
    let priors = sample_dirichlet_uniform(n, rng);
    let kets: Vec<Vec<C64>> = (0..n).map(|_| random_ket(d, rng)).collect();
    Ensemble::from_kets(priors, &kets).expect("sampled ensemble is valid")
}
