#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use usdkit::numkernel::{random, ComplexMatrix, C64};
use usdkit::{LossyOperator, StateSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn operator(m: ComplexMatrix) -> LossyOperator {
    LossyOperator::new(m).expect("square matrix")
}

pub fn diag(d: &[f64]) -> LossyOperator {
    operator(ComplexMatrix::from_diag(d))
}

/// Gaussian operator rescaled to be passive.
pub fn random_operator(r: &mut ChaCha8Rng, n: usize) -> LossyOperator {
    let m = random::gaussian_matrix(r, n, n);
    let s = usdkit::numkernel::spectral_norm(&m).unwrap();
    operator(m.scale_real(1.0 / s))
}

/// Inputs `K⁻¹·U` for random unitary `U`: `K` maps them onto orthonormal outputs.
pub fn pulled_back_set(r: &mut ChaCha8Rng, k: &LossyOperator, count: usize) -> StateSet {
    let u = random::unitary(r, k.dim());
    let g = &k.inverse_matrix().unwrap() * &u.column_range(0, count);
    StateSet::new(g, None).unwrap()
}

pub fn columns(v: &[Vec<C64>]) -> ComplexMatrix {
    ComplexMatrix::from_columns(v)
}
