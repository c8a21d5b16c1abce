//! Seeded random matrices for property tests, the acceptance suite and demos.

use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::{inner, norm, ComplexMatrix, C64};
use super::svd;

/// Entries with independent standard normal real and imaginary parts.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    ComplexMatrix::new(rows, cols, data).expect("gaussian entries are finite")
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    (0..dim)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

/// Haar-distributed unitary: Gram–Schmidt QR of a Gaussian matrix with the
/// diagonal of R made positive.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        let g = gaussian_matrix(rng, n, n);
        let mut q: Vec<Vec<C64>> = Vec::with_capacity(n);
        let mut ok = true;
        for col in g.columns() {
            let mut w = col;
            for _ in 0..2 {
                for b in &q {
                    let c = inner(b, &w);
                    for (wi, bi) in w.iter_mut().zip(b) {
                        *wi -= c * bi;
                    }
                }
            }
            let n = norm(&w);
            if n < 1e-8 {
                ok = false;
                break;
            }
            q.push(w.iter().map(|z| z / n).collect());
        }
        if ok {
            return ComplexMatrix::from_columns(&q);
        }
    }
}

/// `U_L·diag(s)·U_R†` with the prescribed singular values.
pub fn with_singular_values<R: Rng + ?Sized>(rng: &mut R, s: &[f64]) -> ComplexMatrix {
    let n = s.len();
    let ul = unitary(rng, n);
    let ur = unitary(rng, n);
    &(&ul * &ComplexMatrix::from_diag(s)) * &ur.adjoint()
}

/// Gaussian matrix rescaled so its spectral norm is `target` (≤ 1 gives a passive operator).
pub fn passive<R: Rng + ?Sized>(rng: &mut R, n: usize, target: f64) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    let s = svd(&g).expect("gaussian svd").s_max();
    g.scale_real(target / s)
}

/// Random density matrix `A·A† / tr(A·A†)`.
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let a = gaussian_matrix(rng, n, n);
    let rho = &a * &a.adjoint();
    let tr = rho.trace().re;
    let rho = rho.scale_real(1.0 / tr);
    // exact hermiticity
    (&rho + &rho.adjoint()).scale_real(0.5)
}

/// Uniform phases in `[0, 2π)`.
pub fn phases<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| rng.random::<f64>() * std::f64::consts::TAU)
        .collect()
}
