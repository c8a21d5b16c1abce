//! Dense complex linear algebra: SVD, Hermitian eigensolver, and the
//! derived operations (spectral norm, inverse, PSD square root, Gram).

mod eig;
mod matrix;
pub mod random;
mod svd;

pub use eig::{ensure_hermitian, hermitian_eig, HermitianEig, HERMITIAN_TOL};
pub use matrix::{inner, norm, normalized, ComplexMatrix, C64};
pub use svd::{svd, SvdResult, MAX_SWEEPS};

use crate::error::{Error, Result};

/// Inverse is refused when `s_min ≤ SINGULARITY_TOL · s_max`.
pub const SINGULARITY_TOL: f64 = 1e-12;

/// Singular values within `DEGENERACY_TOL · s_max` of each other are degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Eigenvalues below `-PSD_TOL` make a matrix non-PSD; those above are clamped to 0.
pub const PSD_TOL: f64 = 1e-8;

pub fn spectral_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(svd(m)?.s_max())
}

/// Inverse through the SVD, `V·diag(1/s)·U†`.
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "inverse needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    inverse_from_svd(&svd(m)?)
}

pub(crate) fn inverse_from_svd(r: &SvdResult) -> Result<ComplexMatrix> {
    let s_max = r.s_max();
    let s_min = r.s_min();
    if s_max == 0.0 || s_min <= SINGULARITY_TOL * s_max {
        let ratio = if s_max == 0.0 { 0.0 } else { s_min / s_max };
        return Err(Error::Singular { ratio });
    }
    let n = r.singular_values.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &s) in r.singular_values.iter().enumerate() {
        for i in 0..n {
            let v = r.right_vectors[(i, k)] / s;
            for j in 0..n {
                out[(i, j)] += v * r.left_vectors[(j, k)].conj();
            }
        }
    }
    Ok(out)
}

/// Hermitian PSD square root; eigenvalues in `[-PSD_TOL, 0)` are clamped.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = hermitian_eig(m)?;
    if let Some(&lowest) = e.eigenvalues.last() {
        if lowest < -PSD_TOL {
            return Err(Error::NegativeEigenvalue { value: lowest });
        }
    }
    Ok(e.map_spectrum(|x| x.max(0.0).sqrt()))
}

/// `G†G`, the matrix of pairwise overlaps `⟨g_i|g_j⟩` of the columns.
pub fn gram(states: &ComplexMatrix) -> ComplexMatrix {
    &states.adjoint() * states
}

/// Number of singular values above `tol` (absolute).
pub fn numerical_rank(m: &ComplexMatrix, tol: f64) -> Result<usize> {
    Ok(svd(m)?.singular_values.iter().filter(|&&s| s > tol).count())
}

/// Extends an orthonormal list of `dim`-vectors to a full orthonormal basis
/// using Gram–Schmidt on the standard basis.
pub fn orthonormal_completion(basis: &[Vec<C64>], dim: usize) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = basis.to_vec();
    for k in 0..dim {
        if out.len() == dim {
            break;
        }
        let mut w = vec![C64::new(0.0, 0.0); dim];
        w[k] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in &out {
                let c = inner(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let n = norm(&w);
        if n > 1e-6 {
            out.push(w.iter().map(|z| z / n).collect());
        }
    }
    out
}
