//! Cyclic complex Jacobi eigensolver for Hermitian matrices.

use super::matrix::{ComplexMatrix, C64};
use super::svd::pivot_phase;
use crate::error::{Error, Result};

/// Relative hermiticity tolerance, `‖M − M†‖_F ≤ tol · max(1, ‖M‖_F)`.
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 80;

#[derive(Clone, Debug)]
pub struct HermitianEig {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `i` pairs with `eigenvalues[i]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    /// `P·diag(f(λ))·P†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let a = self.eigenvectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += a * self.eigenvectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

pub fn ensure_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "Hermitian matrix must be square, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let residual = m.hermiticity_residual();
    if residual > HERMITIAN_TOL * m.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    ensure_hermitian(m)?;
    let n = m.rows();
    // Symmetrize so the rotations see an exactly Hermitian input.
    let mut a = (m + &m.adjoint()).scale_real(0.5);
    let mut p = ComplexMatrix::identity(n);

    let scale = a.frobenius_norm();
    let mut converged = n < 2 || scale == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-16 * scale {
            converged = true;
            break;
        }
        let mut rotated = false;
        for r in 0..n {
            for q in r + 1..n {
                let h = a[(r, q)];
                let g = h.norm();
                if g <= 1e-300 {
                    continue;
                }
                let app = a[(r, r)].re;
                let aqq = a[(q, q)].re;
                if g <= 1e-18 * (app.abs() + aqq.abs()) {
                    a[(r, q)] = C64::new(0.0, 0.0);
                    a[(q, r)] = C64::new(0.0, 0.0);
                    continue;
                }
                rotated = true;
                // J = diag(1, e^{-iφ}) · [[c, s], [-s, c]] in the (r, q) plane
                let e = (h / g).conj();
                let zeta = (aqq - app) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let j_rr = C64::new(c, 0.0);
                let j_rq = C64::new(s, 0.0);
                let j_qr = e * (-s);
                let j_qq = e * c;
                // A ← A·J
                for i in 0..n {
                    let ar = a[(i, r)];
                    let aq = a[(i, q)];
                    a[(i, r)] = ar * j_rr + aq * j_qr;
                    a[(i, q)] = ar * j_rq + aq * j_qq;
                }
                // A ← J†·A
                for k in 0..n {
                    let ar = a[(r, k)];
                    let aq = a[(q, k)];
                    a[(r, k)] = j_rr.conj() * ar + j_qr.conj() * aq;
                    a[(q, k)] = j_rq.conj() * ar + j_qq.conj() * aq;
                }
                a[(r, q)] = C64::new(0.0, 0.0);
                a[(q, r)] = C64::new(0.0, 0.0);
                a[(r, r)] = C64::new(a[(r, r)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for i in 0..n {
                    let pr = p[(i, r)];
                    let pq = p[(i, q)];
                    p[(i, r)] = pr * j_rr + pq * j_qr;
                    p[(i, q)] = pr * j_rq + pq * j_qq;
                }
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let columns: Vec<Vec<C64>> = order
        .iter()
        .map(|&i| {
            let v = p.column(i);
            match pivot_phase(&v) {
                Some(ph) => v.iter().map(|z| z * ph.conj()).collect(),
                None => v,
            }
        })
        .collect();
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors: ComplexMatrix::from_columns(&columns),
    })
}
