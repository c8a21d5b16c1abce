//! One-sided (Hestenes) Jacobi SVD for small dense complex matrices.
//!
//! Column pairs of the working matrix are rotated until every pair is
//! orthogonal to working precision; column norms are then the singular
//! values. The right singular vectors are the accumulated rotations.

use num_complex::Complex64;

use super::matrix::{inner, norm, ComplexMatrix, C64};
use super::orthonormal_completion;
use crate::error::{Error, Result};

/// Sweep cap before `NoConvergence` is reported.
pub const MAX_SWEEPS: usize = 80;

/// Pairwise orthogonality target, relative to the column norms.
const ORTHO_TOL: f64 = 1e-15;

/// Columns whose singular value falls below this fraction of `s_max` get
/// their left vector re-orthonormalized, since `a_j / s_j` carries little
/// information there.
const SMALL_SINGULAR: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SvdResult {
    /// Descending, non-negative; length `min(rows, cols)`.
    pub singular_values: Vec<f64>,
    /// `rows × rows` unitary, columns `|u_i⟩`.
    pub left_vectors: ComplexMatrix,
    /// `cols × cols` unitary, columns `|v_i⟩`.
    pub right_vectors: ComplexMatrix,
}

impl SvdResult {
    pub fn s_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn s_min(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    pub fn left(&self, i: usize) -> Vec<C64> {
        self.left_vectors.column(i)
    }

    pub fn right(&self, i: usize) -> Vec<C64> {
        self.right_vectors.column(i)
    }

    /// `Σ s_i |u_i⟩⟨v_i|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let rows = self.left_vectors.rows();
        let cols = self.right_vectors.rows();
        let mut out = ComplexMatrix::zeros(rows, cols);
        for (k, &s) in self.singular_values.iter().enumerate() {
            for i in 0..rows {
                let u = self.left_vectors[(i, k)] * s;
                for j in 0..cols {
                    out[(i, j)] += u * self.right_vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

pub fn svd(m: &ComplexMatrix) -> Result<SvdResult> {
    if m.data()
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::NonFinite);
    }
    let mut result = if m.rows() >= m.cols() {
        tall_svd(m)?
    } else {
        let t = tall_svd(&m.adjoint())?;
        SvdResult {
            singular_values: t.singular_values,
            left_vectors: t.right_vectors,
            right_vectors: t.left_vectors,
        }
    };
    fix_gauge(&mut result);
    Ok(result)
}

fn tall_svd(m: &ComplexMatrix) -> Result<SvdResult> {
    let rows = m.rows();
    let n = m.cols();
    let mut a = m.columns();
    let mut v = ComplexMatrix::identity(n).columns();

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm_sqr(&a[p]);
                let beta = norm_sqr(&a[q]);
                let gamma = inner(&a[p], &a[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= ORTHO_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, p, q, phase, c, s);
                rotate(&mut v, p, q, phase, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = a.iter().map(|c| norm(c)).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let s_max = singular_values.first().copied().unwrap_or(0.0);

    let mut left: Vec<Vec<C64>> = Vec::with_capacity(rows);
    for (k, &j) in order.iter().enumerate() {
        let s = singular_values[k];
        let candidate: Vec<C64> = if s > 0.0 {
            a[j].iter().map(|z| z / s).collect()
        } else {
            vec![C64::new(0.0, 0.0); rows]
        };
        if s > SMALL_SINGULAR * s_max && s > 0.0 {
            left.push(candidate);
        } else {
            left.push(reorthonormalize(&left, candidate, rows));
        }
    }
    let left = orthonormal_completion(&left, rows);

    let right: Vec<Vec<C64>> = order.iter().map(|&j| v[j].clone()).collect();
    Ok(SvdResult {
        singular_values,
        left_vectors: ComplexMatrix::from_columns(&left),
        right_vectors: ComplexMatrix::from_columns(&right),
    })
}

fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Rephases column `q` by `phase`, then applies the real rotation
/// `(p, q) ← (c·p − s·q, s·p + c·q)`.
fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, phase: Complex64, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let cp = &mut lo[p];
    let cq = &mut hi[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yq = *y * phase;
        let xp = *x;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}

/// Projects `candidate` off `basis` and normalizes; falls back to standard
/// basis vectors when nothing usable is left.
fn reorthonormalize(basis: &[Vec<C64>], candidate: Vec<C64>, dim: usize) -> Vec<C64> {
    let project = |mut w: Vec<C64>| {
        for _ in 0..2 {
            for b in basis {
                let c = inner(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        w
    };
    let w = project(candidate);
    let n = norm(&w);
    if n > 0.5 {
        return w.iter().map(|z| z / n).collect();
    }
    for k in 0..dim {
        let mut e = vec![C64::new(0.0, 0.0); dim];
        e[k] = C64::new(1.0, 0.0);
        let w = project(e);
        let n = norm(&w);
        if n > 0.5 {
            return w.iter().map(|z| z / n).collect();
        }
    }
    unreachable!("basis already spans the space")
}

/// Makes the largest-modulus entry of each right singular vector real and
/// positive, rephasing the paired left vector identically.
fn fix_gauge(r: &mut SvdResult) {
    let k = r.singular_values.len();
    let n = r.right_vectors.rows();
    for j in 0..r.right_vectors.cols() {
        let col = r.right_vectors.column(j);
        let Some(phase) = pivot_phase(&col) else {
            continue;
        };
        let rot = phase.conj();
        for i in 0..n {
            r.right_vectors[(i, j)] *= rot;
        }
        if j < k {
            for i in 0..r.left_vectors.rows() {
                r.left_vectors[(i, j)] *= rot;
            }
        }
    }
}

/// Unit phase of the first entry whose modulus is maximal (to 1e-12).
pub(crate) fn pivot_phase(v: &[C64]) -> Option<C64> {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return None;
    }
    let pivot = v.iter().find(|z| z.norm() >= max - 1e-12 * max)?;
    Some(pivot / pivot.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_has_unit_singular_values() {
        let r = svd(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(r.singular_values, vec![1.0, 1.0]);
        assert!(r.left_vectors.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        assert!(r.right_vectors.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn diagonal_values_are_sorted_and_vectors_permuted() {
        let r = svd(&ComplexMatrix::from_diag(&[0.5, 1.0])).unwrap();
        assert_eq!(r.singular_values, vec![1.0, 0.5]);
        let perm = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!(r.right_vectors.max_abs_diff(&perm) < 1e-15);
        assert!(r.left_vectors.max_abs_diff(&perm) < 1e-15);
    }

    #[test]
    fn nilpotent_has_zero_singular_value() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let r = svd(&m).unwrap();
        assert_eq!(r.singular_values, vec![1.0, 0.0]);
        assert!(r.left_vectors.is_unitary(1e-14));
        assert!(r.right_vectors.is_unitary(1e-14));
        assert!(r.reconstruct().max_abs_diff(&m) < 1e-15);
    }

    #[test]
    fn rectangular_inputs_both_orientations() {
        let m = ComplexMatrix::new(
            2,
            3,
            vec![
                c(1.0, 0.5),
                c(0.0, 1.0),
                c(2.0, 0.0),
                c(-1.0, 0.0),
                c(0.3, -0.2),
                c(0.0, 0.0),
            ],
        )
        .unwrap();
        for input in [m.clone(), m.adjoint()] {
            let r = svd(&input).unwrap();
            assert_eq!(r.singular_values.len(), 2);
            assert!(r.left_vectors.is_unitary(1e-13));
            assert!(r.right_vectors.is_unitary(1e-13));
            assert!(r.reconstruct().max_abs_diff(&input) < 1e-13);
        }
    }

    #[test]
    fn gauge_makes_pivot_real_positive() {
        let m = ComplexMatrix::new(
            2,
            2,
            vec![c(0.0, 1.0), c(0.2, 0.0), c(0.1, -0.3), c(0.0, -2.0)],
        )
        .unwrap();
        let r = svd(&m).unwrap();
        for j in 0..2 {
            let v = r.right(j);
            let p = pivot_phase(&v).unwrap();
            assert!((p - c(1.0, 0.0)).norm() < 1e-14);
        }
        assert!(r.reconstruct().max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn duplicate_columns_rank_one() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]);
        let r = svd(&m).unwrap();
        assert!((r.singular_values[0] - 2f64.sqrt()).abs() < 1e-15);
        assert!(r.singular_values[1] < 1e-15);
        assert!(r.left_vectors.is_unitary(1e-13));
    }

    #[test]
    fn zero_matrix() {
        let r = svd(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(r.singular_values, vec![0.0; 3]);
        assert!(r.left_vectors.is_unitary(1e-15));
    }
}
