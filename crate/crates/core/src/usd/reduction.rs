//! Reduction of a two-state discrimination problem to real 2-vectors in the
//! sum–difference basis `|±⟩ ∝ |g₁⟩ ± |g₂⟩`. Used by tests to certify that a
//! discriminated pair obeys `tan(φ/2) = y_in/x_in ≥ s_min/s_max`.

use super::types::LossyOperator;
use crate::error::{Error, Result};
use crate::numkernel::{inner, norm, normalized, C64};

#[derive(Clone, Debug)]
pub(crate) struct PlaneReduction {
    /// `⟨+|ĝ₁⟩`, real after the phase alignment.
    pub x_in: f64,
    /// `⟨−|ĝ₁⟩`.
    pub y_in: f64,
    /// `x_in·‖K|+⟩‖`.
    pub x_out: f64,
    /// `y_in·‖K|−⟩‖`.
    pub y_out: f64,
    /// `2·atan(y_in/x_in)`.
    pub input_angle: f64,
    /// `Im⟨K+|K−⟩`; orthogonal outputs force it to zero.
    pub cross_imag: f64,
    /// Imaginary residue of the coordinates, zero up to roundoff.
    pub imag_residual: f64,
}

pub(crate) fn reduce_to_2d(k: &LossyOperator, g1: &[C64], g2: &[C64]) -> Result<PlaneReduction> {
    let a = normalized(g1).ok_or(Error::ZeroState { index: 0 })?;
    let b = normalized(g2).ok_or(Error::ZeroState { index: 1 })?;
    // rotate g₂ so that ⟨g₂|g₁⟩ > 0
    let c = inner(&b, &a);
    let phase = if c.norm() > 0.0 {
        c / c.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let b: Vec<C64> = b.iter().map(|z| z * phase).collect();

    let plus: Vec<C64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
    let minus: Vec<C64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
    let plus = normalized(&plus).ok_or(Error::ZeroState { index: 0 })?;
    let minus = normalized(&minus).ok_or(Error::LinearlyDependent)?;

    let x = inner(&plus, &a);
    let y = inner(&minus, &a);
    let kp = k.matrix().mul_vec(&plus);
    let km = k.matrix().mul_vec(&minus);
    Ok(PlaneReduction {
        x_in: x.re,
        y_in: y.re,
        x_out: x.re * norm(&kp),
        y_out: y.re * norm(&km),
        input_angle: 2.0 * (y.re / x.re).atan(),
        cross_imag: inner(&kp, &km).im,
        imag_residual: x.im.abs().max(y.im.abs()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{random, ComplexMatrix};
    use crate::usd::angle_between;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn optimal_pair_saturates_the_bound() {
        let k = LossyOperator::new(ComplexMatrix::from_diag(&[0.5, 1.0])).unwrap();
        let p = crate::usd::optimal_pair(&k).unwrap();
        let r = reduce_to_2d(&k, &p.g_plus, &p.g_minus).unwrap();
        assert!(r.imag_residual < 1e-15);
        assert!((r.x_out - r.y_out).abs() < 1e-15);
        assert!(((r.input_angle / 2.0).tan() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn random_discriminated_pairs_reduce_consistently() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for n in 2..=5 {
            for _ in 0..20 {
                let k = LossyOperator::new(random::gaussian_matrix(&mut rng, n, n)).unwrap();
                let kinv = k.inverse_matrix().unwrap();
                let u = random::unitary(&mut rng, n);
                let g1 = kinv.mul_vec(&u.column(0));
                let g2: Vec<C64> = kinv
                    .mul_vec(&u.column(1))
                    .iter()
                    .map(|z| z * C64::new(0.3, -1.7))
                    .collect();
                let r = reduce_to_2d(&k, &g1, &g2).unwrap();
                let s = k.singular_values();
                let ratio = s[n - 1] / s[0];
                assert!(r.imag_residual < 1e-12);
                assert!(r.cross_imag.abs() < 1e-9 * r.x_out.abs().max(1.0));
                assert!((r.x_out - r.y_out).abs() < 1e-9 * r.x_out.abs());
                assert!(r.y_in / r.x_in >= ratio - 1e-12);
                assert!(r.x_out / r.x_in >= s[n - 1] - 1e-12 && r.x_out / r.x_in <= s[0] + 1e-12);
                let direct = angle_between(&g1, &g2).unwrap();
                assert!((r.input_angle - direct).abs() < 1e-9);
            }
        }
    }
}
