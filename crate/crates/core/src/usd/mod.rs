//! Discrimination power of a lossy operator and synthesis of a
//! discriminating operator for a given state set.
//!
//! Everything input-independent about discrimination is a function of the
//! singular values of `K`. In particular the closest pair of inputs that `K`
//! maps to orthogonal outputs subtends `θ_best = 2·arctan(s_min/s_max)`.

#[cfg(test)]
mod reduction;
mod types;

pub use types::{LossyOperator, StateSet, DEFECT_FLOOR, PASSIVITY_TOL, PRIOR_SUM_TOL};

pub(crate) use types::validate_priors;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{
    gram, inner, inverse, normalized, spectral_norm, svd, ComplexMatrix, C64, DEGENERACY_TOL,
    SINGULARITY_TOL,
};

/// Output Gram off-diagonals (normalized) above this mean "not discriminated".
pub const DISCRIMINATION_TOL: f64 = 1e-8;

/// `|⟨ĝ_k|v_i⟩|` above this counts as populated.
pub const POPULATION_TOL: f64 = 1e-9;

/// Default relative tolerance for [`are_usd_equivalent`].
pub const EQUIVALENCE_TOL: f64 = 1e-9;

/// Overlaps above this count as non-orthogonal when classifying a set.
pub const NON_ORTHOGONAL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub singular_values: Vec<f64>,
    pub spectral_norm: f64,
    pub passive: bool,
    pub invertible: bool,
    /// Set when `K` is singular: no pair of inputs is discriminated at a finite angle.
    pub non_discriminating: bool,
    pub best_angle_rad: f64,
    pub angle_lower_bound: Option<f64>,
    pub angle_upper_bound: Option<f64>,
    pub condition_product: Option<f64>,
}

pub fn analyze(k: &LossyOperator) -> AnalysisReport {
    let cond = k.condition_product();
    let (best, lower, upper) = match cond {
        Some(c) => {
            let x = 1.0 / c;
            (2.0 * x.atan(), Some(1.5 * x), Some(2.0 * x))
        }
        None => (0.0, None, None),
    };
    AnalysisReport {
        singular_values: k.singular_values().to_vec(),
        spectral_norm: k.spectral_norm(),
        passive: k.is_passive(),
        invertible: k.is_invertible(),
        non_discriminating: cond.is_none(),
        best_angle_rad: best,
        angle_lower_bound: lower,
        angle_upper_bound: upper,
        condition_product: cond,
    }
}

/// Smallest angle between two inputs that `K` maps to orthogonal outputs.
pub fn best_angle(k: &LossyOperator) -> Result<f64> {
    if !k.is_invertible() {
        return Err(Error::NonInvertible);
    }
    let s = k.singular_values();
    Ok(2.0 * (s[s.len() - 1] / s[0]).atan())
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimalPair {
    pub g_plus: Vec<C64>,
    pub g_minus: Vec<C64>,
    pub out_plus: Vec<C64>,
    pub out_minus: Vec<C64>,
    pub angle_rad: f64,
    pub detection_probability: f64,
    /// `s_min = s_max`: every orthogonal pair is optimal and the extremal
    /// singular vectors are returned.
    pub degenerate: bool,
}

/// The pair `|g±⟩ = s_min|v_max⟩ ± s_max|v_min⟩` whose images
/// `s_min·s_max(|u_max⟩ ± |u_min⟩)` are orthogonal.
pub fn optimal_pair(k: &LossyOperator) -> Result<OptimalPair> {
    let n = k.dim();
    if n < 2 {
        return Err(Error::DimensionMismatch(
            "a pair needs dimension at least 2".into(),
        ));
    }
    if !k.is_invertible() {
        return Err(Error::NonInvertible);
    }
    let svd = k.svd();
    let s_max = svd.s_max();
    let s_min = svd.s_min();
    let v_max = svd.right(0);
    let v_min = svd.right(n - 1);
    let degenerate = s_max - s_min <= DEGENERACY_TOL * s_max;

    let (g_plus, g_minus): (Vec<C64>, Vec<C64>) = if degenerate {
        (v_max, v_min)
    } else {
        (
            v_max
                .iter()
                .zip(&v_min)
                .map(|(a, b)| a * s_min + b * s_max)
                .collect(),
            v_max
                .iter()
                .zip(&v_min)
                .map(|(a, b)| a * s_min - b * s_max)
                .collect(),
        )
    };
    let out_plus = k.matrix().mul_vec(&g_plus);
    let out_minus = k.matrix().mul_vec(&g_minus);
    let overlap = unit_overlap(&g_plus, &g_minus).expect("optimal pair vectors are nonzero");
    Ok(OptimalPair {
        angle_rad: 2.0 * (s_min / s_max).atan(),
        detection_probability: 1.0 - overlap,
        g_plus,
        g_minus,
        out_plus,
        out_minus,
        degenerate,
    })
}

/// A synthesized discriminator and the weights it actually realizes.
#[derive(Clone, Debug)]
pub struct Discriminator {
    pub operator: LossyOperator,
    /// Effective `Λ_ii`: `K|g_i⟩ = weights[i]·|ψ_i⟩`.
    pub weights: Vec<f64>,
    /// Columns `|ψ_i⟩`.
    pub output_basis: ComplexMatrix,
}

/// Builds `K = U_out·Λ·G⁻¹`, mapping each `|g_i⟩` to `Λ_ii·|ψ_i⟩`.
///
/// Without `weights` the uniform choice `Λ = I/‖G⁻¹‖` is used. Given weights
/// are relative: the operator is scaled down by one global factor when
/// `‖Λ·G⁻¹‖ > 1` so that it stays passive. Fewer states than dimensions are
/// handled by completing `G` with an orthonormal basis of the orthogonal
/// complement of its span.
pub fn synthesize_discriminator(
    states: &StateSet,
    weights: Option<&[f64]>,
    output_basis: Option<&ComplexMatrix>,
) -> Result<Discriminator> {
    let n = states.dim();
    let m = states.len();
    if let Some(w) = weights {
        if w.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                got: w.len(),
            });
        }
        if w.iter().any(|&x| !x.is_finite() || x <= 0.0 || x > 1.0) {
            return Err(Error::InvalidWeights("weights must lie in (0, 1]".into()));
        }
    }
    let u_out = match output_basis {
        Some(u) => {
            if u.rows() != n || u.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "output basis must be {n}x{n}, got {}x{}",
                    u.rows(),
                    u.cols()
                )));
            }
            u.ensure_unitary(1e-9)?;
            u.clone()
        }
        None => ComplexMatrix::identity(n),
    };

    let g = states.matrix();
    let g_svd = svd(g)?;
    if g_svd.s_max() == 0.0 || g_svd.s_min() <= SINGULARITY_TOL * g_svd.s_max() {
        return Err(Error::LinearlyDependent);
    }
    let mut completed = g.clone();
    if m < n {
        completed = ComplexMatrix::zeros(n, n);
        completed.set_block(0, 0, g);
        completed.set_block(0, m, &g_svd.left_vectors.column_range(m, n));
    }
    let g_inv = inverse(&completed).map_err(|_| Error::LinearlyDependent)?;

    let lambda: Vec<f64> = match weights {
        Some(w) => {
            let fill = w.iter().copied().fold(f64::INFINITY, f64::min);
            w.iter()
                .copied()
                .chain(std::iter::repeat_n(fill, n - m))
                .collect()
        }
        None => vec![1.0; n],
    };
    let core = &ComplexMatrix::from_diag(&lambda) * &g_inv;
    let core_norm = spectral_norm(&core)?;
    let scale = match weights {
        Some(_) => (1.0 / core_norm).min(1.0),
        None => 1.0 / core_norm,
    };
    let k = (&u_out * &core).scale_real(scale);
    let operator = LossyOperator::new(k)?;
    Ok(Discriminator {
        operator,
        weights: lambda[..m].iter().map(|l| l * scale).collect(),
        output_basis: u_out.column_range(0, m),
    })
}

/// Same singular values within `tol · s_max` (default [`EQUIVALENCE_TOL`]).
pub fn are_usd_equivalent(a: &LossyOperator, b: &LossyOperator, tol: Option<f64>) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operators have dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let tol = tol.unwrap_or(EQUIVALENCE_TOL);
    let scale = a
        .spectral_norm()
        .max(b.spectral_norm())
        .max(f64::MIN_POSITIVE);
    Ok(a.singular_values()
        .iter()
        .zip(b.singular_values())
        .all(|(x, y)| (x - y).abs() <= tol * scale))
}

#[derive(Clone, Debug, Serialize)]
pub struct PopulationReport {
    /// `overlaps[k][i] = |⟨ĝ_k|v_i⟩|` for normalized inputs.
    pub overlaps: Vec<Vec<f64>>,
    pub fully_populated: bool,
    pub min_pairwise_angle_rad: f64,
    pub best_angle_rad: f64,
    /// Every pair of inputs has overlap above [`NON_ORTHOGONAL_TOL`].
    pub completely_non_orthogonal: bool,
    /// `min_pairwise_angle_rad − best_angle_rad`.
    pub angle_gap_rad: f64,
    /// For completely non-orthogonal sets of more than two states, whether
    /// the minimum angle strictly exceeds the two-state optimum.
    pub strict_inequality_holds: Option<bool>,
}

/// How the inputs populate the right singular vectors of a `K` that discriminates them.
pub fn population_report(k: &LossyOperator, states: &StateSet) -> Result<PopulationReport> {
    if states.dim() != k.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states live in dimension {}, operator in {}",
            states.dim(),
            k.dim()
        )));
    }
    ensure_discriminates(k, states, DISCRIMINATION_TOL)?;
    let unit = states.normalized_states()?;
    let v = &k.svd().right_vectors;
    let overlaps: Vec<Vec<f64>> = unit
        .iter()
        .map(|g| {
            (0..k.dim())
                .map(|i| inner(g, &v.column(i)).norm())
                .collect()
        })
        .collect();
    let fully_populated = overlaps.iter().flatten().all(|&x| x > POPULATION_TOL);
    let min_angle = min_pairwise_angle(states)?;
    let best = best_angle(k).unwrap_or(0.0);
    let completely_non_orthogonal = is_completely_non_orthogonal(&unit);
    let strict = (completely_non_orthogonal && states.len() > 2).then_some(min_angle > best);
    Ok(PopulationReport {
        overlaps,
        fully_populated,
        min_pairwise_angle_rad: min_angle,
        best_angle_rad: best,
        completely_non_orthogonal,
        angle_gap_rad: min_angle - best,
        strict_inequality_holds: strict,
    })
}

/// `min_{i<j} arccos |⟨ĝ_i|ĝ_j⟩|`.
pub fn min_pairwise_angle(states: &StateSet) -> Result<f64> {
    if states.len() < 2 {
        return Err(Error::DimensionMismatch(
            "need at least two states for a pairwise angle".into(),
        ));
    }
    let unit = states.normalized_states()?;
    let mut min = f64::INFINITY;
    for i in 0..unit.len() {
        for j in i + 1..unit.len() {
            min = min.min(unit_angle(&unit[i], &unit[j]));
        }
    }
    Ok(min)
}

/// Angle `arccos |⟨â|b̂⟩|` between two nonzero vectors, or `None` if either is zero.
pub fn angle_between(a: &[C64], b: &[C64]) -> Option<f64> {
    Some(unit_angle(&normalized(a)?, &normalized(b)?))
}

/// `arccos |⟨a|b⟩|` for unit vectors, evaluated as `2·asin(‖a − e^{iφ}b‖/2)`
/// with the phase aligned, which keeps precision for nearly parallel vectors.
fn unit_angle(a: &[C64], b: &[C64]) -> f64 {
    let c = inner(a, b);
    let phase = if c.norm() > 0.0 {
        (c / c.norm()).conj()
    } else {
        C64::new(1.0, 0.0)
    };
    let d = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y * phase).norm_sqr())
        .sum::<f64>()
        .sqrt();
    2.0 * (d / 2.0).min(1.0).asin()
}

fn unit_overlap(a: &[C64], b: &[C64]) -> Option<f64> {
    let a = normalized(a)?;
    let b = normalized(b)?;
    Some(inner(&a, &b).norm().min(1.0))
}

fn is_completely_non_orthogonal(unit: &[Vec<C64>]) -> bool {
    (0..unit.len())
        .all(|i| (i + 1..unit.len()).all(|j| inner(&unit[i], &unit[j]).norm() > NON_ORTHOGONAL_TOL))
}

/// Largest normalized off-diagonal `|⟨h_i|h_j⟩|/(‖h_i‖‖h_j‖)` of the output
/// Gram matrix; infinite when some output vanishes.
pub fn discrimination_residual(k: &LossyOperator, states: &StateSet) -> Result<f64> {
    let out = k.apply(states)?;
    Ok(orthogonality_residual(&out))
}

/// Largest normalized off-diagonal of the Gram matrix of `columns`.
pub fn orthogonality_residual(columns: &ComplexMatrix) -> f64 {
    let g = gram(columns);
    let n = g.rows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        if g[(i, i)].re <= 0.0 {
            return f64::INFINITY;
        }
        for j in i + 1..n {
            let r = g[(i, j)].norm() / (g[(i, i)].re * g[(j, j)].re).sqrt();
            worst = worst.max(r);
        }
    }
    worst
}

pub fn ensure_discriminates(k: &LossyOperator, states: &StateSet, tol: f64) -> Result<()> {
    let residual = discrimination_residual(k, states)?;
    if residual <= tol {
        Ok(())
    } else {
        Err(Error::NotDiscriminated { residual })
    }
}
