use crate::error::{Error, Result};
use crate::numkernel::{
    inverse_from_svd, normalized, svd, ComplexMatrix, SvdResult, C64, SINGULARITY_TOL,
};

/// `‖K‖ ≤ 1 + PASSIVITY_TOL` counts as passive.
pub const PASSIVITY_TOL: f64 = 1e-12;

/// Tolerance on the prior sum held by a [`StateSet`].
pub const PRIOR_SUM_TOL: f64 = 1e-12;

/// `1 − s²` at or below this is treated as an exactly isometric direction.
pub const DEFECT_FLOOR: f64 = 1e-14;

/// A square, generally non-unitary evolution operator together with its SVD.
#[derive(Clone, Debug)]
pub struct LossyOperator {
    matrix: ComplexMatrix,
    svd: SvdResult,
    passive: bool,
    invertible: bool,
}

impl LossyOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "lossy operator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let svd = svd(&matrix)?;
        let s_max = svd.s_max();
        let passive = s_max <= 1.0 + PASSIVITY_TOL;
        let invertible = s_max > 0.0 && svd.s_min() > SINGULARITY_TOL * s_max;
        Ok(Self {
            matrix,
            svd,
            passive,
            invertible,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn svd(&self) -> &SvdResult {
        &self.svd
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.svd.singular_values
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn spectral_norm(&self) -> f64 {
        self.svd.s_max()
    }

    pub fn is_passive(&self) -> bool {
        self.passive
    }

    pub fn is_invertible(&self) -> bool {
        self.invertible
    }

    pub fn ensure_passive(&self) -> Result<()> {
        if self.passive {
            Ok(())
        } else {
            Err(Error::NotPassive {
                norm: self.spectral_norm(),
            })
        }
    }

    /// `(√(I−K†K), √(I−KK†))` for a passive `K`.
    ///
    /// Both roots are assembled from the cached SVD as `V·D·V†` and `U·D·U†`
    /// with `D = √(1−s²)`, which keeps `K·√(I−K†K) = √(I−KK†)·K` exact up to
    /// the factorization. Defects at roundoff level are set to zero; taking
    /// their root would turn `ε` into `√ε`.
    pub fn defect_roots(&self) -> Result<(ComplexMatrix, ComplexMatrix)> {
        self.ensure_passive()?;
        let defect: Vec<f64> = self
            .svd
            .singular_values
            .iter()
            .map(|&s| {
                let d = (1.0 - s) * (1.0 + s);
                if d <= DEFECT_FLOOR {
                    0.0
                } else {
                    d.sqrt()
                }
            })
            .collect();
        let d = ComplexMatrix::from_diag(&defect);
        let v = &self.svd.right_vectors;
        let u = &self.svd.left_vectors;
        Ok((&(v * &d) * &v.adjoint(), &(u * &d) * &u.adjoint()))
    }

    pub fn inverse_matrix(&self) -> Result<ComplexMatrix> {
        if !self.invertible {
            return Err(Error::NonInvertible);
        }
        inverse_from_svd(&self.svd).map_err(|_| Error::NonInvertible)
    }

    /// `‖K‖·‖K⁻¹‖ = s_max / s_min`, or `None` when `K` is singular.
    pub fn condition_product(&self) -> Option<f64> {
        self.invertible.then(|| self.svd.s_max() / self.svd.s_min())
    }

    /// Images `K·|g_i⟩` as columns.
    pub fn apply(&self, states: &StateSet) -> Result<ComplexMatrix> {
        self.matrix.try_mul(states.matrix())
    }
}

/// Columns `|g_i⟩` of an `N×M` matrix, `M ≤ N`, with optional priors.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSet {
    states: ComplexMatrix,
    priors: Option<Vec<f64>>,
}

impl StateSet {
    pub fn new(states: ComplexMatrix, priors: Option<Vec<f64>>) -> Result<Self> {
        if states.cols() > states.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{} states do not fit in dimension {}",
                states.cols(),
                states.rows()
            )));
        }
        if let Some(p) = &priors {
            validate_priors(p, states.cols(), PRIOR_SUM_TOL)?;
        }
        Ok(Self { states, priors })
    }

    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::DimensionMismatch("empty state set".into()));
        }
        let dim = columns[0].len();
        if columns.iter().any(|c| c.len() != dim) {
            return Err(Error::DimensionMismatch(
                "states have different lengths".into(),
            ));
        }
        Self::new(ComplexMatrix::from_columns(columns), None)
    }

    pub fn with_priors(self, priors: Vec<f64>) -> Result<Self> {
        Self::new(self.states, Some(priors))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.states
    }

    pub fn priors(&self) -> Option<&[f64]> {
        self.priors.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.states.rows()
    }

    pub fn len(&self) -> usize {
        self.states.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.states.cols() == 0
    }

    pub fn state(&self, i: usize) -> Vec<C64> {
        self.states.column(i)
    }

    /// Same priors, new vectors. Shape must match.
    pub fn replace_states(&self, states: ComplexMatrix) -> Result<Self> {
        if states.rows() != self.dim() || states.cols() != self.len() {
            return Err(Error::DimensionMismatch(
                "replacement states change the shape".into(),
            ));
        }
        Ok(Self {
            states,
            priors: self.priors.clone(),
        })
    }

    /// Unit-norm copies of every state.
    pub fn normalized_states(&self) -> Result<Vec<Vec<C64>>> {
        (0..self.len())
            .map(|i| normalized(&self.state(i)).ok_or(Error::ZeroState { index: i }))
            .collect()
    }
}

pub(crate) fn validate_priors(p: &[f64], count: usize, sum_tol: f64) -> Result<()> {
    if p.len() != count {
        return Err(Error::LengthMismatch {
            expected: count,
            got: p.len(),
        });
    }
    if p.iter()
        .any(|&x| !x.is_finite() || !(0.0..=1.0).contains(&x))
    {
        return Err(Error::InvalidPriors("each prior must lie in [0, 1]".into()));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > sum_tol {
        return Err(Error::InvalidPriors(format!("priors sum to {sum}, not 1")));
    }
    Ok(())
}
