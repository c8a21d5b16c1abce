//! Local filtering of a pure bipartite state into a maximally entangled one.
//!
//! The coefficient matrix `C` of `|Ψ⟩ = Σ C_ki |k⟩_A|i⟩_B` is read column-wise
//! as a set of non-orthogonal, non-normalized local states `|g_i⟩`. Filtering
//! side A with `K_A = G⁻¹/‖G⁻¹‖` maps them onto an orthogonal set with equal
//! weights, succeeding with probability `N/‖G⁻¹‖²`.

use crate::error::{Error, Result};
use crate::numkernel::{svd, ComplexMatrix, C64};
use crate::usd::{LossyOperator, StateSet};

/// Input states must have unit norm within this tolerance.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Schmidt coefficients above this count toward the rank.
pub const SCHMIDT_RANK_TOL: f64 = 1e-12;

/// Relative spread of Schmidt coefficients accepted as maximally entangled.
pub const MAXIMAL_SPREAD_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    coefficients: ComplexMatrix,
    norm: f64,
}

impl BipartiteState {
    /// `coefficients[k][i]` is the amplitude of `|k⟩_A ⊗ |i⟩_B`.
    pub fn new(coefficients: ComplexMatrix) -> Result<Self> {
        let norm = coefficients.frobenius_norm();
        if norm == 0.0 {
            return Err(Error::ZeroState { index: 0 });
        }
        Ok(Self { coefficients, norm })
    }

    pub fn coefficients(&self) -> &ComplexMatrix {
        &self.coefficients
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn dim_a(&self) -> usize {
        self.coefficients.rows()
    }

    pub fn dim_b(&self) -> usize {
        self.coefficients.cols()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm - 1.0).abs() <= NORMALIZATION_TOL
    }

    /// `(A ⊗ B)|Ψ⟩`, i.e. `C ↦ A·C·Bᵀ`. `None` leaves that side untouched.
    pub fn apply_local(
        &self,
        a: Option<&ComplexMatrix>,
        b: Option<&ComplexMatrix>,
    ) -> Result<BipartiteState> {
        let mut c = self.coefficients.clone();
        if let Some(a) = a {
            c = a.try_mul(&c)?;
        }
        if let Some(b) = b {
            c = c.try_mul(&b.transpose())?;
        }
        BipartiteState::new(c)
    }

    /// Reads the state as `Σ_i |g_i⟩ ⊗ |i⟩`: the columns are the local states of side A.
    pub fn local_states(&self) -> Result<StateSet> {
        StateSet::new(self.coefficients.clone(), None)
    }
}

#[derive(Clone, Debug)]
pub struct SchmidtData {
    /// Descending.
    pub coefficients_lambda: Vec<f64>,
    /// Columns `|ξ_i⟩`.
    pub basis_a: ComplexMatrix,
    /// Columns `|χ_i⟩`, conjugates of the right singular vectors of `C`.
    pub basis_b: ComplexMatrix,
    pub rank: usize,
}

impl SchmidtData {
    /// `max λ / min λ − 1` over the nonzero coefficients.
    pub fn relative_spread(&self) -> f64 {
        let nz: Vec<f64> = self.coefficients_lambda[..self.rank].to_vec();
        match (nz.first(), nz.last()) {
            (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo - 1.0,
            _ => f64::INFINITY,
        }
    }

    /// `Σ λ_i |ξ_i⟩ ⊗ |χ_i⟩` as a coefficient matrix.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let rows = self.basis_a.rows();
        let cols = self.basis_b.rows();
        let mut c = ComplexMatrix::zeros(rows, cols);
        for (k, &l) in self.coefficients_lambda.iter().enumerate() {
            for i in 0..rows {
                let a = self.basis_a[(i, k)] * l;
                for j in 0..cols {
                    c[(i, j)] += a * self.basis_b[(j, k)];
                }
            }
        }
        c
    }
}

/// `C = basis_a · diag(λ) · basis_bᵀ`, from the SVD `C = U·S·V†` with `basis_b = V̄`.
pub fn schmidt(state: &BipartiteState) -> Result<SchmidtData> {
    let r = svd(state.coefficients())?;
    let rank = r
        .singular_values
        .iter()
        .filter(|&&l| l > SCHMIDT_RANK_TOL)
        .count();
    Ok(SchmidtData {
        coefficients_lambda: r.singular_values,
        basis_a: r.left_vectors,
        basis_b: r.right_vectors.conj(),
        rank,
    })
}

#[derive(Clone, Debug)]
pub struct DistillationPlan {
    /// `K_A`, acting on side A.
    pub filter: LossyOperator,
    /// `N/‖G⁻¹‖²`.
    pub success_probability: f64,
    /// `(K_A ⊗ I)|Ψ⟩`, unnormalized; its squared norm is the success probability.
    pub output_state: BipartiteState,
    /// Local states `G` the filter inverts (columns).
    pub local_states: ComplexMatrix,
    /// The shared state the plan was built for.
    pub input_state: BipartiteState,
}

/// Procrustean-style filter `K_A = G⁻¹/‖G⁻¹‖` on side A.
///
/// For square `C` the columns of `C` are used directly as `G`. When side B
/// is larger, `C` is first re-expressed in the Schmidt basis of B so that `G`
/// is `N×N`.
pub fn plan_distillation(state: &BipartiteState) -> Result<DistillationPlan> {
    if !state.is_normalized() {
        return Err(Error::NotNormalized { norm: state.norm() });
    }
    let n = state.dim_a();
    let sd = schmidt(state)?;
    if sd.rank < n {
        return Err(Error::RankDeficient {
            rank: sd.rank,
            required: n,
        });
    }
    let c = state.coefficients();
    let g = if c.cols() == n {
        c.clone()
    } else {
        c * &sd.basis_b.column_range(0, n).conj()
    };
    let g_inv = crate::numkernel::inverse(&g).map_err(|_| Error::RankDeficient {
        rank: sd.rank,
        required: n,
    })?;
    let inv_norm = svd(&g_inv)?.s_max();
    let filter = LossyOperator::new(g_inv.scale_real(1.0 / inv_norm))?;
    let output_state = BipartiteState::new(filter.matrix() * c)?;
    Ok(DistillationPlan {
        success_probability: n as f64 / (inv_norm * inv_norm),
        filter,
        output_state,
        local_states: g,
        input_state: state.clone(),
    })
}

/// `ρ = Σ p_i |h_i⟩⟨h_i|` for normalized states with priors.
pub fn usd_density_matrix(states: &StateSet) -> Result<ComplexMatrix> {
    let priors = states.priors().ok_or(Error::MissingPriors)?;
    let n = states.dim();
    let mut rho = ComplexMatrix::zeros(n, n);
    for (i, &p) in priors.iter().enumerate() {
        let h = states.state(i);
        let norm = crate::numkernel::norm(&h);
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { norm });
        }
        for r in 0..n {
            let a: C64 = h[r] * p;
            for c in 0..n {
                rho[(r, c)] += a * h[c].conj();
            }
        }
    }
    Ok(rho)
}
