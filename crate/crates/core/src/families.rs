//! Families of state sets a fixed `K` discriminates.
//!
//! Starting from one discriminated set `G`, three transformations produce
//! further sets: phases on the right singular vectors (`W`), unitary mixing
//! inside degenerate singular subspaces (`V`), and the non-unitary family
//! `G̃ = K⁻¹·U₀`. The first two preserve Gram spectra and Schmidt
//! coefficients; the last one changes them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{gram, hermitian_eig, ComplexMatrix, C64, DEGENERACY_TOL, HERMITIAN_TOL};
use crate::usd::{
    ensure_discriminates, orthogonality_residual, LossyOperator, StateSet, DISCRIMINATION_TOL,
};

/// Eigenvalues of `ρ_?` above this count toward its rank.
pub const INCONCLUSIVE_RANK_TOL: f64 = 1e-10;

/// Tolerance on `tr ρ = 1` and on negative eigenvalues of an input density matrix.
pub const DENSITY_TOL: f64 = 1e-9;

/// Block and `U₀` unitarity tolerance, `‖U†U − I‖_F`.
pub const UNITARY_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct PhaseTransform {
    pub phases: Vec<f64>,
    /// `W = Σ e^{iφ_i}|v_i⟩⟨v_i|`.
    pub input_transform: ComplexMatrix,
    /// `Σ e^{iφ_i}|u_i⟩⟨u_i|`, the matching change of output basis.
    pub output_transform: ComplexMatrix,
}

/// Both transforms come from the SVD cached in `k`, so `φ_i` pairs the same
/// `|v_i⟩` and `|u_i⟩` even inside degenerate subspaces.
pub fn phase_transform(k: &LossyOperator, phases: &[f64]) -> Result<PhaseTransform> {
    let n = k.dim();
    if phases.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: phases.len(),
        });
    }
    let d: Vec<C64> = phases.iter().map(|&p| C64::from_polar(1.0, p)).collect();
    let d = ComplexMatrix::from_complex_diag(&d);
    let v = &k.svd().right_vectors;
    let u = &k.svd().left_vectors;
    Ok(PhaseTransform {
        phases: phases.to_vec(),
        input_transform: &(v * &d) * &v.adjoint(),
        output_transform: &(u * &d) * &u.adjoint(),
    })
}

/// `{W|g_i⟩}` for a set `K` already discriminates.
pub fn apply_phase_family(
    k: &LossyOperator,
    states: &StateSet,
    phases: &[f64],
) -> Result<StateSet> {
    let w = phase_transform(k, phases)?;
    check_dims(k, states)?;
    ensure_discriminates(k, states, DISCRIMINATION_TOL)?;
    states.replace_states(&w.input_transform * states.matrix())
}

#[derive(Clone, Debug, Serialize)]
pub struct DegeneracyStructure {
    /// Index groups into the descending singular values.
    pub groups: Vec<Vec<usize>>,
    /// Absolute tolerance, `tol · s_max`.
    pub tolerance_used: f64,
}

impl DegeneracyStructure {
    pub fn group_sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }
}

/// Clusters singular values whose neighbours lie within `tol · s_max`
/// (`tol` defaults to [`DEGENERACY_TOL`]).
pub fn degeneracy_structure(k: &LossyOperator, tol: Option<f64>) -> DegeneracyStructure {
    let s = k.singular_values();
    let abs_tol = tol.unwrap_or(DEGENERACY_TOL) * k.spectral_norm();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..s.len() {
        match groups.last_mut() {
            Some(g) if s[*g.last().unwrap()] - s[i] <= abs_tol => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    DegeneracyStructure {
        groups,
        tolerance_used: abs_tol,
    }
}

#[derive(Clone, Debug)]
pub struct MixedFamily {
    pub states: StateSet,
    /// `V`, block diagonal in the right singular basis.
    pub mixer: ComplexMatrix,
    /// Largest normalized off-diagonal of the new output Gram matrix. Exact
    /// degeneracy keeps it at roundoff; near-degenerate groups leak in
    /// proportion to their singular-value spread.
    pub output_gram_residual: f64,
}

/// `{V|g_i⟩}` where `V` applies `block_unitaries[j]` inside degeneracy group `j`.
pub fn apply_degenerate_mixer(
    k: &LossyOperator,
    states: &StateSet,
    block_unitaries: &[ComplexMatrix],
) -> Result<MixedFamily> {
    let structure = degeneracy_structure(k, None);
    if block_unitaries.len() != structure.groups.len() {
        return Err(Error::BlockSizeMismatch(format!(
            "{} blocks for {} degeneracy groups {:?}",
            block_unitaries.len(),
            structure.groups.len(),
            structure.group_sizes()
        )));
    }
    let n = k.dim();
    let mut block = ComplexMatrix::zeros(n, n);
    for (group, u) in structure.groups.iter().zip(block_unitaries) {
        if u.rows() != group.len() || u.cols() != group.len() {
            return Err(Error::BlockSizeMismatch(format!(
                "group of size {} got a {}x{} block",
                group.len(),
                u.rows(),
                u.cols()
            )));
        }
        u.ensure_unitary(UNITARY_TOL)?;
        block.set_block(group[0], group[0], u);
    }
    check_dims(k, states)?;
    ensure_discriminates(k, states, DISCRIMINATION_TOL)?;
    let v = &k.svd().right_vectors;
    let mixer = &(v * &block) * &v.adjoint();
    let mixed = states.replace_states(&mixer * states.matrix())?;
    let residual = orthogonality_residual(&k.apply(&mixed)?);
    Ok(MixedFamily {
        states: mixed,
        mixer,
        output_gram_residual: residual,
    })
}

#[derive(Clone, Debug)]
pub struct DistillationFamily {
    /// Columns of `G̃ = K⁻¹·U₀`.
    pub states: StateSet,
    /// Gram matrix of `G̃`.
    pub gram: ComplexMatrix,
    /// Gram matrix of the canonical set `K⁻¹`, for comparison.
    pub reference_gram: ComplexMatrix,
}

/// `G̃ = K⁻¹·U₀`, mapped by `K` onto the orthonormal columns of `U₀`.
pub fn distillation_family(k: &LossyOperator, u0: &ComplexMatrix) -> Result<DistillationFamily> {
    let n = k.dim();
    if u0.rows() != n || u0.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "U0 must be {n}x{n}, got {}x{}",
            u0.rows(),
            u0.cols()
        )));
    }
    u0.ensure_unitary(UNITARY_TOL)?;
    let kinv = k.inverse_matrix()?;
    let g = &kinv * u0;
    Ok(DistillationFamily {
        gram: gram(&g),
        reference_gram: gram(&kinv),
        states: StateSet::new(g, None)?,
    })
}

#[derive(Clone, Debug)]
pub struct InconclusiveAnalysis {
    /// `M_? = √(I − K†K)`.
    pub m_question: ComplexMatrix,
    /// `E_? = I − K†K`.
    pub e_question: ComplexMatrix,
    /// `M_?·ρ·M_?†`, unnormalized.
    pub rho_question: ComplexMatrix,
    /// Numerical rank of `rho_question` at [`INCONCLUSIVE_RANK_TOL`].
    pub rank: usize,
    /// `tr ρ_?`, the probability of the inconclusive outcome.
    pub probability: f64,
}

pub fn inconclusive_analysis(
    k: &LossyOperator,
    rho: &ComplexMatrix,
) -> Result<InconclusiveAnalysis> {
    k.ensure_passive()?;
    let n = k.dim();
    validate_density_matrix(rho, n)?;
    let (m, _) = k.defect_roots()?;
    let e = &m * &m;
    let rho_q = &(&m * rho) * &m.adjoint();
    let rho_q = (&rho_q + &rho_q.adjoint()).scale_real(0.5);
    let eig = hermitian_eig(&rho_q)?;
    let rank = eig
        .eigenvalues
        .iter()
        .filter(|&&x| x > INCONCLUSIVE_RANK_TOL)
        .count();
    Ok(InconclusiveAnalysis {
        probability: rho_q.trace().re,
        m_question: m,
        e_question: e,
        rho_question: rho_q,
        rank,
    })
}

pub fn validate_density_matrix(rho: &ComplexMatrix, n: usize) -> Result<()> {
    if rho.rows() != n || rho.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "density matrix must be {n}x{n}, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let residual = rho.hermiticity_residual();
    if residual > HERMITIAN_TOL * rho.frobenius_norm().max(1.0) {
        return Err(Error::NotDensityMatrix(format!(
            "not Hermitian (residual {residual:.3e})"
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
        return Err(Error::NotDensityMatrix(format!("trace is {tr}, not 1")));
    }
    let eig = hermitian_eig(rho)?;
    if let Some(&lowest) = eig.eigenvalues.last() {
        if lowest < -DENSITY_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "negative eigenvalue {lowest:.3e}"
            )));
        }
    }
    Ok(())
}

fn check_dims(k: &LossyOperator, states: &StateSet) -> Result<()> {
    if states.dim() != k.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states live in dimension {}, operator in {}",
            states.dim(),
            k.dim()
        )));
    }
    Ok(())
}
