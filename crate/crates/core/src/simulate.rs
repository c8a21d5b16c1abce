//! Monte Carlo oracle for the analytic detection and distillation probabilities.
//!
//! A passive `K` is embedded as the top-left block of the unitary
//! `U = [[K, √(I−KK†)], [√(I−K†K), −K†]]` on system ⊕ ancilla. Inputs start in
//! the system block with the ancilla empty; the weight left in the system
//! block after `U` is the conclusive branch.
//!
//! Sampling is deterministic: each input state `i` draws from its own
//! ChaCha8 stream (`seed`, stream `i`). Per shot one uniform selects the
//! branch and, on the conclusive branch only, a second uniform selects the
//! outcome by inverse CDF over the output basis.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distill::DistillationPlan;
use crate::error::{Error, Result};
use crate::numkernel::{inner, normalized, ComplexMatrix, C64};
use crate::usd::{ensure_discriminates, LossyOperator, StateSet, DISCRIMINATION_TOL};

pub const INCONCLUSIVE: &str = "inconclusive";
pub const SUCCESS: &str = "success";
pub const FAILURE: &str = "failure";

#[derive(Clone, Debug)]
pub struct Dilation {
    pub unitary: ComplexMatrix,
    pub system_dim: usize,
}

impl Dilation {
    /// System block of `U·(ψ ⊕ 0)`.
    pub fn system_output(&self, psi: &[C64]) -> Vec<C64> {
        let n = self.system_dim;
        assert_eq!(psi.len(), n);
        (0..n)
            .map(|i| (0..n).map(|j| self.unitary[(i, j)] * psi[j]).sum())
            .collect()
    }

    pub fn system_block(&self) -> ComplexMatrix {
        self.unitary.block(0, 0, self.system_dim, self.system_dim)
    }
}

pub fn dilate(k: &LossyOperator) -> Result<Dilation> {
    let n = k.dim();
    let km = k.matrix();
    let (d_col, d_row) = k.defect_roots()?;
    let mut u = ComplexMatrix::zeros(2 * n, 2 * n);
    u.set_block(0, 0, km);
    u.set_block(0, n, &d_row);
    u.set_block(n, 0, &d_col);
    u.set_block(n, n, &km.adjoint().scale_real(-1.0));
    Ok(Dilation {
        unitary: u,
        system_dim: n,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShotResult {
    /// Observed outcomes only: conclusive index as a decimal string, or `"inconclusive"`.
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
    pub seed: u64,
}

impl ShotResult {
    pub fn count(&self, label: &str) -> u64 {
        self.counts.get(label).copied().unwrap_or(0)
    }

    pub fn frequency(&self, label: &str) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.count(label) as f64 / self.shots as f64
        }
    }

    /// Total count over the conclusive outcomes.
    pub fn conclusive(&self) -> u64 {
        self.shots - self.count(INCONCLUSIVE)
    }
}

/// Samples the discrimination measurement for every input state.
///
/// Conclusive outcome `j` is the projection onto the normalized image
/// `K|g_j⟩`; the result for input `i` is `results[i]`.
pub fn measure_usd(
    k: &LossyOperator,
    states: &StateSet,
    shots: u64,
    seed: u64,
) -> Result<Vec<ShotResult>> {
    measure_usd_with_tolerance(k, states, shots, seed, DISCRIMINATION_TOL)
}

/// [`measure_usd`] with a caller-chosen orthogonality tolerance on the outputs.
pub fn measure_usd_with_tolerance(
    k: &LossyOperator,
    states: &StateSet,
    shots: u64,
    seed: u64,
    orthogonality_tol: f64,
) -> Result<Vec<ShotResult>> {
    if states.dim() != k.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states live in dimension {}, operator in {}",
            states.dim(),
            k.dim()
        )));
    }
    let dilation = dilate(k)?;
    ensure_discriminates(k, states, orthogonality_tol)?;
    let inputs = states.normalized_states()?;
    let basis: Vec<Vec<C64>> = inputs
        .iter()
        .enumerate()
        .map(|(j, g)| normalized(&dilation.system_output(g)).ok_or(Error::ZeroState { index: j }))
        .collect::<Result<_>>()?;

    let mut results = Vec::with_capacity(inputs.len());
    for (i, g) in inputs.iter().enumerate() {
        let out = dilation.system_output(g);
        let p_conclusive: f64 = out.iter().map(|z| z.norm_sqr()).sum();
        let weights: Vec<f64> = basis.iter().map(|b| inner(b, &out).norm_sqr()).collect();
        let total: f64 = weights.iter().sum();
        let mut cdf = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for w in &weights {
            acc += w / total;
            cdf.push(acc);
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        // tallies[j] for conclusive j, the last slot for inconclusive
        let mut tallies = vec![0u64; cdf.len() + 1];
        for _ in 0..shots {
            let branch: f64 = rng.random();
            let slot = if branch < p_conclusive {
                let r: f64 = rng.random();
                cdf.iter().position(|&c| r < c).unwrap_or(cdf.len() - 1)
            } else {
                cdf.len()
            };
            tallies[slot] += 1;
        }
        let counts = tallies
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(j, &c)| {
                let label = if j == cdf.len() {
                    INCONCLUSIVE.to_string()
                } else {
                    j.to_string()
                };
                (label, c)
            })
            .collect();
        results.push(ShotResult {
            counts,
            shots,
            seed,
        });
    }
    Ok(results)
}

/// Analytic `|⟨ψ_j|K|ĝ_i⟩|²` straight from `K`, rows indexed by input.
pub fn conclusive_probabilities(k: &LossyOperator, states: &StateSet) -> Result<Vec<Vec<f64>>> {
    let inputs = states.normalized_states()?;
    let outputs: Vec<Vec<C64>> = inputs.iter().map(|g| k.matrix().mul_vec(g)).collect();
    let basis: Vec<Vec<C64>> = outputs
        .iter()
        .enumerate()
        .map(|(j, h)| normalized(h).ok_or(Error::ZeroState { index: j }))
        .collect::<Result<_>>()?;
    Ok(outputs
        .iter()
        .map(|h| basis.iter().map(|b| inner(b, h).norm_sqr()).collect())
        .collect())
}

/// Samples success of the side-A filter on the bipartite input, with the
/// success probability taken from the dilated filter rather than the plan.
pub fn measure_distillation(plan: &DistillationPlan, shots: u64, seed: u64) -> Result<ShotResult> {
    let dilation = dilate(&plan.filter)?;
    let input = plan.input_state.coefficients();
    let filtered = &dilation.system_block() * input;
    let p_success = (filtered.frobenius_norm() / input.frobenius_norm()).powi(2);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let successes = (0..shots)
        .filter(|_| rng.random::<f64>() < p_success)
        .count() as u64;
    let counts = [(SUCCESS, successes), (FAILURE, shots - successes)]
        .into_iter()
        .filter(|&(_, c)| c > 0)
        .map(|(label, c)| (label.to_string(), c))
        .collect();
    Ok(ShotResult {
        counts,
        shots,
        seed,
    })
}
