use serde::Serialize;

use super::{encode, RunConfig};
use crate::analysis::optimality_ratio;
use crate::approx::target_amplitudes;
use crate::error::Result;
use crate::linalg::TruncationPolicy;
use crate::mps::tt_svd;
use crate::sim::fidelity_slices;

#[derive(Debug, Clone, Serialize)]
pub struct OptimalityReport {
    pub n_qubits: usize,
    pub sigma: f64,
    pub chi: usize,
    pub circuit_fidelity: f64,
    pub optimal_fidelity: f64,
    pub ratio: f64,
    /// Set when the pipeline beats the truncated-SVD state, which can happen
    /// because compression optimizes a different objective.
    pub ratio_exceeds_one: bool,
}

/// Fidelity of the χ-truncated TT-SVD of the exact target.
pub fn svd_fidelity(config: &RunConfig) -> Result<f64> {
    let target = target_amplitudes(&config.spec, config.n_qubits)?;
    let m = tt_svd(&target, TruncationPolicy::max_rank(config.target_chi))?.mps;
    let approx = m.normalize()?.to_statevector()?;
    fidelity_slices(&target, &approx)
}

/// Pipeline fidelity over the truncated-SVD fidelity.
pub fn oracle_compare(config: &RunConfig) -> Result<OptimalityReport> {
    let optimal = svd_fidelity(config)?;
    let (_, report) = encode(config)?;
    let ratio = optimality_ratio(report.fidelity, optimal)?;
    Ok(OptimalityReport {
        n_qubits: config.n_qubits,
        sigma: config.spec.sigma,
        chi: config.target_chi,
        circuit_fidelity: report.fidelity,
        optimal_fidelity: optimal,
        ratio,
        ratio_exceeds_one: ratio > 1.0,
    })
}
