use std::time::Instant;

use serde::Serialize;

use super::{ConfigEcho, RunConfig};
use crate::approx::{assemble, fit_piecewise, target_amplitudes, Grid};
use crate::circuit::{extract_circuit, Circuit};
use crate::error::{Error, Result};
use crate::mps::{compress_als_with_report, dense_limit, overlap, Mps};
use crate::sim::{fidelity_slices, run, ErrorDecomposition};

/// What `RunReport::fidelity` was measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityReference {
    /// Simulated circuit against the exact normalized target.
    ExactTarget,
    /// Compressed MPS against the normalized piecewise MPS, used above the dense limit.
    PiecewiseMps,
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct StageTimings {
    pub fit_ms: f64,
    pub compress_ms: f64,
    pub extract_ms: f64,
    pub simulate_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub grid_domain: [f64; 2],
    pub fidelity: f64,
    pub fidelity_reference: FidelityReference,
    pub errors: Option<ErrorDecomposition>,
    pub share_convention: &'static str,
    pub piecewise_bond_dims: Vec<usize>,
    pub bond_dims: Vec<usize>,
    pub gate_count: usize,
    pub two_qubit_gates: usize,
    pub compression_sweeps: usize,
    pub compression_converged: bool,
    pub timings: StageTimings,
}

/// Intermediate states of one run, kept for callers that need them.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub piecewise: Mps,
    pub compressed: Mps,
    pub circuit: Circuit,
    pub report: RunReport,
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

/// Fit, encode each region, sum, compress, extract, then score against the target.
pub fn encode(config: &RunConfig) -> Result<(Circuit, RunReport)> {
    let e = encode_detailed(config)?;
    Ok((e.circuit, e.report))
}

pub fn encode_detailed(config: &RunConfig) -> Result<Encoding> {
    config.validate()?;
    let grid = Grid::for_spec(&config.spec, config.n_qubits)?;
    let mut timings = StageTimings::default();

    let t = Instant::now();
    let piecewise = fit_piecewise(
        &config.spec,
        &grid,
        config.support_bit,
        config.degree,
        config.samples_per_region,
    )
    .and_then(|pp| assemble(&pp, &grid))
    .map_err(|e| e.at_stage("fit"))?;
    timings.fit_ms = ms(t);

    let t = Instant::now();
    let (compressed, comp) = compress_als_with_report(&piecewise, &config.compression_options())
        .map_err(|e| e.at_stage("compress"))?;
    timings.compress_ms = ms(t);

    let t = Instant::now();
    let circuit = extract_circuit(&compressed).map_err(|e| e.at_stage("extract"))?;
    timings.extract_ms = ms(t);

    let t = Instant::now();
    let (fidelity, reference, errors) = if config.n_qubits <= dense_limit() {
        let errors = decompose(config, &piecewise, &compressed, &circuit).map_err(|e| e.at_stage("simulate"))?;
        (1.0 - errors.total, FidelityReference::ExactTarget, Some(errors))
    } else {
        let pp = piecewise.normalize().map_err(|e| e.at_stage("simulate"))?;
        let f = overlap(&pp, &compressed).map_err(|e| e.at_stage("simulate"))?.abs().min(1.0);
        (f, FidelityReference::PiecewiseMps, None)
    };
    timings.simulate_ms = ms(t);

    let report = RunReport {
        config: config.echo(),
        grid_domain: [grid.a, grid.b],
        fidelity,
        fidelity_reference: reference,
        errors,
        share_convention: ErrorDecomposition::SHARE_CONVENTION,
        piecewise_bond_dims: piecewise.bond_dims(),
        bond_dims: compressed.bond_dims(),
        gate_count: circuit.gate_count(),
        two_qubit_gates: circuit.two_qubit_count(),
        compression_sweeps: comp.sweeps,
        compression_converged: comp.converged,
        timings,
    };
    Ok(Encoding {
        piecewise,
        compressed,
        circuit,
        report,
    })
}

fn decompose(config: &RunConfig, piecewise: &Mps, compressed: &Mps, circuit: &Circuit) -> Result<ErrorDecomposition> {
    let target = target_amplitudes(&config.spec, config.n_qubits)?;
    let pp = normalized(piecewise.to_statevector()?)?;
    let comp = compressed.to_statevector()?;
    let out = run(circuit)?;
    ErrorDecomposition::from_states(&target, &pp, &comp, out.amplitudes())
}

fn normalized(v: Vec<f64>) -> Result<Vec<f64>> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(v.into_iter().map(|x| x / norm).collect())
}

/// Stage-wise infidelities of a full run; requires `N` within the dense limit.
pub fn error_decomposition(config: &RunConfig) -> Result<ErrorDecomposition> {
    let e = encode_detailed(config)?;
    match e.report.errors {
        Some(d) => Ok(d),
        None => Err(Error::DenseLimit {
            n: config.n_qubits,
            limit: dense_limit(),
        }),
    }
}

/// `F(target, run(circuit))`, recomputed from scratch.
pub fn circuit_fidelity(config: &RunConfig, circuit: &Circuit) -> Result<f64> {
    let target = target_amplitudes(&config.spec, config.n_qubits)?;
    fidelity_slices(&target, run(circuit)?.amplitudes())
}
