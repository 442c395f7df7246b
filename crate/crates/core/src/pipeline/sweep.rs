use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{encode, fmt_sig, RunConfig};
use crate::approx::DistributionSpec;
use crate::error::Result;

pub const CSV_HEADER: &str = "distribution,mu,sigma,N,k,p,chi,fidelity,pp_err,mps_err,gate_err,gate_count,t_fit_ms,t_compress_ms,t_extract_ms";

#[derive(Debug, Clone, Serialize)]
pub struct RowMetrics {
    pub fidelity: f64,
    pub pp_err: Option<f64>,
    pub mps_err: Option<f64>,
    pub gate_err: Option<f64>,
    pub gate_count: usize,
    pub t_fit_ms: f64,
    pub t_compress_ms: f64,
    pub t_extract_ms: f64,
}

/// One sweep cell; `outcome` holds the error message when the run failed.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub distribution: String,
    pub mu: f64,
    pub sigma: f64,
    pub n: usize,
    pub k: usize,
    pub p: usize,
    pub chi: usize,
    pub outcome: std::result::Result<RowMetrics, String>,
}

impl SweepRow {
    pub fn fidelity(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|m| m.fidelity)
    }

    /// The CSV line, without a trailing newline. Failed cells leave metrics blank.
    pub fn csv_line(&self) -> String {
        let mut fields = vec![
            self.distribution.clone(),
            fmt_sig(self.mu),
            fmt_sig(self.sigma),
            self.n.to_string(),
            self.k.to_string(),
            self.p.to_string(),
            self.chi.to_string(),
        ];
        let opt = |x: Option<f64>| x.map(fmt_sig).unwrap_or_default();
        match &self.outcome {
            Ok(m) => fields.extend([
                fmt_sig(m.fidelity),
                opt(m.pp_err),
                opt(m.mps_err),
                opt(m.gate_err),
                m.gate_count.to_string(),
                fmt_sig(m.t_fit_ms),
                fmt_sig(m.t_compress_ms),
                fmt_sig(m.t_extract_ms),
            ]),
            Err(_) => fields.extend(std::iter::repeat_n(String::new(), 8)),
        }
        fields.join(",")
    }
}

fn run_cell(config: RunConfig) -> SweepRow {
    let outcome = encode(&config)
        .map(|(_, r)| RowMetrics {
            fidelity: r.fidelity,
            pp_err: r.errors.map(|e| e.pp_error),
            mps_err: r.errors.map(|e| e.mps_error),
            gate_err: r.errors.map(|e| e.gate_error),
            gate_count: r.gate_count,
            t_fit_ms: r.timings.fit_ms,
            t_compress_ms: r.timings.compress_ms,
            t_extract_ms: r.timings.extract_ms,
        })
        .map_err(|e| {
            log::warn!(
                "{} sigma={} N={} p={}: {e}",
                config.spec.kind.name(),
                config.spec.sigma,
                config.n_qubits,
                config.degree
            );
            e.to_string()
        });
    SweepRow {
        distribution: config.spec.kind.name().to_string(),
        mu: config.spec.mu,
        sigma: config.spec.sigma,
        n: config.n_qubits,
        k: config.support_bit,
        p: config.degree,
        chi: config.target_chi,
        outcome,
    }
}

fn run_cells(cells: Vec<RunConfig>) -> Vec<SweepRow> {
    cells.into_par_iter().map(run_cell).collect()
}

/// One row per (distribution, σ, N), in that nesting order.
pub fn sweep_sigma(specs: &[DistributionSpec], sigmas: &[f64], ns: &[usize], base: &RunConfig) -> Vec<SweepRow> {
    let mut cells = Vec::new();
    for spec in specs {
        for &sigma in sigmas {
            for &n in ns {
                let mut cfg = base.clone();
                cfg.spec = spec.with_sigma(sigma);
                cfg.n_qubits = n;
                cells.push(cfg);
            }
        }
    }
    run_cells(cells)
}

/// One row per (distribution, degree) at the base configuration's σ and N.
pub fn sweep_degree(specs: &[DistributionSpec], degrees: &[usize], base: &RunConfig) -> Vec<SweepRow> {
    let mut cells = Vec::new();
    for spec in specs {
        for &p in degrees {
            let mut cfg = base.clone();
            cfg.spec = spec.clone();
            cfg.degree = p;
            cells.push(cfg);
        }
    }
    run_cells(cells)
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    Ok(())
}
