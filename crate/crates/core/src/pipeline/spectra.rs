use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::fmt_sig;
use crate::analysis::{chi_bound, fit_decay, max_derivative, DecayFit};
use crate::approx::{target_amplitudes, DistributionSpec};
use crate::error::Result;
use crate::mps::{bipartite_vne, unfolding_spectra};

#[derive(Debug, Clone, Serialize)]
pub struct SpectraEntry {
    pub sigma: f64,
    pub n_qubits: usize,
    #[serde(skip)]
    pub spectra: Vec<Vec<f64>>,
    pub fit: Option<DecayFit>,
    pub chi: usize,
    pub chi_bound: Option<f64>,
    pub max_derivative: f64,
    pub entropies: Vec<f64>,
    pub max_entropy: f64,
}

/// Unfolding spectra, decay fits, the bound at `chi`, and max `|pdf′|` per σ.
pub fn spectra(spec: &DistributionSpec, n: usize, sigmas: &[f64], chi: usize) -> Result<Vec<SpectraEntry>> {
    sigmas
        .par_iter()
        .map(|&sigma| spectra_entry(&spec.with_sigma(sigma), n, chi))
        .collect()
}

pub fn spectra_entry(spec: &DistributionSpec, n: usize, chi: usize) -> Result<SpectraEntry> {
    let target = target_amplitudes(spec, n)?;
    let spectra = unfolding_spectra(&target)?;
    let fit = match fit_decay(&spectra) {
        Ok(f) => Some(f),
        Err(e) => {
            log::warn!("sigma={}: {e}", spec.sigma);
            None
        }
    };
    let entropies = spectra.iter().map(|s| bipartite_vne(s)).collect::<Result<Vec<_>>>()?;
    Ok(SpectraEntry {
        sigma: spec.sigma,
        n_qubits: n,
        chi_bound: fit.as_ref().map(|f| chi_bound(f.beta(), chi, n)),
        fit,
        chi,
        max_derivative: max_derivative(spec, n)?,
        max_entropy: entropies.iter().cloned().fold(0.0, f64::max),
        entropies,
        spectra,
    })
}

/// Long-format CSV: `sigma,cut,k,singular_value` with `cut` and `k` 1-based.
pub fn write_spectra_csv<W: Write>(entries: &[SpectraEntry], mut out: W) -> Result<()> {
    writeln!(out, "sigma,cut,k,singular_value")?;
    for e in entries {
        for (cut, s) in e.spectra.iter().enumerate() {
            for (k, v) in s.iter().enumerate() {
                writeln!(out, "{},{},{},{}", fmt_sig(e.sigma), cut + 1, k + 1, fmt_sig(*v))?;
            }
        }
    }
    Ok(())
}
