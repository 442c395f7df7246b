//! Spectral decay regression, the bond-dimension accuracy model, and
//! derivative/entropy diagnostics.

use serde::Serialize;

use crate::approx::{DistributionSpec, Grid};
use crate::error::{Error, Result};
use crate::mps::check_dense;

/// Singular values below this fraction of a cut's largest are not fitted.
pub const SPECTRUM_FLOOR: f64 = 1e-13;

/// `ln σ_k = ln α − β k` fitted over `k = 1, 2, …`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpFit {
    pub alpha: f64,
    pub beta: f64,
    pub r_squared: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutFit {
    pub cut: usize,
    pub fit: ExpFit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub per_cut: Vec<CutFit>,
    pub skipped_cuts: Vec<usize>,
    pub joint: ExpFit,
}

impl DecayFit {
    pub fn beta(&self) -> f64 {
        self.joint.beta
    }

    pub fn alpha(&self) -> f64 {
        self.joint.alpha
    }
}

fn usable_points(spectrum: &[f64]) -> Vec<(f64, f64)> {
    let max = spectrum.iter().cloned().fold(0.0, f64::max);
    let floor = SPECTRUM_FLOOR * max;
    spectrum
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > floor && s > 0.0)
        .map(|(i, &s)| ((i + 1) as f64, s.ln()))
        .collect()
}

fn regress(points: &[(f64, f64)]) -> ExpFit {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    ExpFit {
        alpha: intercept.exp(),
        beta: -slope,
        r_squared,
        points: points.len(),
    }
}

/// Per-cut and pooled exponential fits of singular-value spectra.
/// Cuts with fewer than two values above the floor are skipped with a warning.
pub fn fit_decay(spectra: &[Vec<f64>]) -> Result<DecayFit> {
    let mut per_cut = Vec::new();
    let mut skipped_cuts = Vec::new();
    let mut pooled = Vec::new();
    for (cut, spectrum) in spectra.iter().enumerate() {
        let pts = usable_points(spectrum);
        let distinct = pts.first().is_some_and(|f| pts.iter().any(|p| p.0 != f.0));
        if pts.len() < 2 || !distinct {
            log::warn!("cut {cut}: fewer than two singular values above the floor, skipped");
            skipped_cuts.push(cut);
            continue;
        }
        per_cut.push(CutFit { cut, fit: regress(&pts) });
        pooled.extend(pts);
    }
    if per_cut.is_empty() {
        return Err(Error::NoUsableSpectra);
    }
    Ok(DecayFit {
        per_cut,
        skipped_cuts,
        joint: regress(&pooled),
    })
}

/// Fraction of squared weight outside the leading `chi` Schmidt values when
/// `σ_k ∝ e^{−βk}` for `k = 1..n`:
/// `(e^{−2βχ} − e^{−2βN}) / (1 − e^{−2βN})`.
/// Returns the `β → 0` limit `(N − χ)/N` for `β = 0`.
pub fn chi_bound(beta: f64, chi: usize, n: usize) -> f64 {
    if chi >= n {
        return 0.0;
    }
    if beta == 0.0 {
        return (n - chi) as f64 / n as f64;
    }
    let (chi, n) = (chi as f64, n as f64);
    let tail = -(-2.0 * beta * chi).exp() * (-2.0 * beta * (n - chi)).exp_m1();
    tail / -(-2.0 * beta * n).exp_m1()
}

/// Retained weight `e^{β(N−χ)} csch(βN) sinh(χβ) = 1 − chi_bound`.
pub fn chi_retained_fraction(beta: f64, chi: usize, n: usize) -> f64 {
    1.0 - chi_bound(beta, chi, n)
}

/// `F_circuit / F_optimal`.
pub fn optimality_ratio(circuit_fidelity: f64, optimal_fidelity: f64) -> Result<f64> {
    if !(optimal_fidelity > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "optimal fidelity must be positive, got {optimal_fidelity}"
        )));
    }
    Ok(circuit_fidelity / optimal_fidelity)
}

/// `max_k |f′(x_k)|` over the grid. Built-in densities use closed-form
/// derivatives; custom ones use differences at the grid spacing.
pub fn max_derivative(spec: &DistributionSpec, n: usize) -> Result<f64> {
    check_dense(n)?;
    let g = Grid::for_spec(spec, n)?;
    let pts = g.points();
    let h = g.spacing();
    let mut worst = 0.0f64;
    for (i, &x) in pts.iter().enumerate() {
        let d = match spec.pdf_derivative(x) {
            Some(d) => d,
            None => {
                let lo = if i == 0 { x } else { x - h };
                let hi = if i + 1 == pts.len() { x } else { x + h };
                (spec.pdf(hi)? - spec.pdf(lo)?) / (hi - lo)
            }
        };
        worst = worst.max(d.abs());
    }
    Ok(worst)
}

/// Upper bound `L √f̃′ / 2^{N/2 − 1}` on the entropy added by growing the
/// register from `N` to `N + 1` qubits; `L` is the domain length.
pub fn vne_increment_bound(domain_length: f64, max_derivative: f64, n: usize) -> f64 {
    domain_length * max_derivative.sqrt() / 2f64.powf(n as f64 / 2.0 - 1.0)
}
