use super::{check_dense, log2_len};
use crate::error::{Error, Result};
use crate::linalg::{singular_values, Matrix};

/// Full singular spectrum of every big-endian unfolding `2^j × 2^(N-j)`,
/// for cuts `j = 1..N-1`.
pub fn unfolding_spectra(v: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = log2_len(v.len())?;
    check_dense(n)?;
    (1..n)
        .map(|j| {
            let rows = 1usize << j;
            let unfolding = Matrix::from_row_major(rows, v.len() / rows, v.to_vec())?;
            singular_values(&unfolding)
        })
        .collect()
}

/// Von Neumann entropy `-Σ λ ln λ` of the normalized squared spectrum.
pub fn bipartite_vne(spectrum: &[f64]) -> Result<f64> {
    let total: f64 = spectrum.iter().map(|s| s * s).sum();
    if total == 0.0 || !total.is_finite() {
        return Err(Error::ZeroNorm);
    }
    Ok(spectrum
        .iter()
        .map(|s| s * s / total)
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.ln())
        .sum())
}
