use nalgebra::linalg::SVD;

use super::Matrix;
use crate::error::{Error, Result};

/// Which singular triplets a truncated SVD keeps.
///
/// `max_rank` caps the number of retained values; `threshold` drops every
/// singular value at or below it. Both may be combined. [`TruncationPolicy::EXACT`]
/// drops only exact zeros; the `Default` keeps everything.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TruncationPolicy {
    pub max_rank: Option<usize>,
    pub threshold: Option<f64>,
}

impl TruncationPolicy {
    pub const EXACT: TruncationPolicy = TruncationPolicy {
        max_rank: None,
        threshold: Some(0.0),
    };

    pub fn max_rank(chi: usize) -> Self {
        Self {
            max_rank: Some(chi),
            threshold: None,
        }
    }

    pub fn threshold(delta: f64) -> Self {
        Self {
            max_rank: None,
            threshold: Some(delta),
        }
    }

    pub fn with_threshold(mut self, delta: f64) -> Self {
        self.threshold = Some(delta);
        self
    }

    /// Number of leading values of a sorted spectrum this policy keeps.
    pub fn retained(&self, spectrum: &[f64]) -> usize {
        let mut keep = spectrum.len();
        if let Some(delta) = self.threshold {
            keep = spectrum.iter().take_while(|&&s| s > delta).count();
        }
        if let Some(chi) = self.max_rank {
            keep = keep.min(chi);
        }
        keep
    }
}

#[derive(Debug, Clone)]
pub struct SvdResult {
    /// Left singular vectors as columns.
    pub u: Matrix,
    /// Singular values, non-increasing.
    pub s: Vec<f64>,
    /// Right singular vectors as rows.
    pub vt: Matrix,
    /// Frobenius norm of the discarded part.
    pub truncation_error: f64,
}

impl SvdResult {
    pub fn rank(&self) -> usize {
        self.s.len()
    }

    pub fn reconstruct(&self) -> Matrix {
        let mut us = self.u.clone();
        for i in 0..us.rows() {
            for (j, s) in self.s.iter().enumerate() {
                us[(i, j)] *= s;
            }
        }
        us.matmul(&self.vt)
    }

    /// `diag(s)·vt`, the remainder carried to the next site in a TT sweep.
    pub fn s_vt(&self) -> Matrix {
        let mut out = self.vt.clone();
        for (i, s) in self.s.iter().enumerate() {
            for j in 0..out.cols() {
                out[(i, j)] *= s;
            }
        }
        out
    }
}

const SIGN_TOL: f64 = 1e-12;

fn iteration_budget(a: &Matrix) -> usize {
    200 * a.rows().max(a.cols()).max(10)
}

/// Full thin SVD: `min(rows, cols)` singular triplets, sorted, with the
/// first significant entry of every left singular vector made positive.
pub fn svd(a: &Matrix) -> Result<SvdResult> {
    let (rows, cols) = (a.rows(), a.cols());
    let dec = SVD::try_new(a.to_nalgebra(), true, true, f64::EPSILON, iteration_budget(a))
        .ok_or(Error::SvdNoConvergence { rows, cols })?;
    let (Some(u), Some(vt)) = (dec.u, dec.v_t) else {
        return Err(Error::SvdNoConvergence { rows, cols });
    };
    let mut u = Matrix::from_nalgebra(&u);
    let mut vt = Matrix::from_nalgebra(&vt);
    let raw: Vec<f64> = dec.singular_values.iter().copied().collect();

    // nalgebra's 2x2 and 3x3 fast paths bypass its own sort.
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&i, &j| raw[j].total_cmp(&raw[i]));
    let s: Vec<f64> = order.iter().map(|&i| raw[i].max(0.0)).collect();
    if order.iter().enumerate().any(|(k, &i)| k != i) {
        let u_old = u.clone();
        let vt_old = vt.clone();
        for (k, &i) in order.iter().enumerate() {
            for r in 0..rows {
                u[(r, k)] = u_old[(r, i)];
            }
            for c in 0..cols {
                vt[(k, c)] = vt_old[(i, c)];
            }
        }
    }

    for k in 0..s.len() {
        let flip = (0..rows)
            .map(|r| u[(r, k)])
            .find(|x| x.abs() > SIGN_TOL)
            .is_some_and(|x| x < 0.0);
        if flip {
            for r in 0..rows {
                u[(r, k)] = -u[(r, k)];
            }
            for c in 0..cols {
                vt[(k, c)] = -vt[(k, c)];
            }
        }
    }

    Ok(SvdResult {
        u,
        s,
        vt,
        truncation_error: 0.0,
    })
}

/// Singular values only, non-increasing.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    let (rows, cols) = (a.rows(), a.cols());
    let dec = SVD::try_new(a.to_nalgebra(), false, false, f64::EPSILON, iteration_budget(a))
        .ok_or(Error::SvdNoConvergence { rows, cols })?;
    let mut s: Vec<f64> = dec.singular_values.iter().map(|x| x.max(0.0)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// SVD keeping only the triplets admitted by `policy`.
///
/// `truncation_error` is `sqrt(Σ σ_j²)` over the discarded values, which is the
/// Frobenius distance to the best approximation of the retained rank.
pub fn truncated_svd(a: &Matrix, policy: TruncationPolicy) -> Result<SvdResult> {
    let full = svd(a)?;
    let keep = policy.retained(&full.s);
    if keep == 0 {
        if full.s.first().is_some_and(|&s| s > 0.0) {
            return Err(Error::EmptyTruncation);
        }
        // Zero matrix: keep a single null triplet so shapes stay valid.
        return Ok(SvdResult {
            u: take_columns(&full.u, 1),
            s: vec![0.0],
            vt: take_rows(&full.vt, 1),
            truncation_error: 0.0,
        });
    }
    let truncation_error = full.s[keep..].iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(SvdResult {
        u: take_columns(&full.u, keep),
        s: full.s[..keep].to_vec(),
        vt: take_rows(&full.vt, keep),
        truncation_error,
    })
}

fn take_columns(m: &Matrix, k: usize) -> Matrix {
    let mut out = Matrix::zeros(m.rows(), k);
    for i in 0..m.rows() {
        for j in 0..k {
            out[(i, j)] = m[(i, j)];
        }
    }
    out
}

fn take_rows(m: &Matrix, k: usize) -> Matrix {
    Matrix::from_raw(k, m.cols(), m.as_slice()[..k * m.cols()].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::tests_support::random_matrix;
    use crate::oracle;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn identity_spectrum() {
        let r = svd(&Matrix::identity(2)).unwrap();
        assert!(close(&r.s, &[1.0, 1.0], 1e-15));
        assert_eq!(r.truncation_error, 0.0);
    }

    #[test]
    fn rank_one_spectrum() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        let r = svd(&a).unwrap();
        assert!(close(&r.s, &[5.0, 0.0], 1e-12), "{:?}", r.s);
    }

    #[test]
    fn random_reconstruction() {
        let a = random_matrix(8, 6, 11);
        let r = svd(&a).unwrap();
        assert_eq!(r.s.len(), 6);
        assert!(r.reconstruct().sub(&a).frobenius_norm() <= 1e-10);
        assert!(r.u.column_orthonormality_error() <= 1e-10);
        assert!(r.vt.row_orthonormality_error() <= 1e-10);
    }

    #[test]
    fn wide_matrix() {
        let a = random_matrix(3, 9, 5);
        let r = svd(&a).unwrap();
        assert_eq!((r.u.rows(), r.u.cols(), r.vt.rows(), r.vt.cols()), (3, 3, 3, 9));
        assert!(r.reconstruct().sub(&a).frobenius_norm() <= 1e-12);
    }

    #[test]
    fn sign_convention_first_entry_positive() {
        let a = random_matrix(7, 5, 2);
        let r = svd(&a).unwrap();
        for k in 0..r.s.len() {
            let first = r.u.column(k).into_iter().find(|x| x.abs() > SIGN_TOL).unwrap();
            assert!(first > 0.0);
        }
    }

    #[test]
    fn truncate_identity() {
        let r = truncated_svd(&Matrix::identity(2), TruncationPolicy::max_rank(1)).unwrap();
        assert_eq!(r.s, vec![1.0]);
        assert!((r.truncation_error - 1.0).abs() < 1e-15);
    }

    #[test]
    fn truncate_diagonal() {
        let r = truncated_svd(&Matrix::diag(&[3.0, 2.0, 1.0]), TruncationPolicy::max_rank(2)).unwrap();
        assert!(close(&r.s, &[3.0, 2.0], 1e-14));
        assert!((r.truncation_error - 1.0).abs() < 1e-14);
    }

    #[test]
    fn truncate_threshold_and_rank() {
        let a = Matrix::diag(&[5.0, 4.0, 0.5, 0.1]);
        let p = TruncationPolicy::max_rank(3).with_threshold(0.2);
        let r = truncated_svd(&a, p).unwrap();
        assert_eq!(r.rank(), 3);
        assert!((r.truncation_error - 0.1).abs() < 1e-14);
    }

    #[test]
    fn truncate_everything_is_an_error() {
        let a = Matrix::diag(&[1.0, 0.5]);
        let err = truncated_svd(&a, TruncationPolicy::threshold(2.0)).unwrap_err();
        assert!(matches!(err, Error::EmptyTruncation));
    }

    #[test]
    fn eckart_young_random_16() {
        let a = random_matrix(16, 16, 99);
        let r = truncated_svd(&a, TruncationPolicy::max_rank(4)).unwrap();
        // Distance of the rank-4 approximation, measured directly.
        let dist = r.reconstruct().sub(&a).frobenius_norm();
        assert!((dist - r.truncation_error).abs() <= 1e-10);
        // Tail of the spectrum from an independent one-sided Jacobi SVD.
        let jac = oracle::jacobi_singular_values(&a.to_rows());
        let tail: f64 = jac[4..].iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((tail - r.truncation_error).abs() <= 1e-10);
    }

    #[test]
    fn matches_jacobi_oracle() {
        for seed in 0..5 {
            let a = random_matrix(12, 7, seed);
            let s = singular_values(&a).unwrap();
            let jac = oracle::jacobi_singular_values(&a.to_rows());
            assert!(close(&s, &jac, 1e-12));
        }
    }
}
