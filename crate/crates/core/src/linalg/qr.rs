use super::Matrix;
use crate::error::{Error, Result};

/// Householder QR of a tall matrix: `a = q·r` with orthonormal `q` columns
/// and an upper-triangular `r` whose diagonal is non-negative.
pub fn qr_orthonormalize(a: &Matrix) -> Result<(Matrix, Matrix)> {
    if a.rows() < a.cols() {
        return Err(Error::InvalidArgument(format!(
            "QR needs rows >= cols, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(thin_qr(a))
}

/// Thin QR for any shape: `q` is `m × k`, `r` is `k × n`, `k = min(m, n)`.
pub(crate) fn thin_qr(a: &Matrix) -> (Matrix, Matrix) {
    let (m, n) = (a.rows(), a.cols());
    let k = m.min(n);
    let mut work = a.clone();
    let mut reflectors: Vec<Option<Vec<f64>>> = Vec::with_capacity(k);

    for j in 0..k {
        let norm = (j..m).map(|i| work[(i, j)].powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            reflectors.push(None);
            continue;
        }
        let x0 = work[(j, j)];
        let alpha = if x0 > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..m).map(|i| work[(i, j)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            reflectors.push(None);
            continue;
        }
        v.iter_mut().for_each(|x| *x /= vnorm);
        for c in j..n {
            let dot: f64 = v.iter().enumerate().map(|(t, vi)| vi * work[(j + t, c)]).sum();
            for (t, vi) in v.iter().enumerate() {
                work[(j + t, c)] -= 2.0 * vi * dot;
            }
        }
        for i in j + 1..m {
            work[(i, j)] = 0.0;
        }
        reflectors.push(Some(v));
    }

    let mut r = Matrix::zeros(k, n);
    for i in 0..k {
        for c in i..n {
            r[(i, c)] = work[(i, c)];
        }
    }

    // Q = H_0 H_1 ... H_{k-1} applied to the first k columns of the identity.
    let mut q = Matrix::zeros(m, k);
    for i in 0..k {
        q[(i, i)] = 1.0;
    }
    for (j, v) in reflectors.iter().enumerate().rev() {
        let Some(v) = v else { continue };
        for c in 0..k {
            let dot: f64 = v.iter().enumerate().map(|(t, vi)| vi * q[(j + t, c)]).sum();
            for (t, vi) in v.iter().enumerate() {
                q[(j + t, c)] -= 2.0 * vi * dot;
            }
        }
    }

    for i in 0..k {
        if r[(i, i)] < 0.0 {
            for c in 0..n {
                r[(i, c)] = -r[(i, c)];
            }
            for row in 0..m {
                q[(row, i)] = -q[(row, i)];
            }
        }
    }
    (q, r)
}

/// Solves the upper-triangular system `r·x = b` for square `r`.
pub(crate) fn back_substitute(r: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = r.cols();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let tail: f64 = (i + 1..n).map(|j| r[(i, j)] * x[j]).sum();
        x[i] = (b[i] - tail) / r[(i, i)];
    }
    x
}
