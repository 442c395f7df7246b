use super::Matrix;
use crate::error::{Error, Result};

const ORTHONORMAL_TOL: f64 = 1e-8;

/// Completes a set of orthonormal rows to an orthonormal basis.
///
/// Candidates are the canonical basis vectors taken in index order, each
/// Gram–Schmidt-projected (twice) against everything accepted so far. A new
/// row's first significant entry is positive. Stacking the input over the
/// output gives a square orthogonal matrix.
pub fn null_space_completion(rows: &Matrix) -> Result<Matrix> {
    let (r, c) = (rows.rows(), rows.cols());
    if r >= c {
        return Err(Error::InvalidArgument(format!(
            "null-space completion needs fewer rows than columns, got {r}x{c}"
        )));
    }
    let dev = rows.row_orthonormality_error();
    if dev > ORTHONORMAL_TOL {
        return Err(Error::NotOrthonormal(dev));
    }

    // Below this residual a candidate is treated as lying in the current span;
    // at least one remaining candidate always clears it.
    let accept = 0.5 / (c as f64).sqrt();
    let mut basis: Vec<Vec<f64>> = rows.to_rows();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(c - r);
    for i in 0..c {
        if out.len() == c - r {
            break;
        }
        let mut v = vec![0.0; c];
        v[i] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let dot: f64 = b.iter().zip(&v).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < accept {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        if v.iter().find(|x| x.abs() > 1e-12).is_some_and(|&x| x < 0.0) {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        basis.push(v.clone());
        out.push(v);
    }
    if out.len() != c - r {
        return Err(Error::NotOrthonormal(dev));
    }
    Matrix::from_rows(&out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stack(a: &Matrix, b: &Matrix) -> Matrix {
        let mut rows = a.to_rows();
        rows.extend(b.to_rows());
        Matrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn canonical_input() {
        let input = Matrix::from_rows(&[vec![1.0, 0.0, 0.0, 0.0]]).unwrap();
        let out = null_space_completion(&input).unwrap();
        let expected = Matrix::from_rows(&[
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert!(out.sub(&expected).max_abs() < 1e-15);
    }

    #[test]
    fn diagonal_input() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let input = Matrix::from_rows(&[vec![h, h, 0.0, 0.0]]).unwrap();
        let out = null_space_completion(&input).unwrap();
        assert_eq!(out.rows(), 3);
        assert!(out.row_orthonormality_error() < 1e-12);
        for i in 0..3 {
            let dot: f64 = out.row(i).iter().zip(input.row(0)).map(|(a, b)| a * b).sum();
            assert!(dot.abs() < 1e-12);
        }
    }

    #[test]
    fn two_rows_complete_to_orthogonal() {
        // Rows of a normalized two-site core reshaped as 2 x 4.
        let (a, b) = (0.6f64, 0.8f64);
        let input = Matrix::from_rows(&[vec![a, 0.0, b, 0.0], vec![0.0, b, 0.0, -a]]).unwrap();
        let out = null_space_completion(&input).unwrap();
        let q = stack(&input, &out);
        assert!(q.column_orthonormality_error() <= 1e-10);
    }

    #[test]
    fn rejects_non_orthonormal() {
        let input = Matrix::from_rows(&[vec![1.0, 1.0, 0.0]]).unwrap();
        assert!(matches!(null_space_completion(&input), Err(Error::NotOrthonormal(_))));
    }

    #[test]
    fn deterministic() {
        let input = Matrix::from_rows(&[vec![0.5, 0.5, 0.5, 0.5]]).unwrap();
        let a = null_space_completion(&input).unwrap();
        let b = null_space_completion(&input).unwrap();
        assert_eq!(a.as_slice(), b.as_slice());
    }
}
