use super::qr::{back_substitute, thin_qr};
use super::Matrix;
use crate::error::{Error, Result};

/// Least-squares polynomial fit, coefficients lowest degree first.
///
/// The fit is solved in the affine coordinate `t ∈ [-1, 1]` spanning the
/// abscissae and then expanded back into powers of `x`.
pub fn polyfit_least_squares(xs: &[f64], ys: &[f64], degree: usize) -> Result<Vec<f64>> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidArgument(format!(
            "{} abscissae but {} ordinates",
            xs.len(),
            ys.len()
        )));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite sample".into()));
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    if sorted.len() < degree + 1 {
        return Err(Error::Underdetermined {
            distinct: sorted.len(),
            degree,
        });
    }
    let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
    let center = 0.5 * (lo + hi);
    let half_width = 0.5 * (hi - lo);
    // Degree 0 with a single abscissa has zero width.
    let half_width = if half_width > 0.0 { half_width } else { 1.0 };

    let cols = degree + 1;
    let mut vander = Matrix::zeros(xs.len(), cols);
    for (i, &x) in xs.iter().enumerate() {
        let t = (x - center) / half_width;
        let mut pow = 1.0;
        for j in 0..cols {
            vander[(i, j)] = pow;
            pow *= t;
        }
    }
    let (q, r) = thin_qr(&vander);
    let qty = q.transpose().matvec(ys);
    let scaled = back_substitute(&r, &qty[..cols]);
    Ok(expand_affine(&scaled, center, half_width))
}

/// Given `p(t) = Σ b_i t^i` with `t = (x - center) / scale`, returns the
/// coefficients of the same polynomial in powers of `x`.
pub fn expand_affine(b: &[f64], center: f64, scale: f64) -> Vec<f64> {
    let n = b.len();
    let mut out = vec![0.0; n];
    for (i, &bi) in b.iter().enumerate() {
        let lead = bi / scale.powi(i as i32);
        let mut binom = 1.0;
        for m in 0..=i {
            // C(i, m) · (-center)^(i-m)
            out[m] += lead * binom * (-center).powi((i - m) as i32);
            binom = binom * (i - m) as f64 / (m + 1) as f64;
        }
    }
    out
}

pub fn polyval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn exact_line() {
        let c = polyfit_least_squares(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0], 1).unwrap();
        assert!(close(&c, &[1.0, 2.0], 1e-12), "{c:?}");
    }

    #[test]
    fn exact_parabola() {
        let c = polyfit_least_squares(&[0.0, 1.0, 2.0, 3.0], &[0.0, 1.0, 4.0, 9.0], 2).unwrap();
        assert!(close(&c, &[0.0, 0.0, 1.0], 1e-12), "{c:?}");
    }

    #[test]
    fn underdetermined() {
        let err = polyfit_least_squares(&[1.0, 1.0, 2.0], &[0.0, 1.0, 2.0], 2).unwrap_err();
        assert!(matches!(err, Error::Underdetermined { distinct: 2, degree: 2 }));
    }

    #[test]
    fn residual_decreases_with_degree() {
        let xs: Vec<f64> = (0..50).map(|i| 0.25 * i as f64 / 49.0).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| ((-x * x / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt()).sqrt())
            .collect();
        let resid = |deg| {
            let c = polyfit_least_squares(&xs, &ys, deg).unwrap();
            xs.iter()
                .zip(&ys)
                .map(|(&x, &y)| (polyval(&c, x) - y).powi(2))
                .sum::<f64>()
                .sqrt()
        };
        assert!(resid(3) < resid(2));
    }

    #[test]
    fn expand_affine_matches_direct() {
        let b = [0.3, -1.2, 0.7, 2.0];
        let (c, s) = (1.5, 0.25);
        let a = expand_affine(&b, c, s);
        for x in [1.2, 1.5, 1.71] {
            let t = (x - c) / s;
            assert!((polyval(&a, x) - polyval(&b, t)).abs() < 1e-10);
        }
    }
}
