//! Independent reference computations used only by tests.
//!
//! Nothing here calls into the library; each routine is a direct,
//! brute-force evaluation of the quantity under test.

/// Singular values by one-sided Jacobi rotations, sorted non-increasing.
pub fn jacobi_singular_values(rows: &[Vec<f64>]) -> Vec<f64> {
    let m = rows.len();
    let n = rows[0].len();
    // Work on the orientation with more rows than columns.
    let mut cols: Vec<Vec<f64>> = if m >= n {
        (0..n).map(|j| (0..m).map(|i| rows[i][j]).collect()).collect()
    } else {
        rows.to_vec()
    };
    let k = cols.len();
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..k {
            for q in p + 1..k {
                let alpha: f64 = cols[p].iter().map(|x| x * x).sum();
                let beta: f64 = cols[q].iter().map(|x| x * x).sum();
                let gamma: f64 = cols[p].iter().zip(&cols[q]).map(|(a, b)| a * b).sum();
                if gamma == 0.0 {
                    continue;
                }
                off = off.max(gamma.abs() / (alpha * beta).sqrt().max(f64::MIN_POSITIVE));
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (cp, cq) = (cols[p].clone(), cols[q].clone());
                for i in 0..cp.len() {
                    cols[p][i] = c * cp[i] - s * cq[i];
                    cols[q][i] = s * cp[i] + c * cq[i];
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    let mut s: Vec<f64> = cols.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Big-endian bits of `index` over `n` positions.
pub fn bits(index: usize, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((index >> (n - 1 - i)) & 1) as u8).collect()
}

pub fn grid_point(a: f64, b: f64, n: usize, k: usize) -> f64 {
    a + k as f64 * (b - a) / ((1usize << n) - 1) as f64
}

pub fn poly_eval_direct(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().enumerate().map(|(j, c)| c * x.powi(j as i32)).sum()
}

/// Scale of the terms in a direct polynomial evaluation, for relative tolerances.
pub fn poly_eval_scale(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().enumerate().map(|(j, c)| (c * x.powi(j as i32)).abs()).sum()
}

pub fn normalize(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gaussian_pdf(x: f64, mu: f64, sigma: f64) -> f64 {
    (-(x - mu).powi(2) / (2.0 * sigma * sigma)).exp() / ((2.0 * std::f64::consts::PI).sqrt() * sigma)
}

/// sqrt(pdf) on the uniform grid, 2-normalized.
pub fn sqrt_normalized(pdf: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..1usize << n).map(|k| pdf(grid_point(a, b, n, k)).sqrt()).collect();
    normalize(&v)
}

/// Dense unfolding `2^j × 2^(n-j)` of a big-endian state vector as rows.
pub fn unfolding(v: &[f64], n: usize, j: usize) -> Vec<Vec<f64>> {
    let cols = 1usize << (n - j);
    v.chunks(cols).map(|c| c.to_vec()).collect()
}

/// Dense best rank-`chi` approximation error per cut via Jacobi spectra.
pub fn discarded_weight(v: &[f64], n: usize, j: usize, chi: usize) -> f64 {
    let s = jacobi_singular_values(&unfolding(v, n, j));
    s.iter().skip(chi).map(|x| x * x).sum()
}
