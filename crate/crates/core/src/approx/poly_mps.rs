//! Exact MPS encodings of polynomials on a uniform grid.
//!
//! With `x(k) = Σ_i t_i`, where site `i` contributes `t_i = s_i · 2^(N-1-i) · Δ`
//! (plus the offset `a` on site 0), a degree-`p` polynomial factors through
//! the binomial expansion of `(t_i + rest)^α`. Site 0 emits the Taylor
//! coefficients `φ_β(t_0) = Σ_j c_j C(j, β) t_0^(j-β)`, interior sites apply the
//! lower-triangular transfer `C(α, β) t^(α-β)`, and the last site emits `t^α`.
//! Bond dimension is `p + 1`.

use rayon::prelude::*;

use super::{Grid, PiecewisePoly};
use crate::error::{Error, Result};
use crate::mps::{add, Core, Mps};

fn binomial_table(p: usize) -> Vec<Vec<f64>> {
    let mut c = vec![vec![0.0; p + 1]; p + 1];
    for n in 0..=p {
        c[n][0] = 1.0;
        for k in 1..=n {
            c[n][k] = c[n - 1][k - 1] + if k < n { c[n - 1][k] } else { 0.0 };
        }
    }
    c
}

/// Site contribution `t_i(s)` to the grid coordinate.
fn site_shift(g: &Grid, i: usize, s: usize) -> f64 {
    let step = g.len() / g.intervals();
    let place = 2f64.powi((g.n_qubits - 1 - i) as i32);
    let base = if i == 0 { g.a } else { 0.0 };
    base + s as f64 * place * step
}

/// MPS whose amplitude at grid index `k` is `Σ_j coeffs[j] · x(k)^j`.
pub fn poly_mps(coeffs: &[f64], g: &Grid) -> Result<Mps> {
    if coeffs.is_empty() {
        return Err(Error::InvalidArgument("polynomial needs at least one coefficient".into()));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidArgument("non-finite polynomial coefficient".into()));
    }
    let n = g.n_qubits;
    let p = coeffs.len() - 1;
    let d = p + 1;
    if n == 1 {
        let vals = (0..2)
            .map(|s| {
                let x = site_shift(g, 0, s);
                coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
            })
            .collect();
        return Mps::new(vec![Core::new(1, 1, vals)?]);
    }
    let binom = binomial_table(p);
    let mut cores = Vec::with_capacity(n);

    let mut first = Core::zeros(1, d);
    for s in 0..2 {
        let t = site_shift(g, 0, s);
        for beta in 0..d {
            let phi: f64 = (beta..d)
                .map(|j| coeffs[j] * binom[j][beta] * t.powi((j - beta) as i32))
                .sum();
            first.set(0, s, beta, phi);
        }
    }
    cores.push(first);

    for i in 1..n - 1 {
        let mut core = Core::zeros(d, d);
        for s in 0..2 {
            let t = site_shift(g, i, s);
            for alpha in 0..d {
                for beta in 0..=alpha {
                    core.set(alpha, s, beta, binom[alpha][beta] * t.powi((alpha - beta) as i32));
                }
            }
        }
        cores.push(core);
    }

    let mut last = Core::zeros(d, 1);
    for s in 0..2 {
        let t = site_shift(g, n - 1, s);
        for alpha in 0..d {
            last.set(alpha, s, 0, t.powi(alpha as i32));
        }
    }
    cores.push(last);
    Mps::new(cores)
}

/// Zeroes the slices of the first `support_bit` sites that disagree with the
/// bits of `region`, so the amplitude vanishes outside that region.
pub fn mask_region(m: &Mps, region: usize, support_bit: usize) -> Result<Mps> {
    if support_bit > m.n_sites() {
        return Err(Error::InvalidArgument(format!(
            "support bit {support_bit} exceeds {} sites",
            m.n_sites()
        )));
    }
    if region >> support_bit != 0 {
        return Err(Error::InvalidArgument(format!(
            "region {region} out of range for support bit {support_bit}"
        )));
    }
    let mut cores = m.cores().to_vec();
    for (i, core) in cores.iter_mut().enumerate().take(support_bit) {
        let keep = (region >> (support_bit - 1 - i)) & 1;
        let drop = 1 - keep;
        for l in 0..core.left_dim() {
            for r in 0..core.right_dim() {
                core.set(l, drop, r, 0.0);
            }
        }
    }
    Mps::new(cores)
}

/// Sum of the region-masked polynomial MPS; bond dimension `2^k (p + 1)`.
pub fn assemble(pp: &PiecewisePoly, g: &Grid) -> Result<Mps> {
    let k = pp.support_bit;
    let pieces = pp
        .regions
        .par_iter()
        .map(|rp| {
            let local = poly_mps(&rp.coeffs, &g.shifted(-rp.region.x_start))?;
            if k == 0 {
                Ok(local)
            } else {
                mask_region(&local, rp.region.index, k)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut iter = pieces.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::InvalidArgument("piecewise polynomial has no regions".into()))?;
    iter.try_fold(first, |acc, m| add(&acc, &m))
}
