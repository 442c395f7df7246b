use rayon::prelude::*;
use serde::Serialize;

use super::{subdivide, DistributionSpec, Grid, Region};
use crate::error::{Error, Result};
use crate::linalg::{polyfit_least_squares, polyval};
use crate::mps::check_dense;

/// One region's polynomial in the local coordinate `u = x - region.x_start`.
#[derive(Debug, Clone, Serialize)]
pub struct RegionPoly {
    pub region: Region,
    pub coeffs: Vec<f64>,
}

impl RegionPoly {
    pub fn eval(&self, x: f64) -> f64 {
        polyval(&self.coeffs, x - self.region.x_start)
    }
}

/// Independent least-squares polynomials on the `2^k` regions of a grid.
#[derive(Debug, Clone, Serialize)]
pub struct PiecewisePoly {
    pub support_bit: usize,
    pub degree: usize,
    pub regions: Vec<RegionPoly>,
}

impl PiecewisePoly {
    /// Value at grid index `k`, using the region its top bits select.
    pub fn eval_index(&self, g: &Grid, k: u64) -> f64 {
        let j = if self.support_bit == 0 {
            0
        } else {
            (k >> (g.n_qubits - self.support_bit)) as usize
        };
        self.regions[j].eval(g.point_unchecked(k))
    }

    /// Dense evaluation at every grid point.
    pub fn evaluate(&self, g: &Grid) -> Result<Vec<f64>> {
        check_dense(g.n_qubits)?;
        Ok((0..1u64 << g.n_qubits).map(|k| self.eval_index(g, k)).collect())
    }
}

/// Fits `sqrt(pdf)` on each region with a degree-`degree` polynomial from
/// `samples_per_region` evenly spaced samples spanning the region's grid points.
/// No continuity is imposed between regions.
pub fn fit_piecewise(
    spec: &DistributionSpec,
    g: &Grid,
    support_bit: usize,
    degree: usize,
    samples_per_region: usize,
) -> Result<PiecewisePoly> {
    if samples_per_region < degree + 1 {
        return Err(Error::InvalidArgument(format!(
            "{samples_per_region} samples per region cannot determine a degree-{degree} fit"
        )));
    }
    let regions = if support_bit == 0 {
        vec![Region {
            index: 0,
            first: 0,
            last: ((1u128 << g.n_qubits) - 1) as u64,
            x_start: g.a,
            x_end: g.b,
        }]
    } else {
        subdivide(g, support_bit)?
    };
    let fitted = regions
        .into_par_iter()
        .map(|region| fit_region(spec, region, degree, samples_per_region))
        .collect::<Result<Vec<_>>>()?;
    Ok(PiecewisePoly {
        support_bit,
        degree,
        regions: fitted,
    })
}

fn fit_region(spec: &DistributionSpec, region: Region, degree: usize, samples: usize) -> Result<RegionPoly> {
    let width = region.x_end - region.x_start;
    let us: Vec<f64> = (0..samples)
        .map(|i| if samples == 1 { 0.0 } else { width * i as f64 / (samples - 1) as f64 })
        .collect();
    let ys = us
        .iter()
        .map(|u| amplitude(spec, region.x_start + u))
        .collect::<Result<Vec<_>>>()?;
    let coeffs = polyfit_least_squares(&us, &ys, degree)?;
    Ok(RegionPoly { region, coeffs })
}

fn amplitude(spec: &DistributionSpec, x: f64) -> Result<f64> {
    let p = spec.pdf(x)?;
    if p < 0.0 || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("pdf is {p} at x = {x}")));
    }
    Ok(p.sqrt())
}

/// The exact reference state: `sqrt(pdf)` on the grid, 2-normalized.
pub fn target_amplitudes(spec: &DistributionSpec, n: usize) -> Result<Vec<f64>> {
    check_dense(n)?;
    let g = Grid::for_spec(spec, n)?;
    let v = g.points().into_iter().map(|x| amplitude(spec, x)).collect::<Result<Vec<_>>>()?;
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(v.into_iter().map(|x| x / norm).collect())
}

/// Largest error of holding `sqrt(pdf)` constant from each grid point to the
/// next, probed at `probes` interior points per interval.
pub fn discretization_error(spec: &DistributionSpec, n: usize, probes: usize) -> Result<f64> {
    check_dense(n)?;
    let g = Grid::for_spec(spec, n)?;
    let h = g.spacing();
    let mut worst = 0.0f64;
    for x0 in g.points().into_iter().take((1usize << n) - 1) {
        let held = amplitude(spec, x0)?;
        for i in 1..=probes {
            let x = x0 + h * i as f64 / (probes + 1) as f64;
            worst = worst.max((amplitude(spec, x)? - held).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::CustomPdf;

    #[test]
    fn exact_line_is_reproduced() {
        let spec = DistributionSpec::custom(CustomPdf::Polynomial(vec![1.0, 2.0, 1.0]), (0.0, 2.0)).unwrap();
        let g = Grid::for_spec(&spec, 6).unwrap();
        let pp = fit_piecewise(&spec, &g, 2, 1, 16).unwrap();
        for (k, x) in g.points().into_iter().enumerate() {
            assert!((pp.eval_index(&g, k as u64) - (x + 1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn gaussian_cubic_pointwise() {
        let spec = DistributionSpec::gaussian(1.0, 1.0, (0.0, 2.0)).unwrap();
        let g = Grid::for_spec(&spec, 10).unwrap();
        let pp = fit_piecewise(&spec, &g, 3, 3, 64).unwrap();
        let approx = pp.evaluate(&g).unwrap();
        let exact: Vec<f64> = g.points().iter().map(|&x| spec.pdf(x).unwrap().sqrt()).collect();
        let peak = exact.iter().cloned().fold(0.0, f64::max);
        let worst = approx.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(worst <= 1e-3 * peak, "{worst}");
    }

    #[test]
    fn residual_non_increasing_in_degree() {
        let spec = DistributionSpec::gaussian(1.0, 0.1, (0.0, 2.0)).unwrap();
        let g = Grid::for_spec(&spec, 8).unwrap();
        let exact: Vec<f64> = g.points().iter().map(|&x| spec.pdf(x).unwrap().sqrt()).collect();
        let resid = |p| {
            let v = fit_piecewise(&spec, &g, 3, p, 64).unwrap().evaluate(&g).unwrap();
            v.iter().zip(&exact).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
        };
        let r: Vec<f64> = (2..=5).map(resid).collect();
        for w in r.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-9), "{r:?}");
        }
    }

    #[test]
    fn too_few_samples() {
        let spec = DistributionSpec::gaussian(1.0, 1.0, (0.0, 2.0)).unwrap();
        let g = Grid::for_spec(&spec, 5).unwrap();
        assert!(fit_piecewise(&spec, &g, 1, 3, 3).is_err());
    }

    #[test]
    fn uniform_target() {
        let spec = DistributionSpec::custom(CustomPdf::Polynomial(vec![1.0]), (0.0, 1.0)).unwrap();
        let v = target_amplitudes(&spec, 2).unwrap();
        assert!(v.iter().all(|x| (x - 0.5).abs() < 1e-15));
    }

    #[test]
    fn symmetric_endpoints() {
        let spec = DistributionSpec::gaussian(1.0, 1.0, (0.0, 2.0)).unwrap();
        let v = target_amplitudes(&spec, 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v[0] - h).abs() < 1e-15 && (v[1] - h).abs() < 1e-15);
    }

    #[test]
    fn all_zero_pdf() {
        let spec = DistributionSpec::custom(CustomPdf::Polynomial(vec![0.0]), (0.0, 1.0)).unwrap();
        assert!(matches!(target_amplitudes(&spec, 3), Err(Error::ZeroNorm)));
    }

    #[test]
    fn negative_pdf_rejected() {
        let spec = DistributionSpec::custom(CustomPdf::Polynomial(vec![-1.0]), (0.0, 1.0)).unwrap();
        assert!(target_amplitudes(&spec, 3).is_err());
    }
}
