use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::polyval;

/// A user-supplied density.
#[derive(Clone)]
pub enum CustomPdf {
    /// `pdf(x) = Σ c_j x^j`, lowest degree first.
    Polynomial(Vec<f64>),
    Function {
        name: String,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl CustomPdf {
    pub fn function(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        CustomPdf::Function {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    fn eval(&self, x: f64) -> f64 {
        match self {
            CustomPdf::Polynomial(c) => polyval(c, x),
            CustomPdf::Function { f, .. } => f(x),
        }
    }
}

impl fmt::Debug for CustomPdf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CustomPdf::Polynomial(c) => f.debug_tuple("Polynomial").field(c).finish(),
            CustomPdf::Function { name, .. } => f.debug_tuple("Function").field(name).finish(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Distribution {
    Gaussian,
    Lognormal,
    Lorentzian,
    Custom(CustomPdf),
}

impl Distribution {
    pub fn name(&self) -> &str {
        match self {
            Distribution::Gaussian => "gaussian",
            Distribution::Lognormal => "lognormal",
            Distribution::Lorentzian => "lorentzian",
            Distribution::Custom(CustomPdf::Polynomial(_)) => "custom",
            Distribution::Custom(CustomPdf::Function { name, .. }) => name,
        }
    }

    /// Parses one of the built-in names.
    pub fn parse_builtin(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "normal" | "g" => Ok(Distribution::Gaussian),
            "lognormal" | "ln" => Ok(Distribution::Lognormal),
            "lorentzian" | "cauchy" | "lz" => Ok(Distribution::Lorentzian),
            other => Err(Error::Config(format!("unknown distribution {other:?}"))),
        }
    }
}

/// Target density with its parameters and the domain `[a, b]`.
#[derive(Debug, Clone)]
pub struct DistributionSpec {
    pub kind: Distribution,
    pub mu: f64,
    pub sigma: f64,
    pub domain: (f64, f64),
}

impl DistributionSpec {
    pub fn new(kind: Distribution, mu: f64, sigma: f64, domain: (f64, f64)) -> Result<Self> {
        let spec = Self { kind, mu, sigma, domain };
        spec.validate()?;
        Ok(spec)
    }

    pub fn gaussian(mu: f64, sigma: f64, domain: (f64, f64)) -> Result<Self> {
        Self::new(Distribution::Gaussian, mu, sigma, domain)
    }

    pub fn lognormal(mu: f64, sigma: f64, domain: (f64, f64)) -> Result<Self> {
        Self::new(Distribution::Lognormal, mu, sigma, domain)
    }

    pub fn lorentzian(mu: f64, sigma: f64, domain: (f64, f64)) -> Result<Self> {
        Self::new(Distribution::Lorentzian, mu, sigma, domain)
    }

    pub fn custom(pdf: CustomPdf, domain: (f64, f64)) -> Result<Self> {
        Self::new(Distribution::Custom(pdf), 0.0, 1.0, domain)
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidArgument(format!("domain [{a}, {b}] must satisfy a < b")));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!("sigma must be positive, got {}", self.sigma)));
        }
        if !self.mu.is_finite() {
            return Err(Error::InvalidArgument("mu must be finite".into()));
        }
        if matches!(self.kind, Distribution::Lognormal) && a < 0.0 {
            return Err(Error::InvalidArgument(
                "lognormal needs a non-negative lower bound (0 selects one grid spacing)".into(),
            ));
        }
        Ok(())
    }

    /// Density at `x`.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        let (mu, sigma) = (self.mu, self.sigma);
        match &self.kind {
            Distribution::Gaussian => Ok(gaussian(x, mu, sigma)),
            Distribution::Lognormal => {
                if x <= 0.0 {
                    return Err(Error::InvalidArgument(format!("lognormal pdf undefined at x = {x}")));
                }
                Ok(gaussian(x.ln(), mu, sigma) / x)
            }
            Distribution::Lorentzian => Ok(sigma / (2.0 * PI) / ((x - mu).powi(2) + sigma * sigma)),
            Distribution::Custom(c) => Ok(c.eval(x)),
        }
    }

    /// Closed-form `d pdf / dx` for the built-in families; `None` for custom densities.
    pub fn pdf_derivative(&self, x: f64) -> Option<f64> {
        let (mu, sigma) = (self.mu, self.sigma);
        match &self.kind {
            Distribution::Gaussian => Some(-(x - mu) / (sigma * sigma) * gaussian(x, mu, sigma)),
            Distribution::Lognormal => {
                if x <= 0.0 {
                    return None;
                }
                let g = gaussian(x.ln(), mu, sigma);
                Some(g / (x * x) * (-1.0 - (x.ln() - mu) / (sigma * sigma)))
            }
            Distribution::Lorentzian => {
                let d = (x - mu).powi(2) + sigma * sigma;
                Some(-sigma / PI * (x - mu) / (d * d))
            }
            Distribution::Custom(_) => None,
        }
    }

    /// The same density with a different width.
    pub fn with_sigma(&self, sigma: f64) -> Self {
        Self {
            sigma,
            ..self.clone()
        }
    }
}

fn gaussian(x: f64, mu: f64, sigma: f64) -> f64 {
    (-(x - mu).powi(2) / (2.0 * sigma * sigma)).exp() / ((2.0 * PI).sqrt() * sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_peak() {
        let s = DistributionSpec::gaussian(0.0, 1.0, (-1.0, 1.0)).unwrap();
        assert!((s.pdf(0.0).unwrap() - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        assert!((s.pdf(0.0).unwrap() - 0.39894).abs() < 1e-5);
    }

    #[test]
    fn lorentzian_peak() {
        let s = DistributionSpec::lorentzian(0.0, 1.0, (-1.0, 1.0)).unwrap();
        assert!((s.pdf(0.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((s.pdf(0.0).unwrap() - 0.15915).abs() < 1e-5);
    }

    #[test]
    fn lognormal_at_e() {
        let s = DistributionSpec::lognormal(1.0, 1.0, (0.0, 5.0)).unwrap();
        let e = std::f64::consts::E;
        let expected = 1.0 / e / (2.0 * PI).sqrt();
        assert!((s.pdf(e).unwrap() - expected).abs() < 1e-15);
        assert!((s.pdf(e).unwrap() - 0.14676).abs() < 1e-5);
        assert!(s.pdf(0.0).is_err());
        assert!(s.pdf(-1.0).is_err());
    }

    #[test]
    fn invalid_specs() {
        assert!(DistributionSpec::gaussian(0.0, 0.0, (0.0, 1.0)).is_err());
        assert!(DistributionSpec::gaussian(0.0, 1.0, (1.0, 1.0)).is_err());
        assert!(DistributionSpec::lognormal(0.0, 1.0, (-1.0, 1.0)).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let specs = [
            DistributionSpec::gaussian(1.0, 0.3, (0.0, 2.0)).unwrap(),
            DistributionSpec::lognormal(1.0, 0.5, (0.1, 5.0)).unwrap(),
            DistributionSpec::lorentzian(1.0, 0.2, (0.0, 2.0)).unwrap(),
        ];
        let h = 1e-6;
        for s in &specs {
            for x in [0.3, 0.9, 1.4, 1.95] {
                let fd = (s.pdf(x + h).unwrap() - s.pdf(x - h).unwrap()) / (2.0 * h);
                let exact = s.pdf_derivative(x).unwrap();
                assert!((fd - exact).abs() < 1e-6 * exact.abs().max(1.0), "{:?} at {x}", s.kind);
            }
        }
    }
}
