use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::approx::{CustomPdf, Distribution, DistributionSpec, MAX_QUBITS};
use crate::error::{Error, Result};
use crate::mps::{AnsatzInit, CompressionOptions};

pub const DEFAULT_QUBITS: usize = 10;
pub const DEFAULT_SUPPORT_BIT: usize = 3;
pub const DEFAULT_DEGREE: usize = 3;
pub const DEFAULT_SAMPLES: usize = 64;
pub const DEFAULT_CHI: usize = 2;
pub const DEFAULT_MU: f64 = 1.0;
pub const DEFAULT_SIGMA: f64 = 1.0;
pub const DEFAULT_DOMAIN: (f64, f64) = (0.0, 2.0);
pub const DEFAULT_LOGNORMAL_DOMAIN: (f64, f64) = (0.0, 5.0);

/// Inputs of one end-to-end encoding.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: DistributionSpec,
    pub n_qubits: usize,
    pub support_bit: usize,
    pub degree: usize,
    pub samples_per_region: usize,
    pub target_chi: usize,
    pub compression: CompressionOptions,
    pub seed: u64,
}

impl RunConfig {
    /// Defaults: `k = 3`, `p = 3`, 64 samples per region, `χ = 2`,
    /// 50 ALS sweeps with tolerance `1e-10` starting from TT-rounding.
    pub fn new(spec: DistributionSpec, n_qubits: usize) -> Self {
        Self {
            spec,
            n_qubits,
            support_bit: DEFAULT_SUPPORT_BIT,
            degree: DEFAULT_DEGREE,
            samples_per_region: DEFAULT_SAMPLES,
            target_chi: DEFAULT_CHI,
            compression: CompressionOptions::default(),
            seed: 0,
        }
    }

    pub fn with_support_bit(mut self, k: usize) -> Self {
        self.support_bit = k;
        self
    }

    pub fn with_degree(mut self, p: usize) -> Self {
        self.degree = p;
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.spec = self.spec.with_sigma(sigma);
        self
    }

    pub fn with_qubits(mut self, n: usize) -> Self {
        self.n_qubits = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.n_qubits == 0 || self.n_qubits > MAX_QUBITS {
            return Err(Error::InvalidArgument(format!(
                "n must be in 1..={MAX_QUBITS}, got {}",
                self.n_qubits
            )));
        }
        if self.support_bit >= self.n_qubits {
            return Err(Error::InvalidArgument(format!(
                "support bit k = {} must be below n = {}",
                self.support_bit, self.n_qubits
            )));
        }
        if self.target_chi == 0 {
            return Err(Error::InvalidArgument("chi must be at least 1".into()));
        }
        if self.samples_per_region < self.degree + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} samples per region cannot fit degree {}",
                self.samples_per_region, self.degree
            )));
        }
        self.compression_options().validate()
    }

    pub(crate) fn compression_options(&self) -> CompressionOptions {
        let mut opts = self.compression;
        opts.target_chi = self.target_chi;
        if let AnsatzInit::Random { .. } = opts.init {
            opts.init = AnsatzInit::Random { seed: self.seed };
        }
        opts
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            distribution: self.spec.kind.name().to_string(),
            mu: self.spec.mu,
            sigma: self.spec.sigma,
            domain: [self.spec.domain.0, self.spec.domain.1],
            n_qubits: self.n_qubits,
            support_bit: self.support_bit,
            degree: self.degree,
            samples_per_region: self.samples_per_region,
            target_chi: self.target_chi,
            max_sweeps: self.compression.max_sweeps,
            convergence_tol: self.compression.convergence_tol,
            init: match self.compression.init {
                AnsatzInit::TtRound => "tt-round".into(),
                AnsatzInit::Random { .. } => "random".into(),
            },
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub distribution: String,
    pub mu: f64,
    pub sigma: f64,
    pub domain: [f64; 2],
    pub n_qubits: usize,
    pub support_bit: usize,
    pub degree: usize,
    pub samples_per_region: usize,
    pub target_chi: usize,
    pub max_sweeps: usize,
    pub convergence_tol: f64,
    pub init: String,
    pub seed: u64,
}

/// Partially specified settings from a config file or command line.
/// `merge` lets a later layer override an earlier one field by field.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub dist: Option<String>,
    pub mu: Option<f64>,
    pub sigma: Option<f64>,
    pub domain: Option<(f64, f64)>,
    pub coeffs: Option<Vec<f64>>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub p: Option<usize>,
    pub samples: Option<usize>,
    pub chi: Option<usize>,
    pub max_sweeps: Option<usize>,
    pub tol: Option<f64>,
    pub init: Option<String>,
    pub seed: Option<u64>,
    pub sigmas: Option<Vec<f64>>,
    pub ns: Option<Vec<usize>>,
    pub degrees: Option<Vec<usize>>,
    pub dists: Option<Vec<String>>,
}

macro_rules! merge_fields {
    ($self:ident, $other:ident; $($f:ident),*) => {
        Settings { $($f: $other.$f.or($self.$f)),* }
    };
}

impl Settings {
    pub fn merge(self, other: Settings) -> Settings {
        merge_fields!(self, other; dist, mu, sigma, domain, coeffs, n, k, p, samples, chi,
            max_sweeps, tol, init, seed, sigmas, ns, degrees, dists)
    }

    /// Parses `key = value` lines; `#` starts a comment. Lists are comma-separated.
    pub fn parse(text: &str) -> Result<Settings> {
        let mut s = Settings::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let at = |e: Error| Error::Config(format!("line {}: {key}: {e}", lineno + 1));
            match key {
                "dist" | "distribution" => s.dist = Some(value.to_string()),
                "mu" => s.mu = Some(parse_one(value).map_err(at)?),
                "sigma" => s.sigma = Some(parse_one(value).map_err(at)?),
                "domain" => s.domain = Some(parse_domain(value).map_err(at)?),
                "coeffs" => s.coeffs = Some(parse_list(value).map_err(at)?),
                "n" => s.n = Some(parse_one(value).map_err(at)?),
                "k" => s.k = Some(parse_one(value).map_err(at)?),
                "p" => s.p = Some(parse_one(value).map_err(at)?),
                "samples" => s.samples = Some(parse_one(value).map_err(at)?),
                "chi" => s.chi = Some(parse_one(value).map_err(at)?),
                "max_sweeps" => s.max_sweeps = Some(parse_one(value).map_err(at)?),
                "tol" => s.tol = Some(parse_one(value).map_err(at)?),
                "init" => s.init = Some(value.to_string()),
                "seed" => s.seed = Some(parse_one(value).map_err(at)?),
                "sigmas" => s.sigmas = Some(parse_list(value).map_err(at)?),
                "ns" => s.ns = Some(parse_list(value).map_err(at)?),
                "degrees" => s.degrees = Some(parse_list(value).map_err(at)?),
                "dists" => s.dists = Some(value.split(',').map(|d| d.trim().to_string()).collect()),
                other => return Err(Error::Config(format!("line {}: unknown key {other:?}", lineno + 1))),
            }
        }
        Ok(s)
    }

    pub fn from_file(path: &Path) -> Result<Settings> {
        Settings::parse(&std::fs::read_to_string(path)?)
    }

    /// Distribution for `name` using this layer's `mu`, `sigma`, `domain` and `coeffs`.
    pub fn spec_for(&self, name: &str) -> Result<DistributionSpec> {
        let name = name.trim().to_ascii_lowercase();
        let kind = match name.as_str() {
            "custom" | "poly" | "polynomial" => {
                let coeffs = self
                    .coeffs
                    .clone()
                    .ok_or_else(|| Error::Config("custom distribution needs coeffs".into()))?;
                Distribution::Custom(CustomPdf::Polynomial(coeffs))
            }
            other => Distribution::parse_builtin(other)?,
        };
        let domain = self.domain.unwrap_or(match kind {
            Distribution::Lognormal => DEFAULT_LOGNORMAL_DOMAIN,
            _ => DEFAULT_DOMAIN,
        });
        DistributionSpec::new(
            kind,
            self.mu.unwrap_or(DEFAULT_MU),
            self.sigma.unwrap_or(DEFAULT_SIGMA),
            domain,
        )
        .map_err(usage)
    }

    pub fn spec(&self) -> Result<DistributionSpec> {
        self.spec_for(self.dist.as_deref().unwrap_or("gaussian"))
    }

    pub fn run_config_for(&self, spec: DistributionSpec) -> Result<RunConfig> {
        let mut cfg = RunConfig::new(spec, self.n.unwrap_or(DEFAULT_QUBITS));
        cfg.support_bit = self.k.unwrap_or(DEFAULT_SUPPORT_BIT);
        cfg.degree = self.p.unwrap_or(DEFAULT_DEGREE);
        cfg.samples_per_region = self.samples.unwrap_or(DEFAULT_SAMPLES);
        cfg.target_chi = self.chi.unwrap_or(DEFAULT_CHI);
        if let Some(m) = self.max_sweeps {
            cfg.compression.max_sweeps = m;
        }
        if let Some(t) = self.tol {
            cfg.compression.convergence_tol = t;
        }
        cfg.seed = self.seed.unwrap_or(0);
        cfg.compression.init = match self.init.as_deref().map(str::trim) {
            None | Some("tt-round") | Some("tt_round") => AnsatzInit::TtRound,
            Some("random") => AnsatzInit::Random { seed: cfg.seed },
            Some(other) => return Err(Error::Config(format!("unknown init {other:?}"))),
        };
        cfg.validate().map_err(usage)?;
        Ok(cfg)
    }

    pub fn run_config(&self) -> Result<RunConfig> {
        self.run_config_for(self.spec()?)
    }
}

fn usage(e: Error) -> Error {
    match e {
        Error::InvalidArgument(m) => Error::Config(m),
        other => other,
    }
}

fn parse_one<T: FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse {s:?}")))
}

pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_one).collect()
}

/// Parses `a,b`.
pub fn parse_domain(s: &str) -> Result<(f64, f64)> {
    match parse_list::<f64>(s)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(Error::Config(format!("domain must be a,b, got {s:?}"))),
    }
}
