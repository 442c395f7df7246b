use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mpsprep::circuit::validate_circuit;
use mpsprep::pipeline::{
    circuit_to_json, deserialize_circuit, encode, fmt_sig, oracle_compare, parse_domain, parse_list, serialize_circuit,
    spectra, sweep_degree, sweep_sigma, to_report_json, write_spectra_csv, write_sweep_csv, Settings, SweepRow,
};
use mpsprep::{DistributionSpec, Error, ErrorClass, Result};

#[derive(Parser)]
#[command(name = "mpsprep", version, about = "Compile smooth densities into linear-depth state-preparation circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one circuit and report its fidelity
    Encode {
        #[command(flatten)]
        run: RunArgs,
        /// Circuit JSON output (stdout when omitted and no report path is given)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Fidelity and error shares over a grid of sigma and N
    SweepSigma {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_parser = list::<f64>)]
        sigmas: Option<::std::vec::Vec<f64>>,
        #[arg(long, value_parser = list::<usize>)]
        ns: Option<::std::vec::Vec<usize>>,
        /// Comma-separated distribution names
        #[arg(long, value_parser = list::<String>)]
        dists: Option<::std::vec::Vec<String>>,
        /// CSV output (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fidelity as a function of the fitted polynomial degree
    SweepDegree {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_parser = list::<usize>)]
        degrees: Option<::std::vec::Vec<usize>>,
        #[arg(long, value_parser = list::<String>)]
        dists: Option<::std::vec::Vec<String>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unfolding spectra with decay fits, the chi bound and max |pdf'|
    Spectra {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_parser = list::<f64>)]
        sigmas: Option<::std::vec::Vec<f64>>,
        /// Singular values as CSV
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fit summary as JSON (stdout when omitted)
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Pipeline fidelity against the truncated-SVD state
    OracleCompare {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a circuit file for orthogonality and layout
    Validate {
        circuit: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args, Default)]
struct RunArgs {
    /// key = value file; flags given here take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// gaussian, lognormal, lorentzian or custom
    #[arg(long)]
    dist: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    /// Domain as a,b
    #[arg(long, value_parser = domain, allow_hyphen_values = true)]
    domain: Option<(f64, f64)>,
    /// Coefficients of a custom polynomial pdf, lowest degree first
    #[arg(long, value_parser = list::<f64>, allow_hyphen_values = true)]
    coeffs: Option<::std::vec::Vec<f64>>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    /// Fit samples per region
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    chi: Option<usize>,
    #[arg(long)]
    max_sweeps: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// tt-round or random
    #[arg(long)]
    init: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

fn list<T: std::str::FromStr>(s: &str) -> std::result::Result<Vec<T>, String> {
    parse_list(s).map_err(|e| e.to_string())
}

fn domain(s: &str) -> std::result::Result<(f64, f64), String> {
    parse_domain(s).map_err(|e| e.to_string())
}

impl RunArgs {
    fn settings(&self) -> Result<Settings> {
        let file = match &self.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::default(),
        };
        let cli = Settings {
            dist: self.dist.clone(),
            mu: self.mu,
            sigma: self.sigma,
            domain: self.domain,
            coeffs: self.coeffs.clone(),
            n: self.n,
            k: self.k,
            p: self.p,
            samples: self.samples,
            chi: self.chi,
            max_sweeps: self.max_sweeps,
            tol: self.tol,
            init: self.init.clone(),
            seed: self.seed,
            ..Settings::default()
        };
        Ok(file.merge(cli))
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    let mut out = sink(path)?;
    writeln!(out, "{text}")?;
    out.flush()?;
    Ok(())
}

fn family(s: &Settings, names: Option<Vec<String>>) -> Result<Vec<DistributionSpec>> {
    let names = names
        .or_else(|| s.dists.clone())
        .unwrap_or_else(|| match &s.dist {
            Some(d) => vec![d.clone()],
            None => ["gaussian", "lognormal", "lorentzian"].map(String::from).to_vec(),
        });
    names.iter().map(|name| s.spec_for(name)).collect()
}

fn write_rows(rows: &[SweepRow], out: Option<&Path>) -> Result<()> {
    let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
    if failed > 0 {
        log::warn!("{failed} of {} sweep cells failed", rows.len());
    }
    let mut w = sink(out)?;
    write_sweep_csv(rows, &mut w)?;
    w.flush()?;
    Ok(())
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Encode { run, out, report } => {
            let cfg = run.settings()?.run_config()?;
            let (circuit, rep) = encode(&cfg)?;
            match (&out, &report) {
                (Some(path), _) => serialize_circuit(&circuit, path)?,
                (None, None) => emit(&circuit_to_json(&circuit)?, None)?,
                (None, Some(_)) => {}
            }
            if let Some(path) = &report {
                emit(&to_report_json(&rep)?, Some(path))?;
            }
            eprintln!(
                "fidelity {} ({} gates, bonds {:?})",
                fmt_sig(rep.fidelity),
                rep.gate_count,
                rep.bond_dims
            );
        }
        Command::SweepSigma { run, sigmas, ns, dists, out } => {
            let s = run.settings()?;
            let specs = family(&s, dists)?;
            let base = s.run_config_for(specs.first().cloned().ok_or_else(|| Error::Config("no distributions".into()))?)?;
            let sigmas = sigmas.or(s.sigmas.clone()).unwrap_or_else(|| (1..=10).map(|i| i as f64 / 10.0).collect());
            let ns = ns.or(s.ns.clone()).unwrap_or_else(|| vec![base.n_qubits]);
            write_rows(&sweep_sigma(&specs, &sigmas, &ns, &base), out.as_deref())?;
        }
        Command::SweepDegree { run, degrees, dists, out } => {
            let s = run.settings()?;
            let specs = family(&s, dists)?;
            let base = s.run_config_for(specs.first().cloned().ok_or_else(|| Error::Config("no distributions".into()))?)?;
            let degrees = degrees.or(s.degrees.clone()).unwrap_or_else(|| (1..=5).collect());
            if degrees.contains(&0) {
                return Err(Error::Config("degrees must be at least 1".into()));
            }
            write_rows(&sweep_degree(&specs, &degrees, &base), out.as_deref())?;
        }
        Command::Spectra { run, sigmas, out, report } => {
            let s = run.settings()?;
            let cfg = s.run_config()?;
            let sigmas = sigmas.or(s.sigmas.clone()).unwrap_or_else(|| vec![cfg.spec.sigma]);
            let entries = spectra(&cfg.spec, cfg.n_qubits, &sigmas, cfg.target_chi)?;
            if let Some(path) = &out {
                let mut w = sink(Some(path))?;
                write_spectra_csv(&entries, &mut w)?;
                w.flush()?;
            }
            emit(&to_report_json(&entries)?, report.as_deref())?;
        }
        Command::OracleCompare { run, report } => {
            let cfg = run.settings()?.run_config()?;
            let r = oracle_compare(&cfg)?;
            if r.ratio_exceeds_one {
                log::warn!("pipeline fidelity exceeds the truncated-SVD fidelity (R = {})", fmt_sig(r.ratio));
            }
            emit(&to_report_json(&r)?, report.as_deref())?;
        }
        Command::Validate { circuit, report } => {
            let c = deserialize_circuit(&circuit)?;
            let v = validate_circuit(&c);
            emit(&to_report_json(&v)?, report.as_deref())?;
            if !v.is_valid() {
                return Err(Error::InvalidCircuit(v.failures.join("; ")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Usage => 1,
                ErrorClass::Numerical => 2,
                ErrorClass::Io => 3,
            })
        }
    }
}
