//! End-to-end encoding, parameter sweeps and file formats.

mod circuit_json;
mod config;
mod encode;
mod format;
mod oracle;
mod spectra;
mod sweep;

pub use circuit_json::{circuit_from_json, circuit_to_json, deserialize_circuit, serialize_circuit, FORMAT_VERSION};
pub use config::{
    parse_domain, parse_list, ConfigEcho, RunConfig, Settings, DEFAULT_CHI, DEFAULT_DEGREE, DEFAULT_DOMAIN,
    DEFAULT_LOGNORMAL_DOMAIN, DEFAULT_MU, DEFAULT_QUBITS, DEFAULT_SAMPLES, DEFAULT_SIGMA, DEFAULT_SUPPORT_BIT,
};
pub use encode::{
    circuit_fidelity, encode, encode_detailed, error_decomposition, Encoding, FidelityReference, RunReport,
    StageTimings,
};
pub use format::{fmt_sig, round_sig, to_report_json, SIG_DIGITS};
pub use oracle::{oracle_compare, svd_fidelity, OptimalityReport};
pub use spectra::{spectra, spectra_entry, write_spectra_csv, SpectraEntry};
pub use sweep::{sweep_degree, sweep_sigma, write_sweep_csv, RowMetrics, SweepRow, CSV_HEADER};
