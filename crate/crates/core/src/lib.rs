//! Linear-depth state preparation for smooth amplitude functions.
//!
//! A target density is fitted region by region with low-degree polynomials,
//! each polynomial is written exactly as a small matrix product state, the
//! pieces are summed and compressed to bond dimension 2, and the result is
//! turned into a staircase of two-qubit orthogonal gates.
//!
//! Basis indices are big-endian throughout: site and qubit 0 hold the most
//! significant bit.

pub mod analysis;
pub mod approx;
pub mod circuit;
pub mod error;
pub mod linalg;
pub mod mps;
pub mod pipeline;
pub mod sim;

pub use approx::{CustomPdf, Distribution, DistributionSpec, Grid, PiecewisePoly};
pub use circuit::{extract_circuit, validate_circuit, Circuit, Gate};
pub use error::{Error, ErrorClass, Result};
pub use linalg::{Matrix, TruncationPolicy};
pub use mps::{compress_als, tt_round, tt_svd, CompressionOptions, Core, Mps};
pub use pipeline::{encode, RunConfig, RunReport};
pub use sim::{fidelity, run, ErrorDecomposition, StateVector};

#[cfg(test)]
#[path = "../tests/common/oracle.rs"]
#[allow(dead_code)]
pub(crate) mod oracle;
