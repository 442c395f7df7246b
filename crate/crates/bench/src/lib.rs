//! Fixed workloads shared by the criterion benchmarks.

use mpsprep::approx::{assemble, fit_piecewise};
use mpsprep::{extract_circuit, Circuit, CompressionOptions, DistributionSpec, Grid, Mps, PiecewisePoly};

pub fn gaussian() -> DistributionSpec {
    DistributionSpec::gaussian(1.0, 1.0, (0.0, 2.0)).expect("valid spec")
}

/// Eight cubic regions of the standard Gaussian on `n` qubits.
pub fn piecewise(n: usize) -> (PiecewisePoly, Grid) {
    let g = Grid::for_spec(&gaussian(), n).expect("valid grid");
    (fit_piecewise(&gaussian(), &g, 3, 3, 64).expect("fit"), g)
}

/// Uncompressed sum of region MPS, bond dimension 32.
pub fn assembled(n: usize) -> Mps {
    let (pp, g) = piecewise(n);
    assemble(&pp, &g).expect("assemble")
}

/// A fixed number of sweeps so the cost per qubit is comparable across sizes.
pub fn fixed_sweeps(sweeps: usize) -> CompressionOptions {
    CompressionOptions {
        max_sweeps: sweeps,
        convergence_tol: 1e-300,
        ..CompressionOptions::with_chi(2)
    }
}

pub fn compressed(n: usize) -> Mps {
    mpsprep::compress_als(&assembled(n), &CompressionOptions::with_chi(2)).expect("compress")
}

pub fn circuit(n: usize) -> Circuit {
    extract_circuit(&compressed(n)).expect("extract")
}
