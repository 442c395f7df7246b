//! Target densities, grids, piecewise polynomial fits and their MPS encodings.

mod distribution;
mod grid;
mod piecewise;
mod poly_mps;

pub use distribution::{CustomPdf, Distribution, DistributionSpec};
pub use grid::{grid_point, subdivide, Grid, Region, MAX_QUBITS};
pub use piecewise::{discretization_error, fit_piecewise, target_amplitudes, PiecewisePoly, RegionPoly};
pub use poly_mps::{assemble, mask_region, poly_mps};
