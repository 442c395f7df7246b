//! Dense real linear algebra: SVD, QR, least squares and null-space completion.

mod lstsq;
mod matrix;
mod nullspace;
mod qr;
mod svd;

pub use lstsq::{expand_affine, polyfit_least_squares, polyval};
pub use matrix::Matrix;
pub use nullspace::null_space_completion;
pub use qr::qr_orthonormalize;
pub(crate) use qr::thin_qr;
pub use svd::{singular_values, svd, truncated_svd, SvdResult, TruncationPolicy};
