use super::{Core, Form, Mps};
use crate::error::Result;
use crate::linalg::{truncated_svd, Matrix, TruncationPolicy};

/// TT-rounding: right-canonicalize, then sweep truncated SVDs left to right.
/// Each cut is truncated optimally for the current right-orthonormal basis.
pub fn tt_round(m: &Mps, policy: TruncationPolicy) -> Result<Mps> {
    tt_round_with_errors(m, policy).map(|(mps, _)| mps)
}

/// As [`tt_round`], also returning the discarded Frobenius norm at each cut.
pub fn tt_round_with_errors(m: &Mps, policy: TruncationPolicy) -> Result<(Mps, Vec<f64>)> {
    let n = m.n_sites();
    let mut cores = m.canonicalize(Form::Right).into_cores();
    let mut errors = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n - 1 {
        let dec = truncated_svd(&cores[i].left_unfolding(), policy)?;
        errors.push(dec.truncation_error);
        let carry: Matrix = dec.s_vt();
        cores[i] = Core::from_left_unfolding(dec.u);
        cores[i + 1] = Core::from_right_unfolding(carry.matmul(&cores[i + 1].right_unfolding()));
    }
    Ok((Mps::with_form(cores, Form::Left)?, errors))
}
