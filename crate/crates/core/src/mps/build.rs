use super::{check_dense, log2_len, Core, Form, Mps};
use crate::error::{Error, Result};
use crate::linalg::{truncated_svd, Matrix, TruncationPolicy};

/// Result of a TT-SVD sweep over a dense vector.
#[derive(Debug, Clone)]
pub struct TtSvd {
    pub mps: Mps,
    /// Frobenius norm discarded at each of the `N - 1` cuts.
    pub truncation_errors: Vec<f64>,
}

impl TtSvd {
    /// `sqrt(Σ ε_j²)`, the upper bound on the total reconstruction error.
    pub fn error_bound(&self) -> f64 {
        self.truncation_errors.iter().map(|e| e * e).sum::<f64>().sqrt()
    }
}

/// Sequential truncated SVDs of the unfolding matrices, left to right.
/// The returned MPS is left-canonical.
pub fn tt_svd(v: &[f64], policy: TruncationPolicy) -> Result<TtSvd> {
    let n = log2_len(v.len())?;
    check_dense(n)?;
    if v.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroNorm);
    }
    let mut cores = Vec::with_capacity(n);
    let mut errors = Vec::with_capacity(n - 1);
    let mut bond = 1;
    let mut rest = Matrix::from_row_major(2, v.len() / 2, v.to_vec())?;
    for _ in 0..n - 1 {
        let dec = truncated_svd(&rest, policy)?;
        errors.push(dec.truncation_error);
        let next_bond = dec.rank();
        let carry = dec.s_vt();
        cores.push(Core::from_left_unfolding(dec.u));
        debug_assert_eq!(cores.last().map(Core::left_dim), Some(bond));
        let remaining = carry.cols() / 2;
        rest = Matrix::from_raw(next_bond * 2, remaining, carry.into_vec());
        bond = next_bond;
    }
    cores.push(Core::from_left_unfolding(rest));
    Ok(TtSvd {
        mps: Mps::with_form(cores, Form::Left)?,
        truncation_errors: errors,
    })
}

pub fn to_mps_exact(v: &[f64], policy: TruncationPolicy) -> Result<Mps> {
    tt_svd(v, policy).map(|t| t.mps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(len: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
    }

    #[test]
    fn basis_vector_is_product_state() {
        let m = to_mps_exact(&[1.0, 0.0, 0.0, 0.0], TruncationPolicy::EXACT).unwrap();
        assert_eq!(m.max_bond(), 1);
        assert_eq!(m.to_statevector().unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn exact_roundtrip() {
        let v = random_vec(256, 1);
        let m = to_mps_exact(&v, TruncationPolicy::EXACT).unwrap();
        let back = m.to_statevector().unwrap();
        let dev = v.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(dev <= 1e-12, "{dev}");
        for i in 0..m.n_sites() - 1 {
            assert!(m.core(i).left_isometry_error() < 1e-12);
        }
    }

    #[test]
    fn amplitudes_of_random_eight_vector() {
        let v = random_vec(8, 3);
        let m = to_mps_exact(&v, TruncationPolicy::EXACT).unwrap();
        for (k, &x) in v.iter().enumerate() {
            assert!((m.amplitude_at(k).unwrap() - x).abs() <= 1e-12);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(to_mps_exact(&[0.0; 4], TruncationPolicy::EXACT), Err(Error::ZeroNorm)));
        assert!(matches!(to_mps_exact(&[1.0; 6], TruncationPolicy::EXACT), Err(Error::NotPowerOfTwo(6))));
    }

    #[test]
    fn truncation_respects_error_bound() {
        let v = random_vec(1024, 8);
        let t = tt_svd(&v, TruncationPolicy::max_rank(3)).unwrap();
        assert!(t.mps.max_bond() <= 3);
        let back = t.mps.to_statevector().unwrap();
        let err = v.iter().zip(&back).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        assert!(err <= t.error_bound() + 1e-10);
    }
}
