//! Matrix product states over qubits.
//!
//! Sites are ordered big-endian: site 0 carries the most significant bit of
//! the basis index. Core `i` has shape `(left, 2, right)` with unit boundary
//! bonds.

mod als;
mod arith;
mod build;
mod canonical;
mod round;
mod spectra;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub use als::{compress_als, compress_als_with_report, AnsatzInit, CompressionOptions, CompressionReport};
pub use arith::{add, overlap};
pub use build::{to_mps_exact, tt_svd, TtSvd};
pub use canonical::Form;
pub use round::{tt_round, tt_round_with_errors};
pub use spectra::{bipartite_vne, unfolding_spectra};

pub const DEFAULT_DENSE_LIMIT: usize = 24;

/// Largest qubit count for which dense `2^N` vectors are materialized.
/// Overridden by the `MPSPREP_DENSE_LIMIT` environment variable.
pub fn dense_limit() -> usize {
    std::env::var("MPSPREP_DENSE_LIMIT")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_DENSE_LIMIT)
}

pub(crate) fn check_dense(n: usize) -> Result<()> {
    let limit = dense_limit();
    if n > limit {
        return Err(Error::DenseLimit { n, limit });
    }
    Ok(())
}

/// One three-index tensor of the chain, stored as `[left][bit][right]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Core {
    left: usize,
    right: usize,
    data: Vec<f64>,
}

impl Core {
    pub fn new(left: usize, right: usize, data: Vec<f64>) -> Result<Self> {
        if left == 0 || right == 0 {
            return Err(Error::InvalidArgument("bond dimensions must be positive".into()));
        }
        if data.len() != left * 2 * right {
            return Err(Error::InvalidArgument(format!(
                "core of shape ({left}, 2, {right}) needs {} entries, got {}",
                left * 2 * right,
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite core entry".into()));
        }
        Ok(Self { left, right, data })
    }

    pub fn zeros(left: usize, right: usize) -> Self {
        Self {
            left,
            right,
            data: vec![0.0; left * 2 * right],
        }
    }

    pub fn left_dim(&self) -> usize {
        self.left
    }

    pub fn right_dim(&self) -> usize {
        self.right
    }

    pub fn get(&self, l: usize, s: usize, r: usize) -> f64 {
        self.data[(l * 2 + s) * self.right + r]
    }

    pub fn set(&mut self, l: usize, s: usize, r: usize, v: f64) {
        self.data[(l * 2 + s) * self.right + r] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// The `left × right` matrix selected by one physical bit.
    pub fn slice(&self, s: usize) -> Matrix {
        let mut m = Matrix::zeros(self.left, self.right);
        for l in 0..self.left {
            for r in 0..self.right {
                m[(l, r)] = self.get(l, s, r);
            }
        }
        m
    }

    /// `(left·2) × right` reshaping.
    pub fn left_unfolding(&self) -> Matrix {
        Matrix::from_raw(self.left * 2, self.right, self.data.clone())
    }

    /// `left × (2·right)` reshaping.
    pub fn right_unfolding(&self) -> Matrix {
        Matrix::from_raw(self.left, 2 * self.right, self.data.clone())
    }

    pub(crate) fn from_left_unfolding(m: Matrix) -> Self {
        debug_assert_eq!(m.rows() % 2, 0);
        let (left, right) = (m.rows() / 2, m.cols());
        Self {
            left,
            right,
            data: m.into_vec(),
        }
    }

    pub(crate) fn from_right_unfolding(m: Matrix) -> Self {
        debug_assert_eq!(m.cols() % 2, 0);
        let (left, right) = (m.rows(), m.cols() / 2);
        Self {
            left,
            right,
            data: m.into_vec(),
        }
    }

    pub(crate) fn scaled(&self, f: f64) -> Self {
        Self {
            left: self.left,
            right: self.right,
            data: self.data.iter().map(|x| x * f).collect(),
        }
    }

    /// Maximum deviation of the left-isometry condition `Σ_s Mˢᵀ Mˢ = I`.
    pub fn left_isometry_error(&self) -> f64 {
        self.left_unfolding().column_orthonormality_error()
    }

    /// Maximum deviation of the right-isometry condition `Σ_s Mˢ Mˢᵀ = I`.
    pub fn right_isometry_error(&self) -> f64 {
        self.right_unfolding().row_orthonormality_error()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mps {
    cores: Vec<Core>,
    form: Form,
}

impl Mps {
    pub fn new(cores: Vec<Core>) -> Result<Self> {
        Self::with_form(cores, Form::None)
    }

    pub(crate) fn with_form(cores: Vec<Core>, form: Form) -> Result<Self> {
        if cores.is_empty() {
            return Err(Error::InvalidArgument("an MPS needs at least one site".into()));
        }
        if cores[0].left != 1 || cores[cores.len() - 1].right != 1 {
            return Err(Error::InvalidArgument("boundary bond dimensions must be 1".into()));
        }
        for (i, pair) in cores.windows(2).enumerate() {
            if pair[0].right != pair[1].left {
                return Err(Error::InvalidArgument(format!(
                    "bond mismatch between sites {i} and {}: {} vs {}",
                    i + 1,
                    pair[0].right,
                    pair[1].left
                )));
            }
        }
        Ok(Self { cores, form })
    }

    /// Product state with per-site amplitudes `(a_0, a_1)`.
    pub fn product(sites: &[[f64; 2]]) -> Result<Self> {
        let cores = sites
            .iter()
            .map(|s| Core::new(1, 1, s.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(cores)
    }

    /// Computational basis state `|index⟩` on `n` qubits.
    pub fn basis_state(n: usize, index: usize) -> Result<Self> {
        if n == 0 || index >> n != 0 {
            return Err(Error::InvalidArgument(format!("basis index {index} out of range for {n} qubits")));
        }
        let sites: Vec<[f64; 2]> = (0..n)
            .map(|i| if (index >> (n - 1 - i)) & 1 == 1 { [0.0, 1.0] } else { [1.0, 0.0] })
            .collect();
        Self::product(&sites)
    }

    /// Random MPS with bond dimensions `min(chi, 2^i, 2^(n-i))` and entries in `[-1, 1)`.
    pub fn random(n: usize, chi: usize, seed: u64) -> Result<Self> {
        if n == 0 || chi == 0 {
            return Err(Error::InvalidArgument("random MPS needs n >= 1 and chi >= 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bonds = capped_bonds(n, chi);
        let cores = (0..n)
            .map(|i| {
                let (l, r) = (bonds[i], bonds[i + 1]);
                let data = (0..l * 2 * r).map(|_| rng.gen_range(-1.0..1.0)).collect();
                Core { left: l, right: r, data }
            })
            .collect();
        Self::new(cores)
    }

    pub fn n_sites(&self) -> usize {
        self.cores.len()
    }

    pub fn cores(&self) -> &[Core] {
        &self.cores
    }

    pub fn core(&self, i: usize) -> &Core {
        &self.cores[i]
    }

    pub fn form(&self) -> Form {
        self.form
    }

    /// Bond dimensions `α_0..α_N`, including both unit boundaries.
    pub fn bond_dims(&self) -> Vec<usize> {
        std::iter::once(1).chain(self.cores.iter().map(|c| c.right)).collect()
    }

    pub fn max_bond(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }

    pub(crate) fn into_cores(self) -> Vec<Core> {
        self.cores
    }

    /// Amplitude of the basis string `bits` (big-endian, one entry per site).
    pub fn amplitude(&self, bits: &[u8]) -> Result<f64> {
        if bits.len() != self.n_sites() {
            return Err(Error::InvalidArgument(format!(
                "bit string of length {} for {} sites",
                bits.len(),
                self.n_sites()
            )));
        }
        let mut row = vec![1.0];
        for (core, &b) in self.cores.iter().zip(bits) {
            if b > 1 {
                return Err(Error::InvalidArgument(format!("bit value {b}")));
            }
            let s = b as usize;
            let mut next = vec![0.0; core.right];
            for (l, &x) in row.iter().enumerate() {
                if x == 0.0 {
                    continue;
                }
                for (r, out) in next.iter_mut().enumerate() {
                    *out += x * core.get(l, s, r);
                }
            }
            row = next;
        }
        Ok(row[0])
    }

    /// Amplitude at basis index `k`, bits read big-endian.
    pub fn amplitude_at(&self, k: usize) -> Result<f64> {
        let n = self.n_sites();
        let bits: Vec<u8> = (0..n).map(|i| ((k >> (n - 1 - i)) & 1) as u8).collect();
        self.amplitude(&bits)
    }

    /// Dense `2^N` amplitude vector, big-endian indexed.
    pub fn to_statevector(&self) -> Result<Vec<f64>> {
        let n = self.n_sites();
        check_dense(n)?;
        // Rows: prefix index; columns: open bond.
        let mut acc = vec![1.0];
        let mut width = 1;
        for core in &self.cores {
            let r = core.right;
            let mut next = vec![0.0; acc.len() / width * 2 * r];
            for (p, prefix) in acc.chunks(width).enumerate() {
                for s in 0..2 {
                    let out = &mut next[(p * 2 + s) * r..(p * 2 + s + 1) * r];
                    for (l, &x) in prefix.iter().enumerate() {
                        if x == 0.0 {
                            continue;
                        }
                        let src = &core.data[(l * 2 + s) * r..(l * 2 + s + 1) * r];
                        for (o, &c) in out.iter_mut().zip(src) {
                            *o += x * c;
                        }
                    }
                }
            }
            acc = next;
            width = r;
        }
        Ok(acc)
    }

    pub fn norm(&self) -> f64 {
        overlap(self, self).map(|o| o.max(0.0).sqrt()).unwrap_or(0.0)
    }

    pub fn normalize(&self) -> Result<Mps> {
        let nrm = self.norm();
        if nrm == 0.0 || !nrm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scale(1.0 / nrm))
    }

    /// Multiplies every amplitude by `f`, applied at the orthogonality center.
    pub fn scale(&self, f: f64) -> Mps {
        let target = match self.form {
            Form::Left => self.n_sites() - 1,
            Form::Mixed(c) => c,
            Form::Right | Form::None => 0,
        };
        let mut cores = self.cores.clone();
        cores[target] = cores[target].scaled(f);
        Mps {
            cores,
            form: self.form,
        }
    }
}

/// `α_i = min(chi, 2^i, 2^(n-i))` for `i = 0..=n`.
pub(crate) fn capped_bonds(n: usize, chi: usize) -> Vec<usize> {
    (0..=n)
        .map(|i| {
            let left = 1usize.checked_shl(i.min(62) as u32).unwrap_or(usize::MAX);
            let right = 1usize.checked_shl((n - i).min(62) as u32).unwrap_or(usize::MAX);
            chi.min(left).min(right)
        })
        .collect()
}

pub(crate) fn log2_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(len.trailing_zeros() as usize)
}
