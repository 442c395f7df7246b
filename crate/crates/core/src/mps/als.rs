//! Single-site variational compression.
//!
//! The ansatz is kept in mixed-canonical form with the orthogonality center
//! on the site being updated. In that gauge the local normal equations of
//! `max ⟨ansatz|target⟩` subject to unit norm reduce to projecting the target
//! through the cached left/right environments, so every update is a handful of
//! small matrix products and the sweep costs `O(N χ³)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{capped_bonds, overlap, tt_round, Core, Form, Mps};
use crate::error::{Error, Result};
use crate::linalg::{thin_qr, Matrix, TruncationPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AnsatzInit {
    TtRound,
    Random { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompressionOptions {
    pub target_chi: usize,
    pub max_sweeps: usize,
    /// Stop once the relative change in overlap over one sweep drops below this.
    pub convergence_tol: f64,
    pub init: AnsatzInit,
}

impl Default for CompressionOptions {
    fn default() -> Self {
        Self {
            target_chi: 2,
            max_sweeps: 50,
            convergence_tol: 1e-10,
            init: AnsatzInit::TtRound,
        }
    }
}

impl CompressionOptions {
    pub fn with_chi(target_chi: usize) -> Self {
        Self {
            target_chi,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.target_chi == 0 {
            return Err(Error::InvalidArgument("target_chi must be at least 1".into()));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidArgument("max_sweeps must be at least 1".into()));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::InvalidArgument("convergence_tol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompressionReport {
    /// Overlap with the normalized target: the initial ansatz, then after each sweep.
    pub overlaps: Vec<f64>,
    pub sweeps: usize,
    pub converged: bool,
}

impl CompressionReport {
    pub fn initial_overlap(&self) -> f64 {
        self.overlaps[0]
    }

    pub fn final_overlap(&self) -> f64 {
        *self.overlaps.last().unwrap_or(&0.0)
    }
}

pub fn compress_als(m: &Mps, opts: &CompressionOptions) -> Result<Mps> {
    compress_als_with_report(m, opts).map(|(mps, _)| mps)
}

/// Compresses `m` to bond dimension `opts.target_chi`. The result is
/// normalized and left-canonical.
pub fn compress_als_with_report(m: &Mps, opts: &CompressionOptions) -> Result<(Mps, CompressionReport)> {
    opts.validate()?;
    let target_norm = m.norm();
    if target_norm == 0.0 || !target_norm.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let n = m.n_sites();
    let ansatz = initial_ansatz(m, opts)?;
    let initial = overlap(&ansatz, m)? / target_norm;

    let mut sweeper = Sweeper::new(m, ansatz.into_cores());
    let mut overlaps = vec![initial.abs()];
    let mut converged = false;
    let mut sweeps = 0;
    if n == 1 {
        sweeper.optimize(0);
        overlaps.push(sweeper.last_overlap / target_norm);
        converged = true;
        sweeps = 1;
    } else {
        while sweeps < opts.max_sweeps {
            for i in (1..n).rev() {
                sweeper.optimize(i);
                sweeper.move_left(i);
            }
            for i in 0..n - 1 {
                sweeper.optimize(i);
                sweeper.move_right(i);
            }
            sweeper.optimize(n - 1);
            sweeps += 1;
            let current = sweeper.last_overlap / target_norm;
            let previous = *overlaps.last().unwrap_or(&0.0);
            overlaps.push(current);
            if (current - previous).abs() <= opts.convergence_tol * current.abs() {
                converged = true;
                break;
            }
        }
    }
    let mps = Mps::with_form(sweeper.cores, Form::Left)?;
    Ok((
        mps,
        CompressionReport {
            overlaps,
            sweeps,
            converged,
        },
    ))
}

fn initial_ansatz(m: &Mps, opts: &CompressionOptions) -> Result<Mps> {
    let ansatz = match opts.init {
        AnsatzInit::TtRound => tt_round(m, TruncationPolicy::max_rank(opts.target_chi))?,
        AnsatzInit::Random { seed } => {
            let n = m.n_sites();
            let bonds = capped_bonds(n, opts.target_chi);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cores = (0..n)
                .map(|i| {
                    let (l, r) = (bonds[i], bonds[i + 1]);
                    Core::new(l, r, (0..l * 2 * r).map(|_| rng.gen_range(-1.0..1.0)).collect())
                })
                .collect::<Result<Vec<_>>>()?;
            Mps::new(cores)?.canonicalize(Form::Left)
        }
    };
    ansatz.normalize()
}

/// Sweep state: ansatz cores plus cached environments against the target.
struct Sweeper<'a> {
    target: &'a Mps,
    cores: Vec<Core>,
    /// `left[i]`: contraction of sites `< i`, shape `ansatz bond i × target bond i`.
    left: Vec<Matrix>,
    /// `right[i]`: contraction of sites `>= i`, same shape convention.
    right: Vec<Matrix>,
    last_overlap: f64,
}

impl<'a> Sweeper<'a> {
    /// Expects `cores` left-canonical with the center on the last site.
    fn new(target: &'a Mps, cores: Vec<Core>) -> Self {
        let n = cores.len();
        let unit = Matrix::identity(1);
        let mut left = vec![unit.clone(); n + 1];
        for i in 0..n.saturating_sub(1) {
            left[i + 1] = extend_left(&left[i], &cores[i], target.core(i));
        }
        Self {
            target,
            cores,
            left,
            right: vec![unit; n + 1],
            last_overlap: 0.0,
        }
    }

    /// Replaces core `i` by the normalized projection of the target.
    fn optimize(&mut self, i: usize) {
        let t = self.target.core(i);
        // x[l][s][r'] = Σ_l' L[l][l'] T[l'][s][r']
        let x = self.left[i].matmul(&t.right_unfolding());
        let a = self.left[i].rows();
        let x = Matrix::from_raw(a * 2, t.right_dim(), x.into_vec());
        let projected = x.matmul(&self.right[i + 1].transpose());
        let nrm = projected.frobenius_norm();
        self.last_overlap = nrm;
        if nrm > 0.0 {
            self.cores[i] = Core::from_left_unfolding(projected.scale(1.0 / nrm));
        }
    }

    fn move_right(&mut self, i: usize) {
        let (q, r) = thin_qr(&self.cores[i].left_unfolding());
        self.cores[i] = Core::from_left_unfolding(q);
        let next = r.matmul(&self.cores[i + 1].right_unfolding());
        self.cores[i + 1] = Core::from_right_unfolding(next);
        self.left[i + 1] = extend_left(&self.left[i], &self.cores[i], self.target.core(i));
    }

    fn move_left(&mut self, i: usize) {
        let (q, r) = thin_qr(&self.cores[i].right_unfolding().transpose());
        self.cores[i] = Core::from_right_unfolding(q.transpose());
        let prev = self.cores[i - 1].left_unfolding().matmul(&r.transpose());
        self.cores[i - 1] = Core::from_left_unfolding(prev);
        self.right[i] = extend_right(&self.right[i + 1], &self.cores[i], self.target.core(i));
    }
}

/// `L'[r][r'] = Σ_{l,l',s} A[l][s][r] L[l][l'] T[l'][s][r']`
fn extend_left(env: &Matrix, ansatz: &Core, target: &Core) -> Matrix {
    let x = env.matmul(&target.right_unfolding());
    let x = Matrix::from_raw(env.rows() * 2, target.right_dim(), x.into_vec());
    ansatz.left_unfolding().transpose().matmul(&x)
}

/// `R'[l][l'] = Σ_{s,r,r'} A[l][s][r] T[l'][s][r'] R[r][r']`
fn extend_right(env: &Matrix, ansatz: &Core, target: &Core) -> Matrix {
    let y = target.left_unfolding().matmul(&env.transpose());
    let y = Matrix::from_raw(target.left_dim(), 2 * env.rows(), y.into_vec());
    ansatz.right_unfolding().matmul(&y.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mps::add;

    #[test]
    fn fixed_point_when_already_small() {
        let m = Mps::random(8, 2, 1).unwrap().normalize().unwrap();
        let opts = CompressionOptions { max_sweeps: 1, ..CompressionOptions::with_chi(2) };
        let c = compress_als(&m, &opts).unwrap();
        assert!((overlap(&c, &m).unwrap().abs() - 1.0).abs() <= 1e-10);
        assert!((c.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn improves_on_rounding() {
        let m = Mps::random(8, 8, 2).unwrap();
        let (c, rep) = compress_als_with_report(&m, &CompressionOptions::with_chi(2)).unwrap();
        let rounded = tt_round(&m, TruncationPolicy::max_rank(2)).unwrap().normalize().unwrap();
        let base = overlap(&rounded, &m).unwrap().abs() / m.norm();
        let got = overlap(&c, &m).unwrap().abs() / m.norm();
        assert!(got >= base - 1e-12, "{got} < {base}");
        assert!(c.max_bond() <= 2);
        for w in rep.overlaps.windows(2) {
            assert!(w[1] >= w[0] - 1e-12, "{:?}", rep.overlaps);
        }
    }

    #[test]
    fn random_init_converges() {
        let target = Mps::random(6, 2, 3).unwrap();
        let opts = CompressionOptions {
            init: AnsatzInit::Random { seed: 7 },
            max_sweeps: 100,
            ..CompressionOptions::with_chi(2)
        };
        let (c, rep) = compress_als_with_report(&target, &opts).unwrap();
        let fid = overlap(&c, &target).unwrap().abs() / target.norm();
        assert!(fid > 1.0 - 1e-8, "{fid} {:?}", rep.overlaps);
    }

    #[test]
    fn zero_input_is_rejected() {
        let z = Mps::product(&[[0.0, 0.0]; 3]).unwrap();
        assert!(matches!(compress_als(&z, &CompressionOptions::default()), Err(Error::ZeroNorm)));
    }

    #[test]
    fn invalid_options() {
        let m = Mps::random(3, 2, 0).unwrap();
        let bad = CompressionOptions { target_chi: 0, ..Default::default() };
        assert!(compress_als(&m, &bad).is_err());
        let bad = CompressionOptions { convergence_tol: 0.0, ..Default::default() };
        assert!(compress_als(&m, &bad).is_err());
    }

    #[test]
    fn sum_of_copies_compresses_exactly() {
        let m = Mps::random(6, 2, 4).unwrap();
        let big = add(&add(&m, &m).unwrap(), &m).unwrap();
        let c = compress_als(&big, &CompressionOptions::with_chi(2)).unwrap();
        let fid = overlap(&c, &big).unwrap().abs() / big.norm();
        assert!((fid - 1.0).abs() < 1e-10);
    }

    #[test]
    fn single_site() {
        let m = Mps::product(&[[3.0, 4.0]]).unwrap();
        let c = compress_als(&m, &CompressionOptions::default()).unwrap();
        let v = c.to_statevector().unwrap();
        assert!((v[0] - 0.6).abs() < 1e-14 && (v[1] - 0.8).abs() < 1e-14);
    }
}
