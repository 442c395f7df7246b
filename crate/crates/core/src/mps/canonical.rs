use super::{Core, Mps};
use crate::linalg::thin_qr;

/// Gauge of an MPS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Form {
    None,
    /// Every core but the last is a left isometry.
    Left,
    /// Every core but the first is a right isometry.
    Right,
    /// Left isometries before the center, right isometries after it.
    Mixed(usize),
}

impl Mps {
    /// Brings the MPS into left- or right-canonical form by a QR sweep.
    /// Amplitudes are unchanged; bonds larger than the local rank shrink.
    pub fn canonicalize(&self, form: Form) -> Mps {
        match form {
            Form::Left => left_sweep(self.cores().to_vec()),
            Form::Right => right_sweep(self.cores().to_vec()),
            Form::Mixed(center) => {
                let n = self.n_sites();
                let center = center.min(n - 1);
                let mut cores = self.cores().to_vec();
                push_right(&mut cores, 0..center);
                push_left(&mut cores, center + 1..n);
                Mps { cores, form: Form::Mixed(center) }
            }
            Form::None => self.clone(),
        }
    }

    /// Largest isometry violation over the sites the current form constrains.
    pub fn isometry_error(&self) -> f64 {
        let n = self.n_sites();
        let (left_sites, right_sites) = match self.form {
            Form::None => return f64::INFINITY,
            Form::Left => (0..n - 1, n..n),
            Form::Right => (0..0, 1..n),
            Form::Mixed(c) => (0..c, c + 1..n),
        };
        let l = left_sites.map(|i| self.core(i).left_isometry_error());
        let r = right_sites.map(|i| self.core(i).right_isometry_error());
        l.chain(r).fold(0.0, f64::max)
    }
}

fn left_sweep(mut cores: Vec<Core>) -> Mps {
    let n = cores.len();
    push_right(&mut cores, 0..n - 1);
    Mps { cores, form: Form::Left }
}

fn right_sweep(mut cores: Vec<Core>) -> Mps {
    let n = cores.len();
    push_left(&mut cores, 1..n);
    Mps { cores, form: Form::Right }
}

/// Left-orthonormalizes each site in `sites` (ascending), pushing `R` rightwards.
fn push_right(cores: &mut [Core], sites: std::ops::Range<usize>) {
    for i in sites {
        let (q, r) = thin_qr(&cores[i].left_unfolding());
        cores[i] = Core::from_left_unfolding(q);
        let next = r.matmul(&cores[i + 1].right_unfolding());
        cores[i + 1] = Core::from_right_unfolding(next);
    }
}

/// Right-orthonormalizes each site in `sites` (descending), pushing `L` leftwards.
fn push_left(cores: &mut [Core], sites: std::ops::Range<usize>) {
    for i in sites.rev() {
        let (q, r) = thin_qr(&cores[i].right_unfolding().transpose());
        cores[i] = Core::from_right_unfolding(q.transpose());
        let prev = cores[i - 1].left_unfolding().matmul(&r.transpose());
        cores[i - 1] = Core::from_left_unfolding(prev);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_dev(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn left_canonical_random() {
        let m = Mps::random(8, 6, 5).unwrap();
        let c = m.canonicalize(Form::Left);
        assert!(c.isometry_error() <= 1e-10);
        let dev = max_dev(&m.to_statevector().unwrap(), &c.to_statevector().unwrap());
        assert!(dev <= 1e-10);
    }

    #[test]
    fn right_canonical_random() {
        let m = Mps::random(7, 4, 6).unwrap();
        let c = m.canonicalize(Form::Right);
        assert!(c.isometry_error() <= 1e-10);
        assert!(max_dev(&m.to_statevector().unwrap(), &c.to_statevector().unwrap()) <= 1e-10);
    }

    #[test]
    fn mixed_canonical() {
        let m = Mps::random(7, 4, 7).unwrap();
        let c = m.canonicalize(Form::Mixed(3));
        assert!(c.isometry_error() <= 1e-10);
        assert!(max_dev(&m.to_statevector().unwrap(), &c.to_statevector().unwrap()) <= 1e-10);
    }

    #[test]
    fn idempotent() {
        let c = Mps::random(6, 3, 8).unwrap().canonicalize(Form::Left);
        let cc = c.canonicalize(Form::Left);
        assert!(max_dev(&c.to_statevector().unwrap(), &cc.to_statevector().unwrap()) <= 1e-12);
    }

    #[test]
    fn oversized_bonds_shrink() {
        use crate::mps::add;
        let a = Mps::product(&[[1.0, 0.5]; 4]).unwrap();
        let doubled = add(&add(&a, &a).unwrap(), &a).unwrap();
        assert_eq!(doubled.bond_dims(), vec![1, 3, 3, 3, 1]);
        let c = doubled.canonicalize(Form::Left);
        assert_eq!(c.bond_dims(), vec![1, 2, 3, 3, 1]);
        assert!(max_dev(&doubled.to_statevector().unwrap(), &c.to_statevector().unwrap()) <= 1e-12);
    }
}
