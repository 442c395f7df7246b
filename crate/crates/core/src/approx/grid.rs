use serde::Serialize;

use super::{Distribution, DistributionSpec};
use crate::error::{Error, Result};

/// Largest supported register; basis indices must fit in a `u64`.
pub const MAX_QUBITS: usize = 64;

/// Uniform grid of `2^N` points on `[a, b]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub n_qubits: usize,
    pub a: f64,
    pub b: f64,
}

impl Grid {
    pub fn new(n_qubits: usize, a: f64, b: f64) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::InvalidArgument(format!(
                "qubit count must be in 1..={MAX_QUBITS}, got {n_qubits}"
            )));
        }
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidArgument(format!("grid needs a < b, got [{a}, {b}]")));
        }
        Ok(Self { n_qubits, a, b })
    }

    /// Grid for a target density. A lognormal with `a = 0` starts one grid
    /// spacing `L / 2^N` above zero instead.
    pub fn for_spec(spec: &DistributionSpec, n_qubits: usize) -> Result<Self> {
        spec.validate()?;
        let (mut a, b) = spec.domain;
        if matches!(spec.kind, Distribution::Lognormal) && a == 0.0 {
            a = b / 2f64.powi(n_qubits as i32);
        }
        Self::new(n_qubits, a, b)
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    /// Number of intervals, `2^N - 1`.
    pub fn intervals(&self) -> f64 {
        2f64.powi(self.n_qubits as i32) - 1.0
    }

    pub fn spacing(&self) -> f64 {
        self.len() / self.intervals()
    }

    pub fn n_points(&self) -> u128 {
        1u128 << self.n_qubits
    }

    pub fn point(&self, k: u64) -> Result<f64> {
        if u128::from(k) >= self.n_points() {
            return Err(Error::InvalidArgument(format!(
                "grid index {k} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(self.point_unchecked(k))
    }

    pub(crate) fn point_unchecked(&self, k: u64) -> f64 {
        self.a + k as f64 * self.len() / self.intervals()
    }

    /// Every grid point; only sensible for dense-sized registers.
    pub fn points(&self) -> Vec<f64> {
        (0..(1u64 << self.n_qubits.min(63))).map(|k| self.point_unchecked(k)).collect()
    }

    /// Same spacing and size, translated by `offset`.
    pub fn shifted(&self, offset: f64) -> Grid {
        Grid {
            n_qubits: self.n_qubits,
            a: self.a + offset,
            b: self.b + offset,
        }
    }
}

/// One of the `2^k` regions selected by the top `k` bits of the index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Region {
    pub index: usize,
    /// First grid index in the region.
    pub first: u64,
    /// Last grid index in the region, inclusive.
    pub last: u64,
    pub x_start: f64,
    pub x_end: f64,
}

impl Region {
    pub fn contains(&self, k: u64) -> bool {
        self.first <= k && k <= self.last
    }
}

/// Splits the grid into `2^k` equal, contiguous index blocks.
pub fn subdivide(g: &Grid, k: usize) -> Result<Vec<Region>> {
    if k >= g.n_qubits {
        return Err(Error::InvalidArgument(format!(
            "support bit {k} must be below the qubit count {}",
            g.n_qubits
        )));
    }
    let width = 1u128 << (g.n_qubits - k);
    Ok((0..1usize << k)
        .map(|j| {
            let first = (j as u128 * width) as u64;
            let last = ((j as u128 + 1) * width - 1) as u64;
            Region {
                index: j,
                first,
                last,
                x_start: g.point_unchecked(first),
                x_end: g.point_unchecked(last),
            }
        })
        .collect())
}

pub fn grid_point(g: &Grid, k: u64) -> Result<f64> {
    g.point(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_interior() {
        let g = Grid::new(2, 0.0, 3.0).unwrap();
        assert_eq!(g.point(0).unwrap(), 0.0);
        assert_eq!(g.point(3).unwrap(), 3.0);
        assert!(g.point(4).is_err());
        let g = Grid::new(3, 0.0, 1.0).unwrap();
        assert!((g.point(4).unwrap() - 4.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn halving() {
        let g = Grid::new(3, 0.0, 1.0).unwrap();
        let r = subdivide(&g, 1).unwrap();
        assert_eq!((r[0].first, r[0].last, r[1].first, r[1].last), (0, 3, 4, 7));
        let g = Grid::new(4, 0.0, 1.0).unwrap();
        let r = subdivide(&g, 2).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|x| x.last - x.first + 1 == 4));
    }

    #[test]
    fn prefix_bits_identify_region() {
        for n in 1..=10 {
            let g = Grid::new(n, -1.0, 1.0).unwrap();
            for k in 0..n {
                let regions = subdivide(&g, k).unwrap();
                for idx in 0..(1u64 << n) {
                    let owners: Vec<_> = regions.iter().filter(|r| r.contains(idx)).collect();
                    assert_eq!(owners.len(), 1);
                    assert_eq!(owners[0].index as u64, idx >> (n - k));
                }
            }
        }
    }

    #[test]
    fn support_bit_too_large() {
        let g = Grid::new(3, 0.0, 1.0).unwrap();
        assert!(subdivide(&g, 3).is_err());
    }

    #[test]
    fn lognormal_cutoff() {
        let s = DistributionSpec::lognormal(1.0, 1.0, (0.0, 5.0)).unwrap();
        let g = Grid::for_spec(&s, 4).unwrap();
        assert!((g.a - 5.0 / 16.0).abs() < 1e-15);
        assert_eq!(g.b, 5.0);
    }

    #[test]
    fn wide_register() {
        let g = Grid::new(64, 0.0, 1.0).unwrap();
        let r = subdivide(&g, 3).unwrap();
        assert_eq!(r[7].last, u64::MAX);
        assert!((r[7].x_end - 1.0).abs() < 1e-15);
    }
}
