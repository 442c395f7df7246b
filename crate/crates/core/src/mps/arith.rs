use super::{Core, Mps};
use crate::error::{Error, Result};

/// Sum of two MPS by block-diagonal embedding of their cores. Bond dimensions
/// add; no truncation happens.
pub fn add(a: &Mps, b: &Mps) -> Result<Mps> {
    let n = a.n_sites();
    if n != b.n_sites() {
        return Err(Error::SiteMismatch(n, b.n_sites()));
    }
    if n == 1 {
        let data = a.core(0).as_slice().iter().zip(b.core(0).as_slice()).map(|(x, y)| x + y).collect();
        return Mps::new(vec![Core::new(1, 1, data)?]);
    }
    let mut cores = Vec::with_capacity(n);
    for i in 0..n {
        let (ca, cb) = (a.core(i), b.core(i));
        let first = i == 0;
        let last = i == n - 1;
        let left = if first { 1 } else { ca.left_dim() + cb.left_dim() };
        let right = if last { 1 } else { ca.right_dim() + cb.right_dim() };
        // Offsets of b's block; boundary cores concatenate instead of stacking.
        let (lo, ro) = (
            if first { 0 } else { ca.left_dim() },
            if last { 0 } else { ca.right_dim() },
        );
        let mut core = Core::zeros(left, right);
        for s in 0..2 {
            for l in 0..ca.left_dim() {
                for r in 0..ca.right_dim() {
                    core.set(l, s, r, ca.get(l, s, r));
                }
            }
            for l in 0..cb.left_dim() {
                for r in 0..cb.right_dim() {
                    let v = core.get(lo + l, s, ro + r) + cb.get(l, s, r);
                    core.set(lo + l, s, ro + r, v);
                }
            }
        }
        cores.push(core);
    }
    Mps::new(cores)
}

/// `⟨a|b⟩` by left-to-right transfer-matrix contraction.
pub fn overlap(a: &Mps, b: &Mps) -> Result<f64> {
    if a.n_sites() != b.n_sites() {
        return Err(Error::SiteMismatch(a.n_sites(), b.n_sites()));
    }
    // env[la][lb]
    let mut env = vec![1.0];
    let mut env_b = 1;
    for (ca, cb) in a.cores().iter().zip(b.cores()) {
        let (la, ra, lb, rb) = (ca.left_dim(), ca.right_dim(), cb.left_dim(), cb.right_dim());
        debug_assert_eq!(env_b, lb);
        // half[lb][s][ra] = Σ_la env[la][lb] A[la][s][ra]
        let mut half = vec![0.0; lb * 2 * ra];
        for l_a in 0..la {
            for l_b in 0..lb {
                let e = env[l_a * lb + l_b];
                if e == 0.0 {
                    continue;
                }
                for s in 0..2 {
                    for r in 0..ra {
                        half[(l_b * 2 + s) * ra + r] += e * ca.get(l_a, s, r);
                    }
                }
            }
        }
        let mut next = vec![0.0; ra * rb];
        for l_b in 0..lb {
            for s in 0..2 {
                for r_a in 0..ra {
                    let h = half[(l_b * 2 + s) * ra + r_a];
                    if h == 0.0 {
                        continue;
                    }
                    for r_b in 0..rb {
                        next[r_a * rb + r_b] += h * cb.get(l_b, s, r_b);
                    }
                }
            }
        }
        env = next;
        env_b = rb;
    }
    Ok(env[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_add() {
        let one = Mps::product(&[[1.0, 1.0]; 3]).unwrap();
        let two = Mps::product(&[[2.0, 2.0], [1.0, 1.0], [1.0, 1.0]]).unwrap();
        let sum = add(&one, &two).unwrap();
        assert_eq!(sum.max_bond(), 2);
        for x in sum.to_statevector().unwrap() {
            assert!((x - 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn add_is_pointwise() {
        let a = Mps::random(6, 3, 1).unwrap();
        let b = Mps::random(6, 2, 2).unwrap();
        let s = add(&a, &b).unwrap();
        let (va, vb, vs) = (
            a.to_statevector().unwrap(),
            b.to_statevector().unwrap(),
            s.to_statevector().unwrap(),
        );
        for k in 0..va.len() {
            assert!((va[k] + vb[k] - vs[k]).abs() < 1e-13);
        }
        let expect: Vec<usize> = a.bond_dims().iter().zip(b.bond_dims()).map(|(x, y)| x + y).collect();
        assert_eq!(&s.bond_dims()[1..6], &expect[1..6]);
    }

    #[test]
    fn add_single_site() {
        let a = Mps::product(&[[1.0, 2.0]]).unwrap();
        let b = Mps::product(&[[0.5, -1.0]]).unwrap();
        assert_eq!(add(&a, &b).unwrap().to_statevector().unwrap(), vec![1.5, 1.0]);
    }

    #[test]
    fn add_site_mismatch() {
        let a = Mps::product(&[[1.0, 0.0]; 2]).unwrap();
        let b = Mps::product(&[[1.0, 0.0]; 3]).unwrap();
        assert!(matches!(add(&a, &b), Err(Error::SiteMismatch(2, 3))));
    }

    #[test]
    fn basis_states_orthogonal() {
        let e0 = Mps::basis_state(4, 0).unwrap();
        let e1 = Mps::basis_state(4, 1).unwrap();
        assert_eq!(overlap(&e0, &e1).unwrap(), 0.0);
        assert_eq!(overlap(&e0, &e0).unwrap(), 1.0);
    }

    #[test]
    fn overlap_matches_dense() {
        let a = Mps::random(8, 5, 10).unwrap();
        let b = Mps::random(8, 3, 11).unwrap();
        let dense: f64 = a
            .to_statevector()
            .unwrap()
            .iter()
            .zip(b.to_statevector().unwrap())
            .map(|(x, y)| x * y)
            .sum();
        assert!((overlap(&a, &b).unwrap() - dense).abs() <= 1e-10 * dense.abs().max(1.0));
    }
}
