//! Dense statevector simulation and fidelity accounting.

use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::mps::check_dense;

/// `2^N` amplitudes; index bit `N-1-q` belongs to qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<f64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<f64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        Ok(Self {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    /// `|0…0⟩`.
    pub fn vacuum(n_qubits: usize) -> Result<Self> {
        check_dense(n_qubits)?;
        let mut amplitudes = vec![0.0; 1 << n_qubits];
        amplitudes[0] = 1.0;
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<f64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            amplitudes: self.amplitudes.iter().map(|x| x / norm).collect(),
        })
    }

    fn apply(&self, gate: &Gate) -> Result<Self> {
        let n = self.n_qubits;
        if let Some(&qubit) = gate.qubits().iter().find(|&&q| q >= n) {
            return Err(Error::QubitOutOfRange { qubit, n });
        }
        let shifts: Vec<usize> = gate.qubits().iter().map(|q| n - 1 - q).collect();
        let mask = shifts.iter().fold(0usize, |m, s| m | (1 << s));
        let g = gate.matrix();
        let dim = g.rows();
        let local = |i: usize| shifts.iter().fold(0usize, |acc, s| (acc << 1) | ((i >> s) & 1));
        let spread = |c: usize| {
            shifts
                .iter()
                .rev()
                .enumerate()
                .fold(0usize, |acc, (pos, s)| acc | (((c >> pos) & 1) << s))
        };
        let offsets: Vec<usize> = (0..dim).map(spread).collect();
        let old = &self.amplitudes;
        let amplitudes = (0..old.len())
            .into_par_iter()
            .with_min_len(1 << 12)
            .map(|i| {
                let base = i & !mask;
                let row = g.row(local(i));
                row.iter().zip(&offsets).map(|(w, off)| w * old[base | off]).sum()
            })
            .collect();
        Ok(Self { n_qubits: n, amplitudes })
    }
}

/// Applies the gates in order to `|0…0⟩`.
pub fn run(c: &Circuit) -> Result<StateVector> {
    c.gates()
        .iter()
        .try_fold(StateVector::vacuum(c.n_qubits())?, |state, gate| state.apply(gate))
}

/// `|⟨a|b⟩|`, clamped to `[0, 1]`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    fidelity_slices(a.amplitudes(), b.amplitudes())
}

pub(crate) fn fidelity_slices(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "state sizes differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    Ok(dot.abs().min(1.0))
}

/// Infidelity attributed to each pipeline stage.
///
/// Each stage error is `1 − F` between that stage's input and output state;
/// shares divide each stage error by the total infidelity (zero when the total is zero).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorDecomposition {
    pub pp_error: f64,
    pub mps_error: f64,
    pub gate_error: f64,
    pub total: f64,
    pub pp_share: f64,
    pub mps_share: f64,
    pub gate_share: f64,
}

impl ErrorDecomposition {
    pub const SHARE_CONVENTION: &'static str = "stage infidelity (1 - F between stage input and output) divided by total infidelity";

    pub fn from_fidelities(f_pp: f64, f_mps: f64, f_gate: f64, f_total: f64) -> Self {
        let (pp, mps, gate, total) = (1.0 - f_pp, 1.0 - f_mps, 1.0 - f_gate, 1.0 - f_total);
        let share = |e: f64| if total > 0.0 { e / total } else { 0.0 };
        Self {
            pp_error: pp,
            mps_error: mps,
            gate_error: gate,
            total,
            pp_share: share(pp),
            mps_share: share(mps),
            gate_share: share(gate),
        }
    }

    /// Stage fidelities from the four dense states of a pipeline run.
    pub fn from_states(target: &[f64], pp: &[f64], compressed: &[f64], circuit: &[f64]) -> Result<Self> {
        Ok(Self::from_fidelities(
            fidelity_slices(target, pp)?,
            fidelity_slices(pp, compressed)?,
            fidelity_slices(compressed, circuit)?,
            fidelity_slices(target, circuit)?,
        ))
    }
}
