//! Matrix product disentangler: a right-canonical MPS with bonds of at most 2
//! becomes a staircase of orthogonal gates acting on `|0…0⟩`.
//!
//! Gate `t < N-1` acts on qubits `(t, t+1)`. Qubit `t` enters carrying the
//! bond index `β` and qubit `t+1` enters in `|0⟩`; the gate writes the
//! physical bit onto qubit `t` and hands the next bond to qubit `t+1`:
//! `G[(s, β'), (β, 0)] = B_t[β, s, β']`. The final site is a single-qubit
//! gate `G[s, β] = B_{N-1}[β, s, 0]`. Columns the MPS leaves undetermined are
//! filled by `null_space_completion`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{null_space_completion, Matrix};
use crate::mps::{Form, Mps};

const NORM_TOL: f64 = 1e-8;
const ORTHOGONALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    qubits: Vec<usize>,
    matrix: Matrix,
}

impl Gate {
    /// A one- or two-qubit gate; the matrix must be `2^k × 2^k` for `k` qubits.
    /// The local basis index is `2·bit(qubits[0]) + bit(qubits[1])`.
    pub fn new(qubits: Vec<usize>, matrix: Matrix) -> Result<Self> {
        let dim = match qubits.len() {
            1 => 2,
            2 if qubits[0] != qubits[1] => 4,
            2 => return Err(Error::InvalidArgument("two-qubit gate acts on the same qubit twice".into())),
            k => return Err(Error::InvalidArgument(format!("gates act on 1 or 2 qubits, got {k}"))),
        };
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::InvalidArgument(format!(
                "{}-qubit gate needs a {dim}x{dim} matrix, got {}x{}",
                qubits.len(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { qubits, matrix })
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `max |GᵀG − I|`.
    pub fn orthogonality_error(&self) -> f64 {
        self.matrix.column_orthonormality_error()
    }
}

/// Gates applied in order to `|0…0⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("a circuit needs at least one qubit".into()));
        }
        Ok(Self { n_qubits, gates })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.qubits.len() == 2).count()
    }
}

/// Builds the disentangler circuit whose output state is `m`.
pub fn extract_circuit(m: &Mps) -> Result<Circuit> {
    let chi = m.max_bond();
    if chi > 2 {
        return Err(Error::BondTooLarge(chi));
    }
    let norm = m.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let b = m.canonicalize(Form::Right).scale(1.0 / norm);
    let n = b.n_sites();
    let mut gates = Vec::with_capacity(n);
    for t in 0..n - 1 {
        let core = b.core(t);
        let mut defined = Matrix::zeros(core.left_dim(), 4);
        for beta in 0..core.left_dim() {
            for s in 0..2 {
                for bp in 0..core.right_dim() {
                    defined[(beta, 2 * s + bp)] = core.get(beta, s, bp);
                }
            }
        }
        let inputs: Vec<usize> = (0..core.left_dim()).map(|beta| 2 * beta).collect();
        gates.push(Gate::new(vec![t, t + 1], complete(&defined, &inputs)?)?);
    }
    let last = b.core(n - 1);
    let mut defined = Matrix::zeros(last.left_dim(), 2);
    for beta in 0..last.left_dim() {
        for s in 0..2 {
            defined[(beta, s)] = last.get(beta, s, 0);
        }
    }
    let inputs: Vec<usize> = (0..last.left_dim()).collect();
    gates.push(Gate::new(vec![n - 1], complete(&defined, &inputs)?)?);
    Circuit::new(n, gates)
}

/// Square orthogonal matrix whose columns `inputs[i]` are the rows of
/// `defined`; the other columns, in index order, come from the completion.
fn complete(defined: &Matrix, inputs: &[usize]) -> Result<Matrix> {
    let dim = defined.cols();
    let mut columns: Vec<Option<Vec<f64>>> = vec![None; dim];
    for (i, &c) in inputs.iter().enumerate() {
        columns[c] = Some(defined.row(i).to_vec());
    }
    if inputs.len() < dim {
        let fill = null_space_completion(defined)?;
        let mut rows = fill.to_rows().into_iter();
        for col in columns.iter_mut().filter(|c| c.is_none()) {
            *col = rows.next();
        }
    } else {
        let dev = defined.row_orthonormality_error();
        if dev > NORM_TOL {
            return Err(Error::NotOrthonormal(dev));
        }
    }
    let mut g = Matrix::zeros(dim, dim);
    for (c, col) in columns.into_iter().enumerate() {
        for (r, v) in col.expect("every column is filled").into_iter().enumerate() {
            g[(r, c)] = v;
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Serialize)]
pub struct CircuitValidation {
    pub max_orthogonality_deviation: f64,
    pub orthogonal: bool,
    pub staircase: bool,
    pub gate_count_ok: bool,
    pub failures: Vec<String>,
}

impl CircuitValidation {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks orthogonality of every gate, the staircase layout and the gate count.
/// An empty circuit is valid.
pub fn validate_circuit(c: &Circuit) -> CircuitValidation {
    let n = c.n_qubits();
    let mut failures = Vec::new();
    let mut max_dev = 0.0f64;
    for (i, g) in c.gates().iter().enumerate() {
        if let Some(&q) = g.qubits().iter().find(|&&q| q >= n) {
            failures.push(format!("gate {i}: qubit {q} out of range for {n} qubits"));
        }
        let dev = g.orthogonality_error();
        max_dev = max_dev.max(dev);
        if !(dev <= ORTHOGONALITY_TOL) {
            failures.push(format!("gate {i}: orthogonality deviation {dev:.3e}"));
        }
    }
    let orthogonal = max_dev <= ORTHOGONALITY_TOL;

    let staircase = c.gates().is_empty()
        || (c.gate_count() == n
            && c.gates().iter().enumerate().all(|(t, g)| {
                if t + 1 < n {
                    g.qubits() == [t, t + 1]
                } else {
                    g.qubits() == [n - 1]
                }
            }));
    if !staircase {
        failures.push("gates do not form the (t, t+1) staircase ending on the last qubit".into());
    }
    let gate_count_ok = c.gate_count() <= n + 1;
    if !gate_count_ok {
        failures.push(format!("{} gates exceeds the limit of {}", c.gate_count(), n + 1));
    }
    CircuitValidation {
        max_orthogonality_deviation: max_dev,
        orthogonal,
        staircase,
        gate_count_ok,
        failures,
    }
}
