use std::path::Path;

use serde_json::{json, Map, Value};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub const FORMAT_VERSION: &str = "1";

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

pub fn circuit_to_json(c: &Circuit) -> Result<String> {
    let gates: Vec<Value> = c
        .gates()
        .iter()
        .map(|g| json!({ "qubits": g.qubits(), "matrix": g.matrix().to_rows() }))
        .collect();
    let doc = json!({
        "n_qubits": c.n_qubits(),
        "format_version": FORMAT_VERSION,
        "gates": gates,
    });
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn circuit_from_json(text: &str) -> Result<Circuit> {
    let doc: Value = serde_json::from_str(text)?;
    let root = doc.as_object().ok_or_else(|| schema("$", "expected an object"))?;

    let version = field(root, "$", "format_version")?;
    let version = version
        .as_str()
        .ok_or_else(|| schema("$.format_version", "expected a string"))?;
    if version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(version.to_string()));
    }

    let n = as_index(field(root, "$", "n_qubits")?, "$.n_qubits")?;
    if n == 0 {
        return Err(schema("$.n_qubits", "must be at least 1"));
    }
    let gates = field(root, "$", "gates")?
        .as_array()
        .ok_or_else(|| schema("$.gates", "expected an array"))?;
    let gates = gates
        .iter()
        .enumerate()
        .map(|(i, g)| parse_gate(g, &format!("$.gates[{i}]"), n))
        .collect::<Result<Vec<_>>>()?;
    Circuit::new(n, gates)
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, name: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| schema(format!("{path}.{name}"), "missing required field"))
}

fn as_index(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn parse_gate(v: &Value, path: &str, n: usize) -> Result<Gate> {
    let obj = v.as_object().ok_or_else(|| schema(path, "expected an object"))?;
    let qpath = format!("{path}.qubits");
    let qubits = field(obj, path, "qubits")?
        .as_array()
        .ok_or_else(|| schema(&qpath, "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, q)| as_index(q, &format!("{qpath}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    if !(1..=2).contains(&qubits.len()) {
        return Err(schema(&qpath, "expected one or two qubit indices"));
    }
    if let Some(i) = qubits.iter().position(|&q| q >= n) {
        return Err(schema(format!("{qpath}[{i}]"), format!("qubit out of range for {n} qubits")));
    }
    let dim = 1usize << qubits.len();
    let mpath = format!("{path}.matrix");
    let rows = field(obj, path, "matrix")?
        .as_array()
        .ok_or_else(|| schema(&mpath, "expected an array of rows"))?;
    if rows.len() != dim {
        return Err(schema(&mpath, format!("expected {dim} rows, got {}", rows.len())));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for (r, row) in rows.iter().enumerate() {
        let rpath = format!("{mpath}[{r}]");
        let row = row.as_array().ok_or_else(|| schema(&rpath, "expected an array"))?;
        if row.len() != dim {
            return Err(schema(&rpath, format!("expected {dim} entries, got {}", row.len())));
        }
        for (c, x) in row.iter().enumerate() {
            let x = x
                .as_f64()
                .ok_or_else(|| schema(format!("{rpath}[{c}]"), "expected a number"))?;
            data.push(x);
        }
    }
    let matrix = Matrix::from_row_major(dim, dim, data).map_err(|e| schema(&mpath, e.to_string()))?;
    Gate::new(qubits, matrix).map_err(|e| schema(path, e.to_string()))
}

pub fn serialize_circuit(c: &Circuit, path: &Path) -> Result<()> {
    std::fs::write(path, circuit_to_json(c)? + "\n")?;
    Ok(())
}

pub fn deserialize_circuit(path: &Path) -> Result<Circuit> {
    circuit_from_json(&std::fs::read_to_string(path)?)
}
