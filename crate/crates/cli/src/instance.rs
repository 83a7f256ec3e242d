//! JSON instance files.
//!
//! ```json
//! {"kind": "matrix-tuple", "shape": [2, 2], "matrices": [[["1", "0"], ["0", "1"]], ...]}
//! {"kind": "colorful", "n": 2, "matrices": [...]}
//! {"kind": "spinor", "n": 3, "edges": [{"i": 1, "j": 2, "p1": ["1", "0"], "p2": ["0", "1"]}, ...]}
//! ```
//!
//! Scalars are rational strings such as `"-3/7"`; vertices are 1-based and
//! `p = [constant, t-coefficient]`.

use detsum::svrtan::{edge_count, edge_index, edges};
use detsum::{
    format_rational, parse_rational, ColorfulInstance, EdgeBasis, Matrix, MatrixTuple, Polynomial,
    Rational, SpinorInstance,
};
use serde_json::{json, Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    MatrixTuple(MatrixTuple),
    Colorful(ColorfulInstance),
    Spinor(SpinorInstance),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::MatrixTuple(_) => "matrix-tuple",
            Instance::Colorful(_) => "colorful",
            Instance::Spinor(_) => "spinor",
        }
    }

    /// Canonical JSON: sorted keys, reduced rationals, edges in lexicographic order.
    pub fn to_json(&self) -> Value {
        match self {
            Instance::MatrixTuple(t) => json!({
                "kind": self.kind(),
                "shape": t.shape().sizes(),
                "matrices": matrices_json(t.matrices()),
            }),
            Instance::Colorful(c) => json!({
                "kind": self.kind(),
                "n": c.order(),
                "matrices": matrices_json(c.matrices()),
            }),
            Instance::Spinor(s) => {
                let edges: Vec<Value> = edges(s.vertices())
                    .zip(s.bases())
                    .map(|((i, j), b)| {
                        json!({"i": i + 1, "j": j + 1, "p1": poly_json(&b.p1), "p2": poly_json(&b.p2)})
                    })
                    .collect();
                json!({"kind": self.kind(), "n": s.vertices(), "edges": edges})
            }
        }
    }
}

fn rat_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn poly_json(p: &Polynomial) -> Value {
    Value::Array(p.coeffs().iter().map(rat_json).collect())
}

fn matrices_json(ms: &[Matrix]) -> Value {
    Value::Array(
        ms.iter()
            .map(|m| {
                Value::Array(
                    m.to_rows()
                        .iter()
                        .map(|row| Value::Array(row.iter().map(rat_json).collect()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn invalid(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{path}: {msg}"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, CliError> {
    obj.get(key).ok_or_else(|| invalid(key, "missing field"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| invalid(path, "expected an array"))
}

fn count(v: &Value, path: &str) -> Result<usize, CliError> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| invalid(path, "expected a non-negative integer"))
}

fn rational(v: &Value, path: &str) -> Result<Rational, CliError> {
    let text = v
        .as_str()
        .ok_or_else(|| invalid(path, "expected a rational string such as \"-3/7\""))?;
    parse_rational(text).map_err(|e| invalid(path, e))
}

fn matrix(v: &Value, size: usize, path: &str) -> Result<Matrix, CliError> {
    let rows = array(v, path)?;
    if rows.len() != size {
        return Err(invalid(path, format!("expected {size} rows, got {}", rows.len())));
    }
    let mut out = Vec::with_capacity(size);
    for (r, row) in rows.iter().enumerate() {
        let row_path = format!("{path}[{r}]");
        let cells = array(row, &row_path)?;
        if cells.len() != size {
            return Err(invalid(&row_path, format!("expected {size} entries, got {}", cells.len())));
        }
        out.push(
            cells
                .iter()
                .enumerate()
                .map(|(c, cell)| rational(cell, &format!("{row_path}[{c}]")))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Matrix::from_rows(out).map_err(|e| invalid(path, e))
}

fn matrices(obj: &Map<String, Value>, sizes: &[usize]) -> Result<Vec<Matrix>, CliError> {
    let list = array(field(obj, "matrices")?, "matrices")?;
    if list.len() != sizes.len() {
        return Err(invalid(
            "matrices",
            format!("expected {} matrices, got {}", sizes.len(), list.len()),
        ));
    }
    list.iter()
        .zip(sizes)
        .enumerate()
        .map(|(k, (m, &size))| matrix(m, size, &format!("matrices[{k}]")))
        .collect()
}

fn linear(v: &Value, path: &str) -> Result<Polynomial, CliError> {
    let coeffs = array(v, path)?;
    if coeffs.len() != 2 {
        return Err(invalid(path, "expected [constant, t-coefficient]"));
    }
    Ok(Polynomial::new(vec![rational(&coeffs[0], &format!("{path}[0]"))?, rational(&coeffs[1], &format!("{path}[1]"))?]))
}

fn spinor(obj: &Map<String, Value>) -> Result<SpinorInstance, CliError> {
    let n = count(field(obj, "n")?, "n")?;
    if n == 0 || n > detsum::svrtan::MAX_VERTICES {
        return Err(invalid("n", format!("expected 1..={}", detsum::svrtan::MAX_VERTICES)));
    }
    let list = array(field(obj, "edges")?, "edges")?;
    if list.len() != edge_count(n) {
        return Err(invalid(
            "edges",
            format!("{n} vertices need {} edges, got {}", edge_count(n), list.len()),
        ));
    }
    let mut slots: Vec<Option<EdgeBasis>> = vec![None; edge_count(n)];
    for (k, e) in list.iter().enumerate() {
        let path = format!("edges[{k}]");
        let eobj = e.as_object().ok_or_else(|| invalid(&path, "expected an object"))?;
        let get = |key: &str| eobj.get(key).ok_or_else(|| invalid(&format!("{path}.{key}"), "missing field"));
        let i = count(get("i")?, &format!("{path}.i"))?;
        let j = count(get("j")?, &format!("{path}.j"))?;
        if !(1 <= i && i < j && j <= n) {
            return Err(invalid(&path, format!("need 1 <= i < j <= {n}, got i = {i}, j = {j}")));
        }
        let p1 = linear(get("p1")?, &format!("{path}.p1"))?;
        let p2 = linear(get("p2")?, &format!("{path}.p2"))?;
        let slot = &mut slots[edge_index(n, i - 1, j - 1)];
        if slot.is_some() {
            return Err(invalid(&path, format!("edge {{{i}, {j}}} appears twice")));
        }
        *slot = Some(EdgeBasis::new(p1, p2).map_err(|e| invalid(&path, e))?);
    }
    let bases = slots.into_iter().map(|b| b.expect("every edge filled")).collect();
    Ok(SpinorInstance::new(n, bases)?)
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance, CliError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed JSON: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| CliError::Input("top level must be an object".into()))?;
    let kind = field(obj, "kind")?
        .as_str()
        .ok_or_else(|| invalid("kind", "expected a string"))?;
    match kind {
        "matrix-tuple" => {
            let sizes = array(field(obj, "shape")?, "shape")?
                .iter()
                .enumerate()
                .map(|(k, v)| count(v, &format!("shape[{k}]")))
                .collect::<Result<Vec<_>, _>>()?;
            if sizes.is_empty() || sizes.contains(&0) {
                return Err(invalid("shape", "sizes must be positive and non-empty"));
            }
            Ok(Instance::MatrixTuple(MatrixTuple::new(matrices(obj, &sizes)?)?))
        }
        "colorful" => {
            let n = count(field(obj, "n")?, "n")?;
            if n == 0 {
                return Err(invalid("n", "expected at least 1"));
            }
            Ok(Instance::Colorful(ColorfulInstance::new(matrices(obj, &vec![n; n])?)?))
        }
        "spinor" => Ok(Instance::Spinor(spinor(obj)?)),
        other => Err(invalid(
            "kind",
            format!("unknown kind {other:?}, expected matrix-tuple, colorful or spinor"),
        )),
    }
}
