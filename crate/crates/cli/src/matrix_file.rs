//! JSON matrix files: `{"field", "n1", "n2", "entries"}` with row-major
//! entries, complex values written as `[re, im]`.

use std::fs;
use std::path::Path;

use ppt_core::{BlockMatrix, Complex64, Field, Matrix, Vector};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    field: String,
    n1: usize,
    n2: usize,
    entries: Vec<Value>,
}

pub fn read(path: &Path) -> Result<BlockMatrix, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse(text: &str) -> Result<BlockMatrix, String> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let field = match raw.field.as_str() {
        "real" => Field::Real,
        "complex" => Field::Complex,
        other => return Err(format!("field: expected \"real\" or \"complex\", got {other:?}")),
    };
    let n = raw.n1 + raw.n2;
    if raw.entries.len() != n * n {
        return Err(format!(
            "entries: expected (n1 + n2)^2 = {} values, got {}",
            n * n,
            raw.entries.len()
        ));
    }
    let values = raw
        .entries
        .iter()
        .enumerate()
        .map(|(k, v)| scalar(v, field).map_err(|e| format!("entries[{k}]: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let m = match field {
        Field::Real => Matrix::from_real(n, n, &values.iter().map(|z| z.re).collect::<Vec<_>>()),
        Field::Complex => Matrix::from_complex(n, n, &values),
    }
    .map_err(|e| format!("entries: {e}"))?;
    BlockMatrix::new(raw.n1, raw.n2, m).map_err(|e| e.to_string())
}

/// One scalar: a number, or `[re, im]` when the field is complex.
fn scalar(v: &Value, field: Field) -> Result<Complex64, String> {
    let num = |v: &Value| -> Result<f64, String> {
        let x = v.as_f64().ok_or_else(|| format!("expected a number, got {v}"))?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err("value is not finite".into())
        }
    };
    match (field, v) {
        (Field::Real, Value::Number(_)) => Ok(Complex64::new(num(v)?, 0.0)),
        (Field::Real, _) => Err(format!("expected a number, got {v}")),
        (Field::Complex, Value::Array(pair)) if pair.len() == 2 => Ok(Complex64::new(num(&pair[0])?, num(&pair[1])?)),
        (Field::Complex, _) => Err(format!("expected a [re, im] pair, got {v}")),
    }
}

/// Vector from a JSON array given on the command line. Any `[re, im]`
/// element makes the vector complex.
pub fn parse_vector(name: &str, text: &str) -> Result<(Vector, Field), String> {
    let items: Vec<Value> = serde_json::from_str(text).map_err(|e| format!("{name}: {e}"))?;
    let field = if items.iter().any(Value::is_array) { Field::Complex } else { Field::Real };
    // Plain numbers are accepted next to pairs here; files stay strict.
    let values = items
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let f = if v.is_number() { Field::Real } else { field };
            scalar(v, f).map_err(|e| format!("{name}[{k}]: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((Vector::from_vec(values), field))
}

pub fn scalar_json(z: Complex64, field: Field) -> Value {
    match field {
        Field::Real => Value::from(z.re),
        Field::Complex => Value::from(vec![z.re, z.im]),
    }
}

pub fn vector_json(v: &Vector, field: Field) -> Value {
    Value::Array(v.iter().map(|&z| scalar_json(z, field)).collect())
}

pub fn to_json(m: &Matrix, n1: usize, n2: usize) -> Value {
    let field = m.field();
    let raw = RawFile {
        field: match field {
            Field::Real => "real".into(),
            Field::Complex => "complex".into(),
        },
        n1,
        n2,
        entries: m.to_row_major().into_iter().map(|z| scalar_json(z, field)).collect(),
    };
    serde_json::to_value(raw).expect("matrix file serializes")
}
