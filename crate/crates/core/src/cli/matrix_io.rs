//! JSON matrix files: `{"n": 2, "rows": [[[re, im], …], …]}` with
//! `rows[j][i] = <j|A|i>`.

use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

pub fn parse_matrix_file(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix_str(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_matrix_str(text: &str) -> Result<ComplexMatrix> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("malformed JSON at line {}, column {}: {e}", e.line(), e.column())))?;
    let n = doc
        .get("n")
        .and_then(Value::as_u64)
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Parse("field \"n\" must be a positive integer".into()))? as usize;
    let rows = doc
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("field \"rows\" must be an array".into()))?;
    if rows.len() != n {
        return Err(Error::Parse(format!(
            "\"rows\" has {} rows but n = {n}; matrix must be square",
            rows.len()
        )));
    }
    let mut data = Vec::with_capacity(n * n);
    for (j, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse(format!("rows[{j}] is not an array")))?;
        if row.len() != n {
            return Err(Error::Parse(format!(
                "rows[{j}] has {} entries, expected {n}",
                row.len()
            )));
        }
        for (i, entry) in row.iter().enumerate() {
            data.push(parse_entry(entry).map_err(|msg| Error::Parse(format!("rows[{j}][{i}]: {msg}")))?);
        }
    }
    ComplexMatrix::new(n, n, data)
}

fn parse_entry(entry: &Value) -> std::result::Result<C64, String> {
    let pair = entry
        .as_array()
        .filter(|p| p.len() == 2)
        .ok_or("expected a [re, im] pair")?;
    let part = |v: &Value, name: &str| {
        v.as_f64()
            .filter(|x| x.is_finite())
            .ok_or(format!("{name} part is not a finite number"))
    };
    Ok(C64::new(part(&pair[0], "real")?, part(&pair[1], "imaginary")?))
}

/// Serializes a square matrix in the same format, for round trips and
/// fixture generation.
pub fn matrix_to_json(a: &ComplexMatrix) -> String {
    let rows: Vec<Vec<[f64; 2]>> = (0..a.rows())
        .map(|j| a.row(j).iter().map(|z| [z.re, z.im]).collect())
        .collect();
    serde_json::json!({ "n": a.rows(), "rows": rows }).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_file() {
        let a = parse_matrix_str(r#"{"n":2,"rows":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#).unwrap();
        assert_eq!(a, ComplexMatrix::identity(2));
    }

    #[test]
    fn imaginary_parts() {
        let a = parse_matrix_str(r#"{"n":2,"rows":[[[0,0],[0,1]],[[0,1],[0,0]]]}"#).unwrap();
        assert_eq!(a.get(0, 1), C64::new(0.0, 1.0));
        assert_eq!(a.get(1, 0), C64::new(0.0, 1.0));
        assert_eq!(a.get(0, 0), C64::new(0.0, 0.0));
    }

    #[test]
    fn row_length_mismatch_names_row() {
        let err = parse_matrix_str(r#"{"n":2,"rows":[[[1,0],[0,0]],[[0,0]]]}"#).unwrap_err();
        assert!(matches!(&err, Error::Parse(m) if m.contains("rows[1]")), "{err}");
    }

    #[test]
    fn malformed_inputs() {
        let bad = [
            (r#"{"n":2,"rows":[[[1,0],[0,0]],"#, "line"),
            (r#"{"rows":[]}"#, "\"n\""),
            (r#"{"n":2,"rows":[[[1,0],[0,0]]]}"#, "square"),
            (r#"{"n":1,"rows":[[[1]]]}"#, "rows[0][0]"),
            (r#"{"n":1,"rows":[[["x",0]]]}"#, "real part"),
            (r#"{"n":1,"rows":[[[0,1e999]]]}"#, "malformed JSON"),
        ];
        for (text, needle) in bad {
            let err = parse_matrix_str(text).unwrap_err();
            assert!(matches!(&err, Error::Parse(m) if m.contains(needle)), "{text}: {err}");
        }
    }

    #[test]
    fn serialization_round_trip() {
        let a = crate::linalg::haar_unitary(3, 1);
        assert_eq!(parse_matrix_str(&matrix_to_json(&a)).unwrap(), a);
    }
}
