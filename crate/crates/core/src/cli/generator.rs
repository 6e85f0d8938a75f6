//! Named, seeded test-matrix generators for the `--gen` flag.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::linalg::{haar_orthogonal, haar_unitary, ComplexMatrix, C64};

pub const VALID_SPECS: &str =
    "haar-unitary:N, haar-orthogonal:N, diag-phase:N:k:t, scaled-identity:N:r:theta";

// Generators refuse anything the LU oracle would refuse anyway.
const MAX_GENERATED_DIM: usize = crate::linalg::DEFAULT_LU_BOUND;

fn usage(detail: impl std::fmt::Display) -> Error {
    Error::Usage(format!("{detail}; valid generator specs: {VALID_SPECS}"))
}

fn field<T: std::str::FromStr>(parts: &[&str], idx: usize, name: &str) -> Result<T> {
    parts[idx]
        .parse()
        .map_err(|_| usage(format!("cannot parse {name} from '{}'", parts[idx])))
}

fn dimension(parts: &[&str]) -> Result<usize> {
    let n: usize = field(parts, 1, "N")?;
    if n == 0 || n > MAX_GENERATED_DIM {
        return Err(usage(format!("N = {n} outside 1..={MAX_GENERATED_DIM}")));
    }
    Ok(n)
}

/// Builds the matrix named by `spec`; only the Haar generators use `seed`.
pub fn generator_spec(spec: &str, seed: u64) -> Result<ComplexMatrix> {
    let parts: Vec<&str> = spec.split(':').collect();
    let arity = |expected: usize| {
        if parts.len() == expected {
            Ok(())
        } else {
            Err(usage(format!("'{spec}' needs {} parameters", expected - 1)))
        }
    };
    match parts[0] {
        "haar-unitary" => {
            arity(2)?;
            Ok(haar_unitary(dimension(&parts)?, seed))
        }
        "haar-orthogonal" => {
            arity(2)?;
            Ok(haar_orthogonal(dimension(&parts)?, seed))
        }
        "diag-phase" => {
            arity(4)?;
            let n = dimension(&parts)?;
            let k: u64 = field(&parts, 2, "k")?;
            let t: u32 = field(&parts, 3, "t")?;
            if t > 62 || k >= 1u64 << t {
                return Err(usage(format!("k = {k} is not a {t}-bit value")));
            }
            let phase = TAU * k as f64 / (1u64 << t) as f64;
            let mut diag = vec![C64::new(1.0, 0.0); n];
            diag[0] = C64::from_polar(1.0, phase);
            Ok(ComplexMatrix::from_diagonal(&diag))
        }
        "scaled-identity" => {
            arity(4)?;
            let n = dimension(&parts)?;
            let r: f64 = field(&parts, 2, "r")?;
            let theta: f64 = field(&parts, 3, "theta")?;
            if !(r.is_finite() && theta.is_finite()) {
                return Err(usage("r and theta must be finite"));
            }
            Ok(ComplexMatrix::identity(n).scale(C64::from_polar(r, theta)))
        }
        other => Err(usage(format!("unknown generator '{other}'"))),
    }
}
