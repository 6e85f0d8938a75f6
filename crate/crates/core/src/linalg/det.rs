use std::f64::consts::TAU;

use super::{ComplexMatrix, C64};
use crate::antisym::enumerate_permutations;
use crate::error::{Error, Result};

/// Largest dimension accepted by [`det_lu`].
pub const DEFAULT_LU_BOUND: usize = 64;

/// Largest dimension accepted by [`det_levi_civita`]; beyond this the N!
/// terms are not worth enumerating.
pub const LEVI_CIVITA_MAX: usize = 8;

/// A determinant together with its polar form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetValue {
    pub value: C64,
    pub magnitude: f64,
    /// Argument of `value` in `[0, 2π)`.
    pub phase: f64,
}

impl DetValue {
    pub fn new(value: C64) -> Self {
        Self {
            value,
            magnitude: value.norm(),
            phase: wrap_phase(value.arg()),
        }
    }

    /// `+1` or `-1` according to the sign of the real part.
    pub fn real_sign(&self) -> i8 {
        if self.value.re < 0.0 {
            -1
        } else {
            1
        }
    }
}

/// Maps an angle into `[0, 2π)`.
pub(crate) fn wrap_phase(angle: f64) -> f64 {
    let wrapped = angle.rem_euclid(TAU);
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det_lu(a: &ComplexMatrix) -> Result<DetValue> {
    det_lu_bounded(a, DEFAULT_LU_BOUND)
}

pub fn det_lu_bounded(a: &ComplexMatrix, bound: usize) -> Result<DetValue> {
    let n = a.dim()?;
    if n > bound {
        return Err(Error::TooLarge {
            operation: "det_lu",
            dim: n,
            bound,
        });
    }
    let mut lu: Vec<C64> = a.as_slice().to_vec();
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| lu[x * n + col].norm().total_cmp(&lu[y * n + col].norm()))
            .expect("non-empty pivot range");
        let p = lu[pivot * n + col];
        if p.norm() == 0.0 {
            return Ok(DetValue::new(C64::new(0.0, 0.0)));
        }
        if pivot != col {
            for k in 0..n {
                lu.swap(col * n + k, pivot * n + k);
            }
            det = -det;
        }
        det *= p;
        for row in col + 1..n {
            let factor = lu[row * n + col] / p;
            if factor.norm() == 0.0 {
                continue;
            }
            for k in col + 1..n {
                let upper = lu[col * n + k];
                lu[row * n + k] -= factor * upper;
            }
        }
    }
    Ok(DetValue::new(det))
}

/// Determinant as the signed sum over all permutations,
/// `Σ_σ sgn(σ) Π_k A[k][σ(k)]`.
pub fn det_levi_civita(a: &ComplexMatrix) -> Result<DetValue> {
    let n = a.dim()?;
    if n > LEVI_CIVITA_MAX {
        return Err(Error::TooLarge {
            operation: "det_levi_civita",
            dim: n,
            bound: LEVI_CIVITA_MAX,
        });
    }
    let total = enumerate_permutations(n)?
        .iter()
        .map(|perm| {
            let product: C64 = perm
                .mapping()
                .iter()
                .enumerate()
                .map(|(row, &col)| a.get(row, col))
                .product();
            product * f64::from(perm.sign())
        })
        .sum();
    Ok(DetValue::new(total))
}
