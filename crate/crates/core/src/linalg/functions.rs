use nalgebra::{DMatrix, SymmetricEigen};

use super::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Slack allowed on the operator norm of a contraction.
pub const CONTRACTION_SLACK: f64 = 1e-9;

const HERMITIAN_TOL: f64 = 1e-10;
const EIGEN_CLAMP: f64 = 1e-10;
// 1 - (1 + CONTRACTION_SLACK)^2 plus rounding.
const BLOCK_EIGEN_CLAMP: f64 = 3e-9;
const MAX_SQUARINGS: u32 = 62;

/// Max-entry deviation of `A†A` from the identity.
pub fn unitarity_defect(a: &ComplexMatrix) -> Result<f64> {
    let n = a.dim()?;
    Ok((&a.adjoint() * a).max_abs_diff(&ComplexMatrix::identity(n)))
}

pub fn is_unitary(a: &ComplexMatrix, tol: f64) -> bool {
    unitarity_defect(a).is_ok_and(|d| d <= tol)
}

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues in `[-1e-10, 0)` are treated as rounding noise and clamped.
pub fn psd_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    psd_sqrt_clamped(h, EIGEN_CLAMP)
}

fn psd_sqrt_clamped(h: &ComplexMatrix, clamp: f64) -> Result<ComplexMatrix> {
    h.dim()?;
    let deviation = h.max_abs_diff(&h.adjoint());
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let hn = h.to_nalgebra();
    let sym = (&hn + hn.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    if let Some(&worst) = eig.eigenvalues.iter().find(|&&l| l < -clamp) {
        return Err(Error::NegativeEigenvalue { eigenvalue: worst });
    }
    let roots = eig.eigenvalues.map(|l| C64::new(l.max(0.0).sqrt(), 0.0));
    let v = &eig.eigenvectors;
    let s = v * DMatrix::from_diagonal(&roots) * v.adjoint();
    Ok(ComplexMatrix::from_nalgebra(&s))
}

/// Unitary dilation `[[A, (1-AA†)^½], [(1-A†A)^½, -A†]]` of a contraction.
///
/// The top-left block of the result is `A`, so `A = <0|U|0>` with the extra
/// qubit as the most significant index.
pub fn block_encode(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = a.dim()?;
    let norm = a.operator_norm();
    if norm > 1.0 + CONTRACTION_SLACK {
        return Err(Error::NotAContraction { norm });
    }
    let id = ComplexMatrix::identity(d);
    let a_dag = a.adjoint();
    let left_defect = psd_sqrt_clamped(&(&id - &(a * &a_dag)), BLOCK_EIGEN_CLAMP)?;
    let right_defect = psd_sqrt_clamped(&(&id - &(&a_dag * a)), BLOCK_EIGEN_CLAMP)?;
    let minus_a_dag = a_dag.scale(C64::new(-1.0, 0.0));

    let mut out = ComplexMatrix::zeros(2 * d, 2 * d);
    for r in 0..d {
        for c in 0..d {
            out.data[r * 2 * d + c] = a.get(r, c);
            out.data[r * 2 * d + d + c] = left_defect.get(r, c);
            out.data[(d + r) * 2 * d + c] = right_defect.get(r, c);
            out.data[(d + r) * 2 * d + d + c] = minus_a_dag.get(r, c);
        }
    }
    Ok(out)
}

/// `A^(2^m)` by `m` repeated squarings.
pub fn mat_pow2(a: &ComplexMatrix, m: u32) -> Result<ComplexMatrix> {
    a.dim()?;
    if m > MAX_SQUARINGS {
        return Err(Error::ExponentOutOfRange { exponent: m });
    }
    let mut acc = a.clone();
    for _ in 0..m {
        acc = &acc * &acc;
    }
    Ok(acc)
}

/// Polar decomposition `A = W·P` with `W` unitary and `P = (A†A)^½`.
///
/// Computed from the SVD `A = XΣY†` as `W = XY†`, `P = YΣY†`, which stays
/// well defined when `A` is singular.
pub fn polar_decompose(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    a.dim()?;
    let svd = a.to_nalgebra().svd(true, true);
    let x = svd.u.as_ref().expect("left singular vectors requested");
    let y_dag = svd.v_t.as_ref().expect("right singular vectors requested");
    let sigma = DMatrix::from_diagonal(&svd.singular_values.map(|s| C64::new(s, 0.0)));
    let w = x * y_dag;
    let p = y_dag.adjoint() * sigma * y_dag;
    Ok((ComplexMatrix::from_nalgebra(&w), ComplexMatrix::from_nalgebra(&p)))
}
