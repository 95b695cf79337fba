//! Dense complex linear algebra: matrices, operator norms, Hermitian functional
//! calculus and subspaces of matrix spaces.

mod eigen;
mod matrix;
mod subspace;
mod tolerance;

pub use eigen::{hermitian_eigen, r_factor, svd, HermitianEigen, Svd};
pub use matrix::{ComplexMatrix, C64, ONE, ZERO};
pub use subspace::{find_invertible, InvertibleSearch, Subspace};
pub use tolerance::{Tolerance, RANK_RTOL};

use crate::error::{Error, Result};

/// Operator norm (largest singular value).
pub fn op_norm(m: &ComplexMatrix) -> Result<f64> {
    m.check_finite()?;
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0.0);
    }
    // Jacobi on the narrower side keeps the rotation count small.
    let s = if m.cols() <= m.rows() {
        svd(m)?
    } else {
        svd(&m.adjoint())?
    };
    Ok(s.largest())
}

/// Smallest singular value of a square matrix.
pub fn min_singular_value(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(svd(m)?.values.last().copied().unwrap_or(0.0))
}

/// Spectral functions available to [`herm_funcalc`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralFn {
    Sqrt,
    InvSqrt,
    Inv,
}

/// `f(H)` for Hermitian `H`, computed on the Jacobi eigendecomposition.
pub fn herm_funcalc(h: &ComplexMatrix, f: SpectralFn, tol: &Tolerance) -> Result<ComplexMatrix> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    h.check_finite()?;
    let scale = h.frobenius_norm();
    let defect = h.hermitian_defect();
    if !tol.accepts(defect, scale) {
        return Err(Error::NotHermitian { residual: defect });
    }
    let eig = hermitian_eigen(h)?;
    let lowest = eig.values.first().copied().unwrap_or(f64::INFINITY);
    match f {
        SpectralFn::Sqrt => {
            if lowest < -tol.bound(scale) {
                return Err(Error::NotPositive { value: lowest });
            }
            Ok(eig.apply(|x| x.max(0.0).sqrt()))
        }
        SpectralFn::InvSqrt | SpectralFn::Inv => {
            if lowest <= tol.eps_abs {
                return Err(Error::SingularOperand { value: lowest });
            }
            Ok(if f == SpectralFn::Inv {
                eig.apply(|x| 1.0 / x)
            } else {
                eig.apply(|x| 1.0 / x.sqrt())
            })
        }
    }
}

/// `‖a*a − 1‖`, the isometry defect.
pub fn isometry_defect(a: &ComplexMatrix) -> f64 {
    let aa = &a.adjoint() * a;
    op_norm(&(&aa - &ComplexMatrix::identity(a.cols()))).unwrap_or(f64::INFINITY)
}

/// `max(‖a*a − 1‖, ‖aa* − 1‖)`, the unitarity defect.
pub fn unitary_defect(a: &ComplexMatrix) -> f64 {
    let co = a * &a.adjoint();
    let co_defect = op_norm(&(&co - &ComplexMatrix::identity(a.rows()))).unwrap_or(f64::INFINITY);
    isometry_defect(a).max(co_defect)
}

pub fn is_unitary(a: &ComplexMatrix, tol: &Tolerance) -> bool {
    a.is_square() && unitary_defect(a) <= tol.bound(1.0)
}

pub fn is_isometry(a: &ComplexMatrix, tol: &Tolerance) -> bool {
    isometry_defect(a) <= tol.bound(1.0)
}

/// Polar part `a (a*a)^{-1/2}` of an invertible matrix.
///
/// Evaluated as `U V*` from the singular value decomposition `a = U Σ V*`,
/// which is the same matrix but avoids squaring the condition number.
pub fn polar_unitary(a: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let smin = min_singular_value(a)?;
    if smin <= tol.eps_abs {
        return Err(Error::SingularOperand { value: smin });
    }
    let s = svd(a)?;
    Ok(&s.left * &s.right.adjoint())
}
