//! Dense complex linear algebra.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. The eigensolvers, spectral
//! distance and polar factor live in submodules; this module holds the
//! elementary constructions and structural checks everything else uses.

mod assignment;
mod eig;
mod norms;
mod polar;
mod random;

pub use assignment::{bottleneck_assignment, min_cost_assignment, spectral_distance, spectral_distance_of_spectra, Assignment};
pub use eig::{complex_schur, eig_general, eig_hermitian, eig_normal, spectral_order, EigDecomp, GeneralEig, Schur};
pub use norms::{frobenius_norm, operator_norm, schatten_kyfan_norm, singular_values, NormSpec};
pub use polar::{polar, polar_unitary, Polar};
pub use random::{complex_gaussian, haar_unitary, haar_unitary_from};

use nalgebra::{DMatrix, DVector};

use crate::config::Tolerances;
use crate::error::{Error, Result};

#[allow(non_camel_case_types)]
pub type c64 = num_complex::Complex64;

/// A finite-dimensional complex operator, stored densely.
pub type DenseMatrix = DMatrix<c64>;

pub type DenseVector = DVector<c64>;

pub const ZERO: c64 = c64::new(0.0, 0.0);
pub const ONE: c64 = c64::new(1.0, 0.0);

/// `e^{2πiα}`.
pub fn twist_phase(alpha: f64) -> c64 {
    c64::from_polar(1.0, std::f64::consts::TAU * alpha)
}

pub fn ensure_square(m: &DenseMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub fn ensure_finite(m: &DenseMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn ensure_same_square(op: &'static str, x: &DenseMatrix, y: &DenseMatrix) -> Result<usize> {
    let n = ensure_square(x)?;
    ensure_square(y)?;
    if x.shape() != y.shape() {
        return Err(Error::DimensionMismatch {
            op,
            left: x.shape(),
            right: y.shape(),
        });
    }
    Ok(n)
}

/// `XY − e^{2πiα} YX`.
pub fn twisted_commutator(x: &DenseMatrix, y: &DenseMatrix, alpha: f64) -> Result<DenseMatrix> {
    ensure_same_square("twisted_commutator", x, y)?;
    Ok(x * y - (y * x) * twist_phase(alpha))
}

/// `XY − YX`.
pub fn commutator(x: &DenseMatrix, y: &DenseMatrix) -> Result<DenseMatrix> {
    ensure_same_square("commutator", x, y)?;
    Ok(x * y - y * x)
}

pub fn identity(n: usize) -> DenseMatrix {
    DenseMatrix::identity(n, n)
}

pub fn from_diagonal(diag: &[c64]) -> DenseMatrix {
    DenseMatrix::from_diagonal(&DenseVector::from_column_slice(diag))
}

pub fn from_real_diagonal(diag: &[f64]) -> DenseMatrix {
    DenseMatrix::from_fn(diag.len(), diag.len(), |i, j| if i == j { c64::new(diag[i], 0.0) } else { ZERO })
}

/// Build a matrix from row-major entries.
pub fn from_rows(rows: usize, cols: usize, entries: &[c64]) -> Result<DenseMatrix> {
    if entries.len() != rows * cols {
        return Err(Error::InvalidArgument(format!(
            "{} entries for a {rows}x{cols} matrix",
            entries.len()
        )));
    }
    let m = DenseMatrix::from_row_slice(rows, cols, entries);
    ensure_finite(&m)?;
    Ok(m)
}

/// `‖M†M − I‖_F`.
pub fn unitarity_residual(m: &DenseMatrix) -> f64 {
    let n = m.ncols();
    (m.adjoint() * m - identity(n)).norm()
}

pub fn is_unitary(m: &DenseMatrix, tol: f64) -> bool {
    m.is_square() && unitarity_residual(m) <= tol
}

pub fn ensure_unitary(m: &DenseMatrix, tol: f64) -> Result<()> {
    ensure_square(m)?;
    let residual = unitarity_residual(m);
    if residual <= tol {
        Ok(())
    } else {
        Err(Error::NotUnitary { residual, tol })
    }
}

/// `‖A†A − AA†‖_F / ‖A‖_F²`, zero for the zero matrix.
pub fn normality_residual(a: &DenseMatrix) -> f64 {
    let scale = a.norm_squared();
    if scale == 0.0 {
        return 0.0;
    }
    let ad = a.adjoint();
    (&ad * a - a * &ad).norm() / scale
}

pub fn ensure_normal(a: &DenseMatrix, tol: &Tolerances) -> Result<()> {
    ensure_square(a)?;
    let residual = normality_residual(a);
    if residual <= tol.normality {
        Ok(())
    } else {
        Err(Error::NotNormal {
            residual,
            tol: tol.normality,
        })
    }
}

pub fn hermiticity_residual(h: &DenseMatrix) -> f64 {
    (h - h.adjoint()).norm() / h.norm().max(1.0)
}

pub fn ensure_hermitian(h: &DenseMatrix, tol: &Tolerances) -> Result<()> {
    ensure_square(h)?;
    let residual = hermiticity_residual(h);
    if residual <= tol.hermiticity {
        Ok(())
    } else {
        Err(Error::NotHermitian {
            residual,
            tol: tol.hermiticity,
        })
    }
}

/// Integer power of a unitary; negative exponents use the adjoint.
pub fn unitary_power(u: &DenseMatrix, exponent: i64) -> DenseMatrix {
    let base = if exponent < 0 { u.adjoint() } else { u.clone() };
    let mut e = exponent.unsigned_abs();
    let mut acc = identity(u.nrows());
    let mut sq = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// Block-diagonal direct sum `a ⊕ b`.
pub fn direct_sum(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = DenseMatrix::zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a.kronecker(b)
}

/// Hermitian matrix function `f(H)` through the eigendecomposition.
pub fn hermitian_function(h: &DenseMatrix, f: impl Fn(f64) -> f64) -> Result<DenseMatrix> {
    let (values, vectors) = eig_hermitian(h)?;
    let mapped: Vec<f64> = values.iter().map(|&x| f(x)).collect();
    Ok(&vectors * from_real_diagonal(&mapped) * vectors.adjoint())
}

/// `e^{itK}` for Hermitian `K`.
pub fn unitary_exp(k: &DenseMatrix, t: f64) -> Result<DenseMatrix> {
    let (values, vectors) = eig_hermitian(k)?;
    let phases: Vec<c64> = values.iter().map(|&x| c64::from_polar(1.0, t * x)).collect();
    Ok(&vectors * from_diagonal(&phases) * vectors.adjoint())
}
