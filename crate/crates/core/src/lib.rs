//! Twisted-commutator diagnostics for gapped Hamiltonians.
//!
//! The crate measures how far a pair of unitaries is from satisfying a twisted
//! commutation relation `XY = e^{2πiα} YX`, restricts approximate symmetries of
//! a gapped Hamiltonian onto its low-energy band, and turns the resulting
//! numbers into certified lower bounds on the band's dimension.
//!
//! Module map:
//!
//! * [`linalg`]: dense complex kernels (norms, eigensolvers, polar factor,
//!   spectral distance).
//! * [`restriction`]: band specifications and the construction of ground
//!   symmetries from approximate symmetries.
//! * [`certify`]: degeneracy certificates from one or two twisted pairs.
//! * [`svn`]: the minimum twisted-commutator value over `U(g) × U(g)` and the
//!   clock/shift pairs that attain it.
//! * [`approx_eig`]: shared approximate eigenvectors of approximately
//!   commuting matrices.
//! * [`models`]: seeded gapped Hamiltonians with embedded twisted pairs.
//! * [`io`]: matrix interchange formats.

// `!(x < y)` is used on purpose so that NaN falls into the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx_eig;
pub mod certify;
pub mod config;
pub mod error;
pub mod io;
pub mod linalg;
pub mod models;
pub mod restriction;
pub mod svn;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use linalg::{c64, DenseMatrix, NormSpec};
