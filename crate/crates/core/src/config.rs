//! Numerical tolerances shared by every module.

use serde::{Deserialize, Serialize};

/// All tolerances in one place.
///
/// Relative tolerances are scaled by the natural size of the quantity they
/// guard (for example `‖A‖_F²` for the normality residual).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `‖M†M − I‖_F` for a matrix to count as unitary.
    pub unitarity: f64,
    /// Relative `‖A†A − AA†‖_F / ‖A‖_F²` for a matrix to count as normal.
    pub normality: f64,
    /// Relative eigenpair residual `max_j ‖A x_j − λ_j x_j‖ / max(1, ‖A‖)`.
    pub eig_residual: f64,
    /// `‖H − H†‖_F / max(1, ‖H‖_F)` for Hermiticity.
    pub hermiticity: f64,
    /// `‖P² − P‖_F` and `‖P − P†‖_F` for an orthogonal projector.
    pub projector: f64,
    /// Relative tolerance when checking a supplied gap or width against the spectrum.
    pub band_relative: f64,
    /// Angular tolerance (radians) for arc endpoint coincidence.
    pub arc_merge: f64,
    /// Largest `|j|` used when building the arc system of a single pair.
    pub max_arc_index: u64,
    /// Iteration budget per eigenvalue in the Schur QR sweep.
    pub schur_iterations_per_eigenvalue: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unitarity: 1e-10,
            normality: 1e-8,
            eig_residual: 1e-9,
            hermiticity: 1e-10,
            projector: 1e-10,
            band_relative: 1e-8,
            arc_merge: 1e-12,
            max_arc_index: 100_000,
            schur_iterations_per_eigenvalue: 60,
        }
    }
}
