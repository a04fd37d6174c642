//! Two twisted pairs `(u₁, v₁)`, `(u₂, v₂)` with `α = 1/d₁, 1/d₂`, the `u`s
//! commuting up to `γ` and the cross pairs commuting up to `δ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::single::{gram_independent, GramReport};
use super::{certify_single, Certificate, Inputs, Method, Witness};
use crate::approx_eig::shared_approx_eigenvector_normal;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{
    c64, commutator, ensure_same_square, ensure_unitary, operator_norm, twist_phase, twisted_commutator, unitary_power,
    DenseMatrix, DenseVector,
};

/// Both sides of `√γ d₁d₂ + (d₁+d₂)δ < sin²(π/2d₁) / (d₁d₂ − 1)²`.
pub fn double_condition(d1: usize, d2: usize, gamma: f64, delta: f64) -> (f64, f64) {
    let n = (d1 * d2) as f64;
    let lhs = gamma.sqrt() * n + (d1 + d2) as f64 * delta;
    let s = (PI / (2.0 * d1 as f64)).sin();
    (lhs, s * s / ((n - 1.0) * (n - 1.0)))
}

/// `d₁d₂` when the two-pair condition holds strictly, otherwise the better of
/// the two single-pair arc certificates.
pub fn certify_double(d1: usize, d2: usize, gamma: f64, delta: f64) -> Result<Certificate> {
    if d1 < 2 || d1 > d2 {
        return Err(Error::InvalidArgument(format!("need 2 <= d1 <= d2, got ({d1}, {d2})")));
    }
    for (name, x) in [("gamma", gamma), ("delta", delta)] {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::InvalidArgument(format!("{name} = {x}")));
        }
    }
    let (lhs, rhs) = double_condition(d1, d2, gamma, delta);
    if lhs < rhs {
        return Ok(Certificate {
            d_min: d1 * d2,
            method: Method::DoublePair,
            inputs: Inputs::Double { d1, d2, gamma, delta },
            witness: Some(Witness::Threshold { lhs, rhs }),
            slack: Some(rhs - lhs),
            truncated: false,
        });
    }
    let tol = Tolerances::default();
    let a = certify_single(1.0 / d1 as f64, delta, &tol)?;
    let b = certify_single(1.0 / d2 as f64, delta, &tol)?;
    Ok(if b.d_min > a.d_min { b } else { a })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitBound {
    pub i: i64,
    pub j: i64,
    /// `|⟨i,j|u₁|i,j⟩ − η₁^i|`.
    pub deviation_u1: f64,
    /// `|⟨i,j|u₂|i,j⟩ − η₂^j|`.
    pub deviation_u2: f64,
    /// `√γ d₁d₂/2 + (|i|+|j|)δ`.
    pub paper_bound: f64,
    /// Measured start deviation `+ (|i|+|j|)δ`.
    pub rigorous_bound: f64,
}

impl OrbitBound {
    pub fn paper_ok(&self) -> bool {
        self.deviation_u1.max(self.deviation_u2) <= self.paper_bound + 1e-10
    }

    pub fn rigorous_ok(&self) -> bool {
        self.deviation_u1.max(self.deviation_u2) <= self.rigorous_bound + 1e-10
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleWitnessReport {
    pub d1: usize,
    pub d2: usize,
    /// `‖[u₁, u₂]‖`.
    pub gamma: f64,
    /// `‖[u₁,v₁]_{1/d₁}‖`, `‖[u₂,v₂]_{1/d₂}‖`, `‖[u₁,v₂]‖`, `‖[u₂,v₁]‖`.
    pub deltas: [f64; 4],
    /// Largest of `deltas`.
    pub delta: f64,
    /// `‖u₁ψ − ψ‖` and `‖u₂ψ − ψ‖` after phase normalization.
    pub start_residuals: [f64; 2],
    /// Start bound as stated for the two-pair theorem, `√γ d₁d₂/2`.
    pub paper_start_bound: f64,
    /// Start bound of the shared-eigenvector construction actually used, `n√γ`.
    pub rigorous_start_bound: f64,
    pub orbit: Vec<OrbitBound>,
    pub gram: GramReport,
    /// Gram rank equals `d₁d₂`.
    pub independent: bool,
    pub certificate: Certificate,
    /// Human-readable names of every bound that failed.
    pub failures: Vec<String>,
}

/// Measures the five commutators, builds the orbit `|i,j⟩ = v₁^i v₂^j ψ` of
/// a shared approximate `+1` eigenvector, and checks expectations and
/// independence.
pub fn verify_double_witness(
    u1: &DenseMatrix,
    u2: &DenseMatrix,
    v1: &DenseMatrix,
    v2: &DenseMatrix,
    d1: usize,
    d2: usize,
    tol: &Tolerances,
) -> Result<DoubleWitnessReport> {
    if d1 < 2 || d1 > d2 {
        return Err(Error::InvalidArgument(format!("need 2 <= d1 <= d2, got ({d1}, {d2})")));
    }
    let n = ensure_same_square("double witness", u1, u2)?;
    ensure_same_square("double witness", u1, v1)?;
    ensure_same_square("double witness", u1, v2)?;
    for m in [u1, u2, v1, v2] {
        ensure_unitary(m, tol.unitarity)?;
    }
    let (a1, a2) = (1.0 / d1 as f64, 1.0 / d2 as f64);
    let gamma = operator_norm(&commutator(u1, u2)?)?;
    let deltas = [
        operator_norm(&twisted_commutator(u1, v1, a1)?)?,
        operator_norm(&twisted_commutator(u2, v2, a2)?)?,
        operator_norm(&commutator(u1, v2)?)?,
        operator_norm(&commutator(u2, v1)?)?,
    ];
    let delta = deltas.iter().copied().fold(0.0, f64::max);

    let shared = shared_approx_eigenvector_normal(u1, u2, None, tol)?;
    let psi = shared.vector;
    let u1n = u1 * (shared.lambda / shared.lambda.norm()).conj();
    let u2n = u2 * (shared.mu / shared.mu.norm()).conj();
    let start_residuals = [(&u1n * &psi - &psi).norm(), (&u2n * &psi - &psi).norm()];
    let start_dev = [expectation(&u1n, &psi), expectation(&u2n, &psi)]
        .iter()
        .map(|e| (e - c64::new(1.0, 0.0)).norm())
        .fold(0.0, f64::max);
    let nn = (d1 * d2) as f64;
    let paper_start_bound = gamma.sqrt() * nn / 2.0;
    let rigorous_start_bound = n as f64 * gamma.sqrt();

    let range = |d: usize| -(((d - 1) / 2) as i64)..=((d - 1) - (d - 1) / 2) as i64;
    let mut orbit = Vec::with_capacity(d1 * d2);
    let mut states = Vec::with_capacity(d1 * d2);
    for i in range(d1) {
        let left = unitary_power(v1, i);
        for j in range(d2) {
            let state: DenseVector = &left * (unitary_power(v2, j) * &psi);
            let steps = (i.unsigned_abs() + j.unsigned_abs()) as f64 * delta;
            orbit.push(OrbitBound {
                i,
                j,
                deviation_u1: (expectation(&u1n, &state) - twist_phase(a1 * i as f64)).norm(),
                deviation_u2: (expectation(&u2n, &state) - twist_phase(a2 * j as f64)).norm(),
                paper_bound: paper_start_bound + steps,
                rigorous_bound: start_dev + steps,
            });
            let norm = state.norm();
            states.push(state / c64::new(norm, 0.0));
        }
    }
    let gram = gram_independent(&states, tol)?;
    let independent = gram.rank == d1 * d2;
    let certificate = certify_double(d1, d2, gamma, delta)?;

    let mut failures = Vec::new();
    if start_residuals.iter().any(|&r| r > rigorous_start_bound + 1e-10) {
        failures.push("start vector residual exceeds n*sqrt(gamma)".to_string());
    }
    if start_residuals.iter().any(|&r| r > paper_start_bound + 1e-10) {
        failures.push("start vector residual exceeds sqrt(gamma)*d1*d2/2".to_string());
    }
    for o in orbit.iter().filter(|o| !o.rigorous_ok()) {
        failures.push(format!("orbit ({}, {}) exceeds the measured-start bound", o.i, o.j));
    }
    for o in orbit.iter().filter(|o| !o.paper_ok()) {
        failures.push(format!("orbit ({}, {}) exceeds the stated expectation bound", o.i, o.j));
    }
    if certificate.method != Method::DoublePair {
        failures.push("two-pair threshold fails".to_string());
    }
    if !independent {
        failures.push(format!("Gram rank {} < {}", gram.rank, d1 * d2));
    }
    Ok(DoubleWitnessReport {
        d1,
        d2,
        gamma,
        deltas,
        delta,
        start_residuals,
        paper_start_bound,
        rigorous_start_bound,
        orbit,
        gram,
        independent,
        certificate,
        failures,
    })
}

fn expectation(m: &DenseMatrix, x: &DenseVector) -> c64 {
    x.dotc(&(m * x))
}
