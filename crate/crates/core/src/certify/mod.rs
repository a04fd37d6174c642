//! Certified lower bounds on the dimension carrying a twisted pair.
//!
//! A certificate records how its bound was obtained and enough inputs to
//! recompute it: [`Certificate::check`] re-derives `d_min` from the echoed
//! numbers alone.

mod arcs;
mod double;
mod single;

pub use arcs::{arc_system, certified_dimension, certify_single, exact_denominator, greedy_transversal, Arc, ArcSystem};
pub use double::{certify_double, double_condition, verify_double_witness, DoubleWitnessReport, OrbitBound};
pub use single::{
    certify_closed_form, certify_lambda_exclusion, eigenvalue_arc, gram_independent, orbit_expectations, overlap_bound,
    single_pair_threshold, GramReport, OrbitEntry,
};

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{c64, ensure_same_square, ensure_unitary, operator_norm, twist_phase, twisted_commutator, DenseMatrix, NormSpec};

/// Two unitaries with a twisting parameter and their measured twisted
/// commutator in the operator norm.
#[derive(Debug, Clone)]
pub struct TwistedPair {
    pub u: DenseMatrix,
    pub v: DenseMatrix,
    pub alpha: f64,
    pub eta: c64,
    /// `‖uv − η vu‖`.
    pub delta: f64,
}

impl TwistedPair {
    pub fn new(u: DenseMatrix, v: DenseMatrix, alpha: f64, tol: &Tolerances) -> Result<Self> {
        ensure_same_square("twisted pair", &u, &v)?;
        ensure_unitary(&u, tol.unitarity)?;
        ensure_unitary(&v, tol.unitarity)?;
        if !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("alpha = {alpha}")));
        }
        let delta = operator_norm(&twisted_commutator(&u, &v, alpha)?)?;
        Ok(Self { u, v, alpha, eta: twist_phase(alpha), delta })
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    /// Recomputes `δ` and compares it with the stored value.
    pub fn verify(&self) -> Result<()> {
        let delta = operator_norm(&twisted_commutator(&self.u, &self.v, self.alpha)?)?;
        if (delta - self.delta).abs() > 1e-12 * delta.max(1.0) {
            return Err(Error::BoundViolated(format!("stored delta {} but measured {delta}", self.delta)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    SingleClosedForm,
    GreedyTransversal,
    DoublePair,
    LambdaExclusion,
    /// `δ = 0` with rational `α = p/q`: the dimension is a multiple of `q`.
    ExactStoneVonNeumann,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Inputs {
    Single { alpha: f64, delta: f64 },
    Double { d1: usize, d2: usize, gamma: f64, delta: f64 },
    Norm { alpha: f64, delta: f64, norm: NormSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Arcs {
        /// Inclusion-minimal arcs after discarding those through `+1`.
        arcs: Vec<Arc>,
        /// Angles of the greedy stab points (the forced `+1` is not listed).
        stabs: Vec<f64>,
    },
    Rational { p: i64, q: u64 },
    Threshold { lhs: f64, rhs: f64 },
    /// `Λ_{g,α}` for each excluded dimension `g < d_min`.
    Exclusions { lambdas: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub d_min: usize,
    pub method: Method,
    pub inputs: Inputs,
    pub witness: Option<Witness>,
    /// Distance to the failing threshold: how far `δ` may grow before the
    /// certified dimension drops. Absent when nothing is certified (`d_min = 1`).
    pub slack: Option<f64>,
    /// True when the arc system was cut at the configured `|j|` cap; the bound
    /// is then still valid, only possibly weaker.
    #[serde(default)]
    pub truncated: bool,
}

impl Certificate {
    /// Recomputes `d_min` from the echoed inputs.
    pub fn check(&self, tol: &Tolerances) -> Result<()> {
        let recomputed = match (&self.method, &self.inputs) {
            (Method::SingleClosedForm, Inputs::Single { alpha, delta }) => {
                let d = (1.0 / alpha).round() as usize;
                certify_closed_form(d, *delta)?.d_min
            }
            (Method::GreedyTransversal, Inputs::Single { alpha, delta }) => certified_dimension(*alpha, *delta, tol)?,
            (Method::ExactStoneVonNeumann, Inputs::Single { alpha, delta }) => certify_single(*alpha, *delta, tol)?.d_min,
            (Method::DoublePair, Inputs::Double { d1, d2, gamma, delta }) => {
                let (lhs, rhs) = double_condition(*d1, *d2, *gamma, *delta);
                if lhs < rhs {
                    d1 * d2
                } else {
                    return Err(Error::BoundViolated(format!("double-pair condition fails: {lhs} >= {rhs}")));
                }
            }
            (Method::LambdaExclusion, Inputs::Norm { alpha, delta, norm }) => certify_lambda_exclusion(*alpha, *delta, *norm)?.d_min,
            (m, i) => return Err(Error::InvalidArgument(format!("method {m:?} does not take inputs {i:?}"))),
        };
        if recomputed != self.d_min {
            return Err(Error::BoundViolated(format!("certificate claims {} but inputs give {recomputed}", self.d_min)));
        }
        Ok(())
    }
}
