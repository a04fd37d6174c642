//! Single-pair ingredients: closed-form threshold, orbit expectations,
//! overlap and linear-independence tests, and exclusion by the minimum
//! twisted-commutator value.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::{Arc, Certificate, Inputs, Method, TwistedPair, Witness};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{c64, eig_hermitian, eig_normal, twist_phase, unitary_power, DenseMatrix, DenseVector, NormSpec};
use crate::svn::lambda_min;

/// `2(1 − cos(π/d)) / (d − 1)`: below this twisted-commutator value a pair
/// with `α = 1/d` lives in dimension at least `d`.
pub fn single_pair_threshold(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("threshold needs d >= 2, got {d}")));
    }
    Ok(2.0 * (1.0 - (PI / d as f64).cos()) / (d - 1) as f64)
}

/// Closed-form certificate for `α = 1/d`: `d` if `δ` is below the threshold,
/// otherwise nothing.
pub fn certify_closed_form(d: usize, delta: f64) -> Result<Certificate> {
    let threshold = single_pair_threshold(d)?;
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::InvalidArgument(format!("delta = {delta}")));
    }
    let holds = delta < threshold;
    Ok(Certificate {
        d_min: if holds { d } else { 1 },
        method: Method::SingleClosedForm,
        inputs: Inputs::Single { alpha: 1.0 / d as f64, delta },
        witness: Some(Witness::Threshold { lhs: delta, rhs: threshold }),
        slack: holds.then_some(threshold - delta),
        truncated: false,
    })
}

/// The arc where a unit vector with `|⟨x|w|x⟩ − e^{iθ}| ≤ ζ` forces an
/// eigenvalue of the unitary `w`: half-width `arccos(1 − ζ)` around `θ`.
pub fn eigenvalue_arc(zeta: f64, theta: f64) -> Result<Arc> {
    if !(0.0..=2.0).contains(&zeta) || !theta.is_finite() {
        return Err(Error::InvalidArgument(format!("zeta = {zeta} must lie in [0, 2]")));
    }
    Ok(Arc {
        center: theta.rem_euclid(TAU),
        half_width: (1.0 - zeta).acos(),
        index: 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub j: i64,
    /// `⟨j|u|j⟩` with `|j⟩ = v^j|ψ⟩` and `u` phase-normalized.
    pub expectation: c64,
    /// `η^j`.
    pub target: c64,
    pub deviation: f64,
    /// `|j| δ`.
    pub bound: f64,
}

/// Expectations of the phase-normalized `u` along the `v`-orbit of a `+1`
/// eigenvector. The default range is `j = −⌊(d−1)/2⌋ … ⌈(d−1)/2⌉` with
/// `d = ⌊1/α⌉`; fails if any deviation exceeds `|j|δ`.
pub fn orbit_expectations(pair: &TwistedPair, range: Option<(i64, i64)>, tol: &Tolerances) -> Result<Vec<OrbitEntry>> {
    let (lo, hi) = match range {
        Some((lo, hi)) if lo <= hi => (lo, hi),
        Some(r) => return Err(Error::InvalidArgument(format!("empty orbit range {r:?}"))),
        None => {
            let a = pair.alpha.rem_euclid(1.0);
            if a == 0.0 {
                return Err(Error::InvalidArgument("alpha = 0 needs an explicit orbit range".into()));
            }
            let d = (1.0 / a).round() as i64;
            (-((d - 1) / 2), (d - 1) - (d - 1) / 2)
        }
    };
    let (psi, phase, residual) = plus_one_vector(&pair.u, tol)?;
    let u = &pair.u * phase.conj();
    let mut out = Vec::with_capacity((hi - lo + 1) as usize);
    for j in lo..=hi {
        let state = unitary_power(&pair.v, j) * &psi;
        let expectation = state.dotc(&(&u * &state));
        let target = twist_phase(pair.alpha * j as f64);
        let deviation = (expectation - target).norm();
        let bound = j.unsigned_abs() as f64 * pair.delta;
        // the start vector is exact only up to its eigen-residual
        if deviation > bound + 2.0 * residual + 1e-10 {
            return Err(Error::BoundViolated(format!("orbit j = {j}: deviation {deviation} exceeds {bound}")));
        }
        out.push(OrbitEntry { j, expectation, target, deviation, bound });
    }
    Ok(out)
}

/// Eigenvector of `u` for the eigenvalue of largest real part (ties: smaller
/// `|Im|`), that eigenvalue's phase, and the eigen-residual.
pub(crate) fn plus_one_vector(u: &DenseMatrix, tol: &Tolerances) -> Result<(DenseVector, c64, f64)> {
    let eig = eig_normal(u, tol)?;
    let best = (0..eig.dim())
        .max_by(|&a, &b| {
            let (x, y) = (eig.eigenvalues[a], eig.eigenvalues[b]);
            x.re.total_cmp(&y.re).then(y.im.abs().total_cmp(&x.im.abs()))
        })
        .ok_or_else(|| Error::InvalidArgument("empty matrix".into()))?;
    let lambda = eig.eigenvalues[best];
    Ok((eig.vector(best), lambda / lambda.norm(), eig.residual))
}

/// `√(2ζ) |csc(θ/4)|` with `θ ∈ (0, π]` the angular separation of the two
/// targets; `None` when they coincide and no bound exists.
pub fn overlap_bound(zeta: f64, theta_x: f64, theta_y: f64) -> Result<Option<f64>> {
    if !(zeta >= 0.0) || !zeta.is_finite() || !theta_x.is_finite() || !theta_y.is_finite() {
        return Err(Error::InvalidArgument(format!("zeta = {zeta}, angles {theta_x}, {theta_y}")));
    }
    let d = (theta_y - theta_x).rem_euclid(TAU);
    let sep = d.min(TAU - d);
    if sep < 1e-12 {
        return Ok(None);
    }
    Ok(Some((2.0 * zeta).sqrt() / (sep / 4.0).sin()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    /// Every pairwise overlap is below `1/(n−1)`, so the Gram matrix is
    /// strictly diagonally dominant and the vectors are independent.
    pub dominant: bool,
    pub max_overlap: f64,
    pub threshold: f64,
    pub min_eigenvalue: f64,
    /// Gram eigenvalues above `1e-8`.
    pub rank: usize,
}

/// Linear-independence test for unit vectors.
pub fn gram_independent(vectors: &[DenseVector], _tol: &Tolerances) -> Result<GramReport> {
    let n = vectors.len();
    if let Some(v) = vectors.iter().find(|v| (v.norm() - 1.0).abs() > 1e-10) {
        return Err(Error::InvalidArgument(format!("vector of norm {} is not normalized", v.norm())));
    }
    if let Some(w) = vectors.windows(2).find(|w| w[0].len() != w[1].len()) {
        return Err(Error::DimensionMismatch { op: "gram", left: (w[0].len(), 1), right: (w[1].len(), 1) });
    }
    if n == 0 {
        return Ok(GramReport { dominant: true, max_overlap: 0.0, threshold: f64::INFINITY, min_eigenvalue: f64::INFINITY, rank: 0 });
    }
    let mut gram = DenseMatrix::zeros(n, n);
    let mut max_overlap: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            gram[(i, j)] = vectors[i].dotc(&vectors[j]);
            if i != j {
                max_overlap = max_overlap.max(gram[(i, j)].norm());
            }
        }
    }
    let threshold = if n > 1 { 1.0 / (n - 1) as f64 } else { f64::INFINITY };
    let (evals, _) = eig_hermitian(&gram)?;
    Ok(GramReport {
        // margin so that a tight configuration is never reported as dominant
        dominant: max_overlap < threshold * (1.0 - 1e-12),
        max_overlap,
        threshold,
        min_eigenvalue: evals[0],
        rank: evals.iter().filter(|&&e| e > 1e-8).count(),
    })
}

/// Smallest `g` with `Λ^{(p,k)}_{g,α} ≤ δ`: every smaller dimension is ruled
/// out because no pair there gets below `Λ`. Needs `p ≥ 2` and `δ > 0`.
pub fn certify_lambda_exclusion(alpha: f64, delta: f64, norm: NormSpec) -> Result<Certificate> {
    const MAX_DIM: usize = 10_000_000;
    if !(norm.p >= 2.0) || norm.k == 0 {
        return Err(Error::InvalidNorm { p: norm.p, k: norm.k, dim: 0 });
    }
    if !(delta > 0.0) || !delta.is_finite() || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("need finite alpha and delta > 0, got ({alpha}, {delta})")));
    }
    let mut lambdas = Vec::new();
    let mut g = 1;
    loop {
        let spec = norm.clamped(g);
        let lambda = lambda_min(g, alpha, spec)?;
        if lambda <= delta {
            break;
        }
        lambdas.push(lambda);
        if g >= MAX_DIM {
            return Err(Error::Convergence("lambda exclusion did not terminate"));
        }
        g += 1;
    }
    let slack = lambdas.iter().copied().reduce(f64::min).map(|m| m - delta);
    Ok(Certificate {
        d_min: g,
        method: Method::LambdaExclusion,
        inputs: Inputs::Norm { alpha, delta, norm },
        witness: Some(Witness::Exclusions { lambdas }),
        slack,
        truncated: false,
    })
}
