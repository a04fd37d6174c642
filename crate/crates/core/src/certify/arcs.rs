//! Arc systems of a single twisted pair and their minimum transversal.
//!
//! Every `j ≠ 0` with `|j|δ < 2` forces an eigenvalue of the (phase-normalized)
//! `u` inside the arc of half-width `arccos(1 − |j|δ)` around `2παj`, and
//! `j = 0` forces `+1`. Distinct eigenvalues of a unitary have orthogonal
//! eigenvectors, so the fewest points meeting every arc bounds the dimension.
//! Arcs through `+1` are already met, and what is left unfolds into intervals
//! of `(0, 2π)` where greedy stabbing by right endpoint is optimal.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{Certificate, Inputs, Method, Witness};
use crate::config::Tolerances;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    /// Angle in `[0, 2π)`.
    pub center: f64,
    /// In `[0, π]`.
    pub half_width: f64,
    pub index: i64,
}

impl Arc {
    /// Circular distance from `angle` to the center, in `[0, π]`.
    pub fn distance_to(&self, angle: f64) -> f64 {
        let d = (angle - self.center).rem_euclid(TAU);
        d.min(TAU - d)
    }

    pub fn contains(&self, angle: f64, slack: f64) -> bool {
        self.distance_to(angle) <= self.half_width + slack
    }

    /// `[center − w, center + w]` on the real line (may leave `[0, 2π)`).
    pub fn interval(&self) -> (f64, f64) {
        (self.center - self.half_width, self.center + self.half_width)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArcSystem {
    /// Inclusion-minimal arcs avoiding `+1`, sorted by right endpoint.
    pub arcs: Vec<Arc>,
    /// Number of nontrivial arcs before filtering (both signs of `j`).
    pub generated: usize,
    /// Nontrivial indices beyond the `|j|` cap were skipped.
    pub truncated: bool,
}

/// Builds the filtered arc system for `(α, δ)` with `δ > 0`.
pub fn arc_system(alpha: f64, delta: f64, tol: &Tolerances) -> Result<ArcSystem> {
    check_inputs(alpha, delta)?;
    if delta <= 0.0 {
        return Err(Error::InvalidArgument("arc system needs delta > 0".into()));
    }
    let alpha = alpha.rem_euclid(1.0);
    let mut raw = Vec::new();
    let mut j: u64 = 1;
    while (j as f64) * delta < 2.0 && j <= tol.max_arc_index {
        let half_width = (1.0 - j as f64 * delta).acos();
        for signed in [j as i64, -(j as i64)] {
            // reduce αj mod 1 before scaling to keep the center accurate for large j
            let turn = (alpha * signed as f64).rem_euclid(1.0);
            let center = (TAU * turn).rem_euclid(TAU);
            raw.push(Arc { center, half_width, index: signed });
        }
        j += 1;
    }
    let truncated = (j as f64) * delta < 2.0;
    let generated = raw.len();

    let mut kept: Vec<Arc> = raw.into_iter().filter(|a| !a.contains(0.0, tol.arc_merge)).collect();
    // sort by left endpoint, wider first on ties, then keep an interval only
    // when no later interval ends at or before it
    kept.sort_by(|a, b| {
        let (la, ra) = a.interval();
        let (lb, rb) = b.interval();
        la.total_cmp(&lb).then(rb.total_cmp(&ra)).then(a.index.abs().cmp(&b.index.abs()))
    });
    let mut minimal = Vec::with_capacity(kept.len());
    let mut min_right = f64::INFINITY;
    for arc in kept.into_iter().rev() {
        let (_, r) = arc.interval();
        if r < min_right - tol.arc_merge {
            min_right = r;
            minimal.push(arc);
        }
    }
    minimal.sort_by(|a, b| a.interval().1.total_cmp(&b.interval().1));
    Ok(ArcSystem { arcs: minimal, generated, truncated })
}

/// Greedy stabbing of arcs that avoid `+1`: returns the stab angles. Endpoints
/// closer than the merge tolerance count as touching.
pub fn greedy_transversal(arcs: &[Arc], tol: &Tolerances) -> Vec<f64> {
    let mut intervals: Vec<(f64, f64)> = arcs.iter().map(Arc::interval).collect();
    intervals.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut stabs: Vec<f64> = Vec::new();
    for (l, r) in intervals {
        if stabs.last().is_some_and(|&s| l <= s + tol.arc_merge) {
            continue;
        }
        stabs.push(r);
    }
    stabs
}

/// `1 +` the greedy transversal number; `δ ≥ 2` certifies nothing.
pub fn certified_dimension(alpha: f64, delta: f64, tol: &Tolerances) -> Result<usize> {
    check_inputs(alpha, delta)?;
    if delta <= 0.0 {
        return Err(Error::InvalidArgument("delta must be positive for the arc bound".into()));
    }
    if delta >= 2.0 {
        return Ok(1);
    }
    let system = arc_system(alpha, delta, tol)?;
    Ok(1 + greedy_transversal(&system.arcs, tol).len())
}

/// Degeneracy certificate for one pair with twisted commutator at most `δ`.
///
/// `δ = 0` is exact twisted commutation: for `α = p/q` in lowest terms the
/// dimension is a multiple of `q`. Irrational `α` admits no finite exact pair.
pub fn certify_single(alpha: f64, delta: f64, tol: &Tolerances) -> Result<Certificate> {
    check_inputs(alpha, delta)?;
    let alpha = alpha.rem_euclid(1.0);
    let inputs = Inputs::Single { alpha, delta };
    if delta == 0.0 {
        let (p, q) = exact_denominator(alpha)
            .ok_or_else(|| Error::InvalidArgument(format!("alpha = {alpha} is not rational at the detection cap")))?;
        return Ok(Certificate {
            d_min: q as usize,
            method: Method::ExactStoneVonNeumann,
            inputs,
            witness: Some(Witness::Rational { p, q }),
            slack: None,
            truncated: false,
        });
    }
    if delta >= 2.0 {
        return Ok(Certificate {
            d_min: 1,
            method: Method::GreedyTransversal,
            inputs,
            witness: None,
            slack: None,
            truncated: false,
        });
    }
    let system = arc_system(alpha, delta, tol)?;
    let stabs = greedy_transversal(&system.arcs, tol);
    let d_min = 1 + stabs.len();
    let slack = (d_min > 1).then(|| breaking_delta(alpha, delta, d_min, tol) - delta);
    Ok(Certificate {
        d_min,
        method: Method::GreedyTransversal,
        inputs,
        witness: Some(Witness::Arcs { arcs: system.arcs, stabs }),
        slack,
        truncated: system.truncated,
    })
}

/// Supremum of the `δ′ ≥ δ` that still certify `d_min`, by bisection. The
/// certified dimension is nonincreasing in `δ`, so this is well defined.
fn breaking_delta(alpha: f64, delta: f64, d_min: usize, tol: &Tolerances) -> f64 {
    let holds = |x: f64| certified_dimension(alpha, x, tol).map(|d| d >= d_min).unwrap_or(false);
    let (mut lo, mut hi) = (delta, 2.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    lo
}

/// `Some((p, q))` when `α mod 1` equals `p/q` (lowest terms, `q ≤ 10⁶`) to
/// within a few ulps, found along the continued-fraction convergents.
pub fn exact_denominator(alpha: f64) -> Option<(i64, u64)> {
    const CAP: i64 = 1_000_000;
    if !alpha.is_finite() {
        return None;
    }
    let x0 = alpha.rem_euclid(1.0);
    let close = |p: i64, q: i64| (x0 - p as f64 / q as f64).abs() <= 8.0 * f64::EPSILON;
    if close(0, 1) {
        return Some((0, 1));
    }
    // seeds p₋₂/q₋₂ = 0/1 and p₋₁/q₋₁ = 1/0
    let (mut p_prev, mut q_prev) = (0i64, 1i64);
    let (mut p, mut q) = (1i64, 0i64);
    let mut x = x0;
    for _ in 0..64 {
        let a = x.floor();
        let ai = a as i64;
        let (pn, qn) = (ai * p + p_prev, ai * q + q_prev);
        if qn > CAP {
            return None;
        }
        (p_prev, q_prev, p, q) = (p, q, pn, qn);
        if close(p, q) {
            // a denominator of 1 can only mean α rounded up to 1
            return Some(if q == 1 { (0, 1) } else { (p, q as u64) });
        }
        let frac = x - a;
        if frac <= 0.0 {
            return None;
        }
        x = 1.0 / frac;
    }
    None
}

fn check_inputs(alpha: f64, delta: f64) -> Result<()> {
    if !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("alpha = {alpha}")));
    }
    if !(delta >= 0.0) || delta.is_infinite() {
        return Err(Error::InvalidArgument(format!("delta = {delta} must be finite and nonnegative")));
    }
    Ok(())
}
