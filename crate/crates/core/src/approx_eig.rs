//! Shared approximate eigenvectors of approximately commuting matrices.
//!
//! For a normal `A` with `‖[A,B]‖ ≤ ε`, cluster the spectrum of `A` around an
//! eigenvalue `λ` at radius `r`, compress `B` onto the cluster's eigenspace
//! `V`, and take an eigenvector of the compression. With `r = √(ε/2)` both
//! residuals are at most `n√(ε/2)`; when `B` is normal too, `r = √ε` lets the
//! `B`-eigenvalue be snapped to an exact eigenvalue at cost `n√ε`.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{c64, eig_general, eig_normal, ensure_same_square, operator_norm, DenseMatrix, DenseVector, EigDecomp};

/// Fixed point of the `I_k` iteration.
#[derive(Debug, Clone)]
pub struct ClusterResult {
    /// Indices into the eigenvalue list, ascending.
    pub indices: Vec<usize>,
    pub radius: f64,
    /// `n·r`.
    pub diameter_bound: f64,
    /// `max_{i∈I} |λ_i − λ|`.
    pub max_distance: f64,
    /// `min_{i∈I, j∉I} |λ_i − λ_j|`, infinite when `I` is everything.
    pub separation: f64,
}

/// Grows the cluster of `seed` by linking eigenvalues at distance `≤ r`.
///
/// `seed` must match an entry of `eigs` to within `1e-12` (relative to the
/// spectral radius); every matching entry starts in the cluster.
pub fn cluster(eigs: &[c64], seed: c64, r: f64) -> Result<ClusterResult> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("cluster radius must be positive, got {r}")));
    }
    let n = eigs.len();
    let scale = eigs.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut inside: Vec<bool> = eigs.iter().map(|z| (z - seed).norm() <= 1e-12 * scale).collect();
    if !inside.iter().any(|&b| b) {
        return Err(Error::InvalidArgument(format!("seed {seed} is not an eigenvalue")));
    }
    loop {
        let mut grew = false;
        for i in 0..n {
            if !inside[i] && (0..n).any(|j| inside[j] && (eigs[i] - eigs[j]).norm() <= r) {
                inside[i] = true;
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    let indices: Vec<usize> = (0..n).filter(|&i| inside[i]).collect();
    let max_distance = indices.iter().map(|&i| (eigs[i] - seed).norm()).fold(0.0, f64::max);
    let mut separation = f64::INFINITY;
    for &i in &indices {
        for j in (0..n).filter(|&j| !inside[j]) {
            separation = separation.min((eigs[i] - eigs[j]).norm());
        }
    }
    let diameter_bound = n as f64 * r;
    debug_assert!(separation > r);
    if max_distance > diameter_bound {
        return Err(Error::BoundViolated(format!("cluster extends {max_distance} > n·r = {diameter_bound}")));
    }
    Ok(ClusterResult { indices, radius: r, diameter_bound, max_distance, separation })
}

/// Block quantities of the compression onto the cluster.
#[derive(Debug, Clone, Copy)]
pub struct BlockReport {
    /// `‖A_V − λ I_V‖`.
    pub a_deviation: f64,
    /// `n·r`.
    pub a_deviation_bound: f64,
    /// `‖B_{V̄V}‖`.
    pub b_offdiag: f64,
    /// `nε/(2r)`.
    pub b_offdiag_bound: f64,
    /// `√(dim V · dim V̄) · ε/r`, the instance-specific form of the same bound.
    pub b_offdiag_sharp: f64,
}

#[derive(Debug, Clone)]
pub struct SharedEigenResult {
    pub vector: DenseVector,
    /// The seed eigenvalue of `A`.
    pub lambda: c64,
    /// Approximate eigenvalue for `B` (an exact eigenvalue in the normal variant).
    pub mu: c64,
    /// Eigenvalue of `B_VV` before snapping; equals `mu` in the general variant.
    pub mu_compressed: c64,
    pub residual_a: f64,
    pub residual_b: f64,
    /// `n√(ε/2)` or `n√ε`.
    pub bound: f64,
    /// The bound at the radius actually used (differs only when `ε` is at
    /// roundoff level and the radius is floored).
    pub bound_effective: f64,
    pub epsilon: f64,
    /// Residual of the `B_VV` eigenpair inside the compression.
    pub compressed_residual: f64,
    pub cluster: ClusterResult,
    pub blocks: BlockReport,
}

enum Variant {
    General,
    Normal,
}

/// Shared approximate eigenvector for normal `A` and arbitrary `B`; residuals
/// at most `n√(ε/2)`. `seed` defaults to the first eigenvalue of `A` in
/// spectral order.
pub fn shared_approx_eigenvector(a: &DenseMatrix, b: &DenseMatrix, seed: Option<c64>, tol: &Tolerances) -> Result<SharedEigenResult> {
    shared(a, b, seed, tol, Variant::General)
}

/// Both matrices normal: the `B`-eigenvalue is an exact eigenvalue of `B`,
/// residuals at most `n√ε`.
pub fn shared_approx_eigenvector_normal(a: &DenseMatrix, b: &DenseMatrix, seed: Option<c64>, tol: &Tolerances) -> Result<SharedEigenResult> {
    shared(a, b, seed, tol, Variant::Normal)
}

fn shared(a: &DenseMatrix, b: &DenseMatrix, seed: Option<c64>, tol: &Tolerances, variant: Variant) -> Result<SharedEigenResult> {
    let n = ensure_same_square("shared_approx_eigenvector", a, b)?;
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrices".into()));
    }
    let ea = eig_normal(a, tol)?;
    let eb = match variant {
        Variant::Normal => Some(eig_normal(b, tol)?),
        Variant::General => None,
    };
    let epsilon = operator_norm(&(a * b - b * a))?;
    let nf = n as f64;
    let (r_nominal, bound) = match variant {
        Variant::General => ((epsilon / 2.0).sqrt(), nf * (epsilon / 2.0).sqrt()),
        Variant::Normal => (epsilon.sqrt(), nf * epsilon.sqrt()),
    };
    // below roundoff the eigenvalues of a degenerate A are split by noise,
    // so the radius is floored at a degeneracy tolerance
    let spectral_radius = ea.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let r = r_nominal.max(1e-9 * spectral_radius.max(1.0));
    let bound_effective = match variant {
        Variant::General => nf * r.max(epsilon / (2.0 * r)),
        Variant::Normal => nf * r.max(epsilon / r),
    };
    let seed = seed.unwrap_or(ea.eigenvalues[0]);
    let cl = cluster(&ea.eigenvalues, seed, r)?;
    let lambda = nearest(&ea.eigenvalues, seed);
    let (v, vbar) = split_basis(&ea, &cl.indices);
    let m = v.ncols();
    let a_v = v.adjoint() * a * &v;
    let a_deviation = operator_norm(&(&a_v - DenseMatrix::identity(m, m) * lambda))?;
    let b_vv = v.adjoint() * b * &v;
    let b_off = if vbar.ncols() == 0 { 0.0 } else { operator_norm(&(vbar.adjoint() * b * &v))? };
    let blocks = BlockReport {
        a_deviation,
        a_deviation_bound: nf * r,
        b_offdiag: b_off,
        b_offdiag_bound: nf * epsilon / (2.0 * r),
        b_offdiag_sharp: ((m * (n - m)) as f64).sqrt() * epsilon / r,
    };
    let eg = eig_general(&b_vv, tol)?;
    let pick = best_separated(&eg.values);
    let (y, compressed_residual) = eg.eigenvector(pick);
    let mu_compressed = eg.values[pick];
    let mut vector = &v * y;
    let norm = vector.norm();
    vector /= c64::new(norm, 0.0);
    let mu = match &eb {
        Some(eb) => nearest(&eb.eigenvalues, mu_compressed),
        None => mu_compressed,
    };
    let residual_a = (a * &vector - &vector * lambda).norm();
    let residual_b = (b * &vector - &vector * mu).norm();
    Ok(SharedEigenResult {
        vector,
        lambda,
        mu,
        mu_compressed,
        residual_a,
        residual_b,
        bound,
        bound_effective,
        epsilon,
        compressed_residual,
        cluster: cl,
        blocks,
    })
}

fn nearest(values: &[c64], z: c64) -> c64 {
    values
        .iter()
        .copied()
        .min_by(|x, y| (x - z).norm().total_cmp(&(y - z).norm()))
        .expect("nonempty spectrum")
}

fn split_basis(e: &EigDecomp, indices: &[usize]) -> (DenseMatrix, DenseMatrix) {
    let n = e.dim();
    let others: Vec<usize> = (0..n).filter(|i| !indices.contains(i)).collect();
    let v = DenseMatrix::from_fn(n, indices.len(), |r, c| e.eigenvectors[(r, indices[c])]);
    let vbar = DenseMatrix::from_fn(n, others.len(), |r, c| e.eigenvectors[(r, others[c])]);
    (v, vbar)
}

// Eigenvalue farthest from the rest of the spectrum; first index on ties.
fn best_separated(values: &[c64]) -> usize {
    let gap = |i: usize| {
        values
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, z)| (z - values[i]).norm())
            .fold(f64::INFINITY, f64::min)
    };
    let mut best = 0;
    let mut best_gap = gap(0);
    for i in 1..values.len() {
        let g = gap(i);
        if g > best_gap {
            best = i;
            best_gap = g;
        }
    }
    best
}
