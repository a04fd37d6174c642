//! Eigensolvers.
//!
//! General and normal matrices go through a complex Schur decomposition
//! (Householder reduction to Hessenberg form followed by single-shift QR with
//! Wilkinson shifts). For a normal matrix the triangular factor is diagonal,
//! so the Schur vectors are an orthonormal eigenbasis. Hermitian matrices use
//! nalgebra's symmetric eigensolver.

use std::cmp::Ordering;

use super::{c64, ensure_finite, ensure_normal, ensure_square, DenseMatrix, DenseVector, ZERO};
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// `A = Q T Q†` with `Q` unitary and `T` upper triangular.
#[derive(Debug, Clone)]
pub struct Schur {
    pub q: DenseMatrix,
    pub t: DenseMatrix,
}

/// Eigendecomposition of a normal matrix.
#[derive(Debug, Clone)]
pub struct EigDecomp {
    pub eigenvalues: Vec<c64>,
    /// Orthonormal eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: DenseMatrix,
    /// `max_j ‖A x_j − λ_j x_j‖₂`.
    pub residual: f64,
}

impl EigDecomp {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, j: usize) -> DenseVector {
        self.eigenvectors.column(j).into_owned()
    }
}

/// Eigenvalues of a general square matrix, with eigenvectors on request.
#[derive(Debug, Clone)]
pub struct GeneralEig {
    pub values: Vec<c64>,
    matrix: DenseMatrix,
    schur: Schur,
    // position of values[i] on the diagonal of schur.t
    diag_index: Vec<usize>,
}

impl GeneralEig {
    pub fn schur(&self) -> &Schur {
        &self.schur
    }

    /// Unit right eigenvector for `values[i]` and its residual `‖A x − λ x‖₂`.
    pub fn eigenvector(&self, i: usize) -> (DenseVector, f64) {
        let d = self.diag_index[i];
        let y = triangular_eigenvector(&self.schur.t, d);
        let mut x = &self.schur.q * y;
        let norm = x.norm();
        x /= c64::new(norm, 0.0);
        let lambda = self.values[i];
        let residual = (&self.matrix * &x - &x * lambda).norm();
        (x, residual)
    }
}

/// Total order used for every eigenvalue list: descending magnitude, then
/// descending real part, then descending imaginary part. Values are compared
/// on a grid of `1e-9 · scale` so near-ties resolve reproducibly.
pub fn spectral_order(a: c64, b: c64, scale: f64) -> Ordering {
    let key = |z: c64| {
        let q = 1e-9 * scale.max(f64::MIN_POSITIVE);
        (
            -(z.norm() / q).round() as i64,
            -(z.re / q).round() as i64,
            -(z.im / q).round() as i64,
        )
    };
    key(a).cmp(&key(b))
}

fn sorted_permutation(values: &[c64]) -> Vec<usize> {
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| spectral_order(values[i], values[j], scale).then(i.cmp(&j)));
    idx
}

/// Complex Schur decomposition.
pub fn complex_schur(a: &DenseMatrix, tol: &Tolerances) -> Result<Schur> {
    let n = ensure_square(a)?;
    ensure_finite(a)?;
    let mut h = a.clone();
    let mut q = DenseMatrix::identity(n, n);
    hessenberg(&mut h, &mut q);
    hessenberg_qr(&mut h, &mut q, tol.schur_iterations_per_eigenvalue)?;
    for j in 0..n {
        for i in (j + 1)..n {
            h[(i, j)] = ZERO;
        }
    }
    Ok(Schur { q, t: h })
}

fn hessenberg(a: &mut DenseMatrix, q: &mut DenseMatrix) {
    let n = a.nrows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let mut v: Vec<c64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let alpha = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail = v[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if alpha == 0.0 || tail == 0.0 {
            continue;
        }
        let phase = if v[0].norm() > 0.0 { v[0] / v[0].norm() } else { c64::new(1.0, 0.0) };
        v[0] += phase * alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let beta = 2.0 / vnorm2;
        // A ← H A
        for j in 0..n {
            let s: c64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * a[(k + 1 + i, j)]).sum();
            let s = s * beta;
            for (i, vi) in v.iter().enumerate() {
                a[(k + 1 + i, j)] -= vi * s;
            }
        }
        // A ← A H, Q ← Q H
        for m in [&mut *a, &mut *q] {
            for i in 0..n {
                let s: c64 = v.iter().enumerate().map(|(l, vl)| m[(i, k + 1 + l)] * vl).sum();
                let s = s * beta;
                for (l, vl) in v.iter().enumerate() {
                    m[(i, k + 1 + l)] -= s * vl.conj();
                }
            }
        }
        a[(k + 1, k)] = -phase * alpha;
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
    }
}

fn norm1(z: c64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Givens pair `(c, s)` with real `c` such that
/// `[[c, s], [−s̄, c]] · [a; b] = [r; 0]`.
fn givens(a: c64, b: c64) -> (f64, c64) {
    if b == ZERO {
        return (1.0, ZERO);
    }
    let an = a.norm();
    let r = an.hypot(b.norm());
    if an == 0.0 {
        return (0.0, b.conj() / r);
    }
    let phase = a / an;
    (an / r, phase * b.conj() / r)
}

fn hessenberg_qr(h: &mut DenseMatrix, q: &mut DenseMatrix, per_eigenvalue: usize) -> Result<()> {
    let n = h.nrows();
    if n < 2 {
        return Ok(());
    }
    let hnorm = h.norm().max(f64::MIN_POSITIVE);
    let budget = per_eigenvalue * n;
    let mut spent = 0usize;
    let mut its = 0usize;
    let mut hi = n - 1;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let mut s = norm1(h[(l - 1, l - 1)]) + norm1(h[(l, l)]);
            if s == 0.0 {
                s = hnorm;
            }
            let sub = norm1(h[(l, l - 1)]);
            if sub <= f64::EPSILON * s || sub <= f64::MIN_POSITIVE * 1e3 {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            its = 0;
            continue;
        }
        spent += 1;
        its += 1;
        if spent > budget {
            return Err(Error::Convergence("complex Schur QR iteration"));
        }
        let mu = if its.is_multiple_of(10) {
            // exceptional shift to break cycles (e.g. cyclic permutations)
            let mag = 0.75 * norm1(h[(hi, hi - 1)]) + 0.5 * norm1(h[(hi - 1, hi - 1)] - h[(hi, hi)]);
            h[(hi, hi)] + c64::from_polar(mag.max(f64::EPSILON * hnorm), its as f64)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(h, q, l, hi, mu);
    }
    Ok(())
}

fn wilkinson_shift(a: c64, b: c64, c: c64, d: c64) -> c64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let m1 = mid + disc;
    let m2 = mid - disc;
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// One explicitly shifted QR step on the active block `lo..=hi`, applied to
/// the whole matrix so that the final triangular factor is a Schur form of
/// the original.
fn qr_sweep(h: &mut DenseMatrix, q: &mut DenseMatrix, lo: usize, hi: usize, mu: c64) {
    let n = h.nrows();
    for i in lo..=hi {
        h[(i, i)] -= mu;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..n {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = x * c + s * y;
            h[(k + 1, j)] = -s.conj() * x + y * c;
        }
        h[(k + 1, k)] = ZERO;
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + offset;
        let rows = (k + 2).min(hi + 1);
        for i in 0..rows {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + y * s.conj();
            h[(i, k + 1)] = -x * s + y * c;
        }
        for i in 0..n {
            let x = q[(i, k)];
            let y = q[(i, k + 1)];
            q[(i, k)] = x * c + y * s.conj();
            q[(i, k + 1)] = -x * s + y * c;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += mu;
    }
}

/// Solves `(T − t_dd) y = 0` with `y_d = 1` and `y_j = 0` for `j > d`.
fn triangular_eigenvector(t: &DenseMatrix, d: usize) -> DenseVector {
    let n = t.nrows();
    let lambda = t[(d, d)];
    let small = f64::EPSILON * t.norm().max(f64::MIN_POSITIVE);
    let mut y = DenseVector::zeros(n);
    y[d] = c64::new(1.0, 0.0);
    for j in (0..d).rev() {
        let mut sum = ZERO;
        for m in j + 1..=d {
            sum += t[(j, m)] * y[m];
        }
        let mut denom = t[(j, j)] - lambda;
        if denom.norm() < small {
            denom = c64::new(small, 0.0);
        }
        y[j] = -sum / denom;
        let big = y.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if big > 1e150 {
            y /= c64::new(big, 0.0);
        }
    }
    y
}

/// Full eigendecomposition of a normal matrix with orthonormal eigenvectors,
/// ordered by [`spectral_order`].
pub fn eig_normal(a: &DenseMatrix, tol: &Tolerances) -> Result<EigDecomp> {
    let n = ensure_square(a)?;
    ensure_finite(a)?;
    ensure_normal(a, tol)?;
    let schur = complex_schur(a, tol)?;
    let raw: Vec<c64> = (0..n).map(|i| schur.t[(i, i)]).collect();
    let perm = sorted_permutation(&raw);
    let eigenvalues: Vec<c64> = perm.iter().map(|&i| raw[i]).collect();
    let eigenvectors = DenseMatrix::from_fn(n, n, |r, c| schur.q[(r, perm[c])]);
    let residual = (0..n)
        .map(|j| (a * eigenvectors.column(j) - eigenvectors.column(j) * eigenvalues[j]).norm())
        .fold(0.0, f64::max);
    let limit = tol.eig_residual * a.norm().max(1.0);
    if residual > limit {
        return Err(Error::Convergence("normal eigendecomposition (residual above tolerance)"));
    }
    Ok(EigDecomp {
        eigenvalues,
        eigenvectors,
        residual,
    })
}

/// Eigenvalues of a general square matrix via the complex Schur form.
pub fn eig_general(a: &DenseMatrix, tol: &Tolerances) -> Result<GeneralEig> {
    let n = ensure_square(a)?;
    let schur = complex_schur(a, tol)?;
    let raw: Vec<c64> = (0..n).map(|i| schur.t[(i, i)]).collect();
    let diag_index = sorted_permutation(&raw);
    let values = diag_index.iter().map(|&i| raw[i]).collect();
    Ok(GeneralEig {
        values,
        matrix: a.clone(),
        schur,
        diag_index,
    })
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn eig_hermitian(h: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    let n = ensure_square(h)?;
    ensure_finite(h)?;
    if n == 0 {
        return Ok((Vec::new(), DenseMatrix::zeros(0, 0)));
    }
    let sym = (h + h.adjoint()) * c64::new(0.5, 0.0);
    let eig = sym
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or(Error::Convergence("Hermitian eigendecomposition"))?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]).then(i.cmp(&j)));
    let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DenseMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
    Ok((values, vectors))
}
