//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twistcert::linalg::{from_diagonal, haar_unitary};
use twistcert::{c64, DenseMatrix};

/// Arcs of `(α, δ)` as real intervals, built from scratch: every `j ≠ 0` with
/// `|j|δ < 2`, minus the ones reaching angle 0 (`slack` widens that test).
pub fn oracle_intervals(alpha: f64, delta: f64, slack: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut j = 1i64;
    while (j as f64) * delta < 2.0 {
        let w = (1.0 - j as f64 * delta).acos();
        for s in [j, -j] {
            let c = TAU * (alpha * s as f64).rem_euclid(1.0);
            let to_zero = c.min(TAU - c);
            if to_zero > w + slack {
                out.push((c - w, c + w));
            }
        }
        j += 1;
    }
    out
}

/// Intervals not containing any other (duplicates collapsed).
pub fn inclusion_minimal(intervals: &[(f64, f64)], tol: f64) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, &(l, r)) in intervals.iter().enumerate() {
        let contains_other = intervals.iter().enumerate().any(|(k, &(l2, r2))| {
            k != i && l2 >= l - tol && r2 <= r + tol && ((l2 - l).abs() > tol || (r2 - r).abs() > tol || k < i)
        });
        if !contains_other {
            out.push((l, r));
        }
    }
    out
}

/// Minimum number of points meeting every interval, by trying all subsets of
/// right endpoints in increasing size (an optimal transversal can always be
/// slid right onto endpoints).
pub fn exhaustive_transversal(intervals: &[(f64, f64)], candidates: &[(f64, f64)], tol: f64) -> usize {
    let points: Vec<f64> = candidates.iter().map(|&(_, r)| r).collect();
    let n = points.len();
    assert!(n <= 16, "exhaustive search limited to 16 candidates");
    let hits = |mask: u32| {
        intervals.iter().all(|&(l, r)| {
            (0..n).any(|i| mask & (1 << i) != 0 && points[i] >= l - tol && points[i] <= r + tol)
        })
    };
    for size in 0..=n {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == size && hits(mask) {
                return size;
            }
        }
    }
    unreachable!("all right endpoints always form a transversal")
}

/// Uniform complex number in the unit square `[-1, 1]²`.
pub fn complex_uniform(rng: &mut ChaCha8Rng) -> c64 {
    c64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random normal matrix `W D W†` with `D` uniform in the unit square.
pub fn random_normal(n: usize, seed: u64) -> (DenseMatrix, Vec<c64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d: Vec<c64> = (0..n).map(|_| complex_uniform(&mut rng)).collect();
    let w = haar_unitary(n, seed ^ 0x9e37_79b9_7f4a_7c15);
    (&w * from_diagonal(&d) * w.adjoint(), d)
}

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `min_σ (Σ |λ_σ(j) − μ_j|²)^{1/2}` by enumeration.
pub fn brute_spectral_distance(lambda: &[c64], mu: &[c64]) -> f64 {
    permutations(lambda.len())
        .iter()
        .map(|p| p.iter().enumerate().map(|(j, &i)| (lambda[i] - mu[j]).norm_sqr()).sum::<f64>().sqrt())
        .fold(f64::INFINITY, f64::min)
}
