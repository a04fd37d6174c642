//! Optimal pairings of two spectra.

use super::{c64, ensure_same_square, DenseMatrix};
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// A perfect matching of rows to columns of a square cost matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// `row_of[col]` is the row matched to column `col`.
    pub row_of: Vec<usize>,
    /// Sum of matched costs (min-sum) or the largest matched cost (bottleneck).
    pub value: f64,
}

/// Minimum-cost perfect matching (Hungarian method with potentials, `O(n³)`).
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> Result<Assignment> {
    let n = check_cost(cost)?;
    if n == 0 {
        return Ok(Assignment { row_of: Vec::new(), value: 0.0 });
    }
    // 1-based arrays; index 0 is the virtual root of each augmenting search
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut match_row = vec![0usize; n + 1]; // column -> row
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        match_row[0] = row;
        let mut col0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let r0 = match_row[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0usize;
            for col in 1..=n {
                if used[col] {
                    continue;
                }
                let reduced = cost[r0 - 1][col - 1] - u[r0] - v[col];
                if reduced < minv[col] {
                    minv[col] = reduced;
                    way[col] = col0;
                }
                if minv[col] < delta {
                    delta = minv[col];
                    col1 = col;
                }
            }
            for col in 0..=n {
                if used[col] {
                    u[match_row[col]] += delta;
                    v[col] -= delta;
                } else {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
            if match_row[col0] == 0 {
                break;
            }
        }
        loop {
            let col1 = way[col0];
            match_row[col0] = match_row[col1];
            col0 = col1;
            if col0 == 0 {
                break;
            }
        }
    }
    let row_of: Vec<usize> = (1..=n).map(|c| match_row[c] - 1).collect();
    let value = row_of.iter().enumerate().map(|(c, &r)| cost[r][c]).sum();
    Ok(Assignment { row_of, value })
}

/// Perfect matching minimizing the largest matched cost: binary search over
/// the distinct cost values with a bipartite-matching feasibility test.
pub fn bottleneck_assignment(cost: &[Vec<f64>]) -> Result<Assignment> {
    let n = check_cost(cost)?;
    if n == 0 {
        return Ok(Assignment { row_of: Vec::new(), value: 0.0 });
    }
    let mut levels: Vec<f64> = cost.iter().flatten().copied().collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let (mut lo, mut hi) = (0usize, levels.len() - 1);
    let mut best = perfect_matching(cost, levels[hi]).expect("complete graph has a perfect matching");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match perfect_matching(cost, levels[mid]) {
            Some(m) => {
                best = m;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    if let Some(m) = perfect_matching(cost, levels[lo]) {
        best = m;
    }
    let value = best.iter().enumerate().map(|(c, &r)| cost[r][c]).fold(0.0, f64::max);
    Ok(Assignment { row_of: best, value })
}

/// Kuhn's augmenting paths on the edges with cost `≤ threshold`.
fn perfect_matching(cost: &[Vec<f64>], threshold: f64) -> Option<Vec<usize>> {
    let n = cost.len();
    let mut row_of: Vec<Option<usize>> = vec![None; n];
    fn augment(row: usize, cost: &[Vec<f64>], t: f64, seen: &mut [bool], row_of: &mut [Option<usize>]) -> bool {
        for col in 0..cost.len() {
            if cost[row][col] <= t && !seen[col] {
                seen[col] = true;
                if row_of[col].is_none_or(|r| augment(r, cost, t, seen, row_of)) {
                    row_of[col] = Some(row);
                    return true;
                }
            }
        }
        false
    }
    for row in 0..n {
        let mut seen = vec![false; n];
        if !augment(row, cost, threshold, &mut seen, &mut row_of) {
            return None;
        }
    }
    row_of.into_iter().collect()
}

fn check_cost(cost: &[Vec<f64>]) -> Result<usize> {
    let n = cost.len();
    if cost.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidArgument("cost matrix must be square".into()));
    }
    if cost.iter().flatten().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(n)
}

/// `min_σ (Σ_j |λ_{σ(j)} − μ_j|^p)^{1/p}` over all pairings of two spectra of
/// equal length (`max_j` for `p = ∞`). Returns the value and the pairing.
pub fn spectral_distance_of_spectra(lambda: &[c64], mu: &[c64], p: f64) -> Result<(f64, Assignment)> {
    if lambda.len() != mu.len() {
        return Err(Error::DimensionMismatch {
            op: "spectral_distance",
            left: (lambda.len(), 1),
            right: (mu.len(), 1),
        });
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("spectral distance needs p >= 1, got {p}")));
    }
    let dist: Vec<Vec<f64>> = lambda.iter().map(|l| mu.iter().map(|m| (l - m).norm()).collect()).collect();
    if p.is_infinite() {
        let a = bottleneck_assignment(&dist)?;
        return Ok((a.value, a));
    }
    let scale = dist.iter().flatten().copied().fold(0.0, f64::max);
    if scale == 0.0 {
        let row_of = (0..lambda.len()).collect();
        return Ok((0.0, Assignment { row_of, value: 0.0 }));
    }
    let cost: Vec<Vec<f64>> = dist.iter().map(|row| row.iter().map(|d| (d / scale).powf(p)).collect()).collect();
    let a = min_cost_assignment(&cost)?;
    let sum: f64 = a.row_of.iter().enumerate().map(|(c, &r)| (dist[r][c] / scale).powf(p)).sum();
    Ok((scale * sum.powf(1.0 / p), a))
}

/// Spectral `p`-distance between two normal matrices of equal dimension.
pub fn spectral_distance(a: &DenseMatrix, b: &DenseMatrix, p: f64, tol: &Tolerances) -> Result<f64> {
    ensure_same_square("spectral_distance", a, b)?;
    let ea = super::eig_normal(a, tol)?;
    let eb = super::eig_normal(b, tol)?;
    Ok(spectral_distance_of_spectra(&ea.eigenvalues, &eb.eigenvalues, p)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{haar_unitary, identity};
    use crate::svn::clock_matrix;
    use rand::{Rng, SeedableRng};

    fn permutations(n: usize) -> Vec<Vec<usize>> {
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

    fn brute(lambda: &[c64], mu: &[c64], p: f64) -> f64 {
        permutations(lambda.len())
            .iter()
            .map(|perm| {
                let d = perm.iter().enumerate().map(|(j, &i)| (lambda[i] - mu[j]).norm());
                if p.is_infinite() {
                    d.fold(0.0, f64::max)
                } else {
                    d.map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p)
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn identical_matrices_have_zero_distance() {
        let u = haar_unitary(5, 12);
        let d = spectral_distance(&u, &u, 2.0, &Tolerances::default()).unwrap();
        assert!(d < 1e-12);
    }

    #[test]
    fn clock_and_rotated_clock() {
        for g in 1..=6 {
            let c = clock_matrix(g);
            let omega = c64::from_polar(1.0, std::f64::consts::TAU / g as f64);
            let d = spectral_distance(&c, &(&c * omega), 2.0, &Tolerances::default()).unwrap();
            assert!(d < 1e-12, "g = {g}: {d}");
            let ec: Vec<c64> = (0..g).map(|j| c[(j, j)]).collect();
            let rotated: Vec<c64> = ec.iter().map(|z| z * omega).collect();
            assert!(brute(&ec, &rotated, 2.0) < 1e-12);
        }
    }

    #[test]
    fn matches_exhaustive_search() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..300 {
            let n = rng.random_range(1..=6);
            let lambda: Vec<c64> = (0..n).map(|_| c64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let mu: Vec<c64> = (0..n).map(|_| c64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            for p in [1.0, 2.0, 3.0, f64::INFINITY] {
                let (d, a) = spectral_distance_of_spectra(&lambda, &mu, p).unwrap();
                let b = brute(&lambda, &mu, p);
                assert!((d - b).abs() < 1e-12 * b.max(1.0), "p = {p}: {d} vs {b}");
                let mut seen = a.row_of.clone();
                seen.sort();
                assert_eq!(seen, (0..n).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn rejects_non_normal_and_mismatch() {
        let t = Tolerances::default();
        let j = DenseMatrix::from_row_slice(2, 2, &[c64::new(1.0, 0.0), c64::new(1.0, 0.0), c64::new(0.0, 0.0), c64::new(1.0, 0.0)]);
        assert!(matches!(spectral_distance(&j, &identity(2), 2.0, &t), Err(Error::NotNormal { .. })));
        assert!(matches!(spectral_distance(&identity(3), &identity(2), 2.0, &t), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn hungarian_small_known_case() {
        let cost = vec![vec![4.0, 1.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 2.0, 2.0]];
        let a = min_cost_assignment(&cost).unwrap();
        assert_eq!(a.value, 5.0);
        let b = bottleneck_assignment(&cost).unwrap();
        assert_eq!(b.value, 2.0);
    }
}
