//! The minimum twisted-commutator value `Λ^{(p,k)}_{g,α}` over `U(g) × U(g)`.
//!
//! For `p ≥ 2` the minimum is `2 k^{1/p} sin(π |⌊gα⌉ − gα| / g)` and it is
//! attained by a clock matrix paired with a power of the shift. The brute-force
//! search at the bottom of this module is an independent one-sided oracle.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::certify::TwistedPair;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{
    c64, haar_unitary_from, polar_unitary, singular_values, twist_phase, twisted_commutator, unitary_power, DenseMatrix,
    NormSpec, ZERO,
};

/// `diag(1, ω, …, ω^{g−1})` with `ω = e^{2πi/g}`.
pub fn clock_matrix(g: usize) -> DenseMatrix {
    let mut c = DenseMatrix::zeros(g, g);
    for j in 0..g {
        c[(j, j)] = twist_phase(j as f64 / g as f64);
    }
    c
}

/// The cyclic shift `|j⟩ ↦ |j ⊕ 1⟩`.
pub fn shift_matrix(g: usize) -> DenseMatrix {
    let mut s = DenseMatrix::from_element(g, g, ZERO);
    for j in 0..g {
        s[((j + 1) % g, j)] = c64::new(1.0, 0.0);
    }
    s
}

/// Nearest integer to `gα`, halves rounded away from zero.
pub fn nearest_multiple(g: usize, alpha: f64) -> i64 {
    (g as f64 * alpha).round() as i64
}

/// `Λ^{(p,k)}_{g,α} = 2 k^{1/p} sin(π |⌊gα⌉ − gα| / g)`, valid for `p ≥ 2`.
pub fn lambda_min(g: usize, alpha: f64, spec: NormSpec) -> Result<f64> {
    if g == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    spec.validate(g)?;
    if spec.p < 2.0 {
        return Err(Error::InvalidNorm { p: spec.p, k: spec.k, dim: g });
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("alpha = {alpha}")));
    }
    let x = g as f64 * alpha;
    let frac = (x.round() - x).abs();
    Ok(2.0 * spec.k_root() * (std::f64::consts::PI * frac / g as f64).sin())
}

/// `2 k^{1/p} sin(π / 2g)`, the α-independent ceiling of `Λ`.
pub fn lambda_ceiling(g: usize, spec: NormSpec) -> f64 {
    2.0 * spec.k_root() * (std::f64::consts::PI / (2.0 * g as f64)).sin()
}

/// The saturating pair `(C, S^m)` with `m = ⌊gα⌉`.
///
/// `C S^m = ω^m S^m C`, so `C S^m − η S^m C = (1 − η ω^{−m}) C S^m`: a scalar
/// multiple of a unitary, whose singular values are all `2|sin(π(m − gα)/g)|`.
pub fn optimal_pair(g: usize, alpha: f64, tol: &Tolerances) -> Result<TwistedPair> {
    if g == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let m = nearest_multiple(g, alpha);
    let v = unitary_power(&shift_matrix(g), m);
    TwistedPair::new(clock_matrix(g), v, alpha, tol)
}

/// Evenly spaced angles `θ_j = 2π ⌊gα⌉ (j − 1) / g`, reduced to `[0, 2π)`.
pub fn optimal_angles(g: usize, alpha: f64) -> Vec<f64> {
    let m = nearest_multiple(g, alpha).rem_euclid(g.max(1) as i64);
    (0..g)
        .map(|j| std::f64::consts::TAU * ((m * j as i64) % g as i64) as f64 / g as f64)
        .collect()
}

/// `Σ_j 4 sin²((θ_{j+1} − θ_j − 2πα)/2)` for the cyclic permutation `j ↦ j + 1`.
pub fn cyclic_objective(angles: &[f64], alpha: f64) -> f64 {
    let g = angles.len();
    (0..g)
        .map(|j| {
            let s = ((angles[(j + 1) % g] - angles[j] - std::f64::consts::TAU * alpha) / 2.0).sin();
            4.0 * s * s
        })
        .sum()
}

/// Schedule for [`brute_min`]. Every restart runs the same deterministic
/// sequence, so results depend only on the master seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentSchedule {
    pub iterations: usize,
    pub initial_step: f64,
    pub min_step: f64,
}

impl Default for DescentSchedule {
    fn default() -> Self {
        Self { iterations: 400, initial_step: 0.25, min_step: 1e-10 }
    }
}

#[derive(Debug, Clone)]
pub struct Restart {
    pub value: f64,
    pub u: DenseMatrix,
    pub v: DenseMatrix,
}

#[derive(Debug, Clone)]
pub struct BruteMin {
    pub best: f64,
    pub restarts: Vec<Restart>,
}

/// Locally minimizes `‖⟦u,v⟧_α‖_{(p,k)}` over unitary pairs from seeded Haar
/// starting points, by subgradient steps retracted onto the unitary group
/// through the polar factor. Steps that do not decrease the objective are
/// rejected and the step is halved.
pub fn brute_min(g: usize, alpha: f64, spec: NormSpec, restarts: usize, seed: u64) -> Result<BruteMin> {
    brute_min_with(g, alpha, spec, restarts, seed, DescentSchedule::default())
}

pub fn brute_min_with(
    g: usize,
    alpha: f64,
    spec: NormSpec,
    restarts: usize,
    seed: u64,
    schedule: DescentSchedule,
) -> Result<BruteMin> {
    if g == 0 || restarts == 0 {
        return Err(Error::InvalidArgument("brute_min needs g >= 1 and at least one restart".into()));
    }
    spec.validate(g)?;
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..restarts).map(|_| rand::Rng::random(&mut master)).collect();
    let mut out = Vec::with_capacity(restarts);
    for s in seeds {
        out.push(descend(g, alpha, spec, s, schedule)?);
    }
    let best = out.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    Ok(BruteMin { best, restarts: out })
}

fn objective(u: &DenseMatrix, v: &DenseMatrix, alpha: f64, spec: NormSpec) -> Result<f64> {
    let m = twisted_commutator(u, v, alpha)?;
    crate::linalg::schatten_kyfan_norm(&m, spec)
}

// Subgradient of the (p,k) norm at M: L_k diag(w) R_k†.
fn norm_subgradient(m: &DenseMatrix, spec: NormSpec) -> Result<DenseMatrix> {
    let n = m.nrows();
    let svd = m.clone().try_svd(true, true, f64::EPSILON, 0).ok_or(Error::Convergence("singular value decomposition"))?;
    let l = svd.u.expect("left vectors");
    let rt = svd.v_t.expect("right vectors");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let top = sv[0];
    let mut d = DenseMatrix::zeros(n, n);
    if top == 0.0 {
        return Ok(d);
    }
    let weights: Vec<f64> = if spec.p.is_infinite() {
        vec![1.0]
    } else {
        let k = spec.k.min(n);
        let norm = crate::linalg::schatten_kyfan_norm(m, spec)?;
        sv[..k].iter().map(|s| (s / norm).powf(spec.p - 1.0)).collect()
    };
    for (w, &i) in weights.iter().zip(&order) {
        d += l.column(i) * rt.row(i) * c64::new(*w, 0.0);
    }
    Ok(d)
}

fn descend(g: usize, alpha: f64, spec: NormSpec, seed: u64, schedule: DescentSchedule) -> Result<Restart> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = haar_unitary_from(g, &mut rng);
    let mut v = haar_unitary_from(g, &mut rng);
    let eta_bar = twist_phase(alpha).conj();
    let mut value = objective(&u, &v, alpha, spec)?;
    let mut step = schedule.initial_step;
    for _ in 0..schedule.iterations {
        if value == 0.0 || step < schedule.min_step {
            break;
        }
        let d = norm_subgradient(&twisted_commutator(&u, &v, alpha)?, spec)?;
        let grad_u = &d * v.adjoint() - v.adjoint() * &d * eta_bar;
        let grad_v = u.adjoint() * &d - &d * u.adjoint() * eta_bar;
        let cu = polar_unitary(&(&u - &grad_u * c64::new(step, 0.0)))?;
        let cv = polar_unitary(&(&v - &grad_v * c64::new(step, 0.0)))?;
        let candidate = objective(&cu, &cv, alpha, spec)?;
        if candidate < value {
            u = cu;
            v = cv;
            value = candidate;
            step *= 1.2;
        } else {
            step *= 0.5;
        }
    }
    Ok(Restart { value, u, v })
}

/// Singular values of `⟦C, S^m⟧_α`, for the flat-spectrum check.
pub fn optimal_pair_singular_values(g: usize, alpha: f64) -> Result<Vec<f64>> {
    let v = unitary_power(&shift_matrix(g), nearest_multiple(g, alpha));
    singular_values(&twisted_commutator(&clock_matrix(g), &v, alpha)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_unitary, schatten_kyfan_norm, spectral_distance};
    use proptest::prelude::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn pauli_case() {
        let c = clock_matrix(2);
        let s = shift_matrix(2);
        assert!((c[(0, 0)] - c64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((c[(1, 1)] + c64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(s[(0, 1)], c64::new(1.0, 0.0));
        assert_eq!(s[(1, 0)], c64::new(1.0, 0.0));
        assert_eq!(s[(0, 0)], ZERO);
    }

    #[test]
    fn clock_shift_powers_twist_commute() {
        for g in 1..=16 {
            let c = clock_matrix(g);
            assert!(is_unitary(&c, 1e-13) && is_unitary(&shift_matrix(g), 1e-13));
            for k in 0..g as i64 {
                let sk = unitary_power(&shift_matrix(g), k);
                let t = twisted_commutator(&c, &sk, k as f64 / g as f64).unwrap();
                assert!(t.norm() < 1e-13, "g = {g}, k = {k}");
            }
        }
    }

    #[test]
    fn closed_form_values() {
        let op = NormSpec::operator();
        assert!(lambda_min(4, 0.25, op).unwrap().abs() < 1e-15);
        assert!((lambda_min(5, 0.3, op).unwrap() - 2.0 * (PI * 0.1).sin()).abs() < 1e-15);
        assert!((lambda_min(5, 0.3, op).unwrap() - 0.618034).abs() < 1e-6);
        let fro = NormSpec::frobenius(3);
        assert!((lambda_min(3, 0.5, fro).unwrap() - 3f64.sqrt()).abs() < 1e-14);
        assert!((lambda_min(2, 0.25, op).unwrap() - 2.0 * (PI / 4.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn lambda_rejects_small_p() {
        assert!(matches!(lambda_min(3, 0.1, NormSpec::new(1.5, 1).unwrap()), Err(Error::InvalidNorm { .. })));
        assert!(lambda_min(3, 0.1, NormSpec::new(2.0, 4).unwrap()).is_err());
    }

    #[test]
    fn optimal_pair_examples() {
        let tol = Tolerances::default();
        let p = optimal_pair(4, 0.25, &tol).unwrap();
        assert!(p.delta < 1e-14);
        let p = optimal_pair(5, 0.3, &tol).unwrap();
        assert!((p.delta - lambda_min(5, 0.3, NormSpec::operator()).unwrap()).abs() < 1e-12);
        let p = optimal_pair(3, 0.5, &tol).unwrap();
        let t = twisted_commutator(&p.u, &p.v, 0.5).unwrap();
        let fro = schatten_kyfan_norm(&t, NormSpec::frobenius(3)).unwrap();
        assert!((fro - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn angles_examples() {
        let a = optimal_angles(4, 0.25);
        for (x, y) in a.iter().zip([0.0, PI / 2.0, PI, 3.0 * PI / 2.0]) {
            assert!((x - y).abs() < 1e-15);
        }
        assert_eq!(optimal_angles(2, 0.0), vec![0.0, 0.0]);
    }

    #[test]
    fn cyclic_objective_at_optimal_angles() {
        for g in 1..=9 {
            for i in 0..40 {
                let alpha = i as f64 / 40.0;
                let f = cyclic_objective(&optimal_angles(g, alpha), alpha);
                let frac = (nearest_multiple(g, alpha) as f64 - g as f64 * alpha).abs();
                let expected = 4.0 * g as f64 * (PI * frac / g as f64).sin().powi(2);
                assert!((f - expected).abs() < 1e-12);
                // square root is the Frobenius bound
                let lam = lambda_min(g, alpha, NormSpec::frobenius(g)).unwrap();
                assert!((f.sqrt() - lam).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn brute_small_cases() {
        let op = NormSpec::operator();
        let r = brute_min(2, 0.5, op, 6, 1).unwrap();
        assert!(r.best < 1e-6, "{}", r.best);
        let r = brute_min(3, 1.0 / 3.0, op, 6, 2).unwrap();
        assert!(r.best < 1e-5, "{}", r.best);
        let floor = lambda_min(2, 0.25, op).unwrap();
        let r = brute_min(2, 0.25, op, 8, 3).unwrap();
        assert!(r.best >= floor - 1e-6);
        assert!(r.best < floor + 1e-3, "{} vs {floor}", r.best);
    }

    #[test]
    fn wielandt_hoffman_chain_on_candidates() {
        let tol = Tolerances::default();
        let r = brute_min(3, 0.2, NormSpec::frobenius(3), 5, 11).unwrap();
        let eta = twist_phase(0.2);
        for c in &r.restarts {
            let lhs = spectral_distance(&(c.v.adjoint() * &c.u * &c.v), &(&c.u * eta), 2.0, &tol).unwrap();
            let rhs = twisted_commutator(&c.u, &c.v, 0.2).unwrap().norm();
            assert!(lhs <= rhs + 1e-10);
        }
    }

    proptest! {
        #[test]
        fn lambda_symmetries(g in 1usize..12, alpha in 0.0f64..1.0, p_idx in 0usize..3, full_k in any::<bool>()) {
            let p = [2.0, 3.0, f64::INFINITY][p_idx];
            let spec = NormSpec::new(p, if full_k { g } else { 1 }).unwrap();
            let a = lambda_min(g, alpha, spec).unwrap();
            prop_assert!((a - lambda_min(g, 1.0 - alpha, spec).unwrap()).abs() < 1e-12);
            prop_assert!((a - lambda_min(g, alpha + 1.0 / g as f64, spec).unwrap()).abs() < 1e-12);
            prop_assert!(a <= lambda_ceiling(g, spec) + 1e-15);
        }

        #[test]
        fn optimal_pair_is_flat(g in 1usize..11, alpha in 0.0f64..1.0) {
            let sv = optimal_pair_singular_values(g, alpha).unwrap();
            let spread = sv[0] - sv[sv.len() - 1];
            prop_assert!(spread < 1e-10);
        }
    }
}
