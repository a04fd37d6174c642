//! Restriction of approximate symmetries to a gapped band.
//!
//! Given a Hamiltonian `H`, a band projector `Π` and unitaries `U, V` with
//! `‖[U,H]‖, ‖[V,H]‖ ≤ ε`, the ground symmetries `Ũ = Π W Π + Π̄ U Π̄` (with `W`
//! the polar factor of `Π U Π`) restrict to unitaries `u, v` on the band whose
//! twisted commutator grows by at most `2ξ² + 4f(ξ²)`, `ξ = ε/Δ`.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{
    c64, eig_hermitian, ensure_hermitian, ensure_same_square, ensure_square, ensure_unitary, hermitian_function, identity,
    polar, schatten_kyfan_norm, singular_values, twisted_commutator, DenseMatrix, NormSpec,
};

/// `f(x) = 1 − √(1 − x)` on `[0, 1]`, evaluated as `x / (1 + √(1 − x))` to
/// avoid cancellation for small `x`.
pub fn defect(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x / (1.0 + (1.0 - x).sqrt())
}

/// `δ + 2ξ² + 4f(ξ²)`.
pub fn restriction_bound(delta: f64, xi: f64) -> f64 {
    let x = xi * xi;
    delta + 2.0 * x + 4.0 * defect(x)
}

/// A Hermitian `H` with an orthogonal band projector `Π` commuting with it.
///
/// `gap` is the smallest `|λ|` over eigenvalues of `H` outside the band, so
/// `H² ⪰ Δ² Π̄`; `width` is `‖HΠ‖` in the operator norm.
#[derive(Debug, Clone)]
pub struct BandSpec {
    h: DenseMatrix,
    projector: DenseMatrix,
    basis: DenseMatrix,
    complement: DenseMatrix,
    gap: f64,
    measured_gap: f64,
    width: f64,
}

impl BandSpec {
    /// Validates `H` and `Π`, measures the gap and width, and fixes the band
    /// basis. A supplied gap may understate the measured one but not exceed
    /// it beyond the relative band tolerance.
    pub fn new(h: DenseMatrix, projector: DenseMatrix, gap: Option<f64>, tol: &Tolerances) -> Result<Self> {
        let n = ensure_same_square("band", &h, &projector)?;
        ensure_hermitian(&h, tol)?;
        let idempotent = (&projector * &projector - &projector).norm();
        let selfadjoint = (&projector - projector.adjoint()).norm();
        let residual = idempotent.max(selfadjoint);
        if residual > tol.projector {
            return Err(Error::NotProjector { residual, tol: tol.projector });
        }
        let hnorm = h.norm().max(1.0);
        let comm = (&h * &projector - &projector * &h).norm() / hnorm;
        if comm > tol.projector.max(tol.hermiticity) * 10.0 {
            return Err(Error::InvalidBand(format!("H does not commute with the projector (relative residual {comm:.3e})")));
        }
        let (pvals, pvecs) = eig_hermitian(&projector)?;
        let inside: Vec<usize> = (0..n).filter(|&i| pvals[i] > 0.5).collect();
        let outside: Vec<usize> = (0..n).filter(|&i| pvals[i] <= 0.5).collect();
        if inside.is_empty() || outside.is_empty() {
            return Err(Error::InvalidBand(format!("projector rank {} must lie strictly between 0 and {n}", inside.len())));
        }
        // eig_hermitian sorts ascending, so the band columns come last; keep their order
        let basis = DenseMatrix::from_fn(n, inside.len(), |r, c| pvecs[(r, inside[c])]);
        let complement = DenseMatrix::from_fn(n, outside.len(), |r, c| pvecs[(r, outside[c])]);
        let (excited, _) = eig_hermitian(&(complement.adjoint() * &h * &complement))?;
        let measured_gap = excited.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
        let width = singular_values(&(&h * &basis))?.first().copied().unwrap_or(0.0);
        if !(measured_gap > 0.0) {
            return Err(Error::InvalidBand("band is not gapped (an excited eigenvalue is zero)".into()));
        }
        let gap = match gap {
            None => measured_gap,
            Some(g) if !(g > 0.0) => return Err(Error::InvalidBand(format!("gap must be positive, got {g}"))),
            Some(g) if g > measured_gap * (1.0 + tol.band_relative) => {
                return Err(Error::InvalidBand(format!("supplied gap {g} exceeds the measured gap {measured_gap}")))
            }
            Some(g) => g.min(measured_gap),
        };
        Ok(Self { h, projector, basis, complement, gap, measured_gap, width })
    }

    pub fn hamiltonian(&self) -> &DenseMatrix {
        &self.h
    }

    pub fn projector(&self) -> &DenseMatrix {
        &self.projector
    }

    /// Orthonormal columns spanning the band; every restriction is expressed here.
    pub fn basis(&self) -> &DenseMatrix {
        &self.basis
    }

    pub fn complement(&self) -> &DenseMatrix {
        &self.complement
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn measured_gap(&self) -> f64 {
        self.measured_gap
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    pub fn band_dim(&self) -> usize {
        self.basis.ncols()
    }

    /// `‖HΠ‖` in the given norm.
    pub fn width_in(&self, spec: NormSpec) -> Result<f64> {
        norm_in(&(&self.h * &self.projector), spec)
    }

    /// `H − HΠ`, the flattened Hamiltonian used for bands of nonzero width.
    pub fn flattened(&self) -> DenseMatrix {
        &self.h - &self.h * &self.projector
    }
}

// The (p,k) norm with k capped at the dimension.
fn norm_in(m: &DenseMatrix, spec: NormSpec) -> Result<f64> {
    schatten_kyfan_norm(m, spec.clamped(m.nrows().min(m.ncols())))
}

/// `ε = ‖[U, H]‖`.
pub fn commutator_epsilon(u: &DenseMatrix, band: &BandSpec, spec: NormSpec, tol: &Tolerances) -> Result<f64> {
    epsilon_against(u, band.hamiltonian(), spec, tol)
}

fn epsilon_against(u: &DenseMatrix, h: &DenseMatrix, spec: NormSpec, tol: &Tolerances) -> Result<f64> {
    ensure_same_square("commutator_epsilon", u, h)?;
    ensure_unitary(u, tol.unitarity)?;
    norm_in(&(u * h - h * u), spec)
}

/// `‖Π̄ U Π + Π U Π̄‖`, at most `ε/Δ`.
pub fn offdiag_norm(u: &DenseMatrix, band: &BandSpec, spec: NormSpec, tol: &Tolerances) -> Result<f64> {
    ensure_same_square("offdiag_norm", u, band.projector())?;
    ensure_unitary(u, tol.unitarity)?;
    let p = band.projector();
    let q = identity(band.dim()) - p;
    norm_in(&(&q * u * p + p * u * &q), spec)
}

/// A ground symmetry `Ũ` built from an approximate symmetry, with the
/// certified and measured distances to the original.
#[derive(Debug, Clone)]
pub struct GroundSymmetry {
    /// `Ũ` on the full space.
    pub full: DenseMatrix,
    /// `Ũ` restricted to the band, in the band basis.
    pub restricted: DenseMatrix,
    pub xi: f64,
    /// `ξ + f(ξ²)`.
    pub bound_full: f64,
    /// `f(ξ²)`.
    pub bound_band: f64,
    /// `‖U − Ũ‖`.
    pub distance_full: f64,
    /// `‖Π(U − Ũ)Π‖`.
    pub distance_band: f64,
    /// Smallest singular value of `ΠUΠ` on the band.
    pub min_singular: f64,
}

/// Builds `Ũ = Π W Π + Π̄ U Π̄` for `ξ = ε/Δ < 1` and reports the certified
/// distances `ξ + f(ξ²)` and `f(ξ²)` next to the measured ones.
pub fn ground_symmetry(u: &DenseMatrix, band: &BandSpec, spec: NormSpec, tol: &Tolerances) -> Result<GroundSymmetry> {
    let eps = commutator_epsilon(u, band, spec, tol)?;
    ground_symmetry_with_xi(u, band, eps / band.gap(), spec)
}

fn ground_symmetry_with_xi(u: &DenseMatrix, band: &BandSpec, xi: f64, spec: NormSpec) -> Result<GroundSymmetry> {
    if !(xi < 1.0) {
        return Err(Error::XiTooLarge { xi });
    }
    let q = band.basis();
    let block = q.adjoint() * u * q;
    let pol = polar(&block)?;
    let min_singular = pol.singular_values.last().copied().unwrap_or(0.0);
    if min_singular <= 1e-12 {
        return Err(Error::SingularBlock { min_singular });
    }
    let p = band.projector();
    let pbar = identity(band.dim()) - p;
    let full = q * &pol.unitary * q.adjoint() + &pbar * u * &pbar;
    let diff = u - &full;
    let distance_full = norm_in(&diff, spec)?;
    let distance_band = norm_in(&(p * &diff * p), spec)?;
    let f = defect(xi * xi);
    Ok(GroundSymmetry {
        full,
        restricted: pol.unitary,
        xi,
        bound_full: xi + f,
        bound_band: f,
        distance_full,
        distance_band,
        min_singular,
    })
}

/// Output of [`restrict_pair`].
#[derive(Debug, Clone)]
pub struct RestrictionResult {
    /// Restrictions of the ground symmetries to the band basis.
    pub u: DenseMatrix,
    pub v: DenseMatrix,
    pub alpha: f64,
    pub spec: NormSpec,
    /// `max(‖[U,H]‖, ‖[V,H]‖)`.
    pub epsilon: f64,
    /// The same against `H − HΠ`; equals `epsilon` for a flat band.
    pub epsilon_flattened: f64,
    /// `‖HΠ‖` in the active norm.
    pub width: f64,
    pub gap: f64,
    /// `(ε + w)/Δ`, the parameter the band corollary states.
    pub xi_stated: f64,
    /// Parameter entering the bound: `max((ε + w)/Δ, ε_flattened/Δ)`.
    pub xi: f64,
    pub delta_in: f64,
    pub delta_out_bound: f64,
    pub delta_out_measured: f64,
    pub ground_u: GroundSymmetry,
    pub ground_v: GroundSymmetry,
}

/// Restricts an approximately twisted-commuting pair of approximate
/// symmetries to the band and checks the measured result against
/// `δ + 2ξ² + 4f(ξ²)`.
///
/// For bands of nonzero width the commutators are also measured against the
/// flattened Hamiltonian `H − HΠ`, which is what the restriction argument
/// actually uses; `ξ` is the larger of the two parameters so the bound stays
/// valid when `HΠ` is indefinite and `‖[U, HΠ]‖` exceeds `w`.
pub fn restrict_pair(
    u: &DenseMatrix,
    v: &DenseMatrix,
    band: &BandSpec,
    alpha: f64,
    spec: NormSpec,
    tol: &Tolerances,
) -> Result<RestrictionResult> {
    ensure_same_square("restrict_pair", u, v)?;
    ensure_same_square("restrict_pair", u, band.hamiltonian())?;
    spec.validate(band.dim())?;
    let eps = commutator_epsilon(u, band, spec, tol)?.max(commutator_epsilon(v, band, spec, tol)?);
    let width = if band.width() == 0.0 { 0.0 } else { band.width_in(spec)? };
    let flat = band.flattened();
    let eps_flat = if width == 0.0 {
        eps
    } else {
        epsilon_against(u, &flat, spec, tol)?.max(epsilon_against(v, &flat, spec, tol)?)
    };
    let xi_stated = (eps + width) / band.gap();
    let xi = xi_stated.max(eps_flat / band.gap());
    if !(xi < 1.0) {
        return Err(Error::XiTooLarge { xi });
    }
    let delta_in = norm_in(&twisted_commutator(u, v, alpha)?, spec)?;
    let ground_u = ground_symmetry_with_xi(u, band, xi, spec)?;
    let ground_v = ground_symmetry_with_xi(v, band, xi, spec)?;
    let g = band.band_dim();
    let small = twisted_commutator(&ground_u.restricted, &ground_v.restricted, alpha)?;
    let delta_out_measured = norm_in(&small, spec.clamped(g))?;
    let delta_out_bound = restriction_bound(delta_in, xi);
    if delta_out_measured > delta_out_bound + 1e-9 * delta_out_bound.max(1.0) {
        return Err(Error::BoundViolated(format!(
            "restricted twisted commutator {delta_out_measured} exceeds {delta_out_bound}"
        )));
    }
    Ok(RestrictionResult {
        u: ground_u.restricted.clone(),
        v: ground_v.restricted.clone(),
        alpha,
        spec,
        epsilon: eps,
        epsilon_flattened: eps_flat,
        width,
        gap: band.gap(),
        xi_stated,
        xi,
        delta_in,
        delta_out_bound,
        delta_out_measured,
        ground_u,
        ground_v,
    })
}

/// `H′ = I − e^{−βH}` on the same band, with gap `1 − e^{−βΔ}`.
///
/// Both signs of excited energy map at least that far from zero, so the
/// stated gap is a valid lower bound for the transformed spectrum.
pub fn gibbs_transform(band: &BandSpec, beta: f64, tol: &Tolerances) -> Result<BandSpec> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
    }
    ensure_square(band.hamiltonian())?;
    let h = hermitian_function(band.hamiltonian(), |x| -(-beta * x).exp_m1())?;
    let h = (&h + h.adjoint()) * c64::new(0.5, 0.0);
    let gap = -(-beta * band.gap()).exp_m1();
    BandSpec::new(h, band.projector().clone(), Some(gap), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{direct_sum, from_real_diagonal, haar_unitary, is_unitary, ONE, ZERO};
    use crate::svn::{clock_matrix, shift_matrix};
    use proptest::prelude::*;

    fn rotation(phi: f64) -> DenseMatrix {
        let (s, c) = phi.sin_cos();
        DenseMatrix::from_row_slice(2, 2, &[c64::new(c, 0.0), c64::new(s, 0.0), c64::new(-s, 0.0), c64::new(c, 0.0)])
    }

    fn qubit_band(gap: f64) -> BandSpec {
        let h = from_real_diagonal(&[0.0, gap]);
        let p = from_real_diagonal(&[1.0, 0.0]);
        BandSpec::new(h, p, None, &Tolerances::default()).unwrap()
    }

    #[test]
    fn defect_bounds() {
        for i in 0..=1000 {
            let x = i as f64 / 1000.0;
            let f = defect(x);
            assert!(x / 2.0 <= f + 1e-16 && f <= x + 1e-16, "x = {x}");
            assert!((f - (1.0 - (1.0 - x).sqrt())).abs() < 1e-15);
        }
        assert!((restriction_bound(0.05, 0.1) - (0.05 + 0.02 + 4.0 * (1.0 - 0.99f64.sqrt()))).abs() < 1e-15);
        assert!((restriction_bound(0.05, 0.1) - 0.09010).abs() < 1e-4);
    }

    #[test]
    fn rotation_epsilon_and_tight_band_defect() {
        let t = Tolerances::default();
        let band = qubit_band(2.0);
        for phi in [0.05, 0.3, 0.7, 1.2] {
            let u = rotation(phi);
            let eps = commutator_epsilon(&u, &band, NormSpec::operator(), &t).unwrap();
            assert!((eps - 2.0 * phi.sin()).abs() < 1e-12);
            let gs = ground_symmetry(&u, &band, NormSpec::operator(), &t).unwrap();
            assert!((gs.distance_band - (1.0 - phi.cos())).abs() < 1e-12);
            assert!((gs.bound_band - (1.0 - phi.cos())).abs() < 1e-12);
        }
    }

    #[test]
    fn full_distance_is_tight_to_leading_order() {
        let t = Tolerances::default();
        let band = qubit_band(2.0);
        for phi in [1e-1, 1e-2, 1e-3, 1e-4] {
            let gs = ground_symmetry(&rotation(phi), &band, NormSpec::operator(), &t).unwrap();
            assert!(gs.distance_full <= gs.bound_full + 1e-15);
            assert!((gs.distance_full / gs.xi - 1.0).abs() < phi, "φ = {phi}");
        }
    }

    #[test]
    fn flat_band_offdiag_is_tight() {
        let t = Tolerances::default();
        let n = 6;
        let p = direct_sum(&identity(2), &DenseMatrix::zeros(4, 4));
        let gap = 1.7;
        let h = (identity(n) - &p) * c64::new(gap, 0.0);
        let band = BandSpec::new(h, p, None, &t).unwrap();
        for seed in 0..20 {
            let u = haar_unitary(n, seed);
            let eps = commutator_epsilon(&u, &band, NormSpec::operator(), &t).unwrap();
            let off = offdiag_norm(&u, &band, NormSpec::operator(), &t).unwrap();
            assert!((off - eps / gap).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_symmetry_is_unchanged() {
        let t = Tolerances::default();
        let g = 3;
        let h = direct_sum(&DenseMatrix::zeros(g, g), &from_real_diagonal(&[1.0, 1.5, 2.0]));
        let p = direct_sum(&identity(g), &DenseMatrix::zeros(3, 3));
        let band = BandSpec::new(h, p, None, &t).unwrap();
        let u = direct_sum(&clock_matrix(g), &from_real_diagonal(&[1.0, -1.0, 1.0]));
        let v = direct_sum(&shift_matrix(g), &identity(3));
        let gs = ground_symmetry(&u, &band, NormSpec::operator(), &t).unwrap();
        assert!((gs.full - &u).norm() < 1e-12);
        let r = restrict_pair(&u, &v, &band, 1.0 / 3.0, NormSpec::operator(), &t).unwrap();
        // the excited blocks do not twist, so only the band side is exact
        assert_eq!(r.xi, 0.0);
        assert_eq!(r.delta_out_bound, r.delta_in);
        assert!(r.delta_out_measured < 1e-12);
        assert!(is_unitary(&r.u, 1e-12) && is_unitary(&r.v, 1e-12));
    }

    #[test]
    fn zero_xi_bound_is_delta() {
        let t = Tolerances::default();
        let g = 2;
        let h = direct_sum(&DenseMatrix::zeros(g, g), &identity(2));
        let p = direct_sum(&identity(g), &DenseMatrix::zeros(2, 2));
        let band = BandSpec::new(h, p, None, &t).unwrap();
        let w = haar_unitary(2, 4);
        let u = direct_sum(&clock_matrix(2), &identity(2));
        let v = direct_sum(&(shift_matrix(2) * crate::linalg::twist_phase(0.01)), &w);
        let r = restrict_pair(&u, &v, &band, 0.47, NormSpec::operator(), &t).unwrap();
        assert_eq!(r.xi, 0.0);
        assert!((r.delta_out_bound - r.delta_in).abs() < 1e-15);
        assert!(r.delta_out_measured <= r.delta_in + 1e-12);
    }

    #[test]
    fn xi_at_least_one_is_rejected() {
        let t = Tolerances::default();
        let h = from_real_diagonal(&[0.0, 0.5, 3.0]);
        let band = BandSpec::new(h, from_real_diagonal(&[1.0, 0.0, 0.0]), None, &t).unwrap();
        // swapping the band state with the top level: ε = 3, ξ = 6
        let u = DenseMatrix::from_fn(3, 3, |r, c| if (r + c == 2 && r != 1) || (r == 1 && c == 1) { ONE } else { ZERO });
        assert!(matches!(ground_symmetry(&u, &band, NormSpec::operator(), &t), Err(Error::XiTooLarge { .. })));
    }

    #[test]
    fn overstated_gap_is_rejected() {
        let t = Tolerances::default();
        let h = from_real_diagonal(&[0.0, 1.0]);
        let p = from_real_diagonal(&[1.0, 0.0]);
        assert!(BandSpec::new(h.clone(), p.clone(), Some(1.0 + 1e-6), &t).is_err());
        assert_eq!(BandSpec::new(h.clone(), p.clone(), Some(1.0 + 1e-10), &t).unwrap().gap(), 1.0);
        assert_eq!(BandSpec::new(h, p, Some(0.5), &t).unwrap().gap(), 0.5);
    }

    #[test]
    fn band_validation() {
        let t = Tolerances::default();
        let h = from_real_diagonal(&[0.0, 1.0]);
        let not_proj = from_real_diagonal(&[0.5, 0.0]);
        assert!(matches!(BandSpec::new(h.clone(), not_proj, None, &t), Err(Error::NotProjector { .. })));
        let mut nh = h.clone();
        nh[(0, 1)] = c64::new(0.3, 0.0);
        assert!(matches!(BandSpec::new(nh, from_real_diagonal(&[1.0, 0.0]), None, &t), Err(Error::NotHermitian { .. })));
        let noncommuting = DenseMatrix::from_row_slice(2, 2, &[ZERO, c64::new(1.0, 0.0), c64::new(1.0, 0.0), ZERO]);
        assert!(BandSpec::new(noncommuting, from_real_diagonal(&[1.0, 0.0]), None, &t).is_err());
    }

    #[test]
    fn gibbs_examples() {
        let t = Tolerances::default();
        let gap = 1.3;
        let band = qubit_band(gap);
        let gb = gibbs_transform(&band, std::f64::consts::LN_2 / gap, &t).unwrap();
        assert!((gb.gap() - 0.5).abs() < 1e-15);
        let h = from_real_diagonal(&[0.0, 1.0, 3.0]);
        let p = from_real_diagonal(&[1.0, 0.0, 0.0]);
        let band = BandSpec::new(h, p, None, &t).unwrap();
        let gb = gibbs_transform(&band, 1.0, &t).unwrap();
        let expected = from_real_diagonal(&[0.0, 1.0 - (-1f64).exp(), 1.0 - (-3f64).exp()]);
        assert!((gb.hamiltonian() - expected).norm() < 1e-14);
        let tiny = gibbs_transform(&band, 1e-9, &t).unwrap();
        assert!(tiny.gap() < 2e-9 && tiny.hamiltonian().norm() < 1e-8);
    }

    #[test]
    fn width_band_uses_flattened_parameter() {
        let t = Tolerances::default();
        // band eigenvalues ±w, excited 1 and −1.2: HΠ is indefinite
        let w = 0.05;
        let h = from_real_diagonal(&[-w, w, 1.0, -1.2]);
        let p = from_real_diagonal(&[1.0, 1.0, 0.0, 0.0]);
        let band = BandSpec::new(h, p, None, &t).unwrap();
        assert!((band.width() - w).abs() < 1e-15);
        assert!((band.gap() - 1.0).abs() < 1e-15);
        let u0 = direct_sum(&clock_matrix(2), &identity(2));
        let v0 = direct_sum(&shift_matrix(2), &identity(2));
        for seed in 0..10u64 {
            let k = crate::models::hermitian_perturbation(4, seed);
            let u = crate::linalg::unitary_exp(&k, 0.02).unwrap() * &u0;
            let v = crate::linalg::unitary_exp(&k, -0.03).unwrap() * &v0;
            let r = restrict_pair(&u, &v, &band, 0.5, NormSpec::operator(), &t).unwrap();
            assert!(r.xi >= r.xi_stated);
            assert!(r.epsilon_flattened <= r.epsilon + 2.0 * r.width + 1e-12);
            assert!(r.delta_out_measured <= r.delta_out_bound + 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ground_symmetry_invariants(seed in any::<u64>(), s in 0.0f64..0.3, p_idx in 0usize..3) {
            let t = Tolerances::default();
            let spec = [NormSpec::operator(), NormSpec::frobenius(6), NormSpec::new(3.0, 2).unwrap()][p_idx];
            let h = direct_sum(&DenseMatrix::zeros(2, 2), &from_real_diagonal(&[1.0, 1.4, 1.8, 2.0]));
            let p = direct_sum(&identity(2), &DenseMatrix::zeros(4, 4));
            let band = BandSpec::new(h, p.clone(), None, &t).unwrap();
            let k = crate::models::hermitian_perturbation(6, seed);
            let base = direct_sum(&clock_matrix(2), &haar_unitary(4, seed ^ 1));
            let u = crate::linalg::unitary_exp(&k, s).unwrap() * base;
            let gs = match ground_symmetry(&u, &band, spec, &t) {
                Ok(gs) => gs,
                Err(Error::XiTooLarge { .. }) => return Ok(()),
                Err(e) => panic!("{e}"),
            };
            prop_assert!((&gs.full * &p - &p * &gs.full).norm() < 1e-10);
            let q = band.basis();
            prop_assert!((gs.restricted.adjoint() * &gs.restricted - identity(2)).norm() < 1e-10);
            prop_assert!((q.adjoint() * gs.full.adjoint() * &gs.full * q - identity(2)).norm() < 1e-10);
            prop_assert!(gs.distance_full <= gs.bound_full + 1e-9);
            prop_assert!(gs.distance_band <= gs.bound_band + 1e-9);
        }
    }
}
