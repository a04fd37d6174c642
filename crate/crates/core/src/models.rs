//! Seeded gapped Hamiltonians carrying exact twisted pairs, optionally
//! perturbed.
//!
//! The code space holds clock/shift pairs. The excited space is `ℂ^g ⊗ ℂ^m`
//! rotated by a Haar unitary `W`, with the same pairs acting on the first
//! factor and the excited energies on the second, so the unperturbed pairs
//! commute with `H` and twist exactly on the whole space. After the
//! perturbation `H + sK` the band is re-identified as the lowest eigenvectors
//! and the gap recomputed from the actual spectrum.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{
    c64, commutator, complex_gaussian, direct_sum, eig_hermitian, from_real_diagonal, haar_unitary, identity, kron,
    operator_norm, twisted_commutator, unitary_exp, DenseMatrix,
};
use crate::restriction::BandSpec;
use crate::svn::{clock_matrix, shift_matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    ClockBlock,
    TensorDouble,
    /// Clock block with every excited energy equal to the gap.
    FlatBand,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub g: usize,
    /// Second code factor, tensor-double only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g2: Option<usize>,
    /// A positive multiple of the code dimension.
    pub n_excited: usize,
    pub gap: f64,
    /// Operator norm of the code-space Hamiltonian before perturbation.
    #[serde(default)]
    pub width: f64,
    /// `s` in `H + sK` with `‖K‖ = 1`.
    #[serde(default)]
    pub perturbation_strength: f64,
    /// `t` in `e^{itK'} U` for every symmetry, with fresh `‖K'‖ = 1` each.
    #[serde(default)]
    pub symmetry_perturbation: f64,
    pub seed: u64,
}

impl ModelSpec {
    pub fn clock(g: usize, n_excited: usize, gap: f64, seed: u64) -> Self {
        Self {
            kind: ModelKind::ClockBlock,
            g,
            g2: None,
            n_excited,
            gap,
            width: 0.0,
            perturbation_strength: 0.0,
            symmetry_perturbation: 0.0,
            seed,
        }
    }

    pub fn tensor_double(g: usize, g2: usize, n_excited: usize, gap: f64, seed: u64) -> Self {
        Self {
            kind: ModelKind::TensorDouble,
            g2: Some(g2),
            ..Self::clock(g, n_excited, gap, seed)
        }
    }

    /// Code-space dimension.
    pub fn code_dim(&self) -> usize {
        match self.kind {
            ModelKind::TensorDouble => self.g * self.g2.unwrap_or(0),
            _ => self.g,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.g < 2 {
            return bad(format!("g = {} must be at least 2", self.g));
        }
        match (self.kind, self.g2) {
            (ModelKind::TensorDouble, Some(g2)) if g2 < 2 => return bad(format!("g2 = {g2} must be at least 2")),
            (ModelKind::TensorDouble, None) => return bad("tensor-double needs g2".into()),
            _ => {}
        }
        let code = self.code_dim();
        if self.n_excited == 0 || !self.n_excited.is_multiple_of(code) {
            return bad(format!("n_excited = {} must be a positive multiple of {code}", self.n_excited));
        }
        if !(self.gap > 0.0) || !self.gap.is_finite() {
            return bad(format!("gap = {} must be positive", self.gap));
        }
        for (name, x) in [
            ("width", self.width),
            ("perturbation_strength", self.perturbation_strength),
            ("symmetry_perturbation", self.symmetry_perturbation),
        ] {
            if !(x >= 0.0) || !x.is_finite() {
                return bad(format!("{name} = {x} must be finite and nonnegative"));
            }
        }
        Ok(())
    }
}

/// `(G + G†)/2` for a seeded complex Gaussian `G`, scaled to unit operator norm.
pub fn hermitian_perturbation(n: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = complex_gaussian(n, n, &mut rng);
    let h = (&g + g.adjoint()) * c64::new(0.5, 0.0);
    let norm = operator_norm(&h).unwrap_or(0.0);
    if norm == 0.0 {
        return h;
    }
    let h = h / c64::new(norm, 0.0);
    // exact Hermiticity after rounding
    (&h + h.adjoint()) * c64::new(0.5, 0.0)
}

/// Measured quantities shared by both model families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMeasurements {
    /// `‖[X, H]‖` per symmetry, in the order the model lists them.
    pub epsilons: Vec<f64>,
    /// The same against `H − HΠ`.
    pub epsilons_flattened: Vec<f64>,
    /// Gap of the perturbed, recentred Hamiltonian.
    pub gap_eff: f64,
    /// `‖HΠ‖` after recentring.
    pub width_eff: f64,
    /// `max_X max((ε_X + w)/Δ, ε′_X/Δ)`.
    pub xi: f64,
    /// `max ε / nominal gap`.
    pub epsilon_ratio: f64,
}

impl ModelMeasurements {
    /// The restriction theorems apply only for `ξ < 1`.
    pub fn xi_ok(&self) -> bool {
        self.xi < 1.0
    }
}

#[derive(Debug, Clone)]
pub struct ClockModel {
    pub spec: ModelSpec,
    pub band: BandSpec,
    pub u: DenseMatrix,
    pub v: DenseMatrix,
    /// `1/g`.
    pub alpha: f64,
    /// `‖uv − e^{2πiα} vu‖`.
    pub delta: f64,
    pub measured: ModelMeasurements,
}

#[derive(Debug, Clone)]
pub struct DoubleModel {
    pub spec: ModelSpec,
    pub band: BandSpec,
    pub u1: DenseMatrix,
    pub u2: DenseMatrix,
    pub v1: DenseMatrix,
    pub v2: DenseMatrix,
    /// `‖[u₁, u₂]‖`.
    pub gamma: f64,
    /// `‖[u₁,v₁]_{1/g}‖`, `‖[u₂,v₂]_{1/g₂}‖`, `‖[u₁,v₂]‖`, `‖[u₂,v₁]‖`.
    pub deltas: [f64; 4],
    pub delta: f64,
    pub measured: ModelMeasurements,
}

/// Sub-seeds drawn in a fixed order so every component is reproducible.
struct Seeds {
    rotation: u64,
    energies: u64,
    code: u64,
    perturbation: u64,
    symmetries: u64,
}

impl Seeds {
    fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self {
            rotation: rng.next_u64(),
            energies: rng.next_u64(),
            code: rng.next_u64(),
            perturbation: rng.next_u64(),
            symmetries: rng.next_u64(),
        }
    }
}

struct Built {
    band: BandSpec,
    symmetries: Vec<DenseMatrix>,
    measured: ModelMeasurements,
}

// `code_ops` act on the code space; each is extended by `W (X ⊗ I_m) W†` on
// the excited space.
fn build(spec: &ModelSpec, code_ops: Vec<DenseMatrix>, tol: &Tolerances) -> Result<Built> {
    spec.validate()?;
    let seeds = Seeds::new(spec.seed);
    let code = spec.code_dim();
    let m = spec.n_excited / code;
    let n = code + spec.n_excited;

    let w = haar_unitary(spec.n_excited, seeds.rotation);
    let energies: Vec<f64> = match spec.kind {
        ModelKind::FlatBand => vec![spec.gap; m],
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seeds.energies);
            (0..m).map(|_| rng.random_range(spec.gap..=2.0 * spec.gap)).collect()
        }
    };
    let excited_h = &w * kron(&identity(code), &from_real_diagonal(&energies)) * w.adjoint();
    let code_h = if spec.width > 0.0 {
        hermitian_perturbation(code, seeds.code) * c64::new(spec.width, 0.0)
    } else {
        DenseMatrix::zeros(code, code)
    };
    let mut h = direct_sum(&code_h, &excited_h);
    if spec.perturbation_strength > 0.0 {
        h += hermitian_perturbation(n, seeds.perturbation) * c64::new(spec.perturbation_strength, 0.0);
    }
    h = (&h + h.adjoint()) * c64::new(0.5, 0.0);

    let mut symmetries: Vec<DenseMatrix> = code_ops
        .iter()
        .map(|x| direct_sum(x, &(&w * kron(x, &identity(m)) * w.adjoint())))
        .collect();
    if spec.symmetry_perturbation > 0.0 {
        for (i, x) in symmetries.iter_mut().enumerate() {
            let k = hermitian_perturbation(n, seeds.symmetries.wrapping_add(i as u64));
            *x = unitary_exp(&k, spec.symmetry_perturbation)? * &*x;
        }
    }

    // re-identify the band and centre it at zero
    let (values, vectors) = eig_hermitian(&h)?;
    let centre = 0.5 * (values[0] + values[code - 1]);
    h -= identity(n) * c64::new(centre, 0.0);
    let basis = vectors.columns(0, code).into_owned();
    let projector = &basis * basis.adjoint();
    let projector = (&projector + projector.adjoint()) * c64::new(0.5, 0.0);
    let band = BandSpec::new(h, projector, None, tol)?;

    let flat = band.flattened();
    let mut epsilons = Vec::new();
    let mut epsilons_flattened = Vec::new();
    for x in &symmetries {
        epsilons.push(operator_norm(&commutator(x, band.hamiltonian())?)?);
        epsilons_flattened.push(operator_norm(&commutator(x, &flat)?)?);
    }
    let gap_eff = band.gap();
    let width_eff = band.width();
    let xi = epsilons
        .iter()
        .zip(&epsilons_flattened)
        .map(|(e, f)| ((e + width_eff) / gap_eff).max(f / gap_eff))
        .fold(0.0, f64::max);
    let epsilon_ratio = epsilons.iter().copied().fold(0.0, f64::max) / spec.gap;
    Ok(Built {
        band,
        symmetries,
        measured: ModelMeasurements { epsilons, epsilons_flattened, gap_eff, width_eff, xi, epsilon_ratio },
    })
}

/// Clock block (or flat band): `U = C ⊕ W(C⊗I)W†`, `V = S ⊕ W(S⊗I)W†`.
pub fn clock_model(spec: &ModelSpec, tol: &Tolerances) -> Result<ClockModel> {
    if spec.kind == ModelKind::TensorDouble {
        return Err(Error::InvalidArgument("clock_model needs kind clock-block or flat-band".into()));
    }
    let g = spec.g;
    let built = build(spec, vec![clock_matrix(g), shift_matrix(g)], tol)?;
    let [u, v]: [DenseMatrix; 2] = built.symmetries.try_into().expect("two symmetries");
    let alpha = 1.0 / g as f64;
    let delta = operator_norm(&twisted_commutator(&u, &v, alpha)?)?;
    Ok(ClockModel { spec: spec.clone(), band: built.band, u, v, alpha, delta, measured: built.measured })
}

/// Pairs `(C⊗I, S⊗I)` and `(I⊗C, I⊗S)` on `ℂ^g ⊗ ℂ^{g₂}`, symmetries listed
/// as `u₁, u₂, v₁, v₂`.
pub fn tensor_double_model(spec: &ModelSpec, tol: &Tolerances) -> Result<DoubleModel> {
    if spec.kind != ModelKind::TensorDouble {
        return Err(Error::InvalidArgument("tensor_double_model needs kind tensor-double".into()));
    }
    spec.validate()?;
    let (g1, g2) = (spec.g, spec.g2.unwrap_or(0));
    let (i1, i2) = (identity(g1), identity(g2));
    let ops = vec![
        kron(&clock_matrix(g1), &i2),
        kron(&i1, &clock_matrix(g2)),
        kron(&shift_matrix(g1), &i2),
        kron(&i1, &shift_matrix(g2)),
    ];
    let built = build(spec, ops, tol)?;
    let [u1, u2, v1, v2]: [DenseMatrix; 4] = built.symmetries.try_into().expect("four symmetries");
    let gamma = operator_norm(&commutator(&u1, &u2)?)?;
    let deltas = [
        operator_norm(&twisted_commutator(&u1, &v1, 1.0 / g1 as f64)?)?,
        operator_norm(&twisted_commutator(&u2, &v2, 1.0 / g2 as f64)?)?,
        operator_norm(&commutator(&u1, &v2)?)?,
        operator_norm(&commutator(&u2, &v1)?)?,
    ];
    let delta = deltas.iter().copied().fold(0.0, f64::max);
    Ok(DoubleModel { spec: spec.clone(), band: built.band, u1, u2, v1, v2, gamma, deltas, delta, measured: built.measured })
}
