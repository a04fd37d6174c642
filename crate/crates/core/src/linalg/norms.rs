use serde::{Deserialize, Serialize};

use super::DenseMatrix;
use crate::error::{Error, Result};

/// Selects the `(p, k)` Schatten–Ky Fan norm: the `p`-norm of the `k` largest
/// singular values. `p = ∞` is the operator norm, `(2, n)` the Frobenius norm
/// of an `n`-dimensional operator and `(1, k)` the Ky Fan `k`-norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    #[serde(with = "extended_real")]
    pub p: f64,
    pub k: usize,
}

impl NormSpec {
    pub fn new(p: f64, k: usize) -> Result<Self> {
        let spec = Self { p, k };
        if !(p >= 1.0) || k == 0 {
            return Err(Error::InvalidNorm { p, k, dim: 0 });
        }
        Ok(spec)
    }

    pub const fn operator() -> Self {
        Self { p: f64::INFINITY, k: 1 }
    }

    pub const fn frobenius(dim: usize) -> Self {
        Self { p: 2.0, k: dim }
    }

    pub fn is_operator(&self) -> bool {
        self.p.is_infinite()
    }

    /// `k^{1/p}`, which is 1 for `p = ∞`.
    pub fn k_root(&self) -> f64 {
        if self.p.is_infinite() {
            1.0
        } else {
            (self.k as f64).powf(1.0 / self.p)
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if !(self.p >= 1.0) || self.k == 0 || self.k > dim {
            return Err(Error::InvalidNorm {
                p: self.p,
                k: self.k,
                dim,
            });
        }
        Ok(())
    }

    /// The same norm on a `dim`-dimensional space. An operator and its zero
    /// padding share nonzero singular values, so capping `k` at `dim` leaves
    /// the value unchanged.
    pub fn clamped(&self, dim: usize) -> Self {
        Self {
            p: self.p,
            k: self.k.min(dim.max(1)),
        }
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &DenseMatrix) -> Result<Vec<f64>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let mut sv: Vec<f64> = m
        .clone()
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or(Error::Convergence("singular value decomposition"))?
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// `(Σ_{j≤k} σ_j^p)^{1/p}`; `σ_1` when `p = ∞`.
pub fn schatten_kyfan_norm(m: &DenseMatrix, spec: NormSpec) -> Result<f64> {
    spec.validate(m.nrows().min(m.ncols()))?;
    let sv = singular_values(m)?;
    Ok(norm_of_singular_values(&sv, spec))
}

pub(crate) fn norm_of_singular_values(sv: &[f64], spec: NormSpec) -> f64 {
    let top = &sv[..spec.k.min(sv.len())];
    if spec.p.is_infinite() {
        return top.first().copied().unwrap_or(0.0);
    }
    let scale = top.first().copied().unwrap_or(0.0);
    if scale == 0.0 {
        return 0.0;
    }
    // scaled to avoid overflow for large p
    let sum: f64 = top.iter().map(|s| (s / scale).powf(spec.p)).sum();
    scale * sum.powf(1.0 / spec.p)
}

pub fn operator_norm(m: &DenseMatrix) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

pub fn frobenius_norm(m: &DenseMatrix) -> f64 {
    m.norm()
}

mod extended_real {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_infinite() && *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*x)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Str(s) if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") => Ok(f64::INFINITY),
            Repr::Str(s) => s.parse().map_err(|_| de::Error::custom(format!("bad extended real '{s}'"))),
        }
    }
}
