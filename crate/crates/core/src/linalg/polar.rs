use super::{c64, ensure_finite, ensure_square, DenseMatrix};
use crate::error::{Error, Result};

/// `M = W |M|` with `W` unitary and `|M| = (M†M)^{1/2}`.
#[derive(Debug, Clone)]
pub struct Polar {
    pub unitary: DenseMatrix,
    pub positive: DenseMatrix,
    /// Singular values of `M`, descending.
    pub singular_values: Vec<f64>,
}

/// Polar decomposition from the SVD `M = L Σ R†`: `W = L R†`, `|M| = R Σ R†`.
///
/// On a singular `M` the unitary factor is completed on the null space by the
/// singular vectors the SVD returns, which is deterministic for a given input.
pub fn polar(m: &DenseMatrix) -> Result<Polar> {
    let n = ensure_square(m)?;
    ensure_finite(m)?;
    if n == 0 {
        return Ok(Polar {
            unitary: m.clone(),
            positive: m.clone(),
            singular_values: Vec::new(),
        });
    }
    let svd = m
        .clone()
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or(Error::Convergence("singular value decomposition"))?;
    let left = svd.u.expect("requested left singular vectors");
    let right_adj = svd.v_t.expect("requested right singular vectors");
    let unitary = &left * &right_adj;
    let sigma = DenseMatrix::from_diagonal(&svd.singular_values.map(|s| c64::new(s, 0.0)));
    let positive = right_adj.adjoint() * sigma * &right_adj;
    let mut singular_values: Vec<f64> = svd.singular_values.iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    Ok(Polar {
        unitary,
        positive,
        singular_values,
    })
}

/// Unitary polar factor of `M`.
pub fn polar_unitary(m: &DenseMatrix) -> Result<DenseMatrix> {
    Ok(polar(m)?.unitary)
}
