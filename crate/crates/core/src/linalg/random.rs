use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{c64, DenseMatrix};

/// `rows × cols` matrix with i.i.d. standard complex Gaussian entries
/// (real and imaginary parts each of variance 1/2).
pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DenseMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let entries: Vec<c64> = (0..rows * cols)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            c64::new(re * scale, im * scale)
        })
        .collect();
    DenseMatrix::from_row_slice(rows, cols, &entries)
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// fixed so that `R` has a positive diagonal.
pub fn haar_unitary_from<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DenseMatrix {
    let g = complex_gaussian(n, n, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Seeded Haar unitary; identical seeds give bitwise-identical matrices.
pub fn haar_unitary(n: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_unitary_from(n, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_unitary;

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(haar_unitary(4, 7), haar_unitary(4, 7));
        assert_ne!(haar_unitary(4, 7), haar_unitary(4, 8));
    }

    #[test]
    fn unitary_to_tight_tolerance() {
        for n in 1..=32 {
            assert!(is_unitary(&haar_unitary(n, n as u64), 1e-12));
        }
    }

    #[test]
    fn phases_are_spread() {
        // first-column entry phases should not all share a sign
        let mut positive = 0;
        for seed in 0..200 {
            let u = haar_unitary(2, seed);
            if u[(0, 0)].re > 0.0 {
                positive += 1;
            }
        }
        assert!((60..140).contains(&positive), "{positive}");
    }
}
