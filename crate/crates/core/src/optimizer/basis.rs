//! Random orthonormal bases, one direction per row.
//!
//! Rows are produced by Gram–Schmidt (with reorthogonalization) on standard
//! Gaussian draws, which gives the Haar distribution on the orthogonal group,
//! and the Haar distribution on the orthogonal complement when a first row is
//! prescribed.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg;

pub fn random_orthonormal_basis<R: Rng + ?Sized>(dimension: usize, rng: &mut R) -> Vec<Vec<f64>> {
    fill_basis(Vec::with_capacity(dimension), dimension, rng)
}

/// Orthonormal basis whose first row is `main_direction` (normalized) and
/// whose remaining rows are a random orthonormal complement.
pub fn complete_basis<R: Rng + ?Sized>(main_direction: &[f64], rng: &mut R) -> Result<Vec<Vec<f64>>> {
    let n = linalg::norm(main_direction);
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let first = if (n - 1.0).abs() <= 1e-12 {
        main_direction.to_vec()
    } else {
        main_direction.iter().map(|v| v / n).collect()
    };
    let d = first.len();
    let mut rows = Vec::with_capacity(d);
    rows.push(first);
    Ok(fill_basis(rows, d, rng))
}

fn fill_basis<R: Rng + ?Sized>(mut rows: Vec<Vec<f64>>, d: usize, rng: &mut R) -> Vec<Vec<f64>> {
    while rows.len() < d {
        let draw = linalg::gaussian_vector(d, rng);
        if let Some(q) = linalg::orthonormalize_against(draw, &rows) {
            rows.push(q);
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn one_dimensional_basis_is_a_sign() {
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = random_orthonormal_basis(1, &mut rng);
            assert!(b[0][0] == 1.0 || b[0][0] == -1.0, "{b:?}");
        }
    }

    #[test]
    fn five_dimensional_basis_is_orthonormal() {
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = random_orthonormal_basis(5, &mut rng);
            assert!(linalg::gram_deviation(&b) < 1e-10);
        }
    }

    #[test]
    fn seeded_basis_is_reproducible() {
        let a = random_orthonormal_basis(3, &mut ChaCha8Rng::seed_from_u64(42));
        let b = random_orthonormal_basis(3, &mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
    }

    #[test]
    fn completion_of_e1_in_two_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = complete_basis(&[1.0, 0.0], &mut rng).unwrap();
        assert_eq!(b[0], vec![1.0, 0.0]);
        assert!(b[1][0].abs() < 1e-15);
        assert!((b[1][1].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn completion_keeps_first_row() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 1..8 {
            let mut e1 = vec![0.0; d];
            e1[0] = 1.0;
            let b = complete_basis(&e1, &mut rng).unwrap();
            assert_eq!(b[0], e1);
            assert!(linalg::gram_deviation(&b) < 1e-10);
        }
    }

    #[test]
    fn completion_rejects_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(complete_basis(&[0.0, 0.0], &mut rng), Err(Error::ZeroNorm)));
    }
}
