//! Fixtures shared by the benchmarks.

use hermform_core::{Matrix, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A `rows x cols` matrix with roughly `density` of its entries nonzero small Gaussian integers.
///
/// Rank deficiency is built in by making every third row a combination of two earlier ones,
/// so elimination does real cancellation work.
pub fn random_sparse(rows: usize, cols: usize, density: f64, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dense: Vec<Vec<Scalar>> = Vec::with_capacity(rows);
    for r in 0..rows {
        let row = if r >= 2 && r % 3 == 2 {
            let (a, b) = (rng.gen_range(0..r), rng.gen_range(0..r));
            let (x, y) = (small(&mut rng), small(&mut rng));
            dense[a]
                .iter()
                .zip(&dense[b])
                .map(|(u, v)| &(u * &x) + &(v * &y))
                .collect()
        } else {
            (0..cols)
                .map(|_| {
                    if rng.gen_bool(density) {
                        small(&mut rng)
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        };
        dense.push(row);
    }
    Matrix::from_dense(rows, cols, dense).expect("rows have the declared width")
}

fn small(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = Scalar::gaussian(rng.gen_range(-4..=4), rng.gen_range(-4..=4));
        if !s.is_zero() {
            return s;
        }
    }
}

/// Catalog ids used by the model benchmarks, from smallest to largest.
pub const MODELS: [&str; 4] = ["iwasawa", "nakamura:IV.6", "nakamura:V.10", "ce:u=2,v=2"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_is_deterministic_and_deficient() {
        let a = random_sparse(30, 24, 0.2, 5);
        assert_eq!(a.to_dense(), random_sparse(30, 24, 0.2, 5).to_dense());
        assert!(a.rank() <= 20);
    }
}
