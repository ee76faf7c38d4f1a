//! Shared input builders for the criterion benchmarks.

use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use svcert_core::{ExactMatrix, Format};

pub fn random_int_matrix(seed: u64, nrows: usize, ncols: usize, bound: i64) -> ExactMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ExactMatrix::from_int_rows(
        (0..nrows)
            .map(|_| {
                (0..ncols)
                    .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
                    .collect()
            })
            .collect(),
    )
    .expect("rectangular matrix")
}

pub fn sextic_veronese_surface() -> Format {
    Format::new(vec![2], vec![6]).expect("valid format")
}

pub fn two_cubes() -> Format {
    Format::new(vec![2, 2], vec![3, 3]).expect("valid format")
}

pub fn line_times_plane() -> Format {
    Format::new(vec![1, 2], vec![2, 1]).expect("valid format")
}
