//! Seeded generators. Every randomized routine derives its own stream from
//! `(seed, stream index)` so results do not depend on evaluation order.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;

pub type SeededRng = ChaCha8Rng;

pub fn stream_rng(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform rational `k / den` with `k` in `[-den, den]`.
pub fn random_unit_interval<T: Scalar>(rng: &mut impl Rng, den: i64) -> T {
    T::from_ratio(rng.random_range(-den..=den), den)
}

pub fn random_int<T: Scalar>(rng: &mut impl Rng, bound: i64) -> T {
    T::from_i64(rng.random_range(-bound..=bound))
}

/// Random small-height coordinates in `[-1, 1]`.
pub fn random_coords<T: Scalar>(rng: &mut impl Rng, dim: usize) -> Vec<T> {
    (0..dim).map(|_| random_unit_interval(rng, 6)).collect()
}

pub fn random_complex_coords<T: Scalar>(rng: &mut impl Rng, dim: usize) -> Vec<Complex<T>> {
    (0..dim)
        .map(|_| Complex::new(random_unit_interval(rng, 6), random_unit_interval(rng, 6)))
        .collect()
}

/// Derives an independent seed for item `(a, b)` of a run seeded with `seed`.
pub fn mix_seed(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
