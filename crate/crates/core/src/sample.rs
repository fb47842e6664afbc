//! Seeded sampling. All randomness goes through ChaCha8 seeded from a `u64`,
//! so every report is reproducible across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::Scalar;

pub type SampleRng = ChaCha8Rng;

/// Default coefficient height: integers in `[-5, 5]`.
pub const COEFF_BOUND: i64 = 5;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive an independent stream for sub-task `index`.
pub fn substream(seed: u64, index: u64) -> SampleRng {
    let mut r = rng(seed);
    r.set_stream(index + 1);
    r
}

pub fn int(rng: &mut SampleRng, bound: i64) -> i64 {
    rng.gen_range(-bound..=bound)
}

pub fn scalar<F: Scalar>(rng: &mut SampleRng, bound: i64) -> F {
    F::from_i64(int(rng, bound))
}

pub fn nonzero_scalar<F: Scalar>(rng: &mut SampleRng, bound: i64) -> F {
    loop {
        let v = scalar::<F>(rng, bound);
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn coin(rng: &mut SampleRng, p: f64) -> bool {
    rng.gen_bool(p)
}

pub fn index(rng: &mut SampleRng, n: usize) -> usize {
    rng.gen_range(0..n)
}
