//! Seeded random streams.
//!
//! Each consumer draws from its own ChaCha stream derived from the run seed, so
//! pilots, path phases and noise stay reproducible independently of each other
//! and of evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) const PILOT_STREAM: u64 = 1;
pub(crate) const GAIN_STREAM: u64 = 2;
pub(crate) const NOISE_STREAM: u64 = 3;
pub(crate) const ARTIFICIAL_NOISE_STREAM: u64 = 4;

pub(crate) fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
