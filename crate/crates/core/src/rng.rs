//! Seeded random streams.
//!
//! All randomness comes from ChaCha8. A run is keyed by `(seed, stream)`;
//! replicate `i` of a sweep uses stream `i`, so results do not depend on
//! which thread ran which replicate.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
