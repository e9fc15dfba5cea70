//! Seeded random streams.
//!
//! Every stochastic routine in the crate takes a `&mut SeededRng`. Independent
//! sub-computations (one per triplet, one per sanity run) get their own stream
//! through [`substream`] so results do not depend on scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A generator keyed by `(seed, stream)`; distinct streams never overlap.
pub fn substream(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
