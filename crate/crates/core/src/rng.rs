//! Seeded, schedule-independent random streams.
//!
//! Every Monte Carlo trial or run draws from its own ChaCha8 stream selected
//! by `(seed, index)`, so batch results do not depend on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Environment variable consulted for a default seed when `--seed` is absent.
pub const SEED_ENV: &str = "QFA_SEED";

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
