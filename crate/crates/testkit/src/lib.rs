//! Reference computations and random instances for the test suites.
//!
//! Everything in [`oracle`] is written from the defining formulas, without
//! calling the algorithms it is used to check.

pub mod fixtures;
pub mod gen;
pub mod oracle;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
