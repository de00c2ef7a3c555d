//! Generators and reference interpreters shared by the test suites.
//!
//! Every generator takes an explicit RNG; [`rng`] builds the seeded one the
//! suites use, so failures replay exactly.

pub mod arith;
pub mod choreographies;
pub mod laws;
pub mod mixed;
pub mod state_programs;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
