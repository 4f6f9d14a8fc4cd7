//! Counter-based random streams.
//!
//! Every trial gets its own ChaCha stream keyed by the master seed, a purpose
//! tag and the trial index, so results do not depend on how trials are
//! scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    /// Messages, dithers, source codebooks and first-phase noise.
    Mac = 1,
    /// Broadcast-phase noise.
    Broadcast = 2,
    /// Relay (broadcast) codebook entries, one stream per codeword.
    RelayCodebook = 3,
    Measurement = 4,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream for one trial.
pub fn trial_rng(seed: u64, purpose: Purpose, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(purpose as u64)));
    rng.set_stream(trial);
    rng
}

/// Stream for one codeword of a per-trial codebook.
pub fn codeword_rng(seed: u64, purpose: Purpose, trial: u64, index: u64) -> ChaCha8Rng {
    let key = splitmix64(splitmix64(seed ^ splitmix64(purpose as u64)) ^ splitmix64(trial.wrapping_add(0x5851_F42D_4C95_7F2D)));
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(index);
    rng
}
