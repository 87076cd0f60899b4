//! Reproducible random streams.
//!
//! Every (master seed, trial, agent, subsystem) tuple gets its own
//! independent generator, so results never depend on scheduling order or on
//! how many worker threads run the trials.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Subsystems that draw randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stream {
    /// Initial target state and agent placement.
    Scenario = 1,
    /// Target acceleration noise.
    Target = 2,
    /// Measurement noise, detections and clutter.
    Sensor = 3,
    /// Particle filter prediction and resampling.
    Filter = 4,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a 64-bit stream seed. Agent 0 is used for team-wide streams.
pub fn derive(master: u64, trial: u64, agent: u64, stream: Stream) -> u64 {
    [trial, agent, stream as u64]
        .into_iter()
        .fold(splitmix64(master), |acc, part| splitmix64(acc ^ splitmix64(part)))
}

pub fn rng(master: u64, trial: u64, agent: u64, stream: Stream) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(master, trial, agent, stream))
}
