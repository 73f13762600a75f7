//! Seeded random streams.
//!
//! All randomness comes from ChaCha8 keyed by the user seed. Subsystems draw
//! from separate ChaCha streams selected by a stable label and an index
//! (trial number, sweep cell, ...), so runs are reproducible on any platform
//! and independent of thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// 64-bit FNV-1a.
fn label_hash(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Stream `(label, index)` of the generator keyed by `seed`.
pub fn stream(seed: u64, label: &str, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(label_hash(label).wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15)));
    rng
}
