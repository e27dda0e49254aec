//! Splittable, counter-keyed random streams.
//!
//! A [`StreamKey`] is a 64-bit key derived from a root seed and a path of
//! labels. Each key opens an independent [`Substream`]. Two algorithms that
//! derive the same path see the same draws, which is how the noisy MWU and
//! the LEDP core are made to share per-(round, node) noise.

use rand::SeedableRng;
use serde::{Deserialize, Serialize};

/// Per-key generator.
pub type Substream = rand_xoshiro::Xoshiro256PlusPlus;

/// Key of one random substream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamKey(u64);

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl StreamKey {
    pub fn root(seed: u64) -> Self {
        StreamKey(mix64(seed ^ 0x6a09_e667_f3bc_c909))
    }

    /// Child key for a numeric label.
    pub fn derive(self, label: u64) -> Self {
        StreamKey(mix64(
            self.0.rotate_left(17) ^ mix64(label.wrapping_add(0x9e37_79b9_7f4a_7c15)),
        ))
    }

    /// Child key for a string label.
    pub fn derive_str(self, label: &str) -> Self {
        // FNV-1a over the bytes, then the numeric derivation.
        let h = label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
        });
        self.derive(h)
    }

    pub fn raw(self) -> u64 {
        self.0
    }

    pub fn stream(self) -> Substream {
        Substream::seed_from_u64(self.0)
    }
}
