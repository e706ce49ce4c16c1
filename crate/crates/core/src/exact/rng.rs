//! Seeded randomness.
//!
//! The generator is ChaCha8 keyed by `seed_from_u64(seed)`; the stream
//! depends only on the seed, never on the platform. Every random choice in
//! the crate is drawn from a [`SeededRng`] handed in by the caller.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Fe, Field};

#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> SeededRng {
        SeededRng { seed, inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, n)`.
    pub fn below(&mut self, n: u64) -> u64 {
        self.inner.gen_range(0..n)
    }

    pub fn element(&mut self, field: &Field) -> Fe {
        Fe(self.below(field.modulus()))
    }

    pub fn nonzero(&mut self, field: &Field) -> Fe {
        Fe(1 + self.below(field.modulus() - 1))
    }

    /// An independent child stream labelled by `tag`.
    pub fn fork(&mut self, tag: u64) -> SeededRng {
        let s = self.next_u64();
        SeededRng::new(derive_seed(s, &[tag]))
    }
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from a base seed and a list of tags.
pub fn derive_seed(base: u64, tags: &[u64]) -> u64 {
    let mut h = mix(base.wrapping_add(0x9e37_79b9_7f4a_7c15));
    for &t in tags {
        h = mix(h ^ mix(t.wrapping_add(0x9e37_79b9_7f4a_7c15)));
    }
    h
}

/// FNV-1a, used to turn string labels into seed tags.
pub fn label_tag(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}
