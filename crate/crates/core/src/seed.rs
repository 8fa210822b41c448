//! Deterministic random streams derived from one master seed.
//!
//! Each consumer asks for a stream by subsystem and an optional key (for example the
//! sentence a noisy generator is answering). The stream seed is a SHA-256 digest of
//! `(master seed, subsystem, key)`, so streams do not depend on evaluation order or
//! thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Split,
    Subsample,
    NoisyGenerator,
    Synthetic,
}

impl Subsystem {
    fn tag(self) -> &'static [u8] {
        match self {
            Self::Split => b"split",
            Self::Subsample => b"subsample",
            Self::NoisyGenerator => b"noisy-generator",
            Self::Synthetic => b"synthetic",
        }
    }
}

pub fn stream(seed: u64, subsystem: Subsystem, key: &[u8]) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    let tag = subsystem.tag();
    hasher.update((tag.len() as u64).to_le_bytes());
    hasher.update(tag);
    hasher.update(key);
    let digest: [u8; 32] = hasher.finalize().into();
    ChaCha8Rng::from_seed(digest)
}
