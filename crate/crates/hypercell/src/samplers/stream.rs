//! Counter-based random substreams.
//!
//! Every (seed, stream, slot) triple owns an independent ChaCha substream, so
//! samples are reproducible bit-for-bit regardless of how slots are assigned
//! to workers.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Slots per stream chunk; streams are the unit of parallel work.
pub const SLOTS_PER_STREAM: u64 = 4096;
const SLOT_BITS: u32 = 20;

/// A substream descriptor. Identical `(seed, stream_id)` values reproduce
/// identical draws on every run and under every worker count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Descriptor for one slot of one stream chunk.
    pub fn slot(seed: u64, stream: u64, slot: u64) -> Self {
        debug_assert!(slot < (1 << SLOT_BITS));
        Self { seed, stream_id: (stream << SLOT_BITS) | slot }
    }

    /// Instantiates the generator for this substream.
    pub fn rng(&self) -> ChaCha12Rng {
        let mut key = [0u8; 32];
        let mut state = self.seed;
        for chunk in key.chunks_exact_mut(8) {
            state = splitmix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        let mut rng = ChaCha12Rng::from_seed(key);
        rng.set_stream(self.stream_id);
        rng
    }
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
