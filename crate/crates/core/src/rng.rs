//! Seedable uniform source with independently derivable substreams.
//!
//! The generator is xoshiro256** (Blackman & Vigna). A stream is keyed by a
//! `(seed, stream_id)` pair; its 256-bit state is
//!
//! ```text
//! state[i] = splitmix64(seed)[i] ^ splitmix64(stream_id ^ STREAM_KEY)[i],   i = 0..4
//! ```
//!
//! where `splitmix64(x)[i]` is the `i`-th output (0-based) of a SplitMix64
//! generator whose counter starts at `x`. The words are loaded little-endian
//! into the xoshiro state in order. An all-zero state (never observed in
//! practice) is replaced by `[1, 0, 0, 0]`.
//!
//! Raw 64-bit outputs map to the open unit interval by
//! `((word >> 12) + 0.5) * 2^-52`, so neither 0 nor 1 is ever produced.
//! (With 53 bits the top value `1 - 2^-54` would round to exactly 1.)

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

/// Key XORed into the stream id before it drives its SplitMix64 sequence.
pub const STREAM_KEY: u64 = 0x6A09_E667_F3BC_C909;

const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One step of SplitMix64: advances `counter` and returns the mixed output.
pub fn splitmix64(counter: &mut u64) -> u64 {
    *counter = counter.wrapping_add(SPLITMIX_GAMMA);
    let mut z = *counter;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Maps a raw 64-bit word onto (0, 1), excluding both endpoints.
#[inline]
pub fn word_to_open01(word: u64) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 52) as f64;
    ((word >> 12) as f64 + 0.5) * SCALE
}

/// Deterministic stream of uniforms on (0, 1).
///
/// Not `Sync`-shared by design of its API: advancing takes `&mut self`.
/// Parallel workers should each own a distinct substream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: Xoshiro256StarStar,
}

impl RngStream {
    /// Derives the stream `(seed, stream_id)`. Pure: equal inputs give equal streams.
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut a = seed;
        let mut b = stream_id ^ STREAM_KEY;
        let mut words = [0u64; 4];
        for w in &mut words {
            *w = splitmix64(&mut a) ^ splitmix64(&mut b);
        }
        if words.iter().all(|&w| w == 0) {
            words[0] = 1;
        }
        Self::from_state(seed, stream_id, words)
    }

    fn from_state(seed: u64, stream_id: u64, words: [u64; 4]) -> Self {
        let mut bytes = [0u8; 32];
        for (chunk, w) in bytes.chunks_exact_mut(8).zip(words) {
            chunk.copy_from_slice(&w.to_le_bytes());
        }
        Self {
            seed,
            stream_id,
            inner: Xoshiro256StarStar::from_seed(bytes),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Next raw 64-bit output of the generator.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Next uniform in the open interval (0, 1). Advances the state by one draw.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        word_to_open01(self.next_u64())
    }

    /// Advances the state by 2^128 draws (xoshiro256** jump polynomial).
    pub fn jump(&mut self) {
        self.inner.jump();
    }
}

/// Alias of [`RngStream::new`].
pub fn substream(seed: u64, stream_id: u64) -> RngStream {
    RngStream::new(seed, stream_id)
}
