//! Counter-based random streams for reproducible, parallel replications.
//!
//! Each episode is keyed by `(seed, algorithm, replication)`; that key is
//! mixed into a ChaCha8 key, and every round gets its own ChaCha stream. A
//! round's draws therefore depend only on `(seed, algorithm, replication,
//! round)`, never on how many variates earlier rounds consumed or on which
//! worker ran the episode.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identifies the random stream of one episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub seed: u64,
    pub algorithm: u64,
    pub replication: u64,
}

impl StreamKey {
    pub fn new(seed: u64, algorithm: u64, replication: u64) -> Self {
        StreamKey {
            seed,
            algorithm,
            replication,
        }
    }

    fn key_bytes(&self) -> [u8; 32] {
        let mut state = self.seed;
        let mut words = [0u64; 4];
        for (i, w) in words.iter_mut().enumerate() {
            state ^= match i {
                0 => self.algorithm.rotate_left(17),
                1 => self.replication.rotate_left(41),
                _ => i as u64,
            };
            *w = splitmix64(&mut state);
        }
        let mut bytes = [0u8; 32];
        for (chunk, w) in bytes.chunks_exact_mut(8).zip(words) {
            chunk.copy_from_slice(&w.to_le_bytes());
        }
        bytes
    }
}

/// The random source of one episode.
#[derive(Debug, Clone)]
pub struct EpisodeRng {
    rng: ChaCha8Rng,
}

impl EpisodeRng {
    pub fn new(key: StreamKey) -> Self {
        EpisodeRng {
            rng: ChaCha8Rng::from_seed(key.key_bytes()),
        }
    }

    /// Generator positioned at the start of `round`'s stream.
    pub fn round(&mut self, round: u64) -> &mut ChaCha8Rng {
        self.rng.set_stream(round);
        self.rng.set_word_pos(0);
        &mut self.rng
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
