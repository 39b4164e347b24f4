//! Deterministic per-task random streams.
//!
//! Every stochastic quantity is drawn from a stream addressed by the master
//! seed and a path such as `[circuit, role, shot]`, so results do not depend
//! on how work is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(master), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

pub fn stream(master: u64, path: &[u64]) -> StreamRng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, path))
}

/// Seed source handed to circuit factories: a fixed prefix plus a role id.
#[derive(Clone, Debug)]
pub struct SeedStream {
    master: u64,
    prefix: Vec<u64>,
}

impl SeedStream {
    pub fn new(master: u64, prefix: &[u64]) -> Self {
        SeedStream {
            master,
            prefix: prefix.to_vec(),
        }
    }

    pub fn seed(&self, role: &[u64]) -> u64 {
        let mut path = self.prefix.clone();
        path.extend_from_slice(role);
        derive_seed(self.master, &path)
    }

    pub fn rng(&self, role: &[u64]) -> StreamRng {
        ChaCha8Rng::seed_from_u64(self.seed(role))
    }
}
