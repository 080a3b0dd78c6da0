//! Pieces shared by both Metropolis–Hastings samplers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Name of the generator recorded in run reports.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3); stream 0 = proposals, stream 1 = acceptance";

/// `min{1, num / den}` extended to zero operands.
///
/// * `den == 0` gives 1, whatever `num` is.
/// * `num == 0 < den` gives 0.
///
/// Used both as the MH acceptance probability (`num` = proposed mass,
/// `den` = current mass) and as the relative-betweenness term.
pub fn clamped_ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 || num >= den {
        1.0
    } else {
        num / den
    }
}

/// Two independent ChaCha8 streams derived from one seed.
#[derive(Debug, Clone)]
pub(crate) struct ChainRng {
    proposals: ChaCha8Rng,
    coins: ChaCha8Rng,
}

impl ChainRng {
    pub(crate) fn new(seed: u64) -> Self {
        let mut proposals = ChaCha8Rng::seed_from_u64(seed);
        proposals.set_stream(0);
        let mut coins = ChaCha8Rng::seed_from_u64(seed);
        coins.set_stream(1);
        ChainRng { proposals, coins }
    }

    pub(crate) fn propose(&mut self, n: usize) -> usize {
        self.proposals.gen_range(0..n)
    }

    /// Draws one coin per step, so the coin stream stays aligned with the step index.
    pub(crate) fn accept(&mut self, probability: f64) -> bool {
        self.coins.gen::<f64>() < probability
    }
}
