use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// How a sync delivers its batch of operations.
///
/// Randomness comes from ChaCha8 seeded with `seed`, so equal schedules give
/// bit-identical runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeliverySchedule {
    pub seed: u64,
    /// Probability in `[0, 1]` that a message is delivered a second time.
    pub duplication_rate: f64,
    /// A message may move up to this many positions later in the batch.
    pub reorder_window: usize,
}

impl Default for DeliverySchedule {
    fn default() -> Self {
        DeliverySchedule {
            seed: 0,
            duplication_rate: 0.0,
            reorder_window: 0,
        }
    }
}

impl DeliverySchedule {
    pub fn in_order(seed: u64) -> Self {
        DeliverySchedule {
            seed,
            ..Default::default()
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Applies duplication then windowed reordering to a batch.
    pub fn shuffle<T: Clone>(&self, batch: Vec<T>, rng: &mut impl Rng) -> Vec<T> {
        let mut out = Vec::with_capacity(batch.len());
        for msg in batch {
            let dup = self.duplication_rate > 0.0 && rng.gen_bool(self.duplication_rate.min(1.0));
            if dup {
                out.push(msg.clone());
            }
            out.push(msg);
        }
        if self.reorder_window > 0 && out.len() > 1 {
            for i in 0..out.len() {
                let last = (i + self.reorder_window).min(out.len() - 1);
                let j = rng.gen_range(i..=last);
                out.swap(i, j);
            }
        }
        out
    }
}
