use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random stream for task `index` under a master seed. Streams are
/// independent of each other and of thread scheduling.
pub fn task_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
