//! Sharded, seeded Monte Carlo runs.
//!
//! Trials are split over a fixed number of shards, each with its own
//! ChaCha8 stream derived from the seed. Results are returned in shard order,
//! so a run is reproducible for a given `(seed, shards)` regardless of how
//! many threads execute it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const DEFAULT_SHARDS: usize = 16;

pub fn shard_rng(seed: u64, shard: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard as u64);
    rng
}

/// Trials per shard; the first `trials % shards` shards get one extra.
pub fn shard_sizes(trials: u64, shards: usize) -> Vec<u64> {
    let shards = shards.max(1) as u64;
    (0..shards)
        .map(|s| trials / shards + u64::from(s < trials % shards))
        .collect()
}

pub fn run_sharded<T, F>(seed: u64, trials: u64, shards: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
{
    shard_sizes(trials, shards)
        .into_par_iter()
        .enumerate()
        .map(|(s, count)| f(&mut shard_rng(seed, s), count))
        .collect()
}

/// Number of trials for which `event` returns true.
pub fn count_events<F>(seed: u64, trials: u64, shards: usize, event: F) -> u64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    run_sharded(seed, trials, shards, |rng, count| {
        (0..count).filter(|_| event(rng)).count() as u64
    })
    .into_iter()
    .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn sizes_sum() {
        assert_eq!(shard_sizes(10, 4), vec![3, 3, 2, 2]);
        assert_eq!(shard_sizes(3, 16).iter().sum::<u64>(), 3);
    }

    #[test]
    fn streams_differ_and_repeat() {
        let a: u64 = shard_rng(7, 0).random();
        let b: u64 = shard_rng(7, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, shard_rng(7, 0).random::<u64>());
    }

    #[test]
    fn thread_count_does_not_matter() {
        let run = || count_events(3, 100_000, DEFAULT_SHARDS, |rng| rng.random::<f64>() < 0.3);
        let wide = run();
        let narrow = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
        assert_eq!(wide, narrow);
    }
}
