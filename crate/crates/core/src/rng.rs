// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Seeded randomness shared by every randomized entry point.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The generator used throughout the crate.
pub type LocalRng = ChaCha8Rng;

/// Generator for a master seed.
pub fn seeded(seed: u64) -> LocalRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `task` of the master seed. Used to give every
/// parallel task its own reproducible generator.
pub fn task_rng(seed: u64, task: u64) -> LocalRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

/// A seed for task `task`, drawn from its stream of the master seed.
pub fn task_seed(seed: u64, task: u64) -> u64 {
    task_rng(seed, task).gen()
}

/// `floor(2^64 * num / den)`, saturating at `u64::MAX` once the ratio
/// reaches one.
pub fn coin_threshold(num: u64, den: u64) -> u64 {
    assert!(den > 0, "zero denominator");
    if num >= den {
        return u64::MAX;
    }
    (((num as u128) << 64) / den as u128) as u64
}

/// Bernoulli trial with the exact rational success probability `num/den`.
pub fn coin<R: Rng + ?Sized>(rng: &mut R, num: u64, den: u64) -> bool {
    let threshold = coin_threshold(num, den);
    threshold == u64::MAX || rng.gen::<u64>() < threshold
}
