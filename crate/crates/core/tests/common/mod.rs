//! Test-only oracles and corpora, independent of the library's search code.

#![allow(dead_code)]

use mms_chores::cli::generate::{generate, GeneratorConfig};
use mms_chores::{Allocation, Instance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Minimum over all `bins^m` assignments of the largest bin load.
pub fn brute_force_makespan(values: &[u64], bins: usize) -> u64 {
    let m = values.len();
    if m == 0 {
        return 0;
    }
    let mut digits = vec![0usize; m];
    let mut loads = vec![0u64; bins];
    loads[0] = values.iter().sum();
    let mut best = loads[0];
    // odometer over assignments, updating loads incrementally
    loop {
        let mut pos = 0;
        loop {
            if pos == m {
                return best;
            }
            loads[digits[pos]] -= values[pos];
            digits[pos] += 1;
            if digits[pos] == bins {
                digits[pos] = 0;
                loads[0] += values[pos];
                pos += 1;
            } else {
                loads[digits[pos]] += values[pos];
                break;
            }
        }
        let span = *loads.iter().max().unwrap();
        best = best.min(span);
    }
}

/// `max(ceil(total/n), max value)`, computed directly.
pub fn pigeonhole_bound(values: &[u64], bins: usize) -> u64 {
    let total: u64 = values.iter().sum();
    let ceil = total.div_ceil(bins as u64);
    ceil.max(values.iter().copied().max().unwrap_or(0))
}

/// Random instances with `n ∈ [2,5]`, `m ∈ [n,14]`, costs in `[0,50]`.
pub fn corpus(seed: u64, count: usize) -> Vec<Instance> {
    let config = GeneratorConfig {
        seed,
        agents: 2..=5,
        chores: 2..=14,
        value_max: 50,
        ido_only: false,
    };
    generate(config)
        .unwrap()
        .filter(|i| i.num_chores() >= i.num_agents())
        .take(count)
        .collect()
}

/// Uniformly random complete allocation.
pub fn random_allocation(rng: &mut ChaCha8Rng, agents: usize, chores: usize) -> Allocation {
    let mut bundles = vec![Vec::new(); agents];
    for c in 0..chores {
        bundles[rng.gen_range(0..agents)].push(c);
    }
    Allocation {
        bundles,
        leftover: Vec::new(),
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Max bundle load of a partition evaluated under one agent's costs.
pub fn max_load_under(inst: &Instance, agent: usize, alloc: &Allocation) -> u64 {
    alloc
        .bundles
        .iter()
        .map(|b| inst.bundle_value(agent, b))
        .max()
        .unwrap_or(0)
}
