//! Seeded random instances.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub agents: RangeInclusive<usize>,
    pub chores: RangeInclusive<usize>,
    /// Costs are drawn from `0..=value_max`.
    pub value_max: u64,
    /// Emit only identically ordered instances.
    pub ido_only: bool,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 0,
            agents: 2..=5,
            chores: 2..=14,
            value_max: 50,
            ido_only: false,
        }
    }
}

impl GeneratorConfig {
    fn validate(&self) -> Result<()> {
        if self.agents.is_empty() || *self.agents.start() == 0 {
            return Err(Error::InvalidInstance(format!(
                "agent range {:?} must be non-empty and start at 1 or more",
                self.agents
            )));
        }
        if self.chores.is_empty() {
            return Err(Error::InvalidInstance(format!(
                "chore range {:?} is empty",
                self.chores
            )));
        }
        if self.value_max == 0
            || self.value_max > (i64::MAX as u64) / (*self.chores.end() as u64).max(1)
        {
            return Err(Error::InvalidInstance(format!(
                "value_max {} must be positive and keep row totals in range",
                self.value_max
            )));
        }
        Ok(())
    }
}

/// Infinite, reproducible stream of instances.
pub struct InstanceStream {
    config: GeneratorConfig,
    rng: ChaCha8Rng,
}

impl Iterator for InstanceStream {
    type Item = Instance;

    fn next(&mut self) -> Option<Instance> {
        let cfg = &self.config;
        let rng = &mut self.rng;
        let n = rng.gen_range(cfg.agents.clone());
        let m = rng.gen_range(cfg.chores.clone());
        let rows = if cfg.ido_only {
            // shared nonincreasing base, each agent nudges it and keeps the order
            let mut base: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=cfg.value_max)).collect();
            base.sort_unstable_by(|a, b| b.cmp(a));
            let spread = (cfg.value_max / 4).max(1) as i64;
            (0..n)
                .map(|_| {
                    let mut ceiling = cfg.value_max;
                    base.iter()
                        .map(|&b| {
                            let nudged = (b as i64 + rng.gen_range(-spread..=spread))
                                .clamp(0, cfg.value_max as i64)
                                as u64;
                            ceiling = ceiling.min(nudged);
                            ceiling
                        })
                        .collect()
                })
                .collect()
        } else {
            (0..n)
                .map(|_| (0..m).map(|_| rng.gen_range(0..=cfg.value_max)).collect())
                .collect()
        };
        Some(Instance::with_dims(n, m, rows).expect("generated dimensions are consistent"))
    }
}

pub fn generate(config: GeneratorConfig) -> Result<InstanceStream> {
    config.validate()?;
    let rng = ChaCha8Rng::seed_from_u64(config.seed);
    Ok(InstanceStream { config, rng })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::is_ido;

    #[test]
    fn reproducible() {
        let cfg = GeneratorConfig {
            seed: 42,
            ..Default::default()
        };
        let a: Vec<Instance> = generate(cfg.clone()).unwrap().take(20).collect();
        let b: Vec<Instance> = generate(cfg).unwrap().take(20).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn respects_ranges() {
        let cfg = GeneratorConfig {
            seed: 7,
            agents: 3..=4,
            chores: 5..=6,
            value_max: 9,
            ido_only: false,
        };
        for inst in generate(cfg).unwrap().take(50) {
            assert!((3..=4).contains(&inst.num_agents()));
            assert!((5..=6).contains(&inst.num_chores()));
            assert!(inst.rows().iter().flatten().all(|&v| v <= 9));
        }
    }

    #[test]
    fn ido_streams_are_ido() {
        let cfg = GeneratorConfig {
            seed: 3,
            ido_only: true,
            ..Default::default()
        };
        assert!(generate(cfg).unwrap().take(200).all(|i| is_ido(&i)));
    }

    #[test]
    fn binary_values() {
        let cfg = GeneratorConfig {
            seed: 11,
            value_max: 1,
            ..Default::default()
        };
        for inst in generate(cfg).unwrap().take(50) {
            assert!(inst.rows().iter().flatten().all(|&v| v <= 1));
        }
    }

    #[test]
    fn rejects_bad_configs() {
        let empty_agents = GeneratorConfig {
            agents: 0..=0,
            ..Default::default()
        };
        assert!(generate(empty_agents).is_err());
        #[allow(clippy::reversed_empty_ranges)]
        let empty_chores = GeneratorConfig {
            chores: 5..=2,
            ..Default::default()
        };
        assert!(generate(empty_chores).is_err());
        let zero_max = GeneratorConfig {
            value_max: 0,
            ..Default::default()
        };
        assert!(generate(zero_max).is_err());
    }
}
