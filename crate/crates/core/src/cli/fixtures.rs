//! Built-in instances with known outcomes, scaled to integer costs.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::greedy::greedy_fill;
use crate::instance::{is_ido, ordered_instance, Instance};
use crate::oracle::{mms_profile, OracleLimits};
use crate::ratio::{Ratio, ThresholdVector};
use crate::solver::{naive_fill, naive_test, naive_threshold, solve_existence_119, solve_poly_54};

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Stated with the published construction of the instance.
    Published,
    /// Worked out by hand or by an independent computation.
    Computed,
    /// Follows directly from the definitions.
    Definition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    /// Exact shares of every agent.
    Mms {
        values: Vec<u64>,
    },
    /// Leftover size of the greedy allocator at integer thresholds.
    GreedyLeftover {
        thresholds: Vec<u64>,
        leftover: usize,
    },
    NaiveTest {
        agent: usize,
        threshold: u64,
        passes: bool,
    },
    /// Leftover when every agent's threshold is their minimal naive-test pass.
    TrialLeftover {
        leftover: usize,
    },
    /// Largest load-to-share ratio of the oracle-backed 11/9 solver.
    Existence119MaxRatio {
        ratio: Ratio,
    },
    Poly54Complete,
    Ido,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub outcome: Outcome,
    pub source: Source,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub instance: Instance,
    /// Integer costs are the published fractional costs times this.
    pub scale: u64,
    pub expected: BTreeMap<&'static str, Expected>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub fixture: &'static str,
    pub check: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Identical valuations with share 17 where the greedy allocator needs threshold 20.
pub const LOWER_BOUND_VALUES: [u64; 14] = [9, 7, 6, 5, 5, 4, 4, 4, 4, 4, 4, 4, 4, 4];

/// Identical valuations with share 150 on which the naive test passes at 150 and fails at 152.
/// Listed bundle by bundle of the optimal partition.
pub const NON_MONOTONE_VALUES: [u64; 17] = [
    102, 24, 24, 55, 55, 20, 20, 55, 55, 20, 20, 50, 20, 20, 20, 20, 20,
];

/// Agents t1..t3 of the trial-failure fixture (the non-monotone valuation
/// times 3), in shared nonincreasing order.
pub const TRIAL_COMMON_ROW: [u64; 17] = [
    306, 165, 165, 165, 165, 150, 72, 72, 60, 60, 60, 60, 60, 60, 60, 60, 60,
];

/// The special agent t4 aligned chore for chore with [`TRIAL_COMMON_ROW`]:
/// its optimal partition is {306,144}, {165,165,120} twice and nine 50s.
pub const TRIAL_SPECIAL_ROW: [u64; 17] = [
    306, 165, 165, 165, 165, 144, 120, 120, 50, 50, 50, 50, 50, 50, 50, 50, 50,
];

fn expect(outcome: Outcome, source: Source) -> Expected {
    Expected { outcome, source }
}

pub fn builtin_fixtures() -> Vec<Fixture> {
    let lower_bound = Fixture {
        name: "lower-bound-20-17",
        description:
            "4 agents, 14 chores, identical costs; greedy needs thresholds of 20/17 of the share",
        instance: Instance::identical(&LOWER_BOUND_VALUES, 4).expect("valid fixture"),
        scale: 17,
        expected: BTreeMap::from([
            (
                "mms",
                expect(
                    Outcome::Mms {
                        values: vec![17; 4],
                    },
                    Source::Published,
                ),
            ),
            (
                "leftover-at-19",
                expect(
                    Outcome::GreedyLeftover {
                        thresholds: vec![19; 4],
                        leftover: 1,
                    },
                    Source::Computed,
                ),
            ),
            (
                "leftover-at-20",
                expect(
                    Outcome::GreedyLeftover {
                        thresholds: vec![20; 4],
                        leftover: 0,
                    },
                    Source::Published,
                ),
            ),
            (
                "existence-ratio",
                expect(
                    Outcome::Existence119MaxRatio {
                        ratio: Ratio::new(20, 17).expect("nonzero"),
                    },
                    Source::Computed,
                ),
            ),
        ]),
    };

    let non_monotone = Fixture {
        name: "non-monotone",
        description:
            "4 agents, 17 chores, identical costs; more room makes the greedy allocator fail",
        instance: Instance::identical(&NON_MONOTONE_VALUES, 4).expect("valid fixture"),
        scale: 20,
        expected: BTreeMap::from([
            (
                "mms",
                expect(
                    Outcome::Mms {
                        values: vec![150; 4],
                    },
                    Source::Published,
                ),
            ),
            (
                "naive-150",
                expect(
                    Outcome::NaiveTest {
                        agent: 0,
                        threshold: 150,
                        passes: true,
                    },
                    Source::Published,
                ),
            ),
            (
                "naive-152",
                expect(
                    Outcome::NaiveTest {
                        agent: 0,
                        threshold: 152,
                        passes: false,
                    },
                    Source::Published,
                ),
            ),
            (
                "leftover-at-152",
                expect(
                    Outcome::GreedyLeftover {
                        thresholds: vec![152; 4],
                        leftover: 2,
                    },
                    Source::Published,
                ),
            ),
        ]),
    };

    let mut rows = vec![TRIAL_COMMON_ROW.to_vec(); 3];
    rows.push(TRIAL_SPECIAL_ROW.to_vec());
    let trial = Fixture {
        name: "trial-fails",
        description:
            "4 agents, 17 chores, identically ordered; per-agent naive thresholds strand 2 chores",
        instance: Instance::new(rows).expect("valid fixture"),
        scale: 60,
        expected: BTreeMap::from([
            ("ido", expect(Outcome::Ido, Source::Definition)),
            (
                "mms",
                expect(
                    Outcome::Mms {
                        values: vec![450; 4],
                    },
                    Source::Computed,
                ),
            ),
            (
                "trial-leftover",
                expect(Outcome::TrialLeftover { leftover: 2 }, Source::Published),
            ),
            (
                "poly-54-complete",
                expect(Outcome::Poly54Complete, Source::Published),
            ),
        ]),
    };
    debug_assert!(is_ido(&trial.instance));

    vec![lower_bound, non_monotone, trial]
}

pub fn fixture_by_name(name: &str) -> Option<Fixture> {
    builtin_fixtures().into_iter().find(|f| f.name == name)
}

/// Greedy leftover when every agent uses their own minimal naive-test threshold.
pub fn trial_leftover(inst: &Instance) -> Result<(Vec<u64>, usize)> {
    let thresholds = (0..inst.num_agents())
        .map(|agent| naive_threshold(inst, agent))
        .collect::<Result<Vec<_>>>()?;
    let ord = ordered_instance(inst);
    let out = greedy_fill(
        &ord.instance,
        &ThresholdVector::from_integers(thresholds.iter().copied()),
    )?;
    Ok((thresholds, out.allocation.leftover.len()))
}

impl Fixture {
    /// Evaluates every expected outcome.
    pub fn check(&self, limits: &OracleLimits) -> Result<Vec<CheckResult>> {
        let mut results = Vec::new();
        for (&name, expected) in &self.expected {
            let (passed, detail) = match &expected.outcome {
                Outcome::Mms { values } => {
                    let got = mms_profile(&self.instance, limits)?.values;
                    (&got == values, format!("mms {got:?}"))
                }
                Outcome::GreedyLeftover {
                    thresholds,
                    leftover,
                } => {
                    let ord = ordered_instance(&self.instance);
                    let out = greedy_fill(
                        &ord.instance,
                        &ThresholdVector::from_integers(thresholds.iter().copied()),
                    )?;
                    let got = out.allocation.leftover.len();
                    (got == *leftover, format!("leftover {got}"))
                }
                Outcome::NaiveTest {
                    agent,
                    threshold,
                    passes,
                } => {
                    let got = naive_test(&self.instance, *agent, *threshold)?;
                    let left = naive_fill(&self.instance, *agent, *threshold)?
                        .allocation
                        .leftover
                        .len();
                    (got == *passes, format!("passes {got}, leftover {left}"))
                }
                Outcome::TrialLeftover { leftover } => {
                    let (thresholds, got) = trial_leftover(&self.instance)?;
                    (
                        got == *leftover,
                        format!("thresholds {thresholds:?}, leftover {got}"),
                    )
                }
                Outcome::Existence119MaxRatio { ratio } => {
                    let got = solve_existence_119(&self.instance, limits)?
                        .report
                        .max_ratio();
                    (got == Some(*ratio), format!("max ratio {got:?}"))
                }
                Outcome::Poly54Complete => {
                    let sol = solve_poly_54(&self.instance)?;
                    (
                        sol.allocation.is_complete(),
                        format!("shares {:?}", sol.shares()),
                    )
                }
                Outcome::Ido => {
                    let got = is_ido(&self.instance);
                    (got, format!("ido {got}"))
                }
            };
            results.push(CheckResult {
                fixture: self.name,
                check: name,
                passed,
                detail,
            });
        }
        Ok(results)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_sum_to_four_shares() {
        for f in builtin_fixtures() {
            let mms = match &f.expected["mms"].outcome {
                Outcome::Mms { values } => values.clone(),
                other => panic!("unexpected {other:?}"),
            };
            for (agent, share) in mms.iter().enumerate() {
                assert_eq!(f.instance.total(agent), 4 * share, "{}", f.name);
            }
        }
    }

    #[test]
    fn trial_rows_are_rescaled_published_rows() {
        let mut scaled: Vec<u64> = NON_MONOTONE_VALUES.iter().map(|v| v * 3).collect();
        scaled.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(scaled, TRIAL_COMMON_ROW);
        // t4's optimal partition, bundle by bundle
        let mut special = vec![306, 144, 165, 165, 120, 165, 165, 120];
        special.extend([50; 9]);
        special.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(special, TRIAL_SPECIAL_ROW);
    }

    #[test]
    fn every_expectation_holds() {
        let limits = OracleLimits::default();
        for f in builtin_fixtures() {
            for r in f.check(&limits).unwrap() {
                assert!(r.passed, "{}/{}: {}", r.fixture, r.check, r.detail);
            }
        }
    }

    #[test]
    fn lookup() {
        assert!(fixture_by_name("non-monotone").is_some());
        assert!(fixture_by_name("nope").is_none());
    }
}
