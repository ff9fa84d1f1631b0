//! End-to-end MMS approximation.
//!
//! * [`solve_existence_119`] computes every exact MMS with the oracle and runs
//!   the greedy allocator at `11/9 · μ_i` on the ordered instance.
//! * [`solve_poly_54`] replaces the oracle with a binary search over
//!   [`threshold_test`], which passes for every `s ≥ μ_i`, and runs the greedy
//!   allocator at `5/4 · s_i`.
//!
//! Both lift the ordered allocation back to the input instance.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::greedy::{check_amms, greedy_fill, AmmsReport, GreedyOutcome, TraceStep};
use crate::instance::{lift_allocation, ordered_instance, AgentId, Allocation, ChoreId, Instance};
use crate::oracle::{makespan_lower_bound, mms_profile, MmsProfile, OracleLimits};
use crate::ratio::{Ratio, ThresholdVector};

/// Doublings of the upper search bound tolerated before giving up.
const MAX_DOUBLINGS: u32 = 8;

fn eleven_ninths() -> Ratio {
    Ratio::new(11, 9).expect("nonzero denominator")
}

fn five_quarters() -> Ratio {
    Ratio::new(5, 4).expect("nonzero denominator")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExistenceSolution {
    pub allocation: Allocation,
    pub profile: MmsProfile,
    pub report: AmmsReport,
    /// Greedy trace on the ordered instance.
    pub trace: Vec<TraceStep>,
}

/// Complete allocation with `v_i(A_i) ≤ 11/9 · μ_i` for every agent.
pub fn solve_existence_119(inst: &Instance, limits: &OracleLimits) -> Result<ExistenceSolution> {
    let profile = mms_profile(inst, limits)?;
    let ord = ordered_instance(inst);
    let thresholds = ThresholdVector::scaled(eleven_ninths(), &profile.values);
    let filled = greedy_fill(&ord.instance, &thresholds)?;
    if !filled.allocation.is_complete() {
        return Err(Error::Invariant(format!(
            "greedy at 11/9 of the exact shares left {} chores",
            filled.allocation.leftover.len()
        )));
    }
    let allocation = lift_allocation(inst, &ord, &filled.allocation)?;
    let report = check_amms(inst, &allocation, &profile, eleven_ninths())?;
    if !report.holds {
        return Err(Error::Invariant(
            "lifted allocation exceeds 11/9 of a share".into(),
        ));
    }
    Ok(ExistenceSolution {
        allocation,
        profile,
        report,
        trace: filled.trace,
    })
}

/// Greedy allocation on `n` copies of `agent`'s valuation, all at threshold `s`.
pub fn naive_fill(inst: &Instance, agent: AgentId, s: u64) -> Result<GreedyOutcome> {
    inst.check_agent(agent)?;
    let clone = Instance::identical(inst.row(agent), inst.num_agents())?;
    greedy_fill(
        &clone,
        &ThresholdVector::uniform(Ratio::from_integer(s), inst.num_agents()),
    )
}

/// Whether the greedy allocator places every chore when all `n` agents share
/// `agent`'s valuation and threshold `s`.
pub fn naive_test(inst: &Instance, agent: AgentId, s: u64) -> Result<bool> {
    Ok(naive_fill(inst, agent, s)?.allocation.is_complete())
}

/// Smallest integer threshold passing [`naive_test`], found by scanning
/// upward from the lower bound. The test is not monotone, so no bisection.
pub fn naive_threshold(inst: &Instance, agent: AgentId) -> Result<u64> {
    inst.check_agent(agent)?;
    let bounds = SearchBounds::for_agent(inst, agent);
    // every s ≥ 11/9 · μ passes and μ ≤ 2 · lower
    let limit = 3 * bounds.lower;
    (bounds.lower..=limit)
        .find_map(|s| match naive_test(inst, agent, s) {
            Ok(true) => Some(Ok(s)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .unwrap_or_else(|| Err(Error::Invariant(format!("naive test fails up to {limit}"))))
}

/// Outcome of [`threshold_test`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TestOutcome {
    pub passed: bool,
    /// Bundles of large chores (cost above `s/4`) built by the test; every
    /// other chore is in the leftover.
    pub benchmark: Allocation,
    /// Number of chores costing more than `s/2`.
    pub really_large_count: usize,
}

/// Two-stage allocation of `agent`'s large chores (cost `> s/4`).
///
/// The `k` chores costing more than `s/2` seed bundles `0..k`. Bundles
/// `k-1` down to `0` are topped up, under cap `s`, with the remaining large
/// chores scanned most costly first. Bundles `k..n` are then filled greedily
/// under cap `5s/4`. Passes iff no large chore is left.
pub fn threshold_test(inst: &Instance, agent: AgentId, s: u64) -> Result<TestOutcome> {
    inst.check_agent(agent)?;
    let n = inst.num_agents();
    let row = inst.row(agent);
    let s = u128::from(s);

    let mut by_cost: Vec<ChoreId> = (0..row.len()).collect();
    by_cost.sort_by(|&a, &b| row[b].cmp(&row[a]));
    let above = |c: ChoreId, parts: u128| u128::from(row[c]) * parts > s;

    let really_large: Vec<ChoreId> = by_cost.iter().copied().filter(|&c| above(c, 2)).collect();
    let mut rest: Vec<ChoreId> = by_cost
        .iter()
        .copied()
        .filter(|&c| above(c, 4) && !above(c, 2))
        .collect();
    let k = really_large.len();

    let mut bundles = vec![Vec::new(); n];
    if k <= n {
        let mut loads = vec![0u64; n];
        for (t, &c) in really_large.iter().enumerate() {
            bundles[t].push(c);
            loads[t] = row[c];
        }
        for t in (0..k).rev() {
            rest.retain(|&c| {
                let grown = u128::from(loads[t] + row[c]);
                if grown <= s {
                    loads[t] += row[c];
                    bundles[t].push(c);
                    false
                } else {
                    true
                }
            });
        }
        for t in k..n {
            rest.retain(|&c| {
                // load + v ≤ 5s/4
                let grown = u128::from(loads[t] + row[c]);
                if 4 * grown <= 5 * s {
                    loads[t] += row[c];
                    bundles[t].push(c);
                    false
                } else {
                    true
                }
            });
        }
    }
    // with k > n the seeds do not fit and nothing is placed

    let passed = k <= n && rest.is_empty();
    let mut placed = vec![false; row.len()];
    for &c in bundles.iter().flatten() {
        placed[c] = true;
    }
    let leftover = (0..row.len()).filter(|&c| !placed[c]).collect();
    Ok(TestOutcome {
        passed,
        benchmark: Allocation { bundles, leftover }.normalized(),
        really_large_count: k,
    })
}

/// Binary-search range for an agent's threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    /// `max(ceil(v_i(M)/n), max_c v_i(c))`.
    pub lower: u64,
    pub upper: u64,
}

impl SearchBounds {
    pub fn for_agent(inst: &Instance, agent: AgentId) -> Self {
        let lower = makespan_lower_bound(inst.row(agent), inst.num_agents());
        SearchBounds {
            lower,
            upper: 2 * lower,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdSearch {
    /// `s*`: passes the test, and either equals the lower bound or `s* - 1` fails.
    pub threshold: u64,
    pub bounds: SearchBounds,
    /// Times the upper bound had to be doubled before it passed; always 0
    /// unless the test misbehaves.
    pub doublings: u32,
}

/// Smallest-found integer threshold passing [`threshold_test`] for `agent`.
///
/// The test need not be monotone below `μ`, so this is a boundary search
/// keeping a passing upper end and a failing lower end. Since every `s ≥ μ`
/// passes, the failing end stays below `μ` and the result is at most `μ`.
pub fn search_threshold(inst: &Instance, agent: AgentId) -> Result<ThresholdSearch> {
    inst.check_agent(agent)?;
    boundary_search(SearchBounds::for_agent(inst, agent), |s| {
        threshold_test(inst, agent, s).map(|t| t.passed)
    })
}

/// Shared by the 5/4 solver and the scheduler.
pub(crate) fn boundary_search(
    bounds: SearchBounds,
    mut passes: impl FnMut(u64) -> Result<bool>,
) -> Result<ThresholdSearch> {
    let mut hi = bounds.upper;
    let mut doublings = 0;
    while !passes(hi)? {
        if doublings == MAX_DOUBLINGS || hi == 0 {
            return Err(Error::Invariant(format!(
                "no passing threshold up to {hi} (lower bound {})",
                bounds.lower
            )));
        }
        hi *= 2;
        doublings += 1;
    }
    let mut lo = bounds.lower;
    if passes(lo)? {
        return Ok(ThresholdSearch {
            threshold: lo,
            bounds,
            doublings,
        });
    }
    // passes(hi) && !passes(lo)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if passes(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ThresholdSearch {
        threshold: hi,
        bounds,
        doublings,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolySolution {
    pub allocation: Allocation,
    pub searches: Vec<ThresholdSearch>,
    /// `5/4 · s_i` per agent.
    pub thresholds: ThresholdVector,
    pub loads: Vec<u64>,
    /// Greedy trace on the ordered instance.
    pub trace: Vec<TraceStep>,
}

impl PolySolution {
    pub fn shares(&self) -> Vec<u64> {
        self.searches.iter().map(|s| s.threshold).collect()
    }

    /// `4 · v_i(A_i) ≤ 5 · s_i` for every agent; with `s_i ≤ μ_i` this
    /// certifies a 5/4-MMS allocation.
    pub fn certified(&self) -> bool {
        self.loads
            .iter()
            .zip(&self.searches)
            .all(|(&load, s)| 4 * u128::from(load) <= 5 * u128::from(s.threshold))
    }
}

/// Complete allocation with `v_i(A_i) ≤ 5/4 · s_i ≤ 5/4 · μ_i`, in polynomial time.
pub fn solve_poly_54(inst: &Instance) -> Result<PolySolution> {
    let searches = (0..inst.num_agents())
        .map(|agent| search_threshold(inst, agent))
        .collect::<Result<Vec<_>>>()?;
    let shares: Vec<u64> = searches.iter().map(|s| s.threshold).collect();
    let thresholds = ThresholdVector::scaled(five_quarters(), &shares);

    let ord = ordered_instance(inst);
    let filled = greedy_fill(&ord.instance, &thresholds)?;
    if !filled.allocation.is_complete() {
        return Err(Error::Invariant(format!(
            "greedy at 5/4 of the searched thresholds left {} chores",
            filled.allocation.leftover.len()
        )));
    }
    let allocation = lift_allocation(inst, &ord, &filled.allocation)?;
    let loads = allocation.loads(inst);
    let solution = PolySolution {
        allocation,
        searches,
        thresholds,
        loads,
        trace: filled.trace,
    };
    if !solution.certified() {
        return Err(Error::Invariant(
            "lifted allocation exceeds 5/4 of a threshold".into(),
        ));
    }
    Ok(solution)
}

#[cfg(test)]
mod tests {
    use super::*;

    const NON_MONOTONE_ROW: [u64; 17] = [
        102, 24, 24, 55, 55, 20, 20, 55, 55, 20, 20, 50, 20, 20, 20, 20, 20,
    ];

    #[test]
    fn naive_test_is_not_monotone() {
        let inst = Instance::identical(&NON_MONOTONE_ROW, 4).unwrap();
        assert!(naive_test(&inst, 0, 150).unwrap());
        assert!(!naive_test(&inst, 0, 152).unwrap());
        assert_eq!(
            naive_fill(&inst, 0, 152).unwrap().allocation.leftover.len(),
            2
        );
    }

    #[test]
    fn naive_test_extremes() {
        let inst = Instance::new(vec![vec![4, 9, 2], vec![1, 1, 1]]).unwrap();
        assert!(naive_test(&inst, 0, 15).unwrap());
        assert!(!naive_test(&inst, 0, 8).unwrap());
        assert!(naive_test(&inst, 1, 3).unwrap());
        assert!(naive_test(&inst, 2, 3).is_err());
    }

    #[test]
    fn threshold_test_without_large_chores() {
        let inst = Instance::identical(&[2, 2, 1, 1, 1], 2).unwrap();
        let out = threshold_test(&inst, 0, 8).unwrap();
        assert!(out.passed);
        assert_eq!(out.really_large_count, 0);
        assert!(out.benchmark.bundles.iter().all(Vec::is_empty));
        assert_eq!(out.benchmark.leftover.len(), 5);
    }

    #[test]
    fn threshold_test_stages() {
        // s = 20: cost > 10 seeds a bundle, cost in (5, 10] fills.
        let inst = Instance::identical(&[12, 11, 9, 8, 6, 3], 3).unwrap();
        let out = threshold_test(&inst, 0, 20).unwrap();
        assert_eq!(out.really_large_count, 2);
        assert!(out.passed);
        // stage one fills bundle 1 first: 11 + 9 = 20, then bundle 0: 12 + 8 = 20;
        // stage two puts 6 in bundle 2
        assert_eq!(out.benchmark.bundles, vec![vec![0, 3], vec![1, 2], vec![4]]);
        assert_eq!(out.benchmark.leftover, vec![5]);
    }

    #[test]
    fn threshold_test_too_many_seeds() {
        let inst = Instance::identical(&[6, 6, 6], 2).unwrap();
        let out = threshold_test(&inst, 0, 10).unwrap();
        assert_eq!(out.really_large_count, 3);
        assert!(!out.passed);
    }

    #[test]
    fn threshold_test_at_mms_non_monotone() {
        let inst = Instance::identical(&NON_MONOTONE_ROW, 4).unwrap();
        assert!(threshold_test(&inst, 0, 150).unwrap().passed);
    }

    #[test]
    fn search_hits_forced_lower_bound() {
        let inst = Instance::identical(&[10; 6], 6).unwrap();
        let found = search_threshold(&inst, 0).unwrap();
        assert_eq!(
            found.bounds,
            SearchBounds {
                lower: 10,
                upper: 20
            }
        );
        assert_eq!(found.threshold, 10);
        assert_eq!(found.doublings, 0);
    }

    #[test]
    fn all_zero_valuations() {
        let inst = Instance::identical(&[0, 0, 0, 0], 3).unwrap();
        let found = search_threshold(&inst, 1).unwrap();
        assert_eq!(found.threshold, 0);
        let sol = solve_poly_54(&inst).unwrap();
        assert!(sol.allocation.is_complete());
        assert_eq!(sol.loads, vec![0, 0, 0]);
        let exist = solve_existence_119(&inst, &OracleLimits::default()).unwrap();
        assert!(exist.report.holds);
    }

    #[test]
    fn boundary_search_keeps_passing_end() {
        // passes on {3} and [7, ∞): the failing end never climbs past 6
        let pass = |s: u64| Ok(s == 3 || s >= 7);
        let found = boundary_search(
            SearchBounds {
                lower: 2,
                upper: 10,
            },
            pass,
        )
        .unwrap();
        assert!(found.threshold == 3 || found.threshold == 7);
        assert!(pass(found.threshold).unwrap() && !pass(found.threshold - 1).unwrap());

        let late = boundary_search(SearchBounds { lower: 1, upper: 2 }, |s| Ok(s >= 5)).unwrap();
        assert_eq!((late.threshold, late.doublings), (5, 2));

        assert!(boundary_search(SearchBounds { lower: 1, upper: 2 }, |_| Ok(false)).is_err());
    }

    #[test]
    fn many_agents_few_chores() {
        let inst = Instance::new(vec![vec![5, 3], vec![2, 7], vec![1, 1]]).unwrap();
        let exist = solve_existence_119(&inst, &OracleLimits::default()).unwrap();
        assert!(exist
            .report
            .ratios
            .iter()
            .all(|r| r.is_some_and(|r| r <= Ratio::ONE)));
        let poly = solve_poly_54(&inst).unwrap();
        assert!(poly.allocation.is_complete());
    }
}
