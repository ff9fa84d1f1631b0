//! Threshold-greedy bundle filling for identically ordered instances.
//!
//! `n` rounds. Each round scans the remaining chores from most to least
//! costly and takes a chore whenever some agent still without a bundle could
//! carry the grown bundle within their threshold. The finished bundle goes to
//! the lowest-index such agent. Chores that never fit are reported as
//! leftover rather than treated as an error.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{ido_order, AgentId, Allocation, ChoreId, Instance};
use crate::oracle::MmsProfile;
use crate::ratio::{Ratio, ThresholdVector};

/// One accepted chore.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub round: usize,
    pub chore: ChoreId,
    /// Lowest-index unassigned agent able to carry the bundle with this chore.
    pub witness: AgentId,
    /// The witness's cost for the bundle after insertion.
    pub load: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyOutcome {
    /// `bundles[i]` is agent `i`'s bundle.
    pub allocation: Allocation,
    /// `assignment[k]` is the agent that received the round-`k` bundle.
    pub assignment: Vec<AgentId>,
    pub trace: Vec<TraceStep>,
}

impl GreedyOutcome {
    /// Bundles in the order they were built.
    pub fn bundles_in_round_order(&self) -> impl Iterator<Item = &[ChoreId]> + '_ {
        self.assignment
            .iter()
            .map(|&agent| self.allocation.bundles[agent].as_slice())
    }
}

pub fn greedy_fill(inst: &Instance, thresholds: &ThresholdVector) -> Result<GreedyOutcome> {
    let n = inst.num_agents();
    if thresholds.len() != n {
        return Err(Error::DimensionMismatch {
            what: "thresholds",
            expected: n,
            found: thresholds.len(),
        });
    }
    let order = ido_order(inst).ok_or(Error::NotIdo)?;

    let mut remaining = order;
    let mut unassigned: Vec<AgentId> = (0..n).collect();
    let mut bundles = vec![Vec::new(); n];
    let mut assignment = Vec::with_capacity(n);
    let mut trace = Vec::new();
    // loads[i] = v_i(current bundle)
    let mut loads = vec![0u64; n];

    for round in 0..n {
        loads.fill(0);
        let mut bundle = Vec::new();
        remaining.retain(|&chore| {
            let witness = unassigned
                .iter()
                .copied()
                .find(|&i| thresholds[i].admits(loads[i] + inst.value(i, chore)));
            match witness {
                Some(witness) => {
                    for &i in &unassigned {
                        loads[i] += inst.value(i, chore);
                    }
                    bundle.push(chore);
                    trace.push(TraceStep {
                        round,
                        chore,
                        witness,
                        load: loads[witness],
                    });
                    false
                }
                None => true,
            }
        });

        let pos = unassigned
            .iter()
            .position(|&i| thresholds[i].admits(loads[i]))
            .ok_or_else(|| {
                Error::Invariant(format!("round {round}: no agent accepts the bundle"))
            })?;
        let agent = unassigned.remove(pos);
        bundle.sort_unstable();
        bundles[agent] = bundle;
        assignment.push(agent);
    }

    remaining.sort_unstable();
    Ok(GreedyOutcome {
        allocation: Allocation {
            bundles,
            leftover: remaining,
        },
        assignment,
        trace,
    })
}

/// Result of checking `v_i(A_i) ≤ α · μ_i` for every agent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmmsReport {
    pub holds: bool,
    pub loads: Vec<u64>,
    /// `v_i(A_i) / μ_i`; `None` when `μ_i = 0` but the agent carries a positive load.
    pub ratios: Vec<Option<Ratio>>,
}

impl AmmsReport {
    /// Largest ratio, or `None` if any ratio is unbounded.
    pub fn max_ratio(&self) -> Option<Ratio> {
        self.ratios
            .iter()
            .try_fold(Ratio::ZERO, |acc, r| r.map(|r| acc.max(r)))
    }
}

pub fn check_amms(
    inst: &Instance,
    alloc: &Allocation,
    profile: &MmsProfile,
    alpha: Ratio,
) -> Result<AmmsReport> {
    alloc.validate(inst.num_agents(), inst.num_chores())?;
    if !alloc.is_complete() {
        return Err(Error::IncompleteAllocation {
            leftover: alloc.leftover.len(),
        });
    }
    if profile.values.len() != inst.num_agents() {
        return Err(Error::DimensionMismatch {
            what: "MMS profile",
            expected: inst.num_agents(),
            found: profile.values.len(),
        });
    }
    let loads = alloc.loads(inst);
    let ratios: Vec<Option<Ratio>> = loads
        .iter()
        .zip(&profile.values)
        .map(|(&load, &mms)| match Ratio::of(load, mms) {
            Some(r) => Some(r),
            None if load == 0 => Some(Ratio::ZERO),
            None => None,
        })
        .collect();
    let holds = loads
        .iter()
        .zip(&profile.values)
        .all(|(&load, &mms)| alpha.times(mms).admits(load));
    Ok(AmmsReport {
        holds,
        loads,
        ratios,
    })
}
