//! Exact maximin shares by branch-and-bound.
//!
//! An agent's MMS for chores is the optimal makespan of scheduling the chores
//! (as jobs with the agent's costs) on `n` identical machines. The search
//! assigns chores in nonincreasing order and is seeded with the LPT schedule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{AgentId, Allocation, ChoreId, Instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleLimits {
    pub max_chores: usize,
    /// Search nodes allowed per call before giving up.
    pub node_budget: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_chores: 24,
            node_budget: 200_000_000,
        }
    }
}

impl OracleLimits {
    fn check(&self, chores: usize) -> Result<()> {
        if chores > self.max_chores.max(1) {
            return Err(Error::InstanceTooLarge {
                chores,
                limit: self.max_chores,
            });
        }
        Ok(())
    }
}

/// Per-agent maximin shares `μ_i`, optionally with optimal partitions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MmsProfile {
    pub values: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<Allocation>>,
}

/// `max(ceil(total / bins), largest job)`; no partition does better.
pub fn makespan_lower_bound(values: &[u64], bins: usize) -> u64 {
    let total: u64 = values.iter().sum();
    let largest = values.iter().copied().max().unwrap_or(0);
    total.div_ceil(bins as u64).max(largest)
}

/// Exact MMS of `agent` and one partition attaining it.
pub fn exact_mms(
    inst: &Instance,
    agent: AgentId,
    limits: &OracleLimits,
) -> Result<(u64, Allocation)> {
    inst.check_agent(agent)?;
    limits.check(inst.num_chores())?;
    let (value, parts) = min_makespan(inst.row(agent), inst.num_agents(), limits)?;
    Ok((
        value,
        Allocation {
            bundles: parts,
            leftover: Vec::new(),
        }
        .normalized(),
    ))
}

/// [`exact_mms`] for every agent.
pub fn mms_profile(inst: &Instance, limits: &OracleLimits) -> Result<MmsProfile> {
    let (values, witnesses) = (0..inst.num_agents())
        .map(|agent| exact_mms(inst, agent, limits))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    Ok(MmsProfile {
        values,
        witnesses: Some(witnesses),
    })
}

/// Optimal makespan of `values` on `machines` identical machines.
pub fn optimal_makespan(values: &[u64], machines: usize, limits: &OracleLimits) -> Result<u64> {
    let inst = Instance::identical(values, machines)?;
    exact_mms(&inst, 0, limits).map(|(v, _)| v)
}

/// Branch-and-bound minimum makespan. Returns the value and one optimal
/// partition (as `bins` lists of job indices).
fn min_makespan(
    values: &[u64],
    bins: usize,
    limits: &OracleLimits,
) -> Result<(u64, Vec<Vec<ChoreId>>)> {
    let mut jobs: Vec<ChoreId> = (0..values.len()).collect();
    jobs.sort_by(|&a, &b| values[b].cmp(&values[a]));
    let sizes: Vec<u64> = jobs.iter().map(|&j| values[j]).collect();

    let lower = makespan_lower_bound(values, bins);
    let (seed_span, seed_assign) = lpt_assign(&sizes, bins);

    let mut search = Search {
        sizes: &sizes,
        suffix: suffix_sums(&sizes),
        lower,
        best: seed_span,
        best_assign: seed_assign,
        loads: vec![0; bins],
        assign: vec![0; sizes.len()],
        nodes: 0,
        budget: limits.node_budget,
    };
    if search.best > lower {
        search.descend(0)?;
    }

    let mut parts = vec![Vec::new(); bins];
    for (pos, &bin) in search.best_assign.iter().enumerate() {
        parts[bin].push(jobs[pos]);
    }
    Ok((search.best, parts))
}

fn suffix_sums(sizes: &[u64]) -> Vec<u64> {
    let mut suffix = vec![0; sizes.len() + 1];
    for i in (0..sizes.len()).rev() {
        suffix[i] = suffix[i + 1] + sizes[i];
    }
    suffix
}

/// LPT on jobs already sorted nonincreasing: each job to the least-loaded
/// machine, lowest index on ties.
fn lpt_assign(sizes: &[u64], bins: usize) -> (u64, Vec<usize>) {
    let mut loads = vec![0u64; bins];
    let assign = sizes
        .iter()
        .map(|&size| {
            let bin = (0..bins).min_by_key(|&b| loads[b]).unwrap_or(0);
            loads[bin] += size;
            bin
        })
        .collect();
    (loads.into_iter().max().unwrap_or(0), assign)
}

struct Search<'a> {
    sizes: &'a [u64],
    /// `suffix[d]` = total size of jobs `d..`.
    suffix: Vec<u64>,
    lower: u64,
    best: u64,
    best_assign: Vec<usize>,
    loads: Vec<u64>,
    assign: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// Looks for a completion with makespan strictly below `best`. Returns
    /// `Ok(true)` once the lower bound is reached.
    fn descend(&mut self, depth: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted {
                budget: self.budget,
            });
        }
        if depth == self.sizes.len() {
            self.best = self.loads.iter().copied().max().unwrap_or(0);
            self.best_assign.clone_from(&self.assign);
            return Ok(self.best <= self.lower);
        }

        let cap = self.best - 1;
        // room left under the cap must hold every remaining job
        let room: u64 = self.loads.iter().map(|&l| cap.saturating_sub(l)).sum();
        if room < self.suffix[depth] {
            return Ok(false);
        }

        let size = self.sizes[depth];
        for bin in 0..self.loads.len() {
            let load = self.loads[bin];
            if load + size > self.best - 1 {
                continue;
            }
            // bins with equal load are interchangeable; this also keeps a job
            // from opening a second empty bin
            if self.loads[..bin].contains(&load) {
                continue;
            }
            self.loads[bin] += size;
            self.assign[depth] = bin;
            let done = self.descend(depth + 1)?;
            self.loads[bin] -= size;
            if done {
                return Ok(true);
            }
            // `best` may have dropped; later bins are checked against it
        }
        Ok(false)
    }
}
