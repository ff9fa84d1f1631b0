//! Makespan scheduling on identical machines.
//!
//! With every machine sharing one cost function, the greedy allocator's naive
//! test passes for every threshold `s ≥ 11/9 · OPT`. Binary searching the
//! test therefore yields a schedule with `9 · makespan ≤ 11 · OPT`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Allocation, Instance};
use crate::oracle::makespan_lower_bound;
use crate::solver::{boundary_search, naive_fill, SearchBounds};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Schedule {
    /// `bundles[k]` holds the jobs of machine `k`.
    pub machines: Allocation,
    pub loads: Vec<u64>,
    pub makespan: u64,
    /// Threshold the greedy schedule was built at, when there is one.
    pub threshold: Option<u64>,
    /// `max(ceil(total/n), max job)`.
    pub lower_bound: u64,
}

fn job_instance(values: &[u64], machines: usize) -> Result<Instance> {
    if machines == 0 {
        return Err(Error::InvalidInstance(
            "at least one machine is required".into(),
        ));
    }
    Instance::identical(values, machines)
}

fn finish(inst: &Instance, machines: Allocation, threshold: Option<u64>) -> Schedule {
    let loads = machines.loads(inst);
    Schedule {
        makespan: loads.iter().copied().max().unwrap_or(0),
        lower_bound: makespan_lower_bound(inst.row(0), inst.num_agents()),
        machines,
        loads,
        threshold,
    }
}

/// 11/9-approximate schedule from a boundary search over the naive test.
pub fn schedule_119(values: &[u64], machines: usize) -> Result<Schedule> {
    let inst = job_instance(values, machines)?;
    let found = boundary_search(SearchBounds::for_agent(&inst, 0), |s| {
        naive_fill(&inst, 0, s).map(|out| out.allocation.is_complete())
    })?;
    let filled = naive_fill(&inst, 0, found.threshold)?;
    if !filled.allocation.is_complete() {
        return Err(Error::Invariant(
            "passing threshold left jobs unscheduled".into(),
        ));
    }
    Ok(finish(&inst, filled.allocation, Some(found.threshold)))
}

/// Longest Processing Time: jobs in nonincreasing order, each onto the
/// currently least-loaded machine (lowest index on ties).
pub fn schedule_lpt(values: &[u64], machines: usize) -> Result<Schedule> {
    let inst = job_instance(values, machines)?;
    let mut jobs: Vec<usize> = (0..values.len()).collect();
    jobs.sort_by(|&a, &b| values[b].cmp(&values[a]));
    let mut loads = vec![0u64; machines];
    let mut bundles = vec![Vec::new(); machines];
    for job in jobs {
        let target = (0..machines).min_by_key(|&k| loads[k]).unwrap_or(0);
        loads[target] += values[job];
        bundles[target].push(job);
    }
    let alloc = Allocation {
        bundles,
        leftover: Vec::new(),
    }
    .normalized();
    Ok(finish(&inst, alloc, None))
}
