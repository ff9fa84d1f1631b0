//! Instances, allocations, the ordered instance and the reduction back to
//! arbitrary instances.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::{Ratio, ThresholdVector};

pub type AgentId = usize;
pub type ChoreId = usize;

/// Per-agent integer chore costs `v_i(c_j)`.
///
/// Every entry and every agent's row total fit in `i64`, so any bundle load
/// fits in a `u64` and any load times a small multiplier fits in a `u128`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile", into = "InstanceFile")]
pub struct Instance {
    num_chores: usize,
    valuations: Vec<Vec<u64>>,
}

/// On-disk shape: `{"agents": n, "chores": m, "valuations": [[..], ..]}`.
#[derive(Serialize, Deserialize)]
struct InstanceFile {
    agents: usize,
    chores: usize,
    valuations: Vec<Vec<u64>>,
}

impl TryFrom<InstanceFile> for Instance {
    type Error = Error;

    fn try_from(f: InstanceFile) -> Result<Self> {
        Instance::with_dims(f.agents, f.chores, f.valuations)
    }
}

impl From<Instance> for InstanceFile {
    fn from(inst: Instance) -> Self {
        InstanceFile {
            agents: inst.num_agents(),
            chores: inst.num_chores,
            valuations: inst.valuations,
        }
    }
}

const VALUE_LIMIT: u64 = i64::MAX as u64;

impl Instance {
    /// Builds an instance from a non-empty rectangular matrix (rows are agents).
    pub fn new(valuations: Vec<Vec<u64>>) -> Result<Self> {
        let chores = valuations.first().map_or(0, Vec::len);
        Instance::with_dims(valuations.len(), chores, valuations)
    }

    pub fn with_dims(agents: usize, chores: usize, valuations: Vec<Vec<u64>>) -> Result<Self> {
        if agents == 0 {
            return Err(Error::InvalidInstance(
                "at least one agent is required".into(),
            ));
        }
        if valuations.len() != agents {
            return Err(Error::DimensionMismatch {
                what: "valuation rows",
                expected: agents,
                found: valuations.len(),
            });
        }
        for (agent, row) in valuations.iter().enumerate() {
            if row.len() != chores {
                return Err(Error::DimensionMismatch {
                    what: "valuation columns",
                    expected: chores,
                    found: row.len(),
                });
            }
            let total = row
                .iter()
                .try_fold(0u64, |acc, &v| acc.checked_add(v))
                .filter(|&t| t <= VALUE_LIMIT);
            if total.is_none() {
                return Err(Error::InvalidInstance(format!(
                    "agent {agent}: total cost exceeds the signed 64-bit range"
                )));
            }
        }
        Ok(Instance {
            num_chores: chores,
            valuations,
        })
    }

    /// `agents` copies of one valuation row.
    pub fn identical(values: &[u64], agents: usize) -> Result<Self> {
        Instance::with_dims(agents, values.len(), vec![values.to_vec(); agents])
    }

    pub fn num_agents(&self) -> usize {
        self.valuations.len()
    }

    pub fn num_chores(&self) -> usize {
        self.num_chores
    }

    pub fn value(&self, agent: AgentId, chore: ChoreId) -> u64 {
        self.valuations[agent][chore]
    }

    pub fn row(&self, agent: AgentId) -> &[u64] {
        &self.valuations[agent]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.valuations
    }

    pub fn total(&self, agent: AgentId) -> u64 {
        self.valuations[agent].iter().sum()
    }

    pub fn max_value(&self, agent: AgentId) -> u64 {
        self.valuations[agent].iter().copied().max().unwrap_or(0)
    }

    /// `v_agent(bundle)`.
    pub fn bundle_value(&self, agent: AgentId, bundle: &[ChoreId]) -> u64 {
        let row = &self.valuations[agent];
        bundle.iter().map(|&c| row[c]).sum()
    }

    pub(crate) fn check_agent(&self, agent: AgentId) -> Result<()> {
        if agent < self.num_agents() {
            Ok(())
        } else {
            Err(Error::AgentOutOfRange {
                agent,
                agents: self.num_agents(),
            })
        }
    }
}

/// The ordered instance: every agent's row sorted nonincreasing, so ordered
/// chore `j` is each agent's `j`-th most costly chore.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedInstance {
    pub instance: Instance,
    /// `source_ranks[i][j]` is the original index of agent `i`'s `j`-th
    /// largest chore.
    pub source_ranks: Vec<Vec<ChoreId>>,
}

pub fn ordered_instance(inst: &Instance) -> OrderedInstance {
    let mut rows = Vec::with_capacity(inst.num_agents());
    let mut ranks = Vec::with_capacity(inst.num_agents());
    for row in inst.rows() {
        let mut order: Vec<ChoreId> = (0..row.len()).collect();
        // stable: equal values keep ascending chore index
        order.sort_by(|&a, &b| row[b].cmp(&row[a]));
        rows.push(order.iter().map(|&c| row[c]).collect());
        ranks.push(order);
    }
    OrderedInstance {
        instance: Instance {
            num_chores: inst.num_chores(),
            valuations: rows,
        },
        source_ranks: ranks,
    }
}

/// A chore order that is nonincreasing for every agent at once, if one exists.
///
/// Chores are sorted by their full value vector, lexicographically
/// descending with ties on ascending index. That order works whenever any
/// order does, since in an IDO instance chores are totally ordered
/// componentwise.
pub fn ido_order(inst: &Instance) -> Option<Vec<ChoreId>> {
    let mut order: Vec<ChoreId> = (0..inst.num_chores()).collect();
    let column = |c: ChoreId| inst.rows().iter().map(move |row| row[c]);
    order.sort_by(|&a, &b| column(b).cmp(column(a)));
    let consistent = inst
        .rows()
        .iter()
        .all(|row| order.windows(2).all(|w| row[w[0]] >= row[w[1]]));
    consistent.then_some(order)
}

pub fn is_ido(inst: &Instance) -> bool {
    ido_order(inst).is_some()
}

/// `n` bundles (bundle `i` belongs to agent `i`) plus the chores nobody got.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Allocation {
    pub bundles: Vec<Vec<ChoreId>>,
    pub leftover: Vec<ChoreId>,
}

impl Allocation {
    /// Nothing allocated: every chore in the leftover.
    pub fn unallocated(agents: usize, chores: usize) -> Self {
        Allocation {
            bundles: vec![Vec::new(); agents],
            leftover: (0..chores).collect(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.leftover.is_empty()
    }

    /// Sorts every index list so the JSON form is canonical.
    pub fn normalize(&mut self) {
        for b in &mut self.bundles {
            b.sort_unstable();
        }
        self.leftover.sort_unstable();
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    /// Checks `agents` bundles and that bundles plus leftover partition `0..chores`.
    pub fn validate(&self, agents: usize, chores: usize) -> Result<()> {
        if self.bundles.len() != agents {
            return Err(Error::DimensionMismatch {
                what: "allocation bundles",
                expected: agents,
                found: self.bundles.len(),
            });
        }
        let mut seen = vec![false; chores];
        for &c in self.bundles.iter().flatten().chain(&self.leftover) {
            if c >= chores {
                return Err(Error::InvalidAllocation(format!(
                    "chore {c} out of range for {chores} chores"
                )));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidAllocation(format!("chore {c} appears twice")));
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidAllocation(format!(
                "chore {missing} is neither allocated nor leftover"
            )));
        }
        Ok(())
    }

    pub fn loads(&self, inst: &Instance) -> Vec<u64> {
        self.bundles
            .iter()
            .enumerate()
            .map(|(agent, b)| inst.bundle_value(agent, b))
            .collect()
    }
}

/// Maps a complete allocation of the ordered instance back to `inst`.
///
/// Ordered chores are visited from least to most costly; whoever owns the
/// ordered chore takes their currently cheapest remaining original chore
/// (lowest index on ties). Each pick costs its owner at most the ordered chore
/// it stands in for, so `v_i(result_i) ≤ v*_i(ord_alloc_i)` for every agent.
pub fn lift_allocation(
    inst: &Instance,
    ord: &OrderedInstance,
    ord_alloc: &Allocation,
) -> Result<Allocation> {
    let (n, m) = (inst.num_agents(), inst.num_chores());
    if ord.instance.num_agents() != n || ord.instance.num_chores() != m {
        return Err(Error::InvalidInstance(
            "ordered instance does not match the original dimensions".into(),
        ));
    }
    ord_alloc.validate(n, m)?;
    if !ord_alloc.is_complete() {
        return Err(Error::IncompleteAllocation {
            leftover: ord_alloc.leftover.len(),
        });
    }

    let mut owner = vec![0; m];
    for (agent, bundle) in ord_alloc.bundles.iter().enumerate() {
        for &c in bundle {
            owner[c] = agent;
        }
    }

    // Per agent: chores by ascending cost (stable, so ties by ascending index)
    // with a cursor that skips chores already taken.
    let ascending: Vec<Vec<ChoreId>> = inst
        .rows()
        .iter()
        .map(|row| {
            let mut order: Vec<ChoreId> = (0..m).collect();
            order.sort_by_key(|&c| row[c]);
            order
        })
        .collect();
    let mut cursor = vec![0usize; n];
    let mut taken = vec![false; m];
    let mut lifted = vec![Vec::new(); n];

    for j in (0..m).rev() {
        let agent = owner[j];
        let order = &ascending[agent];
        while taken[order[cursor[agent]]] {
            cursor[agent] += 1;
        }
        let chore = order[cursor[agent]];
        taken[chore] = true;
        lifted[agent].push(chore);
    }

    Ok(Allocation {
        bundles: lifted,
        leftover: Vec::new(),
    }
    .normalized())
}

/// Per-agent loads checked against thresholds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub loads: Vec<u64>,
    pub within_threshold: Vec<bool>,
    pub complete: bool,
}

impl VerifyReport {
    pub fn all_within(&self) -> bool {
        self.within_threshold.iter().all(|&ok| ok)
    }
}

pub fn verify_allocation(
    inst: &Instance,
    alloc: &Allocation,
    thresholds: &ThresholdVector,
) -> Result<VerifyReport> {
    alloc.validate(inst.num_agents(), inst.num_chores())?;
    if thresholds.len() != inst.num_agents() {
        return Err(Error::DimensionMismatch {
            what: "thresholds",
            expected: inst.num_agents(),
            found: thresholds.len(),
        });
    }
    let loads = alloc.loads(inst);
    let within_threshold = loads
        .iter()
        .zip(thresholds.as_slice())
        .map(|(&load, t)| t.admits(load))
        .collect();
    Ok(VerifyReport {
        loads,
        within_threshold,
        complete: alloc.is_complete(),
    })
}

/// Splits chores into `large = {c : v_agent(c) > cutoff}` and the rest.
pub fn classify_chores(
    inst: &Instance,
    agent: AgentId,
    cutoff: Ratio,
) -> Result<(BTreeSet<ChoreId>, BTreeSet<ChoreId>)> {
    inst.check_agent(agent)?;
    Ok((0..inst.num_chores()).partition(|&c| !cutoff.admits(inst.value(agent, c))))
}
