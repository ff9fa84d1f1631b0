use thiserror::Error;

use crate::instance::AgentId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),

    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("agent {agent} out of range for {agents} agents")]
    AgentOutOfRange { agent: AgentId, agents: usize },

    #[error("instance is not identically ordered: no single chore order is nonincreasing for every agent")]
    NotIdo,

    #[error("allocation is incomplete: {leftover} chores unallocated")]
    IncompleteAllocation { leftover: usize },

    #[error("instance has {chores} chores, oracle limit is {limit}")]
    InstanceTooLarge { chores: usize, limit: usize },

    #[error("oracle node budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
