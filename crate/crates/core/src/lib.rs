//! Approximate maximin-share (MMS) allocation of indivisible chores.
//!
//! Chores carry non-negative integer costs per agent. An agent's maximin share
//! is the smallest achievable worst-bundle cost over all partitions of the
//! chores into `n` bundles, which is exactly the optimal makespan of the
//! corresponding identical-machines scheduling problem.
//!
//! The crate provides:
//!
//! * [`instance`]: instances, allocations, the ordered (sorted) instance and
//!   the reduction that lifts an allocation of the ordered instance back to
//!   the original one without making any agent worse off.
//! * [`oracle`]: an exact branch-and-bound MMS / makespan solver used as
//!   ground truth.
//! * [`greedy`]: threshold-greedy bundle filling on instances where every
//!   agent ranks the chores the same way.
//! * [`solver`]: the oracle-backed 11/9-MMS solver and the polynomial
//!   5/4-MMS solver driven by threshold testing and binary search.
//! * [`schedule`]: 11/9-approximate makespan scheduling and an LPT baseline.
//! * [`cli`]: fixtures, random instance generation, benchmarking and the
//!   command-line front end.
//!
//! All threshold comparisons are exact; no floating point enters any
//! decision.

pub mod cli;
pub mod error;
pub mod greedy;
pub mod instance;
pub mod oracle;
pub mod ratio;
pub mod schedule;
pub mod solver;

pub use error::{Error, Result};
pub use greedy::{check_amms, greedy_fill, AmmsReport, GreedyOutcome, TraceStep};
pub use instance::{
    classify_chores, is_ido, lift_allocation, ordered_instance, verify_allocation, AgentId,
    Allocation, ChoreId, Instance, OrderedInstance, VerifyReport,
};
pub use oracle::{exact_mms, mms_profile, optimal_makespan, MmsProfile, OracleLimits};
pub use ratio::{Ratio, ThresholdVector};
pub use schedule::{schedule_119, schedule_lpt, Schedule};
pub use solver::{
    naive_test, naive_threshold, search_threshold, solve_existence_119, solve_poly_54,
    threshold_test, ExistenceSolution, PolySolution, SearchBounds, TestOutcome, ThresholdSearch,
};
