//! Corpus benchmark: both solvers on random instances, ratios checked
//! against exact shares.

use std::io::{self, Write};
use std::time::Instant;

use rayon::prelude::*;

use crate::cli::generate::{generate, GeneratorConfig};
use crate::error::{Error, Result};
use crate::greedy::check_amms;
use crate::oracle::{mms_profile, MmsProfile, OracleLimits};
use crate::ratio::Ratio;
use crate::solver::{solve_existence_119, solve_poly_54};

pub const CSV_HEADER: &str =
    "instance_id,n,m,algo,max_ratio_num,max_ratio_den,mms_oracle_ms,solver_ms,complete";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Exact119,
    Poly54,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Exact119 => "exact-119",
            Algo::Poly54 => "poly-54",
        }
    }

    /// Guaranteed worst ratio of load to share.
    pub fn bound(self) -> Ratio {
        match self {
            Algo::Exact119 => Ratio::new(11, 9),
            Algo::Poly54 => Ratio::new(5, 4),
        }
        .expect("nonzero denominator")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub instance_id: usize,
    pub n: usize,
    pub m: usize,
    pub algo: Algo,
    pub max_ratio: Ratio,
    pub mms_oracle_ms: f64,
    pub solver_ms: f64,
    pub complete: bool,
}

impl BenchRow {
    pub fn within_bound(&self) -> bool {
        self.complete && self.max_ratio <= self.algo.bound()
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub generator: GeneratorConfig,
    pub count: usize,
    pub limits: OracleLimits,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            generator: GeneratorConfig::default(),
            count: 100,
            limits: OracleLimits {
                max_chores: 14,
                ..OracleLimits::default()
            },
        }
    }
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn max_ratio(
    inst: &crate::Instance,
    alloc: &crate::Allocation,
    profile: &MmsProfile,
    algo: Algo,
) -> Result<Ratio> {
    check_amms(inst, alloc, profile, algo.bound())?
        .max_ratio()
        .ok_or_else(|| Error::Invariant("positive load against a zero share".into()))
}

/// Runs both solvers on `count` generated instances. Instances are evaluated
/// in parallel; rows come back ordered by instance id.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    let instances: Vec<_> = generate(config.generator.clone())?
        .take(config.count)
        .collect();
    let per_instance: Vec<Result<[BenchRow; 2]>> = instances
        .par_iter()
        .enumerate()
        .map(|(id, inst)| {
            let (n, m) = (inst.num_agents(), inst.num_chores());
            let t = Instant::now();
            let profile = mms_profile(inst, &config.limits)?;
            let oracle_ms = millis(t);

            let t = Instant::now();
            let exact = solve_existence_119(inst, &config.limits)?;
            let exact_ms = millis(t);

            let t = Instant::now();
            let poly = solve_poly_54(inst)?;
            let poly_ms = millis(t);

            let row = |algo, alloc: &crate::Allocation, solver_ms| -> Result<BenchRow> {
                Ok(BenchRow {
                    instance_id: id,
                    n,
                    m,
                    algo,
                    max_ratio: max_ratio(inst, alloc, &profile, algo)?,
                    mms_oracle_ms: oracle_ms,
                    solver_ms,
                    complete: alloc.is_complete(),
                })
            };
            Ok([
                row(Algo::Exact119, &exact.allocation, exact_ms)?,
                row(Algo::Poly54, &poly.allocation, poly_ms)?,
            ])
        })
        .collect();
    let mut rows = Vec::with_capacity(2 * config.count);
    for pair in per_instance {
        rows.extend(pair?);
    }
    Ok(rows)
}

pub fn write_csv(rows: &[BenchRow], mut out: impl Write) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{:.3},{:.3},{}",
            r.instance_id,
            r.n,
            r.m,
            r.algo.name(),
            r.max_ratio.numer(),
            r.max_ratio.denom(),
            r.mms_oracle_ms,
            r.solver_ms,
            r.complete
        )?;
    }
    Ok(())
}
