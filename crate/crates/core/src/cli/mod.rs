//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 input or parse error, 3 solver
//! internal-invariant error, 4 oracle limit exceeded, 5 verification failed.

pub mod bench;
pub mod fixtures;
pub mod generate;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::greedy::check_amms;
use crate::instance::{verify_allocation, Allocation, Instance};
use crate::oracle::{mms_profile, OracleLimits};
use crate::ratio::{Ratio, ThresholdVector};
use crate::schedule::{schedule_119, schedule_lpt};
use crate::solver::{solve_existence_119, solve_poly_54};

use self::bench::{run_bench, write_csv, BenchConfig};
use self::fixtures::builtin_fixtures;
use self::generate::{generate, GeneratorConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;
pub const EXIT_VERIFY_FAILED: i32 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "mms-chores",
    version,
    about = "Approximate maximin-share allocation of chores"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct LimitArgs {
    /// Largest instance the exact oracle accepts.
    #[arg(long, default_value_t = OracleLimits::default().max_chores)]
    max_chores: usize,
    /// Search nodes per oracle call.
    #[arg(long, default_value_t = OracleLimits::default().node_budget)]
    node_budget: u64,
}

impl From<LimitArgs> for OracleLimits {
    fn from(a: LimitArgs) -> Self {
        OracleLimits {
            max_chores: a.max_chores,
            node_budget: a.node_budget,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SolveAlgo {
    #[value(name = "exact-119")]
    Exact119,
    #[value(name = "poly-54")]
    Poly54,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ScheduleAlgo {
    #[value(name = "greedy-119")]
    Greedy119,
    Lpt,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Allocate the chores of an instance.
    Solve {
        #[arg(long, value_enum)]
        algo: SolveAlgo,
        #[arg(long)]
        input: PathBuf,
        /// Write the allocation here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Print the greedy trace as JSON lines on stderr.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Exact maximin share of every agent.
    Mms {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Schedule jobs on identical machines.
    Schedule {
        #[arg(long)]
        machines: usize,
        #[arg(long, value_enum, default_value = "greedy-119")]
        algo: ScheduleAlgo,
        /// `{"jobs": [..]}` or a bare JSON array of processing times.
        #[arg(long)]
        input: PathBuf,
    },
    /// Check an allocation against an instance, and optionally against
    /// alpha times the exact shares.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        allocation: PathBuf,
        /// e.g. `11/9`.
        #[arg(long)]
        alpha: Option<Ratio>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Emit random instances as JSON lines.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// `A` or `A..=B`.
        #[arg(long, default_value = "2..=5", value_parser = parse_range)]
        agents: RangeInclusive<usize>,
        #[arg(long, default_value = "2..=14", value_parser = parse_range)]
        chores: RangeInclusive<usize>,
        #[arg(long, default_value_t = 50)]
        value_max: u64,
        /// Only identically ordered instances.
        #[arg(long)]
        ido: bool,
        /// Write `instance-<k>.json` files here instead of stdout.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// List, export or check the built-in fixtures.
    Fixtures {
        #[arg(long)]
        export: Option<PathBuf>,
        #[arg(long)]
        check: bool,
    },
    /// Run both solvers over a random corpus and emit CSV.
    Bench {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value = "2..=5", value_parser = parse_range)]
        agents: RangeInclusive<usize>,
        #[arg(long, default_value = "2..=14", value_parser = parse_range)]
        chores: RangeInclusive<usize>,
        #[arg(long, default_value_t = 50)]
        value_max: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once("..=") {
        Some((a, b)) => Ok(num(a)?..=num(b)?),
        None => num(s).map(|v| v..=v),
    }
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InstanceTooLarge { .. } | Error::BudgetExhausted { .. } => EXIT_LIMIT,
            Error::Invariant(_) => EXIT_INVARIANT,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::input(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JobsFile {
    Wrapped { jobs: Vec<u64> },
    Bare(Vec<u64>),
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// [`run_cli`] with explicit output streams.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match command {
        Command::Solve {
            algo,
            input,
            output,
            trace,
            limits,
        } => solve(
            algo,
            &input,
            output.as_deref(),
            trace,
            &limits.into(),
            out,
            err,
        ),
        Command::Mms { input, limits } => {
            let inst: Instance = read_json(&input)?;
            let profile = mms_profile(&inst, &limits.into())?;
            writeln!(out, "agent\tmms")?;
            for (agent, mms) in profile.values.iter().enumerate() {
                writeln!(out, "{agent}\t{mms}")?;
            }
            Ok(EXIT_OK)
        }
        Command::Schedule {
            machines,
            algo,
            input,
        } => {
            let jobs = match read_json::<JobsFile>(&input)? {
                JobsFile::Wrapped { jobs } | JobsFile::Bare(jobs) => jobs,
            };
            let schedule = match algo {
                ScheduleAlgo::Greedy119 => schedule_119(&jobs, machines)?,
                ScheduleAlgo::Lpt => schedule_lpt(&jobs, machines)?,
            };
            writeln!(out, "{}", to_json(&schedule))?;
            let lb = schedule.lower_bound;
            let vs_lb = Ratio::of(schedule.makespan, lb).map_or("-".to_string(), |r| r.to_string());
            match algo {
                ScheduleAlgo::Greedy119 => writeln!(
                    err,
                    "makespan {} <= threshold {}; 9*makespan <= 11*OPT guaranteed; makespan/lower_bound = {vs_lb} (lower bound {lb})",
                    schedule.makespan,
                    schedule.threshold.unwrap_or(0)
                )?,
                ScheduleAlgo::Lpt => writeln!(
                    err,
                    "makespan {}; 3*makespan <= 4*OPT guaranteed; makespan/lower_bound = {vs_lb} (lower bound {lb})",
                    schedule.makespan
                )?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            instance,
            allocation,
            alpha,
            limits,
        } => verify(&instance, &allocation, alpha, &limits.into(), out),
        Command::Gen {
            seed,
            count,
            agents,
            chores,
            value_max,
            ido,
            out_dir,
        } => {
            let config = GeneratorConfig {
                seed,
                agents,
                chores,
                value_max,
                ido_only: ido,
            };
            let stream = generate(config)?.take(count);
            match out_dir {
                Some(dir) => {
                    fs::create_dir_all(&dir)?;
                    for (k, inst) in stream.enumerate() {
                        fs::write(
                            dir.join(format!("instance-{k}.json")),
                            to_json(&inst) + "\n",
                        )?;
                    }
                }
                None => {
                    for inst in stream {
                        writeln!(out, "{}", to_json(&inst))?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Fixtures { export, check } => {
            let all = builtin_fixtures();
            let mut failed = false;
            for f in &all {
                writeln!(
                    out,
                    "{}\tagents={}\tchores={}\tscale={}\t{}",
                    f.name,
                    f.instance.num_agents(),
                    f.instance.num_chores(),
                    f.scale,
                    f.description
                )?;
                if let Some(dir) = &export {
                    fs::create_dir_all(dir)?;
                    fs::write(
                        dir.join(format!("{}.json", f.name)),
                        to_json(&f.instance) + "\n",
                    )?;
                }
                if check {
                    for r in f.check(&OracleLimits::default())? {
                        failed |= !r.passed;
                        let mark = if r.passed { "PASS" } else { "FAIL" };
                        writeln!(out, "  {mark} {}: {}", r.check, r.detail)?;
                    }
                }
            }
            Ok(if failed { EXIT_INVARIANT } else { EXIT_OK })
        }
        Command::Bench {
            seed,
            count,
            agents,
            chores,
            value_max,
            output,
        } => {
            let config = BenchConfig {
                generator: GeneratorConfig {
                    seed,
                    agents,
                    chores,
                    value_max,
                    ido_only: false,
                },
                count,
                ..BenchConfig::default()
            };
            let rows = run_bench(&config)?;
            match output {
                Some(path) => write_csv(&rows, fs::File::create(path)?)?,
                None => write_csv(&rows, &mut *out)?,
            }
            let violations = rows.iter().filter(|r| !r.within_bound()).count();
            writeln!(
                err,
                "{} rows, {violations} outside their guarantee",
                rows.len()
            )?;
            Ok(if violations == 0 {
                EXIT_OK
            } else {
                EXIT_INVARIANT
            })
        }
    }
}

fn solve(
    algo: SolveAlgo,
    input: &Path,
    output: Option<&Path>,
    trace: bool,
    limits: &OracleLimits,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let inst: Instance = read_json(input)?;
    let (allocation, steps) = match algo {
        SolveAlgo::Exact119 => {
            let sol = solve_existence_119(&inst, limits)?;
            writeln!(err, "agent\tload\tmms\tratio")?;
            for (agent, (&load, mms)) in
                sol.report.loads.iter().zip(&sol.profile.values).enumerate()
            {
                let ratio = sol.report.ratios[agent].map_or("-".into(), |r| r.to_string());
                writeln!(err, "{agent}\t{load}\t{mms}\t{ratio}")?;
            }
            let max = sol.report.max_ratio().map_or("-".into(), |r| r.to_string());
            writeln!(err, "max ratio {max} (guarantee 11/9)")?;
            (sol.allocation, sol.trace)
        }
        SolveAlgo::Poly54 => {
            let sol = solve_poly_54(&inst)?;
            writeln!(err, "agent\tload\tthreshold\tratio")?;
            for (agent, (&load, s)) in sol.loads.iter().zip(&sol.searches).enumerate() {
                let ratio = Ratio::of(load, s.threshold).map_or("-".into(), |r| r.to_string());
                writeln!(err, "{agent}\t{load}\t{}\t{ratio}", s.threshold)?;
            }
            writeln!(
                err,
                "every load <= 5/4 of its threshold <= 5/4 of its share: {}",
                sol.certified()
            )?;
            (sol.allocation, sol.trace)
        }
    };
    if trace {
        for step in &steps {
            writeln!(err, "{}", to_json(step))?;
        }
    }
    let json = to_json(&allocation) + "\n";
    match output {
        Some(path) => fs::write(path, json)?,
        None => out.write_all(json.as_bytes())?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VerifyOutput {
    loads: Vec<u64>,
    complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    mms: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratios: Option<Vec<Option<Ratio>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_mms: Option<bool>,
}

fn verify(
    instance: &Path,
    allocation: &Path,
    alpha: Option<Ratio>,
    limits: &OracleLimits,
    out: &mut dyn Write,
) -> CmdResult {
    let inst: Instance = read_json(instance)?;
    let alloc: Allocation = read_json(allocation)?;
    let n = inst.num_agents();
    // no thresholds: every load is admitted by an unbounded cap
    let open = ThresholdVector::uniform(Ratio::from_integer(u64::MAX), n);
    let report = verify_allocation(&inst, &alloc, &open)?;
    let mut result = VerifyOutput {
        loads: report.loads,
        complete: report.complete,
        mms: None,
        ratios: None,
        alpha_mms: None,
    };
    let mut ok = report.complete;
    if let (Some(alpha), true) = (alpha, report.complete) {
        let profile = mms_profile(&inst, limits)?;
        let amms = check_amms(&inst, &alloc, &profile, alpha)?;
        ok &= amms.holds;
        result.alpha_mms = Some(amms.holds);
        result.ratios = Some(amms.ratios);
        result.mms = Some(profile.values);
    }
    writeln!(out, "{}", to_json(&result))?;
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
