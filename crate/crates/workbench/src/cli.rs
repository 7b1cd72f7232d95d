//! The `pi` command-line tool.
//!
//! Exit codes: 0 success, 1 verification violations, 2 usage or input
//! errors, 3 exhausted budgets.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pi_core::bounds::{improved_bound, mansour_singh_bound};
use pi_core::generate::{generate_random_mdp, random_policy};
use pi_core::iteration::run_policy_iteration_capped;
use pi_core::mdp::policy_count;
use pi_core::order_regular::{check_order_regular, conjecture_check, fibonacci};
use pi_core::pseudo::{build_supersequence, closed_form_floor, closed_form_length, greedy_subsequence, verify_pseudo};
use pi_core::rational::{format_rational, parse_rational};
use pi_core::{Policy, DEFAULT_ENUMERATION_LIMIT};

use crate::matrix_file::{parse_matrix, write_matrix};
use crate::mdp_file::{parse_mdp, write_mdp};
use crate::search::search_max_rows;
use crate::sweep::{bound_rows, run_sweep, write_csv, StartRule, SweepConfig};
use crate::trace_file::TraceFile;
use crate::verify::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Largest `n` searched without `--long`.
const ORM_SHORT_MAX: usize = 5;

#[derive(Parser, Debug)]
#[command(name = "pi", version, about = "Exact greedy Policy Iteration workbench")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a seeded random MDP.
    Gen(GenArgs),
    /// Run greedy Policy Iteration and record the trace.
    Run(RunArgs),
    /// Check every sequence property of a trace file.
    Verify(VerifyArgs),
    /// Build the canonical pseudo-PI-sequence.
    Pseudo(PseudoArgs),
    /// Print iteration bounds.
    Bound(BoundArgs),
    /// Order-regular matrices.
    Orm {
        #[command(subcommand)]
        command: OrmCommand,
    },
    /// Run PI on a grid of random instances and emit CSV.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Successor states per state-action pair [default: min(n, 3)]
    #[arg(long)]
    support: Option<usize>,
    /// Discount factor as p/q [default: 9/10]
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    mdp: PathBuf,
    /// `zeros`, `random` (from --seed) or a comma-separated action list
    #[arg(long, default_value = "zeros")]
    start: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Iteration cap [default: k^n]
    #[arg(long)]
    cap: Option<u64>,
    /// Trace output; standard output when absent
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    trace: PathBuf,
    /// Recompute values and look for neighbour chains against this MDP
    #[arg(long)]
    mdp: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    enumeration_limit: u64,
}

#[derive(Args, Debug)]
struct PseudoArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    enumeration_limit: u64,
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// States (the largest one with --sweep)
    #[arg(long)]
    n: usize,
    /// Actions (the largest one with --sweep)
    #[arg(long)]
    k: usize,
    /// CSV over 1 ≤ n' ≤ n, 2 ≤ k' ≤ k
    #[arg(long)]
    sweep: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum OrmCommand {
    /// Check a matrix file (one row of 0/1 characters per line).
    Check {
        #[arg(long)]
        file: PathBuf,
    },
    /// Search for the longest order-regular matrix with n columns.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = u64::MAX)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Allow n above 5
        #[arg(long)]
        long: bool,
        /// Write the witness here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StartArg {
    Zeros,
    Random,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, default_value_t = 2)]
    k_min: usize,
    #[arg(long, default_value_t = 3)]
    k_max: usize,
    /// Instances per (n, k)
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    /// First instance seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = StartArg::Zeros)]
    start: StartArg,
    #[arg(long)]
    support: Option<usize>,
    /// Worker threads [default: all cores]
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().lock().write_all(text.as_bytes()).context("writing to standard output"),
    }
}

fn parse_start(text: &str, n: usize, k: usize, seed: u64) -> anyhow::Result<Policy> {
    let policy = match text {
        "zeros" => Policy::zeros(n),
        "random" => random_policy(n, k, seed),
        list => Policy::new(
            list.split(',')
                .map(|a| a.trim().parse::<usize>().with_context(|| format!("bad action {a:?} in --start")))
                .collect::<anyhow::Result<_>>()?,
        ),
    };
    policy.validate(n, k)?;
    Ok(policy)
}

fn gen(args: GenArgs) -> anyhow::Result<i32> {
    let support = args.support.unwrap_or(args.n.min(3));
    let mut mdp = generate_random_mdp(args.n, args.k, args.seed, support)?;
    if let Some(g) = &args.gamma {
        mdp = mdp.with_discount(parse_rational(g)?)?;
    }
    emit(args.out.as_deref(), &write_mdp(&mdp))?;
    if args.out.is_some() {
        println!("digest={}", mdp.digest_hex());
    }
    Ok(EXIT_OK)
}

fn run(args: RunArgs) -> anyhow::Result<i32> {
    let mdp = parse_mdp(&read(&args.mdp)?).with_context(|| format!("parsing {}", args.mdp.display()))?;
    let start = parse_start(&args.start, mdp.states(), mdp.actions(), args.seed)?;
    let cap = args
        .cap
        .unwrap_or_else(|| policy_count(mdp.states(), mdp.actions()).min(u64::MAX as u128) as u64);
    let trace = run_policy_iteration_capped(&mdp, &start, cap)?;
    emit(args.trace.as_deref(), &TraceFile::from_trace(&trace).to_text())?;
    if args.trace.is_some() {
        let last = trace.steps.last().expect("a trace has a final step");
        let value: Vec<String> = last.value.values().iter().map(format_rational).collect();
        println!("length={} final={} value=[{}]", trace.len(), last.policy, value.join(","));
    }
    Ok(EXIT_OK)
}

fn verify_cmd(args: VerifyArgs) -> anyhow::Result<i32> {
    let file = TraceFile::parse(&read(&args.trace)?).with_context(|| format!("parsing {}", args.trace.display()))?;
    let mdp = match &args.mdp {
        Some(p) => Some(parse_mdp(&read(p)?).with_context(|| format!("parsing {}", p.display()))?),
        None => None,
    };
    let suite = verify(&file, mdp.as_ref(), args.enumeration_limit)?;
    let mut out = io::stdout().lock();
    let mut total = 0;
    for (name, report) in &suite {
        if report.ok() {
            writeln!(out, "{name}: ok")?;
        } else {
            writeln!(out, "{name}: {} violation(s)", report.violations.len())?;
            for v in &report.violations {
                writeln!(out, "  {v}")?;
            }
        }
        total += report.violations.len();
    }
    if total == 0 {
        writeln!(out, "ok")?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "violations={total}")?;
        Ok(EXIT_VIOLATIONS)
    }
}

fn pseudo(args: PseudoArgs) -> anyhow::Result<i32> {
    let p = greedy_subsequence(build_supersequence(args.n, args.k, args.enumeration_limit)?)?;
    let report = verify_pseudo(&p);
    if let Some(path) = &args.out {
        emit(Some(path), &TraceFile::from_pseudo(&p).to_text())?;
    }
    println!(
        "supersequence={} subsequence={} closed_form={} floor={}",
        p.supersequence.len(),
        p.len(),
        format_rational(&closed_form_length(args.n, args.k)?),
        closed_form_floor(args.n, args.k)?
    );
    for v in &report.violations {
        println!("  {v}");
    }
    println!("{}", if report.ok() { "ok" } else { "violations" });
    Ok(if report.ok() { EXIT_OK } else { EXIT_VIOLATIONS })
}

fn bound(args: BoundArgs) -> anyhow::Result<i32> {
    if args.sweep {
        let rows = bound_rows(args.n, args.k)?;
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf)?;
        emit(args.out.as_deref(), &String::from_utf8(buf)?)?;
        return Ok(EXIT_OK);
    }
    let b = improved_bound(args.n, args.k)?;
    let ms = mansour_singh_bound(args.n, args.k)?;
    let rows = [
        ("n", b.n.to_string()),
        ("k", b.k.to_string()),
        ("f(n)", b.f_n.to_string()),
        ("small_set_count_bound", b.small_set_count_bound.to_string()),
        ("large_set_count_bound", b.large_set_count_bound.to_string()),
        ("total_bound", b.total_bound.to_string()),
        ("fallback_used", b.fallback_used.to_string()),
        ("total·n/k^n", b.normalized.to_string()),
        ("mansour_singh_bound", format_rational(&ms)),
        ("policy_count", policy_count(args.n, args.k).to_string()),
    ];
    let text: String = rows.iter().map(|(name, v)| format!("{name:<24}{v}\n")).collect();
    emit(args.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn orm(command: OrmCommand) -> anyhow::Result<i32> {
    match command {
        OrmCommand::Check { file } => {
            let m = parse_matrix(&read(&file)?).with_context(|| format!("parsing {}", file.display()))?;
            let report = check_order_regular(&m);
            println!("rows={} columns={}", m.row_count(), m.columns());
            for v in &report.violations {
                println!("  {v}");
            }
            println!("{}", if report.ok() { "ok" } else { "violations" });
            Ok(if report.ok() { EXIT_OK } else { EXIT_VIOLATIONS })
        }
        OrmCommand::Search { n, budget, workers, long, out } => {
            if n > ORM_SHORT_MAX && !long {
                bail!("searching n = {n} takes long; pass --long to run it");
            }
            let r = search_max_rows(n, budget, workers)?;
            println!("max_rows={} witness={}", r.max_rows, r.witness.compact());
            println!("nodes_explored={} exhausted={}", r.nodes_explored, r.exhausted);
            if r.exhausted {
                println!("fibonacci(n+2)={} match={}", fibonacci(n + 2)?, conjecture_check(n, &r)?);
            }
            if let Some(path) = &out {
                emit(Some(path), &write_matrix(&r.witness))?;
            }
            Ok(if r.exhausted { EXIT_OK } else { EXIT_BUDGET })
        }
    }
}

fn sweep(args: SweepArgs) -> anyhow::Result<i32> {
    let config = SweepConfig {
        n_min: args.n_min,
        n_max: args.n_max,
        k_min: args.k_min,
        k_max: args.k_max,
        seeds: args.seeds,
        seed_base: args.seed,
        start: match args.start {
            StartArg::Zeros => StartRule::Zeros,
            StartArg::Random => StartRule::Random,
        },
        support: args.support,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = args.workers {
        builder = builder.num_threads(w);
    }
    let rows = builder.build()?.install(|| run_sweep(&config))?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    emit(args.out.as_deref(), &String::from_utf8(buf)?)?;
    Ok(EXIT_OK)
}

fn exit_code_for(e: &anyhow::Error) -> i32 {
    for cause in e.chain() {
        let core = cause
            .downcast_ref::<pi_core::Error>()
            .or_else(|| match cause.downcast_ref::<crate::FormatError>() {
                Some(crate::FormatError::Core(c)) => Some(c),
                _ => None,
            });
        if let Some(pi_core::Error::BudgetExceeded { .. } | pi_core::Error::IterationCapExceeded(_)) = core {
            return EXIT_BUDGET;
        }
    }
    EXIT_USAGE
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Run(a) => run(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Pseudo(a) => pseudo(a),
        Command::Bound(a) => bound(a),
        Command::Orm { command } => orm(command),
        Command::Sweep(a) => sweep(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code_for(&e)
        }
    }
}
