//! The `propdel` command-line tool.
//!
//! Exit codes: 0 for a positive answer (proportional, solution within budget,
//! valid deletion set, command succeeded), 1 for a negative one, 2 for usage,
//! parse or validation errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{PidError, Result};
use crate::format::{parse_formula, parse_graph, parse_instance, render_instance, Instance};
use crate::generators::{from_dominating_set, from_wcs3, random_perturbed_profile, random_profile};
use crate::matching::{find_minimal_obstruction, Outcome};
use crate::mindel::{solve3_with, SolverOptions};
use crate::oracle::{check_solution, solve_bounded, solve_exhaustive, Solution};
use crate::profile::{Item, ItemSet, Profile};
use crate::report::{ResultDocument, Statistics, Status};

const FORMULA_HELP: &str = "Formula files hold an optional `vars <n>` line and an expression \
built from `!x<i>`, `&`, `|` and parentheses, `&` binding tighter than `|`. The expression must \
normalise to a conjunction of disjunctions of conjunctions of negated variables, e.g. \
`(!x1 | !x2 & !x3) & !x2`. A parenthesised conjunction such as `(!x1 & !x2)` at the top \
level is one clause. `#` starts a comment.";

#[derive(Debug, Parser)]
#[command(name = "propdel", version, about = "Proportionality by item deletion")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a proportional allocation exists, or print an obstruction.
    Check { path: PathBuf },
    /// Find a minimum set of items whose deletion allows proportionality.
    Solve(SolveArgs),
    /// Check whether deleting the given items allows proportionality.
    Verify {
        path: PathBuf,
        /// Items to delete.
        items: Vec<u32>,
    },
    /// Write a generated instance file.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Solve seeded random three-agent instances and write CSV statistics.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// `three` for three agents, `bounded` otherwise.
    Auto,
    /// The memoized polynomial algorithm (three agents only).
    Three,
    /// Exhaustive subset enumeration (at most 20 items).
    Brute,
    /// Obstruction-hitting search up to the budget `--k`.
    Bounded,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Three => "three",
            Method::Brute => "brute",
            Method::Bounded => "bounded",
        }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    path: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    /// Budget; overrides the instance's `k` line. Sets the decision exit code.
    #[arg(long)]
    k: Option<usize>,
    /// Disable reuse of equivalent calls in the three-agent solver.
    #[arg(long)]
    no_memo: bool,
    /// Report wall-clock time (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    /// Uniformly random preferences, or perturbed copies of one order with `--swaps`.
    Random {
        #[arg(long, default_value_t = 3)]
        agents: usize,
        #[arg(long)]
        items: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random transpositions applied to a shared base order.
        #[arg(long)]
        swaps: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Instance equivalent to dominating set of size at most k.
    Domset {
        /// Graph file: `p <n> <m>` then `e <u> <v>` lines, vertices 1-based.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Instance equivalent to a weight-k satisfying assignment.
    #[command(after_help = FORMULA_HELP)]
    Wcs3 {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Item counts, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Perturbed instances with this many transpositions per agent instead of
    /// uniform ones.
    #[arg(long)]
    swaps: Option<usize>,
    /// Fill the wall_ms column (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A finished command: text for stdout and the exit code.
struct Output {
    text: String,
    code: i32,
}

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn run(cli: Cli) -> Result<Output> {
    match cli.command {
        Command::Check { path } => check(&path),
        Command::Solve(args) => solve(&args),
        Command::Verify { path, items } => verify(&path, &items),
        Command::Gen(cmd) => generate(cmd),
        Command::Bench(args) => bench(&args),
    }
}

fn io_error(path: &Path, e: std::io::Error) -> PidError {
    PidError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn load(path: &Path) -> Result<Instance> {
    parse_instance(&read(path)?)
}

fn write_or_print(out: Option<&Path>, text: String) -> Result<Output> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| io_error(path, e))?;
            Ok(Output {
                text: String::new(),
                code: 0,
            })
        }
        None => Ok(Output { text, code: 0 }),
    }
}

fn check(path: &Path) -> Result<Output> {
    let profile = load(path)?.profile;
    if profile.n_items() == 0 {
        let doc = ResultDocument::new("check", Status::Proportional, &profile)
            .with_allocation(&profile, &Default::default());
        return Ok(Output {
            text: doc.to_json(),
            code: 0,
        });
    }
    let (doc, code) = match find_minimal_obstruction(&profile)? {
        Outcome::Allocation(a) => (
            ResultDocument::new("check", Status::Proportional, &profile)
                .with_allocation(&profile, &a),
            0,
        ),
        Outcome::Obstruction(cert) => (
            ResultDocument::new("check", Status::Obstructed, &profile)
                .with_certificate(&profile, &cert),
            1,
        ),
    };
    Ok(Output {
        text: doc.to_json(),
        code,
    })
}

fn solve(args: &SolveArgs) -> Result<Output> {
    let Instance { profile, k } = load(&args.path)?;
    let k = args.k.or(k);
    let method = match args.method {
        Method::Auto if profile.n_agents() == 3 => Method::Three,
        Method::Auto => Method::Bounded,
        m => m,
    };
    let started = Instant::now();
    let mut stats = None;
    let solution: Option<Solution> = match method {
        Method::Three => {
            let options = SolverOptions {
                memoize: !args.no_memo,
                ..SolverOptions::default()
            };
            let outcome = solve3_with(&profile, k, options)?;
            stats = Some(Statistics::from(outcome.stats));
            Some(outcome.solution)
        }
        Method::Brute => Some(solve_exhaustive(&profile)?),
        Method::Bounded if args.method == Method::Auto => {
            solve_bounded(&profile, k.unwrap_or(profile.n_items()))
        }
        Method::Bounded => {
            let k = k.ok_or_else(|| {
                PidError::Usage("method `bounded` needs a budget (--k or a `k` line)".into())
            })?;
            solve_bounded(&profile, k)
        }
        Method::Auto => unreachable!("auto is resolved above"),
    };
    if args.timing {
        let ms = started.elapsed().as_secs_f64() * 1e3;
        stats.get_or_insert_with(Statistics::default).wall_ms = Some(ms);
    }

    let mut doc;
    let code;
    match solution {
        Some(s) => {
            let decision = k.map(|k| s.size() <= k);
            doc = ResultDocument::new("solve", Status::Solved, &profile)
                .with_deleted(&s.deleted)
                .with_allocation(&profile.delete_items(&s.deleted)?, &s.allocation);
            doc.min_size = Some(s.size());
            doc.decision = decision;
            code = i32::from(decision == Some(false));
        }
        None => {
            doc = ResultDocument::new("solve", Status::NoSolution, &profile);
            doc.decision = Some(false);
            code = 1;
        }
    }
    doc.method = Some(method.name());
    doc.k = k;
    doc.stats = stats;
    Ok(Output {
        text: doc.to_json(),
        code,
    })
}

fn verify(path: &Path, items: &[u32]) -> Result<Output> {
    let profile = load(path)?.profile;
    let deleted: ItemSet = items.iter().map(|id| Item(*id)).collect();
    let allocation = check_solution(&profile, &deleted)?;
    let (doc, code) = match allocation {
        Some(a) => (
            ResultDocument::new("verify", Status::Valid, &profile)
                .with_deleted(&deleted)
                .with_allocation(&profile.delete_items(&deleted)?, &a),
            0,
        ),
        None => (
            ResultDocument::new("verify", Status::Invalid, &profile).with_deleted(&deleted),
            1,
        ),
    };
    Ok(Output {
        text: doc.to_json(),
        code,
    })
}

fn generate(cmd: GenCommand) -> Result<Output> {
    match cmd {
        GenCommand::Random {
            agents,
            items,
            seed,
            swaps,
            k,
            out,
        } => {
            if agents == 0 {
                return Err(PidError::NoAgents);
            }
            let profile = match swaps {
                Some(swaps) => random_perturbed_profile(agents, items, swaps, seed),
                None => random_profile(agents, items, seed),
            };
            write_or_print(out.as_deref(), render_instance(&profile, k))
        }
        GenCommand::Domset { graph, k, out } => {
            let inst = from_dominating_set(&parse_graph(&read(&graph)?)?, k)?;
            write_or_print(out.as_deref(), render_instance(&inst.profile, Some(inst.k)))
        }
        GenCommand::Wcs3 { formula, k, out } => {
            let inst = from_wcs3(&parse_formula(&read(&formula)?)?, k)?;
            write_or_print(out.as_deref(), render_instance(&inst.profile, Some(inst.k)))
        }
    }
}

/// Seed of the instance for one bench row.
pub fn bench_seed(seed: u64, items: usize, trial: usize) -> u64 {
    seed.wrapping_mul(1_000_003)
        .wrapping_add(items as u64 * 1_000)
        .wrapping_add(trial as u64)
}

fn bench(args: &BenchArgs) -> Result<Output> {
    let mut csv = String::from("items,trial,seed,min_size,memo_entries,recursions,wall_ms\n");
    for &items in &args.sizes {
        for trial in 0..args.trials {
            let seed = bench_seed(args.seed, items, trial);
            let profile: Profile = match args.swaps {
                Some(swaps) => random_perturbed_profile(3, items, swaps, seed),
                None => random_profile(3, items, seed),
            };
            let started = Instant::now();
            let outcome = solve3_with(&profile, None, SolverOptions::default())?;
            let wall = if args.timing {
                format!("{:.3}", started.elapsed().as_secs_f64() * 1e3)
            } else {
                String::new()
            };
            let _ = writeln!(
                csv,
                "{items},{trial},{seed},{},{},{},{wall}",
                outcome.solution.size(),
                outcome.stats.memo_entries,
                outcome.stats.recursions
            );
        }
    }
    write_or_print(args.out.as_deref(), csv)
}
