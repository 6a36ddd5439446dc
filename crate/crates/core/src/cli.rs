//! The `kgrid` command line.
//!
//! Exit codes: 0 solved, verified or ok; 1 usage, input or parse error;
//! 2 proven unsolvable or rejected; 3 stalled, unknown or not unique.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::format::{
    parse_puzzle, parse_solutions, serialize_puzzle, serialize_solution, serialize_solutions,
    verify,
};
use crate::grid::NumberedGrid;
use crate::oracle::{
    enumerate_solutions, generate, min_solvable_k, GenMode, GenSpec, SolutionSet, Symmetry,
};
use crate::render::render_board;
use crate::report::{violation_records, Report};
use crate::screens::screen;
use crate::state::PuzzleState;
use crate::table::count_table;
use crate::tau::{run_tau, TauOutcome, TauStatus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_UNSOLVABLE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

const MAX_TABLE_K: u32 = 200;

#[derive(Parser, Debug)]
#[command(
    name = "kgrid",
    version,
    about = "Numbered k-grid puzzles: screens, propagation and exhaustive search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the syntactic unsolvability checks.
    Screen {
        /// Puzzle file, or `-` for standard input.
        puzzle: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run forced-connection propagation.
    Tau {
        puzzle: PathBuf,
        /// Print every applied step.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// Find a solution and decide whether it is unique.
    Solve {
        puzzle: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Stop the exhaustive search after this many solutions (at least 2
        /// to decide uniqueness).
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
        #[arg(long)]
        json: bool,
    },
    /// List solutions in canonical order.
    Enumerate {
        puzzle: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
    },
    /// Check that every solution in a file solves the puzzle.
    Verify { puzzle: PathBuf, solution: PathBuf },
    /// Print configuration counts for `r` neighbors and k = 1..k-max.
    CountTable {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4))]
        neighbors: u32,
        #[arg(long = "k-max", value_parser = clap::value_parser!(u32).range(1..=MAX_TABLE_K as i64))]
        k_max: u32,
        #[arg(long)]
        csv: bool,
    },
    /// Smallest k admitting a solution on the puzzle's nodes; the puzzle's own
    /// k is ignored.
    MinK {
        puzzle: PathBuf,
        #[arg(long = "k-max", value_parser = clap::value_parser!(u32).range(1..))]
        k_max: u32,
    },
    /// Generate a puzzle.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        width: u32,
        #[arg(long)]
        height: u32,
        #[arg(long)]
        density: f64,
        #[arg(long)]
        k: u32,
        /// Derive magnitudes from a random solution.
        #[arg(long)]
        solvable: bool,
        /// Place nodes invariant under a quarter turn (square lattices only).
        #[arg(long)]
        symmetric: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Tau,
    Brute,
    Auto,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command) {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_USAGE;
            }
            code
        }
        Err(message) => {
            let _ = writeln!(err, "kgrid: {message}");
            EXIT_USAGE
        }
    }
}

fn read_input(path: &Path) -> Result<String, String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("standard input: {e}"))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_puzzle(path: &Path) -> Result<NumberedGrid, String> {
    parse_puzzle(&read_input(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

type Outcome = Result<(String, i32), String>;

fn execute(command: Command) -> Outcome {
    match command {
        Command::Screen { puzzle, json } => cmd_screen(&load_puzzle(&puzzle)?, json),
        Command::Tau {
            puzzle,
            trace,
            json,
        } => cmd_tau(&load_puzzle(&puzzle)?, trace, json),
        Command::Solve {
            puzzle,
            method,
            limit,
            json,
        } => cmd_solve(&load_puzzle(&puzzle)?, method, limit as usize, json),
        Command::Enumerate { puzzle, limit } => {
            cmd_enumerate(&load_puzzle(&puzzle)?, limit as usize)
        }
        Command::Verify { puzzle, solution } => {
            let grid = load_puzzle(&puzzle)?;
            let text = read_input(&solution)?;
            let sols =
                parse_solutions(&text).map_err(|e| format!("{}: {e}", solution.display()))?;
            cmd_verify(&grid, &sols)
        }
        Command::CountTable {
            neighbors,
            k_max,
            csv,
        } => {
            let t = count_table(neighbors, k_max);
            Ok((if csv { t.to_csv() } else { t.to_text() }, EXIT_OK))
        }
        Command::MinK { puzzle, k_max } => {
            let grid = load_puzzle(&puzzle)?;
            Ok(match min_solvable_k(&grid, k_max) {
                Some(k) => (format!("min k: {k}\n"), EXIT_OK),
                None => (
                    format!("no k <= {k_max} admits a solution\n"),
                    EXIT_UNSOLVABLE,
                ),
            })
        }
        Command::Gen {
            seed,
            width,
            height,
            density,
            k,
            solvable,
            symmetric,
        } => {
            let spec = GenSpec {
                seed,
                width,
                height,
                node_density: density,
                k,
                mode: if solvable {
                    GenMode::SolvableByConstruction
                } else {
                    GenMode::Random
                },
                symmetry: if symmetric {
                    Symmetry::QuarterTurn
                } else {
                    Symmetry::None
                },
            };
            let grid = generate(&spec).map_err(|e| e.to_string())?;
            Ok((serialize_puzzle(&grid), EXIT_OK))
        }
    }
}

fn cmd_screen(grid: &NumberedGrid, json: bool) -> Outcome {
    let report = screen(grid);
    let (status, code) = if report.is_unsolvable() {
        ("unsolvable", EXIT_UNSOLVABLE)
    } else {
        ("maybe-solvable", EXIT_OK)
    };
    if json {
        let r = Report {
            violations: violation_records(&report),
            ..Report::new("screen", status)
        };
        return Ok((r.to_json(), code));
    }
    let mut s = format!("verdict: {status}\n");
    for v in &report.violations {
        let _ = writeln!(s, "{} at {}: {}", v.condition.label(), v.witness, v.message);
    }
    Ok((s, code))
}

fn tau_code(status: TauStatus) -> i32 {
    match status {
        TauStatus::Solved => EXIT_OK,
        TauStatus::Unsolvable => EXIT_UNSOLVABLE,
        TauStatus::Stalled => EXIT_UNKNOWN,
    }
}

fn tau_text(out: &TauOutcome, with_trace: bool) -> String {
    let mut s = format!("# status: {}\n", out.status);
    for v in &out.screen.violations {
        let _ = writeln!(
            s,
            "# {} at {}: {}",
            v.condition.label(),
            v.witness,
            v.message
        );
    }
    match &out.reason {
        Some(reason) if !out.screen.is_unsolvable() => {
            let _ = writeln!(s, "# reason: {reason}");
        }
        _ => {}
    }
    if with_trace {
        let _ = writeln!(s, "# trace: {} steps", out.trace.len());
        for (i, step) in out.trace.iter().enumerate() {
            let added: Vec<String> = step
                .added
                .iter()
                .map(|(e, m)| format!("{e} x{m}"))
                .collect();
            let _ = writeln!(
                s,
                "# {:>3}. {} at {} word {}: {}",
                i + 1,
                step.rule,
                step.node,
                step.word,
                added.join(", ")
            );
        }
    }
    for line in render_board(&out.final_state).lines() {
        let _ = writeln!(s, "{}", format!("#   {line}").trim_end());
    }
    s.push_str(&serialize_solution(&out.final_state.connections()));
    s
}

fn cmd_tau(grid: &NumberedGrid, with_trace: bool, json: bool) -> Outcome {
    let out = run_tau(grid);
    let code = tau_code(out.status);
    if json {
        return Ok((Report::from_tau("tau", &out).to_json(), code));
    }
    Ok((tau_text(&out, with_trace), code))
}

fn brute_status(set: &SolutionSet) -> (&'static str, i32) {
    match (set.len(), set.exhausted) {
        (0, true) => ("unsolvable", EXIT_UNSOLVABLE),
        (1, true) => ("solved", EXIT_OK),
        (0, false) => ("unknown", EXIT_UNKNOWN),
        (1, false) => ("solved, uniqueness unknown", EXIT_UNKNOWN),
        _ => ("not unique", EXIT_UNKNOWN),
    }
}

fn cmd_solve(grid: &NumberedGrid, method: Method, limit: usize, json: bool) -> Outcome {
    let tau = (method != Method::Brute).then(|| run_tau(grid));
    if let Some(out) = &tau {
        if method == Method::Tau || out.status != TauStatus::Stalled {
            let code = tau_code(out.status);
            if json {
                return Ok((Report::from_tau("solve", out).to_json(), code));
            }
            let mut s = String::from("# engine: tau\n");
            if out.status == TauStatus::Solved {
                let _ = writeln!(s, "# status: {}", out.status);
                s.push_str(&serialize_solution(&out.final_state.connections()));
            } else {
                s.push_str(&tau_text(out, false));
            }
            return Ok((s, code));
        }
    }
    let set = enumerate_solutions(grid, Some(limit));
    let (status, code) = brute_status(&set);
    let first = set.solutions.first();
    if json {
        let mut r = Report {
            engine: Some("brute".into()),
            violations: violation_records(&screen(grid)),
            ..Report::new("solve", status)
        };
        if tau.is_some() {
            r.reason = Some("propagation stalled".into());
        }
        if let Some(sol) = first {
            r = r.with_connections(sol);
        }
        return Ok((r.to_json(), code));
    }
    let mut s = String::from("# engine: brute\n");
    if tau.is_some() {
        s.push_str("# propagation stalled; searched exhaustively\n");
    }
    let _ = writeln!(s, "# status: {status}");
    if let Some(sol) = first {
        s.push_str(&serialize_solution(sol));
        if set.len() > 1 {
            let _ = writeln!(s, "# {} solutions found within limit {limit}", set.len());
        }
    } else if !set.exhausted {
        let _ = writeln!(s, "# search stopped at limit {limit}");
    }
    Ok((s, code))
}

fn cmd_enumerate(grid: &NumberedGrid, limit: usize) -> Outcome {
    let set = enumerate_solutions(grid, Some(limit));
    let mut s = serialize_solutions(&set.solutions);
    let _ = writeln!(
        s,
        "# {} solution{}, {}",
        set.len(),
        if set.len() == 1 { "" } else { "s" },
        if set.exhausted {
            "search complete"
        } else {
            "limit reached"
        }
    );
    let code = if set.is_empty() {
        EXIT_UNSOLVABLE
    } else {
        EXIT_OK
    };
    Ok((s, code))
}

fn cmd_verify(grid: &NumberedGrid, solutions: &[crate::state::ConnectionMap]) -> Outcome {
    if solutions.is_empty() {
        return Ok(("rejected: no connection records\n".into(), EXIT_UNSOLVABLE));
    }
    let mut s = String::new();
    let mut code = EXIT_OK;
    for (i, sol) in solutions.iter().enumerate() {
        match verify(grid, sol) {
            Ok(()) => {
                let _ = writeln!(s, "solution {}: ok", i + 1);
            }
            Err(why) => {
                let _ = writeln!(s, "solution {}: rejected: {why}", i + 1);
                code = EXIT_UNSOLVABLE;
            }
        }
    }
    if code == EXIT_OK {
        let state = PuzzleState::from_connections(grid.clone(), &solutions[0])
            .expect("verified solution fits");
        s.push_str(&render_board(&state));
    }
    Ok((s, code))
}
