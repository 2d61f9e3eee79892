//! The `limitgame` command line: argument parsing and dispatch.
//!
//! Exit status is 0 on success, 1 for bad input or usage, 2 when the solver
//! breaks one of its own invariants (including a failed `verify`).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use limitgame::gen::{gen_random_instance, GenParams};
use limitgame::graph::Lasso;
use limitgame::oracle::{eval_limit_value, eval_reach_value};
use limitgame::product::build_product;
use limitgame::report::{solve, solve_reach};
use limitgame::text::{parse_arena, parse_dfa, write_arena, write_dfa};
use limitgame::verify::{run_suite, Criterion};
use limitgame::{export_product_dot, Arena, Dfa, Error, GameGraph};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_INTERNAL: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "limitgame", version, about = "Solve weighted limit games over DFA specifications")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Inputs {
    /// Arena file
    #[arg(long)]
    arena: PathBuf,
    /// DFA file
    #[arg(long)]
    dfa: PathBuf,
}

#[derive(Args, Debug)]
struct Bounds {
    #[arg(long, default_value_t = 6)]
    max_vertices: usize,
    #[arg(long, default_value_t = 4)]
    max_states: usize,
    #[arg(long, default_value_t = 3)]
    max_out_degree: usize,
    #[arg(long, default_value_t = 5)]
    max_weight: u64,
    #[arg(long, default_value_t = 0.5)]
    accepting_fraction: f64,
}

impl Bounds {
    fn params(&self, seed: u64) -> GenParams {
        GenParams {
            max_vertices: self.max_vertices,
            max_dfa_states: self.max_states,
            max_out_degree: self.max_out_degree,
            max_weight: self.max_weight,
            accepting_fraction: self.accepting_fraction,
            seed,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Values, winning regions and optimal strategies of the limit game
    Solve {
        #[command(flatten)]
        inputs: Inputs,
        /// Only report this vertex
        #[arg(long)]
        vertex: Option<String>,
        /// Include strategy tables
        #[arg(long)]
        strategies: bool,
        #[arg(long)]
        json: bool,
        /// Write the product arena with Player 0's strategy as DOT
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Values and positional strategies of the one-shot reachability game
    SolveReach {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        json: bool,
    },
    /// Value of the play stem·cycle^ω
    Eval {
        #[command(flatten)]
        inputs: Inputs,
        /// Comma-separated vertex ids, may be empty
        #[arg(long, default_value = "")]
        stem: String,
        /// Comma-separated vertex ids
        #[arg(long)]
        cycle: String,
        /// Weight of the shortest accepted prefix instead of the limit value
        #[arg(long)]
        reach: bool,
    },
    /// Cross-check the solver against the oracles on random instances
    Verify {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Write a random instance
    Gen {
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long)]
        out_arena: PathBuf,
        #[arg(long)]
        out_dfa: PathBuf,
    },
}

/// A failure with the exit status it maps to.
struct Failure {
    code: u8,
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
        Failure {
            code: if e.is_internal() { EXIT_INTERNAL } else { EXIT_INPUT },
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn located(path: &Path, e: Error) -> Failure {
    let f = Failure::from(e);
    Failure {
        message: format!("{}: {}", path.display(), f.message),
        ..f
    }
}

fn load(inputs: &Inputs) -> Result<(Arena, Dfa), Failure> {
    let arena = parse_arena(&read(&inputs.arena)?).map_err(|e| located(&inputs.arena, e))?;
    let dfa = parse_dfa(&read(&inputs.dfa)?).map_err(|e| located(&inputs.dfa, e))?;
    Ok((arena, dfa))
}

fn ids(list: &str) -> Vec<&str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn io_err(e: std::io::Error) -> Failure {
    Failure::input(format!("output error: {e}"))
}

fn run(cli: Cli, out: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Solve {
            inputs,
            vertex,
            strategies,
            json,
            dot,
        } => {
            let (a, d) = load(&inputs)?;
            let outcome = solve(&a, &d, strategies)?;
            let mut report = outcome.report;
            if let Some(id) = vertex {
                a.require_index(&id)?;
                report.values.retain(|r| r.vertex == id);
            }
            if let Some(path) = dot {
                write(&path, &export_product_dot(&outcome.product, Some(&outcome.sigma)))?;
            }
            if json {
                writeln!(out, "{}", report.to_json()).map_err(io_err)?;
            } else {
                write!(out, "{report}").map_err(io_err)?;
            }
        }
        Command::SolveReach { inputs, json } => {
            let (a, d) = load(&inputs)?;
            let report = solve_reach(&a, &d)?;
            if json {
                writeln!(out, "{}", report.to_json()).map_err(io_err)?;
            } else {
                write!(out, "{report}").map_err(io_err)?;
            }
        }
        Command::Eval {
            inputs,
            stem,
            cycle,
            reach,
        } => {
            let (a, d) = load(&inputs)?;
            let stem = a.resolve_ids(&ids(&stem))?;
            let cycle = a.resolve_ids(&ids(&cycle))?;
            if cycle.is_empty() {
                return Err(Failure::input("--cycle must name at least one vertex"));
            }
            let p = build_product(&a, &d)?;
            let lifted = p.lift_lasso(&Lasso::new(stem, cycle))?;
            let value = if reach {
                eval_reach_value(&p, &lifted)?
            } else {
                eval_limit_value(&p, &lifted)?
            };
            writeln!(out, "{value}").map_err(io_err)?;
        }
        Command::Verify { trials, seed, bounds } => {
            let summary = run_suite(&bounds.params(seed), trials)?;
            for c in Criterion::ALL {
                let status = if summary.passed(c) { "pass" } else { "FAIL" };
                writeln!(out, "{status} {c}").map_err(io_err)?;
            }
            writeln!(out, "{}/{} oracle matches", summary.matched, summary.instances).map_err(io_err)?;
            if !summary.all_passed() {
                let mut message = String::from("verification failed:");
                for (c, details) in &summary.findings {
                    for d in details.iter().take(5) {
                        message.push_str(&format!("\n  [{}] {d}", c.number()));
                    }
                }
                return Err(Failure {
                    code: EXIT_INTERNAL,
                    message,
                });
            }
        }
        Command::Gen {
            seed,
            bounds,
            out_arena,
            out_dfa,
        } => {
            let (a, d) = gen_random_instance(&bounds.params(seed))?;
            write(&out_arena, &write_arena(&a))?;
            write(&out_dfa, &write_dfa(&d))?;
            writeln!(
                out,
                "wrote {} ({} vertices) and {} ({} states)",
                out_arena.display(),
                a.num_vertices(),
                out_dfa.display(),
                d.num_states()
            )
            .map_err(io_err)?;
        }
    }
    Ok(())
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit status.
pub fn run_command<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match run(cli, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
