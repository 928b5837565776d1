//! `rootval`: command-line front end for the verification library.
//!
//! Exit status: 0 when every checked property holds, 1 on a property
//! violation, 2 on malformed input.

mod commands;
mod json;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use rootval::verify::DEFAULT_SEED;

#[derive(Parser, Debug)]
#[command(name = "rootval", version, about = "Root valuation lattices and Hodge-Newton checks over Q(e)")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Opts,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Seed for every random choice; echoed in the report.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Lattice enumeration window (default 2 for GL_2, 1 otherwise).
    #[arg(long, global = true)]
    pub window: Option<i64>,
    /// Number of random trials or samples.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Cartan type, overriding the input's `type`.
    #[arg(long = "type", global = true)]
    pub ty: Option<String>,
    /// Rank, overriding the input's `rank`.
    #[arg(long, global = true)]
    pub rank: Option<usize>,
    /// Translation bound for apartment representatives.
    #[arg(long, global = true, default_value_t = 3)]
    pub bound: i64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Run with a fault injected (k1, dominance or minors).
    #[arg(long, global = true)]
    pub inject_fault: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Root valuation lattices.
    Rvl {
        #[command(subcommand)]
        op: RvlOp,
    },
    /// Root valuation functions.
    Rvf {
        #[command(subcommand)]
        op: RvfOp,
    },
    /// Newton and Hodge points of matrices.
    Hn {
        #[command(subcommand)]
        op: HnOp,
    },
    /// GL_n: Cartan and Iwasawa invariants, affine Deligne-Lusztig fibers.
    Grp {
        #[command(subcommand)]
        op: GrpOp,
    },
    /// Generalized affine Springer fibers in sl_n.
    Spr {
        #[command(subcommand)]
        op: SprOp,
    },
    /// (G,M)-orthogonal sets.
    Gmo {
        #[command(subcommand)]
        op: GmoOp,
    },
    /// Run a verification suite by name or number, or `all`.
    Verify { suite: String },
}

#[derive(Subcommand, Debug)]
pub enum RvlOp {
    /// Conditions (1), (2) against the normalizer criterion for (r, lambda).
    Check { input: Option<PathBuf> },
    /// The big root valuation lattice of r.
    Big { input: Option<PathBuf> },
}

#[derive(Subcommand, Debug)]
pub enum RvfOp {
    Validate { input: Option<PathBuf> },
    Rm { input: Option<PathBuf> },
}

#[derive(Subcommand, Debug)]
pub enum HnOp {
    Newton { input: Option<PathBuf> },
    Hodge { input: Option<PathBuf> },
    Mazur { input: Option<PathBuf> },
    Decompose { input: Option<PathBuf> },
}

#[derive(Subcommand, Debug)]
pub enum GrpOp {
    Cartan { input: Option<PathBuf> },
    Rb { input: Option<PathBuf> },
    Fiber { input: Option<PathBuf> },
    VerifyHn { input: Option<PathBuf> },
}

#[derive(Subcommand, Debug)]
pub enum SprOp {
    Member { input: Option<PathBuf> },
    Fibers { input: Option<PathBuf> },
    ConjExp { input: Option<PathBuf> },
}

#[derive(Subcommand, Debug)]
pub enum GmoOp {
    Check { input: Option<PathBuf> },
}

/// A report and whether every property in it held.
pub struct Outcome {
    pub ok: bool,
    pub report: Value,
}

/// Malformed input; the message names the offending field.
pub enum Failure {
    Input(String),
}

impl From<json::InputError> for Failure {
    fn from(e: json::InputError) -> Self {
        Failure::Input(e.0)
    }
}

impl From<rootval::Error> for Failure {
    fn from(e: rootval::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

pub fn read_input(path: Option<&PathBuf>) -> Result<Value, Failure> {
    let text = match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {}", p.display(), e)))?
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(e.to_string()))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("malformed JSON: {}", e)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.opts.out.clone();
    match commands::dispatch(&cli) {
        Ok(o) => {
            let mut text = serde_json::to_string_pretty(&o.report).expect("reports serialize");
            text.push('\n');
            let written = match &out {
                Some(p) => std::fs::write(p, &text).map_err(|e| format!("{}: {}", p.display(), e)),
                None => {
                    print!("{}", text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {}", e);
                return ExitCode::from(2);
            }
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {}", m);
            ExitCode::from(2)
        }
    }
}
