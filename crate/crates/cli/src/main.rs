//! Command-line front end: JSON in, JSON or DOT out.
//!
//! Exit codes: 0 success (and `check order` when `A ≤# B`), 1 when
//! `check order` finds `A` not below `B`, 2 for malformed input, 3 for
//! precondition violations. Errors go to stderr as `{"error": code, ...}`.

mod commands;
mod hasse;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use input::CliError;

#[derive(Parser)]
#[command(name = "sharp-order", version, about = "Sharp partial order on index-one matrices")]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Relative tolerance for float comparisons.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,

    /// Singular values below this fraction of the largest count as zero.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub rank_tol: Option<f64>,

    /// Worker threads for exhaustive enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Subcommand)]
pub enum Command {
    /// Matrix decompositions.
    Decompose {
        #[command(subcommand)]
        kind: DecomposeKind,
    },
    /// Generalized inverses.
    Inverse {
        #[command(subcommand)]
        kind: InverseKind,
    },
    /// Order predicates.
    Check {
        #[command(subcommand)]
        kind: CheckKind,
    },
    /// Down-sets [O, B] through their projector models.
    Downset {
        #[command(subcommand)]
        kind: DownsetKind,
    },
    /// Constructive witnesses.
    Witness {
        #[command(subcommand)]
        kind: WitnessKind,
    },
    /// Counterexamples.
    Refute {
        #[command(subcommand)]
        kind: RefuteKind,
    },
    /// Meet of two nonsingular 2x2 matrices (exact mode).
    Meet2 {
        #[arg(long)]
        b1: PathBuf,
        #[arg(long)]
        b2: PathBuf,
    },
    /// Idempotent solutions of {BX = XB, X² = X}.
    Equations {
        #[command(subcommand)]
        kind: EquationsKind,
    },
    /// DOT Hasse diagram of the finite skeleton of a down-set.
    Hasse {
        #[arg(long)]
        spec: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Representatives drawn per intermediate rank class.
        #[arg(long, default_value_t = 3)]
        antichain_samples: usize,
    },
    /// Exhaustive ground truth over small exact grids.
    Oracle {
        #[command(subcommand)]
        kind: OracleKind,
    },
}

#[derive(Subcommand)]
pub enum DecomposeKind {
    /// Hartwig-Spindelböck decomposition (float mode).
    Hs {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum InverseKind {
    /// Group inverse; requires index at most one.
    Group {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Moore-Penrose inverse.
    Mp {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum CheckKind {
    /// A ≤# B; exit 0 when it holds, 1 otherwise.
    Order {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum DownsetKind {
    /// Lattice classification from the block structure.
    Classify {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Predecessors of B from the Boolean centre, in bitmask order.
    Boolean {
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        spec: PathBuf,
    },
    /// Seeded projectors commuting with the Jordan form.
    Sample {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Maximal chain from O to B.
    Chain {
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum WitnessKind {
    /// Four projectors showing the down-set is not a lattice.
    Nonlattice {
        #[arg(long)]
        spec: PathBuf,
        /// Samples screened for a strict intermediate between T2 and T3.
        #[arg(long, default_value_t = 500)]
        screen: usize,
    },
}

#[derive(Subcommand)]
pub enum RefuteKind {
    /// Predecessor of I₃ without block-diagonal form.
    Conjecture,
}

#[derive(Subcommand)]
pub enum EquationsKind {
    /// Solution family: all members when finite, seeded samples otherwise.
    Solve {
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Samples listed for infinite families.
        #[arg(long, default_value_t = 3)]
        count: usize,
    },
    /// Number of solutions.
    Count {
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        spec: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
pub enum OracleKind {
    /// Index-one matrices with entries from the grid.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Comma-separated exact values, e.g. -1,0,1/2.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        grid: Vec<String>,
        /// List the matrices, not just the count.
        #[arg(long)]
        list: bool,
    },
    /// Check the 2x2 meet against every common lower bound on the grid.
    Glb {
        #[arg(long)]
        b1: PathBuf,
        #[arg(long)]
        b2: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        grid: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command, &cli.global) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.text.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(out.exit as u8)
        }
        Err(e) => report(&e),
    }
}

fn report(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}
