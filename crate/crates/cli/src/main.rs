//! `relhom`: command-line front end.
//!
//! Exit codes: 0 holds / found, 1 fails / not found, 2 inconclusive or
//! budget exhausted, 64 usage, 65 input, 70 internal error.

mod commands;
mod input;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use relhom::budget::with_node_limit;
use relhom::Error;

use report::{Format, Report};

pub const EXIT_HOLDS: u8 = 0;
pub const EXIT_FAILS: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_INPUT: u8 = 65;
pub const EXIT_INTERNAL: u8 = 70;

/// Why a command could not produce a verdict.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Input(String),
    Budget(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Precondition(_) => Failure::Usage(msg),
            Error::Budget(_) | Error::Construction(_) => Failure::Budget(msg),
            Error::Invariant(_) => Failure::Internal(msg),
            Error::Domain(_)
            | Error::SignatureMismatch { .. }
            | Error::Signature(_)
            | Error::Structure(_)
            | Error::Partition(_)
            | Error::Parse { .. } => Failure::Input(msg),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Input(_) => EXIT_INPUT,
            Failure::Budget(_) => EXIT_INCONCLUSIVE,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Budget(m) | Failure::Internal(m) => m,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "relhom", version, about = "Homomorphisms, homogeneity, amalgamation classes and cores of finite relational structures")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest structure accepted as input.
    #[arg(long, global = true, default_value_t = 64)]
    pub max_elements: usize,
    /// Search nodes available to the whole command.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub max_nodes: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Hom,
    Mono,
    Embed,
    Iso,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Hom,
    Iso,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PropArg {
    Hp,
    Jep,
    Ap,
    Hap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LimitModeArg {
    Hap,
    Ap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    /// Reachability by local homomorphisms.
    Local,
    /// Reachability by endomorphisms.
    Endo,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Homomorphism search between two structures.
    #[command(subcommand)]
    Hom(HomCommand),
    /// Homogeneity checks.
    #[command(subcommand)]
    Homog(HomogCommand),
    /// Isomorphism types of induced substructures up to a size.
    Age {
        structure: String,
        #[arg(long)]
        max: usize,
    },
    /// The core of a finite structure, or `core check A`.
    Core(CoreArgs),
    /// Is the structure hom-irreducible in a class?
    Irr {
        structure: String,
        #[arg(long)]
        class: String,
        #[arg(long)]
        bound: usize,
    },
    /// Climb from a tuple to a maximal one in the type order.
    Saturate {
        structure: String,
        /// Comma-separated element names.
        #[arg(long)]
        tuple: String,
    },
    /// Type classes of tuples of a given arity.
    Types {
        structure: String,
        #[arg(long)]
        arity: usize,
        #[arg(long, value_enum, default_value = "local")]
        order: OrderArg,
    },
    /// Expand by one relation per positive existential type.
    Expand {
        structure: String,
        #[arg(long)]
        arity: usize,
        /// Add every up-set of the type order, not only principal ones.
        #[arg(long)]
        all_up_sets: bool,
    },
    /// Class properties.
    #[command(subcommand)]
    Class(ClassCommand),
    /// Does every member of one class map onto a member of the other?
    Project {
        class_a: String,
        class_b: String,
        #[arg(long)]
        size: usize,
    },
    /// Bounded check that H precedes H2.
    Precedes {
        h: String,
        h2: String,
        #[arg(long)]
        size: usize,
    },
    /// Do the two templates have the same CSP up to a size?
    Cspeq {
        a: String,
        b: String,
        #[arg(long)]
        size: usize,
    },
    /// Finite stages of limit constructions.
    #[command(subcommand)]
    Limit(LimitCommand),
    /// Tree of homomorphism classes along a chain.
    Konig {
        /// Structure file whose blocks, in order, form the chain.
        chain: String,
        target: String,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Approximate the core as the limit of the hom-irreducible age members.
    Coreapprox {
        structure: String,
        #[arg(long)]
        steps: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum HomCommand {
    Find {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value = "hom")]
        mode: ModeArg,
        /// Fixed images, e.g. `a=0,b=1`.
        #[arg(long)]
        seed: Option<String>,
    },
    Count {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value = "hom")]
        mode: ModeArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum HomogCommand {
    Check {
        structure: String,
        #[arg(long, value_enum, default_value = "hom")]
        kind: KindArg,
    },
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
pub struct CoreArgs {
    #[command(subcommand)]
    pub check: Option<CoreCommand>,
    #[arg(required = true)]
    pub structure: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum CoreCommand {
    /// Is every endomorphism an embedding?
    Check { structure: String },
}

#[derive(Subcommand, Debug)]
pub enum ClassCommand {
    Check {
        class: String,
        #[arg(long)]
        prop: PropArg,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        amalgam: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum LimitCommand {
    Build {
        class: String,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum)]
        mode: LimitModeArg,
        #[arg(long)]
        seed_bound: usize,
        /// Construction log destination.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    Verify {
        h: String,
        class: String,
        #[arg(long)]
        size: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_HOLDS });
        }
    };
    let (code, report) = match with_node_limit(cli.max_nodes, || commands::run(&cli)) {
        Ok(done) => done,
        Err(f) => {
            eprintln!("relhom: {}", f.message());
            let Failure::Budget(m) = &f else {
                return ExitCode::from(f.code());
            };
            let mut r = Report::new("inconclusive");
            r.field("reason", m);
            (f.code(), r)
        }
    };
    let text = report.render(cli.format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("relhom: {}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
