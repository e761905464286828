mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "wick",
    version,
    about = "Exact Wick-type star products on Kaehler charts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Clone, Debug)]
pub struct Common {
    /// Chart JSON file.
    #[arg(long)]
    pub chart: PathBuf,
    /// Truncation order N in v.
    #[arg(long, default_value_t = 4)]
    pub order: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Clone, Debug, Default)]
pub struct AnsatzArgs {
    /// Numerator degree bound for rational primitives.
    #[arg(long)]
    pub degree: Option<u32>,
    /// Largest denominator exponent tried for rational primitives.
    #[arg(long)]
    pub power_bound: Option<u32>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Product of two expressions.
    Star {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Characterizing form of the chart's product, order by order.
    Karabegov {
        #[command(flatten)]
        common: Common,
    },
    /// Exhaustive certificates for the product.
    Verify {
        #[command(subcommand)]
        which: Verify,
    },
    /// Is the field a derivation of the product.
    Invariance {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        field: PathBuf,
    },
    /// Is pullback by the map an automorphism.
    Automorphism {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        map: PathBuf,
    },
    /// Realize the field as -(1/v) ad(a).
    QuasiInner {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        field: PathBuf,
        /// Coefficient of v^s for s = 0, 1, ... (repeatable). Solved for when absent.
        #[arg(long)]
        candidate: Vec<String>,
        #[command(flatten)]
        ansatz: AnsatzArgs,
    },
    /// Quantum momentum mapping for a Lie algebra action.
    Qmm {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        action: PathBuf,
        #[command(flatten)]
        ansatz: AnsatzArgs,
    },
    /// Is the classical momentum mapping already a quantum Hamiltonian.
    StrongInvariance {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        action: PathBuf,
        #[command(flatten)]
        ansatz: AnsatzArgs,
    },
    /// Berezin-Toeplitz chart, and its momentum mapping when an action is given.
    Bt {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        action: Option<PathBuf>,
        #[command(flatten)]
        ansatz: AnsatzArgs,
    },
}

#[derive(Subcommand)]
pub enum Verify {
    /// Associativity on all monomial triples with exponents up to dmax.
    Assoc {
        #[command(flatten)]
        common: Common,
        /// Exponent bound; defaults to the order.
        #[arg(long)]
        dmax: Option<usize>,
    },
    /// Defining relations and the separation-of-variables property.
    WickType {
        #[command(flatten)]
        common: Common,
    },
    /// Extracted characterizing form equals the chart's.
    Roundtrip {
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (format, outcome) = commands::run(cli.command);
    match outcome {
        Ok(report) => {
            match format {
                Format::Text => print!("{}", report.text()),
                Format::Json => println!("{}", report.json()),
            }
            ExitCode::from(report.status.code())
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
