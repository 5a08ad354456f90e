use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

mod commands;

use commands::{Command, Options};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Order {
    Index,
    Lex,
}

/// Verification reports for inverse semigroup actions, their germ groupoids
/// and crossed products. Reports are JSON with sorted keys.
///
/// Exit status: 0 when every assertion holds, 1 when a mathematical
/// assertion fails, 2 on malformed or unsuitable input.
#[derive(Debug, Parser)]
#[command(name = "fellbundle", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// A JSON file, `-` for standard input, or `fixture:NAME`.
    input: String,
    /// Seed for randomised checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance for exact-side comparisons.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Size cap for generated semigroups.
    #[arg(long, default_value_t = fellbundle::json::DEFAULT_SIZE_CAP)]
    cap: usize,
    /// Total order on the semigroup used for normal forms.
    #[arg(long, value_enum, default_value_t = Order::Index)]
    order: Order,
    /// Block multiplicities for `induce`, comma separated.
    #[arg(long, value_delimiter = ',')]
    mult: Option<Vec<usize>>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if !(args.tol.is_finite() && args.tol > 0.0) {
        eprintln!("--tol must be a positive number");
        return ExitCode::from(2);
    }
    let options = Options {
        seed: args.seed,
        tol: args.tol,
        cap: args.cap,
        order: match args.order {
            Order::Index => fellbundle::xprod::SlotOrder::Index,
            Order::Lex => fellbundle::xprod::SlotOrder::Lex,
        },
        mult: args.mult,
    };
    let (status, report) = commands::run_input(args.command, &args.input, &options);
    let text = serde_json::to_string_pretty(&report).expect("reports serialise") + "\n";
    let written = match &args.out {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(status)
}
