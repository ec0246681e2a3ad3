use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use chabauty::cli::{self, Command, Options};
use chabauty::error::Error;

/// Exact computations in Chabauty spaces of closed subgroups.
///
/// Reads a JSON descriptor document from stdin (or --in) and writes a JSON
/// result to stdout (or --out). Exit status: 0 on success, 1 on domain
/// errors, 2 on usage and schema errors.
#[derive(Parser)]
#[command(name = "chabauty", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Read the document from this file instead of stdin.
    #[arg(long = "in", global = true, value_name = "FILE")]
    input: Option<PathBuf>,

    /// Write the result to this file instead of stdout.
    #[arg(long = "out", global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    /// Canonicalize subgroup descriptors on load.
    #[arg(long, global = true)]
    canon: bool,

    /// Window level (w-level for Gpk, ball radius for ZxZn and Z2).
    #[arg(long, global = true)]
    level: Option<u32>,

    /// Tolerance for `certify`, as "num/den".
    #[arg(long, global = true)]
    epsilon: Option<String>,

    #[arg(long, global = true)]
    count: Option<usize>,

    /// Number of p-adic digits in Cantor addresses.
    #[arg(long, global = true)]
    digits: Option<usize>,

    /// Modulus M_z of the circle coordinate for `verify-dual`.
    #[arg(long = "z-resolution", global = true)]
    z_resolution: Option<u64>,

    /// Largest accepted window level.
    #[arg(long, env = "CHABAUTY_MAX_LEVEL", default_value_t = cli::DEFAULT_MAX_LEVEL, hide = true)]
    max_level: u32,
}

#[derive(Subcommand)]
enum Cmd {
    /// Canonical form of a subgroup descriptor.
    Canon,
    /// Membership of "element" in the subgroup.
    Member,
    /// Trace of a subgroup of G_{p,k} on the window of --level.
    Window,
    /// Truncated Chabauty distance between the two "subgroups".
    Dist,
    /// Symbolic limit of a "family", with its stage when --level is given.
    Limit,
    /// Convergence certificate or refutation for "prefix" against "candidate".
    Certify,
    /// Orthogonal subgroup on the predual side.
    Dual,
    /// Checks a "dual" descriptor (default: the computed one) in finite quotients.
    VerifyDual,
    /// Splits a unit of Q_p as p^v * zeta^t * gamma^x.
    DecomposeUnit {
        /// "p^v * u0 mod p^m"; read from the document's "unit" when omitted.
        unit: Option<String>,
    },
    /// Topological class of a point.
    Classify,
    /// Chart coordinate of a point, or the point at a "coord".
    Coord,
    /// First --count finite subgroups in the enumeration order.
    Enum,
    /// Finite approximations 1..=--count of a subgroup.
    Approx,
    /// Cantor-Bendixson summary with isolation spot checks.
    CbReport,
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Error> {
    let mut s = String::new();
    match path {
        Some(p) => s = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
        None => {
            std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Io(e.to_string()))?;
        }
    }
    Ok(s)
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let (command, unit) = match args.command {
        Cmd::Canon => (Command::Canon, None),
        Cmd::Member => (Command::Member, None),
        Cmd::Window => (Command::Window, None),
        Cmd::Dist => (Command::Dist, None),
        Cmd::Limit => (Command::Limit, None),
        Cmd::Certify => (Command::Certify, None),
        Cmd::Dual => (Command::Dual, None),
        Cmd::VerifyDual => (Command::VerifyDual, None),
        Cmd::DecomposeUnit { unit } => (Command::DecomposeUnit, unit),
        Cmd::Classify => (Command::Classify, None),
        Cmd::Coord => (Command::Coord, None),
        Cmd::Enum => (Command::Enum, None),
        Cmd::Approx => (Command::Approx, None),
        Cmd::CbReport => (Command::CbReport, None),
    };
    let opts = Options {
        level: args.level,
        epsilon: args.epsilon,
        count: args.count,
        digits: args.digits,
        z_resolution: args.z_resolution,
        canon: args.canon,
        max_level: args.max_level,
        unit: unit.clone(),
    };
    let input = if unit.is_some() { Ok(String::new()) } else { read_input(&args.input) };
    let outcome = match input {
        Ok(text) => cli::execute(command, &opts, &text),
        Err(e) => cli::Outcome { code: cli::exit_code(&e), output: cli::render(&cli::error_json(&e)) },
    };
    let written = match &args.output {
        Some(p) => std::fs::write(p, &outcome.output),
        None => std::io::stdout().write_all(outcome.output.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("chabauty: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.code as u8)
}
