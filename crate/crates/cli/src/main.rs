use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kummerlab::verify::Grid;
use kummerlab::{Error, DEFAULT_PRECISION};

mod commands;

/// Exact arithmetic in Z_p[zeta] and classification of primary units.
///
/// Results are written to standard output as JSON; diagnostics go to standard
/// error. Exit codes: 0 success, 1 property violation, 2 parse or usage error,
/// 3 insufficient precision. KUMMERLAB_THREADS caps worker threads (0 = auto).
#[derive(Parser)]
#[command(name = "kummerlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one element given as an expression in zeta, pi, varpi, p.
    Classify {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        k: u32,
        #[arg(long)]
        element: String,
    },
    /// Dimensions of the unit filtration and of the primar subspace.
    Chain {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        k: u32,
    },
    /// Classifications of 1+p and 1+varpi^(p-2) against their expected values.
    Counterexamples {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        k: u32,
    },
    /// Image of the global units, its intersections, and local root certificates.
    Global {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        k: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample units of Q_p[x]/(x^e + p) and count violations of U_re ∩ N_(re+1) = U_(re+1).
    Cor5 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        k: u32,
    },
    /// Kummer regularity via exact Bernoulli numbers.
    Regular {
        #[arg(long)]
        p: u64,
    },
    /// Run the numbered verification checks.
    Selftest {
        #[arg(long, default_value = "small")]
        grid: Grid,
    },
}

/// Result of a command: the JSON document and whether every property held.
pub struct Outcome {
    pub document: serde_json::Value,
    pub holds: bool,
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        _ if e.is_precision() => 3,
        Error::IntersectionNonTrivial { .. }
        | Error::CertificateImpossible(_)
        | Error::GeneratorNotPrimar(_) => 1,
        _ => 2,
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("KUMMERLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("KUMMERLAB_THREADS must be a nonnegative integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Classify { p, k, element } => commands::classify(p, k, &element),
        Command::Chain { p, k } => commands::chain(p, k),
        Command::Counterexamples { p, k } => commands::counterexamples(p, k),
        Command::Global {
            p,
            k,
            samples,
            seed,
        } => commands::global(p, k, samples, seed),
        Command::Cor5 {
            p,
            e,
            r,
            samples,
            seed,
            k,
        } => commands::cor5(p, e, r, k, samples, seed),
        Command::Regular { p } => commands::regular(p),
        Command::Selftest { grid } => commands::selftest(grid),
    };
    match result {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            let text =
                serde_json::to_string_pretty(&outcome.document).expect("JSON values serialize");
            if writeln!(out, "{text}").is_err() {
                return ExitCode::from(2);
            }
            if outcome.holds {
                ExitCode::SUCCESS
            } else {
                eprintln!("property violated; see the output for details");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
