//! minderiv: exact computations with polynomial derivation families.
//!
//! Reports are JSON documents (CSV for `example` on request) and are
//! deterministic: the same manifest and flags produce byte-identical bytes.
//! Exit status: 0 on success, 2 for usage and parse problems, 3 for violated
//! preconditions, 4 when a search exhausts its budget without a certificate.
//! Failures print an error document with a machine-readable code to stderr.

mod commands;
mod error;
mod manifest;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;
use report::{render_json, ErrorBody, ErrorDoc, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "minderiv", version, about = "Exact kernels, first integrals, and normal forms of polynomial derivations", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree-bounded kernel basis of the manifest's derivation family.
    Kernel(CommonArgs),
    /// Nonconstant kernel elements of the manifest's derivation family.
    Firstint(CommonArgs),
    /// Smallest certified power combination folding the family into one derivation.
    Minimal(CommonArgs),
    /// Normal form of a truncated derivation; pair mode when task.x2 is set.
    Straighten(CommonArgs),
    /// Classify diagonal combinations at sample points of the parameter plane.
    Example(ExampleArgs),
    /// Evaluate a named kernel statement over a parameter range.
    Verify(VerifyArgs),
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::Kernel(args)
            | Command::Firstint(args)
            | Command::Minimal(args)
            | Command::Straighten(args) => args,
            Command::Example(args) => &args.common,
            Command::Verify(args) => &args.common,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Path to a TOML manifest.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Degree bound; overrides task.degree_bound.
    #[arg(long = "D")]
    degree_bound: Option<u32>,
    /// Truncation order; overrides task.truncation_order.
    #[arg(long = "N")]
    truncation_order: Option<u32>,
    /// Largest exponent the search tries; overrides task.m_max (default 10).
    #[arg(long = "m-max")]
    m_max: Option<u32>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format; csv is available for `example` only.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct ExampleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Sample points, e.g. "(1,1);(2,-3)"; overrides task.points.
    #[arg(long)]
    points: Option<String>,
    /// Also list slope lines p/q with p+q at most this height.
    #[arg(long)]
    height: Option<u32>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which statement to check.
    #[arg(long, value_enum)]
    lemma: Lemma,
    /// Exponent range "a..b" (inclusive) or a single value.
    #[arg(long)]
    m: Option<String>,
    /// Form-degree range "a..b" (inclusive) or a single value.
    #[arg(long)]
    k: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lemma {
    /// Kernel of x1^m d/dx1 + x2^m d/dx2 contains nothing involving x1 or x2.
    #[value(name = "noyau")]
    Noyau,
    /// The relation delta_m(P) + x1 x2^m Q = 0 only has the zero solution.
    #[value(name = "noyau2")]
    Noyau2,
}

fn run(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Kernel(args) => commands::kernel(args),
        Command::Firstint(args) => commands::firstint(args),
        Command::Minimal(args) => commands::minimal(args),
        Command::Straighten(args) => commands::straighten_cmd(args),
        Command::Example(args) => commands::example(args),
        Command::Verify(args) => commands::verify(args),
    }
}

fn main() {
    let cli = Cli::parse();
    let status = match run(&cli.command) {
        Ok(text) => {
            let write_result = match &cli.command.common().out {
                Some(path) => std::fs::write(path, &text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match write_result {
                Ok(()) => 0,
                Err(message) => {
                    eprint!(
                        "{}",
                        render_json(&ErrorDoc {
                            schema_version: SCHEMA_VERSION,
                            error: ErrorBody {
                                code: "io",
                                message,
                            },
                        })
                    );
                    1
                }
            }
        }
        Err(e) => {
            eprint!(
                "{}",
                render_json(&ErrorDoc {
                    schema_version: SCHEMA_VERSION,
                    error: ErrorBody {
                        code: e.code(),
                        message: e.to_string(),
                    },
                })
            );
            e.exit_code()
        }
    };
    std::process::exit(status);
}
