//! Command-line front end.
//!
//! Exit statuses: 0 for PASS or NOT-ASSERTED, 1 for FAIL, 2 for input errors,
//! 3 for computation errors.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::error::Error;
use crate::fixedpoint::{catalog, catalog_entries, instance_from_json, instance_to_json, ProblemInstance};
use crate::oracle::character_polynomial;
use crate::reduction::{residue_table, verify_quantization, Verdict};
use crate::report::{render_report, render_residue_table, InstanceSummary, Report, Style};

#[derive(Parser, Debug)]
#[command(name = "rrloc", version, about = "Exact check that quantization commutes with reduction for rank-one actions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute both sides of the identity and the oracle, and compare them.
    Verify(InputArgs),
    /// Print the character of the quantization as a Laurent polynomial.
    Character(InputArgs),
    /// Print the residues of every component's form at every pole.
    Residues(InputArgs),
    /// List catalog entries, or print one as an instance document.
    Catalog {
        name: Option<String>,
        #[arg(long)]
        k: Option<i64>,
    },
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Instance document (JSON).
    #[arg(required_unless_present = "catalog", conflicts_with = "catalog")]
    pub file: Option<PathBuf>,
    /// Use a built-in example instead of a file.
    #[arg(long, value_name = "NAME")]
    pub catalog: Option<String>,
    /// Catalog parameter; for files, the tensor power of the line bundle.
    #[arg(long)]
    pub k: Option<i64>,
    /// Expansion bound for the character (at least the automatic bound).
    #[arg(long, value_name = "INT")]
    pub degree_bound: Option<i64>,
    /// Machine-readable output.
    #[arg(long)]
    pub json: bool,
    /// Also print decimal approximations (marked as such).
    #[arg(long)]
    pub decimal: bool,
}

pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_COMPUTE
    }
}

fn load(args: &InputArgs) -> Result<(String, ProblemInstance), Error> {
    match (&args.file, &args.catalog) {
        (_, Some(name)) => {
            let p = catalog(name, args.k)?;
            let k = args.k.map(|k| format!(" (k = {k})")).unwrap_or_default();
            Ok((format!("catalog {name}{k}"), p))
        }
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
            let p = instance_from_json(&text)?;
            Ok(match args.k {
                Some(k) => (format!("{} (tensor power {k})", path.display()), p.tensor_power(k)),
                None => (path.display().to_string(), p),
            })
        }
        (None, None) => Err(Error::Invalid("no input given".into())),
    }
}

fn check_bound(args: &InputArgs, p: &ProblemInstance) -> Result<i64, Error> {
    let auto = p.degree_bound();
    match args.degree_bound {
        Some(b) if b < auto => Err(Error::Invalid(format!(
            "--degree-bound {b} is below the automatic bound {auto}; it can only be raised"
        ))),
        Some(b) => Ok(b),
        None => Ok(auto),
    }
}

/// Runs a parsed command line, writing the output to `out` and diagnostics to
/// `err`. Returns the exit status.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Error> {
    let io = |e: std::io::Error| Error::Invalid(format!("cannot write output: {e}"));
    match cli.command {
        Command::Verify(args) => {
            let (source, p) = load(&args)?;
            let bound = check_bound(&args, &p)?;
            let start = Instant::now();
            let verification = verify_quantization(&p, Some(bound))?;
            let report = Report {
                instance: InstanceSummary::new(source, &p),
                verification,
                elapsed_us: start.elapsed().as_micros() as u64,
            };
            if args.json {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                writeln!(out, "{text}").map_err(io)?;
            } else {
                write!(out, "{}", render_report(&report, Style { decimal: args.decimal })).map_err(io)?;
            }
            Ok(match report.verification.verdict {
                Verdict::Pass | Verdict::NotAsserted => 0,
                Verdict::Fail => EXIT_FAIL,
            })
        }
        Command::Character(args) => {
            let (_, p) = load(&args)?;
            let bound = check_bound(&args, &p)?;
            let c = character_polynomial(&p, bound)?;
            if args.json {
                let v = json!({
                    "character": c,
                    "degree_bound": bound,
                    "dimension": c.dimension(),
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializes")).map_err(io)?;
            } else {
                writeln!(out, "{c}").map_err(io)?;
            }
            Ok(0)
        }
        Command::Residues(args) => {
            let (_, p) = load(&args)?;
            if let Some(e) = p.validate().errors().next() {
                return Err(Error::Invalid(e.message.clone()));
            }
            let rows = residue_table(&p)?;
            if args.json {
                let v = json!({ "conductor": p.conductor(), "rows": rows });
                writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializes")).map_err(io)?;
            } else {
                write!(
                    out,
                    "{}",
                    render_residue_table(&rows, p.conductor(), Style { decimal: args.decimal })
                )
                .map_err(io)?;
            }
            Ok(0)
        }
        Command::Catalog { name: None, .. } => {
            for e in catalog_entries() {
                writeln!(out, "{:<14} (default k = {})  {}", e.name, e.default_k, e.description).map_err(io)?;
            }
            Ok(0)
        }
        Command::Catalog { name: Some(name), k } => {
            let p = catalog(&name, k)?;
            let doc = instance_to_json(&p)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializes")).map_err(io)?;
            Ok(0)
        }
    }
}

pub fn main() -> i32 {
    let cli = Cli::parse();
    run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
