mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use supbound_core::maxpoly::DEFAULT_SEED;

/// Sup-interpretations for constructor term rewriting systems.
#[derive(Parser, Debug)]
#[command(name = "supbound", version)]
pub struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for sampled points and random terms.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a system and report its signature and orthogonality.
    Check { file: PathBuf },
    /// List the dependency pairs of a system.
    Dp { file: PathBuf },
    /// Check an assignment against a criterion.
    Verify {
        file: PathBuf,
        #[arg(long, short)]
        assignment: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Qi)]
        kind: Kind,
        #[command(flatten)]
        common: CriterionArgs,
    },
    /// Search for an assignment over a bounded grid.
    Synth {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Qi)]
        kind: Kind,
        /// `nat` or `rat:D` (fractions with numerator and denominator at most D).
        #[arg(long, default_value = "nat")]
        domain: String,
        /// Largest number of max branches per defined symbol.
        #[arg(short, default_value_t = 1)]
        k: usize,
        /// Largest coefficient.
        #[arg(short, default_value_t = 2)]
        d: u64,
        #[arg(long, value_enum, default_value_t = Template::Maxplus)]
        template: Template,
        /// Give up after this many seconds.
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        relax_nullary: Option<String>,
    },
    /// Emit the constraint system for an external solver.
    Encode {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Qi)]
        kind: Kind,
        /// Branches per defined symbol.
        #[arg(short, default_value_t = 1)]
        k: usize,
        /// Polynomial degree.
        #[arg(short, default_value_t = 1)]
        d: u32,
        #[arg(long, value_enum, default_value_t = Format::Smt2)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: CriterionArgs,
    },
    /// Check a solver model against the encoded templates.
    CheckModel {
        file: PathBuf,
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Qi)]
        kind: Kind,
        /// Branches per defined symbol; read from the model when absent.
        #[arg(short)]
        k: Option<usize>,
        /// Polynomial degree; read from the model when absent.
        #[arg(short)]
        d: Option<u32>,
        #[command(flatten)]
        common: CriterionArgs,
    },
    /// Measure runtime complexity over basic terms.
    Rc {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_size: usize,
        /// Distinct terms explored per derivational-length search.
        #[arg(long, default_value_t = supbound_core::trs::DEFAULT_DL_BUDGET)]
        budget: usize,
    },
    /// Build a sup-interpretation from a runtime bound and test it.
    Bound {
        file: PathBuf,
        /// `linear:c`, `poly:c,e` or `measured`.
        #[arg(long, default_value = "measured")]
        rc: String,
        /// Largest basic term measured and checked.
        #[arg(long, default_value_t = 8)]
        max_size: usize,
        #[arg(long, default_value_t = supbound_core::trs::DEFAULT_DL_BUDGET)]
        budget: usize,
    },
    /// Normalize a ground term.
    Eval {
        file: PathBuf,
        term: String,
        #[arg(long, default_value_t = supbound_core::trs::DEFAULT_NORMALIZE_STEPS)]
        max_steps: usize,
    },
}

#[derive(Args, Debug)]
pub struct CriterionArgs {
    #[arg(long, value_enum, default_value_t = Mode::Nat)]
    pub pi_mode: Mode,
    /// Allow nullary constructors a constant up to this bound.
    #[arg(long)]
    pub relax_nullary: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Kind {
    Pi,
    Qi,
    Dpi,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Nat,
    Subterm,
    Delta,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Template {
    Maxplus,
    Linear,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Smt2,
}

/// 0 valid or found, 1 invalid or not found, 2 inconclusive or timed out,
/// 3 usage or input error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Code {
    Ok = 0,
    No = 1,
    Unknown = 2,
    Usage = 3,
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("usage error"));
            return ExitCode::from(Code::Usage as u8);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            if cli.json {
                let mut value = out.json;
                value["schema_version"] = 1.into();
                emit(&serde_json::to_string_pretty(&value).expect("serializable"));
            } else if !out.text.is_empty() {
                emit(out.text.trim_end());
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::from(Code::Usage as u8)
        }
    }
}
