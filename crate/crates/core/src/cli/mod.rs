//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain or parameter error,
//! 3 selftest failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};

mod config;
mod output;
mod run;

pub use config::{parse_list, parse_number, BackendChoice, Command, Format, PauliRates, RunConfig};
pub use output::{emit_csv, format_sig, render_csv, render_json, CSV_HEADER, SIG_DIGITS};
pub use run::{execute, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_SELFTEST: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "microcluster", version, about = "Photonic microcluster fusion fidelities, exact and numeric")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Microcluster fidelity polynomials in q = 2p - 1 and p_z (alpha = 0, p_x = p_y = p)
    Table1 {
        /// Leaf counts, comma separated [default: 1,2,3,4,5,6]
        #[arg(long)]
        leaves: Option<String>,
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        common: Common,
    },
    /// The binomial-transform integer grid
    Table2 {
        #[arg(long, default_value_t = 5)]
        rows: usize,
        #[arg(long, default_value_t = 5)]
        cols: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Low-order pair fidelity coefficients in alpha and p
    Table3 {
        /// Leaf counts, comma separated [default: every published cell]
        #[arg(long)]
        leaves: Option<String>,
        /// Bonding attempts, comma separated [default: 1..=leaves]
        #[arg(long)]
        attempt: Option<String>,
        #[arg(long, default_value = "survivor-only")]
        policy: String,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form fidelities, checked against simulation
    Formulas {
        /// eq2, eq3 or first_order_equiprobable
        #[arg(long, default_value = "eq2")]
        formula: String,
        #[arg(long, default_value_t = 2)]
        leaves: usize,
        /// Evaluate at this alpha
        #[arg(long, default_value = "0.01")]
        alpha: String,
        /// Evaluate at this p
        #[arg(long, default_value = "0.001")]
        p: String,
        #[command(flatten)]
        common: Common,
    },
    /// Fidelity of two microclusters bonded at a given attempt
    Pairfuse {
        #[arg(long)]
        leaves: usize,
        #[arg(long)]
        attempt: usize,
        #[arg(long, default_value = "0")]
        alpha: String,
        #[command(flatten)]
        rates: RateArgs,
        #[arg(long, default_value = "survivor-only")]
        policy: String,
        #[command(flatten)]
        common: Common,
    },
    /// Pair fidelity over a grid of equiprobable Pauli rates
    Sweep {
        #[arg(long, default_value = "0.01")]
        alpha: String,
        /// start:stop:steps, inclusive
        #[arg(long, default_value = "0:0.05:11")]
        p_grid: String,
        #[arg(long, default_value = "2,3,4,5")]
        leaves: String,
        #[arg(long, default_value = "1,2,3,4")]
        attempts: String,
        #[arg(long, default_value = "survivor-only")]
        policy: String,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank error-placement policies against the published coefficients
    PolicySearch {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite
    Selftest {
        /// Criteria to run, comma separated [default: all]
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// exact or float
    #[arg(long, default_value = "exact")]
    backend: String,
    /// text, csv or json (not every command supports every format)
    #[arg(long, default_value = "text")]
    format: String,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PointArgs {
    /// p_x = p_y = p, for the float backend
    #[arg(long, default_value = "0.01")]
    p: String,
    /// p_z, for the float backend
    #[arg(long, default_value = "0.01")]
    pz: String,
}

#[derive(Args, Debug)]
struct RateArgs {
    /// Equiprobable rate p_x = p_y = p_z = p
    #[arg(long, conflicts_with_all = ["px", "py", "pz"])]
    p: Option<String>,
    #[arg(long)]
    px: Option<String>,
    #[arg(long)]
    py: Option<String>,
    #[arg(long)]
    pz: Option<String>,
}

fn apply_common(cfg: &mut RunConfig, common: Common) -> Result<()> {
    cfg.backend = common.backend.parse()?;
    cfg.format = common.format.parse()?;
    cfg.output = common.out;
    Ok(())
}

fn opt_number(name: &str, v: &Option<String>) -> Result<num_rational::BigRational> {
    match v {
        Some(s) => parse_number(name, s),
        None => Ok(num_traits::Zero::zero()),
    }
}

impl Sub {
    fn into_config(self) -> Result<RunConfig> {
        let cfg = match self {
            Sub::Table1 { leaves, point, common } => {
                let mut c = RunConfig::new(Command::Table1);
                c.leaves = match leaves {
                    Some(s) => parse_list(&s)?,
                    None => (1..=6).collect(),
                };
                c.rates = PauliRates {
                    p_x: parse_number("p", &point.p)?,
                    p_y: parse_number("p", &point.p)?,
                    p_z: parse_number("pz", &point.pz)?,
                };
                apply_common(&mut c, common)?;
                c
            }
            Sub::Table2 { rows, cols, common } => {
                let mut c = RunConfig::new(Command::Table2);
                c.rows = rows;
                c.cols = cols;
                apply_common(&mut c, common)?;
                c
            }
            Sub::Table3 { leaves, attempt, policy, common } => {
                let mut c = RunConfig::new(Command::Table3);
                c.leaves = leaves.as_deref().map(parse_list).transpose()?.unwrap_or_default();
                c.attempts = attempt.as_deref().map(parse_list).transpose()?.unwrap_or_default();
                c.policy = policy.parse()?;
                apply_common(&mut c, common)?;
                c
            }
            Sub::Formulas { formula, leaves, alpha, p, common } => {
                let mut c = RunConfig::new(Command::Formulas);
                c.formula = Some(formula);
                c.leaves = vec![leaves];
                c.alpha = parse_number("alpha", &alpha)?;
                c.rates = PauliRates::equal(parse_number("p", &p)?);
                apply_common(&mut c, common)?;
                c
            }
            Sub::Pairfuse { leaves, attempt, alpha, rates, policy, common } => {
                let mut c = RunConfig::new(Command::Pairfuse);
                c.leaves = vec![leaves];
                c.attempts = vec![attempt];
                c.alpha = parse_number("alpha", &alpha)?;
                c.rates = match rates.p {
                    Some(p) => PauliRates::equal(parse_number("p", &p)?),
                    None => PauliRates {
                        p_x: opt_number("px", &rates.px)?,
                        p_y: opt_number("py", &rates.py)?,
                        p_z: opt_number("pz", &rates.pz)?,
                    },
                };
                c.policy = policy.parse()?;
                apply_common(&mut c, common)?;
                c
            }
            Sub::Sweep { alpha, p_grid, leaves, attempts, policy, format, out } => {
                let mut c = RunConfig::new(Command::Sweep);
                c.alpha = parse_number("alpha", &alpha)?;
                c.grid = p_grid.parse()?;
                c.leaves = parse_list(&leaves)?;
                c.attempts = parse_list(&attempts)?;
                c.policy = policy.parse()?;
                c.backend = BackendChoice::Float;
                c.format = format.parse()?;
                c.output = out;
                c
            }
            Sub::PolicySearch { out } => {
                let mut c = RunConfig::new(Command::PolicySearch);
                c.output = out;
                c
            }
            Sub::Selftest { only, out } => {
                let mut c = RunConfig::new(Command::Selftest);
                c.criteria = only.as_deref().map(parse_list).transpose()?.unwrap_or_default();
                c.output = out;
                c
            }
        };
        Ok(cfg)
    }
}

/// Parses `argv` (program name first) into a validated [`RunConfig`].
pub fn parse_args<I, T>(argv: I) -> std::result::Result<RunConfig, ParseOutcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        let rendered = e.render().to_string();
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ParseOutcome::Info(rendered),
            _ => ParseOutcome::Failed(Error::Usage(rendered)),
        }
    })?;
    let cfg = cli.command.into_config().map_err(ParseOutcome::Failed)?;
    cfg.validate().map_err(ParseOutcome::Failed)?;
    Ok(cfg)
}

/// Why [`parse_args`] produced no config.
#[derive(Debug)]
pub enum ParseOutcome {
    /// Help or version text, for stdout.
    Info(String),
    Failed(Error),
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Usage(_) => EXIT_USAGE,
        _ => EXIT_DOMAIN,
    }
}

/// Runs a command line against the given streams and returns the exit code.
pub fn dispatch_to<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match parse_args(argv) {
        Ok(cfg) => cfg,
        Err(ParseOutcome::Info(text)) => {
            let _ = stdout.write_all(text.as_bytes());
            return EXIT_OK;
        }
        Err(ParseOutcome::Failed(e)) => {
            let code = exit_code(&e);
            let _ = match &e {
                Error::Usage(msg) => writeln!(stderr, "{}", msg.trim_end()),
                _ => writeln!(stderr, "error: {e}"),
            };
            if code == EXIT_USAGE && !matches!(&e, Error::Usage(m) if m.contains("Usage:")) {
                let _ = writeln!(stderr, "\nRun `microcluster --help` for usage.");
            }
            return code;
        }
    };
    let report = match execute(&cfg) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &cfg.output {
        Some(path) => std::fs::write(path, &report.bytes),
        None => stdout.write_all(&report.bytes).and_then(|_| stdout.flush()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {}", Error::Io(e));
        return EXIT_DOMAIN;
    }
    match report.selftest_passed {
        Some(false) => EXIT_SELFTEST,
        _ => EXIT_OK,
    }
}

/// Runs a command line against the process streams.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    dispatch_to(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
