use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{parse_rational, GaussianRational};
use crate::error::{Error, Result};
use crate::optics::{ErrorPlacementPolicy, NoiseModel};
use crate::protocols::{Formula, PGrid, PairFusionSpec, MAX_EXPANSION_LEAVES};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Table1,
    Table2,
    Table3,
    Formulas,
    Pairfuse,
    Sweep,
    PolicySearch,
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Table1 => "table1",
            Command::Table2 => "table2",
            Command::Table3 => "table3",
            Command::Formulas => "formulas",
            Command::Pairfuse => "pairfuse",
            Command::Sweep => "sweep",
            Command::PolicySearch => "policy-search",
            Command::Selftest => "selftest",
        }
    }

    fn formats(self) -> &'static [Format] {
        match self {
            Command::Sweep => &[Format::Text, Format::Csv, Format::Json],
            Command::Table2 | Command::Pairfuse => &[Format::Text, Format::Json],
            _ => &[Format::Text],
        }
    }
}

/// Scalar arithmetic: exact Gaussian rationals and polynomials, or `f64`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BackendChoice {
    #[default]
    Exact,
    Float,
}

impl FromStr for BackendChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(BackendChoice::Exact),
            "float" => Ok(BackendChoice::Float),
            _ => Err(Error::Usage(format!("unknown backend `{s}` (expected exact or float)"))),
        }
    }
}

impl fmt::Display for BackendChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendChoice::Exact => "exact",
            BackendChoice::Float => "float",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Usage(format!("unknown format `{s}` (expected text, csv or json)"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Pauli rates as given on the command line, kept exact.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliRates {
    pub p_x: BigRational,
    pub p_y: BigRational,
    pub p_z: BigRational,
}

impl PauliRates {
    pub fn zero() -> Self {
        Self::equal(BigRational::zero())
    }

    pub fn equal(p: BigRational) -> Self {
        Self { p_x: p.clone(), p_y: p.clone(), p_z: p }
    }

    pub fn is_equiprobable(&self) -> bool {
        self.p_x == self.p_y && self.p_y == self.p_z
    }
}

/// A fully parsed command line. Everything numeric is validated by
/// [`RunConfig::validate`] before any computation starts.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Leaf counts: one for `pairfuse`, a row set for `table1`, a series set
    /// for `sweep`, empty meaning "all" for `table3`.
    pub leaves: Vec<usize>,
    pub attempts: Vec<usize>,
    pub alpha: BigRational,
    pub rates: PauliRates,
    pub policy: ErrorPlacementPolicy,
    pub backend: BackendChoice,
    pub grid: PGrid,
    pub rows: usize,
    pub cols: usize,
    pub formula: Option<String>,
    pub criteria: Vec<usize>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        let zero = BigRational::zero;
        Self {
            command,
            leaves: Vec::new(),
            attempts: Vec::new(),
            alpha: zero(),
            rates: PauliRates::zero(),
            policy: ErrorPlacementPolicy::default(),
            backend: BackendChoice::Exact,
            grid: PGrid::new(zero(), zero(), 1).expect("one step"),
            rows: 5,
            cols: 5,
            formula: None,
            criteria: Vec::new(),
            output: None,
            format: Format::Text,
        }
    }

    pub fn noise(&self) -> NoiseModel<GaussianRational> {
        let g = |x: &BigRational| GaussianRational::real(x.clone());
        NoiseModel::new(g(&self.alpha), g(&self.rates.p_x), g(&self.rates.p_y), g(&self.rates.p_z))
    }

    /// The single `(leaves, attempt)` cell of `pairfuse`.
    pub fn cell(&self) -> (usize, usize) {
        (self.leaves.first().copied().unwrap_or(1), self.attempts.first().copied().unwrap_or(1))
    }

    pub fn validate(&self) -> Result<()> {
        if !self.command.formats().contains(&self.format) {
            return Err(Error::Usage(format!("{} does not support --format {}", self.command.name(), self.format)));
        }
        if self.leaves.contains(&0) {
            return Err(Error::Domain("a microcluster needs at least one leaf".into()));
        }
        if self.attempts.contains(&0) {
            return Err(Error::Domain("attempts are numbered from 1".into()));
        }
        self.noise().validate()?;
        match self.command {
            Command::Table2 if self.rows == 0 || self.cols == 0 => {
                Err(Error::Domain("table needs at least one row and one column".into()))
            }
            Command::Table3 => {
                if self.backend == BackendChoice::Float {
                    return Err(Error::Usage("table3 coefficients need the exact backend".into()));
                }
                if let Some(&n) = self.leaves.iter().find(|&&n| n > MAX_EXPANSION_LEAVES) {
                    return Err(Error::Capacity(format!(
                        "series expansion is limited to {MAX_EXPANSION_LEAVES} leaves, got {n}"
                    )));
                }
                for &n in &self.leaves {
                    for &k in &self.attempts {
                        PairFusionSpec::new(n, k, NoiseModel::<GaussianRational>::ideal(), self.policy)?;
                    }
                }
                Ok(())
            }
            Command::Formulas => {
                let leaves = self.leaves.first().copied().unwrap_or(2);
                Formula::parse(self.formula.as_deref().unwrap_or("eq2"), leaves).map(|_| ())
            }
            Command::Pairfuse => {
                let (n, k) = self.cell();
                PairFusionSpec::new(n, k, self.noise(), self.policy).map(|_| ())
            }
            Command::Sweep => {
                if self.leaves.is_empty() || self.attempts.is_empty() {
                    return Err(Error::Usage("sweep needs at least one leaf count and one attempt".into()));
                }
                let third = BigRational::new(1.into(), 3.into());
                for p in self.grid.exact_points() {
                    if p < BigRational::zero() || p > third {
                        return Err(Error::Domain(format!(
                            "grid point p = {p} is outside [0, 1/3] (p_x = p_y = p_z = p)"
                        )));
                    }
                }
                Ok(())
            }
            Command::Selftest => {
                let count = crate::acceptance::CRITERIA;
                match self.criteria.iter().find(|&&c| c == 0 || c > count) {
                    Some(c) => Err(Error::Usage(format!("criteria are numbered 1..={count}, got {c}"))),
                    None => Ok(()),
                }
            }
            _ => Ok(()),
        }
    }
}

/// Comma-separated positive integers.
pub fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| Error::Usage(format!("bad integer `{x}` in list `{s}`"))))
        .collect()
}

pub fn parse_number(name: &str, s: &str) -> Result<BigRational> {
    parse_rational(s).map_err(|_| Error::Usage(format!("--{name}: cannot parse number `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let mut c = RunConfig::new(Command::Pairfuse);
        c.leaves = vec![2];
        c.attempts = vec![3];
        assert!(matches!(c.validate(), Err(Error::AttemptExceedsLeaves { .. })));
        c.attempts = vec![2];
        assert!(c.validate().is_ok());
        c.alpha = parse_rational("0.6").unwrap();
        assert!(matches!(c.validate(), Err(Error::Domain(_))));
        c.alpha = BigRational::zero();
        c.rates = PauliRates::equal(parse_rational("0.4").unwrap());
        assert!(matches!(c.validate(), Err(Error::Domain(_))));
        c.rates = PauliRates::zero();
        c.format = Format::Csv;
        assert!(matches!(c.validate(), Err(Error::Usage(_))));
    }

    #[test]
    fn sweep_grid_range() {
        let mut c = RunConfig::new(Command::Sweep);
        c.leaves = vec![2];
        c.attempts = vec![1];
        c.grid = "0:0.5:3".parse().unwrap();
        assert!(matches!(c.validate(), Err(Error::Domain(_))));
        c.grid = "0:0.05:11".parse().unwrap();
        assert!(c.validate().is_ok());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("2, 3,4").unwrap(), vec![2, 3, 4]);
        assert!(parse_list("2,x").is_err());
        assert!(BackendChoice::from_str("gpu").is_err());
    }
}
