use std::fmt::Write as _;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::acceptance;
use crate::algebra::{Caps, GaussianRational, Monomial, Point, Variable};
use crate::error::{Error, Result};
use crate::optics::NoiseModel;
use crate::protocols::{
    closed_form_table1, coefficient_expansion, fuse_pair, in_terms_of_q, microcluster_fidelity, policy_search,
    reference_cells, reference_formula, sweep_records, worker_pool, binomial_transform_table, expansion_monomials,
    Formula, PairFusionSpec, Settings,
};

use super::config::{BackendChoice, Command, Format, RunConfig};
use super::output::{format_sig, render_csv, render_json, SIG_DIGITS};

/// Rendered command output.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub bytes: Vec<u8>,
    /// `Some` for `selftest` only.
    pub selftest_passed: Option<bool>,
}

impl Report {
    fn text(s: String) -> Self {
        Self { bytes: s.into_bytes(), selftest_passed: None }
    }
}

fn f64_of(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn g(x: &BigRational) -> GaussianRational {
    GaussianRational::real(x.clone())
}

fn sig(x: f64) -> String {
    format_sig(x, SIG_DIGITS)
}

/// Runs a validated config. Output goes into the report; the caller
/// decides where it lands.
pub fn execute(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    match cfg.command {
        Command::Table1 => table1(cfg),
        Command::Table2 => table2(cfg),
        Command::Table3 => table3(cfg),
        Command::Formulas => formulas(cfg),
        Command::Pairfuse => pairfuse(cfg),
        Command::Sweep => sweep(cfg),
        Command::PolicySearch => Ok(Report::text(policy_search(&Settings::dense())?.to_string())),
        Command::Selftest => {
            let results = acceptance::run(&cfg.criteria);
            let mut out = String::new();
            for r in &results {
                let _ = writeln!(out, "{r}");
            }
            let passed = results.iter().all(|r| r.passed);
            let _ = writeln!(
                out,
                "{}/{} criteria passed",
                results.iter().filter(|r| r.passed).count(),
                results.len()
            );
            Ok(Report { bytes: out.into_bytes(), selftest_passed: Some(passed) })
        }
    }
}

fn table1(cfg: &RunConfig) -> Result<Report> {
    let mut out = String::new();
    match cfg.backend {
        BackendChoice::Exact => {
            let _ = writeln!(out, "# microcluster fidelity, alpha = 0, p_x = p_y = p, q = 2p - 1");
            for &n in &cfg.leaves {
                let f = microcluster_fidelity(n, &NoiseModel::symbolic_xy_symmetric(), &Settings::branches())?;
                let poly = f
                    .as_polynomial()
                    .ok_or_else(|| Error::Domain(format!("fidelity for n = {n} is not a polynomial: {f}")))?;
                let row = in_terms_of_q(&poly);
                let check = if row == closed_form_table1(n)? { "matches closed form" } else { "DIFFERS from closed form" };
                let _ = writeln!(out, "n={n}: {row}  [{check}]");
            }
        }
        BackendChoice::Float => {
            let (p, pz) = (f64_of(&cfg.rates.p_x), f64_of(&cfg.rates.p_z));
            let c = |x| Complex64::new(x, 0.0);
            let noise = NoiseModel::new(c(0.0), c(p), c(p), c(pz));
            let point = Point::new().with(Variable::Q, 2.0 * p - 1.0).with(Variable::Pz, pz);
            let _ = writeln!(out, "# microcluster fidelity, alpha = 0, p_x = p_y = {}, p_z = {}", sig(p), sig(pz));
            for &n in &cfg.leaves {
                let f = microcluster_fidelity(n, &noise, &Settings::dense())?;
                let closed = closed_form_table1(n)?.eval_f64(&point)?.re;
                let _ = writeln!(out, "n={n}: {}  closed form {}  difference {:.1e}", sig(f), sig(closed), (f - closed).abs());
            }
        }
    }
    Ok(Report::text(out))
}

fn table2(cfg: &RunConfig) -> Result<Report> {
    let grid = binomial_transform_table(cfg.rows, cfg.cols)?;
    if cfg.format == Format::Json {
        let rows: Vec<Vec<serde_json::Value>> = grid
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| match x.to_u64() {
                        Some(v) => serde_json::Value::from(v),
                        None => serde_json::Value::from(x.to_string()),
                    })
                    .collect()
            })
            .collect();
        return Ok(Report { bytes: render_json(&rows)?, selftest_passed: None });
    }
    let cells: Vec<Vec<String>> = grid.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    Ok(Report::text(out))
}

fn table3(cfg: &RunConfig) -> Result<Report> {
    let refs = reference_cells();
    let cells: Vec<(usize, usize)> = if cfg.leaves.is_empty() {
        refs.iter().map(|(c, _)| *c).filter(|(_, k)| cfg.attempts.is_empty() || cfg.attempts.contains(k)).collect()
    } else {
        cfg.leaves
            .iter()
            .flat_map(|&n| {
                let ks: Vec<usize> = if cfg.attempts.is_empty() { (1..=n).collect() } else { cfg.attempts.clone() };
                ks.into_iter().map(move |k| (n, k))
            })
            .collect()
    };
    let settings = Settings::dense();
    let reports = worker_pool()?.install(|| {
        cells
            .par_iter()
            .map(|&(n, k)| coefficient_expansion(n, k, cfg.policy, &settings))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut out = String::new();
    let _ = writeln!(out, "# pair fidelity, p_x = p_y = p_z = p, first order in p, second order in alpha");
    let _ = writeln!(out, "# policy: {}", cfg.policy);
    let monomials = expansion_monomials();
    for r in &reports {
        let _ = writeln!(out, "({}, {}): {}", r.leaves, r.attempt, r.polynomial());
        match refs.iter().find(|(c, _)| *c == (r.leaves, r.attempt)) {
            Some((_, reference)) => {
                let hits = monomials.iter().filter(|m| r.coeff(m) == reference.coeff(m)).count();
                let _ = writeln!(out, "  published: {reference}");
                let _ = writeln!(out, "  matching coefficients: {hits}/{}", monomials.len());
            }
            None => {
                let _ = writeln!(out, "  published: none");
            }
        }
    }
    Ok(Report::text(out))
}

fn formulas(cfg: &RunConfig) -> Result<Report> {
    let leaves = cfg.leaves.first().copied().unwrap_or(2);
    let formula = Formula::parse(cfg.formula.as_deref().unwrap_or("eq2"), leaves)?;
    let closed = reference_formula(formula)?;
    let (alpha, p) = (&cfg.alpha, &cfg.rates.p_x);
    let point = Point::new().with(Variable::Alpha, g(alpha)).with(Variable::P, g(p));
    let n = match formula {
        Formula::Eq2 => 2,
        Formula::Eq3 { leaves } | Formula::FirstOrderEquiprobable { leaves } => leaves,
    };
    let mut out = String::new();
    let _ = writeln!(out, "formula: {formula}");
    let _ = writeln!(out, "closed form: {closed}");
    let equiprobable = matches!(formula, Formula::FirstOrderEquiprobable { .. });
    match cfg.backend {
        BackendChoice::Exact => {
            if equiprobable {
                let f = microcluster_fidelity(n, &NoiseModel::symbolic_pauli_equiprobable(), &Settings::branches())?;
                let series = f.series_expand(Caps::zero().with(Variable::P, 1))?;
                let slope = series.coeff(&Monomial::var(Variable::P));
                let want = closed.as_polynomial().map(|c| c.coeff(&Monomial::var(Variable::P)));
                let _ = writeln!(out, "simulated: {f}");
                let _ = writeln!(out, "simulated first-order coefficient: {slope}");
                let verdict = if want.as_ref() == Some(&slope) { "equal" } else { "DIFFERENT" };
                let _ = writeln!(out, "agreement: {verdict}");
                let exact = f.eval(&point)?;
                let _ = writeln!(out, "simulated at p = {p}: {exact} ({})", sig(exact.to_f64().0));
            } else {
                let f = microcluster_fidelity(n, &NoiseModel::symbolic_alpha_only(), &Settings::branches())?;
                let verdict = if f.equivalent(&closed) { "equivalent" } else { "DIFFERENT" };
                let _ = writeln!(out, "simulated: {f}");
                let _ = writeln!(out, "agreement: {verdict} (cross-multiplied)");
            }
            let value = closed.eval(&point)?;
            let at = if equiprobable { format!("p = {p}") } else { format!("alpha = {alpha}") };
            let _ = writeln!(out, "closed form at {at}: {value} ({})", sig(value.to_f64().0));
        }
        BackendChoice::Float => {
            let (a, pf) = (f64_of(alpha), f64_of(p));
            let noise = if equiprobable {
                NoiseModel::equiprobable(Complex64::new(0.0, 0.0), Complex64::new(pf, 0.0))
            } else {
                NoiseModel::new(Complex64::new(a, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
            };
            let sim = microcluster_fidelity(n, &noise, &Settings::dense())?;
            let fpoint = Point::new().with(Variable::Alpha, a).with(Variable::P, pf);
            let value = closed.eval_f64(&fpoint)?.re;
            let at = if equiprobable { format!("p = {}", sig(pf)) } else { format!("alpha = {}", sig(a)) };
            let _ = writeln!(out, "simulated at {at}: {}", sig(sim));
            let _ = writeln!(out, "closed form at {at}: {}", sig(value));
            let _ = writeln!(out, "difference: {:.1e}", (sim - value).abs());
        }
    }
    Ok(Report::text(out))
}

#[derive(Serialize)]
struct PairJson {
    policy: String,
    leaves: usize,
    attempt: usize,
    alpha: f64,
    p_x: f64,
    p_y: f64,
    p_z: f64,
    fidelity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    fidelity_exact: Option<String>,
}

fn pairfuse(cfg: &RunConfig) -> Result<Report> {
    let (n, k) = cfg.cell();
    let exact_noise = cfg.noise();
    let (fidelity, fidelity_exact) = match cfg.backend {
        BackendChoice::Exact => {
            let spec = PairFusionSpec::new(n, k, exact_noise, cfg.policy)?;
            let f = fuse_pair(&spec, &Settings::dense())?.fidelity;
            (f.to_f64().0, Some(f.to_string()))
        }
        BackendChoice::Float => {
            let noise = exact_noise.map(|x| Complex64::new(f64_of(x.re()), 0.0));
            let spec = PairFusionSpec::new(n, k, noise, cfg.policy)?;
            (fuse_pair(&spec, &Settings::dense())?.fidelity, None)
        }
    };
    let rec = PairJson {
        policy: cfg.policy.to_string(),
        leaves: n,
        attempt: k,
        alpha: f64_of(&cfg.alpha),
        p_x: f64_of(&cfg.rates.p_x),
        p_y: f64_of(&cfg.rates.p_y),
        p_z: f64_of(&cfg.rates.p_z),
        fidelity,
        fidelity_exact,
    };
    if cfg.format == Format::Json {
        return Ok(Report { bytes: render_json(&rec)?, selftest_passed: None });
    }
    let mut out = String::new();
    let _ = writeln!(out, "leaves {n}, attempt {k}, policy {}, backend {}", cfg.policy, cfg.backend);
    let _ = writeln!(
        out,
        "alpha = {}, p_x = {}, p_y = {}, p_z = {}",
        cfg.alpha, cfg.rates.p_x, cfg.rates.p_y, cfg.rates.p_z
    );
    match &rec.fidelity_exact {
        Some(e) => writeln!(out, "fidelity = {e} ({})", sig(fidelity)),
        None => writeln!(out, "fidelity = {}", sig(fidelity)),
    }
    .expect("string write");
    Ok(Report::text(out))
}

fn sweep(cfg: &RunConfig) -> Result<Report> {
    let records = sweep_records(f64_of(&cfg.alpha), &cfg.grid, &cfg.leaves, &cfg.attempts, cfg.policy)?;
    let bytes = match cfg.format {
        Format::Csv => render_csv(&records)?,
        Format::Json => render_json(&records)?,
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "{:<24} {:>6} {:>7} {:>8} {:>8} {:>16}", "policy", "leaves", "attempt", "alpha", "p", "fidelity");
            for r in &records {
                let _ = writeln!(
                    out,
                    "{:<24} {:>6} {:>7} {:>8} {:>8} {:>16}",
                    r.policy.to_string(),
                    r.leaves,
                    r.attempt,
                    sig(r.alpha),
                    sig(r.p),
                    sig(r.fidelity)
                );
            }
            out.into_bytes()
        }
    };
    Ok(Report { bytes, selftest_passed: None })
}
