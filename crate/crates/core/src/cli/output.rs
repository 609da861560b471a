use std::io::Write;

use crate::error::{Error, Result};
use crate::protocols::SweepRecord;

/// Significant digits for floats in CSV and text output.
pub const SIG_DIGITS: usize = 12;

pub const CSV_HEADER: [&str; 6] = ["policy", "leaves", "attempt", "alpha", "p", "fidelity"];

/// C-style `%.{digits}g`: fixed notation for decimal exponents in
/// `[-4, digits)`, scientific otherwise, trailing zeros dropped.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    // Rounding happens here, so the exponent accounts for carries like 9.99..→10.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes the sweep CSV: fixed header, one row per record, LF endings.
pub fn emit_csv<W: Write>(records: &[SweepRecord], dest: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(dest);
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    for r in records {
        w.write_record([
            r.policy.to_string(),
            r.leaves.to_string(),
            r.attempt.to_string(),
            format_sig(r.alpha, SIG_DIGITS),
            format_sig(r.p, SIG_DIGITS),
            format_sig(r.fidelity, SIG_DIGITS),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn render_csv(records: &[SweepRecord]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    emit_csv(records, &mut buf)?;
    Ok(buf)
}

/// JSON array of objects with the CSV fields.
pub fn render_json<T: serde::Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut buf = serde_json::to_vec_pretty(value).map_err(|e| Error::Domain(format!("json encoding failed: {e}")))?;
    buf.push(b'\n');
    Ok(buf)
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::Domain(format!("csv encoding failed: {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::ErrorPlacementPolicy;

    #[test]
    fn general_format() {
        let g = |x| format_sig(x, 12);
        assert_eq!(g(0.0), "0");
        assert_eq!(g(-0.0), "0");
        assert_eq!(g(1.0), "1");
        assert_eq!(g(0.05), "0.05");
        assert_eq!(g(0.015), "0.015");
        assert_eq!(g(1.0 / 3.0), "0.333333333333");
        assert_eq!(g(2.0 / 3.0), "0.666666666667");
        assert_eq!(g(0.9801 / 0.9802), "0.999897980004");
        assert_eq!(g(1.5e-7), "1.5e-07");
        assert_eq!(g(0.0001), "0.0001");
        assert_eq!(g(123456789012345.0), "1.23456789012e+14");
        assert_eq!(g(-2.5), "-2.5");
        assert_eq!(g(0.99999999999999), "1");
        assert_eq!(format_sig(9.96, 2), "10");
    }

    #[test]
    fn csv_layout() {
        assert_eq!(render_csv(&[]).unwrap(), b"policy,leaves,attempt,alpha,p,fidelity\n");
        let rec = SweepRecord {
            policy: ErrorPlacementPolicy::default(),
            leaves: 2,
            attempt: 1,
            alpha: 0.01,
            p: 0.0,
            fidelity: 0.9801 / 0.9802,
        };
        let text = String::from_utf8(render_csv(std::slice::from_ref(&rec)).unwrap()).unwrap();
        assert_eq!(text, "policy,leaves,attempt,alpha,p,fidelity\nsurvivor-only,2,1,0.01,0,0.999897980004\n");
        let json = String::from_utf8(render_json(&[rec]).unwrap()).unwrap();
        assert!(json.starts_with('[') && json.contains("\"policy\": \"survivor-only\""));
    }
}
