//! CSV output: 12 significant digits, `.` separator, `\n` line endings.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::error::CliError;
use crate::experiments::{CurveRow, LambdaRow};
use dephasing_core::SampleRecord;

pub const FIGURE_HEADER: [&str; 8] = [
    "index",
    "seed",
    "rank",
    "v_b",
    "purity",
    "q_a",
    "e_a_lower",
    "converged",
];
pub const CURVE_HEADER: [&str; 4] = ["alpha", "v_b", "purity", "q_a"];
pub const LAMBDA_HEADER: [&str; 4] = ["lambda", "v_b", "purity", "q_a"];

const SIGNIFICANT: usize = 12;

/// Formats like C's `%.12g`: fixed notation for decimal exponents in
/// `[-4, 12)`, scientific otherwise, trailing zeros removed.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", SIGNIFICANT - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIGNIFICANT as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIGNIFICANT as i32 - 1 - exp).max(0) as usize;
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

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn csv_err(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

pub fn write_figure_csv<W: Write>(w: W, records: &[SampleRecord]) -> io::Result<()> {
    let mut out = writer(w);
    out.write_record(FIGURE_HEADER).map_err(csv_err)?;
    for r in records {
        out.write_record([
            r.index.to_string(),
            r.seed.to_string(),
            r.rank.to_string(),
            fmt_num(r.v_b),
            fmt_num(r.purity),
            fmt_num(r.q_a),
            fmt_num(r.e_a_lower),
            r.converged.to_string(),
        ])
        .map_err(csv_err)?;
    }
    out.flush()
}

pub fn write_curve_csv<W: Write>(w: W, rows: &[CurveRow]) -> io::Result<()> {
    let mut out = writer(w);
    out.write_record(CURVE_HEADER).map_err(csv_err)?;
    for r in rows {
        out.write_record([
            fmt_num(r.alpha),
            fmt_num(r.v_b),
            fmt_num(r.purity),
            fmt_num(r.q_a),
        ])
        .map_err(csv_err)?;
    }
    out.flush()
}

pub fn write_lambda_csv<W: Write>(w: W, rows: &[LambdaRow]) -> io::Result<()> {
    let mut out = writer(w);
    out.write_record(LAMBDA_HEADER).map_err(csv_err)?;
    for r in rows {
        out.write_record([
            fmt_num(r.lambda),
            fmt_num(r.v_b),
            fmt_num(r.purity),
            fmt_num(r.q_a),
        ])
        .map_err(csv_err)?;
    }
    out.flush()
}

/// Creates `path` and hands a buffered writer to `body`.
pub fn write_file(
    path: &Path,
    body: impl FnOnce(&mut io::BufWriter<File>) -> io::Result<()>,
) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut buf = io::BufWriter::new(file);
    body(&mut buf)
        .and_then(|_| buf.flush())
        .map_err(|e| CliError::io(path, e))
}
