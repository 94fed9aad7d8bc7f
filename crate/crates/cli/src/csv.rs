use std::fmt::Write;

use num_complex::Complex64;
use qgraph::spectral::SpectralPoint;
use qgraph::ComplexMatrix;

/// Version of all CSV layouts below.
pub const SCHEMA_VERSION: u32 = 1;

/// Twelve significant digits, without trailing zeros.
pub fn number(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let a = rounded.abs();
    if (1e-4..1e12).contains(&a) {
        format!("{rounded}")
    } else {
        let s = format!("{rounded:.11e}");
        let (mantissa, exp) = s.split_once('e').expect("scientific notation");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exp}")
    }
}

/// Quotes a field when it contains a separator or quote.
pub fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn header(out: &mut String, kind: &str) {
    let _ = writeln!(out, "# qgraph {kind} v{SCHEMA_VERSION}");
}

/// `value,multiplicity,source,residual`.
pub fn spectrum(points: &[SpectralPoint]) -> String {
    let mut out = String::new();
    header(&mut out, "spectrum");
    out.push_str("value,multiplicity,source,residual\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            number(p.value),
            p.multiplicity,
            p.source.as_str(),
            number(p.residual)
        );
    }
    out
}

/// Row-major, one `re,im` pair per entry.
pub fn matrix(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    header(&mut out, "matrix");
    let cols: Vec<String> = (0..m.cols()).map(|j| format!("re{j},im{j}")).collect();
    let _ = writeln!(out, "{}", cols.join(","));
    for i in 0..m.rows() {
        let cells: Vec<String> = m
            .row(i)
            .iter()
            .map(|z| format!("{},{}", number(z.re), number(z.im)))
            .collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

/// `name,status,detail`.
pub fn checks(rows: &[(String, bool, String)]) -> String {
    let mut out = String::new();
    header(&mut out, "check");
    out.push_str("name,status,detail\n");
    for (name, pass, detail) in rows {
        let status = if *pass { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{},{status},{}", field(name), field(detail));
    }
    out
}

/// Generic table with its own header row.
pub fn table(kind: &str, columns: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    header(&mut out, kind);
    let _ = writeln!(out, "{}", columns.join(","));
    for r in rows {
        let cells: Vec<String> = r.iter().map(|c| field(c)).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

/// Space-separated numbers for use inside a detail field.
pub fn list(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|&x| number(x)).collect();
    format!("[{}]", parts.join(" "))
}

pub fn complex(z: Complex64) -> String {
    qgraph::graph::format_complex(z)
}
