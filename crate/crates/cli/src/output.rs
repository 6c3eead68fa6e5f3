//! CSV and JSON renderings of impedance results. Numbers carry 12 significant digits so
//! files diff cleanly and re-parse to the printed precision.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use radimp::NormalizedImpedance;
use serde::Serialize;

pub const CSV_HEADER: &str = "ka,r,x,converged,validity_flag";

pub fn csv(points: &[NormalizedImpedance]) -> String {
    let mut out = String::with_capacity(64 * (points.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in points {
        let _ = writeln!(
            out,
            "{:.11e},{:.11e},{:.11e},{},{}",
            p.ka,
            p.r,
            p.x,
            p.converged,
            p.validity.label()
        );
    }
    out
}

#[derive(Serialize)]
struct JsonPoint {
    ka: f64,
    r: f64,
    x: f64,
    converged: bool,
    validity_flag: &'static str,
    r_error: f64,
    x_error: f64,
}

#[derive(Serialize)]
struct JsonCurve<'a> {
    kind: &'a str,
    aspect: f64,
    normalization: &'a str,
    tol_rel: f64,
    tol_abs: f64,
    points: Vec<JsonPoint>,
}

pub fn json(kind: &str, aspect: f64, tol: radimp::Tolerance, points: &[NormalizedImpedance]) -> Result<String> {
    let normalization = match points.first().map(|p| p.normalization) {
        Some(radimp::Normalization::ByPiA2RhoC) => "pi-a2-rho-c",
        _ => "4ab-rho-c",
    };
    let curve = JsonCurve {
        kind,
        aspect,
        normalization,
        tol_rel: tol.rel,
        tol_abs: tol.abs,
        points: points
            .iter()
            .map(|p| JsonPoint {
                ka: p.ka,
                r: p.r,
                x: p.x,
                converged: p.converged,
                validity_flag: p.validity.label(),
                r_error: p.r_error,
                x_error: p.x_error,
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&curve)?;
    s.push('\n');
    Ok(s)
}

/// Write to `path`, or to standard output when absent.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .context("cannot write to standard output")?;
            stdout.flush().context("cannot write to standard output")
        }
    }
}
