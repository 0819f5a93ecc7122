use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::run::{CheckSummary, RunReport};
use crate::error::Result;
use crate::verify::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub const CSV_HEADER: &str = "t,g,f,lambda,S,ric_norm2,T_norm2,residual";

/// Formats with 12 significant digits, trimming trailing zeros.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return String::new();
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let fixed = format!("{:.*}", (11 - exp).max(0) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mant))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn cell(x: Option<f64>) -> String {
    x.map(format_sig12).unwrap_or_default()
}

pub fn render_json(r: &RunReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(r).map_err(std::io::Error::other)?;
    s.push('\n');
    Ok(s)
}

pub fn render_csv(r: &RunReport) -> String {
    let mut out = String::with_capacity(64 * (r.profile.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &r.profile {
        let cells = [
            format_sig12(row.t),
            cell(row.g),
            cell(row.f),
            cell(row.lambda),
            cell(row.s),
            cell(row.ric_norm2),
            cell(row.t_norm2),
            cell(row.residual),
        ];
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn num(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into())
}

fn check_line(c: &CheckSummary) -> String {
    format!(
        "    {:<24} {}  sup {}  min {}  max {}  tol {:.0e}",
        c.check,
        pass_fail(c.passed),
        num(c.sup_norm),
        num(c.min),
        num(c.max),
        c.tolerance
    )
}

pub fn render_text(r: &RunReport) -> String {
    let s = &r.spec;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:?}, n = {}, [{}, {}] x {}{}",
        s.family,
        s.n,
        s.interval[0],
        s.interval[1],
        s.resolution,
        if s.pole { ", pole model" } else { "" }
    );
    let _ = writeln!(out, "classification: {:?}", s.classification);
    let _ = writeln!(
        out,
        "inf S {}  inf lambda {}  sup lambda {}  sup |T| {}",
        num(s.s_inf),
        num(s.lambda_inf),
        num(s.lambda_sup),
        num(s.t_sup)
    );
    let _ = writeln!(out, "seed {}", r.seed);
    for suite in &r.suites {
        let _ = writeln!(out, "{}: {}", suite.suite.name(), pass_fail(suite.passed));
        for c in &suite.checks {
            let _ = writeln!(out, "{}", check_line(c));
        }
        for a in &suite.audits {
            let verdict = match a.verdict {
                Verdict::ConsistentWithPaper => "consistent",
                Verdict::HypothesesNotMet => "hypotheses not met",
                Verdict::Violation => "VIOLATION",
            };
            let _ = writeln!(out, "    theorem {:?}: {verdict}", a.theorem);
            for f in a.hypotheses.iter().chain(&a.conclusions) {
                let _ = writeln!(out, "      [{}] {}", if f.passed { "x" } else { " " }, f.name);
            }
        }
        for v in &suite.volumes {
            let _ = writeln!(
                out,
                "    volume r = {}: actual {} bound {} {}",
                v.r,
                num(v.actual),
                num(v.bound),
                pass_fail(v.passed)
            );
        }
        if let Some(p) = &suite.parabolicity {
            let _ = writeln!(out, "    f-parabolicity: {:?}", p.verdict);
        }
        if let Some(o) = &suite.okumura {
            let _ = writeln!(
                out,
                "    {} random tuples, n = {}, seed {}: {} failures",
                o.count, o.n, o.seed, o.failures
            );
        }
        for note in &suite.notes {
            let _ = writeln!(out, "    note: {note}");
        }
    }
    let _ = writeln!(out, "overall: {}", pass_fail(r.overall_pass));
    out
}

pub fn render(r: &RunReport, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => render_json(r)?,
        Format::Csv => render_csv(r),
        Format::Text => render_text(r),
    })
}

/// Writes the report to `path`, or to stdout when `path` is `None`.
pub fn emit_report(r: &RunReport, format: Format, path: Option<&Path>) -> Result<()> {
    let body = render(r, format)?;
    match path {
        Some(p) => std::fs::write(p, body)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(body.as_bytes())?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12() {
        assert_eq!(format_sig12(0.0), "0");
        assert_eq!(format_sig12(-0.0), "0");
        assert_eq!(format_sig12(1.0), "1");
        assert_eq!(format_sig12(0.1 + 0.2), "0.3");
        assert_eq!(format_sig12(-2.5), "-2.5");
        assert_eq!(format_sig12(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_sig12(1.5e-9), "1.5e-9");
        assert_eq!(format_sig12(6.02214076e23), "6.02214076e23");
        assert_eq!(format_sig12(123456789012.0), "123456789012");
        for x in [1e-7, 3.3e5, -7.25e-3, 9.999999999999e11] {
            let back: f64 = format_sig12(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-11);
        }
    }
}
