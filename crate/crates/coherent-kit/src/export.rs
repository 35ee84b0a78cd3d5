//! Deterministic CSV and JSON emission.
//!
//! Every float is printed with 17 significant digits (`{:.16e}`), which
//! round-trips `f64` exactly; JSON objects are written with keys in sorted
//! order and a fixed two-space layout. Identical values therefore produce
//! byte-identical files, so golden-file comparisons are stable.

use std::io::Write;

use num_complex::Complex64 as C64;

use crate::dynamics::TraceRow;
use crate::error::Result;
use crate::grid::{Grid, MomentReport, WaveFunction};
use crate::phase_space::HusimiMap;
use crate::verify::VerificationReport;

/// 17 significant digits; round-trip exact for f64.
pub fn format_sig17(x: f64) -> String {
    debug_assert!(x.is_finite(), "exported values must be finite");
    format!("{x:.16e}")
}

/// JSON tree with deterministic rendering. Object keys are sorted at write
/// time regardless of insertion order.
#[derive(Debug, Clone)]
pub enum JsonValue {
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Array(Vec<JsonValue>),
    Object(Vec<(String, JsonValue)>),
}

impl JsonValue {
    pub fn object(fields: Vec<(&str, JsonValue)>) -> Self {
        JsonValue::Object(
            fields
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        )
    }

    fn write_indented(&self, w: &mut dyn Write, level: usize) -> std::io::Result<()> {
        let pad = "  ".repeat(level);
        match self {
            JsonValue::Bool(b) => write!(w, "{b}"),
            JsonValue::Int(i) => write!(w, "{i}"),
            JsonValue::Float(x) => write!(w, "{}", format_sig17(*x)),
            JsonValue::Str(s) => write_escaped(w, s),
            JsonValue::Array(items) => {
                if items.is_empty() {
                    return write!(w, "[]");
                }
                writeln!(w, "[")?;
                for (i, item) in items.iter().enumerate() {
                    write!(w, "{pad}  ")?;
                    item.write_indented(w, level + 1)?;
                    writeln!(w, "{}", if i + 1 < items.len() { "," } else { "" })?;
                }
                write!(w, "{pad}]")
            }
            JsonValue::Object(fields) => {
                if fields.is_empty() {
                    return write!(w, "{{}}");
                }
                let mut sorted: Vec<&(String, JsonValue)> = fields.iter().collect();
                sorted.sort_by(|a, b| a.0.cmp(&b.0));
                writeln!(w, "{{")?;
                for (i, (key, value)) in sorted.iter().enumerate() {
                    write!(w, "{pad}  ")?;
                    write_escaped(w, key)?;
                    write!(w, ": ")?;
                    value.write_indented(w, level + 1)?;
                    writeln!(w, "{}", if i + 1 < sorted.len() { "," } else { "" })?;
                }
                write!(w, "{pad}}}")
            }
        }
    }
}

fn write_escaped(w: &mut dyn Write, s: &str) -> std::io::Result<()> {
    write!(w, "\"")?;
    for ch in s.chars() {
        match ch {
            '"' => write!(w, "\\\"")?,
            '\\' => write!(w, "\\\\")?,
            '\n' => write!(w, "\\n")?,
            '\r' => write!(w, "\\r")?,
            '\t' => write!(w, "\\t")?,
            c if (c as u32) < 0x20 => write!(w, "\\u{:04x}", c as u32)?,
            c => write!(w, "{c}")?,
        }
    }
    write!(w, "\"")
}

pub fn write_json(w: &mut dyn Write, value: &JsonValue) -> Result<()> {
    value.write_indented(w, 0)?;
    writeln!(w)?;
    Ok(())
}

/// Wave function as `x,re,im` rows.
pub fn write_wavefunction_csv(w: &mut dyn Write, f: &WaveFunction) -> Result<()> {
    writeln!(w, "x,re,im")?;
    for (&x, s) in f.grid().positions().iter().zip(f.samples()) {
        writeln!(
            w,
            "{},{},{}",
            format_sig17(x),
            format_sig17(s.re),
            format_sig17(s.im)
        )?;
    }
    Ok(())
}

/// Wave function as a JSON object of parallel arrays.
pub fn wavefunction_json(f: &WaveFunction) -> JsonValue {
    JsonValue::object(vec![
        (
            "x",
            JsonValue::Array(
                f.grid()
                    .positions()
                    .iter()
                    .map(|&v| JsonValue::Float(v))
                    .collect(),
            ),
        ),
        (
            "re",
            JsonValue::Array(f.samples().iter().map(|s| JsonValue::Float(s.re)).collect()),
        ),
        (
            "im",
            JsonValue::Array(f.samples().iter().map(|s| JsonValue::Float(s.im)).collect()),
        ),
    ])
}

/// Flat moment report with grid metadata.
pub fn moments_json(report: &MomentReport, grid: &Grid) -> JsonValue {
    JsonValue::object(vec![
        ("mean_x", JsonValue::Float(report.mean_x)),
        ("mean_p", JsonValue::Float(report.mean_p)),
        ("mean_x2", JsonValue::Float(report.mean_x2)),
        ("mean_p2", JsonValue::Float(report.mean_p2)),
        ("delta_x", JsonValue::Float(report.delta_x)),
        ("delta_p", JsonValue::Float(report.delta_p)),
        ("sym_covariance", JsonValue::Float(report.sym_covariance)),
        ("n_points", JsonValue::Int(grid.n_points() as i64)),
        ("x_min", JsonValue::Float(grid.x_min())),
        ("x_max", JsonValue::Float(grid.x_max())),
        ("dx", JsonValue::Float(grid.dx())),
    ])
}

/// Evolution trace as `t,mean_x,mean_p,delta_x,delta_p,eigen_residual`.
pub fn write_trace_csv(w: &mut dyn Write, rows: &[TraceRow]) -> Result<()> {
    writeln!(w, "t,mean_x,mean_p,delta_x,delta_p,eigen_residual")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            format_sig17(r.t),
            format_sig17(r.mean_x),
            format_sig17(r.mean_p),
            format_sig17(r.delta_x),
            format_sig17(r.delta_p),
            format_sig17(r.eigen_residual)
        )?;
    }
    Ok(())
}

/// Husimi map as `x,p,rho_h` in row-major order over x.
pub fn write_husimi_csv(w: &mut dyn Write, map: &HusimiMap) -> Result<()> {
    writeln!(w, "x,p,rho_h")?;
    let lat = map.lattice();
    for (ix, &x) in lat.x_axis().iter().enumerate() {
        for (ip, &p) in lat.p_axis().iter().enumerate() {
            writeln!(
                w,
                "{},{},{}",
                format_sig17(x),
                format_sig17(p),
                format_sig17(map.value(ix, ip))
            )?;
        }
    }
    Ok(())
}

/// Lattice metadata and the mass check for a Husimi map.
pub fn husimi_sidecar_json(map: &HusimiMap) -> JsonValue {
    let lat = map.lattice();
    let c = lat.constants();
    let mass = map.total_mass();
    let expected = 2.0 * c.hbar;
    JsonValue::object(vec![
        ("n_x", JsonValue::Int(lat.x_axis().len() as i64)),
        ("n_p", JsonValue::Int(lat.p_axis().len() as i64)),
        ("x_min", JsonValue::Float(lat.x_axis()[0])),
        ("x_max", JsonValue::Float(*lat.x_axis().last().unwrap())),
        ("p_min", JsonValue::Float(lat.p_axis()[0])),
        ("p_max", JsonValue::Float(*lat.p_axis().last().unwrap())),
        ("dx", JsonValue::Float(lat.dx())),
        ("dp", JsonValue::Float(lat.dp())),
        ("hbar", JsonValue::Float(c.hbar)),
        ("mass", JsonValue::Float(c.mass)),
        ("lambda", JsonValue::Float(c.lambda)),
        ("total_mass", JsonValue::Float(mass)),
        ("expected_mass", JsonValue::Float(expected)),
        ("mass_deviation", JsonValue::Float((mass - expected).abs())),
        ("max_value", JsonValue::Float(map.max_value())),
        ("coverage_warning", JsonValue::Bool(map.coverage_warning())),
    ])
}

/// Number-basis coefficients as `n,re,im`.
pub fn write_fock_csv(w: &mut dyn Write, coeffs: &[C64]) -> Result<()> {
    writeln!(w, "n,re,im")?;
    for (n, c) in coeffs.iter().enumerate() {
        writeln!(w, "{},{},{}", n, format_sig17(c.re), format_sig17(c.im))?;
    }
    Ok(())
}

/// Verification report with per-check records and summary counts.
pub fn report_json(report: &VerificationReport) -> JsonValue {
    let checks: Vec<JsonValue> = report
        .checks
        .iter()
        .map(|c| {
            JsonValue::object(vec![
                ("check_id", JsonValue::Str(c.id.to_string())),
                ("identity", JsonValue::Str(c.identity.to_string())),
                ("residual", JsonValue::Float(c.residual)),
                ("tolerance", JsonValue::Float(c.tolerance)),
                ("pass", JsonValue::Bool(c.pass)),
            ])
        })
        .collect();
    JsonValue::object(vec![
        ("checks", JsonValue::Array(checks)),
        (
            "summary",
            JsonValue::object(vec![
                ("total", JsonValue::Int(report.checks.len() as i64)),
                ("passed", JsonValue::Int(report.passed() as i64)),
                ("failed", JsonValue::Int(report.failed() as i64)),
                ("pass", JsonValue::Bool(report.all_pass())),
            ]),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::CheckRecord;

    #[test]
    fn float_format_has_seventeen_digits_and_roundtrips() {
        let cases = [1.0, -0.5, std::f64::consts::PI, 0.1 + 0.2, 1e-300];
        for &x in &cases {
            let s = format_sig17(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s} did not round-trip");
        }
        assert_eq!(format_sig17(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn json_objects_sort_keys() {
        let v = JsonValue::object(vec![
            ("zeta", JsonValue::Int(1)),
            ("alpha", JsonValue::Bool(true)),
        ]);
        let mut buf = Vec::new();
        write_json(&mut buf, &v).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let a = s.find("alpha").unwrap();
        let z = s.find("zeta").unwrap();
        assert!(a < z, "keys not sorted: {s}");
    }

    #[test]
    fn empty_report_has_zero_summary() {
        let report = VerificationReport { checks: vec![] };
        let mut buf = Vec::new();
        write_json(&mut buf, &report_json(&report)).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("\"total\": 0"));
        assert!(s.contains("\"pass\": true"));
    }

    #[test]
    fn failing_check_propagates_to_summary() {
        let report = VerificationReport {
            checks: vec![
                CheckRecord {
                    id: "ok",
                    identity: "x = x",
                    residual: 0.0,
                    tolerance: 1e-8,
                    pass: true,
                },
                CheckRecord {
                    id: "bad",
                    identity: "x = y",
                    residual: 1.0,
                    tolerance: 1e-8,
                    pass: false,
                },
            ],
        };
        assert!(!report.all_pass());
        let mut buf = Vec::new();
        write_json(&mut buf, &report_json(&report)).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("\"failed\": 1"));
        assert!(s.contains("\"pass\": false"));
    }

    #[test]
    fn same_value_emits_identical_bytes() {
        let v = JsonValue::object(vec![
            ("a", JsonValue::Float(0.1 + 0.2)),
            ("b", JsonValue::Array(vec![JsonValue::Int(3)])),
        ]);
        let mut b1 = Vec::new();
        let mut b2 = Vec::new();
        write_json(&mut b1, &v).unwrap();
        write_json(&mut b2, &v).unwrap();
        assert_eq!(b1, b2);
    }
}
