//! On-disk formats: the curve CSV and the JSON report document.
//!
//! Curve files are plain CSV with two comment header lines carrying the
//! metadata record. All floats are written in Rust's shortest round-trip
//! decimal form, so write -> read -> write is byte-identical.

use pelastica::curvekit::{CurveMeta, SampledCurve};
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

#[derive(Debug)]
pub enum FormatError {
    Io(std::io::Error),
    Malformed(String),
}

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormatError::Io(e) => write!(f, "i/o error: {e}"),
            FormatError::Malformed(m) => write!(f, "malformed curve file: {m}"),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<std::io::Error> for FormatError {
    fn from(e: std::io::Error) -> Self {
        FormatError::Io(e)
    }
}

const MAGIC: &str = "# pelastica-curve v1";

fn meta_field(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x}"),
        None => "none".into(),
    }
}

/// Serialize a curve to the CSV text format.
pub fn curve_to_string(c: &SampledCurve) -> String {
    let dim = c.dim();
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    let _ = writeln!(
        out,
        "# n={} p={} lambda={} ds={} closed={} family={} scale={}",
        dim,
        meta_field(c.meta.p),
        meta_field(c.meta.lambda),
        c.step(),
        c.is_closed(),
        c.meta.family.as_deref().unwrap_or("none"),
        meta_field(c.meta.scale),
    );
    out.push('s');
    for d in 1..=dim {
        let _ = write!(out, ",x{d}");
    }
    out.push('\n');
    for i in 0..c.len() {
        let _ = write!(out, "{}", c.s_at(i));
        for v in c.point(i) {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

pub fn write_curve(path: &Path, c: &SampledCurve) -> Result<(), FormatError> {
    fs::write(path, curve_to_string(c))?;
    Ok(())
}

fn parse_meta_f64(tok: &str) -> Result<Option<f64>, FormatError> {
    if tok == "none" {
        return Ok(None);
    }
    tok.parse::<f64>()
        .map(Some)
        .map_err(|_| FormatError::Malformed(format!("bad numeric field {tok}")))
}

/// Parse the CSV text format back into a curve.
pub fn curve_from_string(text: &str) -> Result<SampledCurve, FormatError> {
    let mut lines = text.lines();
    let magic = lines
        .next()
        .ok_or_else(|| FormatError::Malformed("empty file".into()))?;
    if magic.trim() != MAGIC {
        return Err(FormatError::Malformed(format!(
            "unrecognized header {magic:?}"
        )));
    }
    let header = lines
        .next()
        .ok_or_else(|| FormatError::Malformed("missing metadata line".into()))?;
    let header = header
        .strip_prefix('#')
        .ok_or_else(|| FormatError::Malformed("metadata line must start with #".into()))?;
    let mut dim = 0usize;
    let mut meta = CurveMeta::default();
    let mut ds = 0.0f64;
    let mut closed = false;
    for tok in header.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| FormatError::Malformed(format!("bad metadata token {tok}")))?;
        match key {
            "n" => {
                dim = val
                    .parse()
                    .map_err(|_| FormatError::Malformed("bad dimension".into()))?
            }
            "p" => meta.p = parse_meta_f64(val)?,
            "lambda" => meta.lambda = parse_meta_f64(val)?,
            "ds" => {
                ds = val
                    .parse()
                    .map_err(|_| FormatError::Malformed("bad step".into()))?
            }
            "closed" => {
                closed = val
                    .parse()
                    .map_err(|_| FormatError::Malformed("bad closed flag".into()))?
            }
            "family" => {
                meta.family = if val == "none" {
                    None
                } else {
                    Some(val.to_string())
                }
            }
            "scale" => meta.scale = parse_meta_f64(val)?,
            _ => return Err(FormatError::Malformed(format!("unknown field {key}"))),
        }
    }
    if dim < 1 || !(ds > 0.0) {
        return Err(FormatError::Malformed("dimension or step missing".into()));
    }
    // Column header line.
    let _cols = lines
        .next()
        .ok_or_else(|| FormatError::Malformed("missing column header".into()))?;

    let mut points = Vec::new();
    let mut rows = 0usize;
    let mut prev_s = f64::NEG_INFINITY;
    for (ln, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let s: f64 = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| FormatError::Malformed(format!("bad s in row {ln}")))?;
        if s <= prev_s {
            return Err(FormatError::Malformed(
                "arclength column must be strictly increasing".into(),
            ));
        }
        prev_s = s;
        let mut got = 0usize;
        for t in parts {
            let v: f64 = t
                .parse()
                .map_err(|_| FormatError::Malformed(format!("bad coordinate in row {ln}")))?;
            points.push(v);
            got += 1;
        }
        if got != dim {
            return Err(FormatError::Malformed(format!(
                "row {ln} has {got} coordinates, expected {dim}"
            )));
        }
        rows += 1;
    }
    if rows < 2 {
        return Err(FormatError::Malformed("need at least 2 rows".into()));
    }
    let c = SampledCurve::from_points(dim, ds, points, closed)
        .map_err(|e| FormatError::Malformed(e.to_string()))?;
    Ok(c.with_meta(meta))
}

pub fn read_curve(path: &Path) -> Result<SampledCurve, FormatError> {
    let text = fs::read_to_string(path)?;
    curve_from_string(&text)
}

/// A defined-or-explained value for report documents.
pub fn defined(v: f64) -> Value {
    json!(v)
}

pub fn undefined(reason: &str) -> Value {
    json!({ "value": null, "reason": reason })
}

/// Assemble the common report envelope. serde_json's default map keeps
/// keys sorted, so the output is deterministic.
pub fn report(command: &str, body: Map<String, Value>) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
    for (k, v) in body {
        m.insert(k, v);
    }
    Value::Object(m)
}

/// One verdict entry; every verdict carries the tolerance it used.
pub fn verdict(name: &str, ok: bool, tolerance: f64) -> Value {
    json!({ "name": name, "ok": ok, "tolerance": tolerance })
}

/// Auxiliary plot CSV: (s, k, tau) profile rows.
pub fn profile_to_string(profile: &[pelastica::geom::ProfilePoint]) -> String {
    let mut out = String::from("s,k,tau\n");
    for pt in profile {
        match pt.tau {
            Some(t) => {
                let _ = writeln!(out, "{},{},{}", pt.s, pt.k, t);
            }
            None => {
                let _ = writeln!(out, "{},{},", pt.s, pt.k);
            }
        }
    }
    out
}
