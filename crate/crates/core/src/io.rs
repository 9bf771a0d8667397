//! The on-disk series format shared by every command.
//!
//! A series file is a UTF-8 JSON document:
//!
//! ```json
//! { "variables": ["z", "zbar", "s1", "t1"],
//!   "truncation": 8,
//!   "mode": "exact",
//!   "terms": [ { "exp": [0, 0, 2, 0], "re": "1/1", "im": "0/1" } ] }
//! ```
//!
//! Exact coefficients are strings `"p/q"` in lowest terms with `q > 0`;
//! float coefficients are JSON numbers. Terms are emitted in graded
//! lexicographic order on `exp`, which makes exact-mode output byte-stable.
//! Readers reject duplicate exponent entries.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{format_rational, parse_rational, Coefficient, Mode, Real};
use crate::multiindex::MultiIndex;
use crate::series::{Series, SeriesError};

#[derive(Debug, Error)]
pub enum FileError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown mode {0:?} (expected \"exact\" or \"float\")")]
    UnknownMode(String),
    #[error("duplicate exponent entry {0:?}")]
    DuplicateExponent(Vec<u32>),
    #[error("coefficient does not match mode {mode}: {detail}")]
    BadCoefficient { mode: Mode, detail: String },
    #[error("series invariant violated: {0}")]
    Series(#[from] SeriesError),
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    exp: Vec<u32>,
    re: serde_json::Value,
    im: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct SeriesDoc {
    variables: Vec<String>,
    truncation: u32,
    mode: String,
    terms: Vec<TermDoc>,
}

fn coeff_to_values(c: &Coefficient) -> (serde_json::Value, serde_json::Value) {
    match c {
        Coefficient::Exact(ec) => (
            serde_json::Value::String(format_rational(&ec.re)),
            serde_json::Value::String(format_rational(&ec.im)),
        ),
        Coefficient::Float(fc) => (
            serde_json::json!(fc.re),
            serde_json::json!(fc.im),
        ),
    }
}

fn value_to_real(v: &serde_json::Value, mode: Mode) -> Result<Real, FileError> {
    match (mode, v) {
        (Mode::Exact, serde_json::Value::String(s)) => parse_rational(s)
            .map(Real::Exact)
            .map_err(|detail| FileError::BadCoefficient { mode, detail }),
        (Mode::Float, serde_json::Value::Number(n)) => n
            .as_f64()
            .map(Real::Float)
            .ok_or_else(|| FileError::BadCoefficient { mode, detail: format!("{n} not an f64") }),
        _ => Err(FileError::BadCoefficient { mode, detail: format!("unexpected value {v}") }),
    }
}

/// Serialize in the canonical form (graded-lex term order, fixed key order).
pub fn series_to_json(series: &Series) -> String {
    let terms = series
        .terms()
        .map(|(idx, c)| {
            let (re, im) = coeff_to_values(c);
            TermDoc { exp: idx.exponents().to_vec(), re, im }
        })
        .collect();
    let doc = SeriesDoc {
        variables: series.variables().to_vec(),
        truncation: series.truncation(),
        mode: series.mode().to_string(),
        terms,
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("series serialization");
    out.push('\n');
    out
}

pub fn series_from_json(text: &str) -> Result<Series, FileError> {
    let doc: SeriesDoc = serde_json::from_str(text)?;
    let mode = match doc.mode.as_str() {
        "exact" => Mode::Exact,
        "float" => Mode::Float,
        other => return Err(FileError::UnknownMode(other.to_string())),
    };
    let mut seen: std::collections::BTreeSet<Vec<u32>> = std::collections::BTreeSet::new();
    let mut terms = Vec::with_capacity(doc.terms.len());
    for t in &doc.terms {
        if !seen.insert(t.exp.clone()) {
            return Err(FileError::DuplicateExponent(t.exp.clone()));
        }
        let re = value_to_real(&t.re, mode)?;
        let im = value_to_real(&t.im, mode)?;
        terms.push((MultiIndex::new(t.exp.clone()), Coefficient::from_parts(re, im)));
    }
    Ok(Series::from_terms(doc.variables, doc.truncation, mode, terms)?)
}

pub fn write_series_file(path: &Path, series: &Series) -> Result<(), FileError> {
    fs::write(path, series_to_json(series))?;
    Ok(())
}

pub fn read_series_file(path: &Path) -> Result<Series, FileError> {
    let text = fs::read_to_string(path)?;
    series_from_json(&text)
}

/// A one-form file is `{ "components": [ <series doc>, ... ] }` with one
/// series per `v_j`, all in the `s` variables.
pub fn one_form_to_json(components: &[Series]) -> String {
    let docs: Vec<serde_json::Value> = components
        .iter()
        .map(|s| serde_json::from_str(&series_to_json(s)).expect("series json"))
        .collect();
    let mut out =
        serde_json::to_string_pretty(&serde_json::json!({ "components": docs })).unwrap();
    out.push('\n');
    out
}

pub fn one_form_from_json(text: &str) -> Result<Vec<Series>, FileError> {
    let doc: serde_json::Value = serde_json::from_str(text)?;
    let comps = doc
        .get("components")
        .and_then(|c| c.as_array())
        .ok_or_else(|| {
            FileError::Json(serde::de::Error::custom("missing \"components\" array"))
        })?;
    comps
        .iter()
        .map(|c| series_from_json(&serde_json::to_string(c).unwrap()))
        .collect()
}

pub fn read_one_form_file(path: &Path) -> Result<Vec<Series>, FileError> {
    let text = fs::read_to_string(path)?;
    one_form_from_json(&text)
}

pub fn write_one_form_file(path: &Path, components: &[Series]) -> Result<(), FileError> {
    fs::write(path, one_form_to_json(components))?;
    Ok(())
}
