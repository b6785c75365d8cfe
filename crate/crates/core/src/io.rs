//! JSON file formats for distributions, parameters and identification results.
//!
//! Numbers are written with 17 significant digits, which round-trips every
//! `f64` exactly.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::Path;

use serde::ser::Serialize;
use serde::Deserialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

use crate::distribution::StringDistribution;
use crate::error::{Error, Result};
use crate::hmp_model::HmpParams;
use crate::identify::{TraceEntry, Verdict, VerdictKind};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, PartialEq, serde::Serialize, Deserialize)]
pub struct DistributionFile {
    pub n: usize,
    pub probabilities: BTreeMap<String, f64>,
}

impl DistributionFile {
    pub fn from_distribution(dist: &StringDistribution) -> Self {
        Self { n: dist.n(), probabilities: dist.to_map() }
    }

    pub fn into_distribution(self, tol: &ToleranceConfig) -> Result<StringDistribution> {
        StringDistribution::from_map(self.n, &self.probabilities, tol)
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, Deserialize)]
pub struct ParamsFile {
    pub d: usize,
    pub transition: Vec<Vec<f64>>,
    /// Column 0 is the probability of emitting `'0'`.
    pub emission: Vec<Vec<f64>>,
    pub initial: Vec<f64>,
}

impl ParamsFile {
    pub fn from_params(p: &HmpParams) -> Self {
        let rows = |m: &nalgebra::DMatrix<f64>| m.row_iter().map(|r| r.iter().copied().collect()).collect();
        Self {
            d: p.d(),
            transition: rows(&p.transition),
            emission: rows(&p.emission),
            initial: p.initial.iter().copied().collect(),
        }
    }

    pub fn into_params(self, tol: f64) -> Result<HmpParams> {
        if self.initial.len() != self.d {
            return Err(Error::InvalidParams(format!(
                "d = {} but the initial vector has {} entries",
                self.d,
                self.initial.len()
            )));
        }
        HmpParams::from_rows(&self.transition, &self.emission, &self.initial, tol)
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ResultFile {
    pub verdict: &'static str,
    pub states: usize,
    pub params: Option<ParamsFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub trace: Vec<TraceEntry>,
    pub max_residual: Option<f64>,
}

impl ResultFile {
    pub fn new(verdict: &Verdict, max_residual: Option<f64>) -> Self {
        let reason = match &verdict.kind {
            VerdictKind::CannotDecide { reason, .. } => Some(reason.clone()),
            _ => None,
        };
        Self {
            verdict: verdict.label(),
            states: verdict.states(),
            params: verdict.params().map(ParamsFile::from_params),
            reason,
            trace: verdict.trace.clone(),
            max_residual,
        }
    }
}

/// Pretty-printing formatter that writes floats as `{:.16e}`.
struct SigDigits(PrettyFormatter<'static>);

impl Formatter for SigDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, SigDigits(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = to_json_string(value)?;
    std::fs::write(path, text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn parse_distribution(text: &str, tol: &ToleranceConfig) -> Result<StringDistribution> {
    serde_json::from_str::<DistributionFile>(text)?.into_distribution(tol)
}

pub fn parse_params(text: &str, tol: f64) -> Result<HmpParams> {
    serde_json::from_str::<ParamsFile>(text)?.into_params(tol)
}

pub fn read_distribution(path: &Path, tol: &ToleranceConfig) -> Result<StringDistribution> {
    parse_distribution(&read_text(path)?, tol)
}

pub fn read_params(path: &Path, tol: f64) -> Result<HmpParams> {
    parse_params(&read_text(path)?, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hmp_model::random_stochastic;

    #[test]
    fn spec_style_distribution_parses() {
        let text = r#"{"n":2,"probabilities":{"00":0.25,"01":0.25,"10":0.25,"11":0.25}}"#;
        let d = parse_distribution(text, &ToleranceConfig::default()).unwrap();
        assert_eq!(d.probs(), &[0.25; 4]);
    }

    #[test]
    fn floats_use_seventeen_significant_digits() {
        let s = to_json_string(&vec![0.1f64, 0.21875]).unwrap();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("2.1875000000000000e-1"), "{s}");
    }

    #[test]
    fn params_round_trip_exactly() {
        let p = random_stochastic(3, 4);
        let text = to_json_string(&ParamsFile::from_params(&p)).unwrap();
        assert_eq!(parse_params(&text, 1e-12).unwrap(), p);
    }

    #[test]
    fn malformed_files_are_errors() {
        let tol = ToleranceConfig::default();
        assert!(matches!(parse_distribution("{\"n\":2}", &tol), Err(Error::Format(_))));
        let text = r#"{"d":2,"transition":[[1.0]],"emission":[[0.5,0.5]],"initial":[1.0]}"#;
        assert!(matches!(parse_params(text, 1e-9), Err(Error::InvalidParams(_))));
    }
}
