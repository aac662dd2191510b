//! Versioned JSON reports.
//!
//! A report has four top-level fields: `tool_version`, `format_version`,
//! `config` and `results`. Rationals are written as `{"num": .., "den": ..}`.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u64 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub format_version: u64,
    pub config: serde_json::Value,
    pub results: serde_json::Value,
}

impl Report {
    pub fn new<C: Serialize, R: Serialize>(config: &C, results: &R) -> Result<Self> {
        let to_value = |v: serde_json::Result<serde_json::Value>| {
            v.map_err(|e| Error::ReportParse(format!("cannot encode report: {e}")))
        };
        Ok(Report {
            tool_version: TOOL_VERSION.to_string(),
            format_version: FORMAT_VERSION,
            config: to_value(serde_json::to_value(config))?,
            results: to_value(serde_json::to_value(results))?,
        })
    }

    /// Decode `results` as a concrete record type.
    pub fn results_as<T: DeserializeOwned>(&self) -> Result<T> {
        serde_json::from_value(self.results.clone())
            .map_err(|e| Error::ReportParse(format!("results do not match the record type: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are always encodable");
        s.push('\n');
        s
    }

    /// Parse a report, checking the format version before anything else.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::ReportParse(e.to_string()))?;
        let version = raw
            .get("format_version")
            .ok_or_else(|| Error::ReportParse("missing format_version".into()))?
            .as_u64()
            .ok_or_else(|| Error::ReportParse("format_version is not an integer".into()))?;
        if version != FORMAT_VERSION {
            return Err(Error::Migration {
                found: version,
                expected: FORMAT_VERSION,
            });
        }
        serde_json::from_value(raw).map_err(|e| Error::ReportParse(e.to_string()))
    }
}

pub fn write_report(report: &Report, path: &Path) -> Result<()> {
    std::fs::write(path, report.to_json())?;
    Ok(())
}

pub fn load_report(path: &Path) -> Result<Report> {
    Report::from_json(&std::fs::read_to_string(path)?)
}

/// `serde(with)` adapter writing `Ratio<u64>` as `{num, den}`.
pub mod rational_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::discrepancy::Rational;

    #[derive(Serialize, Deserialize)]
    struct Repr {
        num: u64,
        den: u64,
    }

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        Repr {
            num: *r.numer(),
            den: *r.denom(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let Repr { num, den } = Repr::deserialize(d)?;
        if den == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Rational::new(num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::gen_latin;
    use crate::help::{harness_verify, ComplexityReport, HarnessLimits};

    #[test]
    fn complexity_report_round_trip() {
        let rec = harness_verify(&gen_latin(2).unwrap(), &HarnessLimits::default()).unwrap();
        let report = Report::new(&serde_json::json!({"command": "verify"}), &rec).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        write_report(&report, &path).unwrap();
        let back = load_report(&path).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.results_as::<ComplexityReport>().unwrap(), rec);
        assert!(report.to_json().contains("\"num\": 1"));
    }

    #[test]
    fn version_mismatch_is_a_migration_error() {
        let text = r#"{"tool_version":"0.1.0","format_version":99,"config":{},"results":{}}"#;
        assert_eq!(
            Report::from_json(text).unwrap_err(),
            Error::Migration {
                found: 99,
                expected: FORMAT_VERSION
            }
        );
    }

    #[test]
    fn truncated_file_is_a_parse_error() {
        let full = Report::new(&1, &2).unwrap().to_json();
        let cut = &full[..full.len() / 2];
        assert!(matches!(Report::from_json(cut), Err(Error::ReportParse(_))));
    }
}
