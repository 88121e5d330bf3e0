use std::io::Write;
use std::time::Instant;

use qcore::CheckResult;
use serde::{Deserialize, Serialize};

use crate::config::SuiteConfig;
use crate::error::Result;
use crate::suites;

pub const TOOL_VERSION: &str = concat!("qlab ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// Wall-clock time of the run; the only field that varies between
    /// identical invocations.
    #[serde(default)]
    pub runtime_ms: u64,
}

impl Summary {
    pub fn of(results: &[CheckResult]) -> Self {
        let passed = results.iter().filter(|r| r.pass).count();
        Summary { total: results.len(), passed, failed: results.len() - passed, runtime_ms: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tool_version: String,
    pub config: SuiteConfig,
    pub results: Vec<CheckResult>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// One row per check: name, params (as a JSON object), residual,
    /// tolerance, pass.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["name", "params", "residual", "tolerance", "pass"])?;
        for r in &self.results {
            w.write_record([
                r.name.clone(),
                serde_json::to_string(&r.params)?,
                format_float(r.residual),
                format_float(r.tolerance),
                r.pass.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest round-trip representation; `inf`/`NaN` spelled as in the JSON.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else if v == 0.0 || (1e-4..1e15).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn verify(cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let start = Instant::now();
    let results = suites::run(cfg)?;
    let summary = Summary { runtime_ms: start.elapsed().as_millis() as u64, ..Summary::of(&results) };
    Ok(VerificationReport { tool_version: TOOL_VERSION.into(), config: cfg.clone(), results, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn residual() -> impl Strategy<Value = f64> {
        prop_oneof![0.0..1.0f64, Just(f64::INFINITY), 1e-300..1e-10f64]
    }

    proptest! {
        #[test]
        fn report_roundtrips(rs in prop::collection::vec((residual(), 1e-12..1e-4f64), 0..20)) {
            let results: Vec<CheckResult> = rs
                .iter()
                .enumerate()
                .map(|(i, &(r, t))| CheckResult::new(format!("c{i}"), r, t).param("i", i))
                .collect();
            let summary = Summary::of(&results);
            prop_assert_eq!(summary.passed + summary.failed, results.len());
            prop_assert_eq!(summary.passed, rs.iter().filter(|(r, t)| r <= t).count());
            let report = VerificationReport {
                tool_version: TOOL_VERSION.into(),
                config: SuiteConfig::default(),
                results,
                summary,
            };
            let back: VerificationReport = serde_json::from_str(&report.to_json().unwrap()).unwrap();
            prop_assert_eq!(&back, &report);

            let mut buf = Vec::new();
            report.write_csv(&mut buf).unwrap();
            let mut rd = csv::Reader::from_reader(buf.as_slice());
            for (row, c) in rd.records().zip(&report.results) {
                let row = row.unwrap();
                prop_assert_eq!(&row[0], c.name.as_str());
                let r: f64 = row[2].parse().unwrap();
                prop_assert!(r == c.residual);
                prop_assert_eq!(&row[4] == "true", c.pass);
            }
        }
    }

    #[test]
    fn float_spelling() {
        assert_eq!(format_float(f64::INFINITY), "inf");
        assert_eq!(format_float(f64::NAN), "NaN");
        assert_eq!(format_float(1e-8), "1e-8");
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(-1.5), "-1.5");
        assert_eq!(format_float(2e20), "2e20");
    }
}
