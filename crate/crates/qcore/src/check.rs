//! One verified identity, as it appears in reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::QError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    #[serde(with = "lossless_f64")]
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms_used: Option<usize>,
    #[serde(default)]
    pub runtime_ms: f64,
}

impl CheckResult {
    /// `pass` is `residual <= tolerance`; a NaN residual never passes.
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        CheckResult {
            name: name.into(),
            params: BTreeMap::new(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            terms_used: None,
            runtime_ms: 0.0,
        }
    }

    /// A check that could not be evaluated. Recorded as failed, with the
    /// error kind and message in `params`.
    pub fn failed(name: impl Into<String>, tolerance: f64, err: &QError) -> Self {
        CheckResult::new(name, f64::INFINITY, tolerance)
            .param("error", err.kind())
            .param("message", err.to_string())
    }

    pub fn param(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), v.into());
        self
    }

    pub fn terms(mut self, n: usize) -> Self {
        self.terms_used = Some(n);
        self
    }
}

/// JSON has no inf/NaN; write them as strings so reports survive a round trip.
mod lossless_f64 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            v.serialize(s)
        } else if v.is_nan() {
            s.serialize_str("NaN")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) => match s.as_str() {
                "NaN" => Ok(f64::NAN),
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(serde::de::Error::custom(format!("bad float {other:?}"))),
            },
        }
    }
}
