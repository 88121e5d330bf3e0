use clap::ValueEnum;
use qcore::QContext;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Environment variable that overrides `QContext::max_terms`.
pub const MAX_TERMS_ENV: &str = "QLAB_MAX_TERMS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Suite {
    All,
    Qcalculus,
    SpecialFunctions,
    HermiteIdentities,
    Orthogonality,
    Kernels,
    OscillatorAlgebra,
}

impl Suite {
    /// The concrete suites `self` expands to, in report order.
    pub fn members(self) -> Vec<Suite> {
        use Suite::*;
        match self {
            All => vec![Qcalculus, SpecialFunctions, HermiteIdentities, Orthogonality, Kernels, OscillatorAlgebra],
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Qcalculus => "qcalculus",
            Suite::SpecialFunctions => "special_functions",
            Suite::HermiteIdentities => "hermite_identities",
            Suite::Orthogonality => "orthogonality",
            Suite::Kernels => "kernels",
            Suite::OscillatorAlgebra => "oscillator_algebra",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub q_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
    pub n_max: usize,
    /// Tolerance for series and algebraic identities.
    pub tol: f64,
    /// Tolerance for checks that go through numerical quadrature.
    pub quad_tol: f64,
    pub dim: usize,
    pub seed: u64,
    pub max_terms: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: Suite::All,
            q_values: vec![0.3, 0.5, 0.8],
            alpha_values: vec![-0.5, 0.25, 1.3],
            n_max: 8,
            tol: 1e-8,
            quad_tol: 1e-6,
            dim: 12,
            seed: 0,
            max_terms: 400,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.q_values.is_empty() || self.alpha_values.is_empty() {
            return bad("the q and alpha grids must be non-empty".into());
        }
        for &q in &self.q_values {
            for &a in &self.alpha_values {
                QContext::new(q, a)?.with_max_terms(self.max_terms)?;
            }
        }
        if self.n_max > 40 {
            return bad(format!("n_max must be at most 40, got {}", self.n_max));
        }
        // the double-raising relations need dim >= 5
        if !(5..=64).contains(&self.dim) {
            return bad(format!("dim must lie in 5..=64, got {}", self.dim));
        }
        if !(self.tol > 0.0) || !(self.quad_tol > 0.0) {
            return bad("tolerances must be positive".into());
        }
        Ok(())
    }

    /// Every (q, α) pair of the grid, q outermost.
    pub fn contexts(&self) -> Result<Vec<QContext>> {
        let mut out = Vec::new();
        for &q in &self.q_values {
            for &a in &self.alpha_values {
                out.push(QContext::new(q, a)?.with_max_terms(self.max_terms)?);
            }
        }
        Ok(out)
    }
}

/// `QLAB_MAX_TERMS` if set, else `default`.
pub fn max_terms_from_env(default: usize) -> Result<usize> {
    match std::env::var(MAX_TERMS_ENV) {
        Err(_) => Ok(default),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(CliError::Config(format!("{MAX_TERMS_ENV} must be a positive integer, got {s:?}"))),
        },
    }
}
