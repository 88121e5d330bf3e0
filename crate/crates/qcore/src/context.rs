use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};

pub const DEFAULT_SERIES_TOL: f64 = 1e-14;
pub const DEFAULT_MAX_TERMS: usize = 400;
pub const DEFAULT_LATTICE_LO: i32 = -40;
pub const DEFAULT_LATTICE_HI: i32 = 120;

/// Evaluation parameters threaded through every operation.
///
/// `q` is the deformation parameter, `alpha` the order of the generalized
/// family. Truncation of infinite sums and products is controlled by
/// `series_tol` and capped by `max_terms`; Jackson integrals start from the
/// exponent window `lattice_lo..=lattice_hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QContext {
    pub q: f64,
    pub alpha: f64,
    pub series_tol: f64,
    pub max_terms: usize,
    pub lattice_lo: i32,
    pub lattice_hi: i32,
}

impl QContext {
    pub fn new(q: f64, alpha: f64) -> Result<Self> {
        let ctx = QContext {
            q,
            alpha,
            series_tol: DEFAULT_SERIES_TOL,
            max_terms: DEFAULT_MAX_TERMS,
            lattice_lo: DEFAULT_LATTICE_LO,
            lattice_hi: DEFAULT_LATTICE_HI,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(QError::ConfigError(format!("q must lie in (0,1), got {}", self.q)));
        }
        if !(self.alpha > -1.0) || !self.alpha.is_finite() {
            return Err(QError::ConfigError(format!("alpha must be > -1, got {}", self.alpha)));
        }
        if !(self.series_tol > 0.0) {
            return Err(QError::ConfigError("series_tol must be positive".into()));
        }
        if self.max_terms == 0 {
            return Err(QError::ConfigError("max_terms must be at least 1".into()));
        }
        if !(self.lattice_lo < 0 && self.lattice_hi > 0) {
            return Err(QError::ConfigError(format!(
                "lattice window must straddle 0, got [{}, {}]",
                self.lattice_lo, self.lattice_hi
            )));
        }
        Ok(())
    }

    /// Same truncation settings, different order.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        let c = QContext { alpha, ..*self };
        c.validate()?;
        Ok(c)
    }

    pub fn with_q(&self, q: f64) -> Result<Self> {
        let c = QContext { q, ..*self };
        c.validate()?;
        Ok(c)
    }

    pub fn with_max_terms(mut self, n: usize) -> Result<Self> {
        self.max_terms = n;
        self.validate()?;
        Ok(self)
    }

    /// q^(2α+1), the factor that distinguishes the generalized operators.
    pub fn q_2a1(&self) -> f64 {
        self.q.powf(2.0 * self.alpha + 1.0)
    }
}

/// A truncated infinite sum or product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedValue {
    pub value: f64,
    /// Bound on the discarded remainder.
    pub tail_bound: f64,
    pub terms_used: usize,
}

impl TruncatedValue {
    pub fn exact(value: f64, terms_used: usize) -> Self {
        TruncatedValue { value, tail_bound: 0.0, terms_used }
    }
}
