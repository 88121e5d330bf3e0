//! Discrete (Jackson) and continuous (Lebesgue) orthogonality checks.

use qcore::{jackson_integral, qpoch_inf_base, CheckResult, FunctionHandle, JacksonDomain, QContext, QError, Result};

use crate::poly::HermiteFamily;
use crate::quad::{integrate, QuadConfig};
use crate::weight::{log_weight, norm_constants, orthonormal_d, published_diagonal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrthoMode {
    DiscreteJackson,
    ContinuousQuadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthoCheckParams {
    pub n: usize,
    pub m: usize,
    pub mode: OrthoMode,
    /// Subinterval budget for the adaptive quadrature.
    pub quad_points: usize,
    /// Upper end of the integration range; chosen from the integrand's
    /// decay when `None`.
    pub quad_cutoff: Option<f64>,
    pub tol: f64,
    /// Which d_{n,α} multiplies the continuous integrand.
    pub normalization: Normalization,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// d_{n,α} with the constant C_α as published
    Published,
    /// d̂_{n,α}, which makes the family orthonormal
    Orthonormal,
}

impl OrthoCheckParams {
    pub fn new(n: usize, m: usize, mode: OrthoMode) -> Self {
        let tol = match mode {
            OrthoMode::DiscreteJackson => 1e-8,
            OrthoMode::ContinuousQuadrature => 1e-6,
        };
        OrthoCheckParams { n, m, mode, quad_points: 4000, quad_cutoff: None, tol, normalization: Normalization::Published }
    }

    pub fn validate(&self) -> Result<()> {
        if self.quad_points < 64 {
            return Err(QError::ConfigError(format!("quad_points must be at least 64, got {}", self.quad_points)));
        }
        if let Some(x) = self.quad_cutoff {
            if !(x > 0.0) {
                return Err(QError::ConfigError(format!("quad_cutoff must be positive, got {x}")));
            }
        }
        Ok(())
    }
}

/// q^{n²} times the right-hand side of the discrete relation, i.e. the value
/// of the Jackson integral of s_n² ω |x|^{2α+1}.
pub fn discrete_norm_scaled(n: usize, fam: &HermiteFamily) -> Result<f64> {
    let ctx = fam.ctx();
    let q = ctx.q;
    let a = ctx.alpha;
    let q2 = q * q;
    let inf = |x: f64| qpoch_inf_base(x, q2, ctx).map(|t| t.value);
    let num = 2.0 * (1.0 - q) * inf(-q)? * inf(-q)? * inf(q2)? * fam.qpoch(n).powi(2);
    let den = inf(-q.powf(-2.0 * a - 1.0))? * inf(-q.powf(2.0 * a + 3.0))? * inf(q.powf(2.0 * a + 2.0))?
        * fam.gen_qpoch(n);
    Ok(num / den)
}

/// ln of the integrand s_n s_m ω x^{p} at x > 0, with its sign.
fn log_integrand(fam: &HermiteFamily, n: usize, m: usize, x: f64, p: f64) -> (f64, f64) {
    let (sn, ln_n) = fam.log_abs_scaled(n, x);
    let (sm, ln_m) = fam.log_abs_scaled(m, x);
    (sn * sm, ln_n + ln_m + log_weight(x, fam.ctx()) + p * x.ln())
}

pub fn orthogonality(params: &OrthoCheckParams, ctx: &QContext) -> Result<CheckResult> {
    params.validate()?;
    let OrthoCheckParams { n, m, .. } = *params;
    let fam = HermiteFamily::new(ctx, n.max(m));
    let base = |name: &str, r: f64| {
        CheckResult::new(name, r, params.tol)
            .param("n", n)
            .param("m", m)
            .param("q", ctx.q)
            .param("alpha", ctx.alpha)
    };
    match params.mode {
        OrthoMode::DiscreteJackson => {
            let (sn, sm) = (discrete_norm_scaled(n, &fam)?, discrete_norm_scaled(m, &fam)?);
            if (n + m) % 2 == 1 {
                return Ok(base("discrete_orthogonality", 0.0).param("value", 0.0));
            }
            let a = ctx.alpha;
            let fam2 = fam.clone();
            // even integrand: the line integral is twice the half-line one
            let f = FunctionHandle::new(move |y: f64| {
                let (s, l) = log_integrand(&fam2, n, m, y, 2.0 * a + 1.0);
                2.0 * s * l.exp()
            });
            let v = jackson_integral(&f, JacksonDomain::HalfLine, ctx)?;
            let (r, expected) = if n == m {
                ((v.value - sn).abs() / sn, sn)
            } else {
                (v.value.abs() / (sn * sm).sqrt(), 0.0)
            };
            Ok(base("discrete_orthogonality", r)
                .param("value", v.value)
                .param("expected", expected)
                .terms(v.terms_used))
        }
        OrthoMode::ContinuousQuadrature => {
            let (dn, dm, predicted) = match params.normalization {
                Normalization::Published => {
                    (norm_constants(n, ctx)?.d, norm_constants(m, ctx)?.d, published_diagonal(ctx))
                }
                Normalization::Orthonormal => (orthonormal_d(n, ctx)?, orthonormal_d(m, ctx)?, 1.0),
            };
            if (n + m) % 2 == 1 {
                return Ok(base("continuous_orthonormality", 0.0).param("value", 0.0));
            }
            let (value, evals) = continuous_inner(&fam, n, m, dn * q_half(n, ctx), dm * q_half(m, ctx), params)?;
            let (r, target) = if n == m { ((value - 1.0).abs(), 1.0) } else { (value.abs(), 0.0) };
            Ok(base("continuous_orthonormality", r)
                .param("value", value)
                .param("expected", target)
                .param("offset_predicted", if n == m { predicted } else { 0.0 })
                .terms(evals))
        }
    }
}

// d_n h̃_n = (d_n q^{-n²/2}) s_n
fn q_half(n: usize, ctx: &QContext) -> f64 {
    ctx.q.powf(-0.5 * (n * n) as f64)
}

/// ∫_ℝ (a_n s_n)(a_m s_m) ω |x|^{2α+1} dx for n + m even, by adaptive
/// Gauss–Kronrod in u = ln x on the half line.
pub fn continuous_inner(
    fam: &HermiteFamily,
    n: usize,
    m: usize,
    an: f64,
    am: f64,
    params: &OrthoCheckParams,
) -> Result<(f64, usize)> {
    let ctx = fam.ctx();
    let p = 2.0 * ctx.alpha + 2.0; // extra power from dx = x du
    let u_lo = (1e-20f64).ln() / p;
    let u_hi = match params.quad_cutoff {
        Some(x) => x.ln(),
        None => auto_cutoff(fam, n, m, p),
    };
    let scale = (an * am).abs().ln();
    let sign = (an * am).signum();
    let f = |u: f64| {
        let (s, l) = log_integrand(fam, n, m, u.exp(), p);
        2.0 * sign * s * (l + scale).exp()
    };
    let pieces = (((u_hi - u_lo) / (0.25 * ctx.q.ln().abs())).ceil() as usize).clamp(8, params.quad_points / 2);
    let cfg = QuadConfig {
        abs_tol: 1e-3 * params.tol,
        rel_tol: 1e-12,
        max_intervals: params.quad_points,
        initial_pieces: pieces,
    };
    let r = integrate(f, u_lo, u_hi, &cfg)?;
    Ok((r.value, r.evaluations))
}

/// ln x past which the integrand stays below e^{-45} of its peak.
fn auto_cutoff(fam: &HermiteFamily, n: usize, m: usize, p: f64) -> f64 {
    // envelope |s_n(x)| ≤ Σ|c_k| x^n for x ≥ 1
    let env = |k: usize| fam.scaled_with_mass(k, 1.0).1.ln();
    let lenv = env(n) + env(m);
    let g = |u: f64| lenv + (n + m) as f64 * u.max(0.0) + log_weight(u.exp(), fam.ctx()) + p * u;
    let mut u = 0.0;
    let mut peak = g(0.0);
    loop {
        u += 0.25;
        let v = g(u);
        peak = peak.max(v);
        if v < peak - 45.0 && u > 1.0 {
            return u;
        }
    }
}
