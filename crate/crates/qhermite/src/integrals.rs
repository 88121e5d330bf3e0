//! Jackson moments of e_{q²}(−qy²), the weight–Bessel transform and the
//! q-integral representations of h̃_n.
//!
//! The Bessel-kernel integrals are summed term by term:
//!
//!   ∫₀^∞ e_{q²}(−qy²) j_ν(λy;q²) y^s d_qy = Σ_k (−1)^k q^{k(k+1)} λ^{2k} / (q;q)_{2k,ν} · M(s+2k)
//!
//! with M(t) = ∫₀^∞ e_{q²}(−qy²) y^t d_qy each computed as its own Jackson
//! sum. A direct lattice sum of the product is hopeless in floating point:
//! on y = q^{-m} the Bessel series has magnitude ~q^{-m²}, exactly what the
//! weight removes, so every digit cancels. The term-by-term series has
//! ratio tending to λ²q^{-s}; when that is ≥ 1 the integral itself diverges
//! and NonConvergence is returned.

use qcore::{jackson_integral, FunctionHandle, JacksonDomain, QContext, QError, Result};

use crate::poly::HermiteFamily;
use crate::weight::{c_q_alpha, log_qexp_small_neg, log_weight};

/// ln M(s) = ln ∫₀^∞ e_{q²}(−qy²) y^s d_qy, for s > −1.
pub fn log_moment(s: f64, ctx: &QContext) -> Result<f64> {
    if !(s > -1.0) {
        return Err(QError::DomainError(format!("moment exponent must exceed -1, got {s}")));
    }
    let q = ctx.q;
    let lq = q.ln();
    // integrand peaks near y = q^{-s/2}; make sure the window covers it
    let peak = -(s / 2.0).ceil() as i32;
    let mut local = *ctx;
    local.lattice_lo = ctx.lattice_lo.min(peak - 40);
    let g = |n: i32| log_qexp_small_neg(q * q.powi(2 * n), q * q) + s * n as f64 * lq;
    let shift = (local.lattice_lo..=local.lattice_hi).map(g).fold(f64::NEG_INFINITY, f64::max);
    let f = FunctionHandle::new(move |y: f64| (log_qexp_small_neg(q * y * y, q * q) + s * y.ln() - shift).exp());
    let v = jackson_integral(&f, JacksonDomain::HalfLine, &local)?;
    Ok(shift + v.value.ln())
}

/// |M(2n+2α+1) − c q^{−n(n+2α+2)} (q^{2α+2};q²)_n| relative to the closed form.
pub fn moment_check(n: usize, ctx: &QContext) -> Result<f64> {
    let a = ctx.alpha;
    let nf = n as f64;
    let closed = c_q_alpha(ctx)?.ln() - nf * (nf + 2.0 * a + 2.0) * ctx.q.ln()
        + qcore::qpoch_base(ctx.q.powf(2.0 * a + 2.0), ctx.q * ctx.q, n).ln();
    moment_rel(n, closed, ctx)
}

/// Same comparison against the published closed form c q^{−n²−2α} (q^{2α+2};q²)_n.
pub fn moment_check_published(n: usize, ctx: &QContext) -> Result<f64> {
    let a = ctx.alpha;
    let nf = n as f64;
    let closed = c_q_alpha(ctx)?.ln() - (nf * nf + 2.0 * a) * ctx.q.ln()
        + qcore::qpoch_base(ctx.q.powf(2.0 * a + 2.0), ctx.q * ctx.q, n).ln();
    moment_rel(n, closed, ctx)
}

fn moment_rel(n: usize, log_closed: f64, ctx: &QContext) -> Result<f64> {
    let lm = log_moment(2.0 * n as f64 + 2.0 * ctx.alpha + 1.0, ctx)?;
    Ok((lm - log_closed).exp_m1().abs())
}

/// ∫₀^∞ e_{q²}(−qy²) j_ν(λy;q²) y^s d_qy, returned as `value · e^{log_scale}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledIntegral {
    pub value: f64,
    pub log_scale: f64,
    pub tail_bound: f64,
    pub terms_used: usize,
}

pub fn bessel_moment(lambda: f64, order: f64, s: f64, ctx: &QContext) -> Result<ScaledIntegral> {
    let q = ctx.q;
    let lq = q.ln();
    let lam2 = lambda * lambda;
    let rho = lam2 * q.powf(-s);
    if rho >= 1.0 {
        return Err(QError::NonConvergence {
            what: format!(
                "Bessel-kernel q-integral: term ratio tends to λ²q^(-s) = {rho:.6} >= 1, integral diverges"
            ),
            terms: 0,
        });
    }
    let base = log_moment(s, ctx)?;
    if lambda == 0.0 {
        return Ok(ScaledIntegral { value: 1.0, log_scale: base, tail_bound: 0.0, terms_used: 1 });
    }
    let e = |j: usize| qcore::gen_exponent(j, order);
    let mut log_gq = 0.0; // ln (q;q)_{2k,ν}
    let mut sum = 1.0;
    let mut mass = 1.0;
    let mut prev = 1.0f64;
    for k in 1..ctx.max_terms {
        log_gq += (1.0 - q.powf(e(2 * k - 1))).ln() + (1.0 - q.powf(e(2 * k))).ln();
        let kf = k as f64;
        let lt = kf * (kf + 1.0) * lq + kf * lam2.ln() - log_gq + log_moment(s + 2.0 * kf, ctx)? - base;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let t = sign * lt.exp();
        sum += t;
        mass += t.abs();
        let r = (t / prev).abs();
        if k >= 2 && r < 1.0 {
            let bound = t.abs() * r / (1.0 - r);
            if bound <= ctx.series_tol * mass {
                return Ok(ScaledIntegral { value: sum, log_scale: base, tail_bound: bound, terms_used: k + 1 });
            }
        }
        prev = t;
    }
    Err(QError::NonConvergence { what: "Bessel-kernel q-integral series".into(), terms: ctx.max_terms })
}

/// |∫₀^∞ e_{q²}(−qy²) j_α(xy;q²) y^{2α+1} d_qy − c_{q,α} ω_α(x)| / c_{q,α}.
pub fn bessel_weight_transform(x: f64, ctx: &QContext) -> Result<f64> {
    let i = bessel_moment(x, ctx.alpha, 2.0 * ctx.alpha + 1.0, ctx)?;
    let c = c_q_alpha(ctx)?;
    let lhs = i.value * (i.log_scale - c.ln()).exp();
    Ok((lhs - log_weight(x, ctx).exp()).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// h̃_{2n} with a j_α kernel
    Even,
    /// h̃_{2n+1} with a j_{α+1} kernel
    Odd,
}

/// h̃_{2n} or h̃_{2n+1} from its q-integral representation, against the
/// defining sum; the residual is |rep − h̃| / (|h̃| + 1).
pub fn integral_representation_residual(n: usize, x: f64, parity: Parity, ctx: &QContext) -> Result<f64> {
    let (rep_sign, rep_log) = integral_representation(n, x, parity, ctx)?;
    let deg = match parity {
        Parity::Even => 2 * n,
        Parity::Odd => 2 * n + 1,
    };
    let fam = HermiteFamily::new(ctx, deg);
    let (hs, hl) = fam.log_abs_scaled(deg, x);
    let hl = hl - 0.5 * (deg * deg) as f64 * ctx.q.ln();
    let top = rep_log.max(hl).max(0.0);
    let rep = rep_sign * (rep_log - top).exp();
    let h = hs * (hl - top).exp();
    Ok((rep - h).abs() / (h.abs() + (-top).exp()))
}

/// (sign, ln|value|) of the representation.
pub fn integral_representation(n: usize, x: f64, parity: Parity, ctx: &QContext) -> Result<(f64, f64)> {
    let q = ctx.q;
    let lq = q.ln();
    let a = ctx.alpha;
    let nf = n as f64;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let lc = c_q_alpha(ctx)?.ln();
    let lw = log_weight(x, ctx);
    let ln_qq = |m: usize| (1..=m).map(|k| (1.0 - q.powi(k as i32)).ln()).sum::<f64>();
    let ln_gq = |m: usize| qcore::gen_qpoch(m, ctx).ln();
    match parity {
        Parity::Even => {
            let i = bessel_moment(q.powi(n as i32) * x, a, 2.0 * nf + 2.0 * a + 1.0, ctx)?;
            let pre = (-nf * nf + nf * (2.0 * a + 3.0)) * lq + ln_qq(2 * n) - lc - ln_gq(2 * n) - lw;
            Ok((sign * i.value.signum(), pre + i.log_scale + i.value.abs().ln()))
        }
        Parity::Odd => {
            if x == 0.0 {
                return Ok((0.0, f64::NEG_INFINITY));
            }
            let i = bessel_moment(q.powi(n as i32 + 1) * x, a + 1.0, 2.0 * nf + 2.0 * a + 3.0, ctx)?;
            let pre = (-nf * nf + (nf + 1.0) * (2.0 * a + 3.0)) * lq + ln_qq(2 * n + 1) + x.abs().ln()
                - lc
                - (1.0 - q.powf(2.0 * a + 2.0)).ln()
                - ln_gq(2 * n + 1)
                - lw;
            Ok((sign * x.signum() * i.value.signum(), pre + i.log_scale + i.value.abs().ln()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: f64, a: f64) -> QContext {
        QContext::new(q, a).unwrap()
    }

    #[test]
    fn moments_match_closed_form() {
        assert!(moment_check(0, &ctx(0.5, 0.0)).unwrap() < 1e-10);
        assert!(moment_check(3, &ctx(0.5, 0.25)).unwrap() < 1e-10);
        assert!(moment_check(12, &ctx(0.3, 1.3)).unwrap() < 1e-10);
    }

    #[test]
    fn published_moment_off_by_power() {
        let c = ctx(0.5, 0.25);
        assert!(moment_check_published(0, &ctx(0.5, 0.0)).unwrap() < 1e-10);
        assert!(moment_check_published(3, &c).unwrap() > 1.0);
    }

    #[test]
    fn transform_small_x() {
        assert!(bessel_weight_transform(0.0, &ctx(0.5, 0.25)).unwrap() < 1e-12);
        assert!(bessel_weight_transform(0.5, &ctx(0.5, 0.25)).unwrap() < 1e-9);
    }

    #[test]
    fn transform_past_radius_diverges() {
        let e = bessel_weight_transform(1.5, &ctx(0.6, 1.0)).unwrap_err();
        assert_eq!(e.kind(), "NonConvergence");
    }

    #[test]
    fn representation_at_small_x() {
        let c = ctx(0.5, 0.25);
        for n in 0..=4 {
            for p in [Parity::Even, Parity::Odd] {
                let r = integral_representation_residual(n, 0.4, p, &c).unwrap();
                assert!(r < 1e-8, "{n} {p:?}: {r}");
            }
        }
    }
}
