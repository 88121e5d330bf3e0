//! The weight ω_α(x;q) = e_{q²}(−q^{−2α−1}x²) and the normalization constants.

use std::f64::consts::PI;

use qcore::{gen_qpoch, qpoch, qpoch_inf_base, QContext, QError, QParams, Real, Result};

/// ln e_p(−s) = −Σ_k ln(1 + s p^k) for s ≥ 0.
///
/// The sum is summed until the next factor changes the logarithm by less
/// than 1e-17, which is always reached: the terms decay geometrically once
/// s p^k < 1.
pub fn log_qexp_small_neg(s: f64, p: f64) -> f64 {
    let mut acc = 0.0;
    let mut t = s;
    while t > 1e-17 {
        acc += t.ln_1p();
        t *= p;
    }
    // remainder: Σ ln(1+t p^j) ≤ t/(1-p)
    acc += t / (1.0 - p);
    -acc
}

/// ln ω_α(x;q)
pub fn log_weight(x: f64, ctx: &QContext) -> f64 {
    log_qexp_small_neg(x * x / ctx.q_2a1(), ctx.q * ctx.q)
}

/// ω_α(x;q), strictly positive and even.
pub fn weight(x: f64, ctx: &QContext) -> f64 {
    log_weight(x, ctx).exp()
}

/// ω_α in a chosen precision, by the product 1/∏(1 + t q^{2k}).
///
/// The running product is rescaled by powers of two so that it never
/// overflows; the result underflows to zero once it is below the type's
/// range.
pub fn weight_t<T: Real>(x: T, p: &QParams<T>) -> T {
    // 2^-332 is exact in binary, so the rescaling introduces no rounding
    let down = T::from_f64(2f64.powi(-332));
    let big = T::from_f64(1e100);
    let q2 = p.q * p.q;
    let stop = T::from_f64(T::epsilon() * 1e-3);
    let mut t = x * x / p.qa;
    let mut prod = T::one();
    let mut shifts = 0usize;
    while t > stop {
        prod = prod * (T::one() + t);
        if prod > big {
            prod = prod * down;
            shifts += 1;
        }
        t = t * q2;
    }
    let mut w = T::one() / prod;
    for _ in 0..shifts {
        w = w * down;
    }
    w
}

/// d_{n,α}, C_α and c_{q,α}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormConstants {
    pub d: f64,
    pub big_c: f64,
    pub c: f64,
}

/// Γ(−α)Γ(α+1) through the reflection formula.
fn gamma_pair(alpha: f64) -> Result<f64> {
    let s = (PI * alpha).sin();
    if s.abs() < 1e-12 {
        return Err(QError::PoleError(format!(
            "Γ(-α)Γ(α+1) has a pole at integer α = {alpha}"
        )));
    }
    Ok(-PI / s)
}

fn big_c_squared(ctx: &QContext, exponent: f64) -> Result<f64> {
    let q = ctx.q;
    let a = ctx.alpha;
    let g = gamma_pair(a)?;
    let q2 = q * q;
    let num = qpoch_inf_base(q2, q2, ctx)?.value;
    let den = qpoch_inf_base(q.powf(-2.0 * a), q2, ctx)?.value;
    let r = q.powf(exponent) * num / (g * den);
    if !(r > 0.0) || !r.is_finite() {
        return Err(QError::NegativeRadicand(format!(
            "C_α radicand {r:e} at q = {q}, α = {a}"
        )));
    }
    Ok(r)
}

/// c_{q,α}, the total mass ∫₀^∞ e_{q²}(−qy²) y^{2α+1} d_qy.
pub fn c_q_alpha(ctx: &QContext) -> Result<f64> {
    let q = ctx.q;
    let a = ctx.alpha;
    let q2 = q * q;
    let inf = |x: f64| qpoch_inf_base(x, q2, ctx).map(|t| t.value);
    let num = (1.0 - q) * inf(-q.powf(2.0 * a + 3.0))? * inf(-q.powf(-2.0 * a - 1.0))? * inf(q2)?;
    let den = inf(-q)? * inf(-q)? * inf(q.powf(2.0 * a + 2.0))?;
    Ok(num / den)
}

/// The constants as published: C_α² = q^{−(α+1)(α+½)} (q²;q²)_∞ / (Γ(−α)Γ(α+1) (q^{−2α};q²)_∞).
pub fn norm_constants(n: usize, ctx: &QContext) -> Result<NormConstants> {
    let a = ctx.alpha;
    let big_c = big_c_squared(ctx, -(a + 1.0) * (a + 0.5))?.sqrt();
    Ok(NormConstants { d: d_from(big_c, n, ctx), big_c, c: c_q_alpha(ctx)? })
}

fn d_from(big_c: f64, n: usize, ctx: &QContext) -> f64 {
    big_c * ctx.q.powf(0.5 * (n * n) as f64) * gen_qpoch(n, ctx).sqrt() / qpoch(ctx.q, n, ctx)
}

/// Constant that actually makes d h̃_n orthonormal against ω_α|x|^{2α+1}dx.
///
/// Differs from the published C_α by the factor q^{−(α+1)(α+½)/2}: the
/// Jacobian of t = q^{−2α−1}x² contributes q^{(α+1)(2α+1)}, not q^{(α+1)(α+½)}.
pub fn orthonormal_c(ctx: &QContext) -> Result<f64> {
    let a = ctx.alpha;
    Ok(big_c_squared(ctx, -(a + 1.0) * (2.0 * a + 1.0))?.sqrt())
}

/// Orthonormal d̂_{n,α}, built on [`orthonormal_c`].
pub fn orthonormal_d(n: usize, ctx: &QContext) -> Result<f64> {
    Ok(d_from(orthonormal_c(ctx)?, n, ctx))
}

/// The diagonal value ∫ (d_n h̃_n)² ω |x|^{2α+1} dx takes with the published
/// constant: q^{(α+1)(α+½)}.
pub fn published_diagonal(ctx: &QContext) -> f64 {
    let a = ctx.alpha;
    ctx.q.powf((a + 1.0) * (a + 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcore::Dd;

    fn ctx(q: f64, a: f64) -> QContext {
        QContext::new(q, a).unwrap()
    }

    #[test]
    fn weight_basics() {
        let c = ctx(0.5, 0.25);
        assert_eq!(weight(0.0, &c), 1.0);
        assert_eq!(weight(1.7, &c), weight(-1.7, &c));
        let c = ctx(0.5, -0.5);
        let p: f64 = (0..80).map(|k| 1.0 + 0.25f64.powi(k)).product();
        assert!((weight(1.0, &c) - 1.0 / p).abs() < 1e-15);
    }

    #[test]
    fn product_route_matches_log_route() {
        let c = ctx(0.6, 0.7);
        let p = QParams::<Dd>::from_ctx(&c);
        for x in [0.0, 0.3, 2.0, 9.0, 40.0] {
            let a = weight(x, &c);
            let b = weight_t(Dd::from(x), &p).to_f64();
            assert!((a - b).abs() <= 1e-13 * a, "{x}: {a} {b}");
        }
    }

    #[test]
    fn weight_underflows_gracefully() {
        let c = ctx(0.5, 0.0);
        let p = QParams::<f64>::from_ctx(&c);
        let w = weight_t(1e8, &p);
        assert!(w >= 0.0 && w < 1e-200);
    }

    #[test]
    fn reflection_at_half() {
        assert!((gamma_pair(-0.5).unwrap() - PI).abs() < 1e-15);
        assert_eq!(gamma_pair(1.0).unwrap_err().kind(), "PoleError");
    }

    #[test]
    fn d_ratio_recurrence() {
        let c = ctx(0.5, 0.25);
        let q = c.q;
        for n in 1..10 {
            let r = norm_constants(n, &c).unwrap().d / norm_constants(n - 1, &c).unwrap().d;
            let e = q.powf(n as f64 - 0.5) * qcore::gen_qint(n, &c).sqrt()
                / ((1.0 - q).sqrt() * qcore::qnumber(n as f64, &c));
            assert!((r - e).abs() < 1e-13 * e);
        }
    }
}
