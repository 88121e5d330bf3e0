//! q-shifted factorials, q-numbers and their generalized (α-dependent) forms.

use crate::context::{QContext, TruncatedValue};
use crate::error::{QError, Result};
use crate::real::Real;

/// (a;q)_n = ∏_{k<n} (1 - a q^k).
pub fn qpoch(a: f64, n: usize, ctx: &QContext) -> f64 {
    qpoch_base(a, ctx.q, n)
}

/// (a;base)_n for an explicit base; `qpoch` is the `base = q` case.
pub fn qpoch_base(a: f64, base: f64, n: usize) -> f64 {
    let mut p = 1.0;
    let mut t = a;
    for _ in 0..n {
        p *= 1.0 - t;
        t *= base;
    }
    p
}

/// (a;q)_∞.
pub fn qpoch_inf(a: f64, ctx: &QContext) -> Result<TruncatedValue> {
    qpoch_inf_base(a, ctx.q, ctx)
}

/// (a;base)_∞ truncated once the remainder factor is provably within
/// `series_tol` (relative to the partial product).
///
/// With `t = |a| base^N < 1` the discarded factor `R` satisfies
/// `|ln R| <= t / ((1-base)(1-t))`, hence `|P - P_N| <= |P_N| (e^ε - 1)`.
pub fn qpoch_inf_base(a: f64, base: f64, ctx: &QContext) -> Result<TruncatedValue> {
    if !a.is_finite() {
        return Err(QError::DomainError(format!("non-finite argument {a} to (a;q)_inf")));
    }
    if a == 0.0 {
        return Ok(TruncatedValue::exact(1.0, 0));
    }
    let mut p = 1.0;
    let mut t = a;
    for k in 1..=ctx.max_terms {
        p *= 1.0 - t;
        t *= base;
        if p == 0.0 {
            return Ok(TruncatedValue::exact(0.0, k));
        }
        if !p.is_finite() {
            return Err(QError::DomainError(format!("(a;q)_inf overflows for a = {a}")));
        }
        let at = t.abs();
        if at < 1.0 {
            let eps = at / ((1.0 - base) * (1.0 - at));
            let tail = p.abs() * eps.exp_m1();
            if tail <= ctx.series_tol * p.abs() {
                return Ok(TruncatedValue { value: p, tail_bound: tail, terms_used: k });
            }
        }
    }
    Err(QError::nonconv(format!("(a;q)_inf with a = {a}, base = {base}"), ctx.max_terms))
}

/// ⟦x⟧_q = (1 - q^x)/(1 - q).
pub fn qnumber(x: f64, ctx: &QContext) -> f64 {
    (1.0 - ctx.q.powf(x)) / (1.0 - ctx.q)
}

/// Symmetric q-number [x]_b = (b^x - b^-x)/(b - b^-1).
pub fn sym_qnumber(x: f64, base: f64) -> f64 {
    (base.powf(x) - base.powf(-x)) / (base - 1.0 / base)
}

/// Exponent e_k with ⟦k⟧_{q,α} = ⟦e_k⟧_q: k for even k, k + 2α + 1 for odd k.
pub fn gen_exponent(k: usize, alpha: f64) -> f64 {
    if k % 2 == 0 {
        k as f64
    } else {
        k as f64 + 2.0 * alpha + 1.0
    }
}

/// Generalized q-integer ⟦n⟧_{q,α}.
pub fn gen_qint(n: usize, ctx: &QContext) -> f64 {
    qnumber(gen_exponent(n, ctx.alpha), ctx)
}

/// (q;q)_{n,α} = (1-q)^n n!_{q,α}.
pub fn gen_qpoch(n: usize, ctx: &QContext) -> f64 {
    (1..=n).map(|k| 1.0 - ctx.q.powf(gen_exponent(k, ctx.alpha))).product()
}

/// 1 for even n, 0 for odd n.
pub fn theta(n: usize) -> u8 {
    u8::from(n % 2 == 0)
}

/// `q` and `q^(2α+1)` carried in a chosen scalar type.
///
/// All α-dependent powers used by the difference operators are products of
/// these two numbers and integer powers of `q`, so a single rounding of
/// `q^(2α+1)` is the only place α enters. That keeps the identities exact
/// in whichever precision `T` offers.
#[derive(Debug, Clone, Copy)]
pub struct QParams<T> {
    pub q: T,
    /// q^(2α+1)
    pub qa: T,
    pub alpha: f64,
}

impl<T: Real> QParams<T> {
    pub fn from_ctx(ctx: &QContext) -> Self {
        let q = T::from_f64(ctx.q);
        QParams { q, qa: q.powf(T::from_f64(2.0 * ctx.alpha + 1.0)), alpha: ctx.alpha }
    }

    /// q^{e_k}, see [`gen_exponent`].
    pub fn gen_power(&self, k: usize) -> T {
        let qk = self.q.powi(k as i32);
        if k % 2 == 0 {
            qk
        } else {
            qk * self.qa
        }
    }

    /// (q;q)_{n,α}.
    pub fn gen_qpoch(&self, n: usize) -> T {
        let mut p = T::one();
        for k in 1..=n {
            p = p * (T::one() - self.gen_power(k));
        }
        p
    }

    /// (a;base)_n in `T`.
    pub fn qpoch(&self, a: T, base: T, n: usize) -> T {
        let mut p = T::one();
        let mut t = a;
        for _ in 0..n {
            p = p * (T::one() - t);
            t = t * base;
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: f64, a: f64) -> QContext {
        QContext::new(q, a).unwrap()
    }

    #[test]
    fn qpoch_examples() {
        let c = ctx(0.5, 0.0);
        assert_eq!(qpoch(0.7, 0, &c), 1.0);
        assert_eq!(qpoch(1.0, 3, &c), 0.0);
        assert!((qpoch(0.5, 2, &c) - 0.375).abs() < 1e-16);
    }

    #[test]
    fn qpoch_inf_zero_argument() {
        let v = qpoch_inf(0.0, &ctx(0.5, 0.0)).unwrap();
        assert_eq!(v.value, 1.0);
        assert_eq!(v.tail_bound, 0.0);
    }

    #[test]
    fn qpoch_inf_matches_long_product() {
        let c = ctx(0.5, 0.0);
        let v = qpoch_inf(0.5, &c).unwrap();
        let oracle: f64 = (0..64).map(|k| 1.0 - 0.5f64.powi(k + 1)).product();
        assert!((v.value - oracle).abs() < 1e-14);
        assert!((v.value - 0.288_788_095_1).abs() < 1e-10);
        assert!(v.tail_bound <= c.series_tol * v.value.abs());
    }

    #[test]
    fn qpoch_inf_negative_argument() {
        let c = ctx(0.5, 0.0);
        let v = qpoch_inf(-4.0, &c).unwrap();
        let oracle: f64 = (0..80).map(|k| 1.0 + 4.0 * 0.5f64.powi(k)).product();
        assert!(((v.value - oracle) / oracle).abs() < 1e-14);
    }

    #[test]
    fn qpoch_inf_hits_max_terms() {
        let c = QContext { max_terms: 3, ..ctx(0.9, 0.0) };
        assert!(matches!(qpoch_inf(0.5, &c), Err(QError::NonConvergence { .. })));
    }

    #[test]
    fn qnumber_examples() {
        let c = ctx(0.5, 0.0);
        assert_eq!(qnumber(0.0, &c), 0.0);
        assert_eq!(qnumber(1.0, &c), 1.0);
        assert!((qnumber(2.0, &c) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn sym_qnumber_examples() {
        assert_eq!(sym_qnumber(0.0, 0.3), 0.0);
        assert!((sym_qnumber(1.0, 0.3) - 1.0).abs() < 1e-15);
        assert!((sym_qnumber(2.0, 0.25) - 4.25).abs() < 1e-14);
        assert!((sym_qnumber(-1.7, 0.4) + sym_qnumber(1.7, 0.4)).abs() < 1e-14);
    }

    #[test]
    fn gen_qint_examples() {
        let c = ctx(0.5, 0.0);
        assert_eq!(gen_qint(0, &c), 0.0);
        assert!((gen_qint(1, &c) - 1.5).abs() < 1e-15);
        let c = ctx(0.5, 0.77);
        assert_eq!(gen_qint(4, &c), qnumber(4.0, &c));
    }

    #[test]
    fn gen_qpoch_examples() {
        assert_eq!(gen_qpoch(0, &ctx(0.5, 0.3)), 1.0);
        assert!((gen_qpoch(2, &ctx(0.5, 0.0)) - 0.5625).abs() < 1e-15);
        let c = ctx(0.37, -0.5);
        assert!((gen_qpoch(3, &c) - qpoch(c.q, 3, &c)).abs() < 1e-15);
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(0), 1);
        assert_eq!(theta(1), 0);
        assert_eq!(theta(7), 0);
    }

    #[test]
    fn params_agree_with_f64_routines() {
        let c = ctx(0.45, 0.25);
        let p = QParams::<f64>::from_ctx(&c);
        for n in 0..10 {
            assert!((p.gen_qpoch(n) - gen_qpoch(n, &c)).abs() < 1e-15);
        }
    }
}
