//! q-exponentials, q-trigonometric functions and q-Bessel functions.
//!
//! `e_q` is always evaluated through its product `1/(z;q)_∞`, never the
//! power series, so it is usable for every real argument away from its poles.
//! Cos_q and Sin_q are the real series obtained from `E_q(±iz)`; no complex
//! arithmetic is involved anywhere.

use qcore::{
    qderiv_pow, qpoch_inf_base, sum_by_ratio, Dd, FunctionHandle, QContext, QError, QParams, Real,
    Result, TruncatedValue, Variant,
};

/// E_base(z) = (-z; base)_∞.
pub fn qexp_big(z: f64, base: f64, ctx: &QContext) -> Result<TruncatedValue> {
    qpoch_inf_base(-z, base, ctx)
}

/// E_base(z) = Σ base^{k(k-1)/2} z^k / (base;base)_k, the series route.
pub fn qexp_big_series(z: f64, base: f64, ctx: &QContext) -> Result<TruncatedValue> {
    sum_by_ratio(
        1.0,
        |k| base.powi(k as i32) * z / (1.0 - base.powi(k as i32 + 1)),
        "E_q series",
        ctx,
    )
}

/// e_base(z) = 1/(z; base)_∞.
pub fn qexp_small(z: f64, base: f64, ctx: &QContext) -> Result<TruncatedValue> {
    let mut t = z;
    let mut k = 0;
    while t > 0.5 && k < ctx.max_terms {
        if (1.0 - t).abs() < 1e-12 {
            return Err(QError::PoleError(format!("e_q({z}) with base {base}: z = base^-{k}")));
        }
        t *= base;
        k += 1;
    }
    let p = qpoch_inf_base(z, base, ctx)?;
    let value = 1.0 / p.value;
    Ok(TruncatedValue {
        value,
        tail_bound: p.tail_bound / (p.value.abs() * (p.value.abs() - p.tail_bound)),
        terms_used: p.terms_used,
    })
}

/// e_base(z) = Σ z^k/(base;base)_k, valid for |z| < 1 only.
pub fn qexp_small_series(z: f64, base: f64, ctx: &QContext) -> Result<TruncatedValue> {
    if z.abs() >= 1.0 {
        return Err(QError::DomainError(format!("e_q series needs |z| < 1, got {z}")));
    }
    sum_by_ratio(1.0, |k| z / (1.0 - base.powi(k as i32 + 1)), "e_q series", ctx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trig {
    Cos,
    Sin,
}

/// Cos_q / Sin_q.
pub fn qtrig(z: f64, which: Trig, base: f64, ctx: &QContext) -> Result<f64> {
    let q = base;
    let z2 = z * z;
    let v = match which {
        Trig::Cos => sum_by_ratio(
            1.0,
            |n| {
                let n = n as i32;
                -q.powi(4 * n + 1) * z2 / ((1.0 - q.powi(2 * n + 1)) * (1.0 - q.powi(2 * n + 2)))
            },
            "Cos_q series",
            ctx,
        )?,
        Trig::Sin => sum_by_ratio(
            z / (1.0 - q),
            |n| {
                let n = n as i32;
                -q.powi(4 * n + 3) * z2 / ((1.0 - q.powi(2 * n + 2)) * (1.0 - q.powi(2 * n + 3)))
            },
            "Sin_q series",
            ctx,
        )?,
    };
    Ok(v.value)
}

/// E_{q,α}(z) = Σ q^{k(k-1)/2} z^k / (q;q)_{k,α}.
pub fn qexp_gen(z: f64, ctx: &QContext) -> Result<f64> {
    let q = ctx.q;
    let a = ctx.alpha;
    let v = sum_by_ratio(
        1.0,
        |k| q.powi(k as i32) * z / (1.0 - q.powf(qcore::gen_exponent(k + 1, a))),
        "E_{q,alpha} series",
        ctx,
    )?;
    Ok(v.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselKind {
    /// Jackson's second q-Bessel function J^{(2)}
    SecondJackson,
    /// Hahn–Exton J^{(3)}
    HahnExton,
    /// j_α, the normalized Hahn–Exton function without prefactors
    Modified,
}

impl BesselKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "second_jackson" | "J2" => Some(BesselKind::SecondJackson),
            "hahn_exton" | "J3" => Some(BesselKind::HahnExton),
            "modified" | "j" => Some(BesselKind::Modified),
            _ => None,
        }
    }
}

/// Σ (-1)^n q^{n(n+1)} x^{2n} / (q;q)_{2n,ν}, with `q2nu2 = q^{2ν+2}`.
///
/// Generic so the difference-operator checks can run it in double-double.
pub fn jmod_t<T: Real>(x: T, q: T, q2nu2: T, tol: f64, max_terms: usize) -> Result<T> {
    let x2 = x * x;
    let mut sum = T::one();
    let mut mass = 1.0;
    let mut t = T::one();
    let mut q2n = T::one(); // q^{2n}
    for n in 0..max_terms {
        let q2n2 = q2n * q * q;
        let r = -(q2n2 * x2) / ((T::one() - q2n * q2nu2) * (T::one() - q2n2));
        t = t * r;
        sum = sum + t;
        let ta = t.abs().to_f64();
        mass += ta;
        let ra = r.abs().to_f64();
        if ta == 0.0 || (ra < 1.0 && ta <= tol * mass && n > 0) {
            return Ok(sum);
        }
        q2n = q2n2;
    }
    Err(QError::NonConvergence { what: "j_alpha series".into(), terms: max_terms })
}

fn jmod(x: f64, order: f64, ctx: &QContext) -> Result<f64> {
    let q = ctx.q;
    jmod_t(x, q, q.powf(2.0 * order + 2.0), ctx.series_tol, ctx.max_terms)
}

/// (q^{2ν+2};q²)_∞ / (q²;q²)_∞
fn bessel_prefactor(order: f64, ctx: &QContext) -> Result<f64> {
    let q2 = ctx.q * ctx.q;
    let num = qpoch_inf_base(ctx.q.powf(2.0 * order + 2.0), q2, ctx)?;
    let den = qpoch_inf_base(q2, q2, ctx)?;
    Ok(num.value / den.value)
}

fn real_power(x: f64, order: f64) -> Result<f64> {
    if x > 0.0 {
        return Ok(x.powf(order));
    }
    if order.fract() == 0.0 && (x != 0.0 || order >= 0.0) {
        return Ok(x.powi(order as i32));
    }
    if x == 0.0 && order > 0.0 {
        return Ok(0.0);
    }
    Err(QError::DomainError(format!("x^{order} is not real-valued at x = {x}")))
}

/// q-Bessel function of the given kind and order (order > -1).
pub fn qbessel(x: f64, order: f64, kind: BesselKind, ctx: &QContext) -> Result<f64> {
    if !(order > -1.0) {
        return Err(QError::DomainError(format!("q-Bessel order must exceed -1, got {order}")));
    }
    match kind {
        BesselKind::Modified => jmod(x, order, ctx),
        BesselKind::HahnExton => {
            let pre = bessel_prefactor(order, ctx)? * real_power(x, order)?;
            Ok(pre * jmod(x, order, ctx)?)
        }
        BesselKind::SecondJackson => {
            let q = ctx.q;
            let h = x / 2.0;
            let pre = bessel_prefactor(order, ctx)? * real_power(h, order)?;
            let h2 = h * h;
            let s = sum_by_ratio(
                1.0,
                |n| {
                    let n = n as i32;
                    -q.powf(4.0 * n as f64 + 2.0 + 2.0 * order) * h2
                        / ((1.0 - q.powf(2.0 * n as f64 + 2.0 * order + 2.0)) * (1.0 - q.powi(2 * n + 2)))
                },
                "J2 series",
                ctx,
            )?;
            Ok(pre * s.value)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselParity {
    /// Δ^{2n} j_α(λx)
    EvenOrder,
    /// Δ^{2n+1} j_α(λx); n = 0 is the single D_q identity
    OddOrder,
}

/// |Δ^k j_α(λx) - closed form| for k = 2n or 2n+1.
///
/// Both sides are evaluated in double-double; the iterated difference
/// quotient divides by `((1-q)x)^k` and would otherwise eat the f64 digits.
pub fn bessel_delta_residual(
    n: usize,
    lambda: f64,
    x: f64,
    parity: BesselParity,
    ctx: &QContext,
) -> Result<f64> {
    if x == 0.0 {
        return Err(QError::DomainError("Δ-identities are evaluated at x != 0".into()));
    }
    let p = QParams::<Dd>::from_ctx(ctx);
    let q = p.q;
    let lam = Dd::from(lambda);
    let tol = Dd::epsilon();
    let max = ctx.max_terms;
    let q2a2 = p.qa * q; // q^{2α+2}
    let j_alpha = FunctionHandle::<Dd>::fallible(move |y| jmod_t(lam * y, q, q2a2, tol, max));
    let xd = Dd::from(x);
    let one = Dd::one();
    let omq = one - q;
    let (k, rhs) = match parity {
        BesselParity::EvenOrder => {
            let sign = if n % 2 == 0 { one } else { -one };
            let c = sign * q.powi((n * (n + 1)) as i32) * lam.powi(2 * n as i32) / omq.powi(2 * n as i32);
            let arg = q.powi(n as i32) * lam * xd;
            (2 * n, c * jmod_t(arg, q, q2a2, tol, max)?)
        }
        BesselParity::OddOrder => {
            let sign = if n % 2 == 1 { one } else { -one };
            let c = sign * q.powi(((n + 1) * (n + 2)) as i32) * lam.powi(2 * n as i32 + 2)
                / (omq.powi(2 * n as i32 + 1) * (one - q2a2));
            let arg = q.powi(n as i32 + 1) * lam * xd;
            (2 * n + 1, c * xd * jmod_t(arg, q, q2a2 * q * q, tol, max)?)
        }
    };
    let lhs = qderiv_pow(&j_alpha, k, Variant::DeltaAlpha, ctx).eval(xd)?;
    Ok((lhs - rhs).abs().to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: f64, a: f64) -> QContext {
        QContext::new(q, a).unwrap()
    }

    #[test]
    fn exp_big_trivia() {
        let c = ctx(0.5, 0.0);
        assert_eq!(qexp_big(0.0, 0.5, &c).unwrap().value, 1.0);
        assert_eq!(qexp_big(-1.0, 0.5, &c).unwrap().value, 0.0);
    }

    #[test]
    fn exp_big_two_routes() {
        let c = ctx(0.5, 0.0);
        for z in [0.3, -0.7, 2.5, -3.1] {
            let a = qexp_big(z, 0.5, &c).unwrap().value;
            let b = qexp_big_series(z, 0.5, &c).unwrap().value;
            assert!((a - b).abs() < 1e-13 * a.abs().max(1.0), "{z}: {a} {b}");
        }
    }

    #[test]
    fn exp_small_pole_and_routes() {
        let c = ctx(0.5, 0.0);
        assert_eq!(qexp_small(0.0, 0.5, &c).unwrap().value, 1.0);
        assert_eq!(qexp_small(1.0, 0.5, &c).unwrap_err().kind(), "PoleError");
        assert_eq!(qexp_small(4.0, 0.5, &c).unwrap_err().kind(), "PoleError");
        let a = qexp_small(0.5, 0.5, &c).unwrap().value;
        let b = qexp_small_series(0.5, 0.5, &c).unwrap().value;
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn trig_at_zero() {
        let c = ctx(0.5, 0.0);
        assert_eq!(qtrig(0.0, Trig::Cos, 0.5, &c).unwrap(), 1.0);
        assert_eq!(qtrig(0.0, Trig::Sin, 0.5, &c).unwrap(), 0.0);
    }

    #[test]
    fn gen_exp_collapses() {
        let c = ctx(0.5, -0.5);
        let a = qexp_gen(0.4, &c).unwrap();
        let b = qexp_big(0.4, 0.5, &c).unwrap().value;
        assert!((a - b).abs() < 1e-14);
        assert_eq!(qexp_gen(0.0, &ctx(0.3, 0.7)).unwrap(), 1.0);
    }

    #[test]
    fn modified_at_origin() {
        let c = ctx(0.5, 0.25);
        assert_eq!(qbessel(0.0, 0.25, BesselKind::Modified, &c).unwrap(), 1.0);
        assert_eq!(qbessel(-0.5, 0.25, BesselKind::SecondJackson, &c).unwrap_err().kind(), "DomainError");
        assert!(qbessel(-0.5, 2.0, BesselKind::HahnExton, &c).is_ok());
    }

    #[test]
    fn delta_residual_trivial_case_is_exact() {
        let c = ctx(0.5, 0.25);
        assert_eq!(bessel_delta_residual(0, 1.3, 0.7, BesselParity::EvenOrder, &c).unwrap(), 0.0);
    }

    #[test]
    fn delta_residual_examples() {
        let c = ctx(0.5, 0.25);
        assert!(bessel_delta_residual(1, 1.0, 0.5, BesselParity::EvenOrder, &c).unwrap() < 1e-10);
        assert!(bessel_delta_residual(0, 1.0, 0.8, BesselParity::OddOrder, &c).unwrap() < 1e-10);
    }

    #[test]
    fn half_order_bessel_is_trigonometric() {
        let c = ctx(0.5, 0.0);
        let q = c.q;
        let q2 = q * q;
        let x: f64 = 0.6;
        let pre = qpoch_inf_base(q, q2, &c).unwrap().value / qpoch_inf_base(q2, q2, &c).unwrap().value / x.sqrt();
        let jm = qbessel(2.0 * x, -0.5, BesselKind::SecondJackson, &c).unwrap();
        let jp = qbessel(2.0 * x, 0.5, BesselKind::SecondJackson, &c).unwrap();
        assert!((jm - pre * qtrig(x, Trig::Cos, q, &c).unwrap()).abs() < 1e-14);
        assert!((jp - pre * qtrig(x, Trig::Sin, q, &c).unwrap()).abs() < 1e-14);
    }
}
