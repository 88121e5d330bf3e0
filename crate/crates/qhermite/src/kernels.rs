//! Poisson kernel at one, the Bessel expansion of x^{−α−1}J_{α+1} and the
//! Rogers–Ramanujan type sum.

use qcore::{qpoch_inf_base, sum_by_ratio, QContext, QError, Result, TruncatedValue};
use qfunctions::{qbessel, qtrig, BesselKind, Trig};

use crate::poly::HermiteFamily;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelForm {
    /// Bessel-product closed form, x, y > 0
    General,
    /// α = −½ with Cos_q / Sin_q
    HalfIntegerCorollary,
}

/// Sum terms until four consecutive ones fall below `series_tol` relative to
/// the running mass. Individual terms of these sums can vanish (parity,
/// polynomial zeros), so a single small term proves nothing.
fn sum_terms<F: FnMut(usize) -> f64>(mut term: F, cap: usize, what: &str, ctx: &QContext) -> Result<TruncatedValue> {
    let mut sum = 0.0;
    let mut mass = 0.0;
    let mut run = 0;
    for n in 0..=cap {
        let t = term(n);
        if !t.is_finite() {
            break;
        }
        sum += t;
        mass += t.abs();
        if t.abs() <= ctx.series_tol * mass {
            run += 1;
            if run >= 4 {
                return Ok(TruncatedValue { value: sum, tail_bound: t.abs(), terms_used: n + 1 });
            }
        } else {
            run = 0;
        }
    }
    Err(QError::NonConvergence { what: what.into(), terms: cap })
}

fn kernel_cap(ctx: &QContext) -> usize {
    ctx.max_terms.min(300)
}

/// (LHS, RHS) of the Poisson kernel identity.
pub fn poisson_kernel_sides(x: f64, y: f64, which: KernelForm, ctx: &QContext) -> Result<(TruncatedValue, f64)> {
    if (x - y).abs() < 1e-8 {
        return Err(QError::DomainError(format!("Poisson kernel needs x != y, got x = {x}, y = {y}")));
    }
    let q = ctx.q;
    let q2 = q * q;
    match which {
        KernelForm::General => {
            if !(x > 0.0 && y > 0.0) {
                return Err(QError::DomainError("general Poisson kernel needs x, y > 0".into()));
            }
            let a = ctx.alpha;
            let cap = kernel_cap(ctx);
            let fam = HermiteFamily::new(ctx, cap);
            let s = q.powf(a + 0.5);
            let (xs, ys) = (s * x, s * y);
            let lhs = sum_terms(
                |n| fam.gen_qpoch(n) / fam.qpoch(n).powi(2) * fam.scaled(n, xs) * fam.scaled(n, ys),
                cap,
                "Poisson kernel series",
                ctx,
            )?;
            let j = |z: f64, nu: f64| qbessel(2.0 * z, nu, BesselKind::SecondJackson, ctx);
            let bracket = j(x, a + 1.0)? * j(y, a)? - j(x, a)? * j(y, a + 1.0)?;
            let pre = qpoch_inf_base(q2, q2, ctx)?.value / qpoch_inf_base(q.powf(2.0 * a + 2.0), q2, ctx)?.value;
            Ok((lhs, pre * (x * y).powf(-a) * bracket / (x - y)))
        }
        KernelForm::HalfIntegerCorollary => {
            let ctx = &ctx.with_alpha(-0.5)?;
            let cap = kernel_cap(ctx);
            let fam = HermiteFamily::new(ctx, cap);
            // q^{n²} h̃_n(x) h̃_n(y) = s_n(x) s_n(y)
            let lhs = sum_terms(
                |n| fam.scaled(n, x) * fam.scaled(n, y) / fam.qpoch(n),
                cap,
                "Poisson kernel series (α = -1/2)",
                ctx,
            )?;
            let t = |z: f64, w: Trig| qtrig(z, w, q, ctx);
            let bracket = t(x, Trig::Sin)? * t(y, Trig::Cos)? - t(x, Trig::Cos)? * t(y, Trig::Sin)?;
            let pre = qpoch_inf_base(q, q2, ctx)?.value / qpoch_inf_base(q2, q2, ctx)?.value;
            Ok((lhs, pre * bracket / (x - y)))
        }
    }
}

/// |LHS − RHS| / max(1, |RHS|) for the Poisson kernel at one.
pub fn poisson_kernel_residual(x: f64, y: f64, which: KernelForm, ctx: &QContext) -> Result<f64> {
    let (l, r) = poisson_kernel_sides(x, y, which, ctx)?;
    Ok((l.value - r).abs() / r.abs().max(1.0))
}

/// Σ (−1)ⁿ q^{n(2n+1)} (q^{2α+2};q²)_n / (q;q)_{2n} h̃_{2n}(q^{α+½}x) against
/// x^{−α−1} J_{α+1}(2x;q²); relative to max(1, |RHS|).
pub fn bessel_expansion_residual(x: f64, ctx: &QContext) -> Result<f64> {
    let (l, r) = bessel_expansion_sides(x, ctx)?;
    Ok((l.value - r).abs() / r.abs().max(1.0))
}

pub fn bessel_expansion_sides(x: f64, ctx: &QContext) -> Result<(TruncatedValue, f64)> {
    if !(x > 0.0) {
        return Err(QError::DomainError(format!("Bessel expansion needs x > 0, got {x}")));
    }
    let q = ctx.q;
    let a = ctx.alpha;
    let cap = kernel_cap(ctx);
    let fam = HermiteFamily::new(ctx, 2 * cap);
    let xs = q.powf(a + 0.5) * x;
    let q2a2 = q.powf(2.0 * a + 2.0);
    let mut poch = 1.0; // (q^{2α+2};q²)_n
    // q^{n(2n+1)} h̃_{2n} = q^n s_{2n}
    let lhs = sum_terms(
        |n| {
            if n > 0 {
                poch *= 1.0 - q2a2 * q.powi(2 * (n as i32 - 1));
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * q.powi(n as i32) * poch / fam.qpoch(2 * n) * fam.scaled(2 * n, xs)
        },
        cap,
        "Bessel expansion series",
        ctx,
    )?;
    let rhs = x.powf(-a - 1.0) * qbessel(2.0 * x, a + 1.0, BesselKind::SecondJackson, ctx)?;
    Ok((lhs, rhs))
}

/// The sum exactly as printed:
/// |Σ q^{2n} (q^{2α+2};q²)_n (q;q²)_n / (q²;q²)_n² − (q^{2α+4};q²)_∞ / (q²;q²)_∞|.
pub fn rogers_ramanujan_residual(ctx: &QContext) -> Result<f64> {
    let q = ctx.q;
    let q2a2 = q.powf(2.0 * ctx.alpha + 2.0);
    let lhs = sum_by_ratio(
        1.0,
        |n| {
            let q2n = q.powi(2 * n as i32);
            q * q * (1.0 - q2a2 * q2n) * (1.0 - q * q2n) / (1.0 - q * q * q2n).powi(2)
        },
        "Rogers-Ramanujan series",
        ctx,
    )?;
    Ok((lhs.value - rogers_ramanujan_rhs(ctx)?).abs())
}

/// The same sum with (q;q)_{2n} in place of (q²;q²)_n², which the q-binomial
/// theorem confirms: Σ q^{2n} (q^{2α+2};q²)_n / (q²;q²)_n.
pub fn rogers_ramanujan_corrected_residual(ctx: &QContext) -> Result<f64> {
    let q = ctx.q;
    let q2a2 = q.powf(2.0 * ctx.alpha + 2.0);
    let lhs = sum_by_ratio(
        1.0,
        |n| {
            let q2n = q.powi(2 * n as i32);
            q * q * (1.0 - q2a2 * q2n) / (1.0 - q * q * q2n)
        },
        "Rogers-Ramanujan series",
        ctx,
    )?;
    Ok((lhs.value - rogers_ramanujan_rhs(ctx)?).abs())
}

fn rogers_ramanujan_rhs(ctx: &QContext) -> Result<f64> {
    let q = ctx.q;
    let q2 = q * q;
    Ok(qpoch_inf_base(q.powf(2.0 * ctx.alpha + 4.0), q2, ctx)?.value / qpoch_inf_base(q2, q2, ctx)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: f64, a: f64) -> QContext {
        QContext::new(q, a).unwrap()
    }

    #[test]
    fn poisson_points() {
        let c = ctx(0.5, 0.25);
        assert!(poisson_kernel_residual(0.8, 0.3, KernelForm::General, &c).unwrap() < 1e-8);
        assert!(poisson_kernel_residual(0.8, 0.3, KernelForm::HalfIntegerCorollary, &c).unwrap() < 1e-8);
        let e = poisson_kernel_residual(0.5, 0.5, KernelForm::General, &c).unwrap_err();
        assert_eq!(e.kind(), "DomainError");
    }

    #[test]
    fn kernel_symmetric() {
        let c = ctx(0.6, 0.7);
        let (_, a) = poisson_kernel_sides(0.9, 0.2, KernelForm::General, &c).unwrap();
        let (_, b) = poisson_kernel_sides(0.2, 0.9, KernelForm::General, &c).unwrap();
        assert!((a - b).abs() < 1e-14 * a.abs());
    }

    #[test]
    fn expansion_points() {
        assert!(bessel_expansion_residual(0.5, &ctx(0.5, 0.25)).unwrap() < 1e-9);
        assert!(bessel_expansion_residual(1.2, &ctx(0.6, 0.0)).unwrap() < 1e-9);
    }

    #[test]
    fn rr_corrected_holds_printed_does_not() {
        for (q, a) in [(0.5, 0.25), (0.8, 0.0), (0.5, -0.5)] {
            let c = ctx(q, a);
            assert!(rogers_ramanujan_corrected_residual(&c).unwrap() < 1e-12);
            assert!(rogers_ramanujan_residual(&c).unwrap() > 1e-3);
        }
    }
}
