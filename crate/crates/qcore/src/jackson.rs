//! Jackson q-integrals over the half line and the whole line.

use crate::context::{QContext, TruncatedValue};
use crate::deriv::FunctionHandle;
use crate::error::{QError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacksonDomain {
    /// ∫_0^∞ f d_q x = (1-q) Σ q^n f(q^n)
    HalfLine,
    /// ∫_{-∞}^{∞} f d_q x = (1-q) Σ q^n [f(q^n) + f(-q^n)]
    Line,
}

/// Jackson integral over the lattice `q^n`, `n ∈ Z`.
///
/// The sum starts on `[lattice_lo, lattice_hi]`. Each end is then checked:
/// when the terms there still decay geometrically but the extrapolated
/// remainder exceeds `series_tol` (relative to Σ|terms|), the window is
/// widened in that direction, up to `max_terms` extra points per side.
/// Terms that are above tolerance and not decaying mean the integral does
/// not converge and are reported as such rather than truncated.
pub fn jackson_integral(
    f: &FunctionHandle<f64>,
    domain: JacksonDomain,
    ctx: &QContext,
) -> Result<TruncatedValue> {
    let q = ctx.q;
    let term = |n: i32| -> Result<f64> {
        let y = q.powi(n);
        let v = match domain {
            JacksonDomain::HalfLine => f.eval(y)?,
            JacksonDomain::Line => f.eval(y)? + f.eval(-y)?,
        };
        let t = (1.0 - q) * y * v;
        if t.is_finite() {
            Ok(t)
        } else {
            Err(QError::nonconv(format!("Jackson integrand not finite at q^{n}"), 0))
        }
    };

    let mut sum = 0.0;
    let mut mass = 0.0;
    let mut terms = Vec::with_capacity((ctx.lattice_hi - ctx.lattice_lo + 1) as usize);
    for n in ctx.lattice_lo..=ctx.lattice_hi {
        let t = term(n)?;
        terms.push(t);
        sum += t;
        mass += t.abs();
    }
    let mut used = terms.len();

    let mut tail = 0.0;
    for dir in [1i32, -1] {
        let (mut n, mut last, mut prev) = if dir > 0 {
            (ctx.lattice_hi, terms[terms.len() - 1], terms[terms.len() - 2])
        } else {
            (ctx.lattice_lo, terms[0], terms[1])
        };
        let mut extra = 0usize;
        loop {
            let scale = ctx.series_tol * mass.max(f64::MIN_POSITIVE);
            let r = if last == 0.0 { 0.0 } else { last.abs() / prev.abs() };
            if r < 1.0 {
                let est = last.abs() * r / (1.0 - r);
                if est <= scale {
                    tail += est;
                    break;
                }
            } else if last.abs() > scale {
                let side = if dir > 0 { "small" } else { "large" };
                return Err(QError::nonconv(
                    format!("Jackson integral: terms not decaying at the {side}-argument end (n = {n})"),
                    used,
                ));
            }
            if extra >= ctx.max_terms {
                return Err(QError::nonconv("Jackson integral: window extension exhausted", used));
            }
            n += dir;
            extra += 1;
            used += 1;
            prev = last;
            last = term(n)?;
            sum += last;
            mass += last.abs();
        }
    }
    Ok(TruncatedValue { value: sum, tail_bound: tail, terms_used: used })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: f64) -> QContext {
        QContext::new(q, 0.0).unwrap()
    }

    #[test]
    fn zero_function() {
        let v = jackson_integral(&FunctionHandle::constant(0.0), JacksonDomain::Line, &ctx(0.5)).unwrap();
        assert_eq!(v.value, 0.0);
        assert_eq!(v.tail_bound, 0.0);
    }

    #[test]
    fn odd_function_on_line() {
        let f = FunctionHandle::new(|x: f64| x * (-x * x).exp());
        let v = jackson_integral(&f, JacksonDomain::Line, &ctx(0.5)).unwrap();
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn exponential_halfline() {
        // ∫_0^∞ e^{-x} d_q x = (1-q) Σ q^n e^{-q^n}; compare with a brute sum
        let q = 0.7;
        let f = FunctionHandle::new(|x: f64| (-x).exp());
        let v = jackson_integral(&f, JacksonDomain::HalfLine, &ctx(q)).unwrap();
        let brute: f64 = (-200..400).map(|n| (1.0 - q) * q.powi(n) * (-q.powi(n)).exp()).sum();
        assert!((v.value - brute).abs() < 1e-13, "{} vs {}", v.value, brute);
        assert!(v.tail_bound <= 1e-13);
    }

    #[test]
    fn window_extends_for_slow_decay() {
        // x^0.1 e^{-x}: terms ~ q^{1.1 n} at the small end, far beyond n = 120 at q = 0.8
        let f = FunctionHandle::new(|x: f64| x.powf(0.1) * (-x).exp());
        let c = ctx(0.8);
        let v = jackson_integral(&f, JacksonDomain::HalfLine, &c).unwrap();
        assert!(v.terms_used > 161);
        assert!(v.tail_bound <= 1e-13);
    }

    #[test]
    fn divergence_is_detected() {
        let f = FunctionHandle::new(|x: f64| 1.0 / x);
        let e = jackson_integral(&f, JacksonDomain::HalfLine, &ctx(0.5)).unwrap_err();
        assert_eq!(e.kind(), "NonConvergence");
    }
}
