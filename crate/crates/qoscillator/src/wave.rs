//! Wave functions φ_n and the operators a, a⁺, H acting on functions.

use qcore::{gen_qint, Dd, FunctionHandle, QContext, QError, QParams, Real, Result};
use qhermite::{eval_coefficients, integrate, log_weight, orthonormal_d, weight_t, HermiteFamily, QuadConfig};

/// φ_n(x) = d̂_n √ω(x) h̃_n(x), normalized to one against |x|^{2α+1}dx.
///
/// Evaluated in log space so large |x| neither overflows h̃_n nor
/// underflows ω.
pub fn phi(n: usize, x: f64, ctx: &QContext) -> Result<f64> {
    let d = orthonormal_d(n, ctx)?;
    let fam = HermiteFamily::new(ctx, n);
    let (s, l) = fam.log_abs_scaled(n, x);
    let l = l - 0.5 * (n * n) as f64 * ctx.q.ln() + 0.5 * log_weight(x, ctx) + d.ln();
    Ok(s * l.exp())
}

/// φ_n as a handle.
#[derive(Debug, Clone)]
pub struct WaveFunction<T: Real = Dd> {
    pub n: usize,
    pub handle: FunctionHandle<T>,
}

impl<T: Real> WaveFunction<T> {
    pub fn new(n: usize, ctx: &QContext) -> Result<Self> {
        let p = QParams::<T>::from_ctx(ctx);
        let d = T::from_f64(orthonormal_d(n, ctx)?);
        let coef = HermiteFamily::coefficients_t(n, &p);
        let handle = FunctionHandle::new(move |x: T| d * weight_t(x, &p).sqrt() * eval_coefficients(n, &coef, x));
        Ok(WaveFunction { n, handle })
    }

    pub fn eval(&self, x: T) -> Result<T> {
        self.handle.eval(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    A,
    APlus,
    H,
}

impl Ladder {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "a" => Some(Ladder::A),
            "a_plus" | "a+" => Some(Ladder::APlus),
            "H" | "h" => Some(Ladder::H),
            _ => None,
        }
    }
}

/// Apply a, a⁺ or H to `f` at `x ≠ 0`.
///
/// With t₀ = q^{−2α−1}x² and t₁ = q^{−2α−3}x², the square-root factor
/// multiplying f(x/q) is √(1+t₁) (multiply, then dilate) and the one
/// multiplying f(qx) is √(1+t₀) (dilate, then multiply).
pub fn apply_ladder<T: Real>(f: &FunctionHandle<T>, which: Ladder, x: T, ctx: &QContext) -> Result<T> {
    if x == T::zero() {
        return Err(QError::DomainError("ladder operators are singular at x = 0".into()));
    }
    let p = QParams::<T>::from_ctx(ctx);
    let (q, qa) = (p.q, p.qa);
    let one = T::one();
    let half = T::from_f64(0.5);
    let parts = |y: T| -> Result<(T, T)> {
        let (a, b) = (f.eval(y)?, f.eval(-y)?);
        Ok(((a + b) * half, (a - b) * half))
    };
    let (e_up, o_up) = parts(x / q)?;
    let (e0, o0) = parts(x)?;
    let (e_dn, o_dn) = parts(q * x)?;
    let x2 = x * x;
    let t0 = x2 / qa;
    let r0 = (one + t0).sqrt();
    let r1 = (one + t0 / (q * q)).sqrt();
    let omq = one - q;
    Ok(match which {
        Ladder::A => {
            let k = q.sqrt() / (omq.sqrt() * x);
            k * (r1 * e_up - e0 + r1 * o_up - qa * o0)
        }
        Ladder::APlus => {
            let k = qa * q.sqrt() / (omq.sqrt() * x);
            k * (r0 * e_dn - e0 + r0 * o_dn - o0 / qa)
        }
        Ladder::H => {
            let k = -qa / (omq * x2);
            let even = q / qa * r1 * e_up + r0 * e_dn - (one + q / qa + t0) * e0;
            let odd = q * r1 * o_up + qa * r0 * o_dn - (one + q * qa + t0) * o0;
            k * (even + odd)
        }
    })
}

/// Handle for `which` applied to `f`.
pub fn ladder_handle<T: Real>(f: &FunctionHandle<T>, which: Ladder, ctx: &QContext) -> FunctionHandle<T> {
    let (f, ctx) = (f.clone(), *ctx);
    FunctionHandle::fallible(move |x| apply_ladder(&f, which, x, &ctx))
}

/// |H φ_n(x) − ⟦n⟧_{q,α} φ_n(x)|, in double-double.
pub fn eigen_residual(n: usize, x: f64, ctx: &QContext) -> Result<f64> {
    let w = WaveFunction::<Dd>::new(n, ctx)?;
    let xd = Dd::from(x);
    let h = apply_ladder(&w.handle, Ladder::H, xd, ctx)?;
    let e = Dd::from(gen_qint(n, ctx));
    Ok((h - e * w.eval(xd)?).abs().to_f64())
}

/// |a φ_n − √⟦n⟧ φ_{n−1}| (lowering) or |a⁺ φ_n − √⟦n+1⟧ φ_{n+1}| (raising) at x.
pub fn ladder_residual(n: usize, which: Ladder, x: f64, ctx: &QContext) -> Result<f64> {
    let w = WaveFunction::<Dd>::new(n, ctx)?;
    let xd = Dd::from(x);
    let lhs = apply_ladder(&w.handle, which, xd, ctx)?;
    let rhs = match which {
        Ladder::A if n == 0 => Dd::zero(),
        Ladder::A => Dd::from(gen_qint(n, ctx)).sqrt() * WaveFunction::<Dd>::new(n - 1, ctx)?.eval(xd)?,
        Ladder::APlus => Dd::from(gen_qint(n + 1, ctx)).sqrt() * WaveFunction::<Dd>::new(n + 1, ctx)?.eval(xd)?,
        Ladder::H => Dd::from(gen_qint(n, ctx)) * w.eval(xd)?,
    };
    Ok((lhs - rhs).abs().to_f64())
}

/// ∫_ℝ f g |x|^{2α+1} dx by adaptive Gauss–Kronrod in u = ln|x|.
pub fn inner_product(f: &FunctionHandle<Dd>, g: &FunctionHandle<Dd>, ctx: &QContext) -> Result<f64> {
    let p = 2.0 * ctx.alpha + 2.0;
    let mut err = None;
    let mut h = |u: f64| -> f64 {
        let x = Dd::from(u.exp());
        let v = (|| -> Result<Dd> { Ok(f.eval(x)? * g.eval(x)? + f.eval(-x)? * g.eval(-x)?) })();
        match v {
            Ok(v) => v.to_f64() * (p * u).exp(),
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        }
    };
    let u_lo = (1e-20f64).ln() / p;
    // past the peak, keep going until the integrand has dropped by e^{-50}
    let mut u_hi = 0.0;
    let mut peak = h(0.0).abs();
    let mut quiet = 0;
    // an odd product vanishes identically, hence `<=`; x² overflows near u = 350
    while quiet < 8 && u_hi < 300.0 {
        u_hi += 0.25;
        let v = h(u_hi).abs();
        peak = peak.max(v);
        quiet = if v <= peak * (-50f64).exp() { quiet + 1 } else { 0 };
    }
    let pieces = ((u_hi - u_lo) / (0.25 * ctx.q.ln().abs())).ceil() as usize;
    let cfg = QuadConfig { abs_tol: 1e-11, rel_tol: 1e-12, max_intervals: 6000, initial_pieces: pieces.clamp(8, 2000) };
    let r = integrate(&mut h, u_lo, u_hi, &cfg)?;
    match err {
        Some(e) => Err(e),
        None => Ok(r.value),
    }
}

/// |⟨Hf, g⟩ − ⟨f, Hg⟩|
pub fn selfadjoint_residual(f: &FunctionHandle<Dd>, g: &FunctionHandle<Dd>, ctx: &QContext) -> Result<f64> {
    let hf = ladder_handle(f, Ladder::H, ctx);
    let hg = ladder_handle(g, Ladder::H, ctx);
    Ok((inner_product(&hf, g, ctx)? - inner_product(f, &hg, ctx)?).abs())
}
