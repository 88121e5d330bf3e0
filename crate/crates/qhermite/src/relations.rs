//! Generating function, inversion, shift operators, q-difference equations
//! and the Rodrigues formula, each as a residual.
//!
//! All polynomial-side arithmetic runs on the scaled s_n = q^{n²/2} h̃_n, so
//! the residuals stay meaningful at degrees where h̃_n itself would overflow.
//! Every residual is |LHS − RHS| / max(1, largest term of the identity).

use qcore::{qderiv_pow, Dd, FunctionHandle, QContext, QError, QParams, Real, Result, Variant};
use qfunctions::{qexp_gen, qexp_small};

use crate::poly::{eval_coefficients, HermiteFamily};
use crate::weight::weight_t;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Relation {
    /// e_{q²}(−z²) E_{q,α}(xz) = Σ q^{n(n−1)/2} h̃_n(x) zⁿ / (q;q)_n; `n` is unused
    Generating { z: f64 },
    Inversion,
    ForwardShift,
    BackwardShift,
    QDiff,
    Rodrigues,
}

impl Relation {
    pub fn name(&self) -> &'static str {
        match self {
            Relation::Generating { .. } => "generating",
            Relation::Inversion => "inversion",
            Relation::ForwardShift => "forward_shift",
            Relation::BackwardShift => "backward_shift",
            Relation::QDiff => "qdiff",
            Relation::Rodrigues => "rodrigues",
        }
    }
}

fn normalized(lhs: f64, rhs: f64, terms: &[f64]) -> f64 {
    let scale = terms.iter().fold(1f64, |m, t| m.max(t.abs()));
    (lhs - rhs).abs() / scale
}

/// Residual of the chosen identity at degree `n` and point `x`.
pub fn relation_residual(kind: Relation, n: usize, x: f64, ctx: &QContext) -> Result<f64> {
    let q = ctx.q;
    let qa = ctx.q_2a1();
    match kind {
        Relation::Generating { z } => generating(x, z, ctx),
        Relation::Inversion => {
            let fam = HermiteFamily::new(ctx, n);
            // both sides times q^{n²/2}
            let lhs = q.powf(0.5 * (n * n) as f64) * x.powi(n as i32);
            let terms: Vec<f64> = (0..=n / 2)
                .map(|k| {
                    fam.gen_qpoch(n) * q.powi((k * k) as i32) * fam.scaled(n - 2 * k, x)
                        / (fam.qpoch2(k) * fam.qpoch(n - 2 * k))
                })
                .collect();
            let rhs: f64 = terms.iter().sum();
            let mut all = terms;
            all.push(lhs);
            Ok(normalized(lhs, rhs, &all))
        }
        Relation::ForwardShift => {
            let fam = HermiteFamily::new(ctx, n);
            let th = if n % 2 == 1 { qa } else { 1.0 };
            let a = fam.scaled(n, x / q);
            let b = th * fam.scaled(n, x);
            let rhs = if n == 0 { 0.0 } else { (1.0 - q.powi(n as i32)) * x * fam.scaled(n - 1, x) / q.sqrt() };
            Ok(normalized(a - b, rhs, &[a, b, rhs]))
        }
        Relation::BackwardShift => {
            let fam = HermiteFamily::new(ctx, n + 1);
            let th_next = if n % 2 == 1 { qa } else { 1.0 };
            let th_n = if n % 2 == 0 { 1.0 / qa } else { 1.0 };
            let a = fam.scaled(n, x);
            let b = th_next * (1.0 + x * x / qa) * fam.scaled(n, q * x);
            let qn1 = q.powi(-(n as i32) - 1);
            let ratio = (1.0 - qn1 * th_n) / (1.0 - qn1);
            let rhs = -ratio * x * fam.scaled(n + 1, x) / q.sqrt();
            Ok(normalized(a - b, rhs, &[a, b, rhs]))
        }
        Relation::QDiff => {
            let fam = HermiteFamily::new(ctx, n);
            let x2 = x * x;
            let up = (1.0 + x2 / qa) * fam.scaled(n, q * x);
            let down = q / qa * fam.scaled(n, x / q);
            let qn = q.powi(n as i32);
            let mid_c = if n % 2 == 0 { 1.0 + q / qa + qn * x2 / qa } else { q + 1.0 / qa + qn * x2 / qa };
            let mid = mid_c * fam.scaled(n, x);
            Ok(normalized(up + down, mid, &[up, mid, down]))
        }
        Relation::Rodrigues => rodrigues(n, x, ctx),
    }
}

fn generating(x: f64, z: f64, ctx: &QContext) -> Result<f64> {
    let q = ctx.q;
    let lhs = qexp_small(-z * z, q * q, ctx)?.value * qexp_gen(x * z, ctx)?;
    let cap = ctx.max_terms.min(300);
    let fam = HermiteFamily::new(ctx, cap);
    let mut sum = 0.0;
    let mut mass = 0.0;
    let mut small_run = 0;
    let mut zn = 1.0;
    for n in 0..=cap {
        let t = q.powf(-0.5 * n as f64) * fam.scaled(n, x) * zn / fam.qpoch(n);
        sum += t;
        mass += t.abs();
        // odd/even terms can vanish individually, so ask for a few small ones in a row
        if t.abs() <= ctx.series_tol * mass.max(1.0) {
            small_run += 1;
            if small_run >= 4 {
                return Ok((lhs - sum).abs() / lhs.abs().max(1.0));
            }
        } else {
            small_run = 0;
        }
        zn *= z;
    }
    Err(QError::NonConvergence { what: "generating-function series".into(), terms: cap })
}

/// Prefactor of the Rodrigues formula,
/// (q−1)ⁿ q^{−n(n−1)/2} (q⁻¹;q⁻¹)_n / (q⁻¹;q⁻¹)_{n,α}.
fn rodrigues_prefactor(n: usize, p: &QParams<Dd>) -> Dd {
    let one = Dd::one();
    let q = p.q;
    let mut r = (q - one).powi(n as i32) * q.powi(-((n * n.saturating_sub(1) / 2) as i32));
    for k in 1..=n {
        r = r * (one - one / q.powi(k as i32)) / (one - one / p.gen_power(k));
    }
    r
}

/// ω h̃_n against the prefactor times Δⁿ ω, both in double-double.
fn rodrigues(n: usize, x: f64, ctx: &QContext) -> Result<f64> {
    if x == 0.0 {
        return Err(QError::DomainError("the Rodrigues formula is evaluated at x != 0".into()));
    }
    let p = QParams::<Dd>::from_ctx(ctx);
    let xd = Dd::from(x);
    let coef = HermiteFamily::coefficients_t(n, &p);
    let w = weight_t(xd, &p);
    let lhs = w * eval_coefficients(n, &coef, xd);
    let wh = FunctionHandle::<Dd>::new(move |y| weight_t(y, &p));
    let d = qderiv_pow(&wh, n, Variant::DeltaAlpha, ctx).eval(xd)?;
    let rhs = rodrigues_prefactor(n, &p) * d;
    let scale = lhs.abs().to_f64().max(rhs.abs().to_f64()).max(w.to_f64());
    Ok((lhs - rhs).abs().to_f64() / scale)
}
