//! Function handles and the q-difference operators acting on them.

use std::fmt;
use std::sync::Arc;

use crate::context::QContext;
use crate::error::{QError, Result};
use crate::real::{Dd, Real};
use crate::symbols::QParams;

type DynFn<T> = dyn Fn(T) -> Result<T> + Send + Sync;

/// A real function of one real variable.
///
/// Cheap to clone; evaluation is fallible so derived handles (iterated
/// derivatives, series-backed special functions) can report their failures.
pub struct FunctionHandle<T = f64>(Arc<DynFn<T>>);

impl<T> Clone for FunctionHandle<T> {
    fn clone(&self) -> Self {
        FunctionHandle(Arc::clone(&self.0))
    }
}

impl<T> fmt::Debug for FunctionHandle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("FunctionHandle(..)")
    }
}

impl<T: Real> FunctionHandle<T> {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        FunctionHandle(Arc::new(move |x| Ok(f(x))))
    }

    pub fn fallible<F>(f: F) -> Self
    where
        F: Fn(T) -> Result<T> + Send + Sync + 'static,
    {
        FunctionHandle(Arc::new(f))
    }

    pub fn constant(c: T) -> Self {
        Self::new(move |_| c)
    }

    #[inline]
    pub fn eval(&self, x: T) -> Result<T> {
        (self.0)(x)
    }

    /// `a*self + b*other`
    pub fn combine(&self, a: T, other: &Self, b: T) -> Self {
        let (f, g) = (self.clone(), other.clone());
        Self::fallible(move |x| Ok(a * f.eval(x)? + b * g.eval(x)?))
    }

    pub fn scale(&self, a: T) -> Self {
        let f = self.clone();
        Self::fallible(move |x| Ok(a * f.eval(x)?))
    }
}

impl<T: Real> std::ops::Add for &FunctionHandle<T> {
    type Output = FunctionHandle<T>;
    fn add(self, rhs: Self) -> FunctionHandle<T> {
        self.combine(T::one(), rhs, T::one())
    }
}

/// Even and odd parts of a function.
#[derive(Debug, Clone)]
pub struct ParityParts<T = f64> {
    pub even: FunctionHandle<T>,
    pub odd: FunctionHandle<T>,
}

pub fn parity_split<T: Real>(f: &FunctionHandle<T>) -> ParityParts<T> {
    let half = T::from_f64(0.5);
    let (fe, fo) = (f.clone(), f.clone());
    ParityParts {
        even: FunctionHandle::fallible(move |x| Ok(half * (fe.eval(x)? + fe.eval(-x)?))),
        odd: FunctionHandle::fallible(move |x| Ok(half * (fo.eval(x)? - fo.eval(-x)?))),
    }
}

/// Which difference quotient to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// D_q f(x) = (f(x) - f(qx)) / ((1-q)x)
    Backward,
    /// D_q⁺ f(x) = (f(x/q) - f(x)) / ((1-q)x)
    Forward,
    /// D_{q,α} f(x) = (f(x) - q^{2α+1} f(qx)) / ((1-q)x)
    BackwardAlpha,
    /// D⁺_{q,α} f(x) = (f(x/q) - q^{2α+1} f(x)) / ((1-q)x)
    ForwardAlpha,
    /// Δ = D_q on the even part, D_{q,α} on the odd part
    DeltaAlpha,
    /// Δ⁺ = D_q⁺ on the even part, D⁺_{q,α} on the odd part
    DeltaAlphaPlus,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::Backward,
        Variant::Forward,
        Variant::BackwardAlpha,
        Variant::ForwardAlpha,
        Variant::DeltaAlpha,
        Variant::DeltaAlphaPlus,
    ];

    fn forward(self) -> bool {
        matches!(self, Variant::Forward | Variant::ForwardAlpha | Variant::DeltaAlphaPlus)
    }

    /// The α = -1/2 counterpart.
    pub fn plain(self) -> Variant {
        match self {
            Variant::Backward | Variant::BackwardAlpha | Variant::DeltaAlpha => Variant::Backward,
            _ => Variant::Forward,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Backward => "backward",
            Variant::Forward => "forward",
            Variant::BackwardAlpha => "backward_alpha",
            Variant::ForwardAlpha => "forward_alpha",
            Variant::DeltaAlpha => "delta_alpha",
            Variant::DeltaAlphaPlus => "delta_alpha_plus",
        }
    }

    pub fn parse(s: &str) -> Option<Variant> {
        Variant::ALL.into_iter().find(|v| v.name() == s)
    }
}

/// One difference quotient at `y` from samples of `g` at the four points
/// `±y`, `±s·y`, where `s = q` for backward variants and `1/q` for forward ones.
/// `a = g(y)`, `b = g(s y)`, `am = g(-y)`, `bm = g(-s y)`.
#[inline]
fn quotient<T: Real>(v: Variant, p: &QParams<T>, y: T, a: T, b: T, am: T, bm: T) -> T {
    let den = (T::one() - p.q) * y;
    let half = T::from_f64(0.5);
    match v {
        Variant::Backward => (a - b) / den,
        Variant::Forward => (b - a) / den,
        Variant::BackwardAlpha => (a - p.qa * b) / den,
        Variant::ForwardAlpha => (b - p.qa * a) / den,
        Variant::DeltaAlpha | Variant::DeltaAlphaPlus => {
            let (ea, oa) = (half * (a + am), half * (a - am));
            let (eb, ob) = (half * (b + bm), half * (b - bm));
            if v == Variant::DeltaAlpha {
                (ea - eb + oa - p.qa * ob) / den
            } else {
                (eb - ea + ob - p.qa * oa) / den
            }
        }
    }
}

/// Apply one q-difference operator to `f` at `x`.
pub fn qderiv<T: Real>(f: &FunctionHandle<T>, x: T, variant: Variant, ctx: &QContext) -> Result<T> {
    qderiv_with(f, x, variant, &QParams::from_ctx(ctx))
}

pub fn qderiv_with<T: Real>(
    f: &FunctionHandle<T>,
    x: T,
    variant: Variant,
    p: &QParams<T>,
) -> Result<T> {
    iterate(f, 1, variant, p, x)
}

/// k-fold composition of a difference operator, as a new handle.
///
/// Evaluation samples `f` once on the lattice `{±x s^j : j ≤ k}` and
/// applies the operator level by level, so the cost is O(k²) evaluations
/// of arithmetic plus 2(k+1) evaluations of `f`.
pub fn qderiv_pow<T: Real>(
    f: &FunctionHandle<T>,
    k: usize,
    variant: Variant,
    ctx: &QContext,
) -> FunctionHandle<T> {
    if k == 0 {
        return f.clone();
    }
    let p = QParams::<T>::from_ctx(ctx);
    let f = f.clone();
    FunctionHandle::fallible(move |x| iterate(&f, k, variant, &p, x))
}

/// Relative residual of Δ^k xⁿ = (q;q)_{n,α} x^{n−k} / ((1−q)^k (q;q)_{n−k,α}),
/// both sides in double-double.
pub fn monomial_delta_residual(n: usize, k: usize, x: f64, ctx: &QContext) -> Result<f64> {
    if k > n {
        return Err(QError::DomainError(format!("monomial rule needs k <= n, got k = {k}, n = {n}")));
    }
    let p = QParams::<Dd>::from_ctx(ctx);
    let f = FunctionHandle::<Dd>::new(move |y| y.powi(n as i32));
    let xd = Dd::from(x);
    let got = qderiv_pow(&f, k, Variant::DeltaAlpha, ctx).eval(xd)?;
    let want = p.gen_qpoch(n) / ((Dd::one() - p.q).powi(k as i32) * p.gen_qpoch(n - k)) * xd.powi((n - k) as i32);
    Ok(((got - want) / want).abs().to_f64())
}

fn iterate<T: Real>(f: &FunctionHandle<T>, k: usize, v: Variant, p: &QParams<T>, x: T) -> Result<T> {
    if k == 0 {
        return f.eval(x);
    }
    if x == T::zero() {
        return Err(QError::DomainError("q-derivative evaluated at x = 0".into()));
    }
    let mut ys = Vec::with_capacity(k + 1);
    let mut y = x;
    for _ in 0..=k {
        ys.push(y);
        y = if v.forward() { y / p.q } else { y * p.q };
    }
    let mut pos = Vec::with_capacity(k + 1);
    let mut neg = Vec::with_capacity(k + 1);
    for &y in &ys {
        pos.push(f.eval(y)?);
        neg.push(f.eval(-y)?);
    }
    for level in 0..k {
        let width = k - level;
        for j in 0..width {
            let (a, b, am, bm) = (pos[j], pos[j + 1], neg[j], neg[j + 1]);
            pos[j] = quotient(v, p, ys[j], a, b, am, bm);
            neg[j] = quotient(v, p, -ys[j], am, bm, a, b);
        }
    }
    Ok(pos[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::gen_qpoch;

    fn ctx(q: f64, a: f64) -> QContext {
        QContext::new(q, a).unwrap()
    }

    #[test]
    fn constant_has_zero_derivative() {
        let f = FunctionHandle::<f64>::constant(1.0);
        for v in Variant::ALL.into_iter().filter(|v| v.plain() == *v) {
            assert_eq!(qderiv(&f, 0.7, v, &ctx(0.5, 0.2)).unwrap(), 0.0);
        }
    }

    #[test]
    fn identity_examples() {
        let f = FunctionHandle::<f64>::new(|x| x);
        assert!((qderiv(&f, 1.0, Variant::Backward, &ctx(0.5, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        let v = qderiv(&f, 1.0, Variant::BackwardAlpha, &ctx(0.5, 0.0)).unwrap();
        assert!((v - 1.5).abs() < 1e-15);
    }

    #[test]
    fn zero_is_rejected() {
        let f = FunctionHandle::<f64>::new(|x| x);
        let e = qderiv(&f, 0.0, Variant::DeltaAlpha, &ctx(0.5, 0.0)).unwrap_err();
        assert_eq!(e.kind(), "DomainError");
        let g = qderiv_pow(&f, 2, Variant::DeltaAlpha, &ctx(0.5, 0.0));
        assert!(g.eval(0.0).is_err());
    }

    #[test]
    fn pow_zero_is_identity() {
        let f = FunctionHandle::<f64>::new(|x| x * x - 3.0);
        let g = qderiv_pow(&f, 0, Variant::DeltaAlpha, &ctx(0.5, 0.3));
        assert_eq!(g.eval(0.0).unwrap(), -3.0);
    }

    #[test]
    fn lattice_iteration_matches_naive_composition() {
        // compare against nested single applications
        let c = ctx(0.6, 0.35);
        let f = FunctionHandle::<f64>::new(|x| (0.3 * x).exp() + x * x * x);
        for v in [Variant::DeltaAlpha, Variant::DeltaAlphaPlus, Variant::ForwardAlpha] {
            let mut g = f.clone();
            for _ in 0..3 {
                let h = g.clone();
                g = FunctionHandle::fallible(move |x| qderiv(&h, x, v, &c));
            }
            let fast = qderiv_pow(&f, 3, v, &c);
            for x in [0.4, -0.9, 1.3] {
                let (a, b) = (g.eval(x).unwrap(), fast.eval(x).unwrap());
                assert!((a - b).abs() < 1e-10 * (1.0 + a.abs()), "{v:?} {x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn monomial_rule_small_case() {
        let c = ctx(0.5, 0.25);
        let f = FunctionHandle::<Dd>::new(|x| x.powi(5));
        let g = qderiv_pow(&f, 3, Variant::DeltaAlpha, &c);
        let x = 0.7;
        let expect = gen_qpoch(5, &c) / (0.5f64.powi(3) * gen_qpoch(2, &c)) * x * x;
        let got = g.eval(Dd::from(x)).unwrap().to_f64();
        assert!(((got - expect) / expect).abs() < 1e-14);
    }

    #[test]
    fn split_parts() {
        let f = FunctionHandle::<f64>::new(|x| 1.0 + x);
        let p = parity_split(&f);
        assert_eq!(p.even.eval(2.0).unwrap(), 1.0);
        assert_eq!(p.odd.eval(2.0).unwrap(), 2.0);
    }

    #[test]
    fn variant_names_roundtrip() {
        for v in Variant::ALL {
            assert_eq!(Variant::parse(v.name()), Some(v));
        }
    }
}
