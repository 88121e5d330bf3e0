//! Scalar abstraction for the q-difference machinery.
//!
//! Everything that applies a difference quotient near the origin loses
//! digits to cancellation: `(f(x) - f(qx)) / ((1-q) x)` at `x = q^10` throws
//! away roughly ten decimal digits per application. The routines that need
//! more headroom are generic over [`Real`] and can run in [`Dd`]
//! (double-double, ~32 significant digits) instead of `f64`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

pub trait Real:
    Copy
    + fmt::Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    fn exp(self) -> Self;
    /// Natural logarithm; NaN for non-positive arguments.
    fn ln(self) -> Self;
    /// Unit roundoff of the representation.
    fn epsilon() -> f64;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn is_finite(self) -> bool {
        self.to_f64().is_finite()
    }
    fn powf(self, x: Self) -> Self {
        (x * self.ln()).exp()
    }

    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { Self::one() / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Real for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn epsilon() -> f64 {
        f64::EPSILON / 2.0
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
///
/// Only the operations the library needs are provided: the four arithmetic
/// operations, square root, exp/ln and comparisons.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.3190468138462996e-17 };

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const fn new(hi: f64) -> Self {
        Dd { hi, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let (h, l) = quick_two_sum(hi, lo);
        if h.is_finite() {
            Dd { hi: h, lo: l }
        } else {
            Dd { hi: h, lo: 0.0 }
        }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        Dd::renorm(p, e + self.lo * b)
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.hi, f)
    }
}

impl From<f64> for Dd {
    fn from(v: f64) -> Self {
        Dd::new(v)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Dd::renorm(s, e + f)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        Dd::renorm(p, e + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        if !q1.is_finite() || b.hi == 0.0 {
            return Dd::new(q1);
        }
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (h, l) = quick_two_sum(q1, q2);
        Dd { hi: h, lo: l } + Dd::new(q3)
    }
}

impl AddAssign for Dd {
    fn add_assign(&mut self, b: Dd) {
        *self = *self + b;
    }
}
impl SubAssign for Dd {
    fn sub_assign(&mut self, b: Dd) {
        *self = *self - b;
    }
}
impl MulAssign for Dd {
    fn mul_assign(&mut self, b: Dd) {
        *self = *self * b;
    }
}

// lets nalgebra matrices hold Dd entries
impl num_traits::Zero for Dd {
    fn zero() -> Self {
        Dd::new(0.0)
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl num_traits::One for Dd {
    fn one() -> Self {
        Dd::new(1.0)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Real for Dd {
    fn from_f64(v: f64) -> Self {
        Dd::new(v)
    }
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::new(self.hi.sqrt());
        }
        // one Newton step on top of the f64 root (Karp & Markstein)
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let (p, e) = two_prod(ax, ax);
        let d = self - Dd { hi: p, lo: e };
        let (s, t) = two_sum(ax, d.hi * (x * 0.5));
        Dd::renorm(s, t)
    }
    fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
    fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Dd::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::zero();
        }
        // e^a = 2^k (e^{r/1024})^1024 with r = a - k ln 2
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2.mul_f64(k)).mul_f64(1.0 / 1024.0);
        let mut term = r;
        let mut s = r;
        for i in 2..=12 {
            term = term * r / Dd::from(i as f64);
            s = s + term;
        }
        // s = expm1; squaring (1+s) becomes s ↦ 2s + s²
        for _ in 0..10 {
            s = s.mul_f64(2.0) + s * s;
        }
        (s + Dd::one()).mul_f64(2f64.powi(k as i32))
    }
    fn ln(self) -> Self {
        if !(self.hi > 0.0) {
            return Dd::new(f64::NAN);
        }
        // one Newton step y ← y + a e^{-y} - 1 doubles the f64 digits
        let y = Dd::new(self.hi.ln());
        y + self * (-y).exp() - Dd::one()
    }
    fn epsilon() -> f64 {
        // 2^-104
        4.930380657631324e-32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_roundtrip() {
        let t = Dd::one() / Dd::from(3.0);
        let back = t * Dd::from(3.0) - Dd::one();
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn sqrt_two_squared() {
        let s = Dd::from(2.0).sqrt();
        let r = s * s - Dd::from(2.0);
        assert!(r.to_f64().abs() < 1e-31, "{r:?}");
    }

    #[test]
    fn catastrophic_cancellation_survives() {
        // (1 + 1e-20) - 1 is invisible in f64
        let a = Dd::one() + Dd::from(1e-20);
        assert!(((a - Dd::one()).to_f64() - 1e-20).abs() < 1e-35);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let q = Dd::from(0.3);
        let mut p = Dd::one();
        for _ in 0..13 {
            p = p * q;
        }
        assert!(((q.powi(13) - p) / p).to_f64().abs() < 1e-30);
        let inv = q.powi(-5) * q.powi(5) - Dd::one();
        assert!(inv.to_f64().abs() < 1e-30);
    }

    #[test]
    fn exp_ln_roundtrip() {
        for v in [1e-12, 0.3, 1.0, 2.5, 700.0] {
            let a = Dd::from(v);
            let r = (a.ln().exp() - a) / a;
            assert!(r.to_f64().abs() < 1e-30, "{v}: {r:?}");
        }
        // e^{ln 2} recovers 2 to full width
        assert!((LN2.exp() - Dd::from(2.0)).to_f64().abs() < 1e-31);
        let p = Dd::from(0.3).powf(Dd::from(11.0)) / Dd::from(0.3).powi(11) - Dd::one();
        assert!(p.to_f64().abs() < 1e-30);
    }

    #[test]
    fn ordering() {
        let a = Dd::one() + Dd::from(1e-20);
        assert!(a > Dd::one());
        assert!(-a < Dd::zero());
    }
}
