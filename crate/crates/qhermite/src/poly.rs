//! The polynomials h̃_{n,α}(x;q) and the q-Laguerre polynomials.
//!
//! h̃_n carries a factor q^{-n²/2} that overflows f64 long before n = 40
//! at small q, so internally everything works with the scaled polynomial
//!
//!   s_n(x) = q^{n²/2} h̃_n(x)
//!          = (q;q)_n Σ_k (-1)^k q^{(n-2k)²/2 + k} x^{n-2k} / ((q²;q²)_k (q;q)_{n-2k,α})
//!
//! whose coefficients are all at most one in magnitude.

use qcore::{gen_exponent, QContext, QParams, Real};

/// Degree bound used when nothing else is specified.
pub const DEFAULT_N_MAX: usize = 40;

/// Cached factorials and scaled coefficients for one (q, α).
#[derive(Debug, Clone)]
pub struct HermiteFamily {
    ctx: QContext,
    n_max: usize,
    qq: Vec<f64>,
    q2q2: Vec<f64>,
    gq: Vec<f64>,
    coef: Vec<Vec<f64>>,
}

impl HermiteFamily {
    pub fn new(ctx: &QContext, n_max: usize) -> Self {
        let q = ctx.q;
        let mut qq = vec![1.0; n_max + 1];
        let mut q2q2 = vec![1.0; n_max + 1];
        let mut gq = vec![1.0; n_max + 1];
        for k in 1..=n_max {
            qq[k] = qq[k - 1] * (1.0 - q.powi(k as i32));
            q2q2[k] = q2q2[k - 1] * (1.0 - q.powi(2 * k as i32));
            gq[k] = gq[k - 1] * (1.0 - q.powf(gen_exponent(k, ctx.alpha)));
        }
        let coef = (0..=n_max)
            .map(|n| {
                (0..=n / 2)
                    .map(|k| {
                        let m = n - 2 * k;
                        let e = 0.5 * (m * m) as f64 + k as f64;
                        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                        sign * qq[n] * q.powf(e) / (q2q2[k] * gq[m])
                    })
                    .collect()
            })
            .collect();
        HermiteFamily { ctx: *ctx, n_max, qq, q2q2, gq, coef }
    }

    pub fn ctx(&self) -> &QContext {
        &self.ctx
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// (q;q)_n
    pub fn qpoch(&self, n: usize) -> f64 {
        self.qq[n]
    }

    /// (q²;q²)_n
    pub fn qpoch2(&self, n: usize) -> f64 {
        self.q2q2[n]
    }

    /// (q;q)_{n,α}
    pub fn gen_qpoch(&self, n: usize) -> f64 {
        self.gq[n]
    }

    fn check(&self, n: usize) {
        assert!(n <= self.n_max, "degree {n} exceeds the family bound {}", self.n_max);
    }

    /// s_n(x) together with Σ|summands|, the scale against which rounding
    /// in the sum should be judged.
    pub fn scaled_with_mass(&self, n: usize, x: f64) -> (f64, f64) {
        self.check(n);
        let c = &self.coef[n];
        let x2 = x * x;
        // Horner in x² from the constant end, then restore the parity factor
        let mut acc = 0.0;
        let mut mass = 0.0;
        let mut xp = if n % 2 == 0 { 1.0 } else { x.abs() };
        for k in (0..c.len()).rev() {
            let t = c[k] * xp;
            acc += t;
            mass += t.abs();
            xp *= x2;
        }
        if n % 2 == 1 && x < 0.0 {
            acc = -acc;
        }
        (acc, mass)
    }

    pub fn scaled(&self, n: usize, x: f64) -> f64 {
        self.scaled_with_mass(n, x).0
    }

    /// (sign, ln|s_n(x)|) without overflow for any finite x.
    pub fn log_abs_scaled(&self, n: usize, x: f64) -> (f64, f64) {
        self.check(n);
        if x.abs() <= 1.0 {
            let v = self.scaled(n, x);
            return (v.signum(), v.abs().ln());
        }
        // s_n(x) = x^n Σ_k c_k x^{-2k}
        let c = &self.coef[n];
        let y = 1.0 / (x * x);
        let mut acc = 0.0;
        for k in (0..c.len()).rev() {
            acc = acc * y + c[k];
        }
        let sign = acc.signum() * if n % 2 == 1 && x < 0.0 { -1.0 } else { 1.0 };
        (sign, n as f64 * x.abs().ln() + acc.abs().ln())
    }

    /// h̃_{n,α}(x;q)
    pub fn eval(&self, n: usize, x: f64) -> f64 {
        self.scaled(n, x) * self.ctx.q.powf(-0.5 * (n * n) as f64)
    }

    /// Coefficients of h̃_n in a chosen precision: `c[k]` multiplies x^{n-2k}.
    pub fn coefficients_t<T: Real>(n: usize, p: &QParams<T>) -> Vec<T> {
        let q = p.q;
        let q2 = q * q;
        let qq = p.qpoch(q, q, n);
        (0..=n / 2)
            .map(|k| {
                let m = n - 2 * k;
                let e = (k * (2 * k + 1)) as i32 - (2 * n * k) as i32;
                let sign = if k % 2 == 0 { T::one() } else { -T::one() };
                sign * qq * q.powi(e) / (p.qpoch(q2, q2, k) * p.gen_qpoch(m))
            })
            .collect()
    }
}

/// Evaluate Σ c[k] x^{n-2k}.
pub fn eval_coefficients<T: Real>(n: usize, c: &[T], x: T) -> T {
    let x2 = x * x;
    let mut acc = T::zero();
    for ck in c {
        acc = acc * x2 + *ck;
    }
    // acc = Σ c[k] x^{2(K-k)}, K = n/2
    if n % 2 == 1 {
        acc * x
    } else {
        acc
    }
}

/// h̃_{n,α}(x;q) by its defining finite sum.
pub fn hermite_h(n: usize, x: f64, ctx: &QContext) -> f64 {
    HermiteFamily::new(ctx, n).eval(n, x)
}

/// q-Laguerre polynomial L_n^{(ν)}(x;q²) written with generalized factorials.
pub fn qlaguerre(n: usize, order: f64, x: f64, ctx: &QContext) -> f64 {
    let q = ctx.q;
    let q2 = q * q;
    let gq = |m: usize| -> f64 { (1..=m).map(|j| 1.0 - q.powf(gen_exponent(j, order))).product() };
    let lead = qcore::qpoch_base(q.powf(2.0 * order + 2.0), q2, n);
    let mut s = 0.0;
    for k in 0..=n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * q.powf(2.0 * k as f64 * (k as f64 + order)) * x.powi(k as i32)
            / (gq(2 * k) * qcore::qpoch_base(q2, q2, n - k));
    }
    lead * s
}

/// h̃_n through the q-Laguerre connection, an independent evaluation route.
pub fn hermite_via_laguerre(n: usize, x: f64, ctx: &QContext) -> f64 {
    let q = ctx.q;
    let a = ctx.alpha;
    let m = n / 2;
    let t = q.powf(-2.0 * a - 1.0) * x * x;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let q2 = q * q;
    let qq = qcore::qpoch_base(q, q, n);
    if n % 2 == 0 {
        let pre = sign * q.powi(-((m * (2 * m).saturating_sub(1)) as i32)) * qq
            / qcore::qpoch_base(q.powf(2.0 * a + 2.0), q2, m);
        pre * qlaguerre(m, a, t, ctx)
    } else {
        let pre = sign * q.powi(-((m * (2 * m + 1)) as i32)) * qq
            / qcore::qpoch_base(q.powf(2.0 * a + 2.0), q2, m + 1);
        pre * x * qlaguerre(m, a + 1.0, t, ctx)
    }
}

/// |direct − Laguerre route| relative to the largest summand of the direct
/// sum. Near a zero of h̃_n the value itself is no useful scale.
pub fn two_route_residual(n: usize, x: f64, ctx: &QContext) -> f64 {
    let fam = HermiteFamily::new(ctx, n);
    let (s, mass) = fam.scaled_with_mass(n, x);
    let unscale = ctx.q.powf(-0.5 * (n * n) as f64);
    let direct = s * unscale;
    let diff = (direct - hermite_via_laguerre(n, x, ctx)).abs();
    let scale = (mass * unscale).max(direct.abs());
    // odd n at x = 0: both routes vanish
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcore::{gen_qpoch, qpoch};

    fn ctx(q: f64, a: f64) -> QContext {
        QContext::new(q, a).unwrap()
    }

    #[test]
    fn degree_zero_is_one() {
        assert_eq!(hermite_h(0, 3.7, &ctx(0.5, 0.2)), 1.0);
    }

    #[test]
    fn value_at_origin() {
        // h̃_2(0) = -q^{-1}(1-q)
        assert!((hermite_h(2, 0.0, &ctx(0.5, 0.25)) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn degree_one() {
        let v = hermite_h(1, 1.0, &ctx(0.5, 0.0));
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn laguerre_trivia() {
        let c = ctx(0.5, 0.0);
        assert_eq!(qlaguerre(0, 0.0, 1.3, &c), 1.0);
        // only k = 0 survives and the (q²;q²)_1 in front cancels the one below
        assert!((qlaguerre(1, 0.0, 0.0, &c) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cache_matches_fresh() {
        let c = ctx(0.6, 1.3);
        let f = HermiteFamily::new(&c, 40);
        for n in 0..=40 {
            assert!((f.qpoch(n) - qpoch(c.q, n, &c)).abs() < 1e-14);
            assert!((f.gen_qpoch(n) - gen_qpoch(n, &c)).abs() < 1e-14);
        }
    }

    #[test]
    fn log_abs_agrees_with_direct() {
        let c = ctx(0.5, 0.25);
        let f = HermiteFamily::new(&c, 12);
        for n in 0..=12 {
            for x in [-3.0, -1.2, 0.4, 2.5, 17.0] {
                let v = f.scaled(n, x);
                let (s, l) = f.log_abs_scaled(n, x);
                assert!((s * l.exp() - v).abs() < 1e-12 * v.abs().max(1e-300), "{n} {x}");
            }
        }
    }

    #[test]
    fn generic_coefficients_match() {
        let c = ctx(0.45, 0.3);
        let p = QParams::<f64>::from_ctx(&c);
        for n in 0..10 {
            let cf = HermiteFamily::coefficients_t(n, &p);
            for x in [0.3, -1.4] {
                let a = eval_coefficients(n, &cf, x);
                let b = hermite_h(n, x, &c);
                assert!((a - b).abs() < 1e-11 * b.abs().max(1.0), "{n} {x}: {a} {b}");
            }
        }
    }
}
