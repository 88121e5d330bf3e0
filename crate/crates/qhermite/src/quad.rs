//! Adaptive 7/15-point Gauss–Kronrod quadrature.

use qcore::{QError, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights for nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Budget and target for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of subintervals.
    pub max_intervals: usize,
    /// Equal pieces the range is cut into before adapting.
    pub initial_pieces: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { abs_tol: 1e-13, rel_tol: 1e-12, max_intervals: 2000, initial_pieces: 16 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

struct Piece {
    a: f64,
    b: f64,
    val: f64,
    err: f64,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let d = h * XGK[j];
        let s = f(c - d) + f(c + d);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// ∫_a^b f with a global error estimate below max(abs_tol, rel_tol·|I|).
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    let n0 = cfg.initial_pieces.max(1);
    let w = (b - a) / n0 as f64;
    let mut pieces: Vec<Piece> = (0..n0)
        .map(|i| {
            let lo = a + w * i as f64;
            let hi = if i + 1 == n0 { b } else { lo + w };
            let (val, err) = gk15(&mut f, lo, hi);
            Piece { a: lo, b: hi, val, err }
        })
        .collect();
    let mut evals = 15 * n0;
    loop {
        let total: f64 = pieces.iter().map(|p| p.val).sum();
        let err: f64 = pieces.iter().map(|p| p.err).sum();
        if !total.is_finite() || !err.is_finite() {
            return Err(QError::QuadratureFailure("integrand produced a non-finite value".into()));
        }
        if err <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
            return Ok(QuadResult { value: total, error: err, evaluations: evals });
        }
        if pieces.len() >= cfg.max_intervals {
            return Err(QError::QuadratureFailure(format!(
                "error estimate {err:e} after {} subintervals",
                pieces.len()
            )));
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .unwrap();
        let p = pieces.swap_remove(worst);
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = gk15(&mut f, p.a, m);
        let (v2, e2) = gk15(&mut f, m, p.b);
        evals += 30;
        pieces.push(Piece { a: p.a, b: m, val: v1, err: e1 });
        pieces.push(Piece { a: m, b: p.b, val: v2, err: e2 });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(|x| x.powi(10), 0.0, 1.0, &QuadConfig::default()).unwrap();
        assert!((r.value - 1.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian() {
        let r = integrate(|x: f64| (-x * x).exp(), -12.0, 12.0, &QuadConfig::default()).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let cfg = QuadConfig { max_intervals: 4, initial_pieces: 1, ..Default::default() };
        let e = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &cfg).unwrap_err();
        assert_eq!(e.kind(), "QuadratureFailure");
    }
}
