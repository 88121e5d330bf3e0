//! The verification suites. Each one walks the (q, α) grid and records one
//! [`CheckResult`] per identity instance, in a fixed order.

use std::time::Instant;

use qcore::{
    gen_qpoch, monomial_delta_residual, parity_split, qderiv, qnumber, qpoch_base, qpoch_inf_base, sym_qnumber,
    CheckResult, Dd, FunctionHandle, JacksonDomain, QContext, QError, Real, Result, Variant,
};
use qfunctions::{
    bessel_delta_residual, qbessel, qexp_big, qexp_big_series, qexp_gen, qexp_small, qexp_small_series, qtrig,
    BesselKind, BesselParity, Trig,
};
use qhermite::{
    bessel_expansion_residual, bessel_weight_transform, integral_representation_residual, moment_check,
    orthogonality, poisson_kernel_residual, poisson_kernel_sides, published_diagonal, relation_residual,
    rogers_ramanujan_corrected_residual, rogers_ramanujan_residual, two_route_residual, KernelForm,
    Normalization, OrthoCheckParams, OrthoMode, Parity, Relation,
};
use qoscillator::{
    algebra_residual, bridge_residual, build_matrix, eigen_residual, ladder_residual, selfadjoint_residual,
    AlgebraRelation, Ladder, MatrixKind, WaveFunction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{Suite, SuiteConfig};

type Params = Vec<(&'static str, Value)>;

/// The small-argument limit is approached like y², so at y = 1e-4 the
/// residual sits near 1e-8 whatever the configured tolerance.
const SMALL_ARGUMENT_TOL: f64 = 1e-6;

macro_rules! params {
    ($($k:ident = $v:expr),* $(,)?) => {
        vec![$((stringify!($k), json!($v))),*]
    };
}

fn grid(c: &QContext) -> Params {
    params![q = c.q, alpha = c.alpha]
}

fn with(mut base: Params, extra: Params) -> Params {
    base.extend(extra);
    base
}

/// Collects results in call order.
#[derive(Default)]
pub struct Recorder {
    pub results: Vec<CheckResult>,
}

impl Recorder {
    fn check(&mut self, name: &str, tol: f64, params: Params, f: impl FnOnce() -> Result<f64>) {
        self.check_result(name, tol, params, || f().map(|r| CheckResult::new(name, r, tol)));
    }

    fn check_result(&mut self, name: &str, tol: f64, params: Params, f: impl FnOnce() -> Result<CheckResult>) {
        let t = Instant::now();
        let mut r = match f() {
            Ok(r) => r,
            Err(e) => CheckResult::failed(name, tol, &e),
        };
        for (k, v) in params {
            r.params.entry(k.to_string()).or_insert(v);
        }
        r.runtime_ms = t.elapsed().as_secs_f64() * 1e3;
        self.results.push(r);
    }
}

/// Largest residual; an error or a NaN anywhere wins.
fn worst(items: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    let mut w: f64 = 0.0;
    for r in items {
        let r = r?;
        if r.is_nan() {
            return Ok(f64::NAN);
        }
        w = w.max(r);
    }
    Ok(w)
}

/// ±q^k for −3 ≤ k ≤ 10.
fn lattice(q: f64) -> Vec<f64> {
    (-3..=10).flat_map(|k| [q.powi(k), -q.powi(k)]).collect()
}

pub fn run(cfg: &SuiteConfig) -> crate::error::Result<Vec<CheckResult>> {
    let ctxs = cfg.contexts()?;
    let mut rec = Recorder::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for suite in cfg.suite.members() {
        match suite {
            Suite::Qcalculus => qcalculus(cfg, &ctxs, &mut rng, &mut rec),
            Suite::SpecialFunctions => special_functions(cfg, &ctxs, &mut rec),
            Suite::HermiteIdentities => hermite_identities(cfg, &ctxs, &mut rec),
            Suite::Orthogonality => orthogonality_suite(cfg, &ctxs, &mut rec),
            Suite::Kernels => kernels(cfg, &ctxs, &mut rec),
            Suite::OscillatorAlgebra => oscillator_algebra(cfg, &ctxs, &mut rng, &mut rec),
            Suite::All => unreachable!("expanded by members()"),
        }
    }
    Ok(rec.results)
}

fn qcalculus(cfg: &SuiteConfig, ctxs: &[QContext], rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let tol = cfg.tol;
    for c in ctxs {
        for n in 0..=cfg.n_max {
            for k in 0..=n {
                rec.check("monomial_delta", tol, with(grid(c), params![n = n, k = k]), || {
                    worst([0.3, -0.3, 1.1, -1.1].map(|x| monomial_delta_residual(n, k, x, c)))
                });
            }
        }
        rec.check("gen_qpoch_parity_split", tol, with(grid(c), params![n_max = 20]), || {
            let (q, q2) = (c.q, c.q * c.q);
            let qa2 = q.powf(2.0 * c.alpha + 2.0);
            worst((0..=20).map(|n| {
                let m = n / 2;
                let split = qpoch_base(q2, q2, m) * qpoch_base(qa2, q2, m + n % 2);
                let direct = gen_qpoch(n, c);
                Ok((direct - split).abs() / split.abs())
            }))
        });
        rec.check("jackson_linearity", tol, grid(c), || jackson_linearity(c));
    }
    // at α = −½ each generalized operator is its plain counterpart
    for &q in &cfg.q_values {
        let Ok(c) = QContext::new(q, -0.5).and_then(|c| c.with_max_terms(cfg.max_terms)) else { continue };
        let f = FunctionHandle::<f64>::new(|x| (0.3 * x).exp() + x * x * x - 0.5 * x);
        for v in [Variant::BackwardAlpha, Variant::ForwardAlpha, Variant::DeltaAlpha, Variant::DeltaAlphaPlus] {
            rec.check("alpha_half_collapse", tol, params![q = q, alpha = -0.5, variant = v.name()], || {
                worst([0.3, -0.3, 1.1, -1.1].map(|x| {
                    let (a, b) = (qderiv(&f, x, v, &c)?, qderiv(&f, x, v.plain(), &c)?);
                    Ok((a - b).abs() / b.abs().max(1.0))
                }))
            });
        }
    }
    let points: Vec<f64> = (0..20).map(|_| rng.random_range(-3.0..3.0)).collect();
    rec.check("parity_split", tol, params![seed = cfg.seed, samples = points.len()], || {
        let f = FunctionHandle::<f64>::new(|x| (x - 0.4).exp() / (1.0 + x * x));
        let p = parity_split(&f);
        worst(points.iter().map(|&x| {
            let e = (p.even.eval(x)? - p.even.eval(-x)?).abs();
            let o = (p.odd.eval(x)? + p.odd.eval(-x)?).abs();
            let s = (p.even.eval(x)? + p.odd.eval(x)? - f.eval(x)?).abs();
            Ok(e.max(o).max(s))
        }))
    });
}

fn jackson_linearity(c: &QContext) -> Result<f64> {
    let f = FunctionHandle::<f64>::new(|y| y * (-y).exp());
    let g = FunctionHandle::<f64>::new(|y| y * (-y * y).exp());
    let (a, b) = (2.0, -3.0);
    let h = f.combine(a, &g, b);
    let i = |h: &FunctionHandle<f64>| qcore::jackson_integral(h, JacksonDomain::HalfLine, c);
    let (ih, if_, ig) = (i(&h)?, i(&f)?, i(&g)?);
    let scale = (a * if_.value).abs() + (b * ig.value).abs();
    Ok((ih.value - a * if_.value - b * ig.value).abs() / scale)
}

fn special_functions(cfg: &SuiteConfig, ctxs: &[QContext], rec: &mut Recorder) {
    let tol = cfg.tol;
    for &q in &cfg.q_values {
        let Ok(c) = QContext::new(q, -0.5).and_then(|c| c.with_max_terms(cfg.max_terms)) else { continue };
        let c = &c;
        for z in [0.3, -0.5, 2.0] {
            rec.check("qexp_big_two_route", tol, params![q = q, z = z], || {
                let (p, s) = (qexp_big(z, q, c)?.value, qexp_big_series(z, q, c)?.value);
                Ok((p - s).abs() / s.abs().max(1.0))
            });
        }
        for z in [-3.0, -0.5, 0.2, 0.9] {
            rec.check("qexp_small_reciprocal", tol, params![q = q, z = z], || {
                Ok((qexp_small(z, q, c)?.value * qpoch_inf_base(z, q, c)?.value - 1.0).abs())
            });
        }
        for z in [0.5, -0.5] {
            rec.check("qexp_small_two_route", tol, params![q = q, z = z], || {
                let (p, s) = (qexp_small(z, q, c)?.value, qexp_small_series(z, q, c)?.value);
                Ok((p - s).abs() / s.abs().max(1.0))
            });
        }
        rec.check("qexp_gen_alpha_half", tol, params![q = q, alpha = -0.5, z = 0.4], || {
            Ok((qexp_gen(0.4, c)? - qexp_big(0.4, q, c)?.value).abs())
        });
        for z in [0.7, 1.5] {
            rec.check("qtrig_from_exponential", tol, params![q = q, z = z], || {
                let (re, im) = exp_iz_series(z, q, c)?;
                Ok((qtrig(z, Trig::Cos, q, c)? - re).abs().max((qtrig(z, Trig::Sin, q, c)? - im).abs()))
            });
        }
        rec.check("bessel_half_order", tol, params![q = q, x = 0.6], || {
            let x: f64 = 0.6;
            let q2 = q * q;
            let pre = qpoch_inf_base(q, q2, c)?.value / qpoch_inf_base(q2, q2, c)?.value / x.sqrt();
            let jm = qbessel(2.0 * x, -0.5, BesselKind::SecondJackson, c)?;
            let jp = qbessel(2.0 * x, 0.5, BesselKind::SecondJackson, c)?;
            Ok((jm - pre * qtrig(x, Trig::Cos, q, c)?).abs().max((jp - pre * qtrig(x, Trig::Sin, q, c)?).abs()))
        });
    }
    for c in ctxs {
        let (q, a) = (c.q, c.alpha);
        rec.check("bessel_contiguous", tol, grid(c), || {
            let j = |x: f64, nu: f64| qbessel(2.0 * x, nu, BesselKind::SecondJackson, c);
            worst([0.25, 0.5, 0.75, 1.0].map(|x| {
                let l = q.powf(2.0 * a + 2.0) * x * j(x, a + 2.0)?;
                let r = (1.0 - q.powf(2.0 * a + 2.0)) * j(x, a + 1.0)? - x * j(x, a)?;
                Ok((l - r).abs() / l.abs().max(r.abs()).max(1.0))
            }))
        });
        rec.check("bessel_small_argument", SMALL_ARGUMENT_TOL, with(grid(c), params![y = 1e-4]), || {
            let y: f64 = 1e-4;
            let q2 = q * q;
            let limit = qpoch_inf_base(q.powf(2.0 * a + 2.0), q2, c)?.value / qpoch_inf_base(q2, q2, c)?.value;
            Ok((y.powf(-a) * qbessel(2.0 * y, a, BesselKind::SecondJackson, c)? - limit).abs())
        });
        rec.check("modified_bessel_series", tol, grid(c), || {
            // Σ (−1)ⁿ q^{n(n+1)} x^{2n} / (q;q)_{2n,α} summed with the generalized factorials
            worst([0.5, 1.5].map(|x: f64| {
                let mut s = 0.0;
                for n in 0..60 {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    s += sign * q.powi((n * (n + 1)) as i32) * x.powi(2 * n as i32) / gen_qpoch(2 * n, c);
                }
                let j = qbessel(x, a, BesselKind::Modified, c)?;
                Ok((j - s).abs() / s.abs().max(1.0))
            }))
        });
        for parity in [BesselParity::EvenOrder, BesselParity::OddOrder] {
            let pname = match parity {
                BesselParity::EvenOrder => "even_order",
                BesselParity::OddOrder => "odd_order",
            };
            for n in 0..=2 {
                rec.check("bessel_delta", tol, with(grid(c), params![n = n, parity = pname]), || {
                    let pts = [0.5, 1.0, 2.0].into_iter().flat_map(|l| [0.3, -0.3, 0.9, -0.9].map(move |x| (l, x)));
                    worst(pts.map(|(l, x)| bessel_delta_residual(n, l, x, parity, c)))
                });
            }
        }
    }
}

/// Real and imaginary parts of E_q(iz) from its power series.
fn exp_iz_series(z: f64, q: f64, c: &QContext) -> Result<(f64, f64)> {
    let (mut re, mut im) = (0.0, 0.0);
    let mut t = 1.0; // q^{k(k−1)/2} z^k / (q;q)_k
    for k in 0..c.max_terms {
        match k % 4 {
            0 => re += t,
            1 => im += t,
            2 => re -= t,
            _ => im -= t,
        }
        t *= q.powi(k as i32) * z / (1.0 - q.powi(k as i32 + 1));
        if t.abs() < 1e-17 * re.abs().max(im.abs()).max(1e-300) {
            return Ok((re, im));
        }
    }
    Err(QError::NonConvergence { what: "E_q(iz) series".into(), terms: c.max_terms })
}

fn hermite_identities(cfg: &SuiteConfig, ctxs: &[QContext], rec: &mut Recorder) {
    let tol = cfg.tol;
    let xs = [-1.1, -0.3, 0.4, 0.9];
    for c in ctxs {
        for kind in [Relation::Inversion, Relation::ForwardShift, Relation::BackwardShift, Relation::QDiff, Relation::Rodrigues]
        {
            for n in 0..=cfg.n_max {
                rec.check(kind.name(), tol, with(grid(c), params![n = n]), || {
                    worst(xs.map(|x| relation_residual(kind, n, x, c)))
                });
            }
        }
        for z in [0.3, -0.6] {
            rec.check("generating", tol, with(grid(c), params![z = z]), || {
                worst(xs.map(|x| relation_residual(Relation::Generating { z }, 0, x, c)))
            });
        }
        for n in 0..=cfg.n_max {
            rec.check("two_route", tol, with(grid(c), params![n = n, points = 21]), || {
                worst((0..21).map(|i| Ok(two_route_residual(n, -2.0 + 0.2 * i as f64, c))))
            });
        }
        for n in 0..=cfg.n_max {
            rec.check("moment", tol, with(grid(c), params![n = n]), || moment_check(n, c));
        }
        // the Bessel-kernel q-integrals converge only for x < q^{α+½}
        let edge = c.q.powf(c.alpha + 0.5);
        let pts = [0.25, 0.5, 0.75].map(|t| t * edge);
        for n in 0..=cfg.n_max.min(4) {
            for (parity, pname) in [(Parity::Even, "even"), (Parity::Odd, "odd")] {
                rec.check("integral_representation", tol, with(grid(c), params![n = n, parity = pname]), || {
                    worst(pts.map(|x| integral_representation_residual(n, x, parity, c)))
                });
            }
        }
        rec.check("bessel_weight_transform", tol, grid(c), || worst(pts.map(|x| bessel_weight_transform(x, c))));
    }
}

fn orthogonality_suite(cfg: &SuiteConfig, ctxs: &[QContext], rec: &mut Recorder) {
    for c in ctxs {
        for n in 0..=cfg.n_max {
            for m in n..=cfg.n_max {
                let mut p = OrthoCheckParams::new(n, m, OrthoMode::DiscreteJackson);
                p.tol = cfg.tol;
                let ps = with(grid(c), params![n = n, m = m]);
                rec.check_result("discrete_orthogonality", p.tol, ps, || orthogonality(&p, c));
            }
        }
        let top = cfg.n_max.min(6);
        let tol = cfg.quad_tol;
        for n in 0..=top {
            for m in n..=top {
                let mut p = OrthoCheckParams::new(n, m, OrthoMode::ContinuousQuadrature);
                p.tol = tol;
                p.normalization = Normalization::Orthonormal;
                let ps = with(grid(c), params![n = n, m = m]);
                rec.check_result("continuous_orthonormality", tol, ps, || orthogonality(&p, c));
            }
        }
        // with the normalizing constant as published the off-diagonal still
        // vanishes and the diagonal is a single n-independent number
        let mut diag = Vec::new();
        for n in 0..=top {
            for m in n..=top {
                let mut p = OrthoCheckParams::new(n, m, OrthoMode::ContinuousQuadrature);
                p.tol = tol;
                let value = orthogonality(&p, c).and_then(|r| value_of(&r));
                let ps = with(grid(c), params![n = n, m = m]);
                if n == m {
                    rec.check_result("continuous_published_diagonal_offset", tol, ps, || {
                        let v = value?;
                        diag.push(v);
                        let want = published_diagonal(c);
                        Ok(CheckResult::new("continuous_published_diagonal_offset", (v - want).abs(), tol)
                            .param("value", v)
                            .param("offset_predicted", want))
                    });
                } else {
                    rec.check_result("continuous_published_offdiagonal", tol, ps, || {
                        let v = value?;
                        Ok(CheckResult::new("continuous_published_offdiagonal", v.abs(), tol).param("value", v))
                    });
                }
            }
        }
        rec.check("continuous_published_diagonal_constancy", tol, with(grid(c), params![n_max = top]), || {
            if diag.len() != top + 1 {
                return Ok(f64::INFINITY);
            }
            let lo = diag.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = diag.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Ok(hi - lo)
        });
    }
}

fn value_of(r: &CheckResult) -> Result<f64> {
    r.params
        .get("value")
        .and_then(Value::as_f64)
        .ok_or_else(|| QError::QuadratureFailure(format!("{} reported no value", r.name)))
}

fn kernels(cfg: &SuiteConfig, ctxs: &[QContext], rec: &mut Recorder) {
    let tol = cfg.tol;
    let pairs = [(0.8, 0.3), (1.2, 0.5)];
    for c in ctxs {
        for (x, y) in pairs {
            rec.check("poisson_kernel", tol, with(grid(c), params![x = x, y = y]), || {
                poisson_kernel_residual(x, y, KernelForm::General, c)
            });
        }
        for x in [0.5, 1.2] {
            rec.check("bessel_expansion", tol, with(grid(c), params![x = x]), || bessel_expansion_residual(x, c));
        }
        rec.check("rogers_ramanujan", tol, grid(c), || rogers_ramanujan_residual(c));
        rec.check("rogers_ramanujan_corrected", tol, grid(c), || rogers_ramanujan_corrected_residual(c));
    }
    for &q in &cfg.q_values {
        let Ok(c) = QContext::new(q, -0.5).and_then(|c| c.with_max_terms(cfg.max_terms)) else { continue };
        for (x, y) in pairs {
            let ps = params![q = q, alpha = -0.5, x = x, y = y];
            rec.check("poisson_corollary", tol, ps.clone(), || {
                poisson_kernel_residual(x, y, KernelForm::HalfIntegerCorollary, &c)
            });
            rec.check("poisson_corollary_vs_general", tol, ps, || {
                let (_, g) = poisson_kernel_sides(x, y, KernelForm::General, &c)?;
                let (_, h) = poisson_kernel_sides(x, y, KernelForm::HalfIntegerCorollary, &c)?;
                Ok((g - h).abs() / g.abs().max(1.0))
            });
        }
    }
}

fn oscillator_algebra(cfg: &SuiteConfig, ctxs: &[QContext], rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let tol = cfg.tol;
    let dim = cfg.dim;
    for c in ctxs {
        for rel in AlgebraRelation::ALL {
            let ps = with(grid(c), params![dim = dim, safe_block = rel.safe_block()]);
            rec.check(rel.name(), tol, ps, || algebra_residual(rel, dim, c));
        }
        rec.check("b_a_bridge", tol, with(grid(c), params![dim = dim]), || bridge_residual(dim, c));
        rec.check("hamiltonian_spectrum", tol, with(grid(c), params![dim = dim]), || {
            let h = build_matrix(MatrixKind::H, dim, c)?.entries;
            worst((0..dim).map(|n| {
                let e = if n % 2 == 0 { n as f64 } else { n as f64 + 2.0 * c.alpha + 1.0 };
                let want = qnumber(e, c);
                Ok((h[(n, n)] - want).abs() / want.max(1.0))
            }))
        });
        rec.check("qnumber_bridge", tol, grid(c), || {
            worst([1.0, 2.0, 2.0 * c.alpha + 2.0, 7.3].map(|x| {
                let l = sym_qnumber(x, c.q.sqrt());
                Ok((l - c.q.powf(-(x - 1.0) / 2.0) * qnumber(x, c)).abs() / l.abs().max(1.0))
            }))
        });
        let xs = lattice(c.q);
        rec.check("ground_state_annihilated", tol, grid(c), || {
            worst(xs.iter().map(|&x| ladder_residual(0, Ladder::A, x, c)))
        });
        for n in 0..=cfg.n_max {
            let ps = with(grid(c), params![n = n]);
            rec.check("eigenrelation", tol, ps.clone(), || worst(xs.iter().map(|&x| eigen_residual(n, x, c))));
            rec.check("lowering", tol, ps.clone(), || {
                worst(xs.iter().map(|&x| ladder_residual(n, Ladder::A, x, c)))
            });
            rec.check("raising", tol, ps, || worst(xs.iter().map(|&x| ladder_residual(n, Ladder::APlus, x, c))));
        }
        rec.check("selfadjoint", cfg.quad_tol, with(grid(c), params![f = "phi1", g = "phi3"]), || {
            let (f, g) = (WaveFunction::<Dd>::new(1, c)?, WaveFunction::<Dd>::new(3, c)?);
            selfadjoint_residual(&f.handle, &g.handle, c)
        });
        rec.check("selfadjoint", cfg.quad_tol, with(grid(c), params![f = "phi0+phi2", g = "phi2"]), || {
            let (p0, p2) = (WaveFunction::<Dd>::new(0, c)?, WaveFunction::<Dd>::new(2, c)?);
            let f = p0.handle.combine(Dd::one(), &p2.handle, Dd::one());
            selfadjoint_residual(&f, &p2.handle, c)
        });
    }
    for &q in &cfg.q_values {
        let triples: Vec<[f64; 3]> = (0..50).map(|_| std::array::from_fn(|_| rng.random_range(-5.0..5.0))).collect();
        rec.check("qnumber_addition", tol, params![q = q, seed = cfg.seed, samples = 50], || {
            worst(triples.iter().map(|&[a, b, d]| {
                let s = |x: f64| sym_qnumber(x, q);
                let t = [s(a) * s(b - d), s(b) * s(d - a), s(d) * s(a - b)];
                let scale = t.iter().fold(1f64, |m, v| m.max(v.abs()));
                Ok(t.iter().sum::<f64>().abs() / scale)
            }))
        });
    }
}
