use proptest::prelude::*;
use qcore::{qpoch_inf_base, QContext};
use qfunctions::*;

fn ctx(q: f64, a: f64) -> QContext {
    QContext::new(q, a).unwrap()
}

fn poch(a: f64, base: f64, n: usize) -> f64 {
    (0..n).map(|k| 1.0 - a * base.powi(k as i32)).product()
}

/// J^{(2)}_ν(2x; q²) from its defining series with every term built from scratch.
fn j2_oracle(x: f64, nu: f64, q: f64) -> f64 {
    let q2 = q * q;
    let pre = poch(q.powf(2.0 * nu + 2.0), q2, 400) / poch(q2, q2, 400) * x.powf(nu);
    let mut s = 0.0;
    for n in 0..60usize {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * q.powf(2.0 * (n * n) as f64 + 2.0 * n as f64 * nu) * x.powi(2 * n as i32)
            / (poch(q2, q2, n) * poch(q.powf(2.0 * nu + 2.0), q2, n));
    }
    pre * s
}

#[test]
fn jackson_bessel_against_series_oracle() {
    for q in [0.3, 0.5, 0.8] {
        let c = ctx(q, 0.0);
        for nu in [-0.5, 0.25, 1.3] {
            for x in [0.2, 0.7, 1.4] {
                let got = qbessel(2.0 * x, nu, BesselKind::SecondJackson, &c).unwrap();
                let want = j2_oracle(x, nu, q);
                assert!((got - want).abs() < 1e-13 * want.abs().max(1.0), "q={q} nu={nu} x={x}: {got} {want}");
            }
        }
    }
}

#[test]
fn trig_matches_split_exponential() {
    // real and imaginary parts of Σ q^{k(k-1)/2} (iz)^k / (q;q)_k
    let q = 0.5;
    let c = ctx(q, 0.0);
    for z in [0.7, -1.3, 2.2] {
        let (mut re, mut im) = (0.0, 0.0);
        for k in 0..80usize {
            let t = q.powf((k * (k.saturating_sub(1))) as f64 / 2.0) * f64::powi(z, k as i32) / poch(q, q, k);
            match k % 4 {
                0 => re += t,
                1 => im += t,
                2 => re -= t,
                _ => im -= t,
            }
        }
        assert!((qtrig(z, Trig::Cos, q, &c).unwrap() - re).abs() < 1e-13);
        assert!((qtrig(z, Trig::Sin, q, &c).unwrap() - im).abs() < 1e-13);
    }
}

#[test]
fn generalized_exponential_refines() {
    let c = ctx(0.5, 0.25);
    let (q, a) = (c.q, c.alpha);
    // term-by-term with a generous depth
    let mut s = 0.0;
    let mut fac = 1.0;
    for k in 0..120usize {
        if k > 0 {
            fac *= 1.0 - q.powf(qcore::gen_exponent(k, a));
        }
        s += q.powf((k * k.saturating_sub(1)) as f64 / 2.0) * 0.4f64.powi(k as i32) / fac;
    }
    assert!((qexp_gen(0.4, &c).unwrap() - s).abs() < 1e-14);
    assert_eq!(qexp_gen(0.0, &c).unwrap(), 1.0);
}

#[test]
fn reciprocal_identity() {
    for q in [0.3, 0.5, 0.8] {
        let c = ctx(q, 0.0);
        for z in [-3.0, -0.5, 0.2, 0.9] {
            let e = qexp_small(z, q, &c).unwrap().value;
            let p = qpoch_inf_base(z, q, &c).unwrap().value;
            assert!((e * p - 1.0).abs() < 1e-13, "q={q} z={z}");
        }
    }
}

#[test]
fn contiguous_recurrence() {
    for q in [0.3, 0.5, 0.8] {
        let c = ctx(q, 0.0);
        let j = |x: f64, nu: f64| qbessel(2.0 * x, nu, BesselKind::SecondJackson, &c).unwrap();
        for a in [-0.25, 0.25, 1.0] {
            for x in [0.1, 0.4, 0.7, 1.0] {
                let l = q.powf(2.0 * a + 2.0) * x * j(x, a + 2.0);
                let r = (1.0 - q.powf(2.0 * a + 2.0)) * j(x, a + 1.0) - x * j(x, a);
                assert!((l - r).abs() < 1e-11, "q={q} a={a} x={x}: {l} {r}");
            }
        }
    }
}

#[test]
fn small_argument_limits() {
    let y: f64 = 1e-4;
    for q in [0.3, 0.5, 0.8] {
        for a in [-0.5, 0.25, 1.3] {
            let c = ctx(q, a);
            let q2 = q * q;
            let limit = poch(q.powf(2.0 * a + 2.0), q2, 400) / poch(q2, q2, 400);
            let lead = y.powf(-a) * qbessel(2.0 * y, a, BesselKind::SecondJackson, &c).unwrap();
            assert!((lead - limit).abs() < 1e-6);
            // the companion vanishes only linearly: y^{-α} J_{α+1}(2y) ~ const · y
            let next = y.powf(-a) * qbessel(2.0 * y, a + 1.0, BesselKind::SecondJackson, &c).unwrap();
            let slope = poch(q.powf(2.0 * a + 4.0), q2, 400) / poch(q2, q2, 400);
            assert!((next / y - slope).abs() < 1e-6 * slope, "q={q} a={a}: {next}");
        }
    }
}

#[test]
fn half_order_is_trigonometric() {
    for q in [0.3, 0.8] {
        let c = ctx(q, 0.0);
        let x: f64 = 0.6;
        let pre = poch(q, q * q, 400) / poch(q * q, q * q, 400) / x.sqrt();
        let jm = qbessel(2.0 * x, -0.5, BesselKind::SecondJackson, &c).unwrap();
        let jp = qbessel(2.0 * x, 0.5, BesselKind::SecondJackson, &c).unwrap();
        assert!((jm - pre * qtrig(x, Trig::Cos, q, &c).unwrap()).abs() < 1e-13);
        assert!((jp - pre * qtrig(x, Trig::Sin, q, &c).unwrap()).abs() < 1e-13);
    }
}

#[test]
fn difference_identity_scaling() {
    let c = ctx(0.5, 0.25);
    for lambda in [0.5, 1.0, 2.0] {
        for x in [-0.9, -0.3, 0.3, 0.9] {
            let r = bessel_delta_residual(0, lambda, x, BesselParity::OddOrder, &c).unwrap();
            assert!(r < 1e-10, "λ={lambda} x={x}: {r:e}");
        }
    }
    assert_eq!(bessel_delta_residual(1, 1.0, 0.0, BesselParity::EvenOrder, &c).unwrap_err().kind(), "DomainError");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exp_two_routes(q in 0.1..0.9f64, z in -0.9..0.9f64) {
        let c = ctx(q, 0.0);
        // negative z makes the series alternate; measure against Σ|terms|
        let a = qexp_small(z, q, &c).unwrap().value;
        let b = qexp_small_series(z, q, &c).unwrap().value;
        let mass = qexp_small(z.abs(), q, &c).unwrap().value;
        prop_assert!((a - b).abs() < 1e-13 * mass);
        let a = qexp_big(4.0 * z, q, &c).unwrap().value;
        let b = qexp_big_series(4.0 * z, q, &c).unwrap().value;
        let mass = qexp_big(4.0 * z.abs(), q, &c).unwrap().value;
        prop_assert!((a - b).abs() < 1e-13 * mass);
    }

    #[test]
    fn hahn_exton_and_modified_agree(q in 0.2..0.85f64, nu in -0.9..2.0f64, x in 0.05..2.0f64) {
        let c = ctx(q, 0.0);
        let q2 = q * q;
        let pre = poch(q.powf(2.0 * nu + 2.0), q2, 400) / poch(q2, q2, 400) * x.powf(nu);
        let he = qbessel(x, nu, BesselKind::HahnExton, &c).unwrap();
        let jm = qbessel(x, nu, BesselKind::Modified, &c).unwrap();
        prop_assert!((he - pre * jm).abs() < 1e-13 * he.abs().max(1.0));
    }

    #[test]
    fn delta_identities_random(q in 0.3..0.8f64, a in -0.8..1.5f64, lambda in 0.2..2.0f64,
                               x in 0.2..1.0f64, n in 0usize..=2, odd in any::<bool>()) {
        let c = ctx(q, a);
        let p = if odd { BesselParity::OddOrder } else { BesselParity::EvenOrder };
        prop_assert!(bessel_delta_residual(n, lambda, x, p, &c).unwrap() < 1e-9);
    }
}
