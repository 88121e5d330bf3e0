use proptest::prelude::*;
use qcore::{gen_qint, qnumber, sym_qnumber, Dd, FunctionHandle, QContext, Real};
use qoscillator::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const QS: [f64; 3] = [0.3, 0.5, 0.8];
const ALPHAS: [f64; 3] = [-0.5, 0.25, 1.3];

fn ctx(q: f64, a: f64) -> QContext {
    QContext::new(q, a).unwrap()
}

fn grid() -> impl Iterator<Item = QContext> {
    QS.into_iter().flat_map(|q| ALPHAS.into_iter().map(move |a| ctx(q, a)))
}

fn lattice(q: f64) -> impl Iterator<Item = f64> {
    (-3..=10).flat_map(move |k| {
        let x = q.powi(k);
        [x, -x]
    })
}

#[test]
fn eigenrelation_on_lattice() {
    for c in grid() {
        for n in 0..=8 {
            for x in lattice(c.q) {
                let r = eigen_residual(n, x, &c).unwrap();
                assert!(r < 1e-9, "n={n} x={x} q={} α={}: {r:e}", c.q, c.alpha);
            }
        }
        for x in lattice(c.q) {
            assert!(ladder_residual(0, Ladder::A, x, &c).unwrap() < 1e-11);
        }
    }
}

#[test]
fn ladder_consistency() {
    for c in grid() {
        for n in 0..=8 {
            for x in lattice(c.q) {
                for l in [Ladder::A, Ladder::APlus] {
                    let r = ladder_residual(n, l, x, &c).unwrap();
                    assert!(r < 1e-9, "{l:?} n={n} x={x} q={} α={}: {r:e}", c.q, c.alpha);
                }
            }
        }
    }
}

#[test]
fn repeated_raising() {
    let c = ctx(0.5, 0.25);
    let mut f = WaveFunction::<Dd>::new(0, &c).unwrap().handle;
    let mut fact = 1.0;
    for n in 1..=6 {
        f = ladder_handle(&f, Ladder::APlus, &c);
        fact *= gen_qint(n, &c);
        let want = WaveFunction::<Dd>::new(n, &c).unwrap();
        for x in [0.3, -0.9, 1.7] {
            let got = f.eval(Dd::from(x)).unwrap() / Dd::from(fact).sqrt();
            let w = want.eval(Dd::from(x)).unwrap();
            assert!((got - w).abs().to_f64() < 1e-8, "n={n} x={x}");
        }
    }
}

#[test]
fn projection_matches_matrix_columns() {
    let c = ctx(0.5, 0.25);
    let dim = 8;
    let waves: Vec<_> = (0..dim).map(|n| WaveFunction::<Dd>::new(n, &c).unwrap().handle).collect();
    for (which, kind) in [(Ladder::A, MatrixKind::A), (Ladder::APlus, MatrixKind::APlus), (Ladder::H, MatrixKind::H)] {
        let mat = build_matrix(kind, dim, &c).unwrap().entries;
        for n in 0..=6 {
            let g = ladder_handle(&waves[n], which, &c);
            for m in 0..dim {
                let v = inner_product(&g, &waves[m], &c).unwrap();
                assert!((v - mat[(m, n)]).abs() < 1e-6, "{which:?} ({m},{n}): {v} vs {}", mat[(m, n)]);
            }
        }
    }
}

#[test]
fn selfadjoint_examples() {
    let c = ctx(0.5, 0.25);
    let p = |n| WaveFunction::<Dd>::new(n, &c).unwrap().handle;
    let f = p(0).combine(Dd::one(), &p(2), Dd::one());
    assert_eq!(selfadjoint_residual(&f, &f, &c).unwrap(), 0.0);
    assert!(selfadjoint_residual(&f, &p(2), &c).unwrap() < 1e-7);
    assert!(selfadjoint_residual(&p(1), &p(3), &c).unwrap() < 1e-7);
}

#[test]
fn wavefunctions_orthonormal() {
    let c = ctx(0.5, 1.3);
    for n in 0..4 {
        let f = WaveFunction::<Dd>::new(n, &c).unwrap().handle;
        for m in n..4 {
            let g = WaveFunction::<Dd>::new(m, &c).unwrap().handle;
            let v = inner_product(&f, &g, &c).unwrap();
            let want = if n == m { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-8, "<φ{n},φ{m}> = {v}");
        }
    }
}

#[test]
fn qnumber_bridge() {
    for c in grid() {
        for x in [1.0, 2.0, 2.0 * c.alpha + 2.0, 7.3] {
            let l = sym_qnumber(x, c.q.sqrt());
            let r = c.q.powf(-(x - 1.0) / 2.0) * qnumber(x, &c);
            assert!((l - r).abs() < 1e-13 * l.abs().max(1.0), "{x}: {l} {r}");
        }
    }
}

#[test]
fn qnumber_addition_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in QS {
        for _ in 0..50 {
            let [a, b, c]: [f64; 3] = std::array::from_fn(|_| rng.random_range(-5.0..5.0));
            let s = |x: f64| sym_qnumber(x, q);
            let terms = [s(a) * s(b - c), s(b) * s(c - a), s(c) * s(a - b)];
            let scale = terms.iter().fold(1f64, |m, t| m.max(t.abs()));
            assert!(terms.iter().sum::<f64>().abs() < 1e-12 * scale, "{a} {b} {c}");
        }
    }
}

#[test]
fn hamiltonian_spectrum_interleaves() {
    for c in grid() {
        let h = build_matrix(MatrixKind::H, 12, &c).unwrap().entries;
        for m in 0..6 {
            assert!((h[(2 * m, 2 * m)] - qnumber(2.0 * m as f64, &c)).abs() < 1e-13 * h[(2 * m, 2 * m)].max(1.0));
            let odd = qnumber(2.0 * m as f64 + 2.0 * c.alpha + 2.0, &c);
            assert!((h[(2 * m + 1, 2 * m + 1)] - odd).abs() < 1e-13 * odd.max(1.0));
        }
    }
}

#[test]
fn algebra_on_default_grid() {
    use AlgebraRelation::*;
    for c in grid() {
        for rel in AlgebraRelation::ALL {
            let tol = match rel {
                NA | NAPlus => 1e-13,
                K0KPlus | K0KMinus | CasimirEven | CasimirOdd | NumberRecovery | HFactorization => 1e-12,
                KMinusKPlus | DeformedCommutPlus | DeformedCommutMinus => 1e-11,
            };
            let r = algebra_residual(rel, 12, &c).unwrap();
            assert!(r < tol, "{} q={} α={}: {r:e}", rel.name(), c.q, c.alpha);
        }
        assert!(bridge_residual(12, &c).unwrap() < 1e-13);
    }
}

#[test]
fn algebra_examples() {
    let c = ctx(0.5, 0.25);
    assert!(algebra_residual(AlgebraRelation::NA, 8, &c).unwrap() < 1e-13);
    assert!(algebra_residual(AlgebraRelation::KMinusKPlus, 10, &c).unwrap() < 1e-11);
    assert!(algebra_residual(AlgebraRelation::CasimirEven, 10, &c).unwrap() < 1e-12);
    let cas = build_matrix(MatrixKind::Casimir, 6, &c).unwrap().entries;
    let (e, o) = (sym_qnumber(0.125, 0.5).powi(2), sym_qnumber(0.625, 0.5).powi(2));
    // the top two rows see the truncation
    for i in 0..4 {
        let want = if i % 2 == 0 { e } else { o };
        assert!((cas[(i, i)] - want).abs() < 1e-12);
    }
}

#[test]
fn functions_of_wrong_shape_are_rejected() {
    let c = ctx(0.5, 0.25);
    let f = FunctionHandle::<Dd>::constant(Dd::one());
    assert_eq!(apply_ladder(&f, Ladder::H, Dd::zero(), &c).unwrap_err().kind(), "DomainError");
    assert_eq!(build_matrix(MatrixKind::A, 2, &c).unwrap_err().kind(), "DimensionError");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrices_are_adjoint_pairs(q in 0.1f64..0.95, a in -0.9f64..2.0, dim in 3usize..20) {
        let c = ctx(q, a);
        let am = build_matrix(MatrixKind::A, dim, &c).unwrap().entries;
        let ap = build_matrix(MatrixKind::APlus, dim, &c).unwrap().entries;
        prop_assert_eq!(am.transpose(), ap);
        let km = build_matrix(MatrixKind::KMinus, dim, &c).unwrap().entries;
        let kp = build_matrix(MatrixKind::KPlus, dim, &c).unwrap().entries;
        prop_assert!((km.transpose() - kp).amax() == 0.0);
    }

    #[test]
    fn h_factorizes(q in 0.1f64..0.95, a in -0.9f64..2.0, dim in 4usize..30) {
        let c = ctx(q, a);
        prop_assert!(algebra_residual(AlgebraRelation::HFactorization, dim, &c).unwrap() < 1e-13);
        prop_assert!(algebra_residual(AlgebraRelation::NA, dim, &c).unwrap() < 1e-13);
    }

    #[test]
    fn wavefunction_parity(n in 0usize..8, x in 0.05f64..4.0) {
        let c = ctx(0.5, 0.25);
        let s = if n % 2 == 0 { 1.0 } else { -1.0 };
        let (p, m) = (phi(n, x, &c).unwrap(), phi(n, -x, &c).unwrap());
        prop_assert!((p - s * m).abs() <= 1e-15 * p.abs().max(1e-300));
    }
}
