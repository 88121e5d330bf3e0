//! Finite sections of the oscillator operators in the φ_n basis.

use nalgebra::DMatrix;
use qcore::{sym_qnumber, Dd, QContext, QError, QParams, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    A,
    APlus,
    N,
    ParityK,
    H,
    B,
    BPlus,
    K0,
    KPlus,
    KMinus,
    Casimir,
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 11] = [
        MatrixKind::A,
        MatrixKind::APlus,
        MatrixKind::N,
        MatrixKind::ParityK,
        MatrixKind::H,
        MatrixKind::B,
        MatrixKind::BPlus,
        MatrixKind::K0,
        MatrixKind::KPlus,
        MatrixKind::KMinus,
        MatrixKind::Casimir,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::A => "a",
            MatrixKind::APlus => "a_plus",
            MatrixKind::N => "N",
            MatrixKind::ParityK => "parity_K",
            MatrixKind::H => "H",
            MatrixKind::B => "b",
            MatrixKind::BPlus => "b_plus",
            MatrixKind::K0 => "K0",
            MatrixKind::KPlus => "K_plus",
            MatrixKind::KMinus => "K_minus",
            MatrixKind::Casimir => "casimir",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub dim: usize,
    pub entries: DMatrix<f64>,
    pub label: String,
}

impl OperatorMatrix {
    fn new(label: &str, entries: DMatrix<f64>) -> Self {
        OperatorMatrix { dim: entries.nrows(), entries, label: label.to_string() }
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        off_diagonal(&self.entries).is_none_or(|(_, _, v)| v.abs() <= tol)
    }
}

// Entries are built in double-double: at small q they grow like q^{-dim},
// and relations such as the number recovery take logs of q^{n+1} formed as
// 1 − (1−q)⟦n+1⟧, which costs all but a few f64 digits.
type Mat = DMatrix<Dd>;

struct Consts {
    q: Dd,
    sq: Dd,
    alpha: Dd,
    nu: Dd,
    p: QParams<Dd>,
}

impl Consts {
    fn new(ctx: &QContext) -> Self {
        let q = Dd::from(ctx.q);
        let alpha = Dd::from(ctx.alpha);
        Consts { q, sq: q.sqrt(), alpha, nu: alpha + Dd::from(0.5), p: QParams::from_ctx(ctx) }
    }

    /// ⟦n⟧_{q,α}
    fn gen_qint(&self, n: usize) -> Dd {
        (Dd::one() - self.p.gen_power(n)) / (Dd::one() - self.q)
    }
}

fn sym_q(x: Dd, base: Dd) -> Dd {
    (base.powf(x) - base.powf(-x)) / (base - Dd::one() / base)
}

fn parity(n: usize) -> Dd {
    Dd::from(if n % 2 == 0 { 1.0 } else { -1.0 })
}

fn idx(n: usize) -> Dd {
    Dd::from(n as f64)
}

fn diag(dim: usize, f: impl Fn(usize) -> Dd) -> Mat {
    Mat::from_fn(dim, dim, |i, j| if i == j { f(i) } else { Dd::zero() })
}

/// Lowering matrix with `v(j)` in slot (j−1, j).
fn lowering(dim: usize, v: impl Fn(usize) -> Dd) -> Mat {
    Mat::from_fn(dim, dim, |i, j| if j == i + 1 { v(j) } else { Dd::zero() })
}

fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0f64, |a, v| a.max(v.to_f64().abs()))
}

/// Largest off-diagonal entry, if any is nonzero.
fn off_diagonal(m: &DMatrix<f64>) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)];
            if i != j && v != 0.0 && best.is_none_or(|b| v.abs() > b.2.abs()) {
                best = Some((i, j, v));
            }
        }
    }
    best
}

fn check_diagonal(m: &DMatrix<f64>) -> Result<()> {
    match off_diagonal(m) {
        Some((row, col, value)) if value.abs() > 1e-14 => Err(QError::NotDiagonal { row, col, value }),
        _ => Ok(()),
    }
}

/// [M]_base on the diagonal.
fn bracket_dd(m: &Mat, base: Dd) -> Result<Mat> {
    check_diagonal(&m.map(|v| v.to_f64()))?;
    Ok(diag(m.nrows(), |i| sym_q(m[(i, i)], base)))
}

fn build_dd(which: MatrixKind, dim: usize, c: &Consts) -> Result<Mat> {
    if dim < 3 {
        return Err(QError::DimensionError(format!("matrix dimension must be at least 3, got {dim}")));
    }
    let gamma = Dd::one() / sym_q(Dd::from(2.0), c.sq);
    let a = || lowering(dim, |j| c.gen_qint(j).sqrt());
    // b|j⟩ = √[j]_{√q}|j−1⟩ for even j, √[j+2α+1]_{√q}|j−1⟩ for odd j
    let b = || {
        lowering(dim, |j| {
            let x = if j % 2 == 0 { idx(j) } else { idx(j + 1) + c.alpha * Dd::from(2.0) };
            sym_q(x, c.sq).sqrt()
        })
    };
    let k0 = || diag(dim, |n| (idx(n + 1) + c.alpha) * Dd::from(0.5));
    Ok(match which {
        MatrixKind::A => a(),
        MatrixKind::APlus => a().transpose(),
        MatrixKind::N => diag(dim, idx),
        MatrixKind::ParityK => diag(dim, parity),
        MatrixKind::H => diag(dim, |n| c.gen_qint(n)),
        MatrixKind::B => b(),
        MatrixKind::BPlus => b().transpose(),
        MatrixKind::K0 => k0(),
        MatrixKind::KPlus => {
            let bp = b().transpose();
            &bp * &bp * gamma
        }
        MatrixKind::KMinus => {
            let bm = b();
            &bm * &bm * gamma
        }
        MatrixKind::Casimir => {
            let br = bracket_dd(&(k0() - Mat::identity(dim, dim) * Dd::from(0.5)), c.q)?;
            let (bm, bp) = (b(), b().transpose());
            let kk = (&bp * &bp) * (&bm * &bm) * (gamma * gamma);
            &br * &br - kk
        }
    })
}

pub fn build_matrix(which: MatrixKind, dim: usize, ctx: &QContext) -> Result<OperatorMatrix> {
    let m = build_dd(which, dim, &Consts::new(ctx))?;
    Ok(OperatorMatrix::new(which.name(), m.map(|v| v.to_f64())))
}

/// [M]_base entrywise on the diagonal of a diagonal matrix.
pub fn sym_qbracket_diag(m: &OperatorMatrix, base: f64) -> Result<OperatorMatrix> {
    check_diagonal(&m.entries)?;
    let e = DMatrix::from_fn(m.dim, m.dim, |i, j| if i == j { sym_qnumber(m.entries[(i, i)], base) } else { 0.0 });
    Ok(OperatorMatrix::new(&format!("[{}]", m.label), e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraRelation {
    /// [N, a] + a = 0
    NA,
    /// [N, a⁺] − a⁺ = 0
    NAPlus,
    /// [K₀, K₊] − K₊ = 0
    K0KPlus,
    /// [K₀, K₋] + K₋ = 0
    K0KMinus,
    /// [K₋, K₊] − [2K₀]_q = 0
    KMinusKPlus,
    /// C = [α/2]_q² on even indices
    CasimirEven,
    /// C = [(α+1)/2]_q² on odd indices
    CasimirOdd,
    /// bb⁺ − q^{(1+2νK)/2} b⁺b = [1+2νK]_{√q} q^{−(N+ν−νK)/2}
    DeformedCommutPlus,
    /// bb⁺ − q^{−(1+2νK)/2} b⁺b = [1+2νK]_{√q} q^{(N+ν−νK)/2}
    DeformedCommutMinus,
    /// (1/(2 ln q))[ln(I−(1−q)aa⁺) + ln(I−(1−q)a⁺a)] − (α+1) = N
    NumberRecovery,
    /// H = a⁺a
    HFactorization,
}

impl AlgebraRelation {
    pub const ALL: [AlgebraRelation; 11] = [
        AlgebraRelation::NA,
        AlgebraRelation::NAPlus,
        AlgebraRelation::K0KPlus,
        AlgebraRelation::K0KMinus,
        AlgebraRelation::KMinusKPlus,
        AlgebraRelation::CasimirEven,
        AlgebraRelation::CasimirOdd,
        AlgebraRelation::DeformedCommutPlus,
        AlgebraRelation::DeformedCommutMinus,
        AlgebraRelation::NumberRecovery,
        AlgebraRelation::HFactorization,
    ];

    /// Indices at the top of a truncated basis that the relation cannot see
    /// correctly: raising by two escapes the section.
    pub fn safe_block(self) -> usize {
        use AlgebraRelation::*;
        match self {
            K0KPlus | K0KMinus | KMinusKPlus | CasimirEven | CasimirOdd => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        use AlgebraRelation::*;
        match self {
            NA => "N_a",
            NAPlus => "N_a_plus",
            K0KPlus => "K0_K_plus",
            K0KMinus => "K0_K_minus",
            KMinusKPlus => "Kminus_Kplus",
            CasimirEven => "casimir_even",
            CasimirOdd => "casimir_odd",
            DeformedCommutPlus => "deformed_commut_plus",
            DeformedCommutMinus => "deformed_commut_minus",
            NumberRecovery => "number_recovery",
            HFactorization => "H_factorization",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.name() == s)
    }
}

/// Max-norm of LHS − RHS on the leading block of size dim − safe_block.
pub fn algebra_residual(rel: AlgebraRelation, dim: usize, ctx: &QContext) -> Result<f64> {
    use AlgebraRelation::*;
    let safe = rel.safe_block();
    if dim < safe + 3 {
        return Err(QError::DimensionError(format!(
            "{} needs dim >= {}, got {dim}",
            rel.name(),
            safe + 3
        )));
    }
    let c = Consts::new(ctx);
    let m = |k: MatrixKind| build_dd(k, dim, &c);
    let comm = |x: &Mat, y: &Mat| x * y - y * x;
    let id = || Mat::identity(dim, dim);
    let q = c.q;
    let block = dim - safe;
    let diff: Mat = match rel {
        NA => {
            let a = m(MatrixKind::A)?;
            comm(&m(MatrixKind::N)?, &a) + a
        }
        NAPlus => {
            let ap = m(MatrixKind::APlus)?;
            comm(&m(MatrixKind::N)?, &ap) - ap
        }
        K0KPlus => {
            let kp = m(MatrixKind::KPlus)?;
            comm(&m(MatrixKind::K0)?, &kp) - kp
        }
        K0KMinus => {
            let km = m(MatrixKind::KMinus)?;
            comm(&m(MatrixKind::K0)?, &km) + km
        }
        KMinusKPlus => {
            let two_k0 = m(MatrixKind::K0)? * Dd::from(2.0);
            comm(&m(MatrixKind::KMinus)?, &m(MatrixKind::KPlus)?) - bracket_dd(&two_k0, q)?
        }
        CasimirEven | CasimirOdd => {
            let cas = m(MatrixKind::Casimir)?;
            let (p, x) = if rel == CasimirEven { (0, c.alpha) } else { (1, c.alpha + Dd::one()) };
            let lam = sym_q(x * Dd::from(0.5), q).powi(2);
            // rows of the other parity belong to the other eigenvalue
            Mat::from_fn(dim, dim, |i, j| {
                if i % 2 != p {
                    Dd::zero()
                } else if i == j {
                    cas[(i, j)] - lam
                } else {
                    cas[(i, j)]
                }
            })
        }
        DeformedCommutPlus | DeformedCommutMinus => {
            let s = Dd::from(if rel == DeformedCommutPlus { 1.0 } else { -1.0 });
            let (b, bp) = (m(MatrixKind::B)?, m(MatrixKind::BPlus)?);
            let half = Dd::from(0.5);
            let two_nu = c.nu * Dd::from(2.0);
            let left = diag(dim, |n| q.powf(s * (Dd::one() + two_nu * parity(n)) * half));
            let rhs = diag(dim, |n| {
                let k = parity(n);
                sym_q(Dd::one() + two_nu * k, c.sq) * q.powf(-s * (idx(n) + c.nu - c.nu * k) * half)
            });
            &b * &bp - left * (&bp * &b) - rhs
        }
        NumberRecovery => {
            let (a, ap) = (m(MatrixKind::A)?, m(MatrixKind::APlus)?);
            let omq = Dd::one() - q;
            let l1 = diag_log(&(id() - (&a * &ap) * omq))?;
            let l2 = diag_log(&(id() - (&ap * &a) * omq))?;
            (l1 + l2) * (Dd::one() / (q.ln() * Dd::from(2.0))) - id() * (c.alpha + Dd::one()) - m(MatrixKind::N)?
        }
        HFactorization => m(MatrixKind::H)? - m(MatrixKind::APlus)? * m(MatrixKind::A)?,
    };
    Ok(max_abs(&diff.view((0, 0), (block, block)).into_owned()))
}

/// Entrywise logarithm of a diagonal matrix.
fn diag_log(m: &Mat) -> Result<Mat> {
    check_diagonal(&m.map(|v| v.to_f64()))?;
    Ok(diag(m.nrows(), |i| m[(i, i)].ln()))
}

/// max |b − q^{−(N+(K+1)ν)/4} a|, with ν = α + ½.
pub fn bridge_residual(dim: usize, ctx: &QContext) -> Result<f64> {
    let c = Consts::new(ctx);
    let a = build_dd(MatrixKind::A, dim, &c)?;
    let b = build_dd(MatrixKind::B, dim, &c)?;
    let s = diag(dim, |n| c.q.powf(-(idx(n) + (parity(n) + Dd::one()) * c.nu) * Dd::from(0.25)));
    Ok(max_abs(&(b - s * a)))
}
