//! `eval` and `table`: a registry of library functions callable by name
//! with `key=value` arguments.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use qcore::{
    gen_qint, gen_qpoch, monomial_delta_residual, qderiv, qnumber, qpoch, qpoch_inf, sym_qnumber, theta,
    FunctionHandle, QContext, TruncatedValue, Variant,
};
use qfunctions::{bessel_delta_residual, qbessel, qexp_big, qexp_gen, qexp_small, qtrig, BesselKind, BesselParity, Trig};
use qhermite::{
    bessel_expansion_residual, bessel_weight_transform, hermite_h, integral_representation_residual, moment_check,
    norm_constants, poisson_kernel_residual, qlaguerre, relation_residual, rogers_ramanujan_corrected_residual,
    rogers_ramanujan_residual, two_route_residual, weight, KernelForm, Parity, Relation,
};
use qoscillator::{algebra_residual, build_matrix, eigen_residual, phi, AlgebraRelation, MatrixKind};
use serde_json::{json, Map, Value};

use crate::error::{CliError, Result};
use crate::report::format_float;

/// `key=value` arguments; remembers which keys were read so that leftovers
/// can be reported.
#[derive(Debug, Clone, Default)]
pub struct Args {
    map: BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
}

impl Args {
    pub fn parse<S: AsRef<str>>(pairs: &[S]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for p in pairs {
            let p = p.as_ref();
            let (k, v) = p.split_once('=').ok_or_else(|| CliError::arg(p, "expected key=value"))?;
            if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(CliError::arg(k, "given twice"));
            }
        }
        Ok(Args { map, used: RefCell::default() })
    }

    /// Set `key` unless already present.
    pub fn default_value(&mut self, key: &str, v: impl ToString) {
        self.map.entry(key.to_string()).or_insert_with(|| v.to_string());
    }

    pub fn set(&mut self, key: &str, v: impl ToString) {
        self.map.insert(key.to_string(), v.to_string());
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.used.borrow_mut().insert(key.to_string());
        self.map.get(key).map(String::as_str)
    }

    fn str(&self, key: &str) -> Result<&str> {
        self.raw(key).ok_or_else(|| CliError::arg(key, "missing"))
    }

    fn f64(&self, key: &str) -> Result<f64> {
        let s = self.str(key)?;
        s.parse().map_err(|_| CliError::arg(key, format!("not a number: {s:?}")))
    }

    fn usize(&self, key: &str) -> Result<usize> {
        let s = self.str(key)?;
        // swept values arrive as floats
        match s.parse::<f64>() {
            Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 1e9 => Ok(v as usize),
            _ => Err(CliError::arg(key, format!("not a nonnegative integer: {s:?}"))),
        }
    }

    fn choice<T>(&self, key: &str, parse: impl Fn(&str) -> Option<T>, allowed: &str) -> Result<T> {
        let s = self.str(key)?;
        parse(s).ok_or_else(|| CliError::arg(key, format!("expected one of {allowed}, got {s:?}")))
    }

    /// Context from `q` and `alpha`; `alpha` may be omitted when the
    /// function does not depend on it.
    fn ctx(&self, needs_alpha: bool, max_terms: usize) -> Result<QContext> {
        let q = self.f64("q")?;
        let alpha = if needs_alpha || self.map.contains_key("alpha") { self.f64("alpha")? } else { 0.0 };
        Ok(QContext::new(q, alpha)?.with_max_terms(max_terms)?)
    }

    fn finish(&self) -> Result<()> {
        let used = self.used.borrow();
        match self.map.keys().find(|k| !used.contains(*k)) {
            Some(k) => Err(CliError::arg(k, "not an argument of this function")),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalOutput {
    pub value: f64,
    pub tail_bound: Option<f64>,
    /// Further named outputs, e.g. the other normalization constants.
    pub extra: Vec<(&'static str, f64)>,
}

impl From<f64> for EvalOutput {
    fn from(value: f64) -> Self {
        EvalOutput { value, tail_bound: None, extra: vec![] }
    }
}

impl From<TruncatedValue> for EvalOutput {
    fn from(t: TruncatedValue) -> Self {
        EvalOutput { value: t.value, tail_bound: Some(t.tail_bound), extra: vec![] }
    }
}

impl EvalOutput {
    pub fn to_json(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("value".into(), float_json(self.value));
        if let Some(t) = self.tail_bound {
            m.insert("tail_bound".into(), float_json(t));
        }
        for (k, v) in &self.extra {
            m.insert((*k).into(), float_json(*v));
        }
        m
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.value);
        if let Some(t) = self.tail_bound {
            s += &format!("tail_bound {t:e}\n");
        }
        for (k, v) in &self.extra {
            s += &format!("{k} {v}\n");
        }
        s
    }
}

fn float_json(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(format_float(v))
    }
}

type Runner = fn(&Args, usize) -> Result<EvalOutput>;

pub struct FunctionSpec {
    pub name: &'static str,
    pub args: &'static str,
    run: Runner,
}

macro_rules! spec {
    ($name:literal, $args:literal, $run:expr) => {
        FunctionSpec { name: $name, args: $args, run: $run }
    };
}

fn kind_name<T: Copy>(all: &[T], name: impl Fn(T) -> &'static str) -> String {
    all.iter().map(|&k| name(k)).collect::<Vec<_>>().join("|")
}

fn relation(a: &Args) -> Result<Relation> {
    let kind = a.str("kind")?;
    Ok(match kind {
        "generating" => Relation::Generating { z: a.f64("z")? },
        "inversion" => Relation::Inversion,
        "forward_shift" => Relation::ForwardShift,
        "backward_shift" => Relation::BackwardShift,
        "qdiff" => Relation::QDiff,
        "rodrigues" => Relation::Rodrigues,
        _ => {
            return Err(CliError::arg(
                "kind",
                "expected generating|inversion|forward_shift|backward_shift|qdiff|rodrigues",
            ))
        }
    })
}

pub static REGISTRY: &[FunctionSpec] = &[
    spec!("qpoch", "a n q", |a, mt| {
        let c = a.ctx(false, mt)?;
        Ok(qpoch(a.f64("a")?, a.usize("n")?, &c).into())
    }),
    spec!("qpoch_inf", "a q", |a, mt| Ok(qpoch_inf(a.f64("a")?, &a.ctx(false, mt)?)?.into())),
    spec!("qnumber", "x q", |a, mt| Ok(qnumber(a.f64("x")?, &a.ctx(false, mt)?).into())),
    spec!("sym_qnumber", "x base", |a, _| Ok(sym_qnumber(a.f64("x")?, a.f64("base")?).into())),
    spec!("gen_qint", "n q alpha", |a, mt| Ok(gen_qint(a.usize("n")?, &a.ctx(true, mt)?).into())),
    spec!("gen_qpoch", "n q alpha", |a, mt| Ok(gen_qpoch(a.usize("n")?, &a.ctx(true, mt)?).into())),
    spec!("theta", "n", |a, _| Ok(f64::from(theta(a.usize("n")?)).into())),
    spec!("qderiv_monomial", "variant n x q alpha  (operator applied to x^n)", |a, mt| {
        let c = a.ctx(true, mt)?;
        let v = a.choice("variant", Variant::parse, &kind_name(&Variant::ALL, Variant::name))?;
        let n = a.usize("n")? as i32;
        let f = FunctionHandle::<f64>::new(move |y| y.powi(n));
        Ok(qderiv(&f, a.f64("x")?, v, &c)?.into())
    }),
    spec!("monomial_delta_residual", "n k x q alpha", |a, mt| {
        Ok(monomial_delta_residual(a.usize("n")?, a.usize("k")?, a.f64("x")?, &a.ctx(true, mt)?)?.into())
    }),
    spec!("qexp_big", "z base q", |a, mt| Ok(qexp_big(a.f64("z")?, a.f64("base")?, &a.ctx(false, mt)?)?.into())),
    spec!("qexp_small", "z base q", |a, mt| {
        Ok(qexp_small(a.f64("z")?, a.f64("base")?, &a.ctx(false, mt)?)?.into())
    }),
    spec!("qtrig", "z which=cos|sin base q", |a, mt| {
        let w = a.choice(
            "which",
            |s| match s {
                "cos" => Some(Trig::Cos),
                "sin" => Some(Trig::Sin),
                _ => None,
            },
            "cos|sin",
        )?;
        Ok(qtrig(a.f64("z")?, w, a.f64("base")?, &a.ctx(false, mt)?)?.into())
    }),
    spec!("qexp_gen", "z q alpha", |a, mt| Ok(qexp_gen(a.f64("z")?, &a.ctx(true, mt)?)?.into())),
    spec!("qbessel", "x order kind=second_jackson|hahn_exton|modified q", |a, mt| {
        let kind = a.choice(
            "kind",
            |s| match s {
                "second_jackson" => Some(BesselKind::SecondJackson),
                "hahn_exton" => Some(BesselKind::HahnExton),
                "modified" => Some(BesselKind::Modified),
                _ => None,
            },
            "second_jackson|hahn_exton|modified",
        )?;
        Ok(qbessel(a.f64("x")?, a.f64("order")?, kind, &a.ctx(false, mt)?)?.into())
    }),
    spec!("bessel_delta_residual", "n lambda x parity=even_order|odd_order q alpha", |a, mt| {
        let p = a.choice(
            "parity",
            |s| match s {
                "even_order" => Some(BesselParity::EvenOrder),
                "odd_order" => Some(BesselParity::OddOrder),
                _ => None,
            },
            "even_order|odd_order",
        )?;
        Ok(bessel_delta_residual(a.usize("n")?, a.f64("lambda")?, a.f64("x")?, p, &a.ctx(true, mt)?)?.into())
    }),
    spec!("hermite_h", "n x q alpha", |a, mt| Ok(hermite_h(a.usize("n")?, a.f64("x")?, &a.ctx(true, mt)?).into())),
    spec!("qlaguerre", "n order x q", |a, mt| {
        Ok(qlaguerre(a.usize("n")?, a.f64("order")?, a.f64("x")?, &a.ctx(false, mt)?).into())
    }),
    spec!("two_route_residual", "n x q alpha", |a, mt| {
        Ok(two_route_residual(a.usize("n")?, a.f64("x")?, &a.ctx(true, mt)?).into())
    }),
    spec!("weight", "x q alpha", |a, mt| Ok(weight(a.f64("x")?, &a.ctx(true, mt)?).into())),
    spec!("norm_constants", "n q alpha  (value is d; C and c follow)", |a, mt| {
        let k = norm_constants(a.usize("n")?, &a.ctx(true, mt)?)?;
        Ok(EvalOutput { value: k.d, tail_bound: None, extra: vec![("C", k.big_c), ("c", k.c)] })
    }),
    spec!("relation_residual", "kind n x [z] q alpha", |a, mt| {
        let kind = relation(a)?;
        let n = if matches!(kind, Relation::Generating { .. }) { 0 } else { a.usize("n")? };
        Ok(relation_residual(kind, n, a.f64("x")?, &a.ctx(true, mt)?)?.into())
    }),
    spec!("moment_check", "n q alpha", |a, mt| Ok(moment_check(a.usize("n")?, &a.ctx(true, mt)?)?.into())),
    spec!("bessel_weight_transform", "x q alpha", |a, mt| {
        Ok(bessel_weight_transform(a.f64("x")?, &a.ctx(true, mt)?)?.into())
    }),
    spec!("integral_representation_residual", "n x parity=even|odd q alpha", |a, mt| {
        let p = a.choice(
            "parity",
            |s| match s {
                "even" => Some(Parity::Even),
                "odd" => Some(Parity::Odd),
                _ => None,
            },
            "even|odd",
        )?;
        Ok(integral_representation_residual(a.usize("n")?, a.f64("x")?, p, &a.ctx(true, mt)?)?.into())
    }),
    spec!("poisson_kernel_residual", "x y which=general|half_integer_corollary q alpha", |a, mt| {
        let w = a.choice(
            "which",
            |s| match s {
                "general" => Some(KernelForm::General),
                "half_integer_corollary" => Some(KernelForm::HalfIntegerCorollary),
                _ => None,
            },
            "general|half_integer_corollary",
        )?;
        let needs_alpha = w == KernelForm::General;
        Ok(poisson_kernel_residual(a.f64("x")?, a.f64("y")?, w, &a.ctx(needs_alpha, mt)?)?.into())
    }),
    spec!("bessel_expansion_residual", "x q alpha", |a, mt| {
        Ok(bessel_expansion_residual(a.f64("x")?, &a.ctx(true, mt)?)?.into())
    }),
    spec!("rogers_ramanujan_residual", "q alpha", |a, mt| Ok(rogers_ramanujan_residual(&a.ctx(true, mt)?)?.into())),
    spec!("rogers_ramanujan_corrected_residual", "q alpha", |a, mt| {
        Ok(rogers_ramanujan_corrected_residual(&a.ctx(true, mt)?)?.into())
    }),
    spec!("phi", "n x q alpha", |a, mt| Ok(phi(a.usize("n")?, a.f64("x")?, &a.ctx(true, mt)?)?.into())),
    spec!("eigen_residual", "n x q alpha", |a, mt| {
        Ok(eigen_residual(a.usize("n")?, a.f64("x")?, &a.ctx(true, mt)?)?.into())
    }),
    spec!("matrix_entry", "which i j dim q alpha", |a, mt| {
        let w = a.choice("which", MatrixKind::parse, &kind_name(&MatrixKind::ALL, MatrixKind::name))?;
        let m = build_matrix(w, a.usize("dim")?, &a.ctx(true, mt)?)?;
        let (i, j) = (a.usize("i")?, a.usize("j")?);
        if i >= m.dim || j >= m.dim {
            return Err(CliError::arg("i", format!("index ({i}, {j}) outside a {0}x{0} matrix", m.dim)));
        }
        Ok(m.entries[(i, j)].into())
    }),
    spec!("algebra_residual", "relation dim q alpha", |a, mt| {
        let r = a.choice("relation", AlgebraRelation::parse, &kind_name(&AlgebraRelation::ALL, AlgebraRelation::name))?;
        Ok(algebra_residual(r, a.usize("dim")?, &a.ctx(true, mt)?)?.into())
    }),
];

pub fn lookup(name: &str) -> Result<&'static FunctionSpec> {
    REGISTRY.iter().find(|f| f.name == name).ok_or_else(|| CliError::UnknownFunction(name.to_string()))
}

pub fn eval(name: &str, args: &Args, max_terms: usize) -> Result<EvalOutput> {
    let spec = lookup(name)?;
    let out = (spec.run)(args, max_terms)?;
    args.finish()?;
    Ok(out)
}

/// `param=lo:hi:count`
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Sweep {
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || CliError::arg("sweep", format!("expected param=lo:hi:count, got {s:?}"));
        let (param, range) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        let [lo, hi, count] = parts[..] else { return Err(bad()) };
        Ok(Sweep {
            param: param.trim().to_string(),
            lo: lo.trim().parse().map_err(|_| bad())?,
            hi: hi.trim().parse().map_err(|_| bad())?,
            count: count.trim().parse().map_err(|_| bad())?,
        })
    }

    pub fn points(&self) -> Vec<f64> {
        match self.count {
            0 => vec![],
            1 => vec![self.lo],
            n => (0..n).map(|i| self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

/// Evaluate `name` at every sweep point and write the table.
pub fn table<W: Write>(
    name: &str,
    args: &Args,
    sweep: &Sweep,
    format: TableFormat,
    max_terms: usize,
    mut out: W,
) -> Result<()> {
    let spec = lookup(name)?;
    let mut rows = Vec::new();
    for x in sweep.points() {
        let mut a = args.clone();
        a.set(&sweep.param, x);
        let r = (spec.run)(&a, max_terms)?;
        a.finish()?;
        rows.push((x, r));
    }
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([sweep.param.as_str(), "value"])?;
            for (x, r) in &rows {
                w.write_record([x.to_string(), format_float(r.value)])?;
            }
            w.flush()?;
        }
        TableFormat::Json => {
            let arr: Vec<Value> = rows
                .iter()
                .map(|(x, r)| {
                    let mut m = r.to_json();
                    m.insert(sweep.param.clone(), json!(x));
                    Value::Object(m)
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&arr)?)?;
        }
    }
    Ok(())
}
