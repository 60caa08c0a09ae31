use std::cmp::Ordering;
use std::fmt::Write as _;

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use super::compiled::CompiledField;
use crate::algebra::{Gaussian, Mode, Monomial, Rational, Scalar, VecField, DIM};
use crate::basis::accumulate_walk;
use crate::coefficients::{float_beta_bar, symbolic_beta_bar};
use crate::error::{Error, Result};
use crate::model::{FourierModel, ModelParams};
use crate::words::N_MAX;

/// Truncated averaged system `dX/dt = Σ_{1≤|w|≤n} β̄_w f_w(X)`.
#[derive(Clone, Debug)]
pub struct AveragedSystem {
    pub order: usize,
    pub mode: Mode,
    pub params: ModelParams,
    pub t0: f64,
    symbolic: Option<VecField<Gaussian>>,
    field: VecField<Complex64>,
    compiled: CompiledField,
}

/// Builds the averaged system. Exact mode keeps `A`, `B`, `ν` and `ω^{-1}`
/// symbolic and needs `t0 = 0`.
pub fn build_averaged(params: ModelParams, n: usize, t0: f64, mode: Mode) -> Result<AveragedSystem> {
    if n > N_MAX {
        return Err(Error::Validation(format!("averaging order {n} exceeds {N_MAX}")));
    }
    params.validate()?;
    let (symbolic, field) = match mode {
        Mode::Exact => {
            if t0 != 0.0 {
                return Err(Error::Validation("exact averaging needs t0 = 0".into()));
            }
            let model = FourierModel::exact(params);
            let mut beta = symbolic_beta_bar();
            let mut acc = VecField::zero();
            walk_weighted(&model, n, |w| {
                let b = beta.get(w);
                (b.coeff, b.power as u8)
            }, &mut acc);
            let field = acc.substitute(&params.point());
            (Some(acc), field)
        }
        Mode::Float => {
            let model = FourierModel::float(params);
            let mut beta = float_beta_bar(params.omega, t0);
            let mut acc = VecField::zero();
            accumulate_walk(&model, n, |w| beta.get(w), &mut acc);
            (None, acc)
        }
    };
    let compiled = CompiledField::new(&field);
    Ok(AveragedSystem { order: n, mode, params, t0, symbolic, field, compiled })
}

/// `acc += Σ c_w ω^{-p_w} f_w` with `(c_w, p_w) = weights(w)`.
fn walk_weighted(
    model: &FourierModel<Gaussian>,
    n: usize,
    mut weights: impl FnMut(&crate::words::Word) -> (Gaussian, u8),
    acc: &mut VecField<Gaussian>,
) {
    crate::basis::walk(model, n, |w, f| {
        let (c, p) = weights(w);
        if c.is_zero() {
            return;
        }
        let omega = Monomial { p, ..Monomial::ONE };
        *acc = acc.add(&f.map(|comp| comp.mul_term(omega, c)));
    });
}

impl AveragedSystem {
    /// The symbolic field, present in exact mode.
    pub fn symbolic(&self) -> Option<&VecField<Gaussian>> {
        self.symbolic.as_ref()
    }

    /// The field with all parameters substituted.
    pub fn field(&self) -> &VecField<Complex64> {
        &self.field
    }

    pub fn compiled(&self) -> &CompiledField {
        &self.compiled
    }

    /// Right-hand side at a real state, with the imaginary residue.
    pub fn eval(&self, phi: f64, y: f64) -> ([f64; DIM], f64) {
        self.compiled.eval_real(phi, y)
    }

    /// Canonical text: exact mode groups terms by their power of `ω`.
    pub fn to_text(&self) -> String {
        match &self.symbolic {
            Some(f) => canonical_text(f),
            None => float_text(&self.field),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Trig {
    Cos,
    Sin,
}

#[derive(Clone, Debug)]
struct RealTerm<C> {
    m: i8,
    trig: Trig,
    mono: Monomial,
    coeff: C,
}

impl<C> RealTerm<C> {
    fn key(&self) -> (i8, Trig, u8, u8, u8, u8) {
        (self.m, self.trig, self.mono.j, self.mono.a, self.mono.b, self.mono.e)
    }
}

/// Rewrites `Σ c u^m` pairs as cosines and sines; panics on a field that is
/// not real on real states.
fn real_terms<S: Scalar, C>(
    terms: &[(Monomial, S)],
    coeff: impl Fn(&S) -> (C, C),
    is_zero: impl Fn(&C) -> bool,
    double: impl Fn(C) -> C,
) -> Vec<RealTerm<C>> {
    let mut out = Vec::new();
    for (mono, c) in terms {
        let (re, im) = coeff(c);
        let base = Monomial { m: 0, ..*mono };
        match mono.m.cmp(&0) {
            Ordering::Less => {}
            Ordering::Equal => {
                assert!(is_zero(&im), "non-real coefficient on {mono}");
                if !is_zero(&re) {
                    out.push(RealTerm { m: 0, trig: Trig::Cos, mono: base, coeff: re });
                }
            }
            // c u^m + c̄ u^{-m} = 2 Re c cos mΦ - 2 Im c sin mΦ
            Ordering::Greater => {
                if !is_zero(&re) {
                    out.push(RealTerm { m: mono.m, trig: Trig::Cos, mono: base, coeff: double(re) });
                }
                if !is_zero(&im) {
                    out.push(RealTerm { m: mono.m, trig: Trig::Sin, mono: base, coeff: double(im) });
                }
            }
        }
    }
    out
}

fn factors(mono: &Monomial, m: i8, trig: Trig) -> String {
    let mut parts = Vec::new();
    for (name, e) in [("A", mono.a), ("B", mono.b), ("nu", mono.e), ("Y", mono.j)] {
        match e {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    if m != 0 {
        let f = if trig == Trig::Cos { "cos" } else { "sin" };
        parts.push(if m == 1 { format!("{f}(Phi)") } else { format!("{f}({m} Phi)") });
    }
    parts.join(" ")
}

fn join_terms(items: impl IntoIterator<Item = (bool, String, String)>) -> String {
    let mut s = String::new();
    for (negative, mag, fac) in items {
        let body = match (mag.as_str(), fac.is_empty()) {
            ("1", false) => fac,
            (_, true) => mag,
            _ => format!("{mag} {fac}"),
        };
        match (s.is_empty(), negative) {
            (true, false) => s.push_str(&body),
            (true, true) => write!(s, "-{body}").unwrap(),
            (false, false) => write!(s, " + {body}").unwrap(),
            (false, true) => write!(s, " - {body}").unwrap(),
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

const NAMES: [&str; DIM] = ["dPhi/dt", "dY/dt"];

/// Canonical text of an exact field: one line per power of `ω^{-1}`.
pub fn canonical_text(f: &VecField<Gaussian>) -> String {
    let mut out = String::new();
    for (name, comp) in NAMES.iter().zip(&f.components) {
        writeln!(out, "{name}:").unwrap();
        let Some(top) = comp.max_omega_power() else {
            writeln!(out, "  0").unwrap();
            continue;
        };
        for p in 0..=top {
            let slice = comp.omega_slice(p);
            if slice.is_empty() {
                continue;
            }
            let mut terms = real_terms(
                slice.terms(),
                |c: &Gaussian| (c.re, c.im),
                |r: &Rational| r.is_zero(),
                |r| r * Rational::from_integer(2),
            );
            // sin terms carry -2 Im c
            for t in &mut terms {
                if t.trig == Trig::Sin {
                    t.coeff = -t.coeff;
                }
            }
            terms.sort_by_key(|t| t.key());
            let line = join_terms(terms.iter().map(|t| {
                (t.coeff.is_negative(), t.coeff.abs().to_string(), factors(&t.mono, t.m, t.trig))
            }));
            writeln!(out, "  omega^{}: {line}", -(p as i32)).unwrap();
        }
    }
    out
}

/// Text of a substituted field with decimal coefficients.
pub fn float_text(f: &VecField<Complex64>) -> String {
    let mut out = String::new();
    for (name, comp) in NAMES.iter().zip(&f.components) {
        let mut terms = real_terms(
            comp.terms(),
            |c: &Complex64| (c.re, c.im),
            |x: &f64| x.abs() < 1e-15,
            |x| 2.0 * x,
        );
        for t in &mut terms {
            if t.trig == Trig::Sin {
                t.coeff = -t.coeff;
            }
        }
        terms.sort_by_key(|t| t.key());
        let line = join_terms(
            terms.iter().map(|t| (t.coeff < 0.0, format!("{:.12e}", t.coeff.abs()), factors(&t.mono, t.m, t.trig))),
        );
        writeln!(out, "{name}:\n  {line}").unwrap();
    }
    out
}
