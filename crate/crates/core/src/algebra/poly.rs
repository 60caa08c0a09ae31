//! Sparse Laurent-trigonometric polynomials in `u = e^{iφ}`, `y` and the
//! model parameters `A`, `B`, `ν`, `ω^{-1}`.

use std::cmp::Ordering;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::scalar::{Rational, Scalar};

/// Exponent vector of `u^m y^j A^a B^b ν^e (ω^{-1})^p`.
///
/// Field order is the comparison order, so the derived `Ord` is the
/// lexicographic order on `(m, j, a, b, e, p)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub m: i8,
    pub j: u8,
    pub a: u8,
    pub b: u8,
    pub e: u8,
    pub p: u8,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { m: 0, j: 0, a: 0, b: 0, e: 0, p: 0 };

    pub fn new(m: i8, j: u8, a: u8, b: u8, e: u8, p: u8) -> Self {
        Monomial { m, j, a, b, e, p }
    }

    /// `u^m y^j`, no parameter factors.
    pub fn state(m: i8, j: u8) -> Self {
        Monomial { m, j, ..Monomial::ONE }
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        const MSG: &str = "monomial exponent overflow";
        Monomial {
            m: self.m.checked_add(other.m).expect(MSG),
            j: self.j.checked_add(other.j).expect(MSG),
            a: self.a.checked_add(other.a).expect(MSG),
            b: self.b.checked_add(other.b).expect(MSG),
            e: self.e.checked_add(other.e).expect(MSG),
            p: self.p.checked_add(other.p).expect(MSG),
        }
    }

    /// True when no parameter indeterminate appears.
    pub fn is_state_only(&self) -> bool {
        self.a == 0 && self.b == 0 && self.e == 0 && self.p == 0
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut push = |name: &str, exp: i32| match exp {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{exp}")),
        };
        push("u", self.m as i32);
        push("y", self.j as i32);
        push("A", self.a as i32);
        push("B", self.b as i32);
        push("nu", self.e as i32);
        push("w", -(self.p as i32));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// State variable with respect to which a polynomial is differentiated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Phi,
    Y,
}

/// Numeric values of the model parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamPoint {
    pub a: f64,
    pub b: f64,
    pub nu: f64,
    pub omega: f64,
}

/// Sparse trigonometric polynomial in canonical form: strictly increasing
/// monomials, no zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly<S> {
    terms: Vec<(Monomial, S)>,
}

impl<S: Scalar> Default for TrigPoly<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> TrigPoly<S> {
    pub fn zero() -> Self {
        TrigPoly { terms: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn term(mono: Monomial, c: S) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            TrigPoly { terms: vec![(mono, c)] }
        }
    }

    /// Builds a canonical polynomial from arbitrary (unsorted, repeated) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, S)>>(iter: I) -> Self {
        let mut raw: Vec<(Monomial, S)> = iter.into_iter().collect();
        raw.sort_unstable_by_key(|x| x.0);
        let mut terms: Vec<(Monomial, S)> = Vec::with_capacity(raw.len());
        for (mono, c) in raw {
            match terms.last_mut() {
                Some(last) if last.0 == mono => last.1 += c,
                _ => terms.push((mono, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        TrigPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, S)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Structurally empty term map.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &Monomial) -> S {
        match self.terms.binary_search_by(|(m, _)| m.cmp(mono)) {
            Ok(i) => self.terms[i].1,
            Err(_) => S::zero(),
        }
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let (lhs, rhs) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(lhs.len() + rhs.len());
        let (mut i, mut k) = (0, 0);
        let sign = |c: S| if negate_other { -c } else { c };
        while i < lhs.len() && k < rhs.len() {
            match lhs[i].0.cmp(&rhs[k].0) {
                Ordering::Less => {
                    out.push(lhs[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((rhs[k].0, sign(rhs[k].1)));
                    k += 1;
                }
                Ordering::Equal => {
                    let c = lhs[i].1 + sign(rhs[k].1);
                    if !c.is_zero() {
                        out.push((lhs[i].0, c));
                    }
                    i += 1;
                    k += 1;
                }
            }
        }
        out.extend_from_slice(&lhs[i..]);
        out.extend(rhs[k..].iter().map(|&(m, c)| (m, sign(c))));
        TrigPoly { terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn neg(&self) -> Self {
        TrigPoly { terms: self.terms.iter().map(|&(m, c)| (m, -c)).collect() }
    }

    pub fn scale(&self, c: S) -> Self {
        self.mul_term(Monomial::ONE, c)
    }

    /// Multiplication by a single term; monomial order is translation
    /// invariant so the result stays sorted.
    pub fn mul_term(&self, mono: Monomial, c: S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|&(m, x)| (m.mul(mono), x * c))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        TrigPoly { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_empty() || other.is_empty() {
            return Self::zero();
        }
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        if small.len() <= 6 {
            let mut acc = big.mul_term(small.terms[0].0, small.terms[0].1);
            for &(m, c) in &small.terms[1..] {
                acc = acc.add(&big.mul_term(m, c));
            }
            acc
        } else {
            Self::from_terms(
                big.terms
                    .iter()
                    .flat_map(|&(m1, c1)| small.terms.iter().map(move |&(m2, c2)| (m1.mul(m2), c1 * c2))),
            )
        }
    }

    /// Partial derivative with respect to a state variable. Parameters are
    /// constants.
    pub fn partial(&self, var: Var) -> Self {
        let terms = match var {
            Var::Y => self
                .terms
                .iter()
                .filter(|(m, _)| m.j > 0)
                .map(|&(m, c)| (Monomial { j: m.j - 1, ..m }, c * S::from_int(m.j as i64)))
                .collect(),
            Var::Phi => self
                .terms
                .iter()
                .filter(|(m, _)| m.m != 0)
                .map(|&(m, c)| {
                    let factor = S::from_parts(Rational::from_integer(0), Rational::from_integer(m.m as i128));
                    (m, c * factor)
                })
                .collect(),
        };
        TrigPoly { terms }
    }

    /// Coefficient-wise conjugate combined with `u^m ↦ u^{-m}`: the complex
    /// conjugate function on real arguments.
    pub fn conj(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|&(m, c)| (Monomial { m: -m.m, ..m }, c.conj())))
    }

    /// True when the polynomial takes real values for real arguments.
    pub fn is_self_conjugate(&self) -> bool
    where
        S: PartialEq,
    {
        self.conj() == *self
    }

    /// Substitutes `u = e^{iφ}`, `y` and the parameter values.
    pub fn eval(&self, phi: f64, y: f64, params: &ParamPoint) -> Complex64 {
        if self.terms.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let mut min_m = 0i32;
        let mut max_m = 0i32;
        let mut top = [0usize; 5];
        for (m, _) in &self.terms {
            min_m = min_m.min(m.m as i32);
            max_m = max_m.max(m.m as i32);
            for (slot, e) in top.iter_mut().zip([m.j, m.a, m.b, m.e, m.p]) {
                *slot = (*slot).max(e as usize);
            }
        }
        let u = Complex64::from_polar(1.0, phi);
        let upow: Vec<Complex64> = (min_m..=max_m).map(|k| u.powi(k)).collect();
        let tables: Vec<Vec<f64>> = [y, params.a, params.b, params.nu, 1.0 / params.omega]
            .iter()
            .zip(top)
            .map(|(&x, n)| powers(x, n))
            .collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let real = tables[0][m.j as usize]
                * tables[1][m.a as usize]
                * tables[2][m.b as usize]
                * tables[3][m.e as usize]
                * tables[4][m.p as usize];
            acc += c.to_complex() * upow[(m.m as i32 - min_m) as usize] * real;
        }
        acc
    }

    /// Zero test. Exact mode: the term map is empty. Float mode: the polynomial
    /// vanishes (below 1e-12) at every point of the default [`ZeroTest`].
    pub fn is_zero(&self) -> bool {
        self.is_zero_with(ZeroTest::standard())
    }

    pub fn is_zero_with(&self, test: &ZeroTest) -> bool {
        if S::EXACT || self.terms.is_empty() {
            return self.terms.is_empty();
        }
        test.vanishes(|phi, y, params| self.eval(phi, y, params))
    }

    /// Substitutes numeric parameters, leaving a polynomial in `u` and `y` only.
    pub fn substitute(&self, params: &ParamPoint) -> TrigPoly<Complex64> {
        TrigPoly::from_terms(self.terms.iter().map(|&(m, c)| {
            let factor = params.a.powi(m.a as i32)
                * params.b.powi(m.b as i32)
                * params.nu.powi(m.e as i32)
                * params.omega.powi(-(m.p as i32));
            (Monomial::state(m.m, m.j), c.to_complex() * factor)
        }))
    }

    /// Same monomials, coefficients converted to complex doubles.
    pub fn to_float(&self) -> TrigPoly<Complex64> {
        TrigPoly::from_terms(self.terms.iter().map(|&(m, c)| (m, c.to_complex())))
    }

    /// Largest exponent of `ω^{-1}` present.
    pub fn max_omega_power(&self) -> Option<u8> {
        self.terms.iter().map(|(m, _)| m.p).max()
    }

    /// Terms whose `ω^{-1}` exponent equals `p`.
    pub fn omega_slice(&self, p: u8) -> Self {
        TrigPoly { terms: self.terms.iter().filter(|(m, _)| m.p == p).copied().collect() }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.to_complex().norm()).fold(0.0, f64::max)
    }
}

fn powers(x: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 1.0;
    for _ in 0..=n {
        out.push(acc);
        acc *= x;
    }
    out
}

impl<S: Scalar + fmt::Display> fmt::Display for TrigPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c}) {m}")?;
        }
        Ok(())
    }
}

/// Default seed of the probabilistic zero test.
pub const ZERO_TEST_SEED: u64 = 0x5EED_2016;

/// Number of random evaluation points of the probabilistic zero test.
pub const ZERO_TEST_POINTS: usize = 8;

/// Absolute threshold below which an evaluation counts as zero.
pub const ZERO_TEST_THRESHOLD: f64 = 1e-12;

/// Probabilistic zero test for float-mode polynomials.
///
/// Points are drawn uniformly with a seeded ChaCha8 generator from
/// φ ∈ [0, 2π), y ∈ [-1.5, 1.5], A ∈ [0.1, 1], B ∈ [0.1, 1], ν ∈ [0.05, 1],
/// ω ∈ [2, 10].
#[derive(Clone, Debug)]
pub struct ZeroTest {
    pub seed: u64,
    points: Vec<(f64, f64, ParamPoint)>,
}

impl ZeroTest {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..ZERO_TEST_POINTS)
            .map(|_| {
                let phi = rng.gen_range(0.0..TAU);
                let y = rng.gen_range(-1.5..1.5);
                let params = ParamPoint {
                    a: rng.gen_range(0.1..1.0),
                    b: rng.gen_range(0.1..1.0),
                    nu: rng.gen_range(0.05..1.0),
                    omega: rng.gen_range(2.0..10.0),
                };
                (phi, y, params)
            })
            .collect();
        ZeroTest { seed, points }
    }

    /// The test with [`ZERO_TEST_SEED`].
    pub fn standard() -> &'static ZeroTest {
        static STANDARD: OnceLock<ZeroTest> = OnceLock::new();
        STANDARD.get_or_init(|| ZeroTest::new(ZERO_TEST_SEED))
    }

    pub fn points(&self) -> &[(f64, f64, ParamPoint)] {
        &self.points
    }

    pub fn vanishes<F: Fn(f64, f64, &ParamPoint) -> Complex64>(&self, f: F) -> bool {
        self.points.iter().all(|(phi, y, p)| f(*phi, *y, p).norm() < ZERO_TEST_THRESHOLD)
    }
}
