//! Coefficient fields: exact Gaussian rationals and complex doubles.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rational numbers used by exact mode.
///
/// Overflow of the `i128` backing integers panics (overflow checks are enabled
/// in every build profile of this workspace), so exact results are never
/// silently wrong.
pub type Rational = Ratio<i128>;

/// Arithmetic mode of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

/// A coefficient field closed under the operations needed by [`TrigPoly`].
///
/// Mixing modes is rejected at compile time: a `TrigPoly<Gaussian>` can only be
/// combined with another `TrigPoly<Gaussian>`.
///
/// [`TrigPoly`]: super::TrigPoly
pub trait Scalar:
    Copy
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + AddAssign
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// `true` when arithmetic never rounds and the zero test is exact.
    const EXACT: bool;
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_parts(re: Rational, im: Rational) -> Self;
    fn conj(&self) -> Self;
    fn to_complex(&self) -> Complex64;

    fn from_int(n: i64) -> Self {
        Self::from_parts(Rational::from_integer(n as i128), Rational::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_parts(Rational::new(num as i128, den as i128), Rational::zero())
    }

    fn imag_unit() -> Self {
        Self::from_parts(Rational::zero(), Rational::one())
    }
}

/// Gaussian rational `re + i·im`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Gaussian {
    pub re: Rational,
    pub im: Rational,
}

impl Gaussian {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Gaussian { re, im: Rational::zero() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let norm = self.re * self.re + self.im * self.im;
        if norm.is_zero() {
            return None;
        }
        Some(Gaussian { re: self.re / norm, im: -self.im / norm })
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| *self * r)
    }
}

impl Add for Gaussian {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Gaussian { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl AddAssign for Gaussian {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for Gaussian {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Gaussian { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Mul for Gaussian {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        // Purely real or purely imaginary factors dominate; skip the zero products.
        if self.im.is_zero() && rhs.im.is_zero() {
            return Gaussian::real(self.re * rhs.re);
        }
        if self.im.is_zero() {
            return Gaussian { re: self.re * rhs.re, im: self.re * rhs.im };
        }
        if rhs.im.is_zero() {
            return Gaussian { re: self.re * rhs.re, im: self.im * rhs.re };
        }
        Gaussian {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Neg for Gaussian {
    type Output = Self;
    fn neg(self) -> Self {
        Gaussian { re: -self.re, im: -self.im }
    }
}

fn ratio_to_f64(r: &Rational) -> f64 {
    // Split to keep precision when numerator and denominator are both large.
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

fn write_ratio(f: &mut fmt::Formatter<'_>, r: &Rational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write_ratio(f, &self.re),
            (true, false) => {
                write_ratio(f, &self.im)?;
                f.write_str("i")
            }
            (false, false) => {
                write_ratio(f, &self.re)?;
                f.write_str(if self.im.is_negative() { " - " } else { " + " })?;
                write_ratio(f, &self.im.abs())?;
                f.write_str("i")
            }
        }
    }
}

impl Scalar for Gaussian {
    const EXACT: bool = true;
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Gaussian { re: Rational::zero(), im: Rational::zero() }
    }
    fn one() -> Self {
        Gaussian { re: Rational::one(), im: Rational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn from_parts(re: Rational, im: Rational) -> Self {
        Gaussian { re, im }
    }
    fn conj(&self) -> Self {
        Gaussian { re: self.re, im: -self.im }
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_parts(re: Rational, im: Rational) -> Self {
        Complex64::new(ratio_to_f64(&re), ratio_to_f64(&im))
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}
