//! Truncated word-indexed coefficient families and their convolution algebra.

use num_complex::Complex64;
use rustc_hash::FxHashMap;

use super::beta::{float_beta_bar, BetaArith, BetaBar};
use super::exppoly::Alpha;
use crate::algebra::Scalar;
use crate::error::{Error, Result};
use crate::words::{words_up_to, Letter, Word};

/// Coefficients `δ_w` for all words of length `≤ n` over `letters`; words
/// that are absent read as zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffMap<S> {
    letters: Vec<Letter>,
    n: usize,
    values: FxHashMap<Word, S>,
}

impl<S: Scalar> CoeffMap<S> {
    pub fn zero(letters: &[Letter], n: usize) -> Self {
        CoeffMap { letters: letters.to_vec(), n, values: FxHashMap::default() }
    }

    /// The unit `ε`: `ε_∅ = 1`, zero elsewhere.
    pub fn unit(letters: &[Letter], n: usize) -> Self {
        let mut m = Self::zero(letters, n);
        m.set(Word::empty(), S::one());
        m
    }

    pub fn from_fn(letters: &[Letter], n: usize, mut f: impl FnMut(&Word) -> S) -> Self {
        let mut m = Self::zero(letters, n);
        for w in words_up_to(letters, n) {
            let v = f(&w);
            m.set(w, v);
        }
        m
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, w: &Word) -> S {
        self.values.get(w).copied().unwrap_or_else(S::zero)
    }

    pub fn set(&mut self, w: Word, v: S) {
        if v.is_zero() {
            self.values.remove(&w);
        } else {
            self.values.insert(w, v);
        }
    }

    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        words_up_to(&self.letters, self.n)
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.letters, other.letters, "coefficient maps over different alphabets");
        assert_eq!(self.n, other.n, "coefficient maps truncated at different orders");
    }

    /// `(δ ⋆ δ')_w = Σ_{uv = w} δ_u δ'_v`
    pub fn conv(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(&self.letters, self.n);
        for w in self.words() {
            let mut s = S::zero();
            for i in 0..=w.len() {
                let a = self.get(&w.slice(0, i));
                if a.is_zero() {
                    continue;
                }
                s += a * other.get(&w.slice(i, w.len()));
            }
            out.set(w, s);
        }
        out
    }

    /// `exp_⋆(τ δ) = Σ_j τ^j/j! δ^{⋆j}`; `δ_∅` must vanish so the sum is finite.
    pub fn conv_exp(&self, tau: S) -> Result<Self> {
        if !self.get(&Word::empty()).is_zero() {
            return Err(Error::Validation("conv_exp needs a coefficient map with δ_∅ = 0".into()));
        }
        let mut power = Self::unit(&self.letters, self.n);
        let mut out = power.clone();
        let mut factor = S::one();
        for j in 1..=self.n {
            power = power.conv(self);
            factor = factor * tau * S::from_ratio(1, j as i64);
            for w in words_up_to(&self.letters, self.n) {
                let v = out.get(&w) + factor * power.get(&w);
                out.set(w, v);
            }
        }
        Ok(out)
    }

    /// The convolution inverse, defined when `δ_∅ = 1`.
    pub fn conv_inverse(&self) -> Result<Self> {
        if self.get(&Word::empty()) != S::one() {
            return Err(Error::Validation("conv_inverse needs a coefficient map with δ_∅ = 1".into()));
        }
        let mut out = Self::unit(&self.letters, self.n);
        // (δ⁻¹)_w = -Σ_{uv = w, v ≠ ∅} (δ⁻¹)_u δ_v, shortest words first
        for w in self.words().filter(|w| !w.is_empty()) {
            let mut s = S::zero();
            for i in 0..w.len() {
                let a = out.get(&w.slice(0, i));
                if a.is_zero() {
                    continue;
                }
                s += a * self.get(&w.slice(i, w.len()));
            }
            out.set(w, -s);
        }
        Ok(out)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(S) -> T) -> CoeffMap<T> {
        let mut out = CoeffMap::zero(&self.letters, self.n);
        for (w, v) in &self.values {
            out.set(w.clone(), f(*v));
        }
        out
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        self.check_compatible(other);
        self.words().map(|w| (self.get(&w) - other.get(&w)).to_complex().norm()).fold(0.0, f64::max)
    }
}

/// `β̄` over the whole truncated alphabet.
pub fn beta_map<A>(beta: &mut BetaBar<A>, letters: &[Letter], n: usize) -> CoeffMap<Complex64>
where
    A: BetaArith<Value = Complex64>,
{
    CoeffMap::from_fn(letters, n, |w| beta.get(w))
}

/// `α(t; t0)` over the whole truncated alphabet.
pub fn alpha_map(omega: f64, t: f64, t0: f64, letters: &[Letter], n: usize) -> CoeffMap<Complex64> {
    let mut alpha = Alpha::new(omega, t0);
    CoeffMap::from_fn(letters, n, |w| alpha.eval(w, t))
}

/// Change-of-variables coefficients `κ(t; t0) = exp_⋆(-(t - t0) β̄(t0)) ⋆ α(t; t0)`.
pub fn kappa(t: f64, t0: f64, omega: f64, n: usize, letters: &[Letter]) -> CoeffMap<Complex64> {
    let beta = beta_map(&mut float_beta_bar(omega, t0), letters, n);
    let sigma_inv = beta.conv_exp(Complex64::new(t0 - t, 0.0)).expect("β̄_∅ = 0");
    sigma_inv.conv(&alpha_map(omega, t, t0, letters, n))
}

/// Convolution powers `(β̄^{⋆j})_u` for every word `u`, so that any
/// `exp_⋆(τ β̄)_u` is a polynomial in `τ` evaluated on the fly.
#[derive(Clone, Debug)]
pub struct BetaPowers {
    powers: FxHashMap<Word, Vec<Complex64>>,
}

impl BetaPowers {
    pub fn new<A>(beta: &mut BetaBar<A>, letters: &[Letter], n: usize) -> Self
    where
        A: BetaArith<Value = Complex64>,
    {
        let mut powers: FxHashMap<Word, Vec<Complex64>> = FxHashMap::default();
        for u in words_up_to(letters, n).filter(|u| !u.is_empty()) {
            // powers[u][j-1] = (β̄^{⋆j})_u for j = 1..=|u|
            let mut row = vec![Complex64::new(0.0, 0.0); u.len()];
            row[0] = beta.get(&u);
            for i in 1..u.len() {
                let tail = beta.get(&u.slice(i, u.len()));
                if tail == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let Some(head) = powers.get(&u.slice(0, i)) else {
                    continue;
                };
                for (j, h) in head.iter().enumerate() {
                    row[j + 1] += h * tail;
                }
            }
            while row.last() == Some(&Complex64::new(0.0, 0.0)) {
                row.pop();
            }
            if !row.is_empty() {
                powers.insert(u, row);
            }
        }
        BetaPowers { powers }
    }

    /// `exp_⋆(τ β̄)_u`
    pub fn exp(&self, u: &Word, tau: f64) -> Complex64 {
        if u.is_empty() {
            return Complex64::new(1.0, 0.0);
        }
        let Some(row) = self.powers.get(u) else {
            return Complex64::new(0.0, 0.0);
        };
        let mut factor = 1.0;
        let mut s = Complex64::new(0.0, 0.0);
        for (j, c) in row.iter().enumerate() {
            factor *= tau / (j + 1) as f64;
            s += c * factor;
        }
        s
    }

    /// `(β̄^{⋆j})_u` for `j = 1, 2, …`, trailing zeros dropped; `None` when all vanish.
    pub fn row(&self, u: &Word) -> Option<&[Complex64]> {
        self.powers.get(u).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }
}
