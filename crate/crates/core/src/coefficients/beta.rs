//! Averaged-field coefficients `β̄_w(t0)` by their explicit recursions.

use num_complex::Complex64;
use rustc_hash::FxHashMap;

use crate::algebra::{Gaussian, Rational, Scalar};
use crate::words::{Letter, Word};

/// Arithmetic backing the `β̄` recursion.
///
/// The recursion only subtracts, multiplies by `e^{ikωt0}` and by `i/(kω)`,
/// so one implementation serves floats, exact values at a rational `ω`, and
/// exact values with `ω` kept symbolic.
pub trait BetaArith {
    type Value: Clone;

    fn zero(&self) -> Self::Value;
    fn one(&self) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    /// `e^{ikωt0} · v`
    fn rotate(&self, k: Letter, v: &Self::Value) -> Self::Value;
    /// `i/(kω) · v`
    fn step(&self, k: Letter, v: &Self::Value) -> Self::Value;
}

/// Complex doubles, arbitrary `t0`.
#[derive(Clone, Copy, Debug)]
pub struct FloatBeta {
    pub omega: f64,
    pub t0: f64,
}

impl BetaArith for FloatBeta {
    type Value = Complex64;

    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn one(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn sub(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a - b
    }
    fn rotate(&self, k: Letter, v: &Complex64) -> Complex64 {
        if self.t0 == 0.0 {
            *v
        } else {
            v * Complex64::from_polar(1.0, k as f64 * self.omega * self.t0)
        }
    }
    fn step(&self, k: Letter, v: &Complex64) -> Complex64 {
        Complex64::new(0.0, 1.0 / (k as f64 * self.omega)) * v
    }
}

/// Gaussian rationals at a rational `ω`, `t0 = 0`.
#[derive(Clone, Copy, Debug)]
pub struct RationalBeta {
    pub omega: Rational,
}

impl BetaArith for RationalBeta {
    type Value = Gaussian;

    fn zero(&self) -> Gaussian {
        Gaussian::zero()
    }
    fn one(&self) -> Gaussian {
        Gaussian::one()
    }
    fn sub(&self, a: &Gaussian, b: &Gaussian) -> Gaussian {
        *a - *b
    }
    fn rotate(&self, _: Letter, v: &Gaussian) -> Gaussian {
        *v
    }
    fn step(&self, k: Letter, v: &Gaussian) -> Gaussian {
        let den = self.omega * Rational::from_integer(k as i128);
        Gaussian::new(Rational::from_integer(0), den.recip()) * *v
    }
}

/// `coeff · ω^{-power}` with `ω` symbolic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OmegaTerm {
    pub coeff: Gaussian,
    pub power: u32,
}

impl OmegaTerm {
    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Substitutes a numeric `ω`.
    pub fn at(&self, omega: f64) -> Complex64 {
        self.coeff.to_complex() * omega.powi(-(self.power as i32))
    }
}

/// Gaussian rationals with symbolic `ω`, `t0 = 0`. At `t0 = 0` every `n`-letter
/// coefficient is a Gaussian rational times `ω^{1-n}`, so values stay
/// homogeneous in `ω`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SymbolicBeta;

impl BetaArith for SymbolicBeta {
    type Value = OmegaTerm;

    fn zero(&self) -> OmegaTerm {
        OmegaTerm { coeff: Gaussian::zero(), power: 0 }
    }
    fn one(&self) -> OmegaTerm {
        OmegaTerm { coeff: Gaussian::one(), power: 0 }
    }
    fn sub(&self, a: &OmegaTerm, b: &OmegaTerm) -> OmegaTerm {
        if b.is_zero() {
            return *a;
        }
        if a.is_zero() {
            return OmegaTerm { coeff: -b.coeff, power: b.power };
        }
        assert_eq!(a.power, b.power, "β̄ recursion lost ω-homogeneity");
        let coeff = a.coeff - b.coeff;
        OmegaTerm { coeff, power: if coeff.is_zero() { 0 } else { a.power } }
    }
    fn rotate(&self, _: Letter, v: &OmegaTerm) -> OmegaTerm {
        *v
    }
    fn step(&self, k: Letter, v: &OmegaTerm) -> OmegaTerm {
        if v.is_zero() {
            return *v;
        }
        let factor = Gaussian::new(Rational::from_integer(0), Rational::new(1, k as i128));
        OmegaTerm { coeff: factor * v.coeff, power: v.power + 1 }
    }
}

/// Memoised `β̄_w(t0)`; words may contain any integer letters.
#[derive(Clone, Debug)]
pub struct BetaBar<A: BetaArith> {
    arith: A,
    memo: FxHashMap<Word, A::Value>,
}

impl<A: BetaArith> BetaBar<A> {
    pub fn new(arith: A) -> Self {
        BetaBar { arith, memo: FxHashMap::default() }
    }

    pub fn arith(&self) -> &A {
        &self.arith
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn get(&mut self, w: &Word) -> A::Value {
        if let Some(v) = self.memo.get(w) {
            return v.clone();
        }
        let v = self.compute(w.letters());
        self.memo.insert(w.clone(), v.clone());
        v
    }

    fn get_letters(&mut self, letters: &[Letter]) -> A::Value {
        self.get(&Word::from_letters(letters))
    }

    fn compute(&mut self, letters: &[Letter]) -> A::Value {
        // β̄_∅ = 0: the averaged right-hand side is a vector field.
        if letters.is_empty() {
            return self.arith.zero();
        }
        let r = letters.iter().take_while(|&&k| k == 0).count();
        if r == letters.len() {
            // β̄_0 = 1, β̄_{0^{r+1}} = 0
            return if r == 1 { self.arith.one() } else { self.arith.zero() };
        }
        let k = letters[r];
        let rest = &letters[r + 1..];
        let merged = |zeros: usize| -> Vec<Letter> {
            let mut v = vec![0; zeros];
            v.push(k + rest[0]);
            v.extend_from_slice(&rest[1..]);
            v
        };
        let (a, b) = match (r, rest.is_empty()) {
            // β̄_k = 0
            (0, true) => return self.arith.zero(),
            // β̄_{0^r k} = i/(kω) (β̄_{0^{r-1} k} - β̄_{0^r} e^{ikωt0})
            (_, true) => {
                let mut shorter = vec![0; r - 1];
                shorter.push(k);
                let a = self.get_letters(&shorter);
                let b = self.get(&Word::zeros(r));
                (a, self.arith.rotate(k, &b))
            }
            // β̄_{k ℓ1…ℓs} = i/(kω) (e^{ikωt0} β̄_{ℓ1…ℓs} - β̄_{(k+ℓ1) ℓ2…ℓs})
            (0, false) => {
                let a = self.get_letters(rest);
                let b = self.get_letters(&merged(0));
                (self.arith.rotate(k, &a), b)
            }
            // β̄_{0^r k ℓ1…ℓs} = i/(kω) (β̄_{0^{r-1} k ℓ1…ℓs} - β̄_{0^r (k+ℓ1) ℓ2…ℓs})
            (_, false) => {
                let a = self.get_letters(&letters[1..]);
                let b = self.get_letters(&merged(r));
                (a, b)
            }
        };
        let diff = self.arith.sub(&a, &b);
        self.arith.step(k, &diff)
    }
}

pub type FloatBetaBar = BetaBar<FloatBeta>;

pub fn float_beta_bar(omega: f64, t0: f64) -> BetaBar<FloatBeta> {
    BetaBar::new(FloatBeta { omega, t0 })
}

pub fn symbolic_beta_bar() -> BetaBar<SymbolicBeta> {
    BetaBar::new(SymbolicBeta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{shuffle, words_up_to};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn neg_i_over(n: i128) -> Gaussian {
        Gaussian::new(Rational::from_integer(0), Rational::new(-1, n))
    }

    #[test]
    fn base_values() {
        let mut b = symbolic_beta_bar();
        assert_eq!(b.get(&w("0")), OmegaTerm { coeff: Gaussian::one(), power: 0 });
        assert!(b.get(&w("2")).is_zero());
        assert!(b.get(&w("0.0")).is_zero());
        assert!(b.get(&Word::empty()).is_zero());
        assert_eq!(b.get(&w("1.-1")), OmegaTerm { coeff: neg_i_over(1), power: 1 });
        assert_eq!(b.get(&w("0.1")), OmegaTerm { coeff: neg_i_over(1), power: 1 });
        assert_eq!(b.get(&w("0.2")), OmegaTerm { coeff: neg_i_over(2), power: 1 });
    }

    #[test]
    fn one_step_by_hand_float() {
        let mut b = float_beta_bar(5.0, 0.0);
        assert!((b.get(&w("1.-1")) - Complex64::new(0.0, -0.2)).norm() < 1e-16);
        assert!((b.get(&w("0.1")) - Complex64::new(0.0, -0.2)).norm() < 1e-16);
    }

    #[test]
    fn infinitesimal_character_exact() {
        let letters: Vec<Letter> = (-3..=3).collect();
        let mut b = symbolic_beta_bar();
        let words: Vec<Word> = words_up_to(&letters, 3).filter(|w| !w.is_empty()).collect();
        for u in &words {
            for v in &words {
                if u.len() + v.len() > 4 {
                    continue;
                }
                let mut sum = Gaussian::zero();
                let mut power = None;
                for s in shuffle(u, v) {
                    let t = b.get(&s);
                    if !t.is_zero() {
                        assert!(power.is_none() || power == Some(t.power));
                        power = Some(t.power);
                        sum += t.coeff;
                    }
                }
                assert!(sum.is_zero(), "shuffle sum of {u} and {v} is {sum}");
            }
        }
    }

    #[test]
    fn infinitesimal_character_shifted_origin() {
        let letters: Vec<Letter> = (-3..=3).collect();
        let mut b = float_beta_bar(5.0, 0.37);
        let words: Vec<Word> = words_up_to(&letters, 2).filter(|w| !w.is_empty()).collect();
        for u in &words {
            for v in &words {
                let sum: Complex64 = shuffle(u, v).iter().map(|s| b.get(s)).sum();
                assert!(sum.norm() < 1e-12, "{u} ⧢ {v}: {sum}");
            }
        }
    }

    #[test]
    fn exact_scaling_in_omega() {
        let letters: Vec<Letter> = (-3..=3).collect();
        let mut at5 = BetaBar::new(RationalBeta { omega: Rational::from_integer(5) });
        let mut at10 = BetaBar::new(RationalBeta { omega: Rational::from_integer(10) });
        for word in words_up_to(&letters, 4).filter(|w| !w.is_empty()) {
            let (x, y) = (at5.get(&word), at10.get(&word));
            let factor = Gaussian::real(Rational::new(1, 2).pow(word.len() as i32 - 1));
            assert_eq!(y, x * factor, "word {word}");
        }
    }

    #[test]
    fn float_matches_exact() {
        let letters: Vec<Letter> = (-3..=3).collect();
        let mut exact = symbolic_beta_bar();
        let mut float = float_beta_bar(5.0, 0.0);
        for word in words_up_to(&letters, 4) {
            let e = exact.get(&word).at(5.0);
            assert!((e - float.get(&word)).norm() < 1e-14);
        }
    }

    #[test]
    fn conjugation() {
        let letters: Vec<Letter> = (-3..=3).collect();
        let mut b = float_beta_bar(5.0, 0.0);
        for word in words_up_to(&letters, 4) {
            assert!((b.get(&word.negated()) - b.get(&word).conj()).norm() < 1e-12);
        }
    }
}
