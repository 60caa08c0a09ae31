//! Finite sums `Σ c t^r e^{imωt}`, the closed form of iterated integrals of
//! Fourier modes.

use num_complex::Complex64;

use crate::words::{Letter, Word};

/// `(r, m) ↦ c` for `c t^r e^{imωt}`, sorted by `(r, m)`, no zero entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpPoly {
    omega: f64,
    terms: Vec<((u32, i32), Complex64)>,
}

impl ExpPoly {
    pub fn zero(omega: f64) -> Self {
        ExpPoly { omega, terms: Vec::new() }
    }

    pub fn one(omega: f64) -> Self {
        Self::term(omega, 0, 0, Complex64::new(1.0, 0.0))
    }

    pub fn term(omega: f64, r: u32, m: i32, c: Complex64) -> Self {
        Self::from_terms(omega, vec![((r, m), c)])
    }

    pub fn from_terms(omega: f64, mut terms: Vec<((u32, i32), Complex64)>) -> Self {
        terms.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<((u32, i32), Complex64)> = Vec::with_capacity(terms.len());
        for (key, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == key => last.1 += c,
                _ => out.push((key, c)),
            }
        }
        out.retain(|t| t.1 != Complex64::new(0.0, 0.0));
        ExpPoly { omega, terms: out }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn terms(&self) -> &[((u32, i32), Complex64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0 .0).max().unwrap_or(0)
    }

    pub fn max_frequency(&self) -> i32 {
        self.terms.iter().map(|t| t.0 .1.abs()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &ExpPoly) -> ExpPoly {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::from_terms(self.omega, terms)
    }

    pub fn scale(&self, c: Complex64) -> ExpPoly {
        Self::from_terms(self.omega, self.terms.iter().map(|&(k, v)| (k, v * c)).collect())
    }

    pub fn mul(&self, other: &ExpPoly) -> ExpPoly {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &((r1, m1), c1) in &self.terms {
            for &((r2, m2), c2) in &other.terms {
                terms.push(((r1 + r2, m1 + m2), c1 * c2));
            }
        }
        Self::from_terms(self.omega, terms)
    }

    /// Multiplies by `e^{ikωt}`.
    pub fn shift(&self, k: Letter) -> ExpPoly {
        ExpPoly {
            omega: self.omega,
            terms: self.terms.iter().map(|&((r, m), c)| ((r, m + k), c)).collect(),
        }
    }

    /// The antiderivative vanishing at `t0`.
    pub fn integrate_from(&self, t0: f64) -> ExpPoly {
        let mut terms = Vec::with_capacity(self.terms.len() * 2 + 1);
        for &((r, m), c) in &self.terms {
            if m == 0 {
                terms.push(((r + 1, 0), c / (r + 1) as f64));
                continue;
            }
            // ∫ t^r e^{iat} = e^{iat} Σ_j (-1)^j r!/(r-j)! t^{r-j} / (ia)^{j+1}
            let ia = Complex64::new(0.0, m as f64 * self.omega);
            let mut factor = c / ia;
            for j in 0..=r {
                terms.push(((r - j, m), factor));
                factor = -factor * (r - j) as f64 / ia;
            }
        }
        let primitive = Self::from_terms(self.omega, terms);
        let at_origin = primitive.eval(t0);
        let mut terms = primitive.terms;
        terms.push(((0, 0), -at_origin));
        Self::from_terms(self.omega, terms)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|&((r, m), c)| {
                c * t.powi(r as i32) * Complex64::from_polar(1.0, m as f64 * self.omega * t)
            })
            .sum()
    }
}

/// Precomputed powers for evaluating many `ExpPoly`s on one time grid.
#[derive(Clone, Debug)]
pub struct ExpGrid {
    times: Vec<f64>,
    omega: f64,
    powers: Vec<Vec<f64>>,
    max_m: i32,
    phases: Vec<Vec<Complex64>>,
}

impl ExpGrid {
    pub fn new(times: Vec<f64>, omega: f64, max_degree: u32, max_frequency: i32) -> Self {
        let powers = (0..=max_degree)
            .map(|r| times.iter().map(|t| t.powi(r as i32)).collect())
            .collect();
        let phases = (-max_frequency..=max_frequency)
            .map(|m| times.iter().map(|t| Complex64::from_polar(1.0, m as f64 * omega * t)).collect())
            .collect();
        ExpGrid { times, omega, powers, max_m: max_frequency, phases }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn eval_into(&self, p: &ExpPoly, out: &mut [Complex64]) {
        debug_assert_eq!(p.omega, self.omega);
        out.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for &((r, m), c) in &p.terms {
            if r as usize >= self.powers.len() || m.abs() > self.max_m {
                for (v, &t) in out.iter_mut().zip(&self.times) {
                    *v += c * t.powi(r as i32) * Complex64::from_polar(1.0, m as f64 * self.omega * t);
                }
                continue;
            }
            let pw = &self.powers[r as usize];
            let ph = &self.phases[(m + self.max_m) as usize];
            for ((v, x), e) in out.iter_mut().zip(pw).zip(ph) {
                *v += c * *x * *e;
            }
        }
    }

    pub fn eval(&self, p: &ExpPoly) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.times.len()];
        self.eval_into(p, &mut out);
        out
    }
}

/// `α_{k·v}(t, 0)` from `α_v(t, 0)`, using
/// `α_{k·v}(t) = e^{iKωt} ∫_0^t e^{-iKωr} α_v(r) dr` with `K = k + Σv`.
pub fn left_extend(alpha_v: &ExpPoly, k: Letter, sum_v: Letter) -> ExpPoly {
    let big_k = k + sum_v;
    alpha_v.shift(-big_k).integrate_from(0.0).shift(big_k)
}

/// Memoised iterated integrals `α_w(t, t0)` built by right extension,
/// `α_{w·k}(t) = ∫_{t0}^t e^{ikωs} α_w(s) ds`.
#[derive(Clone, Debug)]
pub struct Alpha {
    omega: f64,
    t0: f64,
    memo: rustc_hash::FxHashMap<Word, ExpPoly>,
}

impl Alpha {
    pub fn new(omega: f64, t0: f64) -> Self {
        Alpha { omega, t0, memo: Default::default() }
    }

    pub fn get(&mut self, w: &Word) -> ExpPoly {
        if let Some(p) = self.memo.get(w) {
            return p.clone();
        }
        let p = match w.letters().split_last() {
            None => ExpPoly::one(self.omega),
            Some((&k, init)) => self.get(&Word::from_letters(init)).shift(k).integrate_from(self.t0),
        };
        self.memo.insert(w.clone(), p.clone());
        p
    }

    pub fn eval(&mut self, w: &Word, t: f64) -> Complex64 {
        self.get(w).eval(t)
    }
}
