use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::compiled::CompiledField;
use crate::algebra::{VecField, DIM};
use crate::basis::{walk, Visitor, Walk};
use crate::coefficients::{float_beta_bar, left_extend, BetaPowers, ExpGrid, ExpPoly};
use crate::error::{Error, Result};
use crate::model::FourierModel;
use crate::words::{Word, N_MAX};

/// Imaginary residue above which a word-series value is rejected.
pub const RESIDUE_LIMIT: f64 = 1e-6;

/// `x = W_{κ(t; t0)}(X)` tabulated at `P` equispaced phases of one period,
/// `t_p = t0 + 2πp/(Pω)`.
#[derive(Clone, Debug)]
pub struct ChangeOfVariables {
    pub order: usize,
    pub omega: f64,
    pub t0: f64,
    /// `Σ_{1≤|w|≤n} κ_w(t_p) f_w` per phase; `f_∅` is added at evaluation.
    tables: Vec<CompiledField>,
}

impl ChangeOfVariables {
    pub fn identity(omega: f64, t0: f64, phases: usize) -> Self {
        ChangeOfVariables { order: 0, omega, t0, tables: vec![CompiledField::default(); phases] }
    }

    pub fn phases(&self) -> usize {
        self.tables.len()
    }

    /// Spacing of the tabulated phases in time.
    pub fn step(&self) -> f64 {
        2.0 * PI / (self.phases() as f64 * self.omega)
    }

    pub fn phase_time(&self, p: usize) -> f64 {
        self.t0 + p as f64 * self.step()
    }

    pub fn table(&self, p: usize) -> &CompiledField {
        &self.tables[p]
    }

    /// Index of the tabulated phase of time `t`; times off the table are rejected.
    pub fn phase_of(&self, t: f64) -> Result<usize> {
        let x = (t - self.t0) / self.step();
        let j = x.round();
        if (x - j).abs() > 1e-6 {
            return Err(Error::PhaseMisalignment(format!(
                "t = {t} is not on the phase grid t0 + j·{} (t0 = {})",
                self.step(),
                self.t0
            )));
        }
        Ok((j as i64).rem_euclid(self.phases() as i64) as usize)
    }

    /// `G_p(X)` and its imaginary residue.
    pub fn eval(&self, p: usize, phi: f64, y: f64) -> ([f64; DIM], f64) {
        let (v, residue) = self.tables[p].eval_real(phi, y);
        ([phi + v[0], y + v[1]], residue)
    }
}

struct Node {
    alpha: ExpPoly,
    vals: Vec<Complex64>,
}

struct KappaAccumulator<'a> {
    n: usize,
    t0: f64,
    omega: f64,
    grid: &'a ExpGrid,
    powers: &'a BetaPowers,
    /// `(-τ_p)^j / j!` for `j = 1..=n`
    tau_powers: Vec<Vec<f64>>,
    index: FxHashMap<(usize, i8, u8), usize>,
    coeffs: Vec<Complex64>,
    kappa: Vec<Complex64>,
}

impl<'a> KappaAccumulator<'a> {
    fn new(n: usize, t0: f64, omega: f64, grid: &'a ExpGrid, powers: &'a BetaPowers) -> Self {
        let tau_powers = grid
            .times()
            .iter()
            .map(|&tau| {
                let mut row = Vec::with_capacity(n);
                let mut f = 1.0;
                for j in 1..=n {
                    f *= -tau / j as f64;
                    row.push(f);
                }
                row
            })
            .collect();
        KappaAccumulator {
            n,
            t0,
            omega,
            grid,
            powers,
            tau_powers,
            index: FxHashMap::default(),
            coeffs: Vec::new(),
            kappa: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// `kappa[p] += exp_⋆(-τ_p β̄)_u · factor[p]` (`factor ≡ 1` when `None`).
    fn add_sigma_inv(&mut self, u: &Word, factor: Option<&[Complex64]>) {
        let Some(row) = self.powers.row(u) else { return };
        for (p, k) in self.kappa.iter_mut().enumerate() {
            let tp = &self.tau_powers[p];
            let s: Complex64 = row.iter().zip(tp).map(|(c, x)| c * x).sum();
            *k += match factor {
                Some(f) => s * f[p],
                None => s,
            };
        }
    }
}

impl Visitor<Complex64> for KappaAccumulator<'_> {
    type State = Node;

    fn visit(&mut self, word: &Word, field: &VecField<Complex64>, path: &[Node]) -> Option<Node> {
        let n = word.len();
        let k = word.letters()[0];
        let one;
        let parent = match path.last() {
            Some(node) => &node.alpha,
            None => {
                one = ExpPoly::one(self.omega);
                &one
            }
        };
        let alpha = left_extend(parent, k, word.letter_sum() - k);
        let mut vals = self.grid.eval(&alpha);
        if self.t0 != 0.0 {
            // α_w(t; t0) = e^{iΣw ω t0} α_w(t - t0; 0)
            let rot = Complex64::from_polar(1.0, word.letter_sum() as f64 * self.omega * self.t0);
            vals.iter_mut().for_each(|v| *v *= rot);
        }
        // κ_w = Σ_{uv = w} exp_⋆(-τβ̄)_u α_v
        self.kappa.copy_from_slice(&vals);
        self.add_sigma_inv(word, None);
        for i in 1..n {
            let suffix = &path[n - i - 1].vals;
            self.add_sigma_inv(&word.slice(0, i), Some(suffix));
        }
        let phases = self.kappa.len();
        for (comp, poly) in field.components.iter().enumerate() {
            for &(mono, c) in poly.terms() {
                let next = self.index.len();
                let idx = *self.index.entry((comp, mono.m, mono.j)).or_insert(next);
                if idx == next {
                    self.coeffs.resize((idx + 1) * phases, Complex64::new(0.0, 0.0));
                }
                let dst = &mut self.coeffs[idx * phases..(idx + 1) * phases];
                for (d, k) in dst.iter_mut().zip(&self.kappa) {
                    *d += k * c;
                }
            }
        }
        (n < self.n).then_some(Node { alpha, vals })
    }
}

/// Tabulates the change of variables at `phases` equispaced phases.
pub fn build_change(model: &FourierModel<Complex64>, n: usize, t0: f64, phases: usize) -> Result<ChangeOfVariables> {
    if n > N_MAX {
        return Err(Error::Validation(format!("change-of-variables order {n} exceeds {N_MAX}")));
    }
    if phases == 0 {
        return Err(Error::Validation("phase table needs at least one phase".into()));
    }
    let omega = model.params.omega;
    let mut cov = ChangeOfVariables::identity(omega, t0, phases);
    if n == 0 {
        return Ok(cov);
    }
    cov.order = n;
    let walker = Walk::new(model, n);
    let letters = walker.letters();
    let powers = BetaPowers::new(&mut float_beta_bar(omega, t0), &letters, n);
    let taus: Vec<f64> = (0..phases).map(|p| p as f64 * cov.step()).collect();
    let max_m = letters.iter().map(|k| k.abs()).max().unwrap_or(0) * n as i32;
    let grid = ExpGrid::new(taus, omega, n as u32, max_m);

    let parts: Vec<(FxHashMap<(usize, i8, u8), usize>, Vec<Complex64>)> = (0..letters.len())
        .into_par_iter()
        .map(|root| {
            let mut acc = KappaAccumulator::new(n, t0, omega, &grid, &powers);
            walker.run_root(root, &mut acc);
            (acc.index, acc.coeffs)
        })
        .collect();

    let mut merged: FxHashMap<(usize, i8, u8), Vec<Complex64>> = FxHashMap::default();
    for (index, coeffs) in parts {
        for (key, idx) in index {
            let src = &coeffs[idx * phases..(idx + 1) * phases];
            let dst = merged.entry(key).or_insert_with(|| vec![Complex64::new(0.0, 0.0); phases]);
            dst.iter_mut().zip(src).for_each(|(d, s)| *d += s);
        }
    }
    let mut keys: Vec<_> = merged.keys().copied().collect();
    keys.sort_unstable();
    cov.tables = (0..phases)
        .map(|p| {
            let mut comps: [Vec<(i32, u32, Complex64)>; DIM] = Default::default();
            for key in &keys {
                let c = merged[key][p];
                if c != Complex64::new(0.0, 0.0) {
                    comps[key.0].push((key.1 as i32, key.2 as u32, c));
                }
            }
            CompiledField::from_terms(comps)
        })
        .collect();
    Ok(cov)
}

/// `W_δ(x) = δ_∅ x + Σ_{1≤|w|≤n} δ_w f_w(x)` at a real point, with the
/// largest imaginary residue.
pub fn word_series_eval(
    mut weights: impl FnMut(&Word) -> Complex64,
    model: &FourierModel<Complex64>,
    n: usize,
    point: [f64; DIM],
) -> Result<([f64; DIM], f64)> {
    let params = model.params.point();
    let head = weights(&Word::empty());
    let mut acc = point.map(|x| head * x);
    walk(model, n, |w, f| {
        let c = weights(w);
        if c != Complex64::new(0.0, 0.0) {
            let v = f.eval(point[0], point[1], &params);
            for (a, x) in acc.iter_mut().zip(v) {
                *a += c * x;
            }
        }
    });
    let residue = acc.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if residue > RESIDUE_LIMIT {
        return Err(Error::ImaginaryResidue { residue, limit: RESIDUE_LIMIT });
    }
    Ok((acc.map(|z| z.re), residue))
}
