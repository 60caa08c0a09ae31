use num_complex::Complex64;
use smallvec::SmallVec;

use crate::algebra::{VecField, DIM};

/// A state-only complex field `Σ c u^m y^j` laid out for repeated evaluation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CompiledField {
    comps: [Vec<(i32, u32, Complex64)>; DIM],
    max_m: i32,
    max_j: u32,
}

impl CompiledField {
    /// Panics if a parameter indeterminate is left in `f`.
    pub fn new(f: &VecField<Complex64>) -> Self {
        let comps = f.components.each_ref().map(|c| {
            c.terms()
                .iter()
                .map(|&(mono, coeff)| {
                    assert!(mono.is_state_only(), "field still depends on parameters: {mono}");
                    (mono.m as i32, mono.j as u32, coeff)
                })
                .collect::<Vec<_>>()
        });
        Self::from_terms(comps)
    }

    pub fn from_terms(comps: [Vec<(i32, u32, Complex64)>; DIM]) -> Self {
        let max_m = comps.iter().flatten().map(|t| t.0.abs()).max().unwrap_or(0);
        let max_j = comps.iter().flatten().map(|t| t.1).max().unwrap_or(0);
        CompiledField { comps, max_m, max_j }
    }

    pub fn terms(&self, comp: usize) -> &[(i32, u32, Complex64)] {
        &self.comps[comp]
    }

    pub fn term_count(&self) -> usize {
        self.comps.iter().map(Vec::len).sum()
    }

    pub fn eval(&self, phi: f64, y: f64) -> [Complex64; DIM] {
        let u = Complex64::from_polar(1.0, phi);
        let mut upow: SmallVec<[Complex64; 32]> = SmallVec::new();
        upow.resize(2 * self.max_m as usize + 1, Complex64::new(1.0, 0.0));
        let mid = self.max_m as usize;
        for k in 1..=mid {
            upow[mid + k] = upow[mid + k - 1] * u;
            upow[mid - k] = upow[mid - k + 1] * u.conj();
        }
        let mut ypow: SmallVec<[f64; 32]> = SmallVec::new();
        ypow.push(1.0);
        for j in 1..=self.max_j as usize {
            ypow.push(ypow[j - 1] * y);
        }
        self.comps.each_ref().map(|c| {
            c.iter()
                .map(|&(m, j, coeff)| coeff * upow[(m + self.max_m) as usize] * ypow[j as usize])
                .sum()
        })
    }

    /// Real part and the largest imaginary residue.
    pub fn eval_real(&self, phi: f64, y: f64) -> ([f64; DIM], f64) {
        let v = self.eval(phi, y);
        (v.map(|z| z.re), v.iter().map(|z| z.im.abs()).fold(0.0, f64::max))
    }
}
