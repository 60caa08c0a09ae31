use num_complex::Complex64;

use super::poly::{ParamPoint, TrigPoly, Var};
use super::scalar::Scalar;

/// Number of state components: `x = (φ, y)`.
pub const DIM: usize = 2;

/// Component index of the phase `φ`.
pub const PHI: usize = 0;
/// Component index of the position `y`.
pub const Y: usize = 1;

/// State variable differentiated for each component index.
pub const VARS: [Var; DIM] = [Var::Phi, Var::Y];

/// A vector field on the state `(φ, y)`, one polynomial per component.
#[derive(Clone, Debug, PartialEq)]
pub struct VecField<S> {
    pub components: [TrigPoly<S>; DIM],
}

/// Jacobian matrix, `rows[i][k] = ∂ f^i / ∂ x^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jacobian<S> {
    pub rows: [[TrigPoly<S>; DIM]; DIM],
}

impl<S: Scalar> Default for VecField<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> VecField<S> {
    pub fn zero() -> Self {
        VecField { components: [TrigPoly::zero(), TrigPoly::zero()] }
    }

    pub fn new(phi: TrigPoly<S>, y: TrigPoly<S>) -> Self {
        VecField { components: [phi, y] }
    }

    pub fn phi(&self) -> &TrigPoly<S> {
        &self.components[PHI]
    }

    pub fn y(&self) -> &TrigPoly<S> {
        &self.components[Y]
    }

    pub fn add(&self, other: &Self) -> Self {
        VecField { components: [0, 1].map(|i| self.components[i].add(&other.components[i])) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        VecField { components: [0, 1].map(|i| self.components[i].sub(&other.components[i])) }
    }

    pub fn scale(&self, c: S) -> Self {
        VecField { components: [0, 1].map(|i| self.components[i].scale(c)) }
    }

    pub fn map<F: Fn(&TrigPoly<S>) -> TrigPoly<S>>(&self, f: F) -> Self {
        VecField { components: [0, 1].map(|i| f(&self.components[i])) }
    }

    pub fn is_empty(&self) -> bool {
        self.components.iter().all(TrigPoly::is_empty)
    }

    /// Exact: every component has an empty term map. Float: probabilistic.
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(TrigPoly::is_zero)
    }

    pub fn conj(&self) -> Self {
        self.map(TrigPoly::conj)
    }

    pub fn jacobian(&self) -> Jacobian<S> {
        Jacobian { rows: [0, 1].map(|i| VARS.map(|v| self.components[i].partial(v))) }
    }

    pub fn eval(&self, phi: f64, y: f64, params: &ParamPoint) -> [Complex64; DIM] {
        [0, 1].map(|i| self.components[i].eval(phi, y, params))
    }

    pub fn substitute(&self, params: &ParamPoint) -> VecField<Complex64> {
        VecField { components: [0, 1].map(|i| self.components[i].substitute(params)) }
    }

    pub fn to_float(&self) -> VecField<Complex64> {
        VecField { components: [0, 1].map(|i| self.components[i].to_float()) }
    }

    pub fn term_count(&self) -> usize {
        self.components.iter().map(TrigPoly::len).sum()
    }
}

impl<S: Scalar> Jacobian<S> {
    /// Identity matrix, the Jacobian of `x ↦ x`.
    pub fn identity() -> Self {
        let one = || TrigPoly::constant(S::one());
        Jacobian { rows: [[one(), TrigPoly::zero()], [TrigPoly::zero(), one()]] }
    }

    /// Matrix-vector product `J · f`.
    pub fn apply(&self, f: &VecField<S>) -> VecField<S> {
        VecField {
            components: [0, 1].map(|i| {
                let mut acc = TrigPoly::zero();
                for k in 0..DIM {
                    if !self.rows[i][k].is_empty() && !f.components[k].is_empty() {
                        acc = acc.add(&self.rows[i][k].mul(&f.components[k]));
                    }
                }
                acc
            }),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().flatten().all(TrigPoly::is_empty)
    }
}
