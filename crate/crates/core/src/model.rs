//! The overdamped double-well oscillator with slow forcing and fast
//! vibration, its vibration-removing frame, and its Fourier splitting.
//!
//! Original problem: `dz/dt = z - z³ + A cos νt + Bω cos ωt`.
//! With `z = y + B sin ωt` the `O(ω)` forcing disappears and, with the phase
//! `φ = νt` as an extra state, the system takes the form
//! `dx/dt = Σ_k e^{ikωt} f_k(x)` with `f_k = 0` for `|k| > 3`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::algebra::{Gaussian, Monomial, ParamPoint, Rational, Scalar, TrigPoly, VecField};
use crate::error::{Error, Result};
use crate::words::Letter;

/// Physical parameters of the vibrational-resonance model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Slow forcing amplitude.
    pub a: f64,
    /// Size of the fast vibration (vibration amplitude is `Bω`).
    pub b: f64,
    /// Slow angular frequency.
    pub nu: f64,
    /// Fast angular frequency.
    pub omega: f64,
    /// Initial position.
    pub z0: f64,
}

impl Default for ModelParams {
    /// `A = 0.2`, `B = 0.52`, `ν = 0.1`, `ω = 5`, `z0 = -1`.
    fn default() -> Self {
        ModelParams { a: 0.2, b: 0.52, nu: 0.1, omega: 5.0, z0: -1.0 }
    }
}

impl ModelParams {
    /// Parameters with the vibration given as `C cos ωt`, i.e. `B = C/ω`.
    pub fn with_vibration_amplitude(a: f64, c: f64, nu: f64, omega: f64, z0: f64) -> Self {
        ModelParams { a, b: c / omega, nu, omega, z0 }
    }

    pub fn with_b(self, b: f64) -> Self {
        ModelParams { b, ..self }
    }

    pub fn with_omega(self, omega: f64) -> Self {
        ModelParams { omega, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.a, self.b, self.nu, self.omega, self.z0];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::Validation("model parameters must be finite".into()));
        }
        if self.omega <= 0.0 {
            return Err(Error::Validation(format!("omega must be positive, got {}", self.omega)));
        }
        if self.nu <= 0.0 || self.nu >= self.omega {
            return Err(Error::Validation(format!("need 0 < nu < omega, got nu = {}, omega = {}", self.nu, self.omega)));
        }
        Ok(())
    }

    /// Non-fatal observations about the parameter regime.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.nu / self.omega > 0.1 {
            out.push(format!("nu/omega = {:.3} > 0.1: scale separation is weak", self.nu / self.omega));
        }
        out
    }

    pub fn point(&self) -> ParamPoint {
        ParamPoint { a: self.a, b: self.b, nu: self.nu, omega: self.omega }
    }

    /// Fast period `2π/ω`.
    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega
    }
}

/// `dz/dt` of the original oscillatory problem.
pub fn vr1_rhs(z: f64, t: f64, p: &ModelParams) -> f64 {
    z - z * z * z + p.a * (p.nu * t).cos() + p.b * p.omega * (p.omega * t).cos()
}

/// `dy/dt` in the vibration-removed frame `z = y + B sin ωt`.
pub fn vr2_rhs(y: f64, t: f64, p: &ModelParams) -> f64 {
    let (b, w) = (p.b, p.omega);
    y - 1.5 * b * b * y - y * y * y
        + p.a * (p.nu * t).cos()
        + b * (1.0 - 0.75 * b * b - 3.0 * y * y) * (w * t).sin()
        + 1.5 * b * b * y * (2.0 * w * t).cos()
        + 0.25 * b * b * b * (3.0 * w * t).sin()
}

/// `z = y + B sin ωt`
pub fn frame_to_z(y: f64, t: f64, p: &ModelParams) -> f64 {
    y + p.b * (p.omega * t).sin()
}

/// `y = z - B sin ωt`
pub fn frame_to_y(z: f64, t: f64, p: &ModelParams) -> f64 {
    z - p.b * (p.omega * t).sin()
}

/// Fourier coefficients `f_k` of the system in the `(φ, y)` state.
#[derive(Clone, Debug)]
pub struct FourierModel<S> {
    fields: BTreeMap<Letter, VecField<S>>,
    pub params: ModelParams,
}

fn g(re: (i128, i128), im: (i128, i128)) -> Gaussian {
    Gaussian::new(Rational::new(re.0, re.1), Rational::new(im.0, im.1))
}

/// `(exponents m, j, a, b, e)` and a coefficient.
fn poly(terms: &[((i8, u8, u8, u8, u8), Gaussian)]) -> TrigPoly<Gaussian> {
    TrigPoly::from_terms(terms.iter().map(|&((m, j, a, b, e), c)| (Monomial::new(m, j, a, b, e, 0), c)))
}

impl FourierModel<Gaussian> {
    /// Exact model with `A`, `B`, `ν` kept symbolic. `params` only records the
    /// numeric values used when the model is later substituted.
    pub fn exact(params: ModelParams) -> Self {
        let zero = (0, 1);
        let f0 = VecField::new(
            poly(&[((0, 0, 0, 0, 1), Gaussian::one())]),
            poly(&[
                ((0, 1, 0, 0, 0), Gaussian::one()),
                ((0, 1, 0, 2, 0), g((-3, 2), zero)),
                ((0, 3, 0, 0, 0), g((-1, 1), zero)),
                ((1, 0, 1, 0, 0), g((1, 2), zero)),
                ((-1, 0, 1, 0, 0), g((1, 2), zero)),
            ]),
        );
        let f1 = VecField::new(
            TrigPoly::zero(),
            poly(&[
                ((0, 0, 0, 1, 0), g(zero, (-1, 2))),
                ((0, 0, 0, 3, 0), g(zero, (3, 8))),
                ((0, 2, 0, 1, 0), g(zero, (3, 2))),
            ]),
        );
        let f2 = VecField::new(TrigPoly::zero(), poly(&[((0, 1, 0, 2, 0), g((3, 4), zero))]));
        let f3 = VecField::new(TrigPoly::zero(), poly(&[((0, 0, 0, 3, 0), g(zero, (-1, 8)))]));

        let mut fields = BTreeMap::new();
        fields.insert(0, f0);
        for (k, f) in [(1, f1), (2, f2), (3, f3)] {
            fields.insert(-k, f.conj());
            fields.insert(k, f);
        }
        FourierModel { fields, params }
    }

    /// Float model with all parameters substituted.
    pub fn to_float(&self) -> FourierModel<Complex64> {
        let point = self.params.point();
        FourierModel {
            fields: self.fields.iter().map(|(&k, f)| (k, f.substitute(&point))).collect(),
            params: self.params,
        }
    }
}

impl FourierModel<Complex64> {
    pub fn float(params: ModelParams) -> Self {
        FourierModel::exact(params).to_float()
    }
}

impl<S: Scalar> FourierModel<S> {
    /// A model from explicit fields; letters absent from the map are zero.
    pub fn from_fields(fields: BTreeMap<Letter, VecField<S>>, params: ModelParams) -> Self {
        FourierModel { fields, params }
    }

    pub fn field(&self, k: Letter) -> Option<&VecField<S>> {
        self.fields.get(&k)
    }

    pub fn fields(&self) -> impl Iterator<Item = (Letter, &VecField<S>)> {
        self.fields.iter().map(|(&k, f)| (k, f))
    }

    /// Letters whose field is not identically zero, ascending.
    pub fn support_letters(&self) -> Vec<Letter> {
        self.fields.iter().filter(|(_, f)| !f.is_zero()).map(|(&k, _)| k).collect()
    }

    /// `Σ_k e^{ikωt} f_k(φ, y)` with the model's numeric parameters.
    pub fn rhs(&self, t: f64, phi: f64, y: f64) -> [Complex64; 2] {
        let point = self.params.point();
        let mut out = [Complex64::new(0.0, 0.0); 2];
        for (&k, f) in &self.fields {
            let phase = Complex64::from_polar(1.0, k as f64 * self.params.omega * t);
            let v = f.eval(phi, y, &point);
            out[0] += phase * v[0];
            out[1] += phase * v[1];
        }
        out
    }
}
