//! Exact and floating sparse arithmetic for trigonometric-polynomial
//! functions of the state `(φ, y)` and the parameters `(A, B, ν, ω^{-1})`.
//!
//! The phase enters through `u = e^{iφ}` with Laurent exponents, so
//! `cos φ = (u + u^{-1})/2` and the state stays two-dimensional.

mod field;
mod poly;
mod scalar;

pub use field::{Jacobian, VecField, DIM, PHI, VARS, Y};
pub use poly::{
    Monomial, ParamPoint, TrigPoly, Var, ZeroTest, ZERO_TEST_POINTS, ZERO_TEST_SEED, ZERO_TEST_THRESHOLD,
};
pub use scalar::{Gaussian, Mode, Rational, Scalar};
