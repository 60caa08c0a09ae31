//! Word-series coefficients: the averaged field `β̄`, the iterated integrals
//! `α`, and the change of variables `κ` relating them.

mod beta;
mod exppoly;
mod series;

pub use beta::{
    float_beta_bar, symbolic_beta_bar, BetaArith, BetaBar, FloatBeta, FloatBetaBar, OmegaTerm, RationalBeta,
    SymbolicBeta,
};
pub use exppoly::{left_extend, Alpha, ExpGrid, ExpPoly};
pub use series::{alpha_map, beta_map, kappa, BetaPowers, CoeffMap};
