pub mod algebra;
pub mod averaging;
pub mod basis;
pub mod cli;
pub mod coefficients;
pub mod error;
pub mod experiment;
pub mod integrate;
pub mod model;
pub mod words;

pub use error::{Error, Result};
