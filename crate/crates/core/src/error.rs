use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("step size underflow at t = {t}: h = {h:e}")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("integration exceeded {max_steps} steps at t = {t}")]
    TooManySteps { t: f64, max_steps: usize },

    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },

    #[error("trajectory grid is not aligned with the change-of-variables phase table: {0}")]
    PhaseMisalignment(String),

    #[error("imaginary residue {residue:e} exceeds {limit:e} in a real-state evaluation")]
    ImaginaryResidue { residue: f64, limit: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit code: 2 for rejected input, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::PhaseMisalignment(_) | Error::Io(_) => 2,
            Error::StepSizeUnderflow { .. }
            | Error::TooManySteps { .. }
            | Error::NonFinite { .. }
            | Error::ImaginaryResidue { .. } => 3,
        }
    }
}
