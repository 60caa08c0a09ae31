//! Truncated averaged systems, the change of variables back to the
//! oscillatory solution, and effective potentials.

mod change;
mod compiled;
mod potential;
mod system;

pub use change::{build_change, word_series_eval, ChangeOfVariables, RESIDUE_LIMIT};
pub use compiled::CompiledField;
pub use potential::{effective_potential, symbolic_potential, well_analysis, CriticalKind, CriticalPoint, Potential, WellAnalysis};
pub use system::{build_averaged, canonical_text, float_text, AveragedSystem};
