//! Exact linear algebra over the rationals.
//!
//! [`Rational`] keeps values in lowest terms with an inline `i64` fast path.
//! [`SparseRationalMatrix`] is column-sparse. [`eliminate`] performs exact
//! Gaussian elimination on an augmented system with a choice of pivot
//! strategy, [`solve`] back-substitutes with free variables at zero, and
//! [`verify`] recomputes `A x - b` without touching the eliminator.

pub mod eliminate;
pub mod matrix;
pub mod rational;
pub mod solve;
pub mod sysfile;

pub use eliminate::{eliminate, rank, Echelon, EliminationOptions, PivotLog, PivotStrategy};
pub use matrix::{SparseRationalMatrix, SparseVec};
pub use rational::Rational;
pub use solve::{mat_vec, solve, verify, InfeasibilityCertificate, SolveOutcome, SolveReport};
pub use sysfile::{parse_solution, solution_to_text, FormatError, LinearSystem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("entry ({row}, {col}) outside matrix bounds")]
    IndexOutOfRange { row: usize, col: usize },
    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("dimension mismatch: matrix has {rows}, vector needs {rhs}")]
    DimensionMismatch { rows: usize, rhs: usize },
    #[error("fill-in cap of {cap} nonzeros exceeded ({reached})")]
    FillInCap { cap: usize, reached: usize },
}
