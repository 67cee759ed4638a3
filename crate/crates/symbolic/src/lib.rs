//! Symbolic Green function terms: representation, canonical forms,
//! differentiation, classification, and generation of the linear identities
//! used to certify cancellation of leading terms.

pub mod assemble;
pub mod calculus;
pub mod cancellation;
pub mod canon;
pub mod classify;
pub mod coeff;
pub mod container;
pub mod equiv;
pub mod flow;
pub mod generate;
pub mod product;
pub mod rules;
pub mod spotcheck;
pub mod start;
pub mod term;

pub use calculus::{differentiate, DiffMode};
pub use canon::canonicalize;
pub use classify::{classify, Classification};
pub use coeff::{CoeffPoly, Monomial};
pub use container::{ClassId, TermContainer};
pub use product::{GreenProduct, Idx, Pair};
pub use term::Term;

/// Which expectation is being expanded: `E[m_N]` (no observable) or
/// `E[F(X)]` (every term carries `F^{(i₀)}` and `i₀` Dim-factors).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    M,
    F,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::M => "m",
            Case::F => "F",
        }
    }
}

impl std::str::FromStr for Case {
    type Err = TermError;
    fn from_str(s: &str) -> Result<Self, TermError> {
        match s {
            "m" | "M" => Ok(Case::M),
            "F" | "f" => Ok(Case::F),
            _ => Err(TermError::Parse(format!("unknown case {s:?}"))),
        }
    }
}

/// Order-preserving map, data-parallel when the `parallel` feature is on.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    map_with(items, f, true)
}

/// Like [`par_map`], but `parallel = false` forces the sequential path even
/// when rayon is compiled in.
pub fn map_with<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send, parallel: bool) -> Vec<R> {
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = parallel;
    items.iter().map(f).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("observable terms need i0 >= 1")]
    ZeroOrder,
    #[error("i0 = {f_order} but {factors} Dim-factors")]
    FactorCount { f_order: u32, factors: usize },
    #[error("zero exponent in a Green function product")]
    ZeroPower,
    #[error("index pair not stored as (min, max)")]
    UnorderedPair,
    #[error("operation defined only for terms without h or delta prefactors")]
    UnsupportedClass,
    #[error("parse error: {0}")]
    Parse(String),
}
