//! Exact solves and an independent residual check.

use crate::eliminate::{eliminate, EliminationOptions, PivotLog, PivotStrategy};
use crate::matrix::{SparseRationalMatrix, SparseVec};
use crate::rational::Rational;
use crate::LinalgError;

/// Evidence that `A x = b` has no solution: appending `b` raises the rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    pub rank: usize,
    pub augmented_rank: usize,
    /// Original row that reduced to `0 = nonzero`.
    pub witness_row: usize,
}

#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Solved(SparseVec),
    Infeasible(InfeasibilityCertificate),
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub rank: usize,
    pub strategy: PivotStrategy,
    pub outcome: SolveOutcome,
    pub pivot_log: PivotLog,
    /// Set by [`verify`], never by the eliminator.
    pub residual_exact_zero: bool,
}

impl SolveReport {
    pub fn solution(&self) -> Option<&SparseVec> {
        match &self.outcome {
            SolveOutcome::Solved(x) => Some(x),
            SolveOutcome::Infeasible(_) => None,
        }
    }

    pub fn is_solved(&self) -> bool {
        matches!(self.outcome, SolveOutcome::Solved(_)) && self.residual_exact_zero
    }
}

/// Solve `A x = b` exactly; free variables are set to zero.
pub fn solve(
    a: &SparseRationalMatrix,
    b: &SparseVec,
    opts: EliminationOptions,
) -> Result<SolveReport, LinalgError> {
    let ech = eliminate(a, b, opts)?;
    let rank = ech.rank();
    let outcome = match ech.back_substitute() {
        Some(x) => SolveOutcome::Solved(SparseVec::from_pairs(x.into_iter().enumerate())),
        None => SolveOutcome::Infeasible(InfeasibilityCertificate {
            rank,
            augmented_rank: ech.augmented_rank(),
            witness_row: ech.inconsistent_row.expect("inconsistent row"),
        }),
    };
    let residual_exact_zero = match &outcome {
        SolveOutcome::Solved(x) => verify(a, x, b)?,
        SolveOutcome::Infeasible(_) => false,
    };
    Ok(SolveReport {
        rank,
        strategy: ech.strategy,
        outcome,
        pivot_log: ech.log,
        residual_exact_zero,
    })
}

/// `A x` computed column by column, exact.
pub fn mat_vec(a: &SparseRationalMatrix, x: &SparseVec) -> Result<Vec<Rational>, LinalgError> {
    if let Some(j) = x.max_index() {
        if j >= a.ncols() {
            return Err(LinalgError::DimensionMismatch {
                rows: a.ncols(),
                rhs: j + 1,
            });
        }
    }
    let n = a.nrows();
    let partial = |chunk: &[(usize, Rational)]| {
        let mut acc = vec![Rational::zero(); n];
        for (j, xj) in chunk {
            for (i, v) in a.column(*j).iter() {
                acc[i] += &(v * xj);
            }
        }
        acc
    };
    let add = |mut l: Vec<Rational>, r: Vec<Rational>| {
        for (a, b) in l.iter_mut().zip(r.iter()) {
            if !b.is_zero() {
                *a += b;
            }
        }
        l
    };
    let entries = x.entries();
    let chunk = (entries.len() / 64).max(64);
    #[cfg(feature = "parallel")]
    let total = {
        use rayon::prelude::*;
        entries
            .par_chunks(chunk)
            .map(partial)
            .reduce(|| vec![Rational::zero(); n], add)
    };
    #[cfg(not(feature = "parallel"))]
    let total = entries
        .chunks(chunk)
        .map(partial)
        .fold(vec![Rational::zero(); n], add);
    Ok(total)
}

/// True iff `A x - b` is exactly zero. Independent of the eliminator.
pub fn verify(a: &SparseRationalMatrix, x: &SparseVec, b: &SparseVec) -> Result<bool, LinalgError> {
    if let Some(i) = b.max_index() {
        if i >= a.nrows() {
            return Err(LinalgError::DimensionMismatch {
                rows: a.nrows(),
                rhs: i + 1,
            });
        }
    }
    let ax = mat_vec(a, x)?;
    let bd = b.to_dense(a.nrows());
    Ok(ax.iter().zip(bd.iter()).all(|(l, r)| l == r))
}
