//! Assembly of the identity system `C x = b̃` and its provenance sidecar.

use gft_exact::{LinalgError, LinearSystem, Rational, SparseRationalMatrix, SparseVec};
use serde_json::{json, Value};

use crate::coeff::Monomial;
use crate::container::ClassId;
use crate::generate::Generated;
use crate::term::Term;
use crate::Case;

/// What to do with target terms that no identity reaches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetPolicy {
    /// A missing target term is an error.
    Strict,
    /// Missing target terms are dropped and reported.
    Restrict,
}

#[derive(Debug, thiserror::Error)]
pub enum AssembleError {
    #[error("target term not in basis: {0}")]
    MissingTarget(String),
    #[error("target coefficient is not a rational multiple of kappa4 * alpha: {0}")]
    TargetCoefficient(String),
    #[error(transparent)]
    Term(#[from] crate::TermError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug)]
pub struct AssembledSystem {
    pub case: Case,
    /// Rows are basis classes, columns identities.
    pub matrix: SparseRationalMatrix,
    pub rhs: SparseVec,
    /// `(row, coefficient)` of each target term found in the basis.
    pub target_rows: Vec<(ClassId, Rational)>,
    /// Target terms outside the basis (only under [`TargetPolicy::Restrict`]).
    pub missing_targets: Vec<Term>,
}

impl AssembledSystem {
    pub fn to_linear_system(&self) -> LinearSystem {
        LinearSystem {
            case: self.case.name().to_string(),
            matrix: self.matrix.clone(),
            rhs: self.rhs.clone(),
        }
    }
}

/// Rational coefficient of a target term after dividing out `κ₄ α`.
pub fn target_scalar(t: &Term) -> Result<Rational, AssembleError> {
    let norm = Monomial::alpha() * Monomial::kappa(4);
    match t.coeff.as_monomial() {
        Some((m, c)) if *m == norm => Ok(c.clone()),
        _ => Err(AssembleError::TargetCoefficient(t.to_text())),
    }
}

/// Build the matrix from generated identities and map `target` onto basis
/// rows.
pub fn assemble(g: &Generated, target: &[Term], policy: TargetPolicy) -> Result<AssembledSystem, AssembleError> {
    let columns: Vec<SparseVec> = g
        .identities
        .iter()
        .map(|id| SparseVec::from_pairs(id.entries.iter().cloned()))
        .collect();
    let matrix = SparseRationalMatrix::from_columns(g.basis.len(), columns)?;
    let mut target_rows = Vec::new();
    let mut missing_targets = Vec::new();
    for t in target {
        let c = target_scalar(t)?;
        let unit = t.with_coeff(crate::coeff::CoeffPoly::monomial(Rational::one(), Monomial::alpha()));
        match g.basis.find(&unit)? {
            Some(row) => target_rows.push((row, c)),
            None if policy == TargetPolicy::Restrict => missing_targets.push(t.clone()),
            None => return Err(AssembleError::MissingTarget(t.to_text())),
        }
    }
    let rhs = SparseVec::from_pairs(target_rows.iter().cloned());
    Ok(AssembledSystem {
        case: g.config.case,
        matrix,
        rhs,
        target_rows,
        missing_targets,
    })
}

/// JSON sidecar: basis terms in row order and the origin of every column.
pub fn provenance_json(g: &Generated) -> Value {
    let basis: Vec<Value> = g.basis.iter().map(|(id, t)| json!({"row": id, "term": t.to_json()})).collect();
    let ids: Vec<Value> = g
        .identities
        .iter()
        .enumerate()
        .map(|(col, id)| {
            json!({
                "col": col,
                "rule": id.rule.name(),
                "site": id.site.to_string(),
                "start": g.start_terms[id.start].to_text(),
            })
        })
        .collect();
    json!({
        "case": g.config.case.name(),
        "n_max": g.config.n_max,
        "stats": serde_json::to_value(&g.stats).unwrap_or(Value::Null),
        "basis": basis,
        "identities": ids,
    })
}
