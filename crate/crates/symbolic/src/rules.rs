//! Expansion rules turning one leading term into a linear identity among
//! leading terms, modulo non-leading remainders.
//!
//! * Rule 1 replaces an off-diagonal `G_ab` by `½ Σ_j h_aj G_jb`; Rule 1′
//!   uses `½ Σ_j h_bj G_ja`.
//! * Rule 2 inserts `1 = (1/N) Σ_{jk} h_jk G_kj - (2/N) Σ_j G_jj + …`.
//! * Rule 3 inserts `1 = Σ_j h_aj G_ja - 2 G_aa + …` for an existing `a`.
//!
//! After the cumulant expansion only the first-order leading derivative
//! survives, so each rule reduces to one [`DiffMode::LeadingOnly`]
//! derivative plus, for Rules 2 and 3, the diagonal insertion with
//! coefficient `-2`. The `(2 - z)` and `δ` remainders are non-leading and are
//! never materialized.

use std::collections::BTreeMap;
use std::fmt;

use gft_exact::Rational;

use crate::calculus::{combine_canonical, differentiate, DiffMode};
use crate::classify::{classify, Classification, ClassifyError};
use crate::product::Idx;
use crate::term::Term;
use crate::{Case, TermError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    R1,
    R1Reflected,
    R2,
    R3A,
    R3B,
}

impl RuleKind {
    pub fn name(self) -> &'static str {
        match self {
            RuleKind::R1 => "R1",
            RuleKind::R1Reflected => "R1'",
            RuleKind::R2 => "R2",
            RuleKind::R3A => "R3-a",
            RuleKind::R3B => "R3-b",
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a rule was applied: the Dim-factor and, for Rule 1, the entry or,
/// for Rule 3, the reused index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Site {
    pub factor: usize,
    pub entry: Option<(Idx, Idx)>,
    pub index: Option<Idx>,
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "factor {}", self.factor)?;
        if let Some((x, y)) = self.entry {
            write!(f, " entry ({x},{y})")?;
        }
        if let Some(v) = self.index {
            write!(f, " index {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("entry ({0},{1}) is diagonal or absent")]
    NotOffDiagonal(Idx, Idx),
    #[error("index {0} does not occur in the term")]
    MissingIndex(Idx),
    #[error("factor {0} out of range")]
    NoFactor(usize),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("leading term with unexpected coefficient {0}")]
    Coefficient(String),
}

/// The output of one rule application: `0 = -T_start + Σ c_k T_k`, as
/// canonical terms carrying their full coefficient, start term first.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub start: Term,
    pub rule: RuleKind,
    pub site: Site,
    pub terms: Vec<Term>,
    /// Non-leading outputs that were dropped, by class.
    pub dropped: BTreeMap<Classification, usize>,
}

impl Expansion {
    /// `(term with unit α, rational)` pairs; every coefficient must be a
    /// rational multiple of `α`.
    pub fn scalar_terms(&self) -> Result<Vec<(Term, Rational)>, RuleError> {
        self.terms
            .iter()
            .map(|t| match t.coeff.as_monomial() {
                Some((m, c)) if *m == crate::coeff::Monomial::alpha() => {
                    Ok((t.with_coeff(crate::coeff::CoeffPoly::monomial(Rational::one(), *m)), c.clone()))
                }
                _ => Err(RuleError::Coefficient(t.coeff.to_string())),
            })
            .collect()
    }

    /// All terms vanished or cancelled.
    pub fn is_trivial(&self) -> bool {
        self.terms.is_empty()
    }
}

fn finish(
    start: &Term,
    rule: RuleKind,
    site: Site,
    raw: Vec<Term>,
    case: Case,
) -> Result<Expansion, RuleError> {
    let mut dropped = BTreeMap::new();
    let mut kept = Vec::with_capacity(raw.len() + 1);
    if !start.vanishes(case) {
        kept.push(start.with_coeff(-&start.coeff));
    }
    for t in raw {
        if t.vanishes(case) {
            continue;
        }
        let c = classify(&t, case)?;
        if c.is_leading() {
            kept.push(t);
        } else {
            *dropped.entry(c).or_insert(0) += 1;
        }
    }
    Ok(Expansion {
        start: start.clone(),
        rule,
        site,
        terms: combine_canonical(kept)?,
        dropped,
    })
}

fn half(t: &Term) -> crate::coeff::CoeffPoly {
    t.coeff.scale(&Rational::new(1, 2))
}

/// Rule 1 (or 1′ when `reflected`) on one copy of the off-diagonal entry
/// `(x, y)` of factor `factor`.
pub fn rule1(t: &Term, factor: usize, entry: (Idx, Idx), reflected: bool, case: Case) -> Result<Expansion, RuleError> {
    let (x, y) = entry;
    let f = t.factors.get(factor).ok_or(RuleError::NoFactor(factor))?;
    if x == y || f.power(x, y) == 0 {
        return Err(RuleError::NotOffDiagonal(x, y));
    }
    let (a, b) = if reflected { (y, x) } else { (x, y) };
    let j = t.fresh_index(&[]);
    let mut base = t.clone();
    base.factors[factor].remove_one(x, y);
    base.factors[factor].insert(j, b, 1);
    base.coeff = half(t);
    let raw = differentiate(&base, (a, j), DiffMode::LeadingOnly, case);
    let kind = if reflected { RuleKind::R1Reflected } else { RuleKind::R1 };
    let site = Site { factor, entry: Some((x.min(y), x.max(y))), index: None };
    finish(t, kind, site, raw, case)
}

/// Rule 2 inside factor `factor`.
pub fn rule2(t: &Term, factor: usize, case: Case) -> Result<Expansion, RuleError> {
    if factor >= t.factors.len() {
        return Err(RuleError::NoFactor(factor));
    }
    let j = t.fresh_index(&[]);
    let k = t.fresh_index(&[j]);
    let mut base = t.clone();
    base.factors[factor].insert(k, j, 1);
    let mut raw = differentiate(&base, (j, k), DiffMode::LeadingOnly, case);
    let mut diag = t.clone();
    diag.factors[factor].insert(j, j, 1);
    diag.coeff = t.coeff.scale(&Rational::from_integer(-2));
    raw.push(diag);
    let site = Site { factor, entry: None, index: None };
    finish(t, RuleKind::R2, site, raw, case)
}

/// Rule 3 inside factor `factor`, reusing the existing index `a`.
pub fn rule3(t: &Term, factor: usize, a: Idx, second: bool, case: Case) -> Result<Expansion, RuleError> {
    if factor >= t.factors.len() {
        return Err(RuleError::NoFactor(factor));
    }
    if !t.index_set().contains(&a) {
        return Err(RuleError::MissingIndex(a));
    }
    let j = t.fresh_index(&[]);
    let mut base = t.clone();
    base.factors[factor].insert(a, j, 1);
    let mut raw = differentiate(&base, (a, j), DiffMode::LeadingOnly, case);
    let mut diag = t.clone();
    diag.factors[factor].insert(a, a, 1);
    diag.coeff = t.coeff.scale(&Rational::from_integer(-2));
    raw.push(diag);
    let kind = if second { RuleKind::R3B } else { RuleKind::R3A };
    let site = Site { factor, entry: None, index: Some(a) };
    finish(t, kind, site, raw, case)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::GreenProduct;

    fn coeffs(e: &Expansion) -> Vec<Rational> {
        let mut v: Vec<Rational> = e.scalar_terms().unwrap().into_iter().map(|(_, c)| c).collect();
        v.sort();
        v
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rule3_on_squared_offdiagonal() {
        // Σ_{ab} G_ab² with the existing index a
        let t = Term::leading_plain(GreenProduct::from_entries([(0, 1), (0, 1)]));
        let e = rule3(&t, 0, 0, false, Case::M).unwrap();
        let mut want = vec![r(-2, 1), r(-1, 1), r(-2, 1), r(-3, 1), r(-1, 1)];
        want.sort();
        assert_eq!(coeffs(&e), want);
        assert!(e.terms[1..].iter().all(Term::is_type_a));
    }

    #[test]
    fn rule1_on_five_entry_term() {
        // G_aa G_ab G_ac G_bb G_bc, expanding G_ac
        let t = Term::leading_plain(GreenProduct::from_entries([(0, 0), (0, 1), (0, 2), (1, 1), (1, 2)]));
        let e = rule1(&t, 0, (0, 2), false, Case::M).unwrap();
        let mut want = vec![r(-1, 1), r(-5, 2), r(-1, 1), r(-1, 2), r(-1, 2), r(-1, 2)];
        want.sort();
        assert_eq!(coeffs(&e), want);
    }

    #[test]
    fn observable_rule2_on_diagonal_factor() {
        let t = Term::with_observable(
            crate::coeff::CoeffPoly::monomial(Rational::one(), crate::coeff::Monomial::alpha()),
            1,
            2,
            vec![GreenProduct::from_entries([(0, 0)]), GreenProduct::from_entries([(0, 0)])],
        );
        let e = rule2(&t, 1, Case::F).unwrap();
        let mut want = vec![r(-2, 1), r(-1, 1), r(-1, 1), r(-2, 1), r(-1, 1), r(-2, 1), r(-2, 1)];
        want.sort();
        assert_eq!(coeffs(&e), want);
    }

    #[test]
    fn observable_rule3_into_empty_factor() {
        // F'' Dim(1) Dim(G_aa² G_bb), reusing b
        let t = Term::leading_observable(vec![
            GreenProduct::new(),
            GreenProduct::from_entries([(0, 0), (0, 0), (1, 1)]),
        ]);
        let e = rule3(&t, 0, 1, true, Case::F).unwrap();
        let mut want = vec![r(-2, 1), r(-1, 1), r(-2, 1), r(-2, 1), r(-1, 1), r(-4, 1)];
        want.sort();
        assert_eq!(coeffs(&e), want);
    }

    #[test]
    fn rule1_on_empty_factor_term_is_trivial() {
        let t = Term::leading_observable(vec![GreenProduct::new(), GreenProduct::from_entries([(0, 1), (0, 1)])]);
        let e = rule1(&t, 1, (0, 1), false, Case::F).unwrap();
        assert!(e.is_trivial());
    }
}
