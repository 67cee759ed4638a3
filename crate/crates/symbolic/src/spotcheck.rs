//! Two hand-checkable identities: Rule 1 on `G_aa G_ab G_ac G_bb G_bc` via
//! `G_ac`, and Rule 3 on `Σ G_ab²` via the existing index `a`. The computed
//! output is matched term by term, up to index relabeling, against the
//! expected list.

use gft_exact::Rational;
use serde::Serialize;

use crate::equiv::equivalent;
use crate::product::{GreenProduct, Idx};
use crate::rules::{rule1, rule3, Expansion, RuleError};
use crate::term::Term;
use crate::Case;

#[derive(Clone, Debug, Serialize)]
pub struct MatchedTerm {
    pub term: String,
    pub expected: Option<String>,
    pub computed: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpotCheck {
    pub name: &'static str,
    pub expected_multiset: Vec<String>,
    pub computed_multiset: Vec<String>,
    /// Sorted coefficient lists agree.
    pub multiset_ok: bool,
    /// Every expected term found among the computed ones with its coefficient,
    /// and nothing left over.
    pub terms_ok: bool,
    pub terms: Vec<MatchedTerm>,
}

impl SpotCheck {
    pub fn passed(&self) -> bool {
        self.multiset_ok && self.terms_ok
    }
}

fn sorted_strings(mut v: Vec<Rational>) -> Vec<String> {
    v.sort();
    v.into_iter().map(|c| c.to_string()).collect()
}

fn compare(name: &'static str, e: &Expansion, expected: &[(&[(Idx, Idx)], Rational)]) -> Result<SpotCheck, RuleError> {
    let computed = e.scalar_terms()?;
    let want: Vec<(Term, Rational)> = expected
        .iter()
        .map(|(entries, c)| (Term::leading_plain(GreenProduct::from_entries(entries.iter().copied())), c.clone()))
        .collect();

    let mut used = vec![false; computed.len()];
    let mut terms = Vec::new();
    let mut terms_ok = true;
    for (t, c) in &want {
        let mut hit = None;
        for (k, (u, _)) in computed.iter().enumerate() {
            if !used[k] && equivalent(t, u)? {
                hit = Some(k);
                break;
            }
        }
        let got = hit.map(|k| {
            used[k] = true;
            computed[k].1.clone()
        });
        terms_ok &= got.as_ref() == Some(c);
        terms.push(MatchedTerm {
            term: t.to_text(),
            expected: Some(c.to_string()),
            computed: got.map(|g| g.to_string()),
        });
    }
    for (k, (u, c)) in computed.iter().enumerate() {
        if !used[k] {
            terms_ok = false;
            terms.push(MatchedTerm {
                term: u.to_text(),
                expected: None,
                computed: Some(c.to_string()),
            });
        }
    }
    let expected_multiset = sorted_strings(want.iter().map(|(_, c)| c.clone()).collect());
    let computed_multiset = sorted_strings(computed.iter().map(|(_, c)| c.clone()).collect());
    Ok(SpotCheck {
        name,
        multiset_ok: expected_multiset == computed_multiset,
        expected_multiset,
        computed_multiset,
        terms_ok,
        terms,
    })
}

const A: Idx = 0;
const B: Idx = 1;
const C: Idx = 2;
const D: Idx = 3;

pub fn rule1_check() -> Result<SpotCheck, RuleError> {
    let start = Term::leading_plain(GreenProduct::from_entries([(A, A), (A, B), (A, C), (B, B), (B, C)]));
    let e = rule1(&start, 0, (A, C), false, Case::M)?;
    let r = Rational::new;
    compare(
        "rule 1 on G_aa G_ab G_ac G_bb G_bc via G_ac",
        &e,
        &[
            (&[(A, A), (A, B), (A, C), (B, B), (B, C)], r(-1, 1)),
            (&[(A, A), (A, B), (A, C), (B, B), (B, D), (C, D)], r(-5, 2)),
            (&[(A, B), (A, B), (A, C), (A, D), (B, B), (C, D)], r(-1, 1)),
            (&[(A, A), (A, B), (A, B), (B, B), (C, D), (C, D)], r(-1, 2)),
            (&[(A, A), (A, B), (A, D), (B, B), (B, D), (C, C)], r(-1, 2)),
            (&[(A, A), (A, A), (B, B), (B, C), (B, D), (C, D)], r(-1, 2)),
        ],
    )
}

pub fn rule3_check() -> Result<SpotCheck, RuleError> {
    let start = Term::leading_plain(GreenProduct::from_entries([(A, B), (A, B)]));
    let e = rule3(&start, 0, A, false, Case::M)?;
    let r = Rational::from_integer;
    compare(
        "rule 3 on G_ab^2 via the existing index a",
        &e,
        &[
            (&[(A, A), (A, B), (A, C), (B, C)], r(-2)),
            (&[(A, A), (A, B), (A, B), (C, C)], r(-1)),
            (&[(A, A), (A, B), (A, B)], r(-2)),
            (&[(A, B), (A, B), (A, C), (A, C)], r(-3)),
            (&[(A, B), (A, B)], r(-1)),
        ],
    )
}

pub fn hand_checks() -> Result<Vec<SpotCheck>, RuleError> {
    Ok(vec![rule1_check()?, rule3_check()?])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_identities_match_term_by_term() {
        for c in hand_checks().unwrap() {
            assert!(c.passed(), "{}: {:#?}", c.name, c.terms);
        }
    }
}
