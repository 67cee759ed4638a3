//! Leading / non-leading classification of expanded terms.

use std::collections::BTreeSet;
use std::fmt;

use crate::product::Idx;
use crate::term::Term;
use crate::Case;

/// Class of a term. Non-leading cases are numbered as in the definitions:
///
/// without observable (`d_N ≤ 1` throughout):
/// 1. `d_q ≥ 4` and degree `≥ 2`;
/// 2. `p_h ≥ 1` and some index outside the h-pairs occurs at least twice
///    in off-diagonal entries;
/// 3. `p_h ≥ 1` and `d_q ≥ 1`;
/// 4. `d_δ ≥ 1` and `d_q ≥ 1`;
/// 5. `p_h = d_δ = 0`, `d_q ≥ 1` and unmatched.
///
/// with observable (`d_N ≤ 1`): 1. `p_h ≥ 1`; 2. `d_δ ≥ 1`; 3. `d_q ≥ 4`;
/// 4. unmatched.
///
/// When several cases apply the lowest number is reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Classification {
    Leading,
    TauG1(u8),
    TauG2,
    TauF1(u8),
    TauF2,
    Negligible,
}

impl Classification {
    pub fn is_leading(self) -> bool {
        self == Classification::Leading
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Leading => write!(f, "Leading"),
            Classification::TauG1(c) => write!(f, "TauG1-case{c}"),
            Classification::TauG2 => write!(f, "TauG2"),
            Classification::TauF1(c) => write!(f, "TauF1-case{c}"),
            Classification::TauF2 => write!(f, "TauF2"),
            Classification::Negligible => write!(f, "Negligible"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("term fits no class: {0}")]
pub struct ClassifyError(pub String);

/// Default cumulant truncation order.
pub const DEFAULT_ORDER: u32 = 8;

/// Classify with the default truncation order.
pub fn classify(t: &Term, case: Case) -> Result<Classification, ClassifyError> {
    classify_with_order(t, case, DEFAULT_ORDER)
}

/// Terms with `d_q ≥ 2(l-1)` that match no other class are reported as
/// [`Classification::Negligible`].
pub fn classify_with_order(t: &Term, case: Case, l: u32) -> Result<Classification, ClassifyError> {
    let ph = t.p_h();
    let dd = t.d_delta();
    let matched = !t.is_unmatched();
    if t.d_q == 2 && t.d_n == 1 && ph == 0 && dd == 0 && t.shift == 0 && matched {
        return Ok(Classification::Leading);
    }
    if t.d_n <= 1 {
        match case {
            Case::M => {
                if t.d_q >= 4 && t.degree() >= 2 {
                    return Ok(Classification::TauG1(1));
                }
                if ph >= 1 && has_repeated_outside_index(t) {
                    return Ok(Classification::TauG1(2));
                }
                if ph >= 1 && t.d_q >= 1 {
                    return Ok(Classification::TauG1(3));
                }
                if dd >= 1 && t.d_q >= 1 {
                    return Ok(Classification::TauG1(4));
                }
                if ph == 0 && dd == 0 && t.d_q >= 1 && !matched {
                    return Ok(Classification::TauG1(5));
                }
                if t.shift >= 1 {
                    return Ok(Classification::TauG2);
                }
            }
            Case::F => {
                if ph >= 1 {
                    return Ok(Classification::TauF1(1));
                }
                if dd >= 1 {
                    return Ok(Classification::TauF1(2));
                }
                if t.d_q >= 4 {
                    return Ok(Classification::TauF1(3));
                }
                if !matched {
                    return Ok(Classification::TauF1(4));
                }
                if t.shift >= 1 {
                    return Ok(Classification::TauF2);
                }
            }
        }
    }
    if t.d_q >= 2 * l.saturating_sub(1) {
        return Ok(Classification::Negligible);
    }
    Err(ClassifyError(t.to_text()))
}

fn has_repeated_outside_index(t: &Term) -> bool {
    let hab: BTreeSet<Idx> = t.h_pairs.iter().flat_map(|(a, b)| [*a, *b]).collect();
    t.index_set()
        .into_iter()
        .filter(|v| !hab.contains(v))
        .any(|v| t.offdiag_occurrences(v) >= 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{CoeffPoly, Monomial};
    use crate::product::GreenProduct;
    use gft_exact::Rational;

    fn term(d_q: u32, entries: &[(Idx, Idx)]) -> Term {
        Term::plain(
            CoeffPoly::monomial(Rational::one(), Monomial::u()),
            1,
            d_q,
            GreenProduct::from_entries(entries.iter().copied()),
        )
    }

    #[test]
    fn unmatched_with_one_q() {
        // G_aa G_ab G_bb with d_q = 1
        let t = term(1, &[(0, 0), (0, 1), (1, 1)]);
        assert_eq!(classify(&t, Case::M).unwrap(), Classification::TauG1(5));
    }

    #[test]
    fn high_q_power() {
        // G_va G_av G_aa^2 G_bb^3 with d_q = 4
        let t = term(4, &[(0, 1), (0, 1), (1, 1), (1, 1), (2, 2), (2, 2), (2, 2)]);
        assert_eq!(classify(&t, Case::M).unwrap(), Classification::TauG1(1));
    }

    #[test]
    fn leading_and_error() {
        assert!(classify(&term(2, &[(0, 1), (0, 1)]), Case::M).unwrap().is_leading());
        let mut pre = term(0, &[(0, 1)]);
        pre.d_n = 2;
        assert!(classify(&pre, Case::M).is_err());
    }
}
