//! Expansion of the time derivative along the interpolating flow, in both
//! cases, and extraction of its leading part (the cancellation target).
//!
//! The derivative of `E[m]` (respectively `E[F(X)]`) splits into
//!
//! * an `h`-line from `∂h(t)/∂t ∋ ½ e^{-t}/s h`, cumulant expanded;
//! * a `w`-line from `∂h(t)/∂t ∋ -½ e^{-t/2} w`, Gaussian expanded;
//! * the deterministic edge shift `12 κ₄ e^{-t} s² / q²`;
//! * the fluctuating shift `χ'(t) = e^{-t} (1/N) Σ (h_ab² - 1/N)`.
//!
//! Differentiating `G = (H - z)^{-1}` gives `-G Ḣ G + ż G²`, and `∫ G² dx`
//! over the window turns into `Dim G` in the observable case.

use std::collections::BTreeMap;

use gft_exact::Rational;

use crate::calculus::{combine_canonical, cumulant_expand, gaussian_expand, DiffMode};
use crate::classify::{classify_with_order, Classification, ClassifyError};
use crate::coeff::{CoeffPoly, Monomial};
use crate::product::GreenProduct;
use crate::term::Term;
use crate::{Case, TermError};

/// Sign convention for the `h`- and `w`-lines of the observable case.
///
/// `Derived` follows from `∂X/∂t = -Σ ḣ_ab Dim G_ab + …`; `Flipped` negates
/// both lines (the two lines cancel each other at first order either way).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FlowSign {
    Derived,
    Flipped,
}

fn mono(c: i64, d: i64, half_exp: i16, s_exp: i16) -> CoeffPoly {
    CoeffPoly::monomial(
        Rational::new(c, d),
        Monomial {
            half_exp,
            s_exp,
            ..Monomial::ONE
        },
    )
}

/// One summand of the unexpanded time derivative.
#[derive(Clone, Debug)]
pub enum FlowLine {
    /// Expand the first `h` prefactor by cumulants.
    Cumulant(Term),
    /// `E[w_ab f]` with `f` given and `(a, b)` the pair.
    Gaussian(Term, (u32, u32)),
    /// Already expanded.
    Direct(Term),
}

/// The unexpanded summands for the given case.
pub fn flow_lines(case: Case, sign: FlowSign) -> Vec<FlowLine> {
    // v = 0, a = 1, b = 2 (and j = 3 where needed).
    let kappa4_alpha = CoeffPoly::monomial(
        Rational::from_integer(12),
        Monomial::alpha() * Monomial::kappa(4),
    );
    let flip = if sign == FlowSign::Flipped && case == Case::F { -1 } else { 1 };
    match case {
        Case::M => {
            let vab = GreenProduct::from_entries([(0, 1), (0, 2)]);
            let vj2 = GreenProduct::from_entries([(0, 3), (0, 3)]);
            let vj2_short = GreenProduct::from_entries([(0, 1), (0, 1)]);
            let mut hline = Term::plain(mono(-1, 2, 2, -1), 2, 0, vab.clone());
            hline.h_pairs.push((1, 2));
            let wline = Term::plain(mono(1, 2, 1, 0), 2, 0, vab);
            let shift = Term::plain(kappa4_alpha, 1, 2, vj2_short.clone());
            let mut chi = Term::plain(mono(1, 1, 2, 0), 2, 0, vj2);
            chi.h_pairs = vec![(1, 2), (1, 2)];
            let chi_const = Term::plain(mono(-1, 1, 2, 0), 1, 0, vj2_short);
            vec![
                FlowLine::Cumulant(hline),
                FlowLine::Gaussian(wline, (1, 2)),
                FlowLine::Direct(shift),
                FlowLine::Cumulant(chi),
                FlowLine::Direct(chi_const),
            ]
        }
        Case::F => {
            let ab = vec![GreenProduct::from_entries([(1, 2)])];
            let vv = vec![GreenProduct::from_entries([(0, 0)])];
            let mut hline = Term::with_observable(mono(-flip, 2, 2, -1), 2, 0, ab.clone());
            hline.h_pairs.push((1, 2));
            let wline = Term::with_observable(mono(flip, 2, 1, 0), 2, 0, ab);
            let shift = Term::with_observable(kappa4_alpha, 1, 2, vv.clone());
            let mut chi = Term::with_observable(mono(1, 1, 2, 0), 2, 0, vv.clone());
            chi.h_pairs = vec![(1, 2), (1, 2)];
            let chi_const = Term::with_observable(mono(-1, 1, 2, 0), 1, 0, vv);
            vec![
                FlowLine::Cumulant(hline),
                FlowLine::Gaussian(wline, (1, 2)),
                FlowLine::Direct(shift),
                FlowLine::Cumulant(chi),
                FlowLine::Direct(chi_const),
            ]
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FlowError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Calc(#[from] crate::calculus::CalcError),
}

/// Fully expanded derivative, restricted to cumulant orders in `orders`
/// (Direct and Gaussian lines are included when `with_rest` is set),
/// canonicalized and combined.
pub fn expand_flow(
    case: Case,
    sign: FlowSign,
    orders: &[u32],
    with_rest: bool,
    l: u32,
) -> Result<Vec<Term>, FlowError> {
    let mut all = Vec::new();
    for line in flow_lines(case, sign) {
        match line {
            FlowLine::Cumulant(t) => {
                let e = cumulant_expand(&t, 0, l)?;
                for &k in orders {
                    all.extend(e.expand_order(k, DiffMode::FullH, case));
                }
            }
            FlowLine::Gaussian(f, ab) if with_rest => all.extend(gaussian_expand(&f, ab, case)),
            FlowLine::Direct(t) if with_rest => all.push(t),
            _ => {}
        }
    }
    Ok(combine_canonical(all)?)
}

/// Classification histogram plus the leading terms of an expansion.
#[derive(Clone, Debug, Default)]
pub struct Split {
    pub leading: Vec<Term>,
    pub counts: BTreeMap<Classification, usize>,
}

pub fn split_leading(terms: Vec<Term>, case: Case, l: u32) -> Result<Split, ClassifyError> {
    let mut s = Split::default();
    for t in terms {
        let c = classify_with_order(&t, case, l)?;
        *s.counts.entry(c).or_default() += 1;
        if c.is_leading() {
            s.leading.push(t);
        }
    }
    Ok(s)
}

/// Highest cumulant order expanded explicitly. From order five on every
/// term has `d_q ≥ 4` and, thanks to the observation index, degree `≥ 2` or
/// an h-prefactor, so it is non-leading without being computed.
pub const EXPLICIT_ORDERS: u32 = 4;

/// All explicitly expanded terms of the time derivative, classified. The
/// leading ones form the cancellation target; every coefficient there is a
/// rational multiple of `κ₄ e^{-t}(1-e^{-t})`.
pub fn expand_and_classify(case: Case, sign: FlowSign) -> Result<Split, FlowError> {
    let l = crate::classify::DEFAULT_ORDER;
    let orders: Vec<u32> = (1..=EXPLICIT_ORDERS).collect();
    let terms = expand_flow(case, sign, &orders, true, l)?;
    let terms: Vec<Term> = terms.into_iter().filter(|t| !t.vanishes(case)).collect();
    Ok(split_leading(terms, case, l)?)
}

pub fn leading_target(case: Case, sign: FlowSign) -> Result<Vec<Term>, FlowError> {
    Ok(expand_and_classify(case, sign)?.leading)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_order_leading_terms_cancel() {
        for case in [Case::M, Case::F] {
            let terms = expand_flow(case, FlowSign::Derived, &[1], true, 8).unwrap();
            // Only the k = 3 shift line survives with d_q = 2; every other
            // survivor carries an h prefactor.
            for t in &terms {
                assert!(t.p_h() >= 1 || t.d_q == 2, "{case:?}: {}", t.to_text());
            }
        }
    }
}
