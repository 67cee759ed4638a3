//! Differentiation of terms with respect to `h_{ab}` or `w_{ab}`, and the
//! cumulant expansion of `E[h_{ab} f]`.
//!
//! Each Green function entry differentiates as
//!
//! ```text
//! ∂G_xy/∂h_ab = -s (G_xa G_by + G_xb G_ay) + s δ_ab G_xa G_by
//!               + 4 s² h_ab (1/N) Σ_u G_xu G_uy - 2 s² δ_ab h_ab (1/N) Σ_u G_xu G_uy
//! ∂G_xy/∂w_ab = -e^{-t/2} (G_xa G_by + G_xb G_ay) + e^{-t/2} δ_ab G_xa G_by
//! ```
//!
//! with `s = √(1-e^{-t})`, and the observable as
//! `∂F^{(i)}(X) = F^{(i+1)}(X) ∂X` where `∂X` follows the same four groups
//! with `Dim G_ab` (doubled in the first group) and `(1/N) Σ_v Dim G_vv`.
//! The leading-only rule keeps just `-(G_xa G_by + G_xb G_ay)` and
//! `-2 F^{(i+1)} Dim G_ab`, without time factors.

use std::collections::HashMap;

use gft_exact::Rational;

use crate::canon::canonicalize;
use crate::classify::Classification;
use crate::coeff::{CoeffPoly, Monomial};
use crate::product::{pair, GreenProduct, Idx, Pair};
use crate::term::Term;
use crate::{Case, TermError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiffMode {
    /// `∂/∂h_ab` including the δ- and h-carrying groups.
    FullH,
    /// `∂/∂w_ab` for the Gaussian end of the flow.
    GaussW,
    /// Only the leading substitution, no time factors.
    LeadingOnly,
    /// `∂/∂h_ab(t)` not acting on the spectral parameter.
    DOperator,
}

#[derive(Clone, Copy)]
struct Groups {
    lead: Option<(i64, Monomial)>,
    delta: Option<(i64, Monomial)>,
    h: Option<(i64, Monomial)>,
    delta_h: Option<(i64, Monomial)>,
}

fn groups(mode: DiffMode) -> Groups {
    let s = Monomial::s();
    let s2 = Monomial::pow_s(2);
    let eh = Monomial::half();
    match mode {
        DiffMode::FullH => Groups {
            lead: Some((-1, s)),
            delta: Some((1, s)),
            h: Some((4, s2)),
            delta_h: Some((-2, s2)),
        },
        DiffMode::GaussW => Groups {
            lead: Some((-1, eh)),
            delta: Some((1, eh)),
            h: None,
            delta_h: None,
        },
        DiffMode::LeadingOnly => Groups {
            lead: Some((-1, Monomial::ONE)),
            delta: None,
            h: None,
            delta_h: None,
        },
        DiffMode::DOperator => Groups {
            lead: Some((-1, Monomial::ONE)),
            delta: Some((1, Monomial::ONE)),
            h: None,
            delta_h: None,
        },
    }
}

fn scaled(t: &Term, c: i64, m: Monomial) -> CoeffPoly {
    t.coeff.mul_monomial(&Rational::from_integer(c), m)
}

fn push_sorted(v: &mut Vec<Pair>, p: Pair) {
    let pos = v.partition_point(|q| *q <= p);
    v.insert(pos, p);
}

/// Product rule over every Green function entry in every factor.
pub fn diff_entry(t: &Term, ab: (Idx, Idx), mode: DiffMode) -> Vec<Term> {
    let (a, b) = ab;
    let g = groups(mode);
    let mut out = Vec::new();
    for fi in 0..t.factors.len() {
        for &((x, y), p) in t.factors[fi].entries() {
            let mut base = t.clone();
            base.factors[fi].remove_one(x, y);
            base.coeff = base.coeff.scale(&Rational::from_integer(p as i64));
            let with = |extra: &[(Idx, Idx)], c: i64, m: Monomial| {
                let mut n = base.clone();
                for &(u, v) in extra {
                    n.factors[fi].insert(u, v, 1);
                }
                n.coeff = scaled(&base, c, m);
                n
            };
            if let Some((c, m)) = g.lead {
                out.push(with(&[(x, a), (b, y)], c, m));
                out.push(with(&[(x, b), (a, y)], c, m));
            }
            if let Some((c, m)) = g.delta {
                let mut n = with(&[(x, a), (b, y)], c, m);
                push_sorted(&mut n.delta_pairs, pair(a, b));
                out.push(n);
            }
            let u = t.fresh_index(&[a, b]);
            if let Some((c, m)) = g.h {
                let mut n = with(&[(x, u), (u, y)], c, m);
                push_sorted(&mut n.h_pairs, pair(a, b));
                out.push(n);
            }
            if let Some((c, m)) = g.delta_h {
                let mut n = with(&[(x, u), (u, y)], c, m);
                push_sorted(&mut n.h_pairs, pair(a, b));
                push_sorted(&mut n.delta_pairs, pair(a, b));
                out.push(n);
            }
        }
    }
    out
}

/// Chain rule through `F^{(i₀)}(X)` plus the product rule inside every
/// Dim-factor (differentiation commutes with `Dim`).
pub fn diff_x(t: &Term, ab: (Idx, Idx), mode: DiffMode) -> Vec<Term> {
    let (a, b) = ab;
    let g = groups(mode);
    let mut out = Vec::new();
    let appended = |factor: GreenProduct, c: i64, m: Monomial| {
        let mut n = t.clone();
        n.f_order += 1;
        n.factors.push(factor);
        n.coeff = scaled(t, c, m);
        n
    };
    if let Some((c, m)) = g.lead {
        out.push(appended(GreenProduct::from_entries([(a, b)]), 2 * c, m));
    }
    if let Some((c, m)) = g.delta {
        let mut n = appended(GreenProduct::from_entries([(a, b)]), c, m);
        push_sorted(&mut n.delta_pairs, pair(a, b));
        out.push(n);
    }
    let v = t.fresh_index(&[a, b]);
    if let Some((c, m)) = g.h {
        let mut n = appended(GreenProduct::from_entries([(v, v)]), c, m);
        push_sorted(&mut n.h_pairs, pair(a, b));
        out.push(n);
    }
    if let Some((c, m)) = g.delta_h {
        let mut n = appended(GreenProduct::from_entries([(v, v)]), c, m);
        push_sorted(&mut n.h_pairs, pair(a, b));
        push_sorted(&mut n.delta_pairs, pair(a, b));
        out.push(n);
    }
    out.extend(diff_entry(t, ab, mode));
    out
}

/// Full derivative of a term: h-prefactors (for [`DiffMode::FullH`]), the
/// observable (in the F case) and all entries.
pub fn differentiate(t: &Term, ab: (Idx, Idx), mode: DiffMode, case: Case) -> Vec<Term> {
    let mut out = Vec::new();
    if mode == DiffMode::FullH {
        let key = pair(ab.0, ab.1);
        let m = t.h_pairs.iter().filter(|p| **p == key).count();
        if m > 0 {
            let mut n = t.clone();
            let pos = n.h_pairs.iter().position(|p| *p == key).unwrap();
            n.h_pairs.remove(pos);
            n.coeff = n.coeff.scale(&Rational::from_integer(m as i64));
            out.push(n);
        }
    }
    match case {
        Case::M => out.extend(diff_entry(t, ab, mode)),
        Case::F => out.extend(diff_x(t, ab, mode)),
    }
    out
}

/// Merge terms that are identical up to their coefficient, without
/// relabeling indices. Zero results are dropped; first-seen order is kept.
pub fn combine_exact(terms: Vec<Term>) -> Vec<Term> {
    let mut order: Vec<Term> = Vec::new();
    let mut acc: HashMap<Term, CoeffPoly> = HashMap::new();
    for t in terms {
        let key = t.with_coeff(CoeffPoly::one());
        match acc.get_mut(&key) {
            Some(c) => c.add_assign(&t.coeff),
            None => {
                acc.insert(key.clone(), t.coeff);
                order.push(key);
            }
        }
    }
    order
        .into_iter()
        .filter_map(|k| {
            let c = acc.remove(&k).unwrap();
            (!c.is_zero()).then(|| k.with_coeff(c))
        })
        .collect()
}

/// Canonicalize every term and merge equivalent ones.
pub fn combine_canonical(terms: Vec<Term>) -> Result<Vec<Term>, TermError> {
    let canon = terms.iter().map(canonicalize).collect::<Result<Vec<_>, _>>()?;
    Ok(combine_exact(canon))
}

/// `k`-fold derivative with respect to the same pair, merging identical
/// terms between steps. The pair labels stay fixed throughout.
pub fn differentiate_n(t: &Term, ab: (Idx, Idx), k: u32, mode: DiffMode, case: Case) -> Vec<Term> {
    let mut cur = vec![t.clone()];
    for _ in 0..k {
        let next: Vec<Term> = cur.iter().flat_map(|x| differentiate(x, ab, mode, case)).collect();
        cur = combine_exact(next);
    }
    cur
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CalcError {
    #[error("term has no h-prefactor to expand")]
    NoPrefactor,
    #[error("truncation order must be at least 1")]
    BadOrder,
}

/// One order of a cumulant expansion: `κ_{k+1}/(N q^{k-1}) E[∂^k f/∂h_ab^k]`
/// with the derivative still to be taken.
#[derive(Clone, Debug)]
pub struct CumulantOrder {
    pub k: u32,
    /// `f` with the cumulant prefactor applied to its coefficient and
    /// normalization.
    pub prefactor: Term,
}

#[derive(Clone, Debug)]
pub struct CumulantExpansion {
    pub pair: Pair,
    pub orders: Vec<CumulantOrder>,
    /// Class of the truncation remainder.
    pub remainder: Classification,
}

impl CumulantExpansion {
    /// Materialize the `k`-th order with `k` derivatives.
    pub fn expand_order(&self, k: u32, mode: DiffMode, case: Case) -> Vec<Term> {
        match self.orders.iter().find(|o| o.k == k) {
            Some(o) => differentiate_n(&o.prefactor, self.pair, k, mode, case),
            None => Vec::new(),
        }
    }
}

/// Expand `E[h_ab f]` where `h_ab` is `t.h_pairs[which]`, up to cumulant
/// order `l` (derivatives `k = 1 … l-1`; `κ₁ = 0` removes `k = 0`).
pub fn cumulant_expand(t: &Term, which: usize, l: u32) -> Result<CumulantExpansion, CalcError> {
    if l < 1 {
        return Err(CalcError::BadOrder);
    }
    if which >= t.h_pairs.len() {
        return Err(CalcError::NoPrefactor);
    }
    let mut f = t.clone();
    let ab = f.h_pairs.remove(which);
    let orders = (1..l)
        .map(|k| {
            let mut p = f.clone();
            p.coeff = p.coeff.mul_monomial(&Rational::one(), Monomial::kappa(k as usize + 1));
            p.d_n -= 1;
            p.d_q += k - 1;
            CumulantOrder { k, prefactor: p }
        })
        .collect();
    Ok(CumulantExpansion {
        pair: ab,
        orders,
        remainder: Classification::Negligible,
    })
}

/// Gaussian integration by parts `E[w_ab f] = (1/N) E[∂f/∂w_ab]`, for a term
/// `f` whose `w_ab` prefactor has already been stripped.
pub fn gaussian_expand(f: &Term, ab: (Idx, Idx), case: Case) -> Vec<Term> {
    let mut p = f.clone();
    p.d_n -= 1;
    differentiate(&p, ab, DiffMode::GaussW, case)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> CoeffPoly {
        CoeffPoly::one()
    }

    #[test]
    fn leading_rule_on_diagonal_entry() {
        // ∂̂G_vv/∂̂h_ab = -G_va G_bv - G_vb G_av = -2 G_va G_vb
        let t = Term::plain(unit(), 1, 0, GreenProduct::from_entries([(0, 0)]));
        let out = combine_exact(diff_entry(&t, (1, 2), DiffMode::LeadingOnly));
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].factors[0], GreenProduct::from_entries([(0, 1), (0, 2)]));
        assert_eq!(out[0].coeff, CoeffPoly::scalar(Rational::from_integer(-2)));
    }

    #[test]
    fn full_h_on_diagonal_entry_has_four_groups() {
        let t = Term::plain(unit(), 1, 0, GreenProduct::from_entries([(0, 0)]));
        let out = combine_exact(diff_entry(&t, (1, 2), DiffMode::FullH));
        // -2s G_va G_vb, s δ G_va G_vb, 4s² h (1/N)Σ_u G_vu², -2s² δ h (...)
        assert_eq!(out.len(), 4);
        let h: Vec<_> = out.iter().filter(|x| x.p_h() == 1).collect();
        assert_eq!(h.len(), 2);
        assert!(h.iter().all(|x| x.num_indices() == 4));
    }

    #[test]
    fn w_derivative_of_observable() {
        let t = Term::with_observable(unit(), 1, 0, vec![GreenProduct::from_entries([(2, 3)])]);
        let out = diff_x(&t, (0, 1), DiffMode::GaussW);
        let chain: Vec<_> = out.iter().filter(|x| x.f_order == 2).collect();
        assert_eq!(chain.len(), 2);
        let lead = CoeffPoly::monomial(Rational::from_integer(-2), Monomial::half());
        assert!(chain.iter().any(|x| x.coeff == lead && x.d_delta() == 0));
        assert!(chain.iter().any(|x| x.d_delta() == 1));
    }

    #[test]
    fn cumulant_prefactors() {
        let mut t = Term::plain(unit(), 2, 0, GreenProduct::from_entries([(0, 1)]));
        t.h_pairs.push((0, 1));
        let e = cumulant_expand(&t, 0, 8).unwrap();
        let k1 = &e.orders[0].prefactor;
        assert_eq!((k1.d_n, k1.d_q), (1, 0));
        assert_eq!(k1.coeff, unit());
        let k3 = &e.orders[2].prefactor;
        assert_eq!(k3.d_q, 2);
        assert_eq!(k3.coeff, CoeffPoly::monomial(Rational::one(), Monomial::kappa(4)));
        assert_eq!(e.remainder, Classification::Negligible);
    }
}
