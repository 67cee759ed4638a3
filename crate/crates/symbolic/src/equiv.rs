//! Permutation-invariant keys and exact equivalence of terms.
//!
//! Two terms are equivalent when some bijection of summation indices maps
//! one onto the other (factor order is irrelevant). [`auid`] is a cheap
//! invariant used as a hash key; collisions are resolved by [`equivalent`],
//! a pruned backtracking search over index bijections.

use std::collections::HashMap;

use crate::product::Idx;
use crate::term::Term;
use crate::TermError;

/// Nested, fully sorted co-occurrence table: for each index `v'`, for each
/// index `v`, for each factor `i`, the pair (number of entries `G_{vv'}` in
/// factor `i` counted with power, `n_i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(pub Vec<Vec<Vec<(u32, u32)>>>);

/// Co-occurrence signature of an (ordered) index pair across factors.
fn pair_signature(t: &Term, v: Idx, w: Idx) -> Vec<(u32, u32)> {
    let mut sig: Vec<(u32, u32)> = t.factors.iter().map(|f| (f.power(v, w), f.size())).collect();
    sig.sort_unstable();
    sig
}

fn require_plain(t: &Term) -> Result<(), TermError> {
    if t.p_h() > 0 || t.d_delta() > 0 {
        Err(TermError::UnsupportedClass)
    } else {
        Ok(())
    }
}

/// The almost-unique identifier. Defined only for `p_h = d_δ = 0`.
pub fn auid(t: &Term) -> Result<CanonicalKey, TermError> {
    require_plain(t)?;
    let idx: Vec<Idx> = t.index_set().into_iter().collect();
    let mut outer: Vec<Vec<Vec<(u32, u32)>>> = idx
        .iter()
        .map(|&vp| {
            let mut mid: Vec<Vec<(u32, u32)>> = idx.iter().map(|&v| pair_signature(t, v, vp)).collect();
            mid.sort();
            mid
        })
        .collect();
    outer.sort();
    Ok(CanonicalKey(outer))
}

/// Scalar data that must agree for equivalent terms: everything except the
/// index structure and the rational part of the coefficient.
fn same_envelope(t1: &Term, t2: &Term) -> bool {
    t1.d_n == t2.d_n
        && t1.d_q == t2.d_q
        && t1.f_order == t2.f_order
        && t1.shift == t2.shift
        && t1.factors.len() == t2.factors.len()
        && t1.coeff.support() == t2.coeff.support()
}

fn sorted_factors(t: &Term) -> Vec<&crate::product::GreenProduct> {
    let mut f: Vec<_> = t.factors.iter().collect();
    f.sort();
    f
}

fn maps_onto(t1: &Term, t2: &Term, map: &HashMap<Idx, Idx>) -> bool {
    let img = t1.relabel(|v| map[&v]);
    sorted_factors(&img) == sorted_factors(t2)
}

/// Exact equivalence check for terms with `p_h = d_δ = 0`.
///
/// The coefficient's rational value is ignored; its monomial support must
/// match, as must `d_N`, `d_q`, `i₀` and the shift power.
pub fn equivalent(t1: &Term, t2: &Term) -> Result<bool, TermError> {
    require_plain(t1)?;
    require_plain(t2)?;
    if !same_envelope(t1, t2) {
        return Ok(false);
    }
    let i1: Vec<Idx> = t1.index_set().into_iter().collect();
    let i2: Vec<Idx> = t2.index_set().into_iter().collect();
    if i1.len() != i2.len() || auid(t1)? != auid(t2)? {
        return Ok(false);
    }
    // Most constrained indices first.
    let mut order = i1.clone();
    order.sort_by_key(|&v| std::cmp::Reverse(t1.occurrences(v)));
    let self_sig = |t: &Term, v: Idx| {
        let mut row: Vec<Vec<(u32, u32)>> = t.index_set().into_iter().map(|w| pair_signature(t, v, w)).collect();
        row.sort();
        (t.occurrences(v), pair_signature(t, v, v), row)
    };
    let sig1: HashMap<Idx, _> = i1.iter().map(|&v| (v, self_sig(t1, v))).collect();
    let sig2: HashMap<Idx, _> = i2.iter().map(|&v| (v, self_sig(t2, v))).collect();

    let mut map: HashMap<Idx, Idx> = HashMap::new();
    let mut used: Vec<Idx> = Vec::new();
    Ok(backtrack(t1, t2, &order, 0, &i2, &sig1, &sig2, &mut map, &mut used))
}

#[allow(clippy::too_many_arguments)]
fn backtrack<S: PartialEq>(
    t1: &Term,
    t2: &Term,
    order: &[Idx],
    depth: usize,
    targets: &[Idx],
    sig1: &HashMap<Idx, S>,
    sig2: &HashMap<Idx, S>,
    map: &mut HashMap<Idx, Idx>,
    used: &mut Vec<Idx>,
) -> bool {
    if depth == order.len() {
        return maps_onto(t1, t2, map);
    }
    let v = order[depth];
    for &w in targets {
        if used.contains(&w) || sig1[&v] != sig2[&w] {
            continue;
        }
        // Pairwise co-occurrence must agree with every earlier assignment.
        let consistent = order[..depth]
            .iter()
            .all(|&u| pair_signature(t1, v, u) == pair_signature(t2, w, map[&u]));
        if !consistent {
            continue;
        }
        map.insert(v, w);
        used.push(w);
        if backtrack(t1, t2, order, depth + 1, targets, sig1, sig2, map, used) {
            return true;
        }
        used.pop();
        map.remove(&v);
    }
    false
}

/// Reference implementation: try every bijection between the index sets.
pub fn equivalent_brute_force(t1: &Term, t2: &Term) -> bool {
    if !same_envelope(t1, t2) || t1.p_h() != t2.p_h() || t1.d_delta() != t2.d_delta() {
        return false;
    }
    let i1: Vec<Idx> = t1.index_set().into_iter().collect();
    let i2: Vec<Idx> = t2.index_set().into_iter().collect();
    if i1.len() != i2.len() {
        return false;
    }
    let mut perm: Vec<usize> = (0..i2.len()).collect();
    loop {
        let map: HashMap<Idx, Idx> = i1.iter().zip(perm.iter()).map(|(&v, &p)| (v, i2[p])).collect();
        let img = t1.relabel(|v| map[&v]);
        if sorted_factors(&img) == sorted_factors(t2) && img.h_pairs == t2.h_pairs && img.delta_pairs == t2.delta_pairs {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
