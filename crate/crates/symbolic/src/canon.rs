//! Canonical labeling of summation indices.
//!
//! Indices are first partitioned into colour classes by an iterated
//! neighbourhood refinement that starts from the occurrence count (highest
//! first, so the indices occurring four times in type-A/AB terms receive
//! labels 0 and 1). Labels are then assigned class by class, trying every
//! ordering inside each class and keeping the lexicographically smallest
//! relabeled term. Colours are isomorphism invariant, so two terms that
//! differ by an index bijection produce identical output.

use std::cmp::Reverse;
use std::collections::HashMap;

use crate::product::{GreenProduct, Idx};
use crate::term::Term;
use crate::TermError;

/// Sort factors by `(n_i, entries)`; h- and δ-pairs are already sorted by
/// [`Term::relabel`].
fn sort_factors(t: &mut Term) {
    t.factors.sort_by(|a, b| (a.size(), a.entries()).cmp(&(b.size(), b.entries())));
}

fn structure_key(t: &Term) -> (&[GreenProduct], &[(Idx, Idx)], &[(Idx, Idx)]) {
    (&t.factors, &t.h_pairs, &t.delta_pairs)
}

/// Colour refinement. Returns one colour per position in `idx`; colour order
/// is determined by label-invariant keys only.
pub(crate) fn refine_colors(t: &Term, idx: &[Idx]) -> Vec<usize> {
    let pos: HashMap<Idx, usize> = idx.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = idx.len();

    let mut keys: Vec<Vec<i64>> = vec![Vec::new(); n];
    for (i, &v) in idx.iter().enumerate() {
        let occ = t.occurrences(v) as i64;
        let h = t.h_pairs.iter().map(|(a, b)| (*a == v) as i64 + (*b == v) as i64).sum::<i64>();
        let d = t.delta_pairs.iter().map(|(a, b)| (*a == v) as i64 + (*b == v) as i64).sum::<i64>();
        let mut per_factor: Vec<(i64, i64, i64)> = t
            .factors
            .iter()
            .map(|f| (f.size() as i64, f.occurrences(v) as i64, f.power(v, v) as i64))
            .filter(|(_, o, _)| *o > 0)
            .collect();
        per_factor.sort_unstable();
        let k = &mut keys[i];
        k.extend([-occ, h, d, per_factor.len() as i64]);
        for (s, o, l) in per_factor {
            k.extend([s, o, l]);
        }
    }
    let mut colors = rank_keys(&keys);
    let mut ncolors = count_distinct(&colors);

    // Neighbour lists: (kind, factor size, power, other endpoint position).
    let mut nbrs: Vec<Vec<(i64, i64, i64, usize)>> = vec![Vec::new(); n];
    for f in &t.factors {
        let size = f.size() as i64;
        for ((x, y), p) in f.entries() {
            let (px, py) = (pos[x], pos[y]);
            nbrs[px].push((0, size, *p as i64, py));
            if px != py {
                nbrs[py].push((0, size, *p as i64, px));
            }
        }
    }
    for (kind, list) in [(1, &t.h_pairs), (2, &t.delta_pairs)] {
        for (x, y) in list {
            let (px, py) = (pos[x], pos[y]);
            nbrs[px].push((kind, 0, 1, py));
            nbrs[py].push((kind, 0, 1, px));
        }
    }

    loop {
        let keys: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut d: Vec<[i64; 4]> = nbrs[i]
                    .iter()
                    .map(|&(k, s, p, o)| [k, s, p, colors[o] as i64])
                    .collect();
                d.sort_unstable();
                let mut key = vec![colors[i] as i64];
                key.extend(d.into_iter().flatten());
                key
            })
            .collect();
        let next = rank_keys(&keys);
        let m = count_distinct(&next);
        colors = next;
        if m == ncolors || m == n {
            break;
        }
        ncolors = m;
    }
    colors
}

fn rank_keys(keys: &[Vec<i64>]) -> Vec<usize> {
    let mut uniq: Vec<&Vec<i64>> = keys.iter().collect();
    uniq.sort();
    uniq.dedup();
    keys.iter().map(|k| uniq.binary_search(&k).unwrap()).collect()
}

fn count_distinct(c: &[usize]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Canonical representative of the equivalence class of `t`.
pub fn canonicalize(t: &Term) -> Result<Term, TermError> {
    t.validate()?;
    let idx: Vec<Idx> = t.index_set().into_iter().collect();
    if idx.is_empty() {
        let mut out = t.clone();
        sort_factors(&mut out);
        return Ok(out);
    }
    let colors = refine_colors(t, &idx);

    let mut classes: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut order: Vec<usize> = (0..idx.len()).collect();
    order.sort_by_key(|&i| (colors[i], i));
    for i in order {
        match classes.last_mut() {
            Some((c, members)) if *c == colors[i] => members.push(i),
            _ => classes.push((colors[i], vec![i])),
        }
    }
    let class_perms: Vec<Vec<Vec<usize>>> = classes.iter().map(|(_, m)| permutations(m)).collect();

    let mut label = vec![0 as Idx; idx.len()];
    let mut best: Option<Term> = None;
    let mut choice = vec![0usize; class_perms.len()];
    loop {
        let mut next_label = 0;
        for (ci, perms) in class_perms.iter().enumerate() {
            for &p in &perms[choice[ci]] {
                label[p] = next_label;
                next_label += 1;
            }
        }
        let lookup: HashMap<Idx, Idx> = idx.iter().enumerate().map(|(i, &v)| (v, label[i])).collect();
        let mut cand = t.relabel(|v| lookup[&v]);
        sort_factors(&mut cand);
        let better = match &best {
            None => true,
            Some(b) => structure_key(&cand) < structure_key(b),
        };
        if better {
            best = Some(cand);
        }
        // Odometer over the per-class permutation choices.
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(best.expect("at least one labeling"));
            }
            choice[k] += 1;
            if choice[k] < class_perms[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Labels in canonical order of decreasing occurrence count, used by callers
/// that need "the" distinguished indices of a canonical term.
pub fn indices_by_occurrence(t: &Term) -> Vec<Idx> {
    let mut v: Vec<Idx> = t.index_set().into_iter().collect();
    v.sort_by_key(|&i| (Reverse(t.occurrences(i)), i));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plain(entries: &[(Idx, Idx)]) -> Term {
        Term::leading_plain(GreenProduct::from_entries(entries.iter().copied()))
    }

    #[test]
    fn relabels_to_small_integers() {
        let t = plain(&[(7, 3), (3, 9), (9, 7)]);
        let c = canonicalize(&t).unwrap();
        assert_eq!(c.index_set().into_iter().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(canonicalize(&c).unwrap(), c);
    }

    #[test]
    fn known_equivalent_pair() {
        // G_vb^2 G_bb G_aa^2  vs  G_va^2 G_aa G_bb^2 with v=0, a=1, b=2
        let t1 = plain(&[(0, 2), (0, 2), (2, 2), (1, 1), (1, 1)]);
        let t2 = plain(&[(0, 1), (0, 1), (1, 1), (2, 2), (2, 2)]);
        assert_eq!(canonicalize(&t1).unwrap(), canonicalize(&t2).unwrap());
    }

    #[test]
    fn four_occurrence_indices_come_first() {
        // b (=5) occurs four times, a (=2) twice.
        let t = plain(&[(2, 5), (2, 5), (5, 5)]);
        let c = canonicalize(&t).unwrap();
        assert_eq!(c.occurrences(0), 4);
    }

    #[test]
    fn non_isomorphic_terms_differ() {
        let t1 = plain(&[(0, 0), (1, 1)]);
        let t2 = plain(&[(0, 1), (0, 1)]);
        assert_ne!(canonicalize(&t1).unwrap(), canonicalize(&t2).unwrap());
    }
}
