//! Enumeration of start terms: type-0, type-A and type-AB terms with unit
//! coefficient, up to equivalence.

use std::collections::HashSet;

use crate::canon::canonicalize;
use crate::product::{GreenProduct, Idx, Pair};
use crate::term::Term;
use crate::Case;

/// All edge multisets (loops allowed) realizing the degree sequence `deg`.
/// Edges come out sorted; a loop adds two to its vertex's degree.
fn multigraphs(deg: &[u32]) -> Vec<Vec<Pair>> {
    fn rec(rem: &mut [u32], edges: &mut Vec<Pair>, out: &mut Vec<Vec<Pair>>) {
        let Some(x) = rem.iter().position(|&r| r > 0) else {
            out.push(edges.clone());
            return;
        };
        // Edges from the smallest open vertex are emitted consecutively in
        // nondecreasing order, so each multiset is produced once.
        let lo = match edges.last() {
            Some(&(px, py)) if px as usize == x => py as usize,
            _ => x,
        };
        for y in lo..rem.len() {
            let need_ok = if y == x { rem[x] >= 2 } else { rem[y] >= 1 };
            if !need_ok {
                continue;
            }
            if y == x {
                rem[x] -= 2;
            } else {
                rem[x] -= 1;
                rem[y] -= 1;
            }
            edges.push((x as Idx, y as Idx));
            rec(rem, edges, out);
            edges.pop();
            if y == x {
                rem[x] += 2;
            } else {
                rem[x] += 1;
                rem[y] += 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut deg.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// Entry lists of every type-0/A/AB product on exactly `n` indices.
fn products_on(n: usize) -> Vec<Vec<Pair>> {
    let mut out = Vec::new();
    for fours in 0..=n.min(2) {
        let deg: Vec<u32> = (0..n).map(|i| if i < fours { 4 } else { 2 }).collect();
        out.extend(multigraphs(&deg));
    }
    out
}

/// Set partitions of `items` into nonempty blocks (restricted growth strings).
fn set_partitions<T: Clone>(items: &[T]) -> Vec<Vec<Vec<T>>> {
    fn rec<T: Clone>(items: &[T], i: usize, blocks: &mut Vec<Vec<T>>, out: &mut Vec<Vec<Vec<T>>>) {
        if i == items.len() {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(items[i].clone());
            rec(items, i + 1, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![items[i].clone()]);
        rec(items, i + 1, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(items, 0, &mut Vec::new(), &mut out);
    out
}

fn push_unique(t: Term, seen: &mut HashSet<Term>, out: &mut Vec<Term>) {
    let c = canonicalize(&t).expect("start terms are well formed");
    if seen.insert(c.clone()) {
        out.push(c);
    }
}

/// Canonical start terms with at most `n_max` summation indices, sorted by
/// index count and then by canonical structure.
///
/// Without observable the degree must be at least two. With observable the
/// entries range over all partitions into Dim-factors, optionally with one
/// extra empty factor; `#I = 0` contributes `F′(X) Dim(1)`.
pub fn enumerate_start_terms(n_max: u32, case: Case) -> Vec<Term> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let lo = match case {
        Case::M => 1,
        Case::F => 0,
    };
    for n in lo..=n_max as usize {
        for edges in products_on(n) {
            match case {
                Case::M => {
                    let t = Term::leading_plain(GreenProduct::from_entries(edges.iter().copied()));
                    if t.degree() >= 2 {
                        push_unique(t, &mut seen, &mut out);
                    }
                }
                Case::F => {
                    for blocks in set_partitions(&edges) {
                        let mut factors: Vec<GreenProduct> =
                            blocks.iter().map(|b| GreenProduct::from_entries(b.iter().copied())).collect();
                        if !factors.is_empty() {
                            push_unique(Term::leading_observable(factors.clone()), &mut seen, &mut out);
                        }
                        factors.push(GreenProduct::new());
                        push_unique(Term::leading_observable(factors), &mut seen, &mut out);
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| (a.num_indices(), &a.factors).cmp(&(b.num_indices(), &b.factors)));
    out
}
