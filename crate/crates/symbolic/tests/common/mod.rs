#![allow(dead_code)]

use gft_exact::Rational;
use gft_symbolic::{CoeffPoly, GreenProduct, Idx, Monomial, Term};
use proptest::prelude::*;
use rand::Rng;

pub fn alpha() -> CoeffPoly {
    CoeffPoly::monomial(Rational::one(), Monomial::alpha())
}

/// Random term on at most `max_idx` indices and `max_entries` Green entries,
/// spread over one factor (plain) or up to three Dim-factors.
pub fn random_term<R: Rng>(rng: &mut R, max_idx: u32, max_entries: usize, observable: bool) -> Term {
    let n = rng.random_range(1..=max_idx);
    let entries = rng.random_range(1..=max_entries);
    let nf = if observable { rng.random_range(1..=3usize) } else { 1 };
    let mut factors = vec![GreenProduct::new(); nf];
    for _ in 0..entries {
        let x = rng.random_range(0..n);
        let y = rng.random_range(0..n);
        factors[rng.random_range(0..nf)].insert(x, y, 1);
    }
    if observable {
        Term::with_observable(alpha(), 1, 2, factors)
    } else {
        Term::plain(alpha(), 1, 2, factors.pop().unwrap())
    }
}

/// Image of `t` under a random bijection of its index set onto a random
/// subset of `0..span`.
pub fn random_relabel<R: Rng>(rng: &mut R, t: &Term, span: u32) -> Term {
    let idx: Vec<Idx> = t.index_set().into_iter().collect();
    let mut pool: Vec<Idx> = (0..span.max(idx.len() as u32)).collect();
    for i in (1..pool.len()).rev() {
        pool.swap(i, rng.random_range(0..=i));
    }
    t.relabel(|v| pool[idx.iter().position(|&w| w == v).unwrap()])
}

/// Proptest strategy: entry list over `n` indices.
pub fn entries(n: u32, max_entries: usize) -> impl Strategy<Value = Vec<(Idx, Idx)>> {
    prop::collection::vec((0..n, 0..n), 1..=max_entries)
}

/// Proptest strategy for a permutation of `0..n`.
pub fn permutation(n: u32) -> impl Strategy<Value = Vec<Idx>> {
    Just((0..n).collect::<Vec<Idx>>()).prop_shuffle()
}

pub fn plain(es: &[(Idx, Idx)]) -> Term {
    Term::plain(alpha(), 1, 2, GreenProduct::from_entries(es.iter().copied()))
}
