//! General terms
//! `c α(t) N^{d_N} / (q^{d_q} N^{#I}) Σ_I δ^{d_δ} E[ h^{p_h} F^{(i₀)}(X) Π_i Dim(Π_l G_{xy}) ]`.
//!
//! The `N^{#I}` normalization is implicit: the summation index set is always
//! the set of indices that appear somewhere in the term. Summing over an
//! index that has dropped out multiplies by `N`, which the normalization
//! absorbs, so `d_N` is unaffected by indices appearing or vanishing.
//!
//! Terms without an observable `F` are represented with `f_order = 1` and a
//! single factor; the differentiation routines are told which reading
//! applies through [`Case`](crate::Case).

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::coeff::{CoeffPoly, Monomial};
use crate::product::{pair, GreenProduct, Idx, Pair};
use crate::TermError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub coeff: CoeffPoly,
    pub d_n: i32,
    pub d_q: u32,
    /// Prefactors `h_{ab}`, sorted.
    pub h_pairs: Vec<Pair>,
    /// Kronecker deltas `δ_{ab}`, sorted.
    pub delta_pairs: Vec<Pair>,
    /// Power of the `(x + iη + χ(t))` prefactor left over from rewriting the
    /// spectral parameter around the edge.
    pub shift: u32,
    /// Derivative order `i₀` of `F`; equals `factors.len()`.
    pub f_order: u32,
    /// The Dim-factors (a single plain product for terms without `F`).
    pub factors: Vec<GreenProduct>,
}

impl Term {
    /// A term without observable: `c α N^{d_N}/(q^{d_q} N^{#I}) Σ E[Π G]`.
    pub fn plain(coeff: CoeffPoly, d_n: i32, d_q: u32, product: GreenProduct) -> Self {
        Self {
            coeff,
            d_n,
            d_q,
            h_pairs: Vec::new(),
            delta_pairs: Vec::new(),
            shift: 0,
            f_order: 1,
            factors: vec![product],
        }
    }

    /// A term `c α N^{d_N}/(q^{d_q} N^{#I}) Σ E[F^{(i₀)}(X) Π Dim(...)]`
    /// with `i₀ = factors.len()`.
    pub fn with_observable(coeff: CoeffPoly, d_n: i32, d_q: u32, factors: Vec<GreenProduct>) -> Self {
        Self {
            coeff,
            d_n,
            d_q,
            h_pairs: Vec::new(),
            delta_pairs: Vec::new(),
            shift: 0,
            f_order: factors.len() as u32,
            factors,
        }
    }

    /// `α(t) N/(q² N^{#I}) Σ E[...]` with unit coefficient, the shape shared by
    /// start terms and everything the expansion rules produce.
    pub fn leading_plain(product: GreenProduct) -> Self {
        Self::plain(CoeffPoly::monomial(gft_exact::Rational::one(), Monomial::alpha()), 1, 2, product)
    }

    pub fn leading_observable(factors: Vec<GreenProduct>) -> Self {
        Self::with_observable(
            CoeffPoly::monomial(gft_exact::Rational::one(), Monomial::alpha()),
            1,
            2,
            factors,
        )
    }

    pub fn validate(&self) -> Result<(), TermError> {
        if self.f_order == 0 {
            return Err(TermError::ZeroOrder);
        }
        if self.factors.len() != self.f_order as usize {
            return Err(TermError::FactorCount {
                f_order: self.f_order,
                factors: self.factors.len(),
            });
        }
        for f in &self.factors {
            if f.entries().iter().any(|(_, e)| *e == 0) {
                return Err(TermError::ZeroPower);
            }
            if f.entries().iter().any(|((x, y), _)| x > y) {
                return Err(TermError::UnorderedPair);
            }
        }
        if self.h_pairs.iter().chain(&self.delta_pairs).any(|(x, y)| x > y) {
            return Err(TermError::UnorderedPair);
        }
        Ok(())
    }

    pub fn p_h(&self) -> usize {
        self.h_pairs.len()
    }

    pub fn d_delta(&self) -> usize {
        self.delta_pairs.len()
    }

    pub fn index_set(&self) -> BTreeSet<Idx> {
        let mut s: BTreeSet<Idx> = self.factors.iter().flat_map(|f| f.indices()).collect();
        for (x, y) in self.h_pairs.iter().chain(&self.delta_pairs) {
            s.insert(*x);
            s.insert(*y);
        }
        s
    }

    pub fn num_indices(&self) -> usize {
        self.index_set().len()
    }

    /// Smallest label not used by the term or listed in `avoid`.
    pub fn fresh_index(&self, avoid: &[Idx]) -> Idx {
        let used = self.index_set();
        (0..).find(|i| !used.contains(i) && !avoid.contains(i)).expect("index space exhausted")
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(GreenProduct::degree).sum()
    }

    /// Occurrences of `v` among Green function entries of all factors.
    pub fn occurrences(&self, v: Idx) -> u32 {
        self.factors.iter().map(|f| f.occurrences(v)).sum()
    }

    pub fn offdiag_occurrences(&self, v: Idx) -> u32 {
        self.factors.iter().map(|f| f.offdiag_occurrences(v)).sum()
    }

    /// Some index occurs an odd number of times among the entries.
    pub fn is_unmatched(&self) -> bool {
        self.index_set().into_iter().any(|v| self.occurrences(v) % 2 == 1)
    }

    fn occurrence_profile(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.index_set().into_iter().map(|i| self.occurrences(i)).collect();
        v.sort_unstable();
        v
    }

    /// Every index occurs exactly twice.
    pub fn is_type_0(&self) -> bool {
        self.occurrence_profile().iter().all(|&c| c == 2)
    }

    /// One index occurs four times, all others twice.
    pub fn is_type_a(&self) -> bool {
        let p = self.occurrence_profile();
        p.iter().filter(|&&c| c == 4).count() == 1 && p.iter().all(|&c| c == 2 || c == 4)
    }

    /// Two indices occur four times, all others twice.
    pub fn is_type_ab(&self) -> bool {
        let p = self.occurrence_profile();
        p.iter().filter(|&&c| c == 4).count() == 2 && p.iter().all(|&c| c == 2 || c == 4)
    }

    /// Whether the term is identically zero in the given case. In the
    /// observable case an empty Dim-factor is `Dim(1) = 0`.
    pub fn vanishes(&self, case: crate::Case) -> bool {
        self.coeff.is_zero()
            || (case == crate::Case::F && self.factors.iter().any(GreenProduct::is_empty))
    }

    /// Apply an index map to every field, re-sorting.
    pub fn relabel(&self, f: impl Fn(Idx) -> Idx + Copy) -> Self {
        let mut h: Vec<Pair> = self.h_pairs.iter().map(|(x, y)| pair(f(*x), f(*y))).collect();
        h.sort_unstable();
        let mut d: Vec<Pair> = self.delta_pairs.iter().map(|(x, y)| pair(f(*x), f(*y))).collect();
        d.sort_unstable();
        Self {
            coeff: self.coeff.clone(),
            d_n: self.d_n,
            d_q: self.d_q,
            h_pairs: h,
            delta_pairs: d,
            shift: self.shift,
            f_order: self.f_order,
            factors: self.factors.iter().map(|p| p.relabel(f)).collect(),
        }
    }

    /// The same term with coefficient replaced.
    pub fn with_coeff(&self, coeff: CoeffPoly) -> Self {
        let mut t = self.clone();
        t.coeff = coeff;
        t
    }

    /// Text form `coeff | dN | dQ | [extras] | F^(i0) | {factor} {factor} ...`.
    ///
    /// Extras are space separated `h(a,b)`, `d(a,b)` for `δ_{ab}` and `x^k`
    /// for the spectral shift prefactor.
    pub fn to_text(&self) -> String {
        let mut extras: Vec<String> = Vec::new();
        extras.extend(self.h_pairs.iter().map(|(a, b)| format!("h({a},{b})")));
        extras.extend(self.delta_pairs.iter().map(|(a, b)| format!("d({a},{b})")));
        if self.shift > 0 {
            extras.push(format!("x^{}", self.shift));
        }
        let factors: Vec<String> = self.factors.iter().map(|f| f.to_string()).collect();
        format!(
            "{} | {} | {} | [{}] | F^({}) | {}",
            self.coeff,
            self.d_n,
            self.d_q,
            extras.join(" "),
            self.f_order,
            factors.join(" ")
        )
    }

    pub fn parse_text(s: &str) -> Result<Self, TermError> {
        let bad = |m: &str| TermError::Parse(format!("{m}: {s:?}"));
        let fields: Vec<&str> = s.split(" | ").collect();
        if fields.len() != 6 {
            return Err(bad("expected six `|`-separated fields"));
        }
        let coeff: CoeffPoly = fields[0].parse().map_err(|_| bad("coefficient"))?;
        let d_n: i32 = fields[1].trim().parse().map_err(|_| bad("dN"))?;
        let d_q: u32 = fields[2].trim().parse().map_err(|_| bad("dQ"))?;
        let extras = fields[3]
            .trim()
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| bad("extras"))?;
        let mut h_pairs = Vec::new();
        let mut delta_pairs = Vec::new();
        let mut shift = 0;
        for tok in extras.split_whitespace() {
            if let Some(p) = tok.strip_prefix('h') {
                h_pairs.push(parse_pair(p).ok_or_else(|| bad("h pair"))?);
            } else if let Some(p) = tok.strip_prefix('d') {
                delta_pairs.push(parse_pair(p).ok_or_else(|| bad("delta pair"))?);
            } else if let Some(k) = tok.strip_prefix("x^") {
                shift = k.parse().map_err(|_| bad("shift"))?;
            } else {
                return Err(bad("unknown extra"));
            }
        }
        h_pairs.sort_unstable();
        delta_pairs.sort_unstable();
        let f_order: u32 = fields[4]
            .trim()
            .strip_prefix("F^(")
            .and_then(|x| x.strip_suffix(')'))
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| bad("F order"))?;
        let mut factors = Vec::new();
        for chunk in fields[5].split('}') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let body = chunk.strip_prefix('{').ok_or_else(|| bad("factor"))?;
            let mut entries = Vec::new();
            for e in body.split_whitespace() {
                let (p, pw) = match e.split_once('^') {
                    Some((p, pw)) => (p, pw.parse::<u32>().map_err(|_| bad("power"))?),
                    None => (e, 1),
                };
                entries.push((parse_pair(p).ok_or_else(|| bad("entry"))?, pw));
            }
            factors.push(GreenProduct::from_powers(entries)?);
        }
        let t = Term {
            coeff,
            d_n,
            d_q,
            h_pairs,
            delta_pairs,
            shift,
            f_order,
            factors,
        };
        t.validate()?;
        Ok(t)
    }

    /// JSON export using the field names `F_derivative`, `prod_dict`,
    /// `q_deg`, `N_deg`, `coeff`, `h_list`.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Export<'a> {
            #[serde(rename = "F_derivative")]
            f_derivative: u32,
            prod_dict: Vec<Vec<((Idx, Idx), u32)>>,
            q_deg: u32,
            #[serde(rename = "N_deg")]
            n_deg: i32,
            coeff: String,
            h_list: &'a [Pair],
            delta_list: &'a [Pair],
            shift: u32,
        }
        serde_json::to_value(Export {
            f_derivative: self.f_order,
            prod_dict: self.factors.iter().map(|f| f.entries().to_vec()).collect(),
            q_deg: self.d_q,
            n_deg: self.d_n,
            coeff: self.coeff.to_string(),
            h_list: &self.h_pairs,
            delta_list: &self.delta_pairs,
            shift: self.shift,
        })
        .expect("term serializes")
    }
}

fn parse_pair(s: &str) -> Option<Pair> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some(pair(a.trim().parse().ok()?, b.trim().parse().ok()?))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gft_exact::Rational;

    #[test]
    fn text_round_trip_with_extras() {
        let mut t = Term::with_observable(
            CoeffPoly::monomial(Rational::new(-5, 2), Monomial::kappa(4) * Monomial::alpha()),
            1,
            3,
            vec![
                GreenProduct::from_entries([(0, 0), (0, 1), (0, 1)]),
                GreenProduct::new(),
            ],
        );
        t.h_pairs = vec![(0, 2)];
        t.delta_pairs = vec![(1, 2)];
        t.shift = 1;
        let s = t.to_text();
        assert_eq!(Term::parse_text(&s).unwrap(), t);
    }

    #[test]
    fn type_predicates() {
        // G_ab^2: type-0
        let t = Term::leading_plain(GreenProduct::from_entries([(0, 1), (0, 1)]));
        assert!(t.is_type_0() && !t.is_type_a() && !t.is_unmatched());
        // G_aa G_ab^2: a four times, b twice
        let t = Term::leading_plain(GreenProduct::from_entries([(0, 0), (0, 1), (0, 1)]));
        assert!(t.is_type_a());
        // G_aa G_ab G_bb: unmatched
        let t = Term::leading_plain(GreenProduct::from_entries([(0, 0), (0, 1), (1, 1)]));
        assert!(t.is_unmatched());
    }

    #[test]
    fn validation_rejects_zero_order() {
        let mut t = Term::leading_plain(GreenProduct::new());
        t.f_order = 0;
        assert!(matches!(t.validate(), Err(TermError::ZeroOrder)));
    }
}
