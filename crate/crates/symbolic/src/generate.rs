//! Identity generation over a start set.

use std::collections::{BTreeMap, HashSet};

use gft_exact::Rational;
use serde::Serialize;

use crate::classify::Classification;
use crate::container::{ClassId, TermContainer};
use crate::rules::{rule1, rule2, rule3, Expansion, RuleError, RuleKind, Site};
use crate::start::enumerate_start_terms;
use crate::term::Term;
use crate::Case;

/// Which start set and which rule conditions to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenerateConfig {
    pub case: Case,
    pub n_max: u32,
    /// Rule 2 is applied when `#I` is at most this.
    pub rule2_max_indices: usize,
    /// Expand start terms on the rayon pool (ignored without `parallel`).
    pub parallel: bool,
}

impl GenerateConfig {
    pub fn new(case: Case, n_max: u32) -> Self {
        Self {
            case,
            n_max,
            rule2_max_indices: 3,
            parallel: true,
        }
    }

    /// Rule 3 with index `v` is applied when `v` occurs fewer than four times
    /// (no observable) or at most twice (observable).
    fn rule3_allowed(&self, t: &Term, v: u32) -> bool {
        let occ = t.occurrences(v);
        match self.case {
            Case::M => occ < 4,
            Case::F => occ <= 2,
        }
    }
}

/// One identity `0 = Σ c_l T_l` over basis classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    /// Position of the start term in the start list.
    pub start: usize,
    pub rule: RuleKind,
    pub site: Site,
    /// `(class, coefficient)` sorted by class, no zeros.
    pub entries: Vec<(ClassId, Rational)>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GenerationStats {
    pub start_terms: usize,
    pub rule_applications: usize,
    pub trivial: usize,
    pub duplicates: usize,
    pub dropped_nonleading: BTreeMap<String, usize>,
}

#[derive(Debug)]
pub struct Generated {
    pub config: GenerateConfig,
    pub start_terms: Vec<Term>,
    pub identities: Vec<Identity>,
    pub basis: TermContainer,
    pub stats: GenerationStats,
}

/// Every rule application prescribed for one (canonical) start term, in
/// order R1, R1′ per site, then R2, R3-a, R3-b per factor.
pub fn expand_start(t: &Term, cfg: &GenerateConfig) -> Result<Vec<Expansion>, RuleError> {
    let case = cfg.case;
    let mut out = Vec::new();
    for (fi, f) in t.factors.iter().enumerate() {
        for &((x, y), _) in f.entries() {
            if x != y {
                out.push(rule1(t, fi, (x, y), false, case)?);
                out.push(rule1(t, fi, (x, y), true, case)?);
            }
        }
    }
    let n = t.num_indices();
    // Canonical labels put the most frequent indices first: a = 0, b = 1.
    let has = |v: u32| t.index_set().contains(&v);
    for fi in 0..t.factors.len() {
        if n <= cfg.rule2_max_indices {
            out.push(rule2(t, fi, case)?);
        }
        if has(0) && cfg.rule3_allowed(t, 0) {
            out.push(rule3(t, fi, 0, false, case)?);
        }
        if has(1) && cfg.rule3_allowed(t, 1) {
            out.push(rule3(t, fi, 1, true, case)?);
        }
    }
    Ok(out)
}

/// Generate identities for every start term and register basis classes in
/// generation order. Expansion runs data-parallel per start term; basis
/// registration is sequential.
pub fn generate_all(cfg: GenerateConfig) -> Result<Generated, RuleError> {
    let start_terms = enumerate_start_terms(cfg.n_max, cfg.case);
    generate_from(cfg, start_terms)
}

pub fn generate_from(cfg: GenerateConfig, start_terms: Vec<Term>) -> Result<Generated, RuleError> {
    let expanded: Vec<Result<Vec<Expansion>, RuleError>> =
        crate::map_with(&start_terms, |t| expand_start(t, &cfg), cfg.parallel);

    let mut basis = TermContainer::new();
    let mut identities = Vec::new();
    let mut seen: HashSet<Vec<(ClassId, Rational)>> = HashSet::new();
    let mut stats = GenerationStats {
        start_terms: start_terms.len(),
        ..Default::default()
    };
    let mut dropped: BTreeMap<Classification, usize> = BTreeMap::new();
    for (si, exps) in expanded.into_iter().enumerate() {
        for e in exps? {
            stats.rule_applications += 1;
            for (c, n) in &e.dropped {
                *dropped.entry(*c).or_default() += n;
            }
            if e.is_trivial() {
                stats.trivial += 1;
                continue;
            }
            let mut merged: BTreeMap<ClassId, Rational> = BTreeMap::new();
            for (term, c) in e.scalar_terms()? {
                *merged.entry(basis.insert(&term)?).or_insert_with(Rational::zero) += &c;
            }
            let entries: Vec<(ClassId, Rational)> = merged.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if entries.is_empty() {
                stats.trivial += 1;
                continue;
            }
            if !seen.insert(entries.clone()) {
                stats.duplicates += 1;
                continue;
            }
            identities.push(Identity {
                start: si,
                rule: e.rule,
                site: e.site,
                entries,
            });
        }
    }
    stats.dropped_nonleading = dropped.into_iter().map(|(c, n)| (c.to_string(), n)).collect();
    Ok(Generated {
        config: cfg,
        start_terms,
        identities,
        basis,
        stats,
    })
}
