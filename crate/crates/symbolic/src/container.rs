//! A store of term equivalence classes with stable class ids.

use std::collections::HashMap;

use crate::equiv::{auid, equivalent, CanonicalKey};
use crate::term::Term;
use crate::TermError;

pub type ClassId = usize;

/// Terms are bucketed by [`auid`]; inside a bucket the exact equivalence
/// search decides membership. Representatives are stored with their
/// coefficient normalized away, so lookups ignore the rational scalar.
#[derive(Clone, Debug, Default)]
pub struct TermContainer {
    buckets: HashMap<CanonicalKey, Vec<ClassId>>,
    reps: Vec<Term>,
    // Exact-representation cache: a repeat of a stored form skips the search.
    seen: HashMap<Term, ClassId>,
}

impl TermContainer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn get(&self, id: ClassId) -> &Term {
        &self.reps[id]
    }

    pub fn iter(&self) -> impl Iterator<Item = (ClassId, &Term)> {
        self.reps.iter().enumerate()
    }

    fn unit(t: &Term) -> Term {
        let mut u = t.clone();
        if let Some((m, _)) = t.coeff.as_monomial() {
            u.coeff = crate::coeff::CoeffPoly::monomial(gft_exact::Rational::one(), *m);
        }
        u
    }

    /// Class id of `t` if an equivalent term is stored.
    pub fn find(&self, t: &Term) -> Result<Option<ClassId>, TermError> {
        let u = Self::unit(t);
        if let Some(&id) = self.seen.get(&u) {
            return Ok(Some(id));
        }
        let key = auid(&u)?;
        if let Some(ids) = self.buckets.get(&key) {
            for &id in ids {
                if equivalent(&self.reps[id], &u)? {
                    return Ok(Some(id));
                }
            }
        }
        Ok(None)
    }

    /// Class id of `t`, registering a new class if needed.
    pub fn insert(&mut self, t: &Term) -> Result<ClassId, TermError> {
        let u = Self::unit(t);
        if let Some(&id) = self.seen.get(&u) {
            return Ok(id);
        }
        let key = auid(&u)?;
        let bucket = self.buckets.entry(key).or_default();
        for &id in bucket.iter() {
            if equivalent(&self.reps[id], &u)? {
                self.seen.insert(u, id);
                return Ok(id);
            }
        }
        let id = self.reps.len();
        bucket.push(id);
        self.reps.push(u.clone());
        self.seen.insert(u, id);
        Ok(id)
    }
}
