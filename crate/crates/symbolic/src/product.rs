//! Products of Green function entries `Π G_{xy}^{p}`.

use std::fmt;

/// Summation index label.
pub type Idx = u32;

/// Unordered index pair stored as `(min, max)`.
pub type Pair = (Idx, Idx);

#[inline]
pub fn pair(x: Idx, y: Idx) -> Pair {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

/// A product of symmetric Green function entries. Entries are kept sorted by
/// pair with strictly positive powers; the empty product is `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GreenProduct {
    entries: Vec<(Pair, u32)>,
}

impl GreenProduct {
    pub fn new() -> Self {
        Self::default()
    }

    /// One factor per listed entry; repeated entries raise the power.
    pub fn from_entries<I: IntoIterator<Item = (Idx, Idx)>>(it: I) -> Self {
        let mut p = Self::new();
        for (x, y) in it {
            p.insert(x, y, 1);
        }
        p
    }

    /// Build from `(pair, power)` entries, validating them.
    pub fn from_powers<I: IntoIterator<Item = (Pair, u32)>>(it: I) -> Result<Self, crate::TermError> {
        let mut p = Self::new();
        for ((x, y), e) in it {
            if e == 0 {
                return Err(crate::TermError::ZeroPower);
            }
            p.insert(x, y, e);
        }
        Ok(p)
    }

    pub fn entries(&self) -> &[(Pair, u32)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, x: Idx, y: Idx, power: u32) {
        if power == 0 {
            return;
        }
        let key = pair(x, y);
        match self.entries.binary_search_by_key(&key, |(p, _)| *p) {
            Ok(i) => self.entries[i].1 += power,
            Err(i) => self.entries.insert(i, (key, power)),
        }
    }

    /// Lower the power of `G_{xy}` by one. Returns false if absent.
    pub fn remove_one(&mut self, x: Idx, y: Idx) -> bool {
        let key = pair(x, y);
        match self.entries.binary_search_by_key(&key, |(p, _)| *p) {
            Ok(i) => {
                if self.entries[i].1 == 1 {
                    self.entries.remove(i);
                } else {
                    self.entries[i].1 -= 1;
                }
                true
            }
            Err(_) => false,
        }
    }

    pub fn power(&self, x: Idx, y: Idx) -> u32 {
        let key = pair(x, y);
        self.entries
            .binary_search_by_key(&key, |(p, _)| *p)
            .map_or(0, |i| self.entries[i].1)
    }

    /// Number of entries counted with multiplicity (`n_i`).
    pub fn size(&self) -> u32 {
        self.entries.iter().map(|(_, e)| e).sum()
    }

    /// Number of off-diagonal entries counted with multiplicity.
    pub fn degree(&self) -> u32 {
        self.entries.iter().filter(|((x, y), _)| x != y).map(|(_, e)| e).sum()
    }

    /// Occurrences of `v` as a row or column index.
    pub fn occurrences(&self, v: Idx) -> u32 {
        self.entries
            .iter()
            .map(|((x, y), e)| (u32::from(*x == v) + u32::from(*y == v)) * e)
            .sum()
    }

    /// Occurrences of `v` in off-diagonal entries only.
    pub fn offdiag_occurrences(&self, v: Idx) -> u32 {
        self.entries
            .iter()
            .filter(|((x, y), _)| x != y && (*x == v || *y == v))
            .map(|(_, e)| e)
            .sum()
    }

    pub fn indices(&self) -> impl Iterator<Item = Idx> + '_ {
        self.entries.iter().flat_map(|((x, y), _)| [*x, *y])
    }

    /// Apply an index map, re-sorting the entries.
    pub fn relabel(&self, f: impl Fn(Idx) -> Idx) -> Self {
        let mut v: Vec<(Pair, u32)> = self.entries.iter().map(|((x, y), e)| (pair(f(*x), f(*y)), *e)).collect();
        v.sort_unstable();
        // A non-injective map could merge entries.
        let mut out: Vec<(Pair, u32)> = Vec::with_capacity(v.len());
        for (p, e) in v {
            match out.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => out.push((p, e)),
            }
        }
        Self { entries: out }
    }

    /// Individual entries, one per unit of power.
    pub fn expanded(&self) -> Vec<Pair> {
        self.entries
            .iter()
            .flat_map(|(p, e)| std::iter::repeat_n(*p, *e as usize))
            .collect()
    }
}

impl fmt::Display for GreenProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, ((x, y), e)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if *e == 1 {
                write!(f, "({x},{y})")?;
            } else {
                write!(f, "({x},{y})^{e}")?;
            }
        }
        write!(f, "}}")
    }
}
