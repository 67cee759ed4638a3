//! Column-sparse rational matrices and sparse vectors.

use std::collections::BTreeMap;

use crate::rational::Rational;
use crate::LinalgError;

/// A sparse vector stored as `(index, value)` pairs sorted by index, with no
/// stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from arbitrary pairs; duplicates are summed and zeros dropped.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Rational)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, v) in pairs {
            let slot = acc.entry(i).or_insert_with(Rational::zero);
            *slot += &v;
        }
        Self {
            entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    /// Caller guarantees sorted, unique indices and no zeros.
    pub(crate) fn from_sorted_unchecked(entries: Vec<(usize, Rational)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(_, v)| !v.is_zero()));
        Self { entries }
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Rational)> {
        self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Rational {
        match self.entries.binary_search_by_key(&i, |(k, _)| *k) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    /// Dense copy of length `len`.
    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }
}

/// An exact `rows × cols` matrix stored column by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseRationalMatrix {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl SparseRationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let cols = (0..n)
            .map(|i| SparseVec::from_sorted_unchecked(vec![(i, Rational::one())]))
            .collect();
        Self { rows: n, cols }
    }

    /// Build from columns; every row index must be `< rows`.
    pub fn from_columns(rows: usize, cols: Vec<SparseVec>) -> Result<Self, LinalgError> {
        for (j, c) in cols.iter().enumerate() {
            if let Some(r) = c.max_index() {
                if r >= rows {
                    return Err(LinalgError::IndexOutOfRange { row: r, col: j });
                }
            }
        }
        Ok(Self { rows, cols })
    }

    /// Build from `(row, col, value)` triplets; a repeated position is an error.
    pub fn from_triplets(
        rows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self, LinalgError> {
        let mut buckets: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); ncols];
        for (r, c, v) in triplets {
            if r >= rows || c >= ncols {
                return Err(LinalgError::IndexOutOfRange { row: r, col: c });
            }
            if buckets[c].insert(r, v).is_some() {
                return Err(LinalgError::DuplicateEntry { row: r, col: c });
            }
        }
        let cols = buckets
            .into_iter()
            .map(|b| SparseVec::from_sorted_unchecked(b.into_iter().filter(|(_, v)| !v.is_zero()).collect()))
            .collect();
        Ok(Self { rows, cols })
    }

    pub fn from_dense(data: &[Vec<Rational>]) -> Self {
        let rows = data.len();
        let ncols = data.first().map_or(0, |r| r.len());
        let cols = (0..ncols)
            .map(|j| {
                SparseVec::from_sorted_unchecked(
                    (0..rows)
                        .filter(|&i| !data[i][j].is_zero())
                        .map(|i| (i, data[i][j].clone()))
                        .collect(),
                )
            })
            .collect();
        Self { rows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(SparseVec::nnz).sum()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.cols[j].get(i)
    }

    /// Triplets in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(i, v)| (i, j, v)))
    }

    /// Row-major copy: one sparse vector per row, indexed by column.
    pub fn to_rows(&self) -> Vec<SparseVec> {
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c.iter() {
                rows[i].push((j, v.clone()));
            }
        }
        rows.into_iter().map(SparseVec::from_sorted_unchecked).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.ncols()]; self.rows];
        for (i, j, v) in self.triplets() {
            out[i][j] = v.clone();
        }
        out
    }

    /// Append a column (used to form augmented matrices).
    pub fn with_column(&self, col: SparseVec) -> Result<Self, LinalgError> {
        let mut cols = self.cols.clone();
        cols.push(col);
        Self::from_columns(self.rows, cols)
    }
}
