//! Exact Gaussian elimination on an augmented system `[A | b]`.
//!
//! Two pivot strategies are provided. [`PivotStrategy::SmallestPivot`] scans
//! the whole active submatrix for the entry of least magnitude, which keeps
//! numerators and denominators small on dense-ish systems.
//! [`PivotStrategy::FirstNonzero`] reduces rows one at a time against the
//! pivots found so far and takes the first surviving column as the new
//! pivot; it never scans the active submatrix and is the fast path for large
//! sparse systems.

use std::collections::{BTreeSet, HashMap};

use crate::matrix::{SparseRationalMatrix, SparseVec};
use crate::rational::Rational;
use crate::LinalgError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PivotStrategy {
    SmallestPivot,
    FirstNonzero,
}

impl PivotStrategy {
    /// Column count at or below which [`PivotStrategy::auto`] picks the
    /// smallest-pivot search.
    pub const SMALL_SYSTEM_COLS: usize = 500;

    pub fn auto(ncols: usize) -> Self {
        if ncols <= Self::SMALL_SYSTEM_COLS {
            PivotStrategy::SmallestPivot
        } else {
            PivotStrategy::FirstNonzero
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PivotStrategy::SmallestPivot => "smallest",
            PivotStrategy::FirstNonzero => "first",
        }
    }
}

impl std::str::FromStr for PivotStrategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "smallest" => Ok(PivotStrategy::SmallestPivot),
            "first" => Ok(PivotStrategy::FirstNonzero),
            other => Err(format!("unknown pivot strategy {other:?} (expected smallest|first)")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EliminationOptions {
    pub strategy: PivotStrategy,
    /// Bail out once the stored pivot rows hold more nonzeros than this.
    pub fill_cap: usize,
}

impl EliminationOptions {
    pub const DEFAULT_FILL_CAP: usize = 10_000_000;

    pub fn new(strategy: PivotStrategy) -> Self {
        Self {
            strategy,
            fill_cap: Self::DEFAULT_FILL_CAP,
        }
    }

    pub fn auto(ncols: usize) -> Self {
        Self::new(PivotStrategy::auto(ncols))
    }
}

/// One pivot: the original row it came from, its column, and the reduced
/// row. Column index `ncols` of `row` holds the right-hand side.
#[derive(Clone, Debug)]
pub struct Pivot {
    pub source_row: usize,
    pub col: usize,
    pub row: SparseVec,
}

#[derive(Clone, Debug, Default)]
pub struct PivotLog {
    /// `(source_row, col)` in the order pivots were taken.
    pub sequence: Vec<(usize, usize)>,
    /// Largest number of nonzeros held by pivot rows at any time.
    pub peak_nnz: usize,
    /// Largest numerator+denominator bit length seen in a pivot row.
    pub max_height_bits: u64,
}

/// Result of eliminating `[A | b]`.
///
/// `pivots` is ordered so that each pivot row has nonzeros only in its own
/// column, in non-pivot columns, and in pivot columns of pivots that come
/// later in the list. Back substitution therefore walks it in reverse.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub ncols: usize,
    pub strategy: PivotStrategy,
    pub pivots: Vec<Pivot>,
    /// A row of `A` that reduced to zero while its right-hand side did not.
    pub inconsistent_row: Option<usize>,
    pub log: PivotLog,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Rank of the augmented matrix `[A | b]`.
    pub fn augmented_rank(&self) -> usize {
        self.rank() + usize::from(self.inconsistent_row.is_some())
    }

    /// Back substitution with free variables set to zero. `None` when the
    /// system is inconsistent.
    pub fn back_substitute(&self) -> Option<Vec<Rational>> {
        if self.inconsistent_row.is_some() {
            return None;
        }
        let rhs = self.ncols;
        let mut x = vec![Rational::zero(); self.ncols];
        for p in self.pivots.iter().rev() {
            let mut acc = Rational::zero();
            let mut diag = Rational::zero();
            for (c, v) in p.row.iter() {
                if c == rhs {
                    acc += v;
                } else if c == p.col {
                    diag = v.clone();
                } else if !x[c].is_zero() {
                    acc -= &(v * &x[c]);
                }
            }
            x[p.col] = &acc / &diag;
        }
        Some(x)
    }
}

/// Eliminate `A` augmented with `b` (pass an empty `b` for a plain rank
/// computation).
pub fn eliminate(
    a: &SparseRationalMatrix,
    b: &SparseVec,
    opts: EliminationOptions,
) -> Result<Echelon, LinalgError> {
    if let Some(r) = b.max_index() {
        if r >= a.nrows() {
            return Err(LinalgError::DimensionMismatch {
                rows: a.nrows(),
                rhs: r + 1,
            });
        }
    }
    let ncols = a.ncols();
    let mut rows = a.to_rows();
    for (i, v) in b.iter() {
        let mut e = std::mem::take(&mut rows[i]).into_entries();
        e.push((ncols, v.clone()));
        rows[i] = SparseVec::from_sorted_unchecked(e);
    }
    match opts.strategy {
        PivotStrategy::SmallestPivot => smallest_pivot(rows, ncols, opts.fill_cap),
        PivotStrategy::FirstNonzero => first_nonzero(rows, ncols, opts.fill_cap),
    }
}

/// Rank of `A` alone.
pub fn rank(a: &SparseRationalMatrix, strategy: PivotStrategy) -> Result<usize, LinalgError> {
    Ok(eliminate(a, &SparseVec::new(), EliminationOptions::new(strategy))?.rank())
}

/// `x - f * y` over sorted sparse rows.
fn axpy(x: &[(usize, Rational)], f: &Rational, y: &[(usize, Rational)]) -> Vec<(usize, Rational)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(f * &y[j].1)));
            j += 1;
        } else {
            let v = x[i].1.sub_mul(f, &y[j].1);
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn row_height(row: &SparseVec) -> u64 {
    row.iter().map(|(_, v)| v.height_bits()).max().unwrap_or(0)
}

fn smallest_pivot(rows: Vec<SparseVec>, ncols: usize, fill_cap: usize) -> Result<Echelon, LinalgError> {
    let mut active: Vec<(usize, Vec<(usize, Rational)>)> = rows
        .into_iter()
        .enumerate()
        .filter(|(_, r)| !r.is_empty())
        .map(|(i, r)| (i, r.into_entries()))
        .collect();
    let mut pivots = Vec::new();
    let mut log = PivotLog::default();
    let mut stored = 0usize;

    loop {
        // Entry of least magnitude in the coefficient part of the active rows.
        let mut best: Option<(usize, usize)> = None; // (position in active, position in row)
        for (ai, (_, row)) in active.iter().enumerate() {
            for (ei, (c, v)) in row.iter().enumerate() {
                if *c == ncols {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, be)) => v.cmp_abs(&active[bi].1[be].1).is_lt(),
                };
                if better {
                    best = Some((ai, ei));
                }
            }
        }
        let Some((ai, ei)) = best else { break };
        let (src, prow) = active.swap_remove(ai);
        let col = prow[ei].0;
        let inv = prow[ei].1.recip();
        for (_, row) in active.iter_mut() {
            if let Ok(pos) = row.binary_search_by_key(&col, |(c, _)| *c) {
                let f = &row[pos].1 * &inv;
                *row = axpy(row, &f, &prow);
            }
        }
        active.retain(|(_, r)| !r.is_empty());
        // Keep the deterministic scan order independent of swap_remove.
        active.sort_by_key(|(i, _)| *i);

        let row = SparseVec::from_sorted_unchecked(prow);
        stored += row.nnz();
        log.peak_nnz = log.peak_nnz.max(stored + active.iter().map(|(_, r)| r.len()).sum::<usize>());
        log.max_height_bits = log.max_height_bits.max(row_height(&row));
        if stored > fill_cap {
            return Err(LinalgError::FillInCap { cap: fill_cap, reached: stored });
        }
        log.sequence.push((src, col));
        pivots.push(Pivot { source_row: src, col, row });
    }
    // Whatever is left has only right-hand-side entries.
    let inconsistent_row = active.first().map(|(i, _)| *i);
    Ok(Echelon {
        ncols,
        strategy: PivotStrategy::SmallestPivot,
        pivots,
        inconsistent_row,
        log,
    })
}

fn first_nonzero(rows: Vec<SparseVec>, ncols: usize, fill_cap: usize) -> Result<Echelon, LinalgError> {
    // Pivot rows keyed by column, normalized to a unit pivot.
    let mut by_col: HashMap<usize, SparseVec> = HashMap::new();
    let mut source: HashMap<usize, usize> = HashMap::new();
    let mut log = PivotLog::default();
    let mut stored = 0usize;
    let mut inconsistent_row = None;

    // Sparse accumulator reused across rows.
    let mut dense: Vec<Rational> = vec![Rational::zero(); ncols + 1];
    let mut live: BTreeSet<usize> = BTreeSet::new();

    for (src, row) in rows.into_iter().enumerate() {
        if row.is_empty() {
            continue;
        }
        for (c, v) in row.iter() {
            dense[c] = v.clone();
            live.insert(c);
        }
        let mut cursor = 0usize;
        let mut new_pivot = None;
        while let Some(&c) = live.range(cursor..).next() {
            cursor = c + 1;
            if c == ncols {
                break;
            }
            let Some(p) = by_col.get(&c) else {
                if new_pivot.is_none() {
                    new_pivot = Some(c);
                }
                continue;
            };
            let f = std::mem::take(&mut dense[c]);
            live.remove(&c);
            for (pc, pv) in p.iter().skip(1) {
                let nv = dense[pc].sub_mul(&f, pv);
                if nv.is_zero() {
                    live.remove(&pc);
                } else {
                    live.insert(pc);
                }
                dense[pc] = nv;
            }
        }
        let entries: Vec<(usize, Rational)> = live
            .iter()
            .map(|&c| (c, std::mem::take(&mut dense[c])))
            .collect();
        live.clear();
        match new_pivot {
            Some(col) => {
                let inv = entries[0].1.recip();
                debug_assert_eq!(entries[0].0, col);
                let normalized: Vec<(usize, Rational)> =
                    entries.into_iter().map(|(c, v)| (c, &v * &inv)).collect();
                let row = SparseVec::from_sorted_unchecked(normalized);
                stored += row.nnz();
                log.peak_nnz = log.peak_nnz.max(stored);
                log.max_height_bits = log.max_height_bits.max(row_height(&row));
                if stored > fill_cap {
                    return Err(LinalgError::FillInCap { cap: fill_cap, reached: stored });
                }
                log.sequence.push((src, col));
                source.insert(col, src);
                by_col.insert(col, row);
            }
            None => {
                if !entries.is_empty() && inconsistent_row.is_none() {
                    inconsistent_row = Some(src);
                }
            }
        }
    }

    // Ascending pivot column: each row only references later pivots.
    let mut cols: Vec<usize> = by_col.keys().copied().collect();
    cols.sort_unstable();
    let pivots = cols
        .into_iter()
        .map(|col| Pivot {
            source_row: source[&col],
            col,
            row: by_col.remove(&col).expect("pivot row"),
        })
        .collect();
    Ok(Echelon {
        ncols,
        strategy: PivotStrategy::FirstNonzero,
        pivots,
        inconsistent_row,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn identity_rank_both_strategies() {
        for n in [0, 1, 5, 17] {
            let m = SparseRationalMatrix::identity(n);
            assert_eq!(rank(&m, PivotStrategy::SmallestPivot).unwrap(), n);
            assert_eq!(rank(&m, PivotStrategy::FirstNonzero).unwrap(), n);
        }
    }

    #[test]
    fn dependent_rows_reduce_rank() {
        let m = SparseRationalMatrix::from_dense(&[
            vec![r(1), r(2), r(3)],
            vec![r(2), r(4), r(6)],
            vec![r(0), r(1), r(1)],
        ]);
        assert_eq!(rank(&m, PivotStrategy::SmallestPivot).unwrap(), 2);
        assert_eq!(rank(&m, PivotStrategy::FirstNonzero).unwrap(), 2);
    }

    #[test]
    fn inconsistent_system_detected() {
        let m = SparseRationalMatrix::from_dense(&[vec![r(1), r(1)], vec![r(2), r(2)]]);
        let b = SparseVec::from_pairs([(0, r(1)), (1, r(3))]);
        for s in [PivotStrategy::SmallestPivot, PivotStrategy::FirstNonzero] {
            let e = eliminate(&m, &b, EliminationOptions::new(s)).unwrap();
            assert_eq!(e.rank(), 1);
            assert_eq!(e.augmented_rank(), 2);
            assert!(e.back_substitute().is_none());
        }
    }

    #[test]
    fn fill_cap_bails_out() {
        let m = SparseRationalMatrix::identity(10);
        let opts = EliminationOptions {
            strategy: PivotStrategy::FirstNonzero,
            fill_cap: 3,
        };
        assert!(matches!(
            eliminate(&m, &SparseVec::new(), opts),
            Err(LinalgError::FillInCap { .. })
        ));
    }
}
