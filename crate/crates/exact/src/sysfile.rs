//! Plain-text system and solution files.
//!
//! ```text
//! case m
//! rows 110
//! cols 138
//! nnz 712
//! 0 0 -1/1
//! ...
//! rhs 4 12/1
//! ```
//!
//! Triplets are `row col num/den` in column-major order. A solution file
//! uses `cols`, `nnz` and `x col num/den` lines. Writing then reading is the
//! identity, and reading then writing reproduces the input byte for byte.

use std::fmt::Write as _;

use crate::matrix::{SparseRationalMatrix, SparseVec};
use crate::rational::Rational;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("declared {what} = {declared} but found {found}")]
    CountMismatch {
        what: &'static str,
        declared: usize,
        found: usize,
    },
    #[error(transparent)]
    Linalg(#[from] crate::LinalgError),
}

/// A system `A x = b` tagged with a free-form case label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub case: String,
    pub matrix: SparseRationalMatrix,
    pub rhs: SparseVec,
}

impl LinearSystem {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "case {}", self.case).unwrap();
        writeln!(s, "rows {}", self.matrix.nrows()).unwrap();
        writeln!(s, "cols {}", self.matrix.ncols()).unwrap();
        writeln!(s, "nnz {}", self.matrix.nnz()).unwrap();
        for (i, j, v) in self.matrix.triplets() {
            writeln!(s, "{i} {j} {v}").unwrap();
        }
        for (i, v) in self.rhs.iter() {
            writeln!(s, "rhs {i} {v}").unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let mut header = |key: &str| -> Result<String, FormatError> {
            let (n, l) = lines.next().ok_or(FormatError::Syntax {
                line: 0,
                msg: format!("missing {key} header"),
            })?;
            let rest = l.strip_prefix(key).and_then(|r| r.strip_prefix(' '));
            rest.map(|r| r.trim().to_string()).ok_or(FormatError::Syntax {
                line: n + 1,
                msg: format!("expected `{key} ...`"),
            })
        };
        let case = header("case")?;
        let rows = parse_usize(&header("rows")?, 2)?;
        let cols = parse_usize(&header("cols")?, 3)?;
        let nnz = parse_usize(&header("nnz")?, 4)?;
        let mut triplets = Vec::with_capacity(nnz);
        let mut rhs = Vec::new();
        for (n, l) in lines {
            let toks: Vec<&str> = l.split_whitespace().collect();
            let bad = |msg: &str| FormatError::Syntax {
                line: n + 1,
                msg: msg.to_string(),
            };
            match toks.as_slice() {
                ["rhs", i, v] => {
                    rhs.push((parse_usize(i, n + 1)?, parse_rat(v, n + 1)?));
                }
                [i, j, v] => {
                    if !rhs.is_empty() {
                        return Err(bad("matrix entry after rhs section"));
                    }
                    triplets.push((parse_usize(i, n + 1)?, parse_usize(j, n + 1)?, parse_rat(v, n + 1)?));
                }
                _ => return Err(bad("expected `row col value` or `rhs row value`")),
            }
        }
        if triplets.len() != nnz {
            return Err(FormatError::CountMismatch {
                what: "nnz",
                declared: nnz,
                found: triplets.len(),
            });
        }
        if let Some((i, _)) = rhs.iter().find(|(i, _)| *i >= rows) {
            return Err(FormatError::Syntax {
                line: 0,
                msg: format!("rhs row {i} out of range"),
            });
        }
        let matrix = SparseRationalMatrix::from_triplets(rows, cols, triplets)?;
        Ok(Self {
            case,
            matrix,
            rhs: SparseVec::from_pairs(rhs),
        })
    }
}

pub fn solution_to_text(x: &SparseVec, cols: usize) -> String {
    let mut s = String::new();
    writeln!(s, "cols {cols}").unwrap();
    writeln!(s, "nnz {}", x.nnz()).unwrap();
    for (j, v) in x.iter() {
        writeln!(s, "x {j} {v}").unwrap();
    }
    s
}

/// Returns the solution vector and its declared length.
pub fn parse_solution(text: &str) -> Result<(SparseVec, usize), FormatError> {
    let mut cols = None;
    let mut nnz = None;
    let mut entries = Vec::new();
    for (n, l) in text.lines().enumerate() {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["cols", c] => cols = Some(parse_usize(c, n + 1)?),
            ["nnz", c] => nnz = Some(parse_usize(c, n + 1)?),
            ["x", j, v] => entries.push((parse_usize(j, n + 1)?, parse_rat(v, n + 1)?)),
            _ => {
                return Err(FormatError::Syntax {
                    line: n + 1,
                    msg: "expected `cols`, `nnz` or `x col value`".into(),
                })
            }
        }
    }
    let cols = cols.ok_or(FormatError::Syntax {
        line: 0,
        msg: "missing cols header".into(),
    })?;
    if let Some(d) = nnz {
        if d != entries.len() {
            return Err(FormatError::CountMismatch {
                what: "nnz",
                declared: d,
                found: entries.len(),
            });
        }
    }
    Ok((SparseVec::from_pairs(entries), cols))
}

fn parse_usize(s: &str, line: usize) -> Result<usize, FormatError> {
    s.parse().map_err(|_| FormatError::Syntax {
        line,
        msg: format!("bad integer {s:?}"),
    })
}

fn parse_rat(s: &str, line: usize) -> Result<Rational, FormatError> {
    s.parse().map_err(|_| FormatError::Syntax {
        line,
        msg: format!("bad rational {s:?}"),
    })
}
