//! End-to-end certificate that the leading part of the flow derivative is a
//! linear combination of generated identities.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use gft_exact::{
    rank, solution_to_text, solve, verify, EliminationOptions, LinalgError, LinearSystem, PivotStrategy,
    SolveOutcome, SparseRationalMatrix, SparseVec,
};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::assemble::{assemble, provenance_json, AssembleError, AssembledSystem, TargetPolicy};
use crate::flow::{leading_target, FlowError, FlowSign};
use crate::generate::{generate_all, GenerateConfig, GenerationStats, Generated};
use crate::rules::RuleError;
use crate::Case;

#[derive(Clone, Copy, Debug)]
pub struct CancellationConfig {
    pub case: Case,
    pub n_max: u32,
    pub sign: FlowSign,
    /// `None` picks by matrix width.
    pub strategy: Option<PivotStrategy>,
    pub policy: TargetPolicy,
}

impl CancellationConfig {
    /// `nMax = 4` for `m`, strict target mapping.
    pub fn m_case() -> Self {
        Self {
            case: Case::M,
            n_max: 4,
            sign: FlowSign::Derived,
            strategy: None,
            policy: TargetPolicy::Strict,
        }
    }

    /// The observable case at the given `nMax`; below 4 the target is
    /// restricted to reachable basis terms.
    pub fn f_case(n_max: u32) -> Self {
        Self {
            case: Case::F,
            n_max,
            sign: FlowSign::Derived,
            strategy: None,
            policy: if n_max >= 4 { TargetPolicy::Strict } else { TargetPolicy::Restrict },
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CancelError {
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Assemble(#[from] AssembleError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug, Serialize)]
pub struct Infeasibility {
    pub rank: usize,
    pub augmented_rank: usize,
    pub witness_row: usize,
}

/// Outcome of one run. Everything except `wall_time` is deterministic and
/// goes into the JSON form.
#[derive(Clone, Debug, Serialize)]
pub struct CancellationReport {
    pub case: String,
    pub n_max: u32,
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
    pub rank: usize,
    pub strategy: String,
    pub solved: bool,
    pub nonzero_multipliers: usize,
    pub integers_only: bool,
    pub target_terms: usize,
    pub missing_targets: usize,
    pub infeasibility: Option<Infeasibility>,
    pub generation: GenerationStats,
    pub system_sha256: String,
    pub solution_sha256: Option<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl CancellationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_human(&self) -> String {
        let mut lines = vec![
            format!("case {} (nMax = {})", self.case, self.n_max),
            format!("matrix {}x{}, {} nonzeros, rank {}", self.rows, self.cols, self.nnz, self.rank),
            format!(
                "start terms {}, rule applications {}, trivial {}, duplicates {}",
                self.generation.start_terms,
                self.generation.rule_applications,
                self.generation.trivial,
                self.generation.duplicates
            ),
            format!("target terms {} ({} outside basis)", self.target_terms, self.missing_targets),
        ];
        match &self.infeasibility {
            None => lines.push(format!(
                "solved: {} ({} nonzero multipliers, integers only: {})",
                self.solved, self.nonzero_multipliers, self.integers_only
            )),
            Some(i) => lines.push(format!(
                "INFEASIBLE: rank {} -> {} with target appended (row {})",
                i.rank, i.augmented_rank, i.witness_row
            )),
        }
        lines.push(format!("system sha256 {}", self.system_sha256));
        if let Some(h) = &self.solution_sha256 {
            lines.push(format!("solution sha256 {h}"));
        }
        lines.push(format!("wall time {:.2} s", self.wall_time.as_secs_f64()));
        lines.join("\n") + "\n"
    }
}

/// Report together with the artifacts it describes.
#[derive(Debug)]
pub struct CancellationRun {
    pub report: CancellationReport,
    pub generated: Generated,
    pub assembled: AssembledSystem,
    pub system: LinearSystem,
    pub solution: Option<SparseVec>,
}

impl CancellationRun {
    pub fn system_text(&self) -> String {
        self.system.to_text()
    }

    pub fn solution_text(&self) -> Option<String> {
        self.solution.as_ref().map(|x| solution_to_text(x, self.system.matrix.ncols()))
    }

    pub fn provenance_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&provenance_json(&self.generated)).expect("json");
        s.push('\n');
        s
    }
}

pub fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

/// Generate, assemble, solve and exact-verify.
pub fn verify_cancellation(cfg: &CancellationConfig) -> Result<CancellationRun, CancelError> {
    let started = Instant::now();
    let generated = generate_all(GenerateConfig::new(cfg.case, cfg.n_max))?;
    let target = leading_target(cfg.case, cfg.sign)?;
    let assembled = assemble(&generated, &target, cfg.policy)?;
    let system = assembled.to_linear_system();
    let strategy = cfg.strategy.unwrap_or_else(|| PivotStrategy::auto(system.matrix.ncols()));
    let solved = solve(&system.matrix, &system.rhs, EliminationOptions::new(strategy))?;

    let (solution, infeasibility) = match &solved.outcome {
        SolveOutcome::Solved(x) => (Some(x.clone()), None),
        SolveOutcome::Infeasible(c) => (
            None,
            Some(Infeasibility {
                rank: c.rank,
                augmented_rank: c.augmented_rank,
                witness_row: c.witness_row,
            }),
        ),
    };
    let system_text = system.to_text();
    let solution_text = solution.as_ref().map(|x| solution_to_text(x, system.matrix.ncols()));
    let report = CancellationReport {
        case: cfg.case.name().to_string(),
        n_max: cfg.n_max,
        rows: system.matrix.nrows(),
        cols: system.matrix.ncols(),
        nnz: system.matrix.nnz(),
        rank: solved.rank,
        strategy: strategy.name().to_string(),
        solved: solved.is_solved(),
        nonzero_multipliers: solution.as_ref().map_or(0, SparseVec::nnz),
        integers_only: solution.as_ref().is_some_and(|x| x.iter().all(|(_, v)| v.is_integer())),
        target_terms: target.len(),
        missing_targets: assembled.missing_targets.len(),
        infeasibility,
        generation: generated.stats.clone(),
        system_sha256: sha256_hex(system_text.as_bytes()),
        solution_sha256: solution_text.as_deref().map(|s| sha256_hex(s.as_bytes())),
        wall_time: started.elapsed(),
    };
    Ok(CancellationRun {
        report,
        generated,
        assembled,
        system,
        solution,
    })
}

/// Exact check of a system against a given solution, without elimination.
pub fn cross_verify(system: &LinearSystem, x: &SparseVec) -> Result<bool, LinalgError> {
    verify(&system.matrix, x, &system.rhs)
}

/// The system with one extra basis row that no identity reaches and a unit
/// target entry on it. Such a target is never in the column space.
pub fn tamper_target(system: &LinearSystem) -> Result<LinearSystem, LinalgError> {
    let rows = system.matrix.nrows();
    let matrix = SparseRationalMatrix::from_columns(rows + 1, system.matrix.columns().to_vec())?;
    let mut rhs: BTreeMap<usize, gft_exact::Rational> = system.rhs.iter().map(|(i, v)| (i, v.clone())).collect();
    rhs.insert(rows, gft_exact::Rational::one());
    Ok(LinearSystem {
        case: system.case.clone(),
        matrix,
        rhs: SparseVec::from_pairs(rhs),
    })
}

/// `(rank A, rank [A | b])`.
pub fn augmented_ranks(system: &LinearSystem, strategy: PivotStrategy) -> Result<(usize, usize), LinalgError> {
    let r = rank(&system.matrix, strategy)?;
    let aug = system.matrix.with_column(system.rhs.clone())?;
    Ok((r, rank(&aug, strategy)?))
}
