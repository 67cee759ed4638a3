//! Numerical side of the edge-universality story for sparse random
//! matrices: Erdős–Rényi sampling, the shifted spectral edge, resolvents,
//! smoothed eigenvalue counts, the GOE Tracy–Widom distribution and a
//! Kolmogorov-distance convergence experiment.

pub mod counting;
pub mod experiment;
pub mod flow;
pub mod green;
pub mod ks;
pub mod matrix;
pub mod model;
pub mod spectrum;
pub mod tw;

pub use experiment::{run_experiment, ExperimentConfig, ExperimentResult, Setting, Statistic};
pub use flow::FlowState;
pub use green::{green_eval, green_eval_lu, m_sc, GreenEval, Spectral};
pub use ks::{ks_one_sided, KsResult};
pub use matrix::{sample_er, sample_goe_hat, SymMatrix};
pub use model::{kappa4_bernoulli, ModelParams};
pub use spectrum::{edge_shift, eigenvalues, largest_eigenvalue, EdgeShift, SpectralSample};
pub use tw::{Tw1, Tw1Table};

#[derive(Debug, thiserror::Error)]
pub enum RmtError {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("spectral parameter must lie in the upper half plane, got {0}")]
    Domain(num_complex::Complex64),
    #[error("eigendecomposition did not converge")]
    Eigen,
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("r = {0} outside the supported range of the Tracy-Widom evaluator")]
    OutOfRange(f64),
    #[error("{0} samples is too few for a Kolmogorov distance (need at least 100)")]
    TooFewSamples(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Map over `0..count`, on the rayon pool when `parallel` is set and the
/// feature is compiled in. Results come back in index order.
pub fn map_indices<R: Send>(count: usize, f: impl Fn(usize) -> R + Sync + Send, parallel: bool) -> Vec<R> {
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return (0..count).into_par_iter().map(f).collect();
    }
    let _ = parallel;
    (0..count).map(f).collect()
}
