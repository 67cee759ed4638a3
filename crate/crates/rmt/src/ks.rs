//! One-sided Kolmogorov distance of an empirical sample to a reference CDF.

use serde::Serialize;

use crate::RmtError;

pub const MIN_SAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KsResult {
    /// `sup_{r > r₀} |F̂_M(r) - F(r)|`.
    pub distance: f64,
    /// Binomial error `√(F(1-F)/M)` at the maximizing point.
    pub stderr: f64,
    pub at: f64,
}

/// Distance over `r > r0`. The supremum is attained at a jump of `F̂_M`
/// (from one side) or at the left end.
pub fn ks_one_sided(samples: &[f64], r0: f64, cdf: impl Fn(f64) -> f64) -> Result<KsResult, RmtError> {
    let m = samples.len();
    if m < MIN_SAMPLES {
        return Err(RmtError::TooFewSamples(m));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let mf = m as f64;
    let start = xs.partition_point(|&x| x <= r0);

    let f0 = cdf(r0);
    let mut best = ((start as f64 / mf - f0).abs(), r0, f0);
    let mut i = start;
    while i < m {
        let x = xs[i];
        // Ties jump together.
        let mut j = i;
        while j < m && xs[j] == x {
            j += 1;
        }
        let f = cdf(x);
        let d = (i as f64 / mf - f).abs().max((j as f64 / mf - f).abs());
        if d > best.0 {
            best = (d, x, f);
        }
        i = j;
    }
    let (distance, at, f) = best;
    Ok(KsResult {
        distance,
        stderr: (f * (1.0 - f) / mf).sqrt(),
        at,
    })
}
