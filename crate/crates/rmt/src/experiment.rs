//! Monte Carlo comparison of the rescaled top eigenvalue with `F₁`.

use serde::{Deserialize, Serialize};

use crate::ks::{ks_one_sided, KsResult};
use crate::matrix::sample_er;
use crate::model::ModelParams;
use crate::spectrum::SpectralSample;
use crate::tw::{Tw1, Tw1Table, SUPPORT};
use crate::{map_indices, RmtError};

/// One `(N, p)` point. Exactly one of `p` and `q_exponent` is given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Setting {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// `q = N^q_exponent`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_exponent: Option<f64>,
    /// Defaults to the experiment seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn default_tw_nodes() -> usize {
    64
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub samples: usize,
    pub r0: f64,
    pub settings: Vec<Setting>,
    #[serde(default = "default_tw_nodes")]
    pub tw_nodes: usize,
    #[serde(default = "default_true")]
    pub parallel: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, RmtError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), RmtError> {
        if self.samples < crate::ks::MIN_SAMPLES {
            return Err(RmtError::TooFewSamples(self.samples));
        }
        if !(SUPPORT.0..SUPPORT.1).contains(&self.r0) {
            return Err(RmtError::OutOfRange(self.r0));
        }
        for s in &self.settings {
            s.params(self.seed)?;
        }
        Ok(())
    }
}

impl Setting {
    pub fn params(&self, default_seed: u64) -> Result<ModelParams, RmtError> {
        let seed = self.seed.unwrap_or(default_seed);
        match (self.p, self.q_exponent) {
            (Some(p), None) => ModelParams::new(self.n, p, seed),
            (None, Some(e)) => ModelParams::with_q_exponent(self.n, e, seed),
            _ => Err(RmtError::Param(format!("setting N = {}: give exactly one of p and q_exponent", self.n))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    /// `N^{2/3}(λ_N - L̂)`.
    Shifted,
    /// `N^{2/3}(λ_N - 2)`.
    Unshifted,
}

/// One line of the results table.
#[derive(Clone, Debug, Serialize)]
pub struct KsRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub p: f64,
    pub q: f64,
    #[serde(rename = "M")]
    pub m: usize,
    pub seed: u64,
    pub r0: f64,
    pub ks: f64,
    pub ks_stderr: f64,
    pub statistic: Statistic,
    pub ks_at: f64,
    pub kappa4: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleRecord {
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
    pub sample: usize,
    pub lambda_max: f64,
    pub chi: f64,
    pub lhat: f64,
    pub shifted: f64,
    pub unshifted: f64,
}

#[derive(Clone, Debug, Default)]
pub struct ExperimentResult {
    pub rows: Vec<KsRow>,
    pub samples: Vec<SampleRecord>,
    /// Out-of-regime notes, one per affected setting.
    pub warnings: Vec<String>,
}

fn to_csv<T: Serialize>(records: &[T]) -> Result<String, RmtError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| RmtError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

impl ExperimentResult {
    pub fn rows_csv(&self) -> Result<String, RmtError> {
        to_csv(&self.rows)
    }

    pub fn samples_csv(&self) -> Result<String, RmtError> {
        to_csv(&self.samples)
    }

    pub fn row(&self, n: usize, statistic: Statistic) -> Option<&KsRow> {
        self.rows.iter().find(|r| r.n == n && r.statistic == statistic)
    }
}

/// `F₁` on `[-10, 12]` with step 0.01.
pub fn reference_table(nodes: usize) -> Result<Tw1Table, RmtError> {
    Tw1Table::new(&Tw1::new(nodes), SUPPORT.0, SUPPORT.1, 2201)
}

/// Samples for one setting, in sample order whatever the scheduling.
pub fn sample_setting(params: &ModelParams, m: usize, parallel: bool) -> Result<Vec<SpectralSample>, RmtError> {
    let q = params.q();
    let k4 = params.kappa4();
    map_indices(m, |i| SpectralSample::compute(&sample_er(params, i as u64), q, k4), parallel)
        .into_iter()
        .collect()
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, RmtError> {
    cfg.validate()?;
    let table = reference_table(cfg.tw_nodes)?;
    let mut out = ExperimentResult::default();
    for setting in &cfg.settings {
        let params = setting.params(cfg.seed)?;
        for w in params.warnings() {
            out.warnings.push(format!("N = {}: {w}", params.n));
        }
        let samples = sample_setting(&params, cfg.samples, cfg.parallel)?;
        for statistic in [Statistic::Shifted, Statistic::Unshifted] {
            let xs: Vec<f64> = samples
                .iter()
                .map(|s| match statistic {
                    Statistic::Shifted => s.statistic,
                    Statistic::Unshifted => s.unshifted,
                })
                .collect();
            let KsResult { distance, stderr, at } = ks_one_sided(&xs, cfg.r0, |r| table.cdf(r))?;
            out.rows.push(KsRow {
                n: params.n,
                p: params.p,
                q: params.q(),
                m: cfg.samples,
                seed: params.seed,
                r0: cfg.r0,
                ks: distance,
                ks_stderr: stderr,
                statistic,
                ks_at: at,
                kappa4: params.kappa4(),
            });
        }
        out.samples.extend(samples.iter().enumerate().map(|(i, s)| SampleRecord {
            n: params.n,
            seed: params.seed,
            sample: i,
            lambda_max: s.lambda_max,
            chi: s.shift.chi,
            lhat: s.shift.lhat,
            shifted: s.statistic,
            unshifted: s.unshifted,
        }));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip_and_validation() {
        let text = r#"{"seed": 7, "samples": 100, "r0": -4, "settings": [{"n": 20, "q_exponent": 0.45}]}"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(cfg.tw_nodes, 64);
        assert!(cfg.parallel);
        let bad = r#"{"seed": 7, "samples": 100, "r0": -4, "settings": [{"n": 20, "p": 0.1, "q_exponent": 0.45}]}"#;
        assert!(ExperimentConfig::from_json(bad).is_err());
        let few = r#"{"seed": 7, "samples": 10, "r0": -4, "settings": []}"#;
        assert!(matches!(ExperimentConfig::from_json(few), Err(RmtError::TooFewSamples(10))));
    }

    #[test]
    fn small_run_is_deterministic() {
        let cfg = ExperimentConfig {
            seed: 11,
            samples: 100,
            r0: -4.0,
            settings: vec![Setting {
                n: 30,
                p: Some(0.3),
                q_exponent: None,
                seed: None,
            }],
            tw_nodes: 32,
            parallel: true,
        };
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&ExperimentConfig { parallel: false, ..cfg }).unwrap();
        assert_eq!(a.rows_csv().unwrap(), b.rows_csv().unwrap());
        assert_eq!(a.samples_csv().unwrap(), b.samples_csv().unwrap());
        assert_eq!(a.rows.len(), 2);
        assert!(a.rows_csv().unwrap().starts_with("N,p,q,M,seed,r0,ks,ks_stderr,statistic"));
    }
}
