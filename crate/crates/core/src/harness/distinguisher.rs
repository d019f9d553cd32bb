//! Turning a learner into a planted-vs-null test, and measuring its advantage.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::learners::{train_baseline, Classifier, Hypothesis, LearnerSpec};
use super::stats::{abs_difference_interval, binomial_sigma, Z_95};
use super::tvd::projection_tvd;
use crate::error::{Error, Result};
use crate::instance::{generate_mixture, generate_null, generate_untruncated_mixture, Dataset, MixtureParams, SampleView};
use crate::oracle::OraclePtf;
use crate::rng::{seeded, trial_seed};

/// Rows per parallel chunk when counting mistakes.
const COUNT_CHUNK: usize = 4096;

/// Misclassification rate with its exact count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub errors: u64,
    pub m: u64,
    /// `errors / m`.
    pub value: f64,
}

/// Fraction of rows where `h` disagrees with the label.
pub fn empirical_error(h: &(impl Classifier + ?Sized), view: SampleView<'_>) -> Result<ErrorEstimate> {
    if view.is_empty() {
        return Err(Error::Domain("empirical error of an empty dataset".into()));
    }
    let errors: u64 = (0..view.len().div_ceil(COUNT_CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * COUNT_CHUNK;
            let hi = (lo + COUNT_CHUNK).min(view.len());
            (lo..hi).filter(|&i| h.predict(view.x(i)) != view.label(i)).count() as u64
        })
        .sum();
    let m = view.len() as u64;
    Ok(ErrorEstimate { errors, m, value: errors as f64 / m as f64 })
}

/// What the distinguisher trains on its first split.
#[derive(Debug, Clone, PartialEq)]
pub enum Learner {
    Baseline(LearnerSpec),
    /// The planted classifier, which needs no training.
    Oracle(Box<OraclePtf>),
}

impl Learner {
    pub fn fit(&self, train: SampleView<'_>) -> Result<Hypothesis> {
        match self {
            Learner::Baseline(spec) => train_baseline(spec, train),
            Learner::Oracle(o) => Ok(Hypothesis::Oracle(o.clone())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Learner::Baseline(spec) => serde_json::to_value(spec.kind)
                .ok()
                .and_then(|v| v.get("kind").and_then(|k| k.as_str()).map(str::to_string))
                .unwrap_or_else(|| "baseline".into()),
            Learner::Oracle(o) => format!("planted_oracle_d{}", o.d),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistinguisherConfig {
    pub tau: f64,
    /// Fraction of rows used for training.
    pub split: f64,
    pub learner: Learner,
}

impl DistinguisherConfig {
    pub fn new(tau: f64, learner: Learner) -> Result<Self> {
        let cfg = DistinguisherConfig { tau, split: 0.5, learner };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau < 0.5) {
            return Err(Error::Domain(format!("tau must lie in (0, 1/2), got {}", self.tau)));
        }
        if !(self.split > 0.0 && self.split < 1.0) {
            return Err(Error::Domain(format!("split must lie in (0, 1), got {}", self.split)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Planted,
    Null,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinguisherOutcome {
    pub verdict: Verdict,
    pub learner: String,
    pub tau: f64,
    pub error: ErrorEstimate,
    /// `|êrr − 1/2|`.
    pub margin: f64,
    /// `τ/2`.
    pub threshold: f64,
    pub m_total: u64,
    pub m_train: u64,
    /// `2·exp(−(2m/9)·τ²)` for the dataset size.
    pub failure_bound: f64,
    pub warning: Option<String>,
}

/// `2·exp(−(2m/9)·τ²)`.
pub fn hoeffding_failure_bound(m: u64, tau: f64) -> f64 {
    (2.0 * (-(2.0 * m as f64 / 9.0) * tau * tau).exp()).min(1.0)
}

/// Trains on the first split, measures the error on the rest, and says
/// `planted` iff `|êrr − 1/2| > τ/2`.
pub fn hoeffding_distinguisher(cfg: &DistinguisherConfig, ds: &Dataset) -> Result<DistinguisherOutcome> {
    cfg.validate()?;
    let (train, test) = ds.view().split(cfg.split);
    if train.is_empty() || test.is_empty() {
        return Err(Error::Domain(format!("{} rows cannot be split at {}", ds.len(), cfg.split)));
    }
    let h = cfg.learner.fit(train)?;
    let error = empirical_error(&h, test)?;
    let margin = (error.value - 0.5).abs();
    let threshold = cfg.tau / 2.0;
    let m = ds.len() as u64;
    let needed = 2.0 / (cfg.tau * cfg.tau);
    let warning = ((m as f64) < needed)
        .then(|| format!("underpowered: m = {m} is below 2/tau² = {}", needed.ceil()));
    Ok(DistinguisherOutcome {
        verdict: if margin > threshold { Verdict::Planted } else { Verdict::Null },
        learner: cfg.learner.name(),
        tau: cfg.tau,
        error,
        margin,
        threshold,
        m_total: m,
        m_train: train.len() as u64,
        failure_bound: hoeffding_failure_bound(m, cfg.tau),
        warning,
    })
}

/// A test that looks at a dataset and names the world it came from.
pub trait Distinguisher: Sync {
    fn decide(&self, ds: &Dataset, seed: u64) -> Result<Verdict>;
    fn name(&self) -> String;
    /// Whether [`Distinguisher::decide`] reads the data at all.
    fn needs_data(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone)]
pub struct HoeffdingDistinguisher(pub DistinguisherConfig);

impl Distinguisher for HoeffdingDistinguisher {
    fn decide(&self, ds: &Dataset, _seed: u64) -> Result<Verdict> {
        Ok(hoeffding_distinguisher(&self.0, ds)?.verdict)
    }

    fn name(&self) -> String {
        format!("hoeffding[{}]", self.0.learner.name())
    }
}

/// Ignores the data and flips a fair coin.
#[derive(Debug, Clone, Copy, Default)]
pub struct CoinFlipDistinguisher;

impl Distinguisher for CoinFlipDistinguisher {
    fn decide(&self, _ds: &Dataset, seed: u64) -> Result<Verdict> {
        Ok(if seeded(seed).random::<bool>() { Verdict::Planted } else { Verdict::Null })
    }

    fn name(&self) -> String {
        "coin_flip".into()
    }

    fn needs_data(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdvantageConfig {
    pub trials: usize,
    /// Samples per dataset.
    pub m: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdvantageReport {
    pub distinguisher: String,
    pub trials: usize,
    pub m: usize,
    pub seed: u64,
    /// Trials where the planted dataset was called `null`.
    pub planted_said_null: u64,
    /// Trials where the null dataset was called `null`.
    pub null_said_null: u64,
    /// `|P̂_planted(null) − P̂_null(null)|`.
    pub advantage: f64,
    /// 95% Newcombe interval for the advantage.
    pub interval: (f64, f64),
}

/// Per-trial verdicts on one planted and one null dataset.
fn run_trials<D: Distinguisher + ?Sized>(
    dist: &D,
    cfg: &AdvantageConfig,
    make_planted: &(dyn Fn(usize, u64) -> Result<Dataset> + Sync),
    null_n: usize,
) -> Result<Vec<(Verdict, Verdict)>> {
    let empty = generate_null(null_n, 0, 0)?;
    (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let sp = trial_seed(cfg.seed, 2 * i as u64);
            let sn = trial_seed(cfg.seed, 2 * i as u64 + 1);
            let (dp, dn) = if dist.needs_data() {
                (make_planted(cfg.m, sp)?, generate_null(null_n, cfg.m, sn)?)
            } else {
                (empty.clone(), empty.clone())
            };
            Ok((dist.decide(&dp, sp)?, dist.decide(&dn, sn)?))
        })
        .collect()
}

fn summarize(name: String, cfg: &AdvantageConfig, verdicts: &[(Verdict, Verdict)]) -> AdvantageReport {
    let t = verdicts.len() as u64;
    let planted_said_null = verdicts.iter().filter(|v| v.0 == Verdict::Null).count() as u64;
    let null_said_null = verdicts.iter().filter(|v| v.1 == Verdict::Null).count() as u64;
    let advantage = (planted_said_null as f64 - null_said_null as f64).abs() / t as f64;
    AdvantageReport {
        distinguisher: name,
        trials: cfg.trials,
        m: cfg.m,
        seed: cfg.seed,
        planted_said_null,
        null_said_null,
        advantage,
        interval: abs_difference_interval(planted_said_null, t, null_said_null, t, Z_95),
    }
}

/// Runs `dist` on fresh planted and null datasets, one of each per trial,
/// and reports the empirical advantage. Trials run in parallel; each uses
/// its own seeds, so the report does not depend on the thread count.
pub fn advantage_report<D: Distinguisher + ?Sized>(
    dist: &D,
    p: &MixtureParams,
    cfg: &AdvantageConfig,
) -> Result<AdvantageReport> {
    if cfg.trials < 100 {
        return Err(Error::Domain(format!("advantage needs at least 100 trials, got {}", cfg.trials)));
    }
    let planted = |m: usize, s: u64| generate_mixture(p, m, s);
    let verdicts = run_trials(dist, cfg, &planted, p.n())?;
    Ok(summarize(dist.name(), cfg, &verdicts))
}

/// How far the advantage moves when the truncated families are replaced by
/// untruncated ones, against the TVD that bounds the move.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationShift {
    pub truncated: AdvantageReport,
    pub untruncated: AdvantageReport,
    pub shift: f64,
    /// TVD between single labeled samples from the two mixtures.
    pub tvd_per_sample: f64,
    /// `min(1, m·tvd_per_sample)`, a bound on the TVD between whole datasets.
    pub tvd_dataset: f64,
    /// Three standard errors of the difference of the two advantages.
    pub sigma3: f64,
    pub within_bound: bool,
}

pub fn truncation_shift<D: Distinguisher + ?Sized>(
    dist: &D,
    p: &MixtureParams,
    cfg: &AdvantageConfig,
) -> Result<TruncationShift> {
    let truncated = advantage_report(dist, p, cfg)?;
    let planted = |m: usize, s: u64| generate_untruncated_mixture(p, m, s);
    let verdicts = run_trials(dist, cfg, &planted, p.n())?;
    let untruncated = summarize(dist.name(), cfg, &verdicts);
    let shift = (truncated.advantage - untruncated.advantage).abs();
    let plus = projection_tvd(&p.plus.clone().untruncated(), &p.plus)?.value;
    let minus = projection_tvd(&p.minus.clone().untruncated(), &p.minus)?.value;
    let tvd_per_sample = 0.5 * (plus + minus);
    let tvd_dataset = (cfg.m as f64 * tvd_per_sample).min(1.0);
    let t = cfg.trials as u64;
    let var = |r: &AdvantageReport| {
        let a = r.planted_said_null as f64 / t as f64;
        let b = r.null_said_null as f64 / t as f64;
        binomial_sigma(a, t).powi(2) + binomial_sigma(b, t).powi(2)
    };
    let sigma3 = 3.0 * (var(&truncated) + var(&untruncated)).sqrt();
    Ok(TruncationShift {
        within_bound: shift <= tvd_dataset + sigma3,
        truncated,
        untruncated,
        shift,
        tvd_per_sample,
        tvd_dataset,
        sigma3,
    })
}
