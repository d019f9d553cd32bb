//! Goodness-of-fit tests and binomial intervals used by the verification suite.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Two-sided 95% standard normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Minimum expected count per bin before adjacent bins are pooled.
const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquareResult {
    pub fn passes(&self, significance: f64) -> bool {
        self.p_value >= significance
    }
}

pub fn chi2_sf(statistic: f64, dof: usize) -> Result<f64> {
    if dof == 0 {
        return Err(Error::Domain("chi-square test needs at least two bins".into()));
    }
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Numeric(e.to_string()))?;
    Ok(dist.sf(statistic))
}

/// Pearson test of `observed` counts against bin probabilities `probs`.
/// Adjacent bins are pooled until every expected count reaches 5.
pub fn chi2_goodness_of_fit(observed: &[u64], probs: &[f64]) -> Result<ChiSquareResult> {
    if observed.len() != probs.len() {
        return Err(Error::Domain(format!("{} counts for {} probabilities", observed.len(), probs.len())));
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(Error::Domain("no observations".into()));
    }
    let mass: f64 = probs.iter().sum();
    if !(mass > 0.0) || probs.iter().any(|p| !(*p >= 0.0)) {
        return Err(Error::Domain("bin probabilities must be nonnegative with positive sum".into()));
    }
    let scale = total as f64 / mass;
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&obs, &p) in observed.iter().zip(probs) {
        o += obs as f64;
        e += p * scale;
        if e >= MIN_EXPECTED {
            pooled.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => pooled.push((o, e)),
        }
    }
    let statistic = pooled.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = pooled.len().saturating_sub(1);
    Ok(ChiSquareResult { statistic, dof, p_value: chi2_sf(statistic, dof)? })
}

/// Two-sample test of homogeneity between binned counts `a` and `b`.
pub fn chi2_two_sample(a: &[u64], b: &[u64]) -> Result<ChiSquareResult> {
    if a.len() != b.len() {
        return Err(Error::Domain("histograms have different bin counts".into()));
    }
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    if na == 0 || nb == 0 {
        return Err(Error::Domain("both samples must be nonempty".into()));
    }
    let ka = (nb as f64 / na as f64).sqrt();
    let kb = (na as f64 / nb as f64).sqrt();
    let mut statistic = 0.0;
    let mut bins: usize = 0;
    for (&x, &y) in a.iter().zip(b) {
        if x + y == 0 {
            continue;
        }
        let d = ka * x as f64 - kb * y as f64;
        statistic += d * d / (x + y) as f64;
        bins += 1;
    }
    let dof = bins.saturating_sub(1);
    Ok(ChiSquareResult { statistic, dof, p_value: chi2_sf(statistic, dof)? })
}

/// Counts per bin for the half-open bins `[edges[i], edges[i+1])`; values
/// outside `[edges[0], edges[last])` are dropped.
pub fn histogram(values: impl IntoIterator<Item = f64>, edges: &[f64]) -> Vec<u64> {
    let bins = edges.len().saturating_sub(1);
    let mut counts = vec![0u64; bins];
    for v in values {
        let i = edges.partition_point(|&e| e <= v);
        if i >= 1 && i <= bins {
            counts[i - 1] += 1;
        }
    }
    counts
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub n: usize,
    pub p_value: f64,
}

/// Asymptotic `P(K > λ)` for the Kolmogorov distribution.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 0.2 {
        // The alternating series converges too slowly here; the value is 1 to double precision.
        return 1.0;
    }
    let mut acc = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        acc += if k % 2 == 1 { term } else { -term };
        if term < 1e-300 {
            break;
        }
    }
    (2.0 * acc).clamp(0.0, 1.0)
}

/// One-sample Kolmogorov–Smirnov test against a continuous `cdf`, with
/// Stephens' finite-sample correction of the asymptotic p-value.
pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    if samples.is_empty() {
        return Err(Error::Domain("KS test needs at least one sample".into()));
    }
    let mut xs = samples.to_vec();
    if xs.iter().any(|v| v.is_nan()) {
        return Err(Error::Domain("KS sample contains NaN".into()));
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    let sn = n.sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    Ok(KsResult { statistic: d, n: xs.len(), p_value: kolmogorov_sf(lambda) })
}

/// `√(p(1−p)/m)`.
pub fn binomial_sigma(p: f64, m: u64) -> f64 {
    (p * (1.0 - p) / m as f64).sqrt()
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Newcombe's hybrid score interval for `p₁ − p₂`.
pub fn newcombe_difference(s1: u64, n1: u64, s2: u64, n2: u64, z: f64) -> (f64, f64) {
    let p1 = s1 as f64 / n1 as f64;
    let p2 = s2 as f64 / n2 as f64;
    let (l1, u1) = wilson_interval(s1, n1, z);
    let (l2, u2) = wilson_interval(s2, n2, z);
    let diff = p1 - p2;
    let lo = diff - ((p1 - l1).powi(2) + (u2 - p2).powi(2)).sqrt();
    let hi = diff + ((u1 - p1).powi(2) + (p2 - l2).powi(2)).sqrt();
    (lo.max(-1.0), hi.min(1.0))
}

/// Interval for `|p₁ − p₂|` induced by [`newcombe_difference`].
pub fn abs_difference_interval(s1: u64, n1: u64, s2: u64, n2: u64, z: f64) -> (f64, f64) {
    let (lo, hi) = newcombe_difference(s1, n1, s2, n2, z);
    if lo <= 0.0 && hi >= 0.0 {
        (0.0, hi.max(-lo))
    } else {
        let (a, b) = (lo.abs(), hi.abs());
        (a.min(b), a.max(b))
    }
}
