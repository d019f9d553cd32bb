//! The verification suite: each numerical claim the library rests on runs
//! as a named check, and the results are collected into a versioned JSON
//! report.

use std::fmt;
use std::time::Instant;

use num_rational::BigRational;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::distinguisher::{
    advantage_report, empirical_error, truncation_shift, AdvantageConfig, CoinFlipDistinguisher, DistinguisherConfig,
    HoeffdingDistinguisher, Learner,
};
use super::learners::{train_baseline, LearnerKind, LearnerSpec};
use super::stats::{binomial_sigma, chi2_goodness_of_fit, chi2_two_sample, histogram, ks_one_sample};
use super::tvd::{projection_hint, projection_tvd, truncation_tvd_bound, SupportHint};
use crate::error::{Error, FormatError, Result};
use crate::gaussian::{
    gaussian_cdf, gaussian_product_decompose, poisson_residual, rho, rho_1d, TailTruncation, Width,
};
use crate::instance::{
    encode_dataset, encode_secret, generate_mixture, generate_null, EmbeddingSpec, Label, MixtureParams,
};
use crate::oracle::{
    build_intervals, build_oracle, ltf_weights, oracle_error_bound, oracle_error_exact, support_margin,
    supports_disjoint, ErrorClass,
};
use crate::quadrature::{integrate, integrate_2d, QuadConfig};
use crate::rng::{seeded, shard_rng, trial_seed, SampleRng, SHARD_SIZE};
use crate::samplers::{
    acceptance_probability, dot, null_acceptance_probability, reject_transform, reject_transform_null,
    sample_clwe, sample_secret_direction, ClweParams, HclweSampler, HclweSpec, RejectionConfig, UNIT_STD,
};

pub const REPORT_FORMAT_VERSION: u16 = 1;

/// Cap on report documents accepted by [`VerificationReport::from_json`].
pub const MAX_REPORT_LEN: usize = 64 << 20;

/// Sample budget. `Quick` cuts every Monte-Carlo size for smoke runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Full,
    Quick,
}

/// The claim a measured value is held to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "relation")]
pub enum Relation {
    AtMost { bound: f64 },
    Below { bound: f64 },
    AtLeast { bound: f64 },
    Above { bound: f64 },
    Within { lo: f64, hi: f64 },
}

impl Relation {
    pub fn holds(&self, v: f64) -> bool {
        match *self {
            Relation::AtMost { bound } => v <= bound,
            Relation::Below { bound } => v < bound,
            Relation::AtLeast { bound } => v >= bound,
            Relation::Above { bound } => v > bound,
            Relation::Within { lo, hi } => lo <= v && v <= hi,
        }
    }

    fn is_finite(&self) -> bool {
        match *self {
            Relation::AtMost { bound }
            | Relation::Below { bound }
            | Relation::AtLeast { bound }
            | Relation::Above { bound } => bound.is_finite(),
            Relation::Within { lo, hi } => lo.is_finite() && hi.is_finite(),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Relation::AtMost { bound } => write!(f, "<= {bound:.6e}"),
            Relation::Below { bound } => write!(f, "< {bound:.6e}"),
            Relation::AtLeast { bound } => write!(f, ">= {bound:.6e}"),
            Relation::Above { bound } => write!(f, "> {bound:.6e}"),
            Relation::Within { lo, hi } => write!(f, "in [{lo:.6e}, {hi:.6e}]"),
        }
    }
}

/// One named check. `pass` holds exactly when `measured` satisfies `claimed`;
/// a check that could not produce a value has no measurement and fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub criterion: u8,
    pub claimed: Relation,
    pub measured: Option<f64>,
    pub pass: bool,
    pub runtime_s: f64,
    pub seed: Option<u64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionSummary {
    pub id: u8,
    pub title: String,
    pub checks: usize,
    pub checks_pass: bool,
    pub runtime_s: f64,
    pub runtime_limit_s: f64,
    pub within_time: bool,
    /// Every check passes and the group finished inside its time limit.
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub format_version: u16,
    pub scale: Scale,
    pub seed: u64,
    pub criteria: Vec<CriterionSummary>,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Parses a report and checks its internal consistency: every pass flag
    /// must agree with its measurement and every summary with its checks.
    pub fn from_json(s: &str) -> std::result::Result<Self, FormatError> {
        if s.len() > MAX_REPORT_LEN {
            return Err(FormatError::Manifest(format!("report of {} bytes exceeds the cap", s.len())));
        }
        let r: VerificationReport = serde_json::from_str(s).map_err(|e| FormatError::Manifest(e.to_string()))?;
        if r.format_version != REPORT_FORMAT_VERSION {
            return Err(FormatError::VersionMismatch { found: r.format_version, expected: REPORT_FORMAT_VERSION });
        }
        for c in &r.checks {
            let expect = c.measured.is_some_and(|v| c.claimed.holds(v));
            if c.pass != expect {
                return Err(FormatError::Manifest(format!("check {:?} has an inconsistent pass flag", c.name)));
            }
            if !c.claimed.is_finite() || !(c.runtime_s >= 0.0) {
                return Err(FormatError::Manifest(format!("check {:?} has a non-finite field", c.name)));
            }
        }
        for s in &r.criteria {
            let own: Vec<&CheckRecord> = r.checks.iter().filter(|c| c.criterion == s.id).collect();
            let ok = own.iter().all(|c| c.pass);
            if own.len() != s.checks || ok != s.checks_pass || s.pass != (ok && s.within_time) {
                return Err(FormatError::Manifest(format!("summary of group {} disagrees with its checks", s.id)));
            }
        }
        if r.pass != r.criteria.iter().all(|s| s.pass) {
            return Err(FormatError::Manifest("overall pass flag disagrees with the groups".into()));
        }
        Ok(r)
    }

    /// The report with every wall-clock field removed, for comparing runs.
    pub fn canonical(&self) -> Self {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.runtime_s = 0.0;
        }
        for s in &mut r.criteria {
            s.runtime_s = 0.0;
            s.within_time = true;
            s.pass = s.checks_pass;
        }
        r.pass = r.criteria.iter().all(|s| s.pass);
        r
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Extra (γ, out_beta) point for the disjointness checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub gamma: f64,
    pub out_beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyPlan {
    pub scale: Scale,
    pub seed: u64,
    /// Groups to run; empty runs all of them.
    pub criteria: Vec<u8>,
    /// Points checked for disjoint supports alongside group 5.
    pub grid: Vec<GridPoint>,
}

impl VerifyPlan {
    pub fn new(scale: Scale, seed: u64) -> Self {
        VerifyPlan { scale, seed, criteria: Vec::new(), grid: default_grid() }
    }

    fn selects(&self, id: u8) -> bool {
        self.criteria.is_empty() || self.criteria.contains(&id)
    }
}

pub fn default_grid() -> Vec<GridPoint> {
    let g32 = 2.0 * 32f64.sqrt();
    vec![
        GridPoint { gamma: 8.0, out_beta: 0.02 },
        GridPoint { gamma: 8.0, out_beta: 0.04 },
        GridPoint { gamma: 4.0, out_beta: 0.5 },
        GridPoint { gamma: g32, out_beta: 2.0 / 32.0 },
    ]
}

/// Titles and time limits in seconds of the ten check groups.
pub const CRITERIA: [(u8, &str, f64); 10] = [
    (1, "Gaussian identities", 10.0),
    (2, "Densities and samplers", 120.0),
    (3, "Rejection reduction", 120.0),
    (4, "Truncation distance", 30.0),
    (5, "Support geometry", 60.0),
    (6, "Planted oracle", 120.0),
    (7, "Linear embedding", 60.0),
    (8, "Distinguisher", 300.0),
    (9, "Baseline learners", 300.0),
    (10, "Reproducibility", 60.0),
];

struct Sizes {
    density_samples: usize,
    reduction_accepted: usize,
    geometry_samples: usize,
    oracle_samples: usize,
    embed_points: usize,
    embed_dataset: usize,
    dist_m: usize,
    dist_trials: usize,
    shift_m: usize,
    coin_trials: usize,
    baseline_m: usize,
    baseline_seeds: usize,
    grid_samples: usize,
}

impl Sizes {
    fn of(scale: Scale) -> Self {
        match scale {
            Scale::Full => Sizes {
                density_samples: 1_000_000,
                reduction_accepted: 100_000,
                geometry_samples: 1_000_000,
                oracle_samples: 1_000_000,
                embed_points: 10_000,
                embed_dataset: 100_000,
                dist_m: 100_000,
                dist_trials: 100,
                shift_m: 10_000,
                coin_trials: 400,
                baseline_m: 100_000,
                baseline_seeds: 10,
                grid_samples: 20_000,
            },
            Scale::Quick => Sizes {
                density_samples: 100_000,
                reduction_accepted: 20_000,
                geometry_samples: 100_000,
                oracle_samples: 100_000,
                embed_points: 2_000,
                embed_dataset: 10_000,
                dist_m: 10_000,
                dist_trials: 100,
                shift_m: 2_000,
                coin_trials: 400,
                baseline_m: 20_000,
                baseline_seeds: 2,
                grid_samples: 5_000,
            },
        }
    }
}

/// Significance level of every goodness-of-fit test.
const SIGNIFICANCE: f64 = 1e-3;

/// Samples behind the thread-count comparison of dataset bytes.
const REPRO_M: usize = 3 * SHARD_SIZE + 123;

/// Runs the selected groups in order and collects their checks. A failing
/// or erroring check is recorded and the remaining checks still run.
pub fn verify_all(plan: &VerifyPlan) -> VerificationReport {
    let sizes = Sizes::of(plan.scale);
    let mut checks = Vec::new();
    let mut criteria = Vec::new();
    for &(id, title, limit) in &CRITERIA {
        if !plan.selects(id) {
            continue;
        }
        let start = Instant::now();
        let mut g = Group { id, seed: plan.seed, checks: Vec::new() };
        match id {
            1 => identities(&mut g),
            2 => densities(&mut g, &sizes),
            3 => reduction(&mut g, &sizes),
            4 => truncation(&mut g),
            5 => geometry(&mut g, &sizes, &plan.grid),
            6 => oracle(&mut g, &sizes),
            7 => embedding(&mut g, &sizes),
            8 => distinguisher(&mut g, &sizes),
            9 => baselines(&mut g, &sizes),
            _ => reproducibility(&mut g),
        }
        let runtime_s = start.elapsed().as_secs_f64();
        let checks_pass = g.checks.iter().all(|c| c.pass);
        let within_time = runtime_s < limit;
        criteria.push(CriterionSummary {
            id,
            title: title.into(),
            checks: g.checks.len(),
            checks_pass,
            runtime_s,
            runtime_limit_s: limit,
            within_time,
            pass: checks_pass && within_time,
        });
        checks.extend(g.checks);
    }
    let pass = criteria.iter().all(|s| s.pass);
    VerificationReport { format_version: REPORT_FORMAT_VERSION, scale: plan.scale, seed: plan.seed, criteria, checks, pass }
}

struct Group {
    id: u8,
    seed: u64,
    checks: Vec<CheckRecord>,
}

impl Group {
    /// Seed `j` of this group under the plan's master seed.
    fn seed(&self, j: u64) -> u64 {
        trial_seed(self.seed, self.id as u64 * 1_000_000 + j)
    }

    fn check(&mut self, name: &str, claimed: Relation, seed: Option<u64>, f: impl FnOnce() -> Result<(f64, String)>) {
        let start = Instant::now();
        let (measured, detail) = match f() {
            Ok((v, d)) if v.is_finite() => (Some(v), d),
            Ok((v, d)) => (None, format!("non-finite measurement {v}; {d}")),
            Err(e) => (None, format!("error: {e}")),
        };
        let pass = measured.is_some_and(|v| claimed.holds(v));
        self.checks.push(CheckRecord {
            name: name.into(),
            criterion: self.id,
            claimed,
            measured,
            pass,
            runtime_s: start.elapsed().as_secs_f64(),
            seed,
            detail,
        });
    }
}

/// `count` draws from `f`, split into fixed shards with their own streams.
fn par_draw<T: Send>(count: usize, seed: u64, f: impl Fn(&mut SampleRng) -> T + Sync) -> Vec<T> {
    let shards = count.div_ceil(SHARD_SIZE);
    (0..shards)
        .into_par_iter()
        .flat_map_iter(|s| {
            let mut rng = shard_rng(seed, s as u64);
            let len = SHARD_SIZE.min(count - s * SHARD_SIZE);
            (0..len).map(|_| f(&mut rng)).collect::<Vec<_>>()
        })
        .collect()
}

/// Shards processed per round by [`collect_accepted`].
const ROUND_SHARDS: usize = 16;

/// Runs the proposal `f` shard by shard until `target` outputs are kept.
/// Returns the first `target` kept outputs in shard order, plus the number
/// of attempts and acceptances over all processed shards.
fn collect_accepted(
    target: usize,
    seed: u64,
    f: impl Fn(&mut SampleRng) -> Option<Vec<f64>> + Sync,
) -> (Vec<Vec<f64>>, u64, u64) {
    let mut kept = Vec::with_capacity(target);
    let mut attempts = 0u64;
    let mut accepted = 0u64;
    let mut next = 0usize;
    while kept.len() < target {
        let round: Vec<Vec<Vec<f64>>> = (next..next + ROUND_SHARDS)
            .into_par_iter()
            .map(|s| {
                let mut rng = shard_rng(seed, s as u64);
                (0..SHARD_SIZE).filter_map(|_| f(&mut rng)).collect()
            })
            .collect();
        next += ROUND_SHARDS;
        attempts += (ROUND_SHARDS * SHARD_SIZE) as u64;
        for shard in round {
            accepted += shard.len() as u64;
            kept.extend(shard);
        }
    }
    kept.truncate(target);
    (kept, attempts, accepted)
}

fn width(s: f64) -> Result<Width> {
    Width::new(s)
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn empty_hint() -> SupportHint {
    SupportHint { lo: f64::INFINITY, hi: f64::NEG_INFINITY, breakpoints: Vec::new() }
}

fn spec_hint(spec: &HclweSpec) -> SupportHint {
    let mut h = empty_hint();
    projection_hint(spec, &mut h);
    h
}

/// `bins − 1` interior edges splitting the projection law of `spec` into
/// equal-mass bins, found by bisection on its CDF.
fn quantile_edges(spec: &HclweSpec, bins: usize) -> Vec<f64> {
    let hint = spec_hint(spec);
    (1..bins)
        .map(|i| {
            let q = i as f64 / bins as f64;
            let (mut lo, mut hi) = (hint.lo, hint.hi);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if spec.projection_cdf(mid) < q {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Full edge list `[−∞, e₁, …, +∞]` with the exact bin probabilities.
fn binned_law(spec: &HclweSpec, interior: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut edges = vec![f64::NEG_INFINITY];
    edges.extend_from_slice(interior);
    edges.push(f64::INFINITY);
    let cdf = |t: f64| {
        if t == f64::NEG_INFINITY {
            0.0
        } else if t == f64::INFINITY {
            1.0
        } else {
            spec.projection_cdf(t)
        }
    };
    let probs = edges.windows(2).map(|e| cdf(e[1]) - cdf(e[0])).collect();
    (edges, probs)
}

fn chi2_detail(r: &super::stats::ChiSquareResult, m: usize) -> String {
    format!("chi2 = {:.3}, dof = {}, samples = {m}, significance {SIGNIFICANCE}", r.statistic, r.dof)
}

fn identities(g: &mut Group) {
    g.check("poisson_summation_residual", Relation::AtMost { bound: 1e-10 }, None, || {
        let mut worst = (0.0f64, 0.0);
        for i in 0..=40 {
            let s = 0.1 * 160f64.powf(i as f64 / 40.0);
            let w = width(s)?;
            let r = poisson_residual(w, TailTruncation::default_for(w))?;
            if r >= worst.0 {
                worst = (r, s);
            }
        }
        Ok((worst.0, format!("max relative residual over 41 widths in [0.1, 16], at s = {:.4}", worst.1)))
    });

    let seed = g.seed(0);
    g.check("gaussian_product_identity", Relation::AtMost { bound: 1e-12 }, Some(seed), || {
        let mut rng = seeded(seed);
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let r1 = width(rng.random_range(0.5..5.0))?;
            let r2 = width(rng.random_range(0.5..5.0))?;
            let mut pt = || -> Vec<f64> { (0..3).map(|_| rng.random_range(-1.0..1.0)).collect() };
            let (c1, c2, x) = (pt(), pt(), pt());
            let d = gaussian_product_decompose(r1, &c1, r2, &c2)?;
            let lhs = rho(r1, &sub(&x, &c1))? * rho(r2, &sub(&x, &c2))?;
            let rhs = rho(d.r0, &sub(&c1, &c2))? * rho(d.r3, &sub(&x, &d.c3))?;
            worst = worst.max((lhs - rhs).abs() / lhs);
        }
        Ok((worst, "max relative error over 1000 draws, r in [0.5, 5], points in [-1, 1]^3".into()))
    });

    g.check("gaussian_integral_1d", Relation::AtMost { bound: 1e-8 }, None, || {
        let mut worst = 0.0f64;
        for s in [0.1, 0.5, 1.0, 2.5, 7.0, 16.0] {
            let r = integrate(|t| rho_1d(s, t), -12.0 * s, 12.0 * s, &[0.0], QuadConfig::default())?;
            worst = worst.max((r.value - s).abs() / s);
        }
        Ok((worst, "max |∫ρ_s − s|/s over s in {0.1, 0.5, 1, 2.5, 7, 16}".into()))
    });

    g.check("gaussian_integral_2d", Relation::AtMost { bound: 1e-8 }, None, || {
        let mut worst = 0.0f64;
        for s in [0.5, 1.0, 3.0] {
            let b = 12.0 * s;
            let r = integrate_2d(
                |x, y| rho_1d(s, x) * rho_1d(s, y),
                (-b, b),
                (-b, b),
                &[0.0],
                &[0.0],
                QuadConfig::default(),
            )?;
            worst = worst.max((r.value - s * s).abs() / (s * s));
        }
        Ok((worst, "max |∫ρ_s − s²|/s² on the plane over s in {0.5, 1, 3}".into()))
    });
}

/// Parameters of the one-dimensional density checks.
const DENSITY_GAMMA: f64 = 2.0;
const DENSITY_BETA: f64 = 0.25;

fn densities(g: &mut Group, sizes: &Sizes) {
    let base = || ClweParams::new(DENSITY_GAMMA, DENSITY_BETA, vec![1.0]);
    let hclwe = || HclweSpec::new(base()?, 0.5, DENSITY_BETA, None);
    let nhclwe = || Ok::<_, Error>(HclweSpec::new(base()?, 0.0, DENSITY_BETA, None)?.truncated());

    g.check("clwe_density_mass", Relation::AtMost { bound: 1e-6 }, None, || {
        let p = base()?;
        let r = integrate_2d(
            |y, z| clwe_density_or_nan(&p, y, z),
            (-4.0, 4.0),
            (0.0, 1.0),
            &[0.0],
            &[],
            QuadConfig::default(),
        )?;
        Ok(((r.value - 1.0).abs(), format!("∫∫ p(y, z) = {:.12} over [-4, 4] x [0, 1)", r.value)))
    });

    for (name, make) in [("hclwe_density_mass", &hclwe as &dyn Fn() -> Result<HclweSpec>), ("nhclwe_density_mass", &nhclwe)] {
        g.check(name, Relation::AtMost { bound: 1e-6 }, None, || {
            let spec = make()?;
            let hint = spec_hint(&spec);
            let z = spec.normalizer();
            let r = integrate(|t| spec.projection_density(t) / z, hint.lo, hint.hi, &hint.breakpoints, QuadConfig::default())?;
            Ok(((r.value - 1.0).abs(), format!("normalized mass {:.12}", r.value)))
        });
    }

    let m = sizes.density_samples;
    let seed = g.seed(0);
    g.check("clwe_sampler_chi2", Relation::AtLeast { bound: SIGNIFICANCE }, Some(seed), || {
        let p = base()?;
        let (y_edges, z_bins, probs) = clwe_cells(&p)?;
        let draws = par_draw(m, seed, |rng| {
            let s = sample_clwe(&p, rng);
            (s.y[0], s.z)
        });
        let mut counts = vec![0u64; probs.len()];
        for (y, z) in draws {
            let i = y_edges.partition_point(|&e| e <= y).clamp(1, y_edges.len() - 1) - 1;
            let j = ((z * z_bins as f64) as usize).min(z_bins - 1);
            counts[i * z_bins + j] += 1;
        }
        let r = chi2_goodness_of_fit(&counts, &probs)?;
        Ok((r.p_value, format!("{} joint (y, z) cells; {}", probs.len(), chi2_detail(&r, m))))
    });

    for (j, (name, make)) in
        [("hclwe_sampler_chi2", &hclwe as &dyn Fn() -> Result<HclweSpec>), ("nhclwe_sampler_chi2", &nhclwe)].into_iter().enumerate()
    {
        let seed = g.seed(1 + j as u64);
        g.check(name, Relation::AtLeast { bound: SIGNIFICANCE }, Some(seed), || {
            let spec = make()?;
            let sampler = HclweSampler::new(spec.clone())?;
            let (edges, probs) = binned_law(&spec, &quantile_edges(&spec, 100));
            let draws = par_draw(m, seed, |rng| sampler.sample(rng)[0]);
            let counts = histogram(draws, &edges);
            let r = chi2_goodness_of_fit(&counts, &probs)?;
            Ok((r.p_value, format!("100 equal-mass bins; {}", chi2_detail(&r, m))))
        });
    }
}

fn clwe_density_or_nan(p: &ClweParams, y: f64, z: f64) -> f64 {
    crate::samplers::clwe_density(p, &[y], z).unwrap_or(f64::NAN)
}

/// Cells for the joint CLWE test: 40 equal-mass bins in `y`, 40 equal bins
/// in `z`, and each cell's probability by quadrature of
/// `ρ(y)·P(z ∈ bin | y)` over the `y` bin.
fn clwe_cells(p: &ClweParams) -> Result<(Vec<f64>, usize, Vec<f64>)> {
    const Y_BINS: usize = 40;
    const Z_BINS: usize = 40;
    const Y_MAX: f64 = 5.0;
    let normal = Normal::new(0.0, UNIT_STD).map_err(|e| Error::Numeric(e.to_string()))?;
    let mut y_edges = vec![-Y_MAX];
    y_edges.extend((1..Y_BINS).map(|i| normal.inverse_cdf(i as f64 / Y_BINS as f64)));
    y_edges.push(Y_MAX);
    let (gamma, beta) = (p.gamma, p.beta);
    // P(γy + e mod 1 ∈ [z0, z1)) for e of width β.
    let cond = |y: f64, z0: f64, z1: f64| {
        let center = gamma * y;
        let k0 = center.floor() as i64;
        (k0 - 3..=k0 + 3)
            .map(|k| gaussian_cdf(beta, center, z1 + k as f64) - gaussian_cdf(beta, center, z0 + k as f64))
            .sum::<f64>()
    };
    let cells: Vec<(usize, usize)> = (0..Y_BINS).flat_map(|i| (0..Z_BINS).map(move |j| (i, j))).collect();
    let probs = cells
        .par_iter()
        .map(|&(i, j)| {
            let (z0, z1) = (j as f64 / Z_BINS as f64, (j + 1) as f64 / Z_BINS as f64);
            integrate(|y| rho_1d(1.0, y) * cond(y, z0, z1), y_edges[i], y_edges[i + 1], &[], QuadConfig::default())
                .map(|r| r.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((y_edges, Z_BINS, probs))
}

fn reduction(g: &mut Group, sizes: &Sizes) {
    const N: usize = 4;
    const GAMMA: f64 = 4.0;
    const BETA: f64 = 0.25;
    let target = sizes.reduction_accepted;
    let setup = || -> Result<(ClweParams, RejectionConfig)> {
        let w = sample_secret_direction(N, &mut seeded(g.seed(0)))?;
        Ok((ClweParams::new(GAMMA, BETA, w)?, RejectionConfig::for_beta(BETA, 0.0)?))
    };
    let (p, cfg) = match setup() {
        Ok(v) => v,
        Err(e) => {
            g.check("reduction_setup", Relation::AtLeast { bound: 0.0 }, None, || Err(e));
            return;
        }
    };

    let seed = g.seed(1);
    let (accepted, attempts, kept) =
        collect_accepted(target, seed, |rng| reject_transform(&p, &cfg, sample_clwe(&p, rng), rng));
    let rate = kept as f64 / attempts as f64;
    let closed = acceptance_probability(&p, &cfg);
    let sigma = binomial_sigma(closed, attempts);
    g.check(
        "acceptance_matches_closed_form",
        Relation::Within { lo: closed - 3.0 * sigma, hi: closed + 3.0 * sigma },
        Some(seed),
        || Ok((rate, format!("{kept} of {attempts} kept; closed form {closed:.6}, sigma {sigma:.2e}"))),
    );
    g.check("acceptance_above_quarter_delta", Relation::Within { lo: cfg.delta / 4.0, hi: 1.0 }, Some(seed), || {
        Ok((rate, format!("delta = {:.6}", cfg.delta)))
    });

    let direct_seed = g.seed(2);
    g.check("reduction_matches_direct_chi2", Relation::AtLeast { bound: SIGNIFICANCE }, Some(direct_seed), || {
        let spec = HclweSpec::new(p.clone(), 0.0, cfg.output_beta(BETA), None)?;
        let sampler = HclweSampler::new(spec.clone())?;
        let direct = par_draw(target, direct_seed, |rng| sampler.sample(rng));
        let (edges, _) = binned_law(&spec, &quantile_edges(&spec, 60));
        let a = histogram(accepted.iter().map(|y| dot(&p.w, y)), &edges);
        let b = histogram(direct.iter().map(|y| dot(&p.w, y)), &edges);
        let r = chi2_two_sample(&a, &b)?;
        Ok((r.p_value, format!("projections on w, 60 equal-mass bins, out_beta = {}; {}", spec.out_beta, chi2_detail(&r, target))))
    });

    let null_seed = g.seed(3);
    let (null_kept, null_attempts, null_acc) = collect_accepted(target, null_seed, |rng| {
        let y: Vec<f64> = (0..N).map(|_| UNIT_STD * rng.sample::<f64, _>(StandardNormal)).collect();
        let z: f64 = rng.random();
        reject_transform_null(&cfg, y, z, rng)
    });
    let null_rate = null_acc as f64 / null_attempts as f64;
    let null_closed = null_acceptance_probability(&cfg);
    let null_sigma = binomial_sigma(null_closed, null_attempts);
    g.check(
        "null_acceptance_matches_closed_form",
        Relation::Within { lo: null_closed - 3.0 * null_sigma, hi: null_closed + 3.0 * null_sigma },
        Some(null_seed),
        || Ok((null_rate, format!("{null_acc} of {null_attempts} kept; delta/M = {null_closed:.6}"))),
    );
    for i in 0..N {
        g.check(&format!("null_output_coordinate_{i}_ks"), Relation::AtLeast { bound: SIGNIFICANCE }, Some(null_seed), || {
            let xs: Vec<f64> = null_kept.iter().map(|y| y[i]).collect();
            let r = ks_one_sample(&xs, |t| gaussian_cdf(1.0, 0.0, t))?;
            Ok((r.p_value, format!("D = {:.5}, samples = {}", r.statistic, r.n)))
        });
    }
}

/// Desk parameters shared by the TVD, oracle and distinguisher groups.
const DESK_N: usize = 16;
const DESK_GAMMA: f64 = 8.0;
const DESK_OUT_BETA: f64 = 0.02;
const DESK_D: u32 = 8;

fn desk_mixture(n: usize, out_beta: f64, seed: u64) -> Result<MixtureParams> {
    let w = sample_secret_direction(n, &mut seeded(seed))?;
    MixtureParams::new(ClweParams::new(DESK_GAMMA, 0.5 * out_beta, w)?, out_beta, None)
}

fn truncation(g: &mut Group) {
    let bound = truncation_tvd_bound(DESK_OUT_BETA);
    for c in [0.0, 0.5] {
        g.check(&format!("hclwe_nhclwe_tvd_c{c}"), Relation::Below { bound }, None, || {
            let base = HclweSpec::new(ClweParams::new(DESK_GAMMA, 0.5 * DESK_OUT_BETA, vec![1.0])?, c, DESK_OUT_BETA, None)?;
            let r = projection_tvd(&base, &base.clone().truncated())?;
            Ok((r.value, format!("quadrature error estimate {:.2e}; bound 8·exp(−1/(400β²))", r.error_estimate)))
        });
    }
}

/// Whether `5β² < 3γ²` for the exact values of the given floats.
fn exact_criterion(gamma: f64, beta: f64) -> bool {
    let g = BigRational::from_float(gamma).expect("finite");
    let b = BigRational::from_float(beta).expect("finite");
    let five = BigRational::from_integer(5.into());
    let three = BigRational::from_integer(3.into());
    five * &b * &b < three * &g * &g
}

/// The adjacent floats `(lo, hi)` with `lo` meeting `5β² < 3γ²` and `hi` not.
fn boundary_pair(gamma: f64) -> (f64, f64) {
    let mut b = gamma * 0.6f64.sqrt();
    while exact_criterion(gamma, b) {
        b = f64::from_bits(b.to_bits() + 1);
    }
    while !exact_criterion(gamma, b) {
        b = f64::from_bits(b.to_bits() - 1);
    }
    (b, f64::from_bits(b.to_bits() + 1))
}

fn geometry(g: &mut Group, sizes: &Sizes, grid: &[GridPoint]) {
    g.check("disjointness_matches_criterion", Relation::AtMost { bound: 0.0 }, None, || {
        let mut mismatches = 0usize;
        let mut points = 0usize;
        let mut boundary = 0usize;
        for i in 0..20 {
            let gamma = 0.5 * 24f64.powf(i as f64 / 19.0);
            let (lo, hi) = boundary_pair(gamma);
            let mut betas: Vec<f64> = (1..=18).map(|j| gamma * j as f64 / 18.0).collect();
            betas.extend([lo, hi]);
            for b in betas {
                points += 1;
                let got = supports_disjoint(gamma, b, None, 0.0, 0.5)?;
                if got != exact_criterion(gamma, b) {
                    mismatches += 1;
                }
            }
            boundary += (supports_disjoint(gamma, lo, None, 0.0, 0.5)? && !supports_disjoint(gamma, hi, None, 0.0, 0.5)?)
                as usize;
        }
        Ok((
            mismatches as f64,
            format!("{points} (gamma, beta) points, beta <= gamma; {boundary}/20 boundary pairs split correctly"),
        ))
    });

    let m = sizes.geometry_samples;
    let seed = g.seed(0);
    let sample = || -> Result<(usize, usize, usize)> {
        let p = desk_mixture(DESK_N, 0.04, g.seed(1))?;
        let fam = build_intervals(&p)?;
        let ds = generate_mixture(&p, m, seed)?;
        let (both, stray) = (0..ds.len())
            .into_par_iter()
            .map(|i| {
                let t = dot(p.w(), ds.x(i));
                let (plus, minus) = (fam.plus_band(t), fam.minus_band(t));
                let own = match ds.labels()[i] {
                    Label::Plus => plus.is_some(),
                    Label::Minus => minus.is_some(),
                };
                ((plus.is_some() && minus.is_some()) as usize, (!own) as usize)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        Ok((both, stray, ds.len()))
    };
    let counts = sample();
    g.check("points_in_both_families", Relation::AtMost { bound: 0.0 }, Some(seed), || {
        let (both, _, len) = clone_counts(&counts)?;
        Ok((both as f64, format!("{len} samples at gamma = 8, out_beta = 0.04, n = {DESK_N}")))
    });
    g.check("points_outside_own_family", Relation::AtMost { bound: 0.0 }, Some(seed), || {
        let (_, stray, len) = clone_counts(&counts)?;
        Ok((stray as f64, format!("{len} samples")))
    });

    for (j, pt) in grid.iter().enumerate() {
        let label = format!("grid_gamma{}_beta{}", pt.gamma, pt.out_beta);
        g.check(&format!("{label}_margin"), Relation::Above { bound: 0.0 }, None, || {
            let v = support_margin(pt.gamma, pt.out_beta, None, 0.0, 0.5)?;
            Ok((
                v,
                format!(
                    "gap − 2·alpha; beta² = {:.6e} vs (3/5)·gamma² = {:.6e}",
                    pt.out_beta * pt.out_beta,
                    0.6 * pt.gamma * pt.gamma
                ),
            ))
        });
        let seed = g.seed(100 + j as u64);
        g.check(&format!("{label}_overlap_count"), Relation::AtMost { bound: 0.0 }, Some(seed), || {
            let w = sample_secret_direction(4, &mut seeded(seed))?;
            let p = MixtureParams::new(ClweParams::new(pt.gamma, 0.5 * pt.out_beta, w)?, pt.out_beta, None)?;
            let fam = build_intervals(&p)?;
            let ds = generate_mixture(&p, sizes.grid_samples, seed)?;
            let both = ds
                .iter()
                .filter(|(x, _)| {
                    let t = dot(p.w(), x);
                    fam.plus_band(t).is_some() && fam.minus_band(t).is_some()
                })
                .count();
            Ok((both as f64, format!("{} samples, n = 4", sizes.grid_samples)))
        });
    }
}

fn clone_counts(r: &Result<(usize, usize, usize)>) -> Result<(usize, usize, usize)> {
    match r {
        Ok(v) => Ok(*v),
        Err(e) => Err(Error::Numeric(format!("sampling failed: {e}"))),
    }
}

fn oracle(g: &mut Group, sizes: &Sizes) {
    let m = sizes.oracle_samples;
    let seed = g.seed(1);
    let setup = || -> Result<_> {
        let p = desk_mixture(DESK_N, DESK_OUT_BETA, g.seed(0))?;
        let o = build_oracle(&build_intervals(&p)?, p.w().to_vec(), DESK_D)?;
        let exact = oracle_error_exact(&p, DESK_D)?;
        let bound = oracle_error_bound(&p, DESK_D);
        let ds = generate_mixture(&p, m, seed)?;
        Ok((o, exact, bound, ds))
    };
    let (o, exact, bound, ds) = match setup() {
        Ok(v) => v,
        Err(e) => {
            g.check("oracle_setup", Relation::AtLeast { bound: 0.0 }, None, || Err(e));
            return;
        }
    };
    let sigma = binomial_sigma(exact, m as u64);
    g.check(
        "oracle_error_matches_exact",
        Relation::Within { lo: exact - 3.0 * sigma, hi: exact + 3.0 * sigma },
        Some(seed),
        || {
            let e = empirical_error(&o, ds.view())?;
            Ok((e.value, format!("{} of {} misclassified; exact {exact:.10}, sigma {sigma:.2e}", e.errors, e.m)))
        },
    );
    g.check("exact_error_below_tail_bound", Relation::AtMost { bound }, None, || {
        Ok((exact, "exp(−π d²/(β² + γ²)) with d = 8".into()))
    });
    g.check("misclassified_iff_always_wrong", Relation::AtMost { bound: 0.0 }, Some(seed), || {
        let (exceptions, wrong) = (0..ds.len())
            .into_par_iter()
            .map(|i| {
                let x = ds.x(i);
                let miss = o.classify(x) != ds.labels()[i];
                let class = o.conditional_error_class(x);
                ((miss != (class == ErrorClass::AlwaysWrong)) as usize, miss as usize)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        Ok((exceptions as f64, format!("{wrong} misclassified of {}", ds.len())))
    });
}

fn embedding(g: &mut Group, sizes: &Sizes) {
    const N: usize = 4;
    const GAMMA: f64 = 4.0;
    const OUT_BETA: f64 = 0.5;
    const D: u32 = 2;
    const EXCLUDE: f64 = 1e-9;
    let setup = || -> Result<_> {
        let w = sample_secret_direction(N, &mut seeded(g.seed(0)))?;
        let p = MixtureParams::new(ClweParams::new(GAMMA, 0.5 * OUT_BETA, w)?, OUT_BETA, None)?;
        let o = build_oracle(&build_intervals(&p)?, p.w().to_vec(), D)?;
        let spec = EmbeddingSpec::new(N, 4 * D as usize, None)?;
        let weights = ltf_weights(&o, &spec)?;
        Ok((p, o, spec, weights))
    };
    let (p, o, spec, weights) = match setup() {
        Ok(v) => v,
        Err(e) => {
            g.check("embedding_setup", Relation::AtLeast { bound: 0.0 }, None, || Err(e));
            return;
        }
    };
    let compare = |points: &[Vec<f64>]| -> Result<(usize, usize)> {
        points
            .par_iter()
            .map(|x| {
                if o.root_distance(dot(&o.w, x)) < EXCLUDE {
                    return Ok((0, 1));
                }
                let phi = spec.embed(x)?;
                Ok(((Label::of(dot(&weights, &phi)) != o.classify(x)) as usize, 0))
            })
            .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))
    };
    let detail = |excluded: usize, total: usize| {
        format!("{excluded} of {total} points within {EXCLUDE:e} of a root excluded; degree {}, {} monomials", spec.deg, spec.dim)
    };

    let seed = g.seed(1);
    g.check("ltf_matches_oracle_uniform_points", Relation::AtMost { bound: 0.0 }, Some(seed), || {
        let pts = par_draw(sizes.embed_points, seed, |rng| (0..N).map(|_| rng.random_range(-1.0..1.0)).collect());
        let (bad, excluded) = compare(&pts)?;
        Ok((bad as f64, detail(excluded, pts.len())))
    });
    let seed = g.seed(2);
    g.check("ltf_matches_oracle_dataset", Relation::AtMost { bound: 0.0 }, Some(seed), || {
        let ds = generate_mixture(&p, sizes.embed_dataset, seed)?;
        let pts: Vec<Vec<f64>> = ds.iter().map(|(x, _)| x.to_vec()).collect();
        let (bad, excluded) = compare(&pts)?;
        Ok((bad as f64, detail(excluded, pts.len())))
    });
}

const TAU: f64 = 0.1;

fn distinguisher(g: &mut Group, sizes: &Sizes) {
    let p = match desk_mixture(DESK_N, DESK_OUT_BETA, g.seed(0)) {
        Ok(p) => p,
        Err(e) => {
            g.check("distinguisher_setup", Relation::AtLeast { bound: 0.0 }, None, || Err(e));
            return;
        }
    };
    let oracle_dist = || -> Result<HoeffdingDistinguisher> {
        let o = build_oracle(&build_intervals(&p)?, p.w().to_vec(), DESK_D)?;
        Ok(HoeffdingDistinguisher(DistinguisherConfig::new(TAU, Learner::Oracle(Box::new(o)))?))
    };
    let trials = sizes.dist_trials;
    let need = (0.95 * trials as f64).ceil();
    let seed = g.seed(1);
    let cfg = AdvantageConfig { trials, m: sizes.dist_m, seed };
    let report = oracle_dist().and_then(|d| advantage_report(&d, &p, &cfg));
    let counts = report.as_ref().map(|r| (r.planted_said_null, r.null_said_null, r.advantage)).map_err(|e| e.to_string());
    let fetch = || counts.clone().map_err(Error::Numeric);
    g.check("oracle_says_planted_on_planted", Relation::AtLeast { bound: need }, Some(seed), || {
        let (pn, _, _) = fetch()?;
        Ok(((trials as u64 - pn) as f64, format!("{trials} trials, m = {}, tau = {TAU}", cfg.m)))
    });
    g.check("oracle_says_null_on_null", Relation::AtLeast { bound: need }, Some(seed), || {
        let (_, nn, _) = fetch()?;
        Ok((nn as f64, format!("{trials} trials, m = {}, tau = {TAU}", cfg.m)))
    });
    g.check("oracle_advantage", Relation::AtLeast { bound: 0.9 }, Some(seed), || {
        let (_, _, adv) = fetch()?;
        Ok((adv, "|P(null | planted) − P(null | null)|".into()))
    });

    let seed = g.seed(2);
    let shift_cfg = AdvantageConfig { trials, m: sizes.shift_m, seed };
    let shift = oracle_dist().and_then(|d| truncation_shift(&d, &p, &shift_cfg));
    let allowed = shift.as_ref().map_or(f64::NAN, |s| s.tvd_dataset + s.sigma3);
    g.check("truncation_shift_within_tvd", Relation::AtMost { bound: if allowed.is_finite() { allowed } else { 0.0 } }, Some(seed), || {
        let s = shift.as_ref().map_err(|e| Error::Numeric(e.to_string()))?;
        Ok((
            s.shift,
            format!(
                "advantage {:.4} truncated vs {:.4} untruncated; m·TVD = {:.3e}, 3 sigma = {:.4}",
                s.truncated.advantage, s.untruncated.advantage, s.tvd_dataset, s.sigma3
            ),
        ))
    });

    let seed = g.seed(3);
    g.check("coin_flip_interval_reaches_small_advantage", Relation::AtMost { bound: 0.1 }, Some(seed), || {
        let r = advantage_report(&CoinFlipDistinguisher, &p, &AdvantageConfig { trials: sizes.coin_trials, m: 0, seed })?;
        Ok((r.interval.0, format!("advantage {:.4}, 95% interval [{:.4}, {:.4}]", r.advantage, r.interval.0, r.interval.1)))
    });
}

fn baselines(g: &mut Group, sizes: &Sizes) {
    const N: usize = 32;
    let gamma = 2.0 * (N as f64).sqrt();
    let beta = 1.0 / N as f64;
    for i in 0..sizes.baseline_seeds {
        let seed = g.seed(i as u64);
        let run = || -> Result<_> {
            let w = sample_secret_direction(N, &mut seeded(seed))?;
            let p = MixtureParams::new(ClweParams::new(gamma, beta, w)?, 2.0 * beta, None)?;
            generate_mixture(&p, sizes.baseline_m, trial_seed(seed, 1))
        };
        let ds = run();
        for kind in [LearnerKind::Perceptron, LearnerKind::LogisticGd] {
            let tag = match kind {
                LearnerKind::Perceptron => "perceptron",
                _ => "logistic_gd",
            };
            g.check(&format!("{tag}_heldout_error_seed{i}"), Relation::Within { lo: 0.48, hi: 0.52 }, Some(seed), || {
                let ds = ds.as_ref().map_err(|e| Error::Numeric(e.to_string()))?;
                let (train, test) = ds.view().split(0.5);
                let h = train_baseline(&LearnerSpec::new(kind, seed), train)?;
                let e = empirical_error(&h, test)?;
                Ok((e.value, format!("{} of {} held-out errors, n = {N}, m = {}", e.errors, e.m, sizes.baseline_m)))
            });
        }
    }
}

const POOL_SIZES: [usize; 3] = [1, 2, 8];

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Numeric(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn reproducibility(g: &mut Group) {
    let seed = g.seed(0);
    g.check("dataset_bytes_thread_invariant", Relation::AtMost { bound: 0.0 }, Some(seed), || {
        let p = desk_mixture(DESK_N, DESK_OUT_BETA, seed)?;
        let build = || -> Result<Vec<Vec<u8>>> {
            let ds = generate_mixture(&p, REPRO_M, seed)?;
            let null = generate_null(DESK_N, REPRO_M, seed)?;
            Ok(vec![encode_dataset(&ds), encode_secret(&ds.manifest, p.w()), encode_dataset(&null)])
        };
        let runs = POOL_SIZES.iter().map(|&t| in_pool(t, build)?).collect::<Result<Vec<_>>>()?;
        let differing = runs.iter().skip(1).filter(|r| **r != runs[0]).count();
        Ok((differing as f64, format!("m = {REPRO_M}, pools of {POOL_SIZES:?} threads, planted + secret + null files")))
    });

    let seed = g.seed(1);
    g.check("report_thread_invariant", Relation::AtMost { bound: 0.0 }, Some(seed), || {
        let plan = VerifyPlan { scale: Scale::Quick, seed, criteria: vec![6, 8, 9], grid: Vec::new() };
        let runs = POOL_SIZES
            .iter()
            .map(|&t| in_pool(t, || verify_all(&plan).canonical().to_json()))
            .collect::<Result<Vec<_>>>()?;
        let differing = runs.iter().skip(1).filter(|r| **r != runs[0]).count();
        Ok((
            differing as f64,
            format!("quick oracle, distinguisher and baseline groups under pools of {POOL_SIZES:?} threads, runtimes removed"),
        ))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(criteria: Vec<u8>, grid: Vec<GridPoint>) -> VerifyPlan {
        VerifyPlan { scale: Scale::Quick, seed: 3, criteria, grid }
    }

    #[test]
    fn quick_report_round_trips() {
        let r = verify_all(&plan(vec![1, 4], Vec::new()));
        assert!(r.pass, "{}", r.to_json());
        assert_eq!(r.criteria.len(), 2);
        let back = VerificationReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn violating_grid_point_fails_alone() {
        let grid = vec![GridPoint { gamma: 8.0, out_beta: 0.02 }, GridPoint { gamma: 8.0, out_beta: 7.0 }];
        let r = verify_all(&plan(vec![1, 5], grid));
        let failed: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["grid_gamma8_beta7_margin", "grid_gamma8_beta7_overlap_count"], "{}", r.to_json());
        assert!(!r.pass);
        let c1 = r.criteria.iter().find(|c| c.id == 1).unwrap();
        assert!(c1.checks_pass);
        assert!(r.checks.iter().find(|c| c.name == "grid_gamma8_beta7_margin").unwrap().measured.unwrap() < 0.0);
        assert!(r.checks.iter().find(|c| c.name == "grid_gamma8_beta7_overlap_count").unwrap().detail.contains("beta² <"));
    }

    #[test]
    fn tampered_reports_are_rejected() {
        let r = verify_all(&plan(vec![1], Vec::new()));
        let mut bad = r.clone();
        bad.checks[0].pass = !bad.checks[0].pass;
        assert!(VerificationReport::from_json(&bad.to_json()).is_err());
        let mut bad = r.clone();
        bad.pass = !bad.pass;
        assert!(VerificationReport::from_json(&bad.to_json()).is_err());
        let mut bad = r.clone();
        bad.format_version = 9;
        assert!(matches!(VerificationReport::from_json(&bad.to_json()), Err(FormatError::VersionMismatch { .. })));
        assert!(VerificationReport::from_json("{").is_err());
    }

    #[test]
    fn canonical_drops_only_timing() {
        let r = verify_all(&plan(vec![1], Vec::new()));
        let c = r.canonical();
        assert!(c.checks.iter().all(|k| k.runtime_s == 0.0));
        assert_eq!(c.checks.len(), r.checks.len());
        for (a, b) in c.checks.iter().zip(&r.checks) {
            assert_eq!(a.measured, b.measured);
        }
    }

    #[test]
    fn boundary_pair_is_adjacent() {
        for gamma in [0.5, 1.0, 8.0, 11.3] {
            let (lo, hi) = boundary_pair(gamma);
            assert!(exact_criterion(gamma, lo) && !exact_criterion(gamma, hi));
            assert_eq!(hi.to_bits(), lo.to_bits() + 1);
            assert!(supports_disjoint(gamma, lo, None, 0.0, 0.5).unwrap());
            assert!(!supports_disjoint(gamma, hi, None, 0.0, 0.5).unwrap());
        }
    }

    #[test]
    fn relations() {
        assert!(Relation::Below { bound: 1.0 }.holds(0.5));
        assert!(!Relation::Below { bound: 1.0 }.holds(1.0));
        assert!(Relation::AtMost { bound: 1.0 }.holds(1.0));
        assert!(!Relation::Above { bound: 0.0 }.holds(0.0));
        assert!(Relation::Within { lo: 0.48, hi: 0.52 }.holds(0.5));
        assert!(!Relation::Within { lo: 0.48, hi: 0.52 }.holds(0.47));
    }
}
