//! The labeled hard instance `½(D₊, +1) + ½(D₋, −1)`, its null
//! counterpart, the monomial embedding, and dataset files.

mod embedding;
mod format;

pub use embedding::{monomial_count, EmbeddingSpec, MonomialOrder};
pub use format::{
    decode_dataset, decode_manifest, decode_secret, encode_dataset, encode_secret, read_dataset, read_manifest,
    read_secret, secret_digest, write_dataset, write_secret, DATASET_FORMAT_VERSION, MAGIC,
};

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::supports_disjoint;
use crate::rng::{shard_rng, SHARD_SIZE};
use crate::samplers::{ClweParams, HclweSampler, HclweSpec, UNIT_STD};

/// A `±1` label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Plus,
    Minus,
}

impl Label {
    pub fn as_i8(self) -> i8 {
        match self {
            Label::Plus => 1,
            Label::Minus => -1,
        }
    }

    pub fn from_i8(v: i8) -> Option<Self> {
        match v {
            1 => Some(Label::Plus),
            -1 => Some(Label::Minus),
            _ => None,
        }
    }

    pub fn sign(self) -> f64 {
        self.as_i8() as f64
    }

    /// `+1` for nonnegative values.
    pub fn of(v: f64) -> Self {
        if v < 0.0 {
            Label::Minus
        } else {
            Label::Plus
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Label::Plus => Label::Minus,
            Label::Minus => Label::Plus,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub x: Vec<f64>,
    pub label: Label,
}

/// The two truncated families with phases `c₊` (label `+1`) and `c₋`
/// (label `−1`) sharing one secret direction and radius.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureParams {
    pub plus: HclweSpec,
    pub minus: HclweSpec,
    /// Explicit radius; `None` means the default `γ/(10(γ² + β²))`.
    pub alpha_override: Option<f64>,
}

impl MixtureParams {
    /// Default phases `c₊ = 0`, `c₋ = 1/2`.
    pub fn new(base: ClweParams, out_beta: f64, alpha: Option<f64>) -> Result<Self> {
        Self::with_phases(base, out_beta, alpha, 0.0, 0.5)
    }

    pub fn with_phases(base: ClweParams, out_beta: f64, alpha: Option<f64>, c_plus: f64, c_minus: f64) -> Result<Self> {
        let p = Self::with_phases_unchecked(base, out_beta, alpha, c_plus, c_minus)?;
        p.check_disjoint()?;
        Ok(p)
    }

    /// Same as [`MixtureParams::with_phases`] without the disjointness check.
    /// Only [`generate_mixture_unchecked`] accepts overlapping parameters.
    pub fn with_phases_unchecked(
        base: ClweParams,
        out_beta: f64,
        alpha: Option<f64>,
        c_plus: f64,
        c_minus: f64,
    ) -> Result<Self> {
        let radius = alpha.unwrap_or_else(|| HclweSpec::default_alpha(base.gamma, out_beta));
        let plus = HclweSpec::new(base.clone(), c_plus, out_beta, Some(radius))?;
        let minus = HclweSpec::new(base, c_minus, out_beta, Some(radius))?;
        Ok(MixtureParams { plus, minus, alpha_override: alpha })
    }

    /// Errors with the violated inequality unless the two supports are disjoint.
    pub fn check_disjoint(&self) -> Result<()> {
        let (g, b) = (self.gamma(), self.out_beta());
        if supports_disjoint(g, b, self.alpha_override, self.plus.c, self.minus.c)? {
            return Ok(());
        }
        let msg = match self.alpha_override {
            None if self.plus.c == 0.0 && self.minus.c == 0.5 => format!(
                "supports overlap: need beta² < (3/5)·gamma², got beta² = {} ≥ {} = (3/5)·gamma² (beta = {b}, gamma = {g})",
                b * b,
                0.6 * g * g
            ),
            _ => format!(
                "supports overlap: gap between interval families does not exceed 2·alpha = {} (gamma = {g}, beta = {b})",
                2.0 * self.alpha()
            ),
        };
        Err(Error::Precondition(msg))
    }

    pub fn gamma(&self) -> f64 {
        self.plus.gamma()
    }

    pub fn out_beta(&self) -> f64 {
        self.plus.out_beta
    }

    pub fn alpha(&self) -> f64 {
        self.plus.alpha.expect("mixture families are truncated")
    }

    pub fn n(&self) -> usize {
        self.plus.base.n
    }

    pub fn w(&self) -> &[f64] {
        self.plus.w()
    }

    pub fn spec_for(&self, label: Label) -> &HclweSpec {
        match label {
            Label::Plus => &self.plus,
            Label::Minus => &self.minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Planted,
    Null,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PayloadKind {
    Samples,
    Secret,
}

impl PayloadKind {
    pub fn name(self) -> &'static str {
        match self {
            PayloadKind::Samples => "samples",
            PayloadKind::Secret => "secret",
        }
    }
}

/// Parameters and provenance stored at the head of every dataset file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub format_version: u16,
    pub payload: PayloadKind,
    pub mode: Mode,
    /// Length of each stored feature vector.
    pub n: usize,
    pub m: usize,
    pub gamma: Option<f64>,
    pub beta: Option<f64>,
    pub out_beta: Option<f64>,
    pub alpha: Option<f64>,
    pub c_plus: Option<f64>,
    pub c_minus: Option<f64>,
    /// Whether the families were truncated (planted mode only).
    pub truncated: Option<bool>,
    pub seed: u64,
    pub shard_size: usize,
    pub embedding: Option<EmbeddingSpec>,
    /// Hex SHA-256 of the secret direction's little-endian bytes.
    pub secret_digest: Option<String>,
}

impl DatasetManifest {
    fn null(n: usize, m: usize, seed: u64) -> Self {
        DatasetManifest {
            format_version: DATASET_FORMAT_VERSION,
            payload: PayloadKind::Samples,
            mode: Mode::Null,
            n,
            m,
            gamma: None,
            beta: None,
            out_beta: None,
            alpha: None,
            c_plus: None,
            c_minus: None,
            truncated: None,
            seed,
            shard_size: SHARD_SIZE,
            embedding: None,
            secret_digest: None,
        }
    }

    /// Length of the vectors before any embedding.
    pub fn ambient_n(&self) -> usize {
        self.embedding.as_ref().map_or(self.n, |e| e.n)
    }
}

/// Borrowed rows of a dataset.
#[derive(Debug, Clone, Copy)]
pub struct SampleView<'a> {
    n: usize,
    features: &'a [f64],
    labels: &'a [Label],
}

impl<'a> SampleView<'a> {
    pub fn new(n: usize, features: &'a [f64], labels: &'a [Label]) -> Result<Self> {
        if n == 0 || features.len() != n * labels.len() {
            return Err(Error::Domain(format!(
                "{} features do not form {} rows of width {n}",
                features.len(),
                labels.len()
            )));
        }
        Ok(SampleView { n, features, labels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn x(&self, i: usize) -> &'a [f64] {
        &self.features[i * self.n..(i + 1) * self.n]
    }

    pub fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    pub fn labels(&self) -> &'a [Label] {
        self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'a [f64], Label)> + 'a {
        self.features.chunks_exact(self.n).zip(self.labels.iter().copied())
    }

    /// First `⌊frac·len⌋` rows and the rest.
    pub fn split(&self, frac: f64) -> (SampleView<'a>, SampleView<'a>) {
        let cut = ((self.len() as f64) * frac).floor() as usize;
        let cut = cut.min(self.len());
        let (fa, fb) = self.features.split_at(cut * self.n);
        let (la, lb) = self.labels.split_at(cut);
        (
            SampleView { n: self.n, features: fa, labels: la },
            SampleView { n: self.n, features: fb, labels: lb },
        )
    }
}

/// Samples stored row-major with their manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub manifest: DatasetManifest,
    features: Vec<f64>,
    labels: Vec<Label>,
}

impl Dataset {
    pub fn from_parts(manifest: DatasetManifest, features: Vec<f64>, labels: Vec<Label>) -> Result<Self> {
        if manifest.m != labels.len() {
            return Err(Error::Domain(format!("manifest m = {} but {} labels", manifest.m, labels.len())));
        }
        if manifest.n == 0 || features.len() != manifest.n * labels.len() {
            return Err(Error::Domain(format!(
                "manifest n = {} does not match {} features over {} samples",
                manifest.n,
                features.len(),
                labels.len()
            )));
        }
        Ok(Dataset { manifest, features, labels })
    }

    pub fn n(&self) -> usize {
        self.manifest.n
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn view(&self) -> SampleView<'_> {
        SampleView { n: self.n(), features: &self.features, labels: &self.labels }
    }

    pub fn x(&self, i: usize) -> &[f64] {
        self.view().x(i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], Label)> + '_ {
        self.features.chunks_exact(self.n()).zip(self.labels.iter().copied())
    }

    pub fn sample(&self, i: usize) -> LabeledSample {
        LabeledSample { x: self.x(i).to_vec(), label: self.labels[i] }
    }

    /// Replaces every feature vector by its monomial embedding.
    pub fn embedded(&self, spec: &EmbeddingSpec) -> Result<Dataset> {
        if spec.n != self.n() {
            return Err(Error::Domain(format!("embedding expects n = {}, dataset has n = {}", spec.n, self.n())));
        }
        let mut features = vec![0.0; spec.dim * self.len()];
        features
            .par_chunks_mut(spec.dim)
            .zip(self.features.par_chunks(self.n()))
            .try_for_each(|(out, x)| spec.embed_into(x, out))?;
        let mut manifest = self.manifest.clone();
        manifest.n = spec.dim;
        manifest.embedding = Some(spec.clone());
        Dataset::from_parts(manifest, features, self.labels.clone())
    }
}

fn shard_count(m: usize) -> usize {
    m.div_ceil(SHARD_SIZE)
}

/// Runs `fill` over fixed-size shards in parallel, each with its own stream.
fn generate_sharded<F>(n: usize, m: usize, seed: u64, fill: F) -> (Vec<f64>, Vec<Label>)
where
    F: Fn(&mut crate::rng::SampleRng, &mut [f64]) -> Label + Sync,
{
    let mut features = vec![0.0; n * m];
    let mut labels = vec![Label::Plus; m];
    features
        .par_chunks_mut(n * SHARD_SIZE)
        .zip(labels.par_chunks_mut(SHARD_SIZE))
        .enumerate()
        .for_each(|(shard, (fchunk, lchunk))| {
            let mut rng = shard_rng(seed, shard as u64);
            for (x, l) in fchunk.chunks_exact_mut(n).zip(lchunk.iter_mut()) {
                *l = fill(&mut rng, x);
            }
        });
    debug_assert_eq!(shard_count(m), labels.chunks(SHARD_SIZE).len());
    (features, labels)
}

/// `m` independent samples: a fair coin picks the label, then `x` is drawn
/// from the matching family. Shards of [`SHARD_SIZE`] samples use stream
/// `shard` under `seed`, so the result does not depend on the thread count.
pub fn generate_mixture(p: &MixtureParams, m: usize, seed: u64) -> Result<Dataset> {
    p.check_disjoint()?;
    generate_labeled(p, m, seed, true)
}

/// [`generate_mixture`] without the disjointness check. With overlapping
/// supports the labels are no longer a function of `x`.
pub fn generate_mixture_unchecked(p: &MixtureParams, m: usize, seed: u64) -> Result<Dataset> {
    generate_labeled(p, m, seed, true)
}

/// Same as [`generate_mixture`] with the truncation removed from both
/// families. Used to measure how much truncation moves a distinguisher.
pub fn generate_untruncated_mixture(p: &MixtureParams, m: usize, seed: u64) -> Result<Dataset> {
    generate_labeled(p, m, seed, false)
}

fn generate_labeled(p: &MixtureParams, m: usize, seed: u64, truncated: bool) -> Result<Dataset> {
    let prep = |s: &HclweSpec| if truncated { s.clone() } else { s.clone().untruncated() };
    let plus = HclweSampler::new(prep(&p.plus))?;
    let minus = HclweSampler::new(prep(&p.minus))?;
    let n = p.n();
    let (features, labels) = generate_sharded(n, m, seed, |rng, x| {
        if rng.random::<bool>() {
            plus.sample_into(rng, x);
            Label::Plus
        } else {
            minus.sample_into(rng, x);
            Label::Minus
        }
    });
    let manifest = DatasetManifest {
        mode: Mode::Planted,
        gamma: Some(p.gamma()),
        beta: Some(p.plus.base.beta),
        out_beta: Some(p.out_beta()),
        alpha: Some(p.alpha()),
        c_plus: Some(p.plus.c),
        c_minus: Some(p.minus.c),
        truncated: Some(truncated),
        secret_digest: Some(secret_digest(p.w())),
        ..DatasetManifest::null(n, m, seed)
    };
    Dataset::from_parts(manifest, features, labels)
}

/// `x ~ N(0, I/(2π))` with an independent fair label.
pub fn generate_null(n: usize, m: usize, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let (features, labels) = generate_sharded(n, m, seed, |rng, x| {
        let label = if rng.random::<bool>() { Label::Plus } else { Label::Minus };
        for v in x.iter_mut() {
            *v = UNIT_STD * rng.sample::<f64, _>(StandardNormal);
        }
        label
    });
    Dataset::from_parts(DatasetManifest::null(n, m, seed), features, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(n: usize, gamma: f64) -> ClweParams {
        let mut w = vec![0.0; n];
        w[0] = 0.6;
        w[n - 1] = 0.8;
        ClweParams::new(gamma, 0.01, w).unwrap()
    }

    #[test]
    fn label_codec() {
        assert_eq!(Label::from_i8(1), Some(Label::Plus));
        assert_eq!(Label::from_i8(-1), Some(Label::Minus));
        assert_eq!(Label::from_i8(0), None);
        assert_eq!(Label::of(0.0), Label::Plus);
        assert_eq!(Label::Plus.flip(), Label::Minus);
    }

    #[test]
    fn overlap_is_reported_with_inequality() {
        let err = MixtureParams::new(base(2, 8.0), 7.0, None).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("(3/5)"), "{msg}");
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn manifest_matches_shape() {
        let p = MixtureParams::new(base(3, 8.0), 0.04, None).unwrap();
        let ds = generate_mixture(&p, 1000, 5).unwrap();
        assert_eq!(ds.manifest.m, 1000);
        assert_eq!(ds.manifest.n, 3);
        assert_eq!(ds.len(), 1000);
        assert_eq!(ds.manifest.mode, Mode::Planted);
        assert_eq!(ds.manifest.secret_digest.as_deref(), Some(secret_digest(p.w()).as_str()));
    }

    #[test]
    fn generation_is_deterministic_across_shards() {
        let p = MixtureParams::new(base(2, 8.0), 0.04, None).unwrap();
        let m = SHARD_SIZE * 2 + 17;
        let a = generate_mixture(&p, m, 99).unwrap();
        let b = generate_mixture(&p, m, 99).unwrap();
        assert_eq!(a, b);
        let c = generate_mixture(&p, m, 100).unwrap();
        assert_ne!(a.features(), c.features());
    }

    #[test]
    fn split_and_view() {
        let ds = generate_null(2, 10, 1).unwrap();
        let (a, b) = ds.view().split(0.5);
        assert_eq!((a.len(), b.len()), (5, 5));
        assert_eq!(b.x(0), ds.x(5));
        assert_eq!(ds.iter().count(), 10);
        assert!(SampleView::new(3, &[0.0; 5], &[Label::Plus; 2]).is_err());
    }

    #[test]
    fn from_parts_checks_manifest() {
        let ds = generate_null(2, 4, 1).unwrap();
        let mut bad = ds.manifest.clone();
        bad.m = 5;
        assert!(Dataset::from_parts(bad, ds.features().to_vec(), ds.labels().to_vec()).is_err());
    }
}
