//! Baseline learners and the hypotheses they produce.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{EmbeddingSpec, Label, SampleView};
use crate::oracle::OraclePtf;
use crate::rng::seeded;
use crate::samplers::dot;

/// Anything that labels a feature vector.
pub trait Classifier: Sync {
    fn predict(&self, x: &[f64]) -> Label;
}

impl<F: Fn(&[f64]) -> Label + Sync> Classifier for F {
    fn predict(&self, x: &[f64]) -> Label {
        self(x)
    }
}

impl Classifier for OraclePtf {
    fn predict(&self, x: &[f64]) -> Label {
        self.classify(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum LearnerKind {
    Perceptron,
    AveragedPerceptron,
    LogisticGd,
    /// Perceptron over all monomials of degree at most `degree`.
    PolyKernelPerceptron { degree: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerSpec {
    pub kind: LearnerKind,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl LearnerSpec {
    pub fn new(kind: LearnerKind, seed: u64) -> Self {
        let (epochs, learning_rate) = match kind {
            LearnerKind::LogisticGd => (300, 2.0),
            _ => (5, 1.0),
        };
        LearnerSpec { kind, epochs, learning_rate, seed }
    }
}

/// A trained classifier.
#[derive(Debug, Clone, PartialEq)]
pub enum Hypothesis {
    Constant(Label),
    Linear { weights: Vec<f64>, bias: f64 },
    Polynomial { embedding: EmbeddingSpec, weights: Vec<f64>, bias: f64 },
    Oracle(Box<OraclePtf>),
}

impl Classifier for Hypothesis {
    fn predict(&self, x: &[f64]) -> Label {
        match self {
            Hypothesis::Constant(l) => *l,
            Hypothesis::Linear { weights, bias } => Label::of(dot(weights, x) + bias),
            Hypothesis::Polynomial { embedding, weights, bias } => match embedding.embed(x) {
                Ok(phi) => Label::of(dot(weights, &phi) + bias),
                Err(_) => Label::Plus,
            },
            Hypothesis::Oracle(o) => o.classify(x),
        }
    }
}

/// Trains a baseline of the given family. Visiting orders come from
/// `spec.seed`, so the result is a deterministic function of the inputs.
pub fn train_baseline(spec: &LearnerSpec, train: SampleView<'_>) -> Result<Hypothesis> {
    if train.is_empty() {
        return Err(Error::Domain("cannot train on an empty dataset".into()));
    }
    if spec.epochs == 0 || !(spec.learning_rate > 0.0 && spec.learning_rate.is_finite()) {
        return Err(Error::Domain("epochs and learning_rate must be positive".into()));
    }
    let rows: Vec<&[f64]> = (0..train.len()).map(|i| train.x(i)).collect();
    Ok(match spec.kind {
        LearnerKind::Perceptron => {
            let (weights, bias) = perceptron(&rows, train.labels(), spec, false);
            Hypothesis::Linear { weights, bias }
        }
        LearnerKind::AveragedPerceptron => {
            let (weights, bias) = perceptron(&rows, train.labels(), spec, true);
            Hypothesis::Linear { weights, bias }
        }
        LearnerKind::LogisticGd => {
            let (weights, bias) = logistic_gd(&rows, train.labels(), spec);
            Hypothesis::Linear { weights, bias }
        }
        LearnerKind::PolyKernelPerceptron { degree } => {
            let embedding = EmbeddingSpec::new(train.n(), degree, None)?;
            let lifted: Vec<Vec<f64>> = rows.par_iter().map(|x| embedding.embed(x)).collect::<Result<_>>()?;
            let lifted_rows: Vec<&[f64]> = lifted.iter().map(Vec::as_slice).collect();
            let (weights, bias) = perceptron(&lifted_rows, train.labels(), spec, false);
            Hypothesis::Polynomial { embedding, weights, bias }
        }
    })
}

fn perceptron(rows: &[&[f64]], labels: &[Label], spec: &LearnerSpec, averaged: bool) -> (Vec<f64>, f64) {
    let n = rows[0].len();
    let mut rng = seeded(spec.seed);
    let mut order: Vec<usize> = (0..rows.len()).collect();
    let mut w = vec![0.0; n];
    let mut b = 0.0;
    // Averaging via the running sum of step-weighted updates.
    let mut u = vec![0.0; n];
    let mut ub = 0.0;
    let mut step = 1.0f64;
    let lr = spec.learning_rate;
    for _ in 0..spec.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let y = labels[i].sign();
            let x = rows[i];
            if y * (dot(&w, x) + b) <= 0.0 {
                for ((wj, uj), xj) in w.iter_mut().zip(u.iter_mut()).zip(x) {
                    *wj += lr * y * xj;
                    *uj += step * lr * y * xj;
                }
                b += lr * y;
                ub += step * lr * y;
            }
            step += 1.0;
        }
    }
    if averaged {
        let c = 1.0 / step;
        let weights = w.iter().zip(&u).map(|(wj, uj)| wj - c * uj).collect();
        (weights, b - c * ub)
    } else {
        (w, b)
    }
}

/// Rows per partial gradient; partials are summed in order so the result
/// does not depend on the thread count.
const GRAD_CHUNK: usize = 1024;

fn logistic_gd(rows: &[&[f64]], labels: &[Label], spec: &LearnerSpec) -> (Vec<f64>, f64) {
    let n = rows[0].len();
    let m = rows.len() as f64;
    let mut w = vec![0.0; n];
    let mut b = 0.0;
    for _ in 0..spec.epochs {
        let partials: Vec<(Vec<f64>, f64)> = rows
            .par_chunks(GRAD_CHUNK)
            .zip(labels.par_chunks(GRAD_CHUNK))
            .map(|(xs, ys)| {
                let mut g = vec![0.0; n];
                let mut gb = 0.0;
                for (x, y) in xs.iter().zip(ys) {
                    let y = y.sign();
                    let margin = y * (dot(&w, x) + b);
                    // d/dz log(1 + e^{−z}) = −1/(1 + e^{z})
                    let coef = -y / (1.0 + margin.exp());
                    for (gj, xj) in g.iter_mut().zip(x.iter()) {
                        *gj += coef * xj;
                    }
                    gb += coef;
                }
                (g, gb)
            })
            .collect();
        let mut g = vec![0.0; n];
        let mut gb = 0.0;
        for (pg, pb) in partials {
            for (a, v) in g.iter_mut().zip(pg) {
                *a += v;
            }
            gb += pb;
        }
        for (wj, gj) in w.iter_mut().zip(&g) {
            *wj -= spec.learning_rate * gj / m;
        }
        b -= spec.learning_rate * gb / m;
    }
    (w, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::empirical_error;
    use crate::instance::{generate_null, Dataset};
    use rand::Rng;
    use rand_distr::StandardNormal;

    /// Two unit Gaussians centered at ±3e₁.
    fn separable(m: usize, seed: u64) -> Dataset {
        let mut ds = generate_null(4, m, seed).unwrap();
        let mut rng = seeded(seed ^ 1);
        let labels = ds.labels().to_vec();
        let mut feats = ds.features().to_vec();
        for (x, l) in feats.chunks_exact_mut(4).zip(&labels) {
            for v in x.iter_mut() {
                *v = rng.sample::<f64, _>(StandardNormal);
            }
            x[0] += 3.0 * l.sign();
        }
        ds = Dataset::from_parts(ds.manifest.clone(), feats, labels).unwrap();
        ds
    }

    #[test]
    fn separable_toy_is_learned() {
        let train = separable(4000, 1);
        let test = separable(4000, 2);
        for kind in [
            LearnerKind::Perceptron,
            LearnerKind::AveragedPerceptron,
            LearnerKind::LogisticGd,
            LearnerKind::PolyKernelPerceptron { degree: 2 },
        ] {
            let h = train_baseline(&LearnerSpec::new(kind, 9), train.view()).unwrap();
            let e = empirical_error(&h, test.view()).unwrap();
            assert!(e.value <= 0.01, "{kind:?}: {}", e.value);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let ds = separable(500, 3);
        let spec = LearnerSpec::new(LearnerKind::Perceptron, 4);
        assert_eq!(train_baseline(&spec, ds.view()).unwrap(), train_baseline(&spec, ds.view()).unwrap());
    }

    #[test]
    fn logistic_on_null_is_chance() {
        let ds = generate_null(8, 40_000, 5).unwrap();
        let (train, test) = ds.view().split(0.5);
        let h = train_baseline(&LearnerSpec::new(LearnerKind::LogisticGd, 1), train).unwrap();
        let e = empirical_error(&h, test).unwrap();
        assert!((0.48..=0.52).contains(&e.value), "{}", e.value);
    }

    #[test]
    fn bad_specs() {
        let ds = separable(10, 3);
        let mut spec = LearnerSpec::new(LearnerKind::Perceptron, 4);
        spec.epochs = 0;
        assert!(train_baseline(&spec, ds.view()).is_err());
        let empty = ds.view().split(0.0).0;
        assert!(train_baseline(&LearnerSpec::new(LearnerKind::Perceptron, 4), empty).is_err());
    }
}
