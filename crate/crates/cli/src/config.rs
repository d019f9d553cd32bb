use serde::Serialize;

use clwe_core::instance::{DatasetManifest, MixtureParams, Mode};
use clwe_core::rng::shard_rng;
use clwe_core::samplers::{sample_secret_direction, ClweParams, HclweSpec};

use crate::args::ParamArgs;
use crate::error::CliError;

/// Stream under the run seed that the secret direction is drawn from.
/// Data shards use streams `0, 1, …`, so this never collides.
const SECRET_STREAM: u64 = u64::MAX;

/// Instance parameters with every default filled in.
#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub n: usize,
    pub gamma: f64,
    pub beta: f64,
    pub delta: f64,
    pub out_beta: f64,
    pub alpha: f64,
    /// Whether `alpha` was given explicitly rather than derived.
    pub alpha_given: bool,
    pub c_plus: f64,
    pub c_minus: f64,
    pub seed: u64,
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Param(format!("{name} must be positive and finite, got {v}")))
    }
}

fn phase(name: &str, v: f64) -> Result<f64, CliError> {
    if (0.0..1.0).contains(&v) {
        Ok(v)
    } else {
        Err(CliError::Param(format!("{name} must lie in [0, 1), got {v}")))
    }
}

impl Resolved {
    pub fn from_args(a: &ParamArgs) -> Result<Self, CliError> {
        if a.n == 0 {
            return Err(CliError::Param("n must be at least 1".into()));
        }
        let n = a.n as f64;
        let gamma = positive("gamma", a.gamma.unwrap_or(2.0 * n.sqrt()))?;
        let beta = positive("beta", a.beta.unwrap_or(1.0 / n))?;
        let delta = positive("delta", a.delta.unwrap_or(3f64.sqrt() * beta))?;
        let out_beta = beta.hypot(delta);
        let alpha = match a.alpha {
            Some(v) => positive("alpha", v)?,
            None => HclweSpec::default_alpha(gamma, out_beta),
        };
        Ok(Resolved {
            n: a.n,
            gamma,
            beta,
            delta,
            out_beta,
            alpha,
            alpha_given: a.alpha.is_some(),
            c_plus: phase("c-plus", a.c_plus)?,
            c_minus: phase("c-minus", a.c_minus)?,
            seed: a.seed,
        })
    }

    /// Parameters recorded in a planted dataset's manifest.
    pub fn from_manifest(m: &DatasetManifest) -> Result<Self, CliError> {
        let get = |name: &str, v: Option<f64>| v.ok_or_else(|| CliError::Param(format!("manifest lacks {name}")));
        if m.mode != Mode::Planted {
            return Err(CliError::Param("a null dataset has no planted direction".into()));
        }
        let gamma = get("gamma", m.gamma)?;
        let beta = get("beta", m.beta)?;
        let out_beta = get("out_beta", m.out_beta)?;
        let alpha = get("alpha", m.alpha)?;
        Ok(Resolved {
            n: m.ambient_n(),
            gamma,
            beta,
            delta: (out_beta * out_beta - beta * beta).max(0.0).sqrt(),
            out_beta,
            alpha,
            alpha_given: alpha != HclweSpec::default_alpha(gamma, out_beta),
            c_plus: get("c_plus", m.c_plus)?,
            c_minus: get("c_minus", m.c_minus)?,
            seed: m.seed,
        })
    }

    /// The secret direction a run with this seed plants.
    pub fn secret(&self) -> Result<Vec<f64>, CliError> {
        Ok(sample_secret_direction(self.n, &mut shard_rng(self.seed, SECRET_STREAM))?)
    }

    /// Mixture over `w`. Overlapping supports are a parameter error unless
    /// `allow_overlap` is set.
    pub fn mixture(&self, w: Vec<f64>, allow_overlap: bool) -> Result<MixtureParams, CliError> {
        let base = ClweParams::new(self.gamma, self.beta, w)?;
        let alpha = self.alpha_given.then_some(self.alpha);
        let p = MixtureParams::with_phases_unchecked(base, self.out_beta, alpha, self.c_plus, self.c_minus)?;
        if let Err(e) = p.check_disjoint() {
            let msg = format!("{e} (mixture noise out_beta = √(beta² + delta²) with beta = {}, delta = {})", self.beta, self.delta);
            if !allow_overlap {
                return Err(CliError::Param(msg));
            }
            eprintln!("warning: --unsafe: {msg}");
        }
        Ok(p)
    }
}
