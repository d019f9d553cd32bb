//! Total variation distance between one-dimensional densities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadConfig};
use crate::samplers::HclweSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TvdEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Where to integrate: the interval and the points where either density
/// is not smooth (truncation edges) or changes on a fine scale.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportHint {
    pub lo: f64,
    pub hi: f64,
    pub breakpoints: Vec<f64>,
}

/// `½∫|p − q|` over the hinted support by adaptive quadrature.
pub fn tvd_1d_numeric(p: impl Fn(f64) -> f64, q: impl Fn(f64) -> f64, hint: &SupportHint) -> Result<TvdEstimate> {
    let cfg = QuadConfig::default();
    let r = integrate(|t| (p(t) - q(t)).abs(), hint.lo, hint.hi, &hint.breakpoints, cfg)
        .map_err(|e| Error::Numeric(format!("TVD quadrature failed: {e}")))?;
    Ok(TvdEstimate { value: 0.5 * r.value, error_estimate: 0.5 * r.error_estimate, evaluations: r.evaluations })
}

/// Breakpoints for the projection law of `spec`: each component mean, and
/// `mean ± α` when truncated. Components are those within the certified range.
pub(crate) fn projection_hint(spec: &HclweSpec, hint: &mut SupportHint) {
    let (k_lo, k_hi) = spec.component_range();
    let cw = spec.component_width().get();
    for k in k_lo..=k_hi {
        let mu = spec.component_mean(k);
        hint.breakpoints.push(mu);
        match spec.alpha {
            Some(a) => {
                hint.breakpoints.push(mu - a);
                hint.breakpoints.push(mu + a);
            }
            None => {
                hint.breakpoints.push(mu - cw);
                hint.breakpoints.push(mu + cw);
            }
        }
        // Ten ρ-widths past the outermost component carries no mass.
        hint.lo = hint.lo.min(mu - 10.0 * cw);
        hint.hi = hint.hi.max(mu + 10.0 * cw);
    }
}

/// TVD between the normalized projection laws `⟨w, x⟩` of two specs.
pub fn projection_tvd(a: &HclweSpec, b: &HclweSpec) -> Result<TvdEstimate> {
    let mut hint = SupportHint { lo: f64::INFINITY, hi: f64::NEG_INFINITY, breakpoints: Vec::new() };
    projection_hint(a, &mut hint);
    projection_hint(b, &mut hint);
    let (za, zb) = (a.normalizer(), b.normalizer());
    tvd_1d_numeric(|t| a.projection_density(t) / za, |t| b.projection_density(t) / zb, &hint)
}

/// The bound `8·exp(−1/(400β²))` on the TVD between the truncated and
/// untruncated projection laws at the default radius.
pub fn truncation_tvd_bound(out_beta: f64) -> f64 {
    8.0 * (-1.0 / (400.0 * out_beta * out_beta)).exp()
}
