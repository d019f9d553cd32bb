//! Samplers and densities for CLWE, homogeneous CLWE (hCLWE) and its
//! truncated, non-overlapping variant (nhCLWE), plus the rejection-sampling
//! map that turns CLWE samples into hCLWE samples.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::gaussian::{
    self, gaussian_cdf, periodic_mass, rho_1d, theta_mass, DiscreteGaussian, TailTruncation, TruncatedGaussian,
    Width,
};

/// Standard deviation of one coordinate of `N(0, I/(2π))`.
pub const UNIT_STD: f64 = 0.398_942_280_401_432_7;

/// Tolerance on `‖w‖ = 1`.
const UNIT_TOL: f64 = 1e-12;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `x mod 1` in `[0, 1)`; an exact `1.0` after rounding maps to `0.0`.
pub fn mod_one(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Uniform direction on `S^{n-1}`: a Gaussian vector, normalized.
pub fn sample_secret_direction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let len = norm(&v);
        if len > 1e-150 {
            return Ok(v.into_iter().map(|x| x / len).collect());
        }
    }
}

/// Parameters `(n, γ, β, w)` of the CLWE distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ClweParams {
    pub n: usize,
    pub gamma: f64,
    pub beta: f64,
    pub w: Vec<f64>,
}

impl ClweParams {
    pub fn new(gamma: f64, beta: f64, w: Vec<f64>) -> Result<Self> {
        ensure_positive("gamma", gamma)?;
        ensure_positive("beta", beta)?;
        if beta > gamma {
            return Err(Error::Precondition(format!("beta ≤ gamma required, got beta={beta} > gamma={gamma}")));
        }
        if w.is_empty() {
            return Err(Error::Domain("secret direction is empty".into()));
        }
        let len = norm(&w);
        if !((len - 1.0).abs() <= UNIT_TOL) {
            return Err(Error::Domain(format!("secret direction must be a unit vector, ‖w‖ = {len}")));
        }
        Ok(ClweParams { n: w.len(), gamma, beta, w })
    }

    /// Hardness-regime defaults `γ = 2√n`, `β = 1/n` with a fresh uniform secret.
    pub fn hardness_default<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let w = sample_secret_direction(n, rng)?;
        let nf = n as f64;
        Self::new(2.0 * nf.sqrt(), 1.0 / nf, w)
    }

    /// Whether `γ ≥ 2√n`.
    pub fn in_hardness_regime(&self) -> bool {
        self.gamma >= 2.0 * (self.n as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClweSample {
    pub y: Vec<f64>,
    pub z: f64,
}

/// `(y, z)` with `y ~ N(0, I/(2π))` and `z = γ⟨w, y⟩ + e mod 1`, `e ~ N(0, β²/(2π))`.
pub fn sample_clwe<R: Rng + ?Sized>(p: &ClweParams, rng: &mut R) -> ClweSample {
    let y: Vec<f64> = (0..p.n).map(|_| UNIT_STD * rng.sample::<f64, _>(StandardNormal)).collect();
    let e = p.beta * UNIT_STD * rng.sample::<f64, _>(StandardNormal);
    let z = mod_one(p.gamma * dot(&p.w, &y) + e);
    ClweSample { y, z }
}

/// Joint density `p(y, z) = (1/β)·ρ(y)·Σ_k ρ_β(z + k − γ⟨w, y⟩)`.
pub fn clwe_density(p: &ClweParams, y: &[f64], z: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&z) {
        return Err(Error::Domain(format!("z must lie in [0,1), got {z}")));
    }
    if y.len() != p.n {
        return Err(Error::Domain(format!("expected {} coordinates, got {}", p.n, y.len())));
    }
    let base = gaussian::rho(Width::new(1.0)?, y)?;
    let b = Width::new(p.beta)?;
    let wrapped = periodic_mass(b, TailTruncation::default_for(b), z - p.gamma * dot(&p.w, y));
    Ok(base * wrapped / p.beta)
}

/// An hCLWE distribution: CLWE parameters, phase `c`, the noise width
/// `out_beta` of the mixture, and an optional truncation radius.
///
/// Its projection on `w` is a mixture over `k ∈ ℤ` with weights
/// `ρ_{√(out_beta²+γ²)}(k)` of Gaussians centered at `γk/(out_beta²+γ²) − c/γ`
/// with width `out_beta/√(out_beta²+γ²)`; the orthogonal complement is
/// `N(0, I/(2π))`. With `alpha` set, every component is truncated to radius
/// `alpha` and rescaled to keep its mass.
#[derive(Debug, Clone, PartialEq)]
pub struct HclweSpec {
    pub base: ClweParams,
    pub c: f64,
    pub out_beta: f64,
    pub alpha: Option<f64>,
}

impl HclweSpec {
    pub fn new(base: ClweParams, c: f64, out_beta: f64, alpha: Option<f64>) -> Result<Self> {
        ensure_finite("phase c", c)?;
        if !(0.0..1.0).contains(&c) {
            return Err(Error::Domain(format!("phase c must lie in [0,1), got {c}")));
        }
        ensure_positive("out_beta", out_beta)?;
        if let Some(a) = alpha {
            ensure_positive("alpha", a)?;
        }
        Ok(HclweSpec { base, c, out_beta, alpha })
    }

    /// `α = (1/10)·γ/(γ² + β²)`.
    pub fn default_alpha(gamma: f64, out_beta: f64) -> f64 {
        0.1 * gamma / (gamma * gamma + out_beta * out_beta)
    }

    /// Same spec truncated at the default radius.
    pub fn truncated(mut self) -> Self {
        self.alpha = Some(Self::default_alpha(self.gamma(), self.out_beta));
        self
    }

    pub fn untruncated(mut self) -> Self {
        self.alpha = None;
        self
    }

    pub fn gamma(&self) -> f64 {
        self.base.gamma
    }

    pub fn w(&self) -> &[f64] {
        &self.base.w
    }

    fn s2(&self) -> f64 {
        self.out_beta * self.out_beta + self.gamma() * self.gamma()
    }

    /// Width `√(out_beta² + γ²)` of the component weights.
    pub fn weight_width(&self) -> Width {
        Width::new(self.s2().sqrt()).expect("positive")
    }

    /// Width `out_beta/√(out_beta² + γ²)` of each component along `w`.
    pub fn component_width(&self) -> Width {
        Width::new(self.out_beta / self.s2().sqrt()).expect("positive")
    }

    /// Distance `γ/(out_beta² + γ²)` between consecutive component means.
    pub fn spacing(&self) -> f64 {
        self.gamma() / self.s2()
    }

    pub fn component_mean(&self, k: i64) -> f64 {
        self.spacing() * k as f64 - self.c / self.gamma()
    }

    /// Index of the component mean closest to `t`.
    pub fn nearest_component(&self, t: f64) -> i64 {
        ((t + self.c / self.gamma()) / self.spacing()).round() as i64
    }

    fn weight_trunc(&self) -> TailTruncation {
        TailTruncation::default_for(self.weight_width())
    }

    /// Total mass of the unnormalized density, `Z = (β/√(β²+γ²))·ρ_{√(β²+γ²)}(ℤ)`,
    /// both over ℝⁿ and for the projection on `w`.
    pub fn normalizer(&self) -> f64 {
        self.component_width().get() * theta_mass(self.weight_width(), self.weight_trunc())
    }

    /// Unnormalized density of the projection `⟨w, x⟩` at `t`.
    pub fn projection_density(&self, t: f64) -> f64 {
        let s = self.weight_width().get();
        let cw = self.component_width();
        let k_max = self.weight_trunc().cutoff as i64;
        let mut acc = 0.0;
        for k in -k_max..=k_max {
            let mu = self.component_mean(k);
            let comp = match self.alpha {
                None => rho_1d(cw.get(), t - mu),
                Some(a) => {
                    if (t - mu).abs() > a {
                        continue;
                    }
                    rho_1d(cw.get(), t - mu) * truncated_normalizer(cw, a)
                }
            };
            acc += rho_1d(s, k as f64) * comp;
        }
        acc
    }

    /// Unnormalized density on ℝⁿ: `ρ(π_{w⊥}(y))` times the projection density.
    pub fn density(&self, y: &[f64]) -> Result<f64> {
        if y.len() != self.base.n {
            return Err(Error::Domain(format!("expected {} coordinates, got {}", self.base.n, y.len())));
        }
        for &v in y {
            ensure_finite("coordinate", v)?;
        }
        let t = dot(self.w(), y);
        let perp_sq = (dot(y, y) - t * t).max(0.0);
        Ok((-PI * perp_sq).exp() * self.projection_density(t))
    }

    /// CDF of the normalized projection law.
    pub fn projection_cdf(&self, t: f64) -> f64 {
        let s = self.weight_width();
        let cw = self.component_width().get();
        let k_max = self.weight_trunc().cutoff as i64;
        let total = theta_mass(s, self.weight_trunc());
        let mut acc = 0.0;
        for k in -k_max..=k_max {
            let mu = self.component_mean(k);
            let f = match self.alpha {
                None => gaussian_cdf(cw, mu, t),
                Some(a) => {
                    if t <= mu - a {
                        0.0
                    } else if t >= mu + a {
                        1.0
                    } else {
                        let lo = gaussian_cdf(cw, mu, mu - a);
                        let hi = gaussian_cdf(cw, mu, mu + a);
                        (gaussian_cdf(cw, mu, t) - lo) / (hi - lo)
                    }
                }
            };
            acc += rho_1d(s.get(), k as f64) * f;
        }
        (acc / total).clamp(0.0, 1.0)
    }

    /// Index range of components that carry all but the certified tail mass.
    pub fn component_range(&self) -> (i64, i64) {
        let k = self.weight_trunc().cutoff as i64;
        (-k, k)
    }
}

fn truncated_normalizer(cw: Width, alpha: f64) -> f64 {
    1.0 / gaussian::central_mass_fraction(cw.get(), alpha)
}

/// Smallest kept mass fraction for which per-component resampling is allowed.
const MIN_KEPT_FRACTION: f64 = 1e-3;

/// Reusable sampler for an [`HclweSpec`], truncated or not.
#[derive(Debug, Clone)]
pub struct HclweSampler {
    spec: HclweSpec,
    components: DiscreteGaussian,
    component_std: f64,
}

impl HclweSampler {
    pub fn new(spec: HclweSpec) -> Result<Self> {
        let cw = spec.component_width();
        if let Some(a) = spec.alpha {
            let tg = TruncatedGaussian::new(0.0, cw, a)?;
            if 1.0 / tg.normalizer < MIN_KEPT_FRACTION {
                return Err(Error::Domain(format!(
                    "truncation radius {a} keeps only {:.3e} of each component",
                    1.0 / tg.normalizer
                )));
            }
        }
        let components = DiscreteGaussian::new(spec.weight_width(), TailTruncation::default_for(spec.weight_width()));
        Ok(HclweSampler { component_std: cw.std_dev(), spec, components })
    }

    pub fn spec(&self) -> &HclweSpec {
        &self.spec
    }

    /// Draws the component index and the coordinate along `w`.
    pub fn sample_component<R: Rng + ?Sized>(&self, rng: &mut R) -> (i64, f64) {
        let k = self.components.sample(rng);
        let mu = self.spec.component_mean(k);
        loop {
            let off = self.component_std * rng.sample::<f64, _>(StandardNormal);
            match self.spec.alpha {
                Some(a) if off.abs() > a => continue,
                _ => return (k, mu + off),
            }
        }
    }

    pub fn sample_projection<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sample_component(rng).1
    }

    /// Writes one sample into `out` (length `n`).
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        let (_, t) = self.sample_component(rng);
        for o in out.iter_mut() {
            *o = UNIT_STD * rng.sample::<f64, _>(StandardNormal);
        }
        let w = self.spec.w();
        let shift = t - dot(w, out);
        for (o, wi) in out.iter_mut().zip(w) {
            *o += shift * wi;
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; self.spec.base.n];
        self.sample_into(rng, &mut out);
        out
    }
}

/// One draw from an untruncated hCLWE spec.
pub fn sample_hclwe_direct<R: Rng + ?Sized>(spec: &HclweSpec, rng: &mut R) -> Result<Vec<f64>> {
    if spec.alpha.is_some() {
        return Err(Error::Precondition("sample_hclwe_direct needs an untruncated spec".into()));
    }
    Ok(HclweSampler::new(spec.clone())?.sample(rng))
}

/// One draw from a truncated (non-overlapping) hCLWE spec.
pub fn sample_nhclwe<R: Rng + ?Sized>(spec: &HclweSpec, rng: &mut R) -> Result<Vec<f64>> {
    if spec.alpha.is_none() {
        return Err(Error::Precondition("sample_nhclwe needs a truncation radius".into()));
    }
    Ok(HclweSampler::new(spec.clone())?.sample(rng))
}

/// Acceptance rule `g(z) = g₀(z)/M` with `g₀(z) = Σ_k ρ_δ(z + k + c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RejectionConfig {
    pub delta: f64,
    /// `M = sup g₀ = ρ_δ(ℤ)`, attained at `z ≡ −c (mod 1)`.
    pub normalizer: f64,
    pub c: f64,
    trunc: TailTruncation,
}

/// Grid size for checking `M ≥ g₀`.
const SUP_GRID: usize = 10_000;

impl RejectionConfig {
    pub fn new(delta: f64, c: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Domain(format!("delta must lie in (0,1), got {delta}")));
        }
        if !(0.0..1.0).contains(&c) {
            return Err(Error::Domain(format!("phase c must lie in [0,1), got {c}")));
        }
        let d = Width::new(delta)?;
        let trunc = TailTruncation::default_for(d);
        let normalizer = theta_mass(d, trunc);
        let cfg = RejectionConfig { delta, normalizer, c, trunc };
        let slack = normalizer * (1.0 + 1e-12);
        for i in 0..SUP_GRID {
            let z = i as f64 / SUP_GRID as f64;
            let g0 = cfg.g0(z);
            if g0 > slack {
                return Err(Error::Numeric(format!("g0({z}) = {g0} exceeds M = {normalizer}")));
            }
        }
        if normalizer >= 4.0 {
            return Err(Error::Numeric(format!("M = {normalizer} is not below 4")));
        }
        Ok(cfg)
    }

    /// Default smoothing `δ = √3·β`, which makes the output noise exactly `2β`.
    pub fn for_beta(beta: f64, c: f64) -> Result<Self> {
        Self::new(3f64.sqrt() * beta, c)
    }

    pub fn g0(&self, z: f64) -> f64 {
        periodic_mass(Width::new(self.delta).expect("positive"), self.trunc, z + self.c)
    }

    /// Acceptance probability `g(z)` of a sample with phase `z`.
    pub fn acceptance_weight(&self, z: f64) -> f64 {
        (self.g0(z) / self.normalizer).min(1.0)
    }

    pub fn accepts<R: Rng + ?Sized>(&self, z: f64, rng: &mut R) -> bool {
        let u: f64 = rng.random();
        u < self.acceptance_weight(z)
    }

    /// Noise width `√(β² + δ²)` of the hCLWE law produced from CLWE(β).
    pub fn output_beta(&self, beta: f64) -> f64 {
        beta.hypot(self.delta)
    }
}

/// Keeps `y` with probability `g(z)`. Accepted outputs follow hCLWE with
/// noise width `√(β² + δ²)`.
pub fn reject_transform<R: Rng + ?Sized>(
    p: &ClweParams,
    cfg: &RejectionConfig,
    input: ClweSample,
    rng: &mut R,
) -> Option<Vec<f64>> {
    debug_assert_eq!(input.y.len(), p.n);
    cfg.accepts(input.z, rng).then_some(input.y)
}

/// The same acceptance rule fed by `(y, z)` with `z` independent of `y`;
/// accepted outputs keep the law of `y`.
pub fn reject_transform_null<R: Rng + ?Sized>(
    cfg: &RejectionConfig,
    y: Vec<f64>,
    z: f64,
    rng: &mut R,
) -> Option<Vec<f64>> {
    cfg.accepts(z, rng).then_some(y)
}

/// Closed-form acceptance rate on CLWE input:
/// `δ·ρ_{s'}(ℤ)/(s'·M)` with `s' = √(β² + δ² + γ²)`.
pub fn acceptance_probability(p: &ClweParams, cfg: &RejectionConfig) -> f64 {
    let s = (p.beta * p.beta + cfg.delta * cfg.delta + p.gamma * p.gamma).sqrt();
    let w = Width::new(s).expect("positive");
    cfg.delta * theta_mass(w, TailTruncation::default_for(w)) / (s * cfg.normalizer)
}

/// Acceptance rate `∫ g = δ/M` when `z` is uniform and independent of `y`.
pub fn null_acceptance_probability(cfg: &RejectionConfig) -> f64 {
    cfg.delta / cfg.normalizer
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn e1(n: usize) -> Vec<f64> {
        let mut w = vec![0.0; n];
        w[0] = 1.0;
        w
    }

    #[test]
    fn mod_one_half_open() {
        assert_eq!(mod_one(1.0), 0.0);
        assert_eq!(mod_one(-1e-20), 0.0);
        assert!((mod_one(2.4) - 0.4).abs() < 1e-15);
        assert!((mod_one(-0.25) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn params_validation() {
        assert!(ClweParams::new(8.0, 0.1, vec![0.6, 0.8]).is_ok());
        assert!(ClweParams::new(8.0, 0.1, vec![0.6, 0.7]).is_err());
        assert!(ClweParams::new(1.0, 2.0, e1(1)).is_err());
        assert!(ClweParams::new(-1.0, 0.1, e1(1)).is_err());
        let p = ClweParams::hardness_default(16, &mut seeded(3)).unwrap();
        assert_eq!(p.gamma, 8.0);
        assert!(p.in_hardness_regime());
        assert!((norm(&p.w) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_noise_phase() {
        let p = ClweParams::new(5.0, 1e-300, e1(3)).unwrap();
        let mut rng = seeded(2);
        for _ in 0..100 {
            let s = sample_clwe(&p, &mut rng);
            assert!((s.z - mod_one(5.0 * s.y[0])).abs() < 1e-12);
        }
        assert!((mod_one(5.0 * 0.3) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn clwe_density_domain() {
        let p = ClweParams::new(2.0, 0.3, e1(1)).unwrap();
        assert!(clwe_density(&p, &[0.1], 1.0).is_err());
        assert!(clwe_density(&p, &[0.1], -0.1).is_err());
        assert!(clwe_density(&p, &[0.1, 0.2], 0.5).is_err());
    }

    #[test]
    fn clwe_density_sign_symmetry() {
        let p = ClweParams::new(3.0, 0.2, vec![0.6, 0.8]).unwrap();
        for (y, z) in [(vec![0.1, -0.3], 0.2), (vec![-0.7, 0.05], 0.9), (vec![0.0, 0.0], 0.5)] {
            let neg: Vec<f64> = y.iter().map(|v| -v).collect();
            let a = clwe_density(&p, &y, z).unwrap();
            let b = clwe_density(&p, &neg, mod_one(1.0 - z)).unwrap();
            assert!((a - b).abs() <= 1e-14 * a.abs().max(1e-300));
        }
    }

    #[test]
    fn clwe_density_wraps_to_uniform() {
        let p = ClweParams::new(50.0, 50.0, e1(1)).unwrap();
        for y in [-0.5, 0.0, 0.4] {
            let r = (-PI * y * y).exp();
            for z in [0.0, 0.25, 0.5, 0.99] {
                let d = clwe_density(&p, &[y], z).unwrap();
                assert!((d / r - 1.0).abs() < 1e-3, "y={y} z={z} ratio={}", d / r);
            }
        }
    }

    #[test]
    fn rejection_config_sup() {
        let cfg = RejectionConfig::new(0.034641, 0.3).unwrap();
        let z_star = mod_one(-0.3);
        assert!((cfg.acceptance_weight(z_star) - 1.0).abs() < 1e-12);
        assert!(cfg.normalizer < 4.0);
        assert!(RejectionConfig::new(1.0, 0.0).is_err());
        assert!(RejectionConfig::new(0.5, 1.0).is_err());
    }

    #[test]
    fn default_delta_doubles_noise() {
        let cfg = RejectionConfig::for_beta(0.02, 0.0).unwrap();
        assert!((cfg.output_beta(0.02) - 0.04).abs() < 1e-15);
    }

    #[test]
    fn hclwe_spec_geometry() {
        let base = ClweParams::new(8.0, 0.02, e1(2)).unwrap();
        let spec = HclweSpec::new(base, 0.5, 0.02, None).unwrap().truncated();
        let a = spec.alpha.unwrap();
        assert!((a - 0.8 / 64.0004).abs() < 1e-15);
        assert!((spec.component_mean(3) - (24.0 / 64.0004 - 0.5 / 8.0)).abs() < 1e-15);
        assert_eq!(spec.nearest_component(spec.component_mean(-5) + 0.2 * spec.spacing()), -5);
        assert!(HclweSpec::new(spec.base.clone(), 1.0, 0.02, None).is_err());
    }

    #[test]
    fn truncated_sampler_respects_support() {
        let base = ClweParams::new(8.0, 0.02, e1(3)).unwrap();
        let spec = HclweSpec::new(base, 0.0, 0.3, None).unwrap().truncated();
        let a = spec.alpha.unwrap();
        let s = HclweSampler::new(spec.clone()).unwrap();
        let mut rng = seeded(11);
        for _ in 0..10_000 {
            let (k, t) = s.sample_component(&mut rng);
            assert!((t - spec.component_mean(k)).abs() <= a);
        }
    }

    #[test]
    fn direct_and_truncated_entry_points_check_spec() {
        let base = ClweParams::new(8.0, 0.02, e1(2)).unwrap();
        let plain = HclweSpec::new(base, 0.0, 0.04, None).unwrap();
        let mut rng = seeded(1);
        assert!(sample_hclwe_direct(&plain, &mut rng).is_ok());
        assert!(sample_nhclwe(&plain, &mut rng).is_err());
        let trunc = plain.clone().truncated();
        assert!(sample_nhclwe(&trunc, &mut rng).is_ok());
        assert!(sample_hclwe_direct(&trunc, &mut rng).is_err());
    }

    #[test]
    fn tiny_radius_is_rejected() {
        let base = ClweParams::new(8.0, 0.02, e1(1)).unwrap();
        let spec = HclweSpec::new(base, 0.0, 0.04, Some(1e-9)).unwrap();
        assert!(HclweSampler::new(spec).is_err());
    }

    #[test]
    fn projection_cdf_limits() {
        let base = ClweParams::new(2.0, 0.3, e1(1)).unwrap();
        for alpha in [None, Some(0.1)] {
            let spec = HclweSpec::new(base.clone(), 0.25, 0.3, alpha).unwrap();
            assert!(spec.projection_cdf(-10.0) < 1e-12);
            assert!(spec.projection_cdf(10.0) > 1.0 - 1e-12);
        }
    }

    #[test]
    fn samplers_are_deterministic() {
        let base = ClweParams::new(8.0, 0.02, vec![0.6, 0.0, 0.8]).unwrap();
        let s = HclweSampler::new(HclweSpec::new(base.clone(), 0.5, 0.04, None).unwrap().truncated()).unwrap();
        let a: Vec<Vec<f64>> = {
            let mut r = seeded(9);
            (0..50).map(|_| s.sample(&mut r)).collect()
        };
        let b: Vec<Vec<f64>> = {
            let mut r = seeded(9);
            (0..50).map(|_| s.sample(&mut r)).collect()
        };
        assert_eq!(a, b);
        let mut r1 = seeded(4);
        let mut r2 = seeded(4);
        assert_eq!(sample_clwe(&base, &mut r1), sample_clwe(&base, &mut r2));
    }
}
