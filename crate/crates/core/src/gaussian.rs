//! Gaussian mass functions in the ρ-parameterization.
//!
//! Throughout the crate a Gaussian of width `s` is the function
//! `ρ_s(x) = exp(-π‖x/s‖²)`. Normalized, it is a normal law with variance
//! `s²/(2π)` per coordinate. [`Width::std_dev`] and [`Width::from_std_dev`]
//! are the only places where the two conventions meet.

use std::f64::consts::PI;

use rand::Rng;
use statrs::function::erf;

use crate::error::{ensure_finite, ensure_positive, Error, Result};

/// Default bound on the neglected relative mass of every θ-sum.
pub const DEFAULT_EPS_TAIL: f64 = 1e-16;

/// Width `s > 0` of a Gaussian in the ρ-parameterization.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Width(f64);

impl Width {
    pub fn new(s: f64) -> Result<Self> {
        ensure_positive("width", s)?;
        Ok(Width(s))
    }

    /// Width whose normalized density has standard deviation `sigma`.
    pub fn from_std_dev(sigma: f64) -> Result<Self> {
        ensure_positive("standard deviation", sigma)?;
        Ok(Width(sigma * (2.0 * PI).sqrt()))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// Standard deviation `s/√(2π)` of the normalized density.
    #[inline]
    pub fn std_dev(self) -> f64 {
        self.0 / (2.0 * PI).sqrt()
    }
}

/// `ρ_s(x)` for a vector argument.
pub fn rho(s: Width, x: &[f64]) -> Result<f64> {
    let mut sq = 0.0;
    for &xi in x {
        ensure_finite("rho argument", xi)?;
        let u = xi / s.0;
        sq += u * u;
    }
    Ok((-PI * sq).exp())
}

/// Scalar `ρ_s(x)` without argument checks.
#[inline]
pub fn rho_1d(s: f64, x: f64) -> f64 {
    let u = x / s;
    (-PI * u * u).exp()
}

/// `P(X ≤ x)` for `X` with density `ρ_s(· ; center)/s`.
pub fn gaussian_cdf(s: f64, center: f64, x: f64) -> f64 {
    0.5 * erf::erfc(-(x - center) * PI.sqrt() / s)
}

/// `∫_{-r}^{r} ρ_s(x) dx / s`, the fraction of Gaussian mass within radius `r`.
pub fn central_mass_fraction(s: f64, r: f64) -> f64 {
    erf::erf(PI.sqrt() * r / s)
}

/// Summation cutoff `K` for θ-sums over ℤ together with the tail budget it
/// certifies: `2·exp(-πK²/s²) ≤ eps_tail`, which bounds the relative mass of
/// `Σ_{|k|>K} ρ_s(k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailTruncation {
    pub cutoff: u64,
    pub eps_tail: f64,
}

impl TailTruncation {
    pub fn for_width(s: Width, eps_tail: f64) -> Result<Self> {
        if !(eps_tail > 0.0 && eps_tail < 1.0) {
            return Err(Error::Domain(format!("eps_tail must lie in (0,1), got {eps_tail}")));
        }
        let k = s.0 * ((2.0 / eps_tail).ln() / PI).sqrt();
        if !k.is_finite() || k > 1e9 {
            return Err(Error::Domain(format!("width {} needs an impractical θ-sum cutoff", s.0)));
        }
        Ok(TailTruncation { cutoff: k.ceil() as u64 + 1, eps_tail })
    }

    pub fn default_for(s: Width) -> Self {
        Self::for_width(s, DEFAULT_EPS_TAIL).expect("default eps_tail is valid")
    }

    /// The certified bound `2·exp(-πK²/s²)`.
    pub fn certified_bound(&self, s: Width) -> f64 {
        let k = self.cutoff as f64;
        2.0 * (-PI * k * k / (s.0 * s.0)).exp()
    }
}

/// `ρ_s(ℤ)`, summed smallest terms first over `|k| ≤ K`.
pub fn theta_mass(s: Width, trunc: TailTruncation) -> f64 {
    let mut acc = 0.0;
    for k in (1..=trunc.cutoff).rev() {
        acc += 2.0 * rho_1d(s.0, k as f64);
    }
    acc + 1.0
}

/// The periodized Gaussian `Σ_{k∈ℤ} ρ_s(x + k)`.
///
/// Only integers within `K` of `-x` contribute more than the certified tail.
pub fn periodic_mass(s: Width, trunc: TailTruncation, x: f64) -> f64 {
    let base = (-x).round();
    let r = x + base;
    let k_max = trunc.cutoff as i64;
    let mut acc = 0.0;
    for j in (1..=k_max).rev() {
        let j = j as f64;
        acc += rho_1d(s.0, r + j) + rho_1d(s.0, r - j);
    }
    acc + rho_1d(s.0, r)
}

/// `P(|U| ≥ d)` for `U ~ D_{ℤ,s}` from explicit tail sums.
pub fn discrete_gaussian_two_sided_tail(s: Width, d: u64, trunc: TailTruncation) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("tail index d must be at least 1".into()));
    }
    let upper = d.max(trunc.cutoff) + trunc.cutoff;
    let mut tail = 0.0;
    for k in (d..=upper).rev() {
        tail += rho_1d(s.0, k as f64);
    }
    Ok(2.0 * tail / theta_mass(s, trunc))
}

/// Inverse-CDF sampler for `D_{ℤ,s}` over the certified support `[-K, K]`.
#[derive(Debug, Clone)]
pub struct DiscreteGaussian {
    width: Width,
    min: i64,
    cdf: Vec<f64>,
}

impl DiscreteGaussian {
    pub fn new(s: Width, trunc: TailTruncation) -> Self {
        let k = trunc.cutoff as i64;
        let weights: Vec<f64> = (-k..=k).map(|i| rho_1d(s.0, i as f64)).collect();
        let total = theta_mass(s, trunc);
        let mut cdf = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for w in &weights {
            acc += w / total;
            cdf.push(acc);
        }
        // Absorb the rounding residue so every u in [0,1) maps inside the support.
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        DiscreteGaussian { width: s, min: -k, cdf }
    }

    pub fn width(&self) -> Width {
        self.width
    }

    /// Support bounds `(-K, K)`.
    pub fn support(&self) -> (i64, i64) {
        (self.min, self.min + self.cdf.len() as i64 - 1)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        let u: f64 = rng.random();
        let idx = self.cdf.partition_point(|&c| c <= u);
        self.min + idx.min(self.cdf.len() - 1) as i64
    }
}

/// One draw from `D_{ℤ,s}`. Builds the CDF table on every call; hold a
/// [`DiscreteGaussian`] instead when drawing repeatedly.
pub fn discrete_gaussian_sample<R: Rng + ?Sized>(s: Width, trunc: TailTruncation, rng: &mut R) -> i64 {
    DiscreteGaussian::new(s, trunc).sample(rng)
}

/// Gaussian truncated to radius `alpha` around `center` and rescaled by
/// `normalizer` so that its total mass equals the untruncated mass `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedGaussian {
    pub center: f64,
    pub width: Width,
    pub radius: f64,
    pub normalizer: f64,
}

impl TruncatedGaussian {
    pub fn new(center: f64, width: Width, radius: f64) -> Result<Self> {
        ensure_finite("center", center)?;
        ensure_positive("truncation radius", radius)?;
        let inside = central_mass_fraction(width.0, radius);
        if !(inside > 0.0) {
            return Err(Error::Domain(format!(
                "truncation radius {radius} keeps no mass at width {}",
                width.0
            )));
        }
        Ok(TruncatedGaussian { center, width, radius, normalizer: 1.0 / inside })
    }

    /// `ρ_s^α(x; c)`.
    pub fn density(&self, x: f64) -> f64 {
        if (x - self.center).abs() <= self.radius {
            rho_1d(self.width.0, x - self.center) * self.normalizer
        } else {
            0.0
        }
    }
}

/// Parameters of `ρ_{r1}(x - c1)·ρ_{r2}(x - c2) = ρ_{r0}(c1 - c2)·ρ_{r3}(x - c3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductDecomposition {
    pub r0: Width,
    pub r3: Width,
    pub c3: Vec<f64>,
}

pub fn gaussian_product_decompose(r1: Width, c1: &[f64], r2: Width, c2: &[f64]) -> Result<ProductDecomposition> {
    if c1.len() != c2.len() {
        return Err(Error::Domain(format!(
            "center dimensions differ: {} vs {}",
            c1.len(),
            c2.len()
        )));
    }
    let (a, b) = (r1.0, r2.0);
    let r0 = a.hypot(b);
    let r3 = a * b / r0;
    // r3²/r1² = r2²/r0² and r3²/r2² = r1²/r0²; this form stays finite as r2 → ∞.
    let w1 = (b / r0) * (b / r0);
    let w2 = (a / r0) * (a / r0);
    let c3 = c1.iter().zip(c2).map(|(x, y)| w1 * x + w2 * y).collect();
    Ok(ProductDecomposition { r0: Width(r0), r3: Width(r3), c3 })
}

/// Relative residual `|ρ_s(ℤ) - s·ρ_{1/s}(ℤ)| / ρ_s(ℤ)` of Poisson summation
/// applied to `ρ_s` on ℤ.
pub fn poisson_residual(s: Width, trunc: TailTruncation) -> Result<f64> {
    let dual = Width::new(1.0 / s.0)?;
    let dual_trunc = TailTruncation::for_width(dual, trunc.eps_tail)?;
    let primal = theta_mass(s, trunc);
    let transformed = s.0 * theta_mass(dual, dual_trunc);
    Ok((primal - transformed).abs() / primal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(s: f64) -> Width {
        Width::new(s).unwrap()
    }

    #[test]
    fn rho_values() {
        assert_eq!(rho(w(1.0), &[0.0]).unwrap(), 1.0);
        assert!((rho(w(1.0), &[1.0]).unwrap() - (-PI).exp()).abs() < 1e-16);
        assert!((rho(w(1.0), &[1.0]).unwrap() - 0.0432139).abs() < 1e-7);
        assert!(rho(w(1.0), &[f64::NAN]).is_err());
        assert!(rho(w(1.0), &[f64::INFINITY]).is_err());
    }

    #[test]
    fn width_rejects_nonpositive() {
        assert!(Width::new(0.0).is_err());
        assert!(Width::new(-1.0).is_err());
        assert!(Width::new(f64::NAN).is_err());
    }

    #[test]
    fn std_dev_round_trip() {
        for s in [0.01, 0.5, 1.0, 8.0, 123.0] {
            let back = Width::from_std_dev(w(s).std_dev()).unwrap().get();
            assert!((back - s).abs() <= 1e-15 * s);
        }
        assert!((w(1.0).std_dev().powi(2) - 1.0 / (2.0 * PI)).abs() < 1e-16);
    }

    #[test]
    fn theta_mass_at_one() {
        // Direct oracle to K = 10.
        let oracle: f64 = 1.0 + 2.0 * (1..=10).map(|k| (-PI * (k * k) as f64).exp()).sum::<f64>();
        let got = theta_mass(w(1.0), TailTruncation::default_for(w(1.0)));
        assert!((got - oracle).abs() < 1e-15);
        assert!((got - 1.0864348).abs() < 1e-7);
    }

    #[test]
    fn theta_mass_lower_bound() {
        for s in [0.1, 1.0, 8.0] {
            let m = theta_mass(w(s), TailTruncation::default_for(w(s)));
            assert!(m >= 1.0f64.max(s) - 1e-12, "s={s} mass={m}");
        }
        let tiny = w(1e-3);
        assert_eq!(theta_mass(tiny, TailTruncation::default_for(tiny)), 1.0);
    }

    #[test]
    fn cutoff_certifies_eps() {
        for s in [0.05, 1.0, 7.3, 16.0] {
            let t = TailTruncation::default_for(w(s));
            assert!(t.certified_bound(w(s)) <= DEFAULT_EPS_TAIL);
        }
        assert!(TailTruncation::for_width(w(1.0), 0.0).is_err());
        assert!(TailTruncation::for_width(w(1.0), 1.5).is_err());
    }

    #[test]
    fn two_sided_tail_s1_d1() {
        let s = w(1.0);
        let t = TailTruncation::default_for(s);
        // Oracle: 1 - 1/ρ_1(ℤ) with ρ_1(ℤ) summed directly to K=10.
        let theta: f64 = 1.0 + 2.0 * (1..=10).map(|k| (-PI * (k * k) as f64).exp()).sum::<f64>();
        let oracle = 1.0 - 1.0 / theta;
        let got = discrete_gaussian_two_sided_tail(s, 1, t).unwrap();
        assert!((got - oracle).abs() < 1e-15);
        assert!((got - 0.0795582).abs() < 1e-6);
        assert!(discrete_gaussian_two_sided_tail(s, 0, t).is_err());
    }

    #[test]
    fn two_sided_tail_vanishes() {
        let s = w(2.0);
        let t = TailTruncation::default_for(s);
        let d = 8; // π·64/4 ≈ 50 > 40
        assert!(discrete_gaussian_two_sided_tail(s, d, t).unwrap() <= DEFAULT_EPS_TAIL);
    }

    #[test]
    fn degenerate_width_samples_zero() {
        let s = w(1e-4);
        let dg = DiscreteGaussian::new(s, TailTruncation::default_for(s));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!((0..1000).all(|_| dg.sample(&mut rng) == 0));
    }

    #[test]
    fn sampler_support_is_certified_range() {
        let s = w(8.0);
        let t = TailTruncation::default_for(s);
        let dg = DiscreteGaussian::new(s, t);
        assert_eq!(dg.support(), (-(t.cutoff as i64), t.cutoff as i64));
    }

    #[test]
    fn truncated_wide_limit() {
        let tg = TruncatedGaussian::new(0.0, w(1.0), 10.0).unwrap();
        assert!((tg.normalizer - 1.0).abs() < 1e-15);
        assert!((tg.density(0.0) - 1.0).abs() < 1e-15);
        assert_eq!(tg.density(10.5), 0.0);
        assert!(TruncatedGaussian::new(0.0, w(1.0), 0.0).is_err());
        assert!(TruncatedGaussian::new(0.0, w(1.0), -1.0).is_err());
    }

    #[test]
    fn truncated_normalizer_at_least_one() {
        for (s, a) in [(1.0, 0.1), (0.3, 0.3), (2.0, 5.0)] {
            let tg = TruncatedGaussian::new(0.5, w(s), a).unwrap();
            assert!(tg.normalizer >= 1.0);
        }
    }

    #[test]
    fn truncated_keeps_untruncated_mass() {
        use crate::quadrature::{integrate, QuadConfig};
        for (s, a) in [(1.0, 0.1), (0.3, 0.3), (2.0, 5.0)] {
            let tg = TruncatedGaussian::new(0.5, w(s), a).unwrap();
            let r = integrate(|x| tg.density(x), 0.5 - a, 0.5 + a, &[0.5], QuadConfig::default()).unwrap();
            assert!((r.value - s).abs() < 1e-10 * s, "{s} {a}: {}", r.value);
        }
    }

    #[test]
    fn product_symmetric_case() {
        let p = gaussian_product_decompose(w(1.0), &[0.0], w(1.0), &[0.0]).unwrap();
        assert!((p.r0.get() - 2f64.sqrt()).abs() < 1e-15);
        assert!((p.r3.get() - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(p.c3, vec![0.0]);
    }

    #[test]
    fn product_flat_second_factor() {
        let p = gaussian_product_decompose(w(0.7), &[1.5, -2.0], w(1e9), &[3.0, 3.0]).unwrap();
        assert!((p.r3.get() - 0.7).abs() < 1e-12);
        assert!((p.c3[0] - 1.5).abs() < 1e-12);
        assert!((p.c3[1] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn product_dimension_mismatch() {
        assert!(gaussian_product_decompose(w(1.0), &[0.0], w(1.0), &[0.0, 1.0]).is_err());
    }

    #[test]
    fn poisson_fixed_points() {
        for s in [1.0, 8.0, 0.125] {
            let r = poisson_residual(w(s), TailTruncation::default_for(w(s))).unwrap();
            assert!(r <= 1e-12, "s={s} residual={r}");
        }
    }

    #[test]
    fn periodic_mass_is_periodic() {
        let s = w(0.3);
        let t = TailTruncation::default_for(s);
        for x in [0.0, 0.17, 0.5, 0.93] {
            let a = periodic_mass(s, t, x);
            let b = periodic_mass(s, t, x + 3.0);
            assert!((a - b).abs() < 1e-15);
        }
        assert!((periodic_mass(s, t, 0.0) - theta_mass(s, t)).abs() < 1e-15);
    }
}
