//! Interval geometry of the two truncated families and the planted
//! polynomial threshold function that separates them.
//!
//! Along the hidden direction the `+1` class lives on intervals
//! `J⁺_k = [μ⁺_k − α, μ⁺_k + α]` and the `−1` class on `J⁻_k`. The planted
//! classifier is the sign of the monic polynomial whose `4d` roots sit halfway
//! between each central `J⁻_k` (`k = −d+1, …, d`) and its two `J⁺`
//! neighbours. Signs are evaluated by counting roots, which stays exact at
//! degrees where expanded coefficients would overflow.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, FormatError, Result};
use crate::gaussian::{rho_1d, theta_mass, TailTruncation};
use crate::instance::{EmbeddingSpec, Label, MixtureParams};
use crate::samplers::dot;

pub const ORACLE_FORMAT_VERSION: u16 = 1;

fn exact(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or_else(|| Error::Domain(format!("{v} is not a finite number")))
}

/// Exact test of whether the supports of the `c_plus` and `c_minus`
/// families are disjoint: the minimum distance between the two lattices of
/// means must exceed `2α`.
///
/// `alpha = None` means the default radius `γ/(10(β² + γ²))`, taken as an
/// exact rational in `γ` and `β`. Every input float is converted exactly, so
/// the answer is the true one for the given floats, boundary included. For
/// `c_plus = 0`, `c_minus = 1/2` and the default radius this is the
/// condition `β² < (3/5)γ²`.
pub fn supports_disjoint(gamma: f64, out_beta: f64, alpha: Option<f64>, c_plus: f64, c_minus: f64) -> Result<bool> {
    Ok(exact_margin(gamma, out_beta, alpha, c_plus, c_minus)? > BigRational::zero())
}

/// `gap − 2α`, positive exactly when the supports are disjoint. The sign of
/// the returned float is the sign of the exact value.
pub fn support_margin(gamma: f64, out_beta: f64, alpha: Option<f64>, c_plus: f64, c_minus: f64) -> Result<f64> {
    let m = exact_margin(gamma, out_beta, alpha, c_plus, c_minus)?;
    let v = m.to_f64().unwrap_or(0.0);
    Ok(match (v == 0.0, m.is_zero(), m.is_negative()) {
        (true, false, true) => -f64::MIN_POSITIVE,
        (true, false, false) => f64::MIN_POSITIVE,
        _ => v,
    })
}

fn exact_margin(gamma: f64, out_beta: f64, alpha: Option<f64>, c_plus: f64, c_minus: f64) -> Result<BigRational> {
    if !(gamma > 0.0 && out_beta > 0.0) {
        return Err(Error::Domain("gamma and out_beta must be positive".into()));
    }
    let g = exact(gamma)?;
    let b = exact(out_beta)?;
    let s2 = &b * &b + &g * &g;
    let spacing = &g / &s2;
    let two_alpha = match alpha {
        None => BigRational::from_integer(2.into()) * &g / (BigRational::from_integer(10.into()) * &s2),
        Some(a) => BigRational::from_integer(2.into()) * exact(a)?,
    };
    let raw = (exact(c_minus)? - exact(c_plus)?) / &g;
    let q = (&raw / &spacing).floor();
    let r = raw - q * &spacing;
    let other = &spacing - &r;
    let gap = if r < other { r } else { other };
    Ok(gap - two_alpha)
}

/// Centers and radius of the `J⁺_k` / `J⁻_k` intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalFamily {
    pub gamma: f64,
    pub out_beta: f64,
    pub alpha: f64,
    pub c_plus: f64,
    pub c_minus: f64,
    /// `γ/(β² + γ²)`.
    pub spacing: f64,
    /// Minimum distance between a `+` center and a `−` center.
    pub gap: f64,
    /// Certified component index range `[k_min, k_max]`.
    pub k_min: i64,
    pub k_max: i64,
}

impl IntervalFamily {
    pub fn mu_plus(&self, k: i64) -> f64 {
        self.spacing * k as f64 - self.c_plus / self.gamma
    }

    pub fn mu_minus(&self, k: i64) -> f64 {
        self.spacing * k as f64 - self.c_minus / self.gamma
    }

    pub fn nearest_plus(&self, t: f64) -> i64 {
        ((t + self.c_plus / self.gamma) / self.spacing).round() as i64
    }

    pub fn nearest_minus(&self, t: f64) -> i64 {
        ((t + self.c_minus / self.gamma) / self.spacing).round() as i64
    }

    /// Index of the `J⁺` band containing `t`, if any.
    pub fn plus_band(&self, t: f64) -> Option<i64> {
        let k = self.nearest_plus(t);
        ((t - self.mu_plus(k)).abs() <= self.alpha).then_some(k)
    }

    /// Index of the `J⁻` band containing `t`, if any.
    pub fn minus_band(&self, t: f64) -> Option<i64> {
        let k = self.nearest_minus(t);
        ((t - self.mu_minus(k)).abs() <= self.alpha).then_some(k)
    }

    pub fn disjoint(&self) -> bool {
        self.gap > 2.0 * self.alpha
    }
}

/// Interval family of a mixture; fails if the supports overlap.
pub fn build_intervals(p: &MixtureParams) -> Result<IntervalFamily> {
    p.check_disjoint()?;
    let spacing = p.plus.spacing();
    let gamma = p.gamma();
    let raw = ((p.minus.c - p.plus.c) / gamma).rem_euclid(spacing);
    let gap = raw.min(spacing - raw);
    let (k_min, k_max) = p.plus.component_range();
    Ok(IntervalFamily {
        gamma,
        out_beta: p.out_beta(),
        alpha: p.alpha(),
        c_plus: p.plus.c,
        c_minus: p.minus.c,
        spacing,
        gap,
        k_min,
        k_max,
    })
}

/// The planted degree-`4d` PTF `x ↦ sign(p(⟨w, x⟩))`.
#[derive(Debug, Clone, PartialEq)]
pub struct OraclePtf {
    pub w: Vec<f64>,
    pub roots: Vec<f64>,
    pub d: u32,
    pub family: IntervalFamily,
}

/// Builds the oracle protecting `J⁻_{−d+1}, …, J⁻_d`.
pub fn build_oracle(family: &IntervalFamily, w: Vec<f64>, d: u32) -> Result<OraclePtf> {
    if d == 0 {
        return Err(Error::Domain("oracle degree parameter d must be at least 1".into()));
    }
    if !family.disjoint() {
        return Err(Error::Precondition("interval families overlap".into()));
    }
    let mut roots = Vec::with_capacity(4 * d as usize);
    let offset_plus = family.c_plus / family.gamma;
    for k in -(d as i64) + 1..=d as i64 {
        let mu = family.mu_minus(k);
        // J⁺ neighbours: the largest + center below mu and the next one up.
        let j = ((mu + offset_plus) / family.spacing).floor() as i64;
        let left = family.mu_plus(j);
        let right = family.mu_plus(j + 1);
        roots.push(0.5 * (left + mu));
        roots.push(0.5 * (mu + right));
    }
    for pair in roots.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(Error::Numeric(format!("roots not strictly increasing near {}", pair[0])));
        }
    }
    Ok(OraclePtf { w, roots, d, family: family.clone() })
}

/// Where a point sits relative to the planted classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorClass {
    /// On the support and always labeled as the oracle predicts.
    AlwaysCorrect,
    /// On the support and always labeled against the oracle.
    AlwaysWrong,
    OffSupport,
}

impl OraclePtf {
    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// Sign of `p(t)`; `+1` when an even number of roots lies strictly
    /// below `t`, and `+1` on a root.
    pub fn classify_projection(&self, t: f64) -> Label {
        let below = self.roots.partition_point(|&r| r < t);
        if below < self.roots.len() && self.roots[below] == t {
            return Label::Plus;
        }
        if below % 2 == 0 {
            Label::Plus
        } else {
            Label::Minus
        }
    }

    pub fn classify(&self, x: &[f64]) -> Label {
        self.classify_projection(dot(&self.w, x))
    }

    /// Distance from `t` to the nearest root.
    pub fn root_distance(&self, t: f64) -> f64 {
        let i = self.roots.partition_point(|&r| r < t);
        let mut best = f64::INFINITY;
        if i < self.roots.len() {
            best = best.min((self.roots[i] - t).abs());
        }
        if i > 0 {
            best = best.min((t - self.roots[i - 1]).abs());
        }
        best
    }

    pub fn conditional_error_class(&self, x: &[f64]) -> ErrorClass {
        self.error_class_projection(dot(&self.w, x))
    }

    pub fn error_class_projection(&self, t: f64) -> ErrorClass {
        let f = &self.family;
        if f.plus_band(t).is_some() {
            return ErrorClass::AlwaysCorrect;
        }
        match f.minus_band(t) {
            Some(k) if k > -(self.d as i64) && k <= self.d as i64 => ErrorClass::AlwaysCorrect,
            Some(_) => ErrorClass::AlwaysWrong,
            None => ErrorClass::OffSupport,
        }
    }

    /// Coefficients `c_0, …, c_{4d}` of `Π (t − r_i)` in ascending powers,
    /// expanded exactly in rational arithmetic and rounded once.
    pub fn coefficients(&self) -> Vec<f64> {
        expand_roots(&self.roots)
    }

    pub fn to_document(&self) -> OracleDocument {
        OracleDocument {
            format_version: ORACLE_FORMAT_VERSION,
            w: self.w.clone(),
            roots: self.roots.clone(),
            d: self.d,
            family: self.family.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("oracle serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, FormatError> {
        let doc: OracleDocument = serde_json::from_str(s).map_err(|e| FormatError::Manifest(e.to_string()))?;
        doc.into_oracle()
    }
}

/// Serialized form of an [`OraclePtf`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleDocument {
    pub format_version: u16,
    pub w: Vec<f64>,
    pub roots: Vec<f64>,
    pub d: u32,
    pub family: IntervalFamily,
}

impl OracleDocument {
    pub fn into_oracle(self) -> Result<OraclePtf, FormatError> {
        if self.format_version != ORACLE_FORMAT_VERSION {
            return Err(FormatError::VersionMismatch { found: self.format_version, expected: ORACLE_FORMAT_VERSION });
        }
        let bad = |m: &str| Err(FormatError::Manifest(m.to_string()));
        if self.d == 0 || self.roots.len() != 4 * self.d as usize {
            return bad("root count must equal 4d with d ≥ 1");
        }
        if self.roots.iter().any(|r| !r.is_finite()) || self.roots.windows(2).any(|p| !(p[0] < p[1])) {
            return bad("roots must be finite and strictly increasing");
        }
        let len = dot(&self.w, &self.w).sqrt();
        if self.w.is_empty() || !((len - 1.0).abs() <= 1e-12) {
            return bad("w must be a unit vector");
        }
        let f = &self.family;
        if ![f.gamma, f.spacing, f.alpha, f.out_beta].iter().all(|v| v.is_finite() && *v > 0.0) {
            return bad("interval family parameters must be positive");
        }
        Ok(OraclePtf { w: self.w, roots: self.roots, d: self.d, family: self.family })
    }
}

fn expand_roots_exact(roots: &[f64]) -> Result<Vec<BigRational>> {
    let mut coeffs = vec![BigRational::from_integer(BigInt::from(1))];
    for &r in roots {
        let r = exact(r)?;
        let mut next = vec![BigRational::zero(); coeffs.len() + 1];
        for (j, c) in coeffs.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= c * &r;
        }
        coeffs = next;
    }
    Ok(coeffs)
}

fn expand_roots(roots: &[f64]) -> Vec<f64> {
    expand_roots_exact(roots)
        .expect("roots are finite")
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN))
        .collect()
}

/// Evaluates `Σ c_j t^j` exactly and returns its sign (`+1` at zero).
pub fn coefficient_sign(coeffs: &[f64], t: f64) -> Label {
    let t = BigRational::from_float(t).expect("finite");
    let mut acc = BigRational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * &t + BigRational::from_float(*c).expect("finite");
    }
    if acc.is_negative() {
        Label::Minus
    } else {
        Label::Plus
    }
}

/// Weights `W` over the monomial embedding with `sign(⟨W, φ(x)⟩) = classify(x)`.
///
/// `p(⟨w, x⟩) = Σ_j c_j Σ_{|a|=j} (j!/a!) w^a x^a`, so the weight of monomial
/// `x^a` is `c_{|a|}·(|a|!/a!)·w^a`. Each weight is computed exactly and
/// rounded once.
pub fn ltf_weights(o: &OraclePtf, spec: &EmbeddingSpec) -> Result<Vec<f64>> {
    if spec.deg < o.degree() {
        return Err(Error::Precondition(format!(
            "embedding degree {} is below the oracle degree {}",
            spec.deg,
            o.degree()
        )));
    }
    if spec.n != o.w.len() {
        return Err(Error::Domain(format!("embedding is over {} variables, oracle over {}", spec.n, o.w.len())));
    }
    let coeffs = expand_roots_exact(&o.roots)?;
    let w: Vec<BigRational> = o.w.iter().map(|&v| exact(v)).collect::<Result<_>>()?;
    let mut factorial = vec![BigInt::from(1)];
    for i in 1..=spec.deg {
        let next = &factorial[i - 1] * BigInt::from(i);
        factorial.push(next);
    }
    let mut out = vec![0.0; spec.dim];
    for (idx, exps) in spec.exponents().iter().enumerate() {
        let total: usize = exps.iter().map(|&e| e as usize).sum();
        if total >= coeffs.len() || coeffs[total].is_zero() {
            continue;
        }
        let mut multinomial = factorial[total].clone();
        let mut mono = BigRational::from_integer(BigInt::from(1));
        for (wi, &e) in w.iter().zip(exps) {
            if e > 0 {
                multinomial /= &factorial[e as usize];
                mono *= num_traits::pow(wi.clone(), e as usize);
            }
        }
        let weight = &coeffs[total] * BigRational::from_integer(multinomial) * mono;
        out[idx] = weight.to_f64().unwrap_or(f64::NAN);
        if !out[idx].is_finite() {
            return Err(Error::Range(format!("LTF weight {idx} is not representable")));
        }
    }
    Ok(out)
}

/// Misclassification probability of the planted oracle on the mixture:
/// half the `−1` class mass on components outside `{−d+1, …, d}`,
/// `(1/2)·[Σ_{k≤−d} + Σ_{k≥d+1}] ρ_s(k) / ρ_s(ℤ)` with `s = √(β² + γ²)`.
pub fn oracle_error_exact(p: &MixtureParams, d: u32) -> Result<f64> {
    p.check_disjoint()?;
    if d == 0 {
        return Err(Error::Domain("d must be at least 1".into()));
    }
    let s = p.minus.weight_width();
    let trunc = TailTruncation::default_for(s);
    let d = d as u64;
    let upper = d.max(trunc.cutoff) + trunc.cutoff;
    let tail_from = |start: u64| -> f64 { (start..=upper).rev().map(|k| rho_1d(s.get(), k as f64)).sum() };
    // Σ_{k≤−d} = Σ_{k≥d} by symmetry.
    let outside = tail_from(d) + tail_from(d + 1);
    Ok(0.5 * outside / theta_mass(s, trunc))
}

/// The tail bound `exp(−π d²/(β² + γ²))` that dominates [`oracle_error_exact`].
pub fn oracle_error_bound(p: &MixtureParams, d: u32) -> f64 {
    let s = p.minus.weight_width().get();
    let d = d as f64;
    (-std::f64::consts::PI * d * d / (s * s)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::ClweParams;

    fn mixture(n: usize, gamma: f64, out_beta: f64) -> MixtureParams {
        let mut w = vec![0.0; n];
        w[0] = 1.0;
        MixtureParams::new(ClweParams::new(gamma, 0.01, w).unwrap(), out_beta, None).unwrap()
    }

    fn desk() -> (MixtureParams, OraclePtf) {
        let p = mixture(16, 8.0, 0.02);
        let f = build_intervals(&p).unwrap();
        let o = build_oracle(&f, p.w().to_vec(), 8).unwrap();
        (p, o)
    }

    #[test]
    fn disjoint_boundary_is_exact() {
        // spacing 1/2, offset 1/4: gap is exactly 1/4.
        assert!(!supports_disjoint(1.0, 1.0, Some(0.125), 0.0, 0.25).unwrap());
        assert!(supports_disjoint(1.0, 1.0, Some(0.125 - f64::EPSILON / 16.0), 0.0, 0.25).unwrap());
        assert!(supports_disjoint(1.0, 0.77, None, 0.0, 0.5).unwrap());
        assert!(!supports_disjoint(1.0, 0.775, None, 0.0, 0.5).unwrap());
        assert!(!supports_disjoint(1.0, 1.0, None, 0.3, 0.3).unwrap());
        assert!(supports_disjoint(-1.0, 1.0, None, 0.0, 0.5).is_err());
    }

    #[test]
    fn gap_at_gamma_eight() {
        let (_, o) = desk();
        let f = &o.family;
        let want = f.spacing - 1.0 / 16.0;
        assert!((f.gap - want).abs() < 1e-15);
        assert!(f.gap > 2.0 * f.alpha);
    }

    #[test]
    fn single_block_roots() {
        let p = mixture(1, 8.0, 0.02);
        let f = build_intervals(&p).unwrap();
        let o = build_oracle(&f, vec![1.0], 1).unwrap();
        assert_eq!(o.degree(), 4);
        let center = f.spacing / 4.0 - 1.0 / 32.0;
        let r = &o.roots;
        assert!((r[0] + r[3] - 2.0 * center).abs() < 1e-14);
        assert!((r[1] + r[2] - 2.0 * center).abs() < 1e-14);
        assert!((r[1] + 1.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn bands_are_classified() {
        let (_, o) = desk();
        let f = &o.family;
        for k in -12..=12 {
            for frac in [-0.999, -0.5, 0.0, 0.5, 0.999] {
                let tp = f.mu_plus(k) + frac * f.alpha;
                assert_eq!(o.classify_projection(tp), Label::Plus, "J+ {k} {frac}");
                assert_eq!(o.error_class_projection(tp), ErrorClass::AlwaysCorrect);
                let tm = f.mu_minus(k) + frac * f.alpha;
                let inside = (-7..=8).contains(&k);
                let want = if inside { Label::Minus } else { Label::Plus };
                assert_eq!(o.classify_projection(tm), want, "J- {k} {frac}");
                let class = if inside { ErrorClass::AlwaysCorrect } else { ErrorClass::AlwaysWrong };
                assert_eq!(o.error_class_projection(tm), class);
            }
        }
        let between = 0.5 * (f.mu_plus(0) + f.mu_minus(0));
        assert_eq!(o.error_class_projection(between), ErrorClass::OffSupport);
    }

    #[test]
    fn ties_are_plus() {
        let (_, o) = desk();
        for &r in &o.roots {
            assert_eq!(o.classify_projection(r), Label::Plus);
            assert_eq!(o.root_distance(r), 0.0);
        }
    }

    #[test]
    fn quadratic_coefficients() {
        assert_eq!(expand_roots(&[1.0, 2.0]), vec![2.0, -3.0, 1.0]);
        assert_eq!(expand_roots(&[-1.0, 0.0, 1.0]), vec![0.0, -1.0, 0.0, 1.0]);
    }

    #[test]
    fn coefficient_sign_matches_root_count() {
        for d in 1..=3 {
            let p = mixture(1, 4.0, 0.5);
            let f = build_intervals(&p).unwrap();
            let o = build_oracle(&f, vec![1.0], d).unwrap();
            let c = o.coefficients();
            let (lo, hi) = (o.roots[0] - 1.0, o.roots[o.roots.len() - 1] + 1.0);
            for i in 0..=2000 {
                let t = lo + (hi - lo) * i as f64 / 2000.0;
                if o.root_distance(t) < 1e-9 {
                    continue;
                }
                assert_eq!(coefficient_sign(&c, t), o.classify_projection(t), "d={d} t={t}");
            }
        }
    }

    #[test]
    fn ltf_weights_reproduce_classifier() {
        let w = vec![0.6, 0.8];
        let p = MixtureParams::new(ClweParams::new(4.0, 0.01, w.clone()).unwrap(), 0.5, None).unwrap();
        let f = build_intervals(&p).unwrap();
        let o = build_oracle(&f, w, 1).unwrap();
        let spec = EmbeddingSpec::new(2, 4, Some(20)).unwrap();
        let weights = ltf_weights(&o, &spec).unwrap();
        assert_eq!(weights.len(), 20);
        assert!(weights[15..].iter().all(|&v| v == 0.0));
        let mut checked = 0;
        for i in -30..=30 {
            for j in -30..=30 {
                let x = [i as f64 * 0.02, j as f64 * 0.02];
                if o.root_distance(dot(&o.w, &x)) < 1e-6 {
                    continue;
                }
                let phi = spec.embed(&x).unwrap();
                assert_eq!(Label::of(dot(&weights, &phi)), o.classify(&x), "{x:?}");
                checked += 1;
            }
        }
        assert!(checked > 3000);
        assert!(ltf_weights(&o, &EmbeddingSpec::new(2, 3, None).unwrap()).is_err());
        assert!(ltf_weights(&o, &EmbeddingSpec::new(3, 4, None).unwrap()).is_err());
    }

    #[test]
    fn one_variable_weights_are_coefficients() {
        let p = mixture(1, 4.0, 0.5);
        let f = build_intervals(&p).unwrap();
        let o = build_oracle(&f, vec![1.0], 1).unwrap();
        let spec = EmbeddingSpec::new(1, 4, Some(7)).unwrap();
        let weights = ltf_weights(&o, &spec).unwrap();
        assert_eq!(&weights[..5], o.coefficients().as_slice());
        assert_eq!(&weights[5..], &[0.0, 0.0]);
    }

    #[test]
    fn error_decreases_and_is_bounded() {
        let p = mixture(16, 8.0, 0.02);
        let mut prev = 0.5;
        for d in 1..=12 {
            let e = oracle_error_exact(&p, d).unwrap();
            assert!(e < prev, "d={d}");
            assert!(e <= oracle_error_bound(&p, d));
            prev = e;
        }
        assert!(oracle_error_exact(&p, 0).is_err());
    }

    #[test]
    fn desk_error_value() {
        let p = mixture(16, 8.0, 0.02);
        assert!((oracle_error_exact(&p, 8).unwrap() - 0.006_446_212_3).abs() < 1e-9);
        assert!((oracle_error_bound(&p, 8) - 0.043_214_766_8).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip() {
        let (_, o) = desk();
        let back = OraclePtf::from_json(&o.to_json()).unwrap();
        assert_eq!(back, o);
    }

    #[test]
    fn invalid_documents() {
        let (_, o) = desk();
        let mut doc = o.to_document();
        doc.format_version = 2;
        assert!(matches!(doc.into_oracle(), Err(FormatError::VersionMismatch { .. })));
        let mut doc = o.to_document();
        doc.roots.pop();
        assert!(doc.into_oracle().is_err());
        let mut doc = o.to_document();
        doc.roots.swap(0, 1);
        assert!(doc.into_oracle().is_err());
        let mut doc = o.to_document();
        doc.w[0] = 2.0;
        assert!(doc.into_oracle().is_err());
        let mut doc = o.to_document();
        doc.family.alpha = -1.0;
        assert!(doc.into_oracle().is_err());
        assert!(OraclePtf::from_json("{").is_err());
    }

    #[test]
    fn degree_zero_rejected() {
        let (_, o) = desk();
        assert!(build_oracle(&o.family, o.w.clone(), 0).is_err());
    }
}
