//! Reference values recomputed independently and frozen.

use std::f64::consts::PI;

use clwe_core::gaussian::{discrete_gaussian_two_sided_tail, theta_mass, TailTruncation, Width};
use clwe_core::harness::truncation_tvd_bound;
use clwe_core::instance::MixtureParams;
use clwe_core::oracle::{build_intervals, oracle_error_bound, oracle_error_exact};
use clwe_core::samplers::{ClweParams, HclweSpec};

/// Plain symmetric sum of `exp(−π k²/s²)` over `|k| ≤ 200`.
fn naive_theta(s: f64) -> f64 {
    (-200i64..=200).map(|k| (-PI * (k * k) as f64 / (s * s)).exp()).sum()
}

fn naive_tail(s: f64, d: i64) -> f64 {
    let t: f64 = (d..=200).map(|k| (-PI * (k * k) as f64 / (s * s)).exp()).sum();
    2.0 * t / naive_theta(s)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs()
}

fn desk() -> MixtureParams {
    let w = vec![0.25; 16];
    MixtureParams::new(ClweParams::new(8.0, 0.01, w).unwrap(), 0.02, None).unwrap()
}

#[test]
fn theta_at_unit_width() {
    let w = Width::new(1.0).unwrap();
    let v = theta_mass(w, TailTruncation::default_for(w));
    assert!(close(v, 1.0864348112, 1e-10), "{v}");
    assert!(close(v, naive_theta(1.0), 1e-14));
}

#[test]
fn two_sided_tail_at_unit_width() {
    let w = Width::new(1.0).unwrap();
    let v = discrete_gaussian_two_sided_tail(w, 1, TailTruncation::default_for(w)).unwrap();
    assert!(close(v, 0.0795582122, 1e-9), "{v}");
    assert!(close(v, naive_tail(1.0, 1), 1e-13));
}

#[test]
fn desk_oracle_error() {
    let p = desk();
    let exact = oracle_error_exact(&p, 8).unwrap();
    let s = (8.0f64 * 8.0 + 0.02 * 0.02).sqrt();
    assert!(close(exact, 0.0064462123, 1e-8), "{exact}");
    // The error is half of the two-sided tail beyond d, plus half of the k = d term.
    let independent = 0.5 * naive_tail(s, 9) + 0.5 * (-PI * 64.0 / (s * s)).exp() / naive_theta(s);
    assert!(close(exact, independent, 1e-12), "{exact} vs {independent}");

    let bound = oracle_error_bound(&p, 8);
    assert!(close(bound, 0.0432147668, 1e-9), "{bound}");
    assert!(exact < bound);
}

#[test]
fn truncation_tvd_bound_at_desk_noise() {
    let v = truncation_tvd_bound(0.02);
    assert!(close(v, 0.0154436331, 1e-9), "{v}");
    assert!(close(v, 8.0 * (-6.25f64).exp(), 1e-15));
}

#[test]
fn default_radius_and_gap() {
    let a = HclweSpec::default_alpha(8.0, 0.02);
    assert!(close(a, 0.8 / 64.0004, 1e-15), "{a}");
    let f = build_intervals(&desk()).unwrap();
    // Phases 0 and 1/2 put the − centers 1/16 above the + centers, slightly
    // past the midpoint of the spacing 8/64.0004.
    assert!(close(f.gap, 8.0 / 64.0004 - 0.0625, 1e-12), "gap {}", f.gap);
    assert!(f.gap > 2.0 * f.alpha);
    assert!(close(f.gap / (2.0 * f.alpha), 2.4999, 1e-4));
}
