use proptest::prelude::*;

use clwe_core::gaussian::{gaussian_product_decompose, poisson_residual, rho_1d, TailTruncation, Width};
use clwe_core::harness::VerificationReport;
use clwe_core::instance::{decode_dataset, decode_manifest, decode_secret, EmbeddingSpec, MixtureParams};
use clwe_core::oracle::{build_intervals, build_oracle, coefficient_sign, ltf_weights, OraclePtf};
use clwe_core::quadrature::{integrate, QuadConfig};
use clwe_core::samplers::ClweParams;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit(v: &[f64]) -> Vec<f64> {
    let len = dot(v, v).sqrt();
    v.iter().map(|x| x / len).collect()
}

fn oracle(w: Vec<f64>, gamma: f64, out_beta: f64, d: u32) -> OraclePtf {
    let p = MixtureParams::new(ClweParams::new(gamma, out_beta / 2.0, w.clone()).unwrap(), out_beta, None).unwrap();
    build_oracle(&build_intervals(&p).unwrap(), w, d).unwrap()
}

fn direction(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n)
        .prop_filter("nonzero", |v| dot(v, v) > 1e-6)
        .prop_map(|v| unit(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poisson_summation_holds(s in 0.1f64..16.0) {
        let w = Width::new(s).unwrap();
        prop_assert!(poisson_residual(w, TailTruncation::default_for(w)).unwrap() <= 1e-10);
    }

    #[test]
    fn gaussian_product_factorizes(
        r1 in 0.05f64..10.0, r2 in 0.05f64..10.0,
        c1 in -3.0f64..3.0, c2 in -3.0f64..3.0, x in -4.0f64..4.0,
    ) {
        let dec = gaussian_product_decompose(Width::new(r1).unwrap(), &[c1], Width::new(r2).unwrap(), &[c2]).unwrap();
        let lhs = rho_1d(r1, x - c1) * rho_1d(r2, x - c2);
        let rhs = rho_1d(dec.r0.get(), c1 - c2) * rho_1d(dec.r3.get(), x - dec.c3[0]);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1e-300) + 1e-300, "{lhs} vs {rhs}");
    }

    #[test]
    fn gaussian_integrates_to_width(s in 0.05f64..20.0, c in -2.0f64..2.0) {
        let r = integrate(|x| rho_1d(s, x - c), c - 12.0 * s, c + 12.0 * s, &[c], QuadConfig::default()).unwrap();
        prop_assert!((r.value - s).abs() <= 1e-9 * s, "{} vs {s}", r.value);
    }

    #[test]
    fn coefficient_sign_matches_root_parity(d in 1u32..=10, ts in prop::collection::vec(-1.5f64..1.5, 200)) {
        let o = oracle(vec![1.0], 8.0, 0.02, d);
        let coeffs = o.coefficients();
        for t in ts {
            if o.root_distance(t) < 1e-6 {
                continue;
            }
            prop_assert_eq!(coefficient_sign(&coeffs, t), o.classify_projection(t), "t = {}", t);
        }
    }

    #[test]
    fn roots_recoverable_from_coefficients(d in 1u32..=5, out_beta in 0.005f64..0.05) {
        let o = oracle(vec![1.0], 8.0, out_beta, d);
        let coeffs = o.coefficients();
        for &r in &o.roots {
            let (mut lo, mut hi) = (r - 1e-4, r + 1e-4);
            let s_lo = coefficient_sign(&coeffs, lo);
            prop_assert_ne!(s_lo, coefficient_sign(&coeffs, hi), "no sign change around {}", r);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if coefficient_sign(&coeffs, mid) == s_lo { lo = mid } else { hi = mid }
            }
            prop_assert!((0.5 * (lo + hi) - r).abs() <= 1e-8, "root {} recovered as {}", r, 0.5 * (lo + hi));
        }
    }

    #[test]
    fn embedded_weights_reproduce_oracle(w in direction(2), pts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 50)) {
        let o = oracle(w, 8.0, 0.02, 1);
        let spec = EmbeddingSpec::new(2, o.degree(), None).unwrap();
        let weights = ltf_weights(&o, &spec).unwrap();
        for (a, b) in pts {
            let x = [a, b];
            if o.root_distance(dot(&o.w, &x)) < 1e-6 {
                continue;
            }
            let phi = spec.embed(&x).unwrap();
            prop_assert_eq!(clwe_core::instance::Label::of(dot(&weights, &phi)), o.classify(&x));
        }
    }

    #[test]
    fn decoders_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..512)) {
        let _ = decode_dataset(&bytes);
        let _ = decode_manifest(&bytes);
        let _ = decode_secret(&bytes);
        let text = String::from_utf8_lossy(&bytes);
        let _ = OraclePtf::from_json(&text);
        let _ = VerificationReport::from_json(&text);
    }

    #[test]
    fn single_byte_flips_are_rejected(pos in any::<prop::sample::Index>(), flip in 1u8..=255) {
        let p = MixtureParams::new(ClweParams::new(8.0, 0.01, vec![0.6, 0.8]).unwrap(), 0.02, None).unwrap();
        let ds = clwe_core::instance::generate_mixture(&p, 20, 3).unwrap();
        let mut bytes = clwe_core::instance::encode_dataset(&ds);
        let i = pos.index(bytes.len());
        bytes[i] ^= flip;
        prop_assert!(decode_dataset(&bytes).is_err(), "flipped byte {} accepted", i);
    }
}
