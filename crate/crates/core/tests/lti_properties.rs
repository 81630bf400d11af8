//! Cross-route properties of the LTI layer: realizations against direct
//! rational evaluation, and the two independent H-infinity norm methods
//! against each other on random stable systems.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use splinterp_core::closed_form;
use splinterp_core::lti::{poly_mul, RationalFilter};

/// Random stable filter with poles of modulus <= 0.9, order <= max_order.
fn random_stable(rng: &mut ChaCha8Rng, max_order: usize) -> RationalFilter {
    let n_pairs = rng.gen_range(0..=(max_order / 2));
    let n_real = rng.gen_range(0..=(max_order - 2 * n_pairs));
    let mut den = vec![1.0];
    for _ in 0..n_pairs {
        let r: f64 = rng.gen_range(0.05..0.9);
        let th: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        // (1 - p z^-1)(1 - conj(p) z^-1) = 1 - 2 r cos(th) z^-1 + r^2 z^-2
        den = poly_mul(&den, &[1.0, -2.0 * r * th.cos(), r * r]);
    }
    for _ in 0..n_real {
        let p: f64 = rng.gen_range(-0.9..0.9);
        den = poly_mul(&den, &[1.0, -p]);
    }
    let deg = den.len(); // numerator degree up to den degree
    let num: Vec<f64> = (0..deg).map(|_| rng.gen_range(-1.0..1.0)).collect();
    RationalFilter::new(num, den).unwrap()
}

#[test]
fn realization_round_trip_at_random_circle_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for _ in 0..20 {
        let f = random_stable(&mut rng, 8);
        let ss = f.realize().unwrap();
        let ev = ss.freq_evaluator();
        for _ in 0..256 {
            let theta: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
            let direct = f.eval_theta(theta);
            let via_ss = ev.eval_theta(theta);
            let rel = (direct - via_ss).norm() / (1.0 + direct.norm());
            assert!(rel < 1e-10, "relative mismatch {rel}");
        }
    }
}

#[test]
fn realization_of_random_fourth_order_filter() {
    // the per-operation example: 64 grid points to 1e-10
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let f = random_stable(&mut rng, 4);
    let ss = f.realize().unwrap();
    for k in 0..64 {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
        let z = Complex64::from_polar(1.0, theta);
        assert!((f.eval(z) - ss.eval(z)).norm() < 1e-10);
    }
}

#[test]
fn hinf_is_submultiplicative_over_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for _ in 0..20 {
        let f = random_stable(&mut rng, 4);
        let g = random_stable(&mut rng, 4);
        let nf = f.hinf_norm().unwrap();
        let ng = g.hinf_norm().unwrap();
        let nfg = f.series(&g).hinf_norm().unwrap();
        assert!(
            nfg <= nf * ng + 1e-8 * (1.0 + nf * ng),
            "submultiplicativity violated: {nfg} > {nf} * {ng}"
        );
    }
}

#[test]
fn bisection_and_grid_sweep_agree_on_fifty_random_systems() {
    // hinf_norm itself enforces the cross-check; this exercises it on the
    // spec's 50 random stable systems of order <= 10
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for i in 0..50 {
        let f = random_stable(&mut rng, 10);
        let norm = f.hinf_norm().unwrap_or_else(|e| panic!("system {i}: {e}"));
        assert!(norm.is_finite() && norm >= 0.0);
    }
}

#[test]
fn designed_cubic_residual_is_allpass_constant() {
    for d in 1..=8 {
        let e = closed_form::cubic_residual(&closed_form::optimal_cubic(d), d);
        let resp = e.frequency_response(4096).unwrap();
        let mags = resp.magnitudes();
        let max = mags.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = mags.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(max - min < 1e-9, "d={d}: |E| varies by {}", max - min);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn apply_is_linear(
        coeffs in proptest::collection::vec(-1.0f64..1.0, 1..6),
        pole in -0.8f64..0.8,
        x in proptest::collection::vec(-10.0f64..10.0, 1..40),
        y_sig in proptest::collection::vec(-10.0f64..10.0, 1..40),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
    ) {
        let f = RationalFilter::new(coeffs, vec![1.0, pole]).unwrap();
        let n = x.len().min(y_sig.len());
        let combined: Vec<f64> = (0..n).map(|i| a * x[i] + b * y_sig[i]).collect();
        let fx = f.apply(&x[..n]);
        let fy = f.apply(&y_sig[..n]);
        let fc = f.apply(&combined);
        for i in 0..n {
            let want = a * fx[i] + b * fy[i];
            prop_assert!((fc[i] - want).abs() <= 1e-12 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn series_evaluates_as_product(
        n1 in proptest::collection::vec(-1.0f64..1.0, 1..4),
        n2 in proptest::collection::vec(-1.0f64..1.0, 1..4),
        p1 in -0.8f64..0.8,
        p2 in -0.8f64..0.8,
        theta in 0.0f64..std::f64::consts::TAU,
    ) {
        let f = RationalFilter::new(n1, vec![1.0, p1]).unwrap();
        let g = RationalFilter::new(n2, vec![1.0, p2]).unwrap();
        let prod = f.series(&g);
        let direct = f.eval_theta(theta) * g.eval_theta(theta);
        prop_assert!((prod.eval_theta(theta) - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
    }
}
