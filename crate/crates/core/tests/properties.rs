use proptest::prelude::*;

use twoterm::potential::{centrifugal_approx, hulthen_spec, potential_value};
use twoterm::specfun::{hyp2f1_terminating, integrate, ln_beta, ln_gamma};
use twoterm::spectrum::{closed_form_residual_kg, quantization_residual};
use twoterm::wavefunction::{kg_wavefunction, norm_integral_identity, norm_integral_quadrature};
use twoterm::{solve_level, PotentialSpec, QuantumNumbers, SolverConfig, UnitSystem};

fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).map(|j| a + j as f64).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn hyp2f1_matches_naive_summation(
        n in 0usize..=12,
        b in -20.0f64..20.0,
        c in 0.5f64..=20.0,
        z in 0.0f64..=1.0,
    ) {
        let mut naive = 0.0;
        let mut size = 0.0;
        for k in 0..=n {
            let fact: f64 = (1..=k).map(|j| j as f64).product();
            let t = pochhammer(-(n as f64), k) * pochhammer(b, k) / (pochhammer(c, k) * fact)
                * z.powi(k as i32);
            naive += t;
            size += t.abs();
        }
        let fast = hyp2f1_terminating(n, b, c, z).unwrap();
        // error measured against the sum of term magnitudes
        prop_assert!((fast - naive).abs() <= 1e-13 * size, "{fast} vs {naive} (scale {size})");
    }

    #[test]
    fn hyp2f1_is_one_at_origin(n in 0usize..40, b in -50.0f64..50.0, c in 0.5f64..50.0) {
        prop_assert_eq!(hyp2f1_terminating(n, b, c, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn beta_integral(p in -0.9f64..=10.0, q in -0.9f64..=10.0) {
        prop_assume!(p > -0.9 && q > -0.9);
        // split at 1/2, right half reflected by z -> 1 - z
        let left = integrate(|z| z.powf(p) * (1.0 - z).powf(q), 0.0, 0.5, 40).unwrap();
        let right = integrate(|w| w.powf(q) * (1.0 - w).powf(p), 0.0, 0.5, 40).unwrap();
        let exact = ln_beta(p + 1.0, q + 1.0).unwrap().exp();
        prop_assert!(((left + right - exact) / exact).abs() <= 1e-10);
    }

    #[test]
    fn ln_gamma_recurrence(x in 0.1f64..=30.0) {
        let lhs = ln_gamma(x + 1.0).unwrap().exp();
        let rhs = x * ln_gamma(x).unwrap().exp();
        prop_assert!(((lhs - rhs) / rhs).abs() <= 1e-12);
    }

    #[test]
    fn hulthen_form(v0 in 0.0f64..5.0, beta in 0.01f64..2.0, r in 1e-3f64..100.0) {
        let spec = PotentialSpec::new(v0, 0.0, beta, 1.0, 1.0).unwrap();
        let e = (-beta * r).exp();
        let expected = -v0 * e / (1.0 - e);
        let got = potential_value(&spec, r).unwrap();
        prop_assert!((got - expected).abs() <= 1e-12 * expected.abs().max(1e-300));
        prop_assert_eq!(potential_value(&hulthen_spec(v0, beta, 1.0).unwrap(), r).unwrap(), got);
    }

    #[test]
    fn centrifugal_surrogate_is_positive(beta in 0.01f64..2.0, r in 1e-3f64..100.0) {
        let spec = PotentialSpec::new(1.0, 0.0, beta, 1.0, 1.0).unwrap();
        let c = centrifugal_approx(&spec, r).unwrap();
        prop_assert!(c > 0.0);
        // e^{-x}/(1-e^{-x})^2 < 1/x^2 for x > 0
        prop_assert!(c * r * r < 1.0);
    }
}

fn spectrum_inputs() -> impl Strategy<Value = (f64, f64, f64, u32, u32)> {
    (0.3f64..1.5, 0.0f64..0.5, 0.05f64..0.5, 0u32..3, 0u32..3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_window_and_determinism((v0, v1, beta, ell, n) in spectrum_inputs()) {
        let spec = PotentialSpec::new(v0, v1, beta, 1.0, 1.0).unwrap();
        let units = UnitSystem::natural();
        let q = QuantumNumbers::kg(n, ell);
        let config = SolverConfig::default();
        if let Ok(level) = solve_level(&spec, &units, &q, &config) {
            prop_assert!(level.energy > -1.0 && level.energy < 1.0);
            let again = solve_level(&spec, &units, &q, &config).unwrap();
            prop_assert_eq!(level.energy.to_bits(), again.energy.to_bits());
            prop_assert!(quantization_residual(&spec, &units, &q, level.energy).unwrap().abs() < 1e-9);
            // the closed form changes sign within 1e-10 of the same root
            let lo = closed_form_residual_kg(&spec, &units, &q, level.energy - 1e-10).unwrap();
            let hi = closed_form_residual_kg(&spec, &units, &q, level.energy + 1e-10).unwrap();
            prop_assert!(lo * hi <= 0.0, "{lo} {hi}");
        }
    }

    #[test]
    fn wavefunction_normalization((v0, v1, beta, ell, n) in spectrum_inputs()) {
        let spec = PotentialSpec::new(v0, v1, beta, 1.0, 1.0).unwrap();
        let units = UnitSystem::natural();
        if let Ok(level) = solve_level(&spec, &units, &QuantumNumbers::kg(n, ell), &SolverConfig::default()) {
            let u = kg_wavefunction(&spec, &units, &level).unwrap();
            prop_assert!((u.norm_integral().unwrap() - 1.0).abs() < 1e-8);
            prop_assert_eq!(u.count_nodes(), n as usize);
        }
    }

    #[test]
    fn norm_identity(n in 0u32..=3, p in -0.5f64..12.0, q in 0.5f64..6.0) {
        let closed = norm_integral_identity(n, p, q).unwrap();
        let quad = norm_integral_quadrature(n, p, q).unwrap();
        prop_assert!(((closed - quad) / closed).abs() <= 1e-8);
    }
}
