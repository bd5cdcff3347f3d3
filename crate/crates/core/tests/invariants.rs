use casimir::cli::{builtin_material, builtin_oscillators};
use casimir::lifshitz::{
    free_energy, matsubara_frequencies, pressure, pressure_ideal_metal, LifshitzOptions, MirrorPair,
};
use casimir::models::{MaterialModel, PermeabilityDecay, PermeabilityModel};
use casimir::thermo::{entropy, entropy_curve, DEFAULT_LADDER};
use proptest::prelude::*;

fn model(i: usize) -> MaterialModel {
    match i {
        0 => builtin_material("drude").unwrap(),
        1 => builtin_material("plasma").unwrap(),
        _ => MaterialModel::generalized(builtin_oscillators()).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pressure_magnitude_decreases_with_separation(
        i in 0usize..3, a in 100.0f64..3000.0, step in 1.01f64..2.0, t in 1.0f64..600.0,
    ) {
        let opts = LifshitzOptions::default();
        let near = pressure(&MirrorPair::symmetric(model(i), a), t, &opts).unwrap().pressure;
        let far = pressure(&MirrorPair::symmetric(model(i), a * step), t, &opts).unwrap().pressure;
        prop_assert!(far.abs() < near.abs());
    }

    // Thermal corrections can push |P| above the zero-temperature ideal metal
    // at large aT, so the bound is taken against a near-ideal mirror at the same T.
    #[test]
    fn bounded_by_ideal_metal(i in 0usize..3, a in 100.0f64..5000.0, t in 1.0f64..300.0) {
        let opts = LifshitzOptions::default();
        let p = pressure(&MirrorPair::symmetric(model(i), a), t, &opts).unwrap().pressure;
        let ideal = pressure(&MirrorPair::symmetric(MaterialModel::plasma(1e4).unwrap(), a), t, &opts).unwrap().pressure;
        prop_assert!(p.abs() <= ideal.abs() * (1.0 + 1e-9));
        if t <= 10.0 {
            prop_assert!(p.abs() <= pressure_ideal_metal(a).abs() * (1.0 + 1e-9));
        }
    }

    #[test]
    fn matsubara_grid_starts_at_zero_and_increases(t in 0.1f64..1000.0, n in 1u64..200) {
        let g = matsubara_frequencies(t, n).unwrap();
        let xs: Vec<f64> = g.frequencies().collect();
        prop_assert_eq!(xs[0], 0.0);
        prop_assert!(xs.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn permeability_decays_to_one(mu0 in 1.0f64..500.0, cutoff in 1e-4f64..1.0, x in 1e-4f64..1e2, r in 1.0f64..10.0) {
        let m = PermeabilityModel { static_mu: mu0, decay: PermeabilityDecay::DebyeCutoff { cutoff } };
        let (a, b) = (casimir::models::mu_at_matsubara(&m, x, 1), casimir::models::mu_at_matsubara(&m, x * r, 1));
        prop_assert!(a >= 1.0 && b >= 1.0 && b <= a);
        prop_assert!(casimir::models::mu_at_matsubara(&m, 1e12, 1) - 1.0 < 1e-12 * mu0);
    }
}

#[test]
fn free_energy_derivative_is_pressure() {
    let opts = LifshitzOptions::default();
    for i in 0..3 {
        let (a, t) = (700.0, 150.0);
        let f = |x: f64| free_energy(&MirrorPair::symmetric(model(i), x), t, &opts).unwrap().free_energy;
        let h = 0.5;
        let dfda = (f(a - 2.0 * h) - 8.0 * f(a - h) + 8.0 * f(a + h) - f(a + 2.0 * h)) / (12.0 * h) * 1e9;
        let p = pressure(&MirrorPair::symmetric(model(i), a), t, &opts).unwrap().pressure;
        assert!((p + dfda).abs() <= 1e-4 * p.abs(), "model {i}: {p:e} vs {dfda:e}");
    }
}

#[test]
fn nonzero_matsubara_terms_continuous_in_gamma() {
    let opts = LifshitzOptions::default();
    let (a, t) = (1000.0, 300.0);
    let drude = pressure(&MirrorPair::symmetric(MaterialModel::drude(9.0, 1e-6).unwrap(), a), t, &opts).unwrap();
    let plasma = pressure(&MirrorPair::symmetric(model(1), a), t, &opts).unwrap();
    for (l, (d, p)) in drude.per_l.iter().zip(&plasma.per_l).enumerate().skip(1) {
        if p.abs() > 1e-12 * plasma.pressure.abs() {
            assert!((d / p - 1.0).abs() <= 1e-4, "l = {l}: {d:e} vs {p:e}");
        }
    }
    assert_eq!(drude.l0_te, 0.0);
    assert!(plasma.l0_te < 0.0);
}

#[test]
fn entropy_agrees_with_five_point_difference() {
    let opts = LifshitzOptions::default();
    for i in 0..2 {
        let pair = MirrorPair::symmetric(model(i), 1000.0);
        let t = 30.0;
        let s = entropy(&pair, t, 0.1, &opts).unwrap();
        let f = |x: f64| free_energy(&pair, x, &opts).unwrap().free_energy;
        let h = 0.02 * t;
        let reference = -(f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h);
        assert!(
            (s.entropy - reference).abs() <= s.err_est.max(1e-6 * reference.abs()),
            "model {i}: {:e} ± {:e} vs {reference:e}",
            s.entropy,
            s.err_est
        );
    }
}

#[test]
fn lossless_entropy_vanishes_on_the_lowest_decade() {
    let opts = LifshitzOptions::default();
    for i in 1..3 {
        let curve = entropy_curve(&MirrorPair::symmetric(model(i), 1000.0), &DEFAULT_LADDER, 0.1, &opts).unwrap();
        let low: Vec<f64> = curve
            .temperatures
            .iter()
            .zip(&curve.entropy)
            .filter(|(t, _)| **t <= 20.0)
            .map(|(_, s)| s.abs())
            .collect();
        assert!(low.windows(2).all(|w| w[1] < w[0]), "model {i}: {low:?}");
        assert!(curve.extrapolated_zero.abs() <= 1e-3 * curve.entropy[0].abs());
    }
}

#[test]
fn drude_entropy_negative_below_crossover() {
    let opts = LifshitzOptions::default();
    let curve = entropy_curve(&MirrorPair::symmetric(model(0), 5000.0), &DEFAULT_LADDER, 0.1, &opts).unwrap();
    assert!(curve.entropy[0] > 0.0);
    let first_negative = curve.entropy.iter().position(|s| *s < 0.0).expect("a crossover on the ladder");
    assert!(curve.entropy[first_negative..].iter().all(|s| *s < 0.0), "{:?}", curve.entropy);
}
