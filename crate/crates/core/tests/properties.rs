use guesswork_core::guesswork::for_each_permutation;
use guesswork_core::quantum::{joint_weights, unitarity_residual};
use guesswork_core::unitary::{random_angles, random_unitary};
use guesswork_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_measurement(dim: usize, seed: u64) -> ProjectiveMeasurement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ProjectiveMeasurement::new(random_unitary(dim, &mut rng)).unwrap()
}

fn posterior_from(weights: Vec<f64>) -> PosteriorDistribution {
    let total: f64 = weights.iter().sum();
    PosteriorDistribution::from_probs(0, weights.into_iter().map(|w| w / total).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn guesswork_is_unitarily_covariant(dim in 2usize..=4, seed in any::<u64>()) {
        let e = make_generalized_bb84(dim).unwrap();
        let m = random_measurement(dim, seed);
        let u = random_unitary(dim, &mut ChaCha8Rng::seed_from_u64(seed ^ 0x5eed));
        let before = guesswork_for_measurement(&e, &m).unwrap().guesswork;
        let after = guesswork_for_measurement(&e.transformed(&u).unwrap(), &m.transformed(&u).unwrap()).unwrap();
        prop_assert!((before - after.guesswork).abs() < 1e-10);
    }

    #[test]
    fn outcome_probabilities_sum_to_one(dim in 2usize..=5, seed in any::<u64>()) {
        let e = make_generalized_bb84(dim).unwrap();
        let m = random_measurement(dim, seed);
        let total: f64 = (0..dim).map(|k| outcome_probability(&e, &m, k).unwrap()).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn posterior_is_renormalized_joint(dim in 2usize..=5, seed in any::<u64>()) {
        let e = make_generalized_bb84(dim).unwrap();
        let m = random_measurement(dim, seed);
        for k in 0..dim {
            let p = posterior(&e, &m, k).unwrap();
            let joint = joint_weights(&e, &m, k).unwrap();
            let pk = outcome_probability(&e, &m, k).unwrap();
            prop_assert!((p.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for (a, b) in p.probs.iter().zip(&joint) {
                prop_assert!((a - b / pk).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn massey_order_is_never_beaten(weights in prop::collection::vec(0.0f64..1.0, 1..=7)) {
        prop_assume!(weights.iter().sum::<f64>() > 1e-6);
        let p = posterior_from(weights);
        let best = expected_guesses(&p, &massey_order(&p)).unwrap();
        let mut worse = true;
        for_each_permutation(p.len(), |perm| {
            worse &= expected_guesses(&p, perm).unwrap() >= best - 1e-12;
        });
        prop_assert!(worse);
    }

    #[test]
    fn relabeling_symbols_preserves_guesswork(dim in 2usize..=4, seed in any::<u64>()) {
        let e = make_generalized_bb84(dim).unwrap();
        let m = random_measurement(dim, seed);
        let mut perm: Vec<usize> = (0..e.len()).collect();
        perm.rotate_left((seed % e.len() as u64) as usize);
        perm.swap(0, e.len() - 1);
        let a = guesswork_for_measurement(&e, &m).unwrap().guesswork;
        let b = guesswork_for_measurement(&e.permuted(&perm).unwrap(), &m).unwrap().guesswork;
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn row_phases_do_not_matter(dim in 2usize..=4, seed in any::<u64>(), phases in prop::collection::vec(0.0f64..6.3, 4)) {
        let e = make_generalized_bb84(dim).unwrap();
        let m = random_measurement(dim, seed);
        let rows = m
            .rows()
            .into_iter()
            .zip(&phases)
            .map(|(r, &t)| r.into_iter().map(|z| z * Complex64::from_polar(1.0, t)).collect())
            .collect();
        let shifted = ProjectiveMeasurement::new(rows).unwrap();
        let a = guesswork_for_measurement(&e, &m).unwrap().guesswork;
        let b = guesswork_for_measurement(&e, &shifted).unwrap().guesswork;
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn brute_force_agrees_with_massey(dim in 2usize..=3, seed in any::<u64>()) {
        let e = make_generalized_bb84(dim).unwrap();
        let m = random_measurement(dim, seed);
        let a = guesswork_for_measurement(&e, &m).unwrap().guesswork;
        let b = brute_force_best_plan(&e, &m).unwrap().guesswork;
        prop_assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn hedemann_draws_are_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let p3 = HedemannParams3::from_angles(&random_angles(HedemannParams3::N_ANGLES, &mut rng)).unwrap();
        assert!(unitarity_residual(&p3.rows()) < 1e-9);
        let p4 = HedemannParams4::from_angles(&random_angles(HedemannParams4::N_ANGLES, &mut rng)).unwrap();
        assert!(unitarity_residual(&p4.rows()) < 1e-9);
    }
}

#[test]
fn optimizer_is_deterministic_per_seed() {
    let e = make_generalized_bb84(3).unwrap();
    for parameterization in [Parameterization::General, Parameterization::Hedemann] {
        let cfg = OptimizationConfig { restarts: 6, seed: 9, parameterization, ..Default::default() };
        let a = optimize_measurement(&e, &cfg).unwrap();
        let b = optimize_measurement(&e, &cfg).unwrap();
        let bits = |h: &[f64]| h.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a.objective_history), bits(&b.objective_history));
        assert_eq!(a.wall_parameters, b.wall_parameters);
        assert_eq!(a.best.guesswork.to_bits(), b.best.guesswork.to_bits());
    }
}

#[test]
fn optimizer_never_loses_to_standard_basis() {
    for dim in 2..=4 {
        let e = make_generalized_bb84(dim).unwrap();
        let formula = standard_basis_guesswork_formula(dim).unwrap();
        for seed in 0..3 {
            let cfg = OptimizationConfig { restarts: 1, seed, ..Default::default() };
            let r = optimize_measurement(&e, &cfg).unwrap();
            assert!(r.best.guesswork <= formula + 1e-12, "d={dim} seed={seed}: {}", r.best.guesswork);
        }
    }
}

#[test]
fn optimized_measurement_survives_json() {
    let e = make_generalized_bb84(3).unwrap();
    let cfg = OptimizationConfig { restarts: 2, seed: 1, ..Default::default() };
    let r = optimize_measurement(&e, &cfg).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let back: OptimizationResult = serde_json::from_str(&text).unwrap();
    let again = guesswork_for_measurement(&e, &back.best.measurement).unwrap();
    assert!((again.guesswork - r.best.guesswork).abs() < 1e-12);
}
