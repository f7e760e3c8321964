use proptest::prelude::*;

use augucb::experiments::{make_experiment, run_batch, run_single, ExperimentSpec};
use augucb::{ArmSpec, BanditInstance, PolicyKind, PolicyParams, RngStream};

fn instance(means: &[f64], variances: &[f64]) -> BanditInstance {
    let arms = means
        .iter()
        .zip(variances)
        .map(|(&m, &v)| ArmSpec::gaussian(m, v).unwrap())
        .collect();
    BanditInstance::new(arms, 0.5).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_policy_fills_the_horizon(
        arms in prop::collection::vec((0.0f64..1.0, 0.01f64..1.0), 5..12),
        extra in 0u64..400,
        seed in any::<u64>(),
    ) {
        let (means, vars): (Vec<f64>, Vec<f64>) = arms
            .into_iter()
            .map(|(m, v)| (if (m - 0.5).abs() < 1e-3 { 0.6 } else { m }, v))
            .unzip();
        let inst = instance(&means, &vars);
        let budget = 3 * means.len() as u64 + extra;
        for kind in PolicyKind::ALL {
            let s = run_single(&PolicyParams::new(kind), &inst, budget, &mut RngStream::new(seed)).unwrap();
            prop_assert_eq!(s.len() as u64, budget);
            prop_assert!(s.pulls <= budget);
            if kind != PolicyKind::AugUcb && kind != PolicyKind::Csar {
                prop_assert_eq!(s.pulls, budget);
            }
        }
    }
}

#[test]
fn error_percentages_are_multiples_of_one_over_n() {
    let spec = ExperimentSpec::new(2).unwrap().with_budget(600);
    let series = run_batch(&spec, &spec.roster(), 8, 77, 2).unwrap();
    assert_eq!(series.len(), 6);
    for s in &series {
        assert_eq!(s.error_pct.len(), 600);
        for &p in &s.error_pct {
            let scaled = p * 8.0 / 100.0;
            assert!((scaled - scaled.round()).abs() < 1e-9, "{} {p}", s.label);
        }
    }
}

#[test]
fn batch_of_one_matches_run_single() {
    let spec = ExperimentSpec::new(5).unwrap().with_budget(800);
    let roster = spec.roster();
    let batch = run_batch(&spec, &roster, 1, 31, 1).unwrap();
    let mut rng = RngStream::new(31);
    let inst = spec.instantiate(&mut rng);
    for (entry, agg) in roster.iter().zip(&batch) {
        let single = run_single(&entry.params, &inst, 800, &mut rng.clone()).unwrap();
        let pct: Vec<f64> = single
            .errors
            .iter()
            .map(|&e| if e { 100.0 } else { 0.0 })
            .collect();
        assert_eq!(pct, agg.error_pct, "{}", entry.label);
    }
}

#[test]
fn make_experiment_is_seed_deterministic() {
    let (a, roster) = make_experiment(5, 3).unwrap();
    let (b, _) = make_experiment(5, 3).unwrap();
    let (c, _) = make_experiment(5, 4).unwrap();
    assert_eq!(a.variances(), b.variances());
    assert_ne!(a.variances(), c.variances());
    assert_eq!(a.true_positive_set(), vec![5, 6, 7, 8, 9]);
    assert_eq!(roster.len(), 6);
    assert!(make_experiment(0, 1).is_err());
}
