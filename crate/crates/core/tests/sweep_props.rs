use percpath_core::graph::{GeneratorFamily, GeneratorSpec};
use percpath_core::harness::{chernoff_bound, run_trials, BoundCurve, ExperimentConfig, Operation};
use proptest::prelude::*;

proptest! {
    #[test]
    fn chernoff_matches_the_formula(n in 1u64..1_000_000, p in 0.0001..=1.0f64, frac in 0.0001..=1.0f64) {
        let mean = n as f64 * p;
        let lambda = frac * mean;
        let b = chernoff_bound(n, p, lambda).unwrap();
        let direct = (2.0 * (-(lambda * lambda) / (3.0 * mean)).exp()).min(1.0);
        prop_assert!((b - direct).abs() <= 1e-12 * direct.max(f64::MIN_POSITIVE));
    }
}

#[test]
fn chernoff_boundary() {
    let b = chernoff_bound(100, 0.3, 30.0).unwrap();
    assert!((b - 2.0 * (-10.0f64).exp()).abs() < 1e-15);
}

fn config(family: GeneratorFamily, op: Operation, curve: BoundCurve) -> ExperimentConfig {
    let mut generator = GeneratorSpec::new(family, 0);
    generator.m = Some(3);
    generator.n = Some(200);
    ExperimentConfig {
        generator,
        ks: vec![40, 60],
        cs: vec![8.0, 32.0],
        trials: 5,
        master_seed: 99,
        operation: op,
        curve,
        output: None,
        workers: 2,
        reproducible: true,
    }
}

#[test]
fn sweeps_are_byte_identical_and_sound() {
    let cases = [
        (GeneratorFamily::Complete, Operation::Cycle, BoundCurve::CycleBeta),
        (GeneratorFamily::CliqueChain, Operation::Path, BoundCurve::PathAlpha),
        (GeneratorFamily::RandomRegular, Operation::PathFromSet, BoundCurve::Lemma32),
        (GeneratorFamily::CompleteBipartite, Operation::Bipartite, BoundCurve::Lemma31),
    ];
    for (family, op, curve) in cases {
        let cfg = config(family, op, curve);
        let a = run_trials(&cfg).unwrap();
        let b = run_trials(&cfg).unwrap();
        assert_eq!(a.csv, b.csv, "{op:?}");
        assert_eq!(a.summary.len(), 4);
        assert_eq!(a.records.len(), 20);
        for r in &a.records {
            assert!(r.valid, "{op:?}: {:?}", r.diagnostics);
            let n = match family {
                GeneratorFamily::Complete => r.k + 1,
                GeneratorFamily::CliqueChain => 3 * r.k + 1,
                GeneratorFamily::RandomRegular => 200,
                _ => 2 * r.k,
            };
            assert!(r.achieved <= n);
        }
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let mut cfg = config(GeneratorFamily::Complete, Operation::Cycle, BoundCurve::CycleBeta);
    let one = run_trials(&cfg).unwrap();
    cfg.workers = 3;
    assert_eq!(run_trials(&cfg).unwrap().csv, one.csv);
}
