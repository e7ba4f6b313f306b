use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use oneway::cluster::{build_cluster_state, ClusterAssignment, ClusterGraph};
use oneway::measurement::{measure, measure_pattern, outcome_probability, MeasurementBasis, OutcomeChoice, OutcomePolicy};
use oneway::{Error, InputQubitState, StateVector};

const BASES: [MeasurementBasis; 3] = [MeasurementBasis::X, MeasurementBasis::Y, MeasurementBasis::Z];

fn chain2() -> StateVector {
    build_cluster_state(&ClusterAssignment::without_inputs(ClusterGraph::chain(1..=2).unwrap())).unwrap()
}

fn random_state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map("nonzero", |v| {
        let amps: Vec<Complex64> = v.into_iter().map(|(r, i)| Complex64::new(r, i)).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        (norm > 1e-3).then(|| StateVector::from_amplitudes(amps.iter().map(|a| a / norm).collect()).unwrap())
    })
}

#[test]
fn eigenstate_and_born_rule() {
    let mut plus = StateVector::product(&[InputQubitState::plus()]).unwrap();
    let (s, p) = measure(&mut plus, 1, MeasurementBasis::X, OutcomeChoice::Forced(0)).unwrap();
    assert_eq!(s, 0);
    assert!((p - 1.0).abs() < 1e-15);

    let mut zero = StateVector::basis(1, 0).unwrap();
    let (_, p) = measure(&mut zero, 1, MeasurementBasis::X, OutcomeChoice::Forced(1)).unwrap();
    assert!((p - 0.5).abs() < 1e-15);
    let minus = StateVector::product(&[InputQubitState::minus()]).unwrap();
    assert!(zero.equal_up_to_global_phase(&minus, 1e-12).unwrap().equal);
}

#[test]
fn impossible_branch_is_an_error() {
    let mut plus = StateVector::product(&[InputQubitState::plus()]).unwrap();
    let e = measure(&mut plus, 1, MeasurementBasis::X, OutcomeChoice::Forced(1)).unwrap_err();
    assert!(matches!(e, Error::ImpossibleBranch { .. }), "{e}");
}

#[test]
fn two_chain_measurements() {
    // X on qubit 1 with s=0 leaves qubit 2 in |0>
    let mut s = chain2();
    measure(&mut s, 1, MeasurementBasis::X, OutcomeChoice::Forced(0)).unwrap();
    let q2 = s.extract(&[2]).unwrap();
    assert!(q2.equal_up_to_global_phase(&StateVector::basis(1, 0).unwrap(), 1e-12).unwrap().equal);

    let pattern = [(1, MeasurementBasis::X), (2, MeasurementBasis::X)];
    let (rec, _) = measure_pattern(&chain2(), &pattern, &OutcomePolicy::Forced(vec![0, 0])).unwrap();
    assert!((rec.branch_probability() - 0.25).abs() < 1e-12);
}

#[test]
fn empty_pattern_leaves_state() {
    let (rec, post) = measure_pattern(&chain2(), &[], &OutcomePolicy::Forced(vec![])).unwrap();
    assert!(rec.steps.is_empty());
    assert_eq!(post, chain2());
}

#[test]
fn pattern_validation() {
    let pattern = [(1, MeasurementBasis::X), (1, MeasurementBasis::Y)];
    assert!(matches!(
        measure_pattern(&chain2(), &pattern, &OutcomePolicy::Forced(vec![0, 0])),
        Err(Error::DuplicateMeasurement(1))
    ));
    let pattern = [(1, MeasurementBasis::X)];
    assert!(matches!(
        measure_pattern(&chain2(), &pattern, &OutcomePolicy::Forced(vec![0, 0])),
        Err(Error::OutcomeCount { expected: 1, got: 2 })
    ));
    assert!(OutcomePolicy::forced_from_str("01x").is_err());
}

#[test]
fn sampling_is_seeded() {
    let pattern = [(1, MeasurementBasis::Y), (2, MeasurementBasis::X)];
    let run = |seed| measure_pattern(&chain2(), &pattern, &OutcomePolicy::Sampled { seed }).unwrap();
    assert_eq!(run(3).0, run(3).0);
    assert_eq!(run(3).1, run(3).1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn probabilities_are_complete(s in (1usize..=3).prop_flat_map(random_state), k in 0usize..3, b in 0usize..3) {
        let q = k % s.num_qubits() + 1;
        let basis = BASES[b];
        let p0 = outcome_probability(&s, q, basis, 0).unwrap();
        let p1 = outcome_probability(&s, q, basis, 1).unwrap();
        prop_assert!((p0 + p1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn repeated_measurement_is_idempotent(s in (1usize..=3).prop_flat_map(random_state), k in 0usize..3, b in 0usize..3, seed in any::<u64>()) {
        let q = k % s.num_qubits() + 1;
        let basis = BASES[b];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = s.clone();
        let (s1, _) = measure(&mut t, q, basis, OutcomeChoice::Sample(&mut rng)).unwrap();
        let (s2, p2) = measure(&mut t, q, basis, OutcomeChoice::Sample(&mut rng)).unwrap();
        prop_assert_eq!(s1, s2);
        prop_assert!((p2 - 1.0).abs() < 1e-12);
    }
}
