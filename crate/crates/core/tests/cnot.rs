use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num_complex::Complex64;
use oneway::cnot::{
    self, apply_byproduct_correction, branch_bits, byproduct_from_outcomes, cnot_reference, predicted_exponents,
    run_cnot, run_cnot_in_order, solve_correction, sweep_branches, ByproductExponents, MEASURED, NUM_BRANCHES,
};
use oneway::measurement::OutcomePolicy;
use oneway::pauli::{Pauli, PauliString};
use oneway::{Error, InputQubitState, StateVector};

fn generic() -> InputQubitState {
    InputQubitState::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap()
}

fn equal(a: &StateVector, b: &StateVector) -> bool {
    a.equal_up_to_global_phase(b, 1e-10).unwrap().equal
}

fn bits_with(ones: &[usize]) -> Vec<u8> {
    MEASURED.iter().map(|q| ones.contains(q) as u8).collect()
}

#[test]
fn reference_truth_table() {
    let (z, o, p) = (InputQubitState::zero(), InputQubitState::one(), InputQubitState::plus());
    assert!(equal(&cnot_reference(o, z).unwrap(), &StateVector::basis(2, 3).unwrap()));
    assert!(equal(&cnot_reference(z, o).unwrap(), &StateVector::basis(2, 1).unwrap()));
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = StateVector::from_amplitudes(vec![h.into(), 0.0.into(), 0.0.into(), h.into()]).unwrap();
    assert!(equal(&cnot_reference(p, z).unwrap(), &bell));
}

#[test]
fn formula_examples() {
    let run = |ones: &[usize]| {
        let r = run_cnot(generic(), generic(), &OutcomePolicy::Forced(bits_with(ones))).unwrap();
        byproduct_from_outcomes(&r.outcomes).unwrap()
    };
    assert_eq!(run(&[]), ByproductExponents::new(0, 0, 1, 0));
    // s2 is absent from gamma_z_control, so its constant survives
    assert_eq!(run(&[2]), ByproductExponents::new(1, 1, 1, 0));
    assert_eq!(run(&[13]), ByproductExponents::new(0, 0, 1, 1));
}

#[test]
fn correction_examples() {
    let zz = StateVector::basis(2, 0).unwrap();
    let out = apply_byproduct_correction(&zz, ByproductExponents::new(1, 0, 0, 0)).unwrap();
    assert!(equal(&out, &StateVector::basis(2, 2).unwrap()));
    assert_eq!(apply_byproduct_correction(&zz, ByproductExponents::new(0, 0, 0, 0)).unwrap(), zz);

    let plus_zero = StateVector::product(&[InputQubitState::plus(), InputQubitState::zero()]).unwrap();
    let minus_zero = StateVector::product(&[InputQubitState::minus(), InputQubitState::zero()]).unwrap();
    let out = apply_byproduct_correction(&plus_zero, ByproductExponents::new(1, 0, 1, 0)).unwrap();
    assert!(equal(&out, &minus_zero));

    let reference = cnot_reference(generic(), InputQubitState::plus()).unwrap();
    assert!(solve_correction(&reference, &reference).unwrap().contains(ByproductExponents::new(0, 0, 0, 0)));
    let target = InputQubitState::new(Complex64::new(0.8, 0.0), Complex64::new(0.6, 0.0)).unwrap();
    let reference = cnot_reference(generic(), target).unwrap();
    let z1g = reference.with_pauli(&PauliString::single(1, Pauli::Z)).unwrap();
    assert_eq!(solve_correction(&z1g, &reference).unwrap().unique(), Some(ByproductExponents::new(0, 0, 1, 0)));
}

#[test]
fn basis_inputs_give_expected_outputs() {
    let cases = [
        (InputQubitState::zero(), InputQubitState::zero(), StateVector::basis(2, 0).unwrap()),
        (InputQubitState::one(), InputQubitState::zero(), StateVector::basis(2, 3).unwrap()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (c, t, want) in cases {
        for _ in 0..8 {
            let branch: u16 = rng.gen_range(0..NUM_BRANCHES as u16);
            let r = run_cnot(c, t, &OutcomePolicy::Forced(branch_bits(branch))).unwrap();
            let e = r.solved.first().expect("a correction exists");
            assert!(equal(&apply_byproduct_correction(&r.raw_output, e).unwrap(), &want));
        }
    }
}

#[test]
fn pattern_entangles_the_wires() {
    let r = run_cnot(InputQubitState::plus(), InputQubitState::zero(), &OutcomePolicy::Sampled { seed: 9 }).unwrap();
    assert!(r.corrected_fidelity >= 1.0 - 1e-10);
    // raw output is a Pauli image of a Bell state, so it is not a product
    assert!(r.raw_output.extract(&[1]).is_err());
}

#[test]
fn stated_formulas_predict_every_branch() {
    let leaves = sweep_branches(generic(), InputQubitState::new(Complex64::new(0.8, 0.0), Complex64::new(0.0, -0.6)).unwrap()).unwrap();
    assert_eq!(leaves.len(), NUM_BRANCHES);
    for l in &leaves {
        assert!(l.corrected_fidelity >= 1.0 - 1e-10);
        assert!(l.solved.contains(predicted_exponents(l.branch)), "branch {:013b}", l.branch);
        assert!(l.max_step_deviation < 1e-10);
    }
}

#[test]
fn sweep_matches_direct_runs() {
    let (c, t) = (generic(), InputQubitState::plus());
    let leaves = sweep_branches(c, t).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let b: u16 = rng.gen_range(0..NUM_BRANCHES as u16);
        let r = run_cnot(c, t, &OutcomePolicy::Forced(branch_bits(b))).unwrap();
        assert!(equal(&r.raw_output, &leaves[b as usize].raw_output));
        assert!((r.outcomes.branch_probability() - leaves[b as usize].probability).abs() < 1e-15);
    }
}

#[test]
fn measurement_order_does_not_matter() {
    let (c, t) = (generic(), InputQubitState::new(Complex64::new(0.8, 0.0), Complex64::new(0.6, 0.0)).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let branch: u16 = rng.gen_range(0..NUM_BRANCHES as u16);
        let base = run_cnot(c, t, &OutcomePolicy::Forced(branch_bits(branch))).unwrap();
        let mut order = MEASURED.to_vec();
        order.shuffle(&mut rng);
        let bits: Vec<u8> = order.iter().map(|&q| cnot::branch_bit(branch, q)).collect();
        let permuted = run_cnot_in_order(c, t, &order, &OutcomePolicy::Forced(bits)).unwrap();
        assert!(equal(&base.raw_output, &permuted.raw_output));
        assert!((base.outcomes.branch_probability() - permuted.outcomes.branch_probability()).abs() < 1e-15);
        assert_eq!(base.solved, permuted.solved);
        assert_eq!(base.predicted, permuted.predicted);
    }
}

#[test]
fn sampled_runs_are_reproducible() {
    let p = OutcomePolicy::Sampled { seed: 77 };
    let a = run_cnot(generic(), generic(), &p).unwrap();
    let b = run_cnot(generic(), generic(), &p).unwrap();
    assert_eq!(a.outcomes, b.outcomes);
}

#[test]
fn wrong_outcome_count() {
    let e = run_cnot(generic(), generic(), &OutcomePolicy::Forced(vec![0, 0])).unwrap_err();
    assert!(matches!(e, Error::OutcomeCount { expected: 13, got: 2 }));
}

#[test]
fn projected_equations_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..5 {
        let bits: Vec<u8> = (0..11).map(|_| rng.gen_range(0..2)).collect();
        let (rec, state) = cnot::partial_run(&bits).unwrap();
        let checks = cnot::verify_projected_eigenvalue_equations(&state, &rec, 1e-10).unwrap();
        assert_eq!(checks.len(), 4);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }
}

#[test]
fn conjugation_identities() {
    assert!(cnot::verify_cnot_conjugation_identities().iter().all(|i| i.holds));
}
