//! One run of the measurement-based CNOT: raw output, byproduct prediction,
//! and the corrected result against the circuit reference.

use num_complex::Complex64;
use oneway::cnot::{apply_byproduct_correction, cnot_reference, run_cnot, MEASURED};
use oneway::measurement::OutcomePolicy;
use oneway::InputQubitState;

fn main() -> oneway::Result<()> {
    let control = InputQubitState::plus();
    let target = InputQubitState::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8))?;
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2024);

    let r = run_cnot(control, target, &OutcomePolicy::Sampled { seed })?;
    println!("measured qubits {MEASURED:?}");
    println!("outcomes        {}", r.outcomes.bits());
    println!("predicted U     {} = {}", r.predicted, r.predicted.operator());
    let corrected = apply_byproduct_correction(&r.raw_output, r.predicted)?;
    let reference = cnot_reference(control, target)?;
    let cmp = corrected.equal_up_to_global_phase(&reference, 1e-10)?;
    println!("corrected == CNOT|in>: {} (residual {:.1e}, phase {:.3})", cmp.equal, cmp.residual, cmp.theta);
    println!("fidelity        {:.15}", r.predicted_fidelity);
    Ok(())
}
