//! Exhaustive sweep over all 8192 outcome branches, then a GF(2) fit of each
//! byproduct exponent against the outcome bits.

use std::time::Instant;

use num_complex::Complex64;
use oneway::cnot::{byproduct_formulas, format_formula, sweep_branches, EXPONENT_NAMES, MEASURED};
use oneway::gf2::fit_affine;
use oneway::InputQubitState;

fn main() -> oneway::Result<()> {
    let control = InputQubitState::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8))?;
    let target = InputQubitState::new(Complex64::new(12.0 / 13.0, 0.0), Complex64::new(3.0 / 13.0, 4.0 / 13.0))?;

    let start = Instant::now();
    let leaves = sweep_branches(control, target)?;
    let worst = leaves.iter().map(|l| 1.0 - l.corrected_fidelity).fold(0.0, f64::max);
    let max_dev = leaves.iter().map(|l| l.max_step_deviation).fold(0.0, f64::max);
    println!("{} branches in {:.0} ms", leaves.len(), start.elapsed().as_secs_f64() * 1e3);
    println!("max infidelity after correction {worst:.1e}, max |p - 1/2| {max_dev:.1e}");

    let stated = byproduct_formulas();
    for (k, name) in EXPONENT_NAMES.iter().enumerate() {
        let samples = leaves
            .iter()
            .filter_map(|l| l.solved.unique().map(|e| (l.branch as u64, e.as_array()[k])));
        match fit_affine(MEASURED.len(), samples) {
            Ok(f) => println!(
                "{name:<16} fitted {:<28} stated {:<28} {}",
                format_formula(&f),
                format_formula(&stated[k]),
                if f == stated[k] { "agree" } else { "DIFFER" }
            ),
            Err(e) => println!("{name:<16} no affine fit: {e}"),
        }
    }
    Ok(())
}
