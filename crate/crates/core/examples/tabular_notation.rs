//! Tabular notation: parse, expand, decompose and compare subcluster tables.

use num_complex::Complex64;
use oneway::subcluster::Subcluster;
use oneway::tabular::{expand, parse, render};
use oneway::InputQubitState;

fn main() -> oneway::Result<()> {
    let t = parse("sign|1|2|3\n+|psi|0|+\n+|psi*|1|-\n")?;
    let psi = InputQubitState::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8))?;
    let e = expand(&t.clone().bind(1, psi))?;
    println!("{}expands with coefficient {:.4} to {} amplitudes", render(&t), e.coefficient, e.state.dim());

    let other = InputQubitState::new(Complex64::new(12.0 / 13.0, 0.0), Complex64::new(3.0 / 13.0, 4.0 / 13.0))?;
    let bind = |l: usize| if l >= 9 { other } else { psi };
    for s in Subcluster::ALL {
        let (derived, _, cmp) = s.compare(bind)?;
        println!("{:<6} {:>3} rows  golden match: {}", s.selector(), derived.len(), cmp.is_match());
    }
    println!("\n{}", render(&Subcluster::Control4.derive_table(bind)?));
    Ok(())
}
