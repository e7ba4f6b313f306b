//! Builds the 15-qubit CNOT cluster with two input states and prints its
//! largest amplitudes.

use num_complex::Complex64;
use oneway::cluster::{build_cluster_state, ClusterAssignment, ClusterGraph};
use oneway::InputQubitState;

fn main() -> oneway::Result<()> {
    let graph = ClusterGraph::cnot15();
    println!("{} vertices, {} edges", graph.num_vertices(), graph.num_edges());
    print!("{}", graph.to_edge_list());

    let control = InputQubitState::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8))?;
    let target = InputQubitState::plus();
    let state = build_cluster_state(&ClusterAssignment::new(graph, [(1, control), (9, target)])?)?;

    let mut amps: Vec<(usize, Complex64)> = state.amplitudes().iter().copied().enumerate().collect();
    amps.sort_by(|a, b| b.1.norm().total_cmp(&a.1.norm()));
    println!("norm {:.15}", state.norm());
    for (i, a) in amps.iter().take(5) {
        println!("|{i:015b}>  {:+.6}{:+.6}i", a.re, a.im);
    }
    Ok(())
}
