//! Stabilizer generators of the CNOT cluster and a few of their products.

use oneway::cluster::{build_cluster_state, stabilizer, verify_stabilizers, ClusterAssignment, ClusterGraph};
use oneway::pauli;

fn main() -> oneway::Result<()> {
    let graph = ClusterGraph::cnot15();
    let state = build_cluster_state(&ClusterAssignment::without_inputs(graph.clone()))?;

    let report = verify_stabilizers(&state, &graph, 1e-12)?;
    for e in &report.entries {
        println!("K{:<2} = {:<20} residual {:.1e}", e.vertex, e.operator.to_string(), e.residual);
    }
    println!("all pass: {}", report.passed);

    for set in [&[9usize, 11, 13, 15][..], &[2, 3, 5, 6]] {
        let ks = set.iter().map(|&a| stabilizer(&graph, a)).collect::<oneway::Result<Vec<_>>>()?;
        let prod = pauli::product(&ks);
        let residual = state.with_pauli(&prod)?.max_abs_diff(&state)?;
        println!("product over {set:?} = {prod} (residual {residual:.1e})");
    }
    Ok(())
}
