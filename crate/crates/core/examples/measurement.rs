//! Single-qubit measurements on a two-qubit cluster: forced and sampled.

use oneway::cluster::{build_cluster_state, ClusterAssignment, ClusterGraph};
use oneway::measurement::{measure_pattern, MeasurementBasis, OutcomePolicy};

fn main() -> oneway::Result<()> {
    let graph = ClusterGraph::chain(1..=2)?;
    let state = build_cluster_state(&ClusterAssignment::without_inputs(graph))?;
    let pattern = [(1, MeasurementBasis::X), (2, MeasurementBasis::Y)];

    let (rec, _) = measure_pattern(&state, &pattern, &OutcomePolicy::Forced(vec![0, 1]))?;
    for s in &rec.steps {
        println!("forced : qubit {} in {} -> s={} (p={:.3})", s.qubit, s.basis, s.outcome, s.probability);
    }

    for seed in 0..4 {
        let (rec, _) = measure_pattern(&state, &pattern, &OutcomePolicy::Sampled { seed })?;
        println!("seed {seed}: outcomes {} branch probability {:.3}", rec.bits(), rec.branch_probability());
    }

    // qubit 1 measured in X with s=0 leaves qubit 2 in |0>
    let (_, post) = measure_pattern(&state, &pattern[..1], &OutcomePolicy::Forced(vec![0]))?;
    let q2 = post.extract(&[2])?;
    println!("qubit 2 after s1=0: ({:+.3}, {:+.3})", q2.amplitudes()[0], q2.amplitudes()[1]);
    Ok(())
}
