//! Cluster graphs, cluster-state preparation and stabilizer checks.
//!
//! A cluster state is prepared by putting every vertex in `|+>` (or a bound
//! input state) and applying a controlled-phase gate across every edge. Its
//! stabilizer generators are `K^a = X_a * prod_{b ~ a} Z_b`.
//!
//! Vertices may carry arbitrary positive labels. The state register orders
//! qubits by ascending label, so a graph on `{9, 10, 11}` is simulated on a
//! three-qubit register whose qubit 1 is vertex 9.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, Phase};
use crate::statevector::{InputQubitState, QubitLabel, StateVector};

/// Neighbor offsets of the regular one-, two- and three-dimensional cluster
/// lattices. Only the one-dimensional chain is instantiated here; the CNOT
/// cluster is given explicitly by [`CNOT15_EDGES`].
pub const LATTICE_OFFSETS_1D: &[[i32; 1]] = &[[1]];
pub const LATTICE_OFFSETS_2D: &[[i32; 2]] = &[[1, 0], [0, 1]];
pub const LATTICE_OFFSETS_3D: &[[i32; 3]] = &[[1, 0, 0], [0, 1, 0], [0, 0, 1]];

/// Edges of the 15-qubit CNOT cluster: control wire 1..7, target wire 9..15,
/// joined by the bridge 4 - 8 - 12.
pub const CNOT15_EDGES: [(QubitLabel, QubitLabel); 14] = [
    (1, 2),
    (2, 3),
    (3, 4),
    (4, 5),
    (5, 6),
    (6, 7),
    (4, 8),
    (8, 12),
    (9, 10),
    (10, 11),
    (11, 12),
    (12, 13),
    (13, 14),
    (14, 15),
];

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ClusterGraph {
    vertices: BTreeSet<QubitLabel>,
    edges: BTreeSet<(QubitLabel, QubitLabel)>,
}

impl ClusterGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = QubitLabel>,
        edges: impl IntoIterator<Item = (QubitLabel, QubitLabel)>,
    ) -> Result<Self> {
        let mut g = ClusterGraph {
            vertices: vertices.into_iter().collect(),
            edges: BTreeSet::new(),
        };
        if g.vertices.contains(&0) {
            return Err(Error::InvalidGraph("labels are 1-based".into()));
        }
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Linear chain over consecutive labels.
    pub fn chain(labels: RangeInclusive<QubitLabel>) -> Result<Self> {
        let (lo, hi) = (*labels.start(), *labels.end());
        Self::new(labels, (lo..hi).map(|a| (a, a + 1)))
    }

    /// The fixed 15-qubit CNOT geometry.
    pub fn cnot15() -> Self {
        Self::new(1..=15, CNOT15_EDGES).expect("static geometry")
    }

    fn add_edge(&mut self, a: QubitLabel, b: QubitLabel) -> Result<()> {
        if a == b {
            return Err(Error::InvalidGraph(format!("self-loop on {a}")));
        }
        for v in [a, b] {
            if !self.vertices.contains(&v) {
                return Err(Error::InvalidGraph(format!("edge endpoint {v} is not a vertex")));
            }
        }
        self.edges.insert((a.min(b), a.max(b)));
        Ok(())
    }

    pub fn vertices(&self) -> impl Iterator<Item = QubitLabel> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (QubitLabel, QubitLabel)> + '_ {
        self.edges.iter().copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, a: QubitLabel) -> bool {
        self.vertices.contains(&a)
    }

    pub fn neighbors(&self, a: QubitLabel) -> Vec<QubitLabel> {
        self.edges
            .iter()
            .filter_map(|&(x, y)| {
                if x == a {
                    Some(y)
                } else if y == a {
                    Some(x)
                } else {
                    None
                }
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// 1-based register position of a vertex.
    pub fn position_of(&self, a: QubitLabel) -> Option<usize> {
        self.vertices.iter().position(|&v| v == a).map(|p| p + 1)
    }

    /// Maps a label-keyed Pauli string onto register positions.
    pub fn to_positions(&self, p: &PauliString) -> Result<PauliString> {
        p.relabel(|l| self.position_of(l))
    }

    /// Parses the plain-text edge list: one `a b` pair per line, 1-based
    /// labels. A line with a single label declares an isolated vertex; blank
    /// lines and `#` comments are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut vertices = BTreeSet::new();
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: i + 1, message };
            let nums = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<QubitLabel>()
                        .ok()
                        .filter(|&v| v > 0)
                        .ok_or_else(|| err(format!("expected a positive label, got {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            match nums[..] {
                [a] => {
                    vertices.insert(a);
                }
                [a, b] => {
                    if a == b {
                        return Err(err(format!("self-loop on {a}")));
                    }
                    vertices.insert(a);
                    vertices.insert(b);
                    edges.push((a, b));
                }
                _ => return Err(err(format!("expected `a b`, got {line:?}"))),
            }
        }
        if vertices.is_empty() {
            return Err(Error::InvalidGraph("empty edge list".into()));
        }
        Self::new(vertices, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            if self.neighbors(*v).is_empty() {
                out.push_str(&format!("{v}\n"));
            }
        }
        for (a, b) in &self.edges {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }
}

/// A graph together with the input states placed on some of its vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAssignment {
    pub graph: ClusterGraph,
    pub inputs: BTreeMap<QubitLabel, InputQubitState>,
}

impl ClusterAssignment {
    pub fn new(graph: ClusterGraph, inputs: impl IntoIterator<Item = (QubitLabel, InputQubitState)>) -> Result<Self> {
        let inputs: BTreeMap<_, _> = inputs.into_iter().collect();
        for (&l, s) in &inputs {
            if !graph.contains(l) {
                return Err(Error::UnknownVertex(l));
            }
            InputQubitState::new(s.a, s.b)?;
        }
        Ok(Self { graph, inputs })
    }

    pub fn without_inputs(graph: ClusterGraph) -> Self {
        Self {
            graph,
            inputs: BTreeMap::new(),
        }
    }
}

/// Prepares the product state and applies one controlled-phase per edge.
pub fn build_cluster_state(asg: &ClusterAssignment) -> Result<StateVector> {
    let g = &asg.graph;
    let locals: Vec<InputQubitState> = g
        .vertices()
        .map(|v| asg.inputs.get(&v).copied().unwrap_or_else(InputQubitState::plus))
        .collect();
    let mut state = StateVector::product(&locals)?;
    for (a, b) in g.edges() {
        let pa = g.position_of(a).ok_or(Error::UnknownVertex(a))?;
        let pb = g.position_of(b).ok_or(Error::UnknownVertex(b))?;
        state.apply_controlled_phase(pa, pb)?;
    }
    Ok(state)
}

/// `K^a = X_a prod_{b in N(a)} Z_b`, phase +1.
pub fn stabilizer(graph: &ClusterGraph, a: QubitLabel) -> Result<PauliString> {
    if !graph.contains(a) {
        return Err(Error::UnknownVertex(a));
    }
    let letters = std::iter::once((a, Pauli::X)).chain(graph.neighbors(a).into_iter().map(|b| (b, Pauli::Z)));
    Ok(PauliString::from_letters(Phase::ONE, letters))
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilizerResidual {
    pub vertex: QubitLabel,
    pub operator: PauliString,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilizerReport {
    pub tolerance: f64,
    pub entries: Vec<StabilizerResidual>,
    pub passed: bool,
}

impl StabilizerReport {
    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }
}

/// Residual `||K^a |phi> - |phi>||_inf` for every vertex.
pub fn verify_stabilizers(state: &StateVector, graph: &ClusterGraph, tol: f64) -> Result<StabilizerReport> {
    if state.num_qubits() != graph.num_vertices() {
        return Err(Error::DimensionMismatch {
            left: state.num_qubits(),
            right: graph.num_vertices(),
        });
    }
    let entries = graph
        .vertices()
        .map(|a| {
            let k = stabilizer(graph, a)?;
            let moved = state.with_pauli(&graph.to_positions(&k)?)?;
            Ok(StabilizerResidual {
                vertex: a,
                operator: k,
                residual: moved.max_abs_diff(state)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = entries.iter().all(|e| e.residual <= tol);
    Ok(StabilizerReport {
        tolerance: tol,
        entries,
        passed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjugationKind {
    /// Full entangler: `S X_a S^dag = K^a`.
    Entangler,
    /// One edge `(a, b)`, conjugating `X` on an endpoint.
    EdgeEndpointX,
    /// One edge, `X` on a vertex outside the edge is unchanged.
    EdgeSpectatorX,
    /// One edge, `Z` on a vertex outside the edge is unchanged.
    EdgeSpectatorZ,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugationCheck {
    pub kind: ConjugationKind,
    pub edge: Option<(QubitLabel, QubitLabel)>,
    pub operator: PauliString,
    pub expected: PauliString,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugationReport {
    pub checks: Vec<ConjugationCheck>,
}

impl ConjugationReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.checks.iter().all(|c| c.residual <= tol)
    }

    pub fn max_residual(&self, kind: ConjugationKind) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.kind == kind)
            .map(|c| c.residual)
            .fold(0.0, f64::max)
    }
}

/// Largest graph accepted by [`conjugation_audit`].
pub const MAX_DENSE_VERTICES: usize = 5;

/// Checks the conjugation rules behind the stabilizer form with dense
/// operator matrices.
pub fn conjugation_audit(graph: &ClusterGraph) -> Result<ConjugationReport> {
    let n = graph.num_vertices();
    if n > MAX_DENSE_VERTICES {
        return Err(Error::TooManyVertices(n));
    }
    let pos = |l: QubitLabel| graph.position_of(l).ok_or(Error::UnknownVertex(l));
    let dense = |p: &PauliString| -> Result<DenseMatrix> { Ok(DenseMatrix::pauli(n, &graph.to_positions(p)?)) };
    let conj = |u: &DenseMatrix, p: &PauliString| -> Result<DenseMatrix> {
        Ok(u.matmul(&dense(p)?).matmul(&u.adjoint()))
    };

    let mut full = DenseMatrix::identity(1 << n);
    for (a, b) in graph.edges() {
        full = full.matmul(&DenseMatrix::controlled_phase(n, pos(a)?, pos(b)?));
    }

    let mut checks = Vec::new();
    for a in graph.vertices() {
        let x = PauliString::single(a, Pauli::X);
        let expected = stabilizer(graph, a)?;
        checks.push(ConjugationCheck {
            kind: ConjugationKind::Entangler,
            edge: None,
            residual: conj(&full, &x)?.max_abs_diff(&dense(&expected)?),
            operator: x,
            expected,
        });
    }
    for (a, b) in graph.edges() {
        let s = DenseMatrix::controlled_phase(n, pos(a)?, pos(b)?);
        for (me, other) in [(a, b), (b, a)] {
            let x = PauliString::single(me, Pauli::X);
            let expected = PauliString::from_letters(Phase::ONE, [(me, Pauli::X), (other, Pauli::Z)]);
            checks.push(ConjugationCheck {
                kind: ConjugationKind::EdgeEndpointX,
                edge: Some((a, b)),
                residual: conj(&s, &x)?.max_abs_diff(&dense(&expected)?),
                operator: x,
                expected,
            });
        }
        for c in graph.vertices().filter(|&c| c != a && c != b) {
            for (kind, letter) in [
                (ConjugationKind::EdgeSpectatorX, Pauli::X),
                (ConjugationKind::EdgeSpectatorZ, Pauli::Z),
            ] {
                let p = PauliString::single(c, letter);
                checks.push(ConjugationCheck {
                    kind,
                    edge: Some((a, b)),
                    residual: conj(&s, &p)?.max_abs_diff(&dense(&p)?),
                    operator: p.clone(),
                    expected: p,
                });
            }
        }
    }
    Ok(ConjugationReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnot15_geometry() {
        let g = ClusterGraph::cnot15();
        assert_eq!(g.num_vertices(), 15);
        assert_eq!(g.num_edges(), 14);
        assert_eq!(g.neighbors(8), vec![4, 12]);
        assert_eq!(g.neighbors(4), vec![3, 5, 8]);
        assert_eq!(g.neighbors(12), vec![8, 11, 13]);
    }

    #[test]
    fn graph_validation() {
        assert!(ClusterGraph::new([1, 2], [(1, 1)]).is_err());
        assert!(ClusterGraph::new([1, 2], [(1, 3)]).is_err());
        assert!(ClusterGraph::new([0, 1], []).is_err());
    }

    #[test]
    fn stabilizer_examples() {
        let iso = ClusterGraph::new([3], []).unwrap();
        assert_eq!(stabilizer(&iso, 3).unwrap().to_string(), "+X3");
        let g = ClusterGraph::cnot15();
        assert_eq!(stabilizer(&g, 4).unwrap().to_string(), "+Z3 X4 Z5 Z8");
        assert_eq!(stabilizer(&g, 9).unwrap().to_string(), "+X9 Z10");
        assert_eq!(stabilizer(&g, 16), Err(Error::UnknownVertex(16)));
    }

    #[test]
    fn verify_on_non_cluster_state_fails() {
        let g = ClusterGraph::chain(1..=2).unwrap();
        let report = verify_stabilizers(&StateVector::zeros(2).unwrap(), &g, 1e-12).unwrap();
        assert!(!report.passed);
        assert!((report.entries[0].residual - 1.0).abs() < 1e-15);
    }

    #[test]
    fn subcluster_labels_map_to_positions() {
        let g = ClusterGraph::chain(9..=11).unwrap();
        let s = build_cluster_state(&ClusterAssignment::without_inputs(g.clone())).unwrap();
        assert_eq!(s.num_qubits(), 3);
        assert!(verify_stabilizers(&s, &g, 1e-12).unwrap().passed);
    }

    #[test]
    fn edge_list_parsing() {
        let g = ClusterGraph::parse_edge_list("# chain\n1 2\n\n2 3 # tail\n5\n").unwrap();
        assert_eq!(g.num_vertices(), 4);
        assert_eq!(g.num_edges(), 2);
        assert_eq!(ClusterGraph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        assert!(matches!(
            ClusterGraph::parse_edge_list("1 x\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(ClusterGraph::parse_edge_list("1 2 3\n").is_err());
        assert!(ClusterGraph::parse_edge_list("2 2\n").is_err());
        assert!(ClusterGraph::parse_edge_list("").is_err());
    }

    #[test]
    fn conjugation_audit_rejects_large_graphs() {
        let g = ClusterGraph::chain(1..=6).unwrap();
        assert_eq!(conjugation_audit(&g).unwrap_err(), Error::TooManyVertices(6));
    }

    #[test]
    fn conjugation_three_chain() {
        let g = ClusterGraph::chain(1..=3).unwrap();
        let r = conjugation_audit(&g).unwrap();
        assert!(r.passed(1e-14));
        let k2 = r
            .checks
            .iter()
            .find(|c| c.kind == ConjugationKind::Entangler && c.operator.to_string() == "+X2")
            .unwrap();
        assert_eq!(k2.expected.to_string(), "+Z1 X2 Z3");
    }
}
