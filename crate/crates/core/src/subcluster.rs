//! The subclusters the CNOT cluster is assembled from, with their golden
//! tables.
//!
//! Each subcluster is a chain (or the chain-plus-bridge joins of chains) with
//! an optional input on its first qubit. Its golden table is the transcribed
//! reference that the brute-force decomposition is compared against.

use std::fmt;
use std::str::FromStr;

use crate::cluster::{build_cluster_state, ClusterAssignment, ClusterGraph};
use crate::error::{Error, Result};
use crate::statevector::{InputQubitState, QubitLabel, StateVector};
use crate::tabular::{self, BasisAssignment, ColumnBasis, Table, TableComparison};

/// Subcluster selectors, smallest first.
pub const SELECTORS: [&str; 8] = ["1-3", "9-11", "4-7", "12-15", "1-7", "9-15", "1-8", "1-15"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subcluster {
    Control3,
    Target3,
    Control4,
    Target4,
    ControlWire,
    TargetWire,
    ControlBridge,
    Full,
}

impl Subcluster {
    pub const ALL: [Subcluster; 8] = [
        Subcluster::Control3,
        Subcluster::Target3,
        Subcluster::Control4,
        Subcluster::Target4,
        Subcluster::ControlWire,
        Subcluster::TargetWire,
        Subcluster::ControlBridge,
        Subcluster::Full,
    ];

    pub fn selector(self) -> &'static str {
        SELECTORS[self as usize]
    }

    pub fn labels(self) -> Vec<QubitLabel> {
        match self {
            Subcluster::Control3 => (1..=3).collect(),
            Subcluster::Target3 => (9..=11).collect(),
            Subcluster::Control4 => (4..=7).collect(),
            Subcluster::Target4 => (12..=15).collect(),
            Subcluster::ControlWire => (1..=7).collect(),
            Subcluster::TargetWire => (9..=15).collect(),
            Subcluster::ControlBridge => (1..=8).collect(),
            Subcluster::Full => (1..=15).collect(),
        }
    }

    /// Input qubits (`psi` columns).
    pub fn inputs(self) -> Vec<QubitLabel> {
        match self {
            Subcluster::Control3 | Subcluster::ControlWire | Subcluster::ControlBridge => vec![1],
            Subcluster::Target3 | Subcluster::TargetWire => vec![9],
            Subcluster::Control4 | Subcluster::Target4 => vec![],
            Subcluster::Full => vec![1, 9],
        }
    }

    pub fn graph(self) -> ClusterGraph {
        let labels = self.labels();
        let (first, last) = (labels[0], labels[labels.len() - 1]);
        let built = match self {
            Subcluster::Full => Ok(ClusterGraph::cnot15()),
            Subcluster::ControlBridge => {
                let mut edges: Vec<_> = (1..7).map(|a| (a, a + 1)).collect();
                edges.push((4, 8));
                ClusterGraph::new(labels.iter().copied(), edges)
            }
            _ => ClusterGraph::chain(first..=last),
        };
        built.expect("built-in subcluster graphs are valid")
    }

    /// Column alphabets of the golden table: inputs use `{psi, psi*}`, the
    /// other columns alternate `{0,1}` / `{+,-}` along each wire, starting
    /// with `{0,1}` after the input (or at the first qubit when there is none).
    pub fn basis(self) -> BasisAssignment {
        let inputs = self.inputs();
        let mut columns = Vec::new();
        let mut next = ColumnBasis::Computational;
        for label in self.labels() {
            if inputs.contains(&label) {
                columns.push(ColumnBasis::InputPair);
                next = ColumnBasis::Computational;
                continue;
            }
            columns.push(next);
            next = match next {
                ColumnBasis::Computational => ColumnBasis::Hadamard,
                _ => ColumnBasis::Computational,
            };
        }
        // qubit 8 hangs off qubit 4 and uses {0,1} like its neighbors' partners
        if let Some(i) = self.labels().iter().position(|&l| l == 8) {
            columns[i] = ColumnBasis::Computational;
        }
        BasisAssignment::new(self.labels(), columns)
    }

    pub fn golden_text(self) -> &'static str {
        match self {
            Subcluster::Control3 => include_str!("../data/appendix_b/1-3.tbl"),
            Subcluster::Target3 => include_str!("../data/appendix_b/9-11.tbl"),
            Subcluster::Control4 => include_str!("../data/appendix_b/4-7.tbl"),
            Subcluster::Target4 => include_str!("../data/appendix_b/12-15.tbl"),
            Subcluster::ControlWire => include_str!("../data/appendix_b/1-7.tbl"),
            Subcluster::TargetWire => include_str!("../data/appendix_b/9-15.tbl"),
            Subcluster::ControlBridge => include_str!("../data/appendix_b/1-8.tbl"),
            Subcluster::Full => include_str!("../data/appendix_b/1-15.tbl"),
        }
    }

    /// The golden table with every input column bound to `binding(label)`.
    pub fn golden(self, binding: impl Fn(QubitLabel) -> InputQubitState) -> Result<Table> {
        let mut t = tabular::parse(self.golden_text())?;
        for label in self.inputs() {
            t = t.bind(label, binding(label));
        }
        Ok(t)
    }

    /// Brute-force state: inputs on the input qubits, `|+>` elsewhere, then
    /// one controlled-phase per edge.
    pub fn state(self, binding: impl Fn(QubitLabel) -> InputQubitState) -> Result<StateVector> {
        let inputs: Vec<_> = self.inputs().into_iter().map(|l| (l, binding(l))).collect();
        build_cluster_state(&ClusterAssignment::new(self.graph(), inputs)?)
    }

    /// Decomposes the brute-force state in the golden table's alphabets.
    pub fn derive_table(self, binding: impl Fn(QubitLabel) -> InputQubitState) -> Result<Table> {
        let state = self.state(&binding)?;
        let mut asg = self.basis();
        for label in self.inputs() {
            asg = asg.bind(label, binding(label));
        }
        tabular::decompose(&state, &asg)
    }

    /// Derived table, golden table and their comparison.
    pub fn compare(self, binding: impl Fn(QubitLabel) -> InputQubitState) -> Result<(Table, Table, TableComparison)> {
        let derived = self.derive_table(&binding)?;
        let golden = self.golden(&binding)?;
        let cmp = tabular::tables_equal(&derived, &golden)?;
        Ok((derived, golden, cmp))
    }
}

impl fmt::Display for Subcluster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.selector())
    }
}

impl FromStr for Subcluster {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SELECTORS
            .iter()
            .position(|&sel| sel == s.trim())
            .map(|i| Subcluster::ALL[i])
            .ok_or_else(|| Error::UnknownSubcluster(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn generic(_: QubitLabel) -> InputQubitState {
        InputQubitState::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap()
    }

    #[test]
    fn selectors_round_trip() {
        for s in Subcluster::ALL {
            assert_eq!(s.selector().parse::<Subcluster>().unwrap(), s);
        }
        assert!("5-9".parse::<Subcluster>().is_err());
    }

    #[test]
    fn golden_tables_parse_with_expected_rows() {
        let rows: Vec<_> = Subcluster::ALL.iter().map(|s| s.golden(generic).unwrap().len()).collect();
        assert_eq!(rows, vec![2, 2, 4, 4, 8, 8, 16, 128]);
        for s in Subcluster::ALL {
            assert_eq!(s.golden(generic).unwrap().labels(), s.labels().as_slice());
        }
    }

    #[test]
    fn small_tables_match() {
        for s in [Subcluster::Control3, Subcluster::Control4, Subcluster::ControlWire] {
            let (_, _, cmp) = s.compare(generic).unwrap();
            assert!(cmp.is_match(), "{s}: {cmp:?}");
        }
    }
}
