//! Sign/symbol tables of cluster states.
//!
//! A table lists a state as an unnormalized sum of signed tensor products.
//! Each cell is one of `0`, `1`, `+`, `-`, `psi` (`a|0> + b|1>`) or `psi*`
//! (`a|0> - b|1>`); `psi` columns need a concrete binding before they can be
//! expanded.
//!
//! Text format: an optional header `sign|l1|l2|...`, then one line per row
//! with the sign character and the cells separated by `|`. Lines starting
//! with `#` are comments. Without a header the columns are labeled `1..n`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::statevector::{InputQubitState, QubitLabel, StateVector};

/// Coefficients smaller than this are treated as absent rows.
pub const ZERO_COEFFICIENT: f64 = 1e-12;

/// Allowed spread of coefficient values around `+c` / `-c`.
pub const COEFFICIENT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisSymbol {
    Zero,
    One,
    Plus,
    Minus,
    PsiIn,
    PsiInStar,
}

impl BasisSymbol {
    pub const ALL: [BasisSymbol; 6] = [
        BasisSymbol::Zero,
        BasisSymbol::One,
        BasisSymbol::Plus,
        BasisSymbol::Minus,
        BasisSymbol::PsiIn,
        BasisSymbol::PsiInStar,
    ];

    pub fn token(self) -> &'static str {
        match self {
            BasisSymbol::Zero => "0",
            BasisSymbol::One => "1",
            BasisSymbol::Plus => "+",
            BasisSymbol::Minus => "-",
            BasisSymbol::PsiIn => "psi",
            BasisSymbol::PsiInStar => "psi*",
        }
    }

    pub fn from_token(t: &str) -> Result<Self> {
        Ok(match t {
            "0" => BasisSymbol::Zero,
            "1" => BasisSymbol::One,
            "+" => BasisSymbol::Plus,
            "-" | "−" => BasisSymbol::Minus,
            "psi" => BasisSymbol::PsiIn,
            "psi*" => BasisSymbol::PsiInStar,
            _ => return Err(Error::UnknownSymbol(t.to_string())),
        })
    }

    pub fn needs_binding(self) -> bool {
        matches!(self, BasisSymbol::PsiIn | BasisSymbol::PsiInStar)
    }

    pub fn vector(self, binding: Option<InputQubitState>) -> Option<[Complex64; 2]> {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Some(match self {
            BasisSymbol::Zero => [one, zero],
            BasisSymbol::One => [zero, one],
            BasisSymbol::Plus => [h, h],
            BasisSymbol::Minus => [h, -h],
            BasisSymbol::PsiIn => binding?.amplitudes(),
            BasisSymbol::PsiInStar => binding?.star().amplitudes(),
        })
    }
}

impl fmt::Display for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TableRow {
    pub sign: Sign,
    pub cells: Vec<BasisSymbol>,
}

impl TableRow {
    pub fn new(sign: Sign, cells: Vec<BasisSymbol>) -> Self {
        Self { sign, cells }
    }
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sign.symbol())?;
        for c in &self.cells {
            write!(f, "|{c}")?;
        }
        Ok(())
    }
}

impl Serialize for TableRow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    labels: Vec<QubitLabel>,
    rows: Vec<TableRow>,
    bindings: BTreeMap<QubitLabel, InputQubitState>,
}

impl Table {
    pub fn new(labels: Vec<QubitLabel>, rows: Vec<TableRow>) -> Result<Self> {
        let distinct: BTreeSet<_> = labels.iter().collect();
        if labels.is_empty() || distinct.len() != labels.len() || labels.contains(&0) {
            return Err(Error::Parse {
                line: 1,
                message: format!("column labels must be distinct positive integers, got {labels:?}"),
            });
        }
        let mut seen = BTreeSet::new();
        for (i, r) in rows.iter().enumerate() {
            if r.cells.len() != labels.len() {
                return Err(Error::RaggedRow {
                    row: i + 1,
                    expected: labels.len(),
                    got: r.cells.len(),
                });
            }
            if !seen.insert(&r.cells) {
                return Err(Error::DuplicateRow(r.to_string()));
            }
        }
        Ok(Self {
            labels,
            rows,
            bindings: BTreeMap::new(),
        })
    }

    /// Binds the `psi` / `psi*` symbols of column `label`.
    pub fn bind(mut self, label: QubitLabel, state: InputQubitState) -> Self {
        self.bindings.insert(label, state);
        self
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn rows(&self) -> &[TableRow] {
        &self.rows
    }

    pub fn bindings(&self) -> &BTreeMap<QubitLabel, InputQubitState> {
        &self.bindings
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn negative_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.sign == Sign::Minus).count()
    }

    /// Columns containing `psi` or `psi*`.
    pub fn input_columns(&self) -> Vec<QubitLabel> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(i, _)| self.rows.iter().any(|r| r.cells[*i].needs_binding()))
            .map(|(_, &l)| l)
            .collect()
    }

    pub fn with_all_signs_flipped(&self) -> Self {
        let mut t = self.clone();
        t.rows.iter_mut().for_each(|r| r.sign = r.sign.flip());
        t
    }
}

/// Normalized expansion of a table.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub state: StateVector,
    /// Factor `c` with `state = c * (sum of signed rows)`.
    pub coefficient: f64,
}

pub fn expand(t: &Table) -> Result<Expansion> {
    let n = t.labels.len();
    let mut columns = Vec::with_capacity(n);
    for (i, &label) in t.labels.iter().enumerate() {
        let binding = t.bindings.get(&label).copied();
        let mut vecs = BTreeMap::new();
        for r in &t.rows {
            let sym = r.cells[i];
            let v = sym.vector(binding).ok_or(Error::UnboundInput(label))?;
            vecs.insert(sym, v);
        }
        columns.push(vecs);
    }
    let dim = 1usize << n;
    let mut sum = vec![Complex64::new(0.0, 0.0); dim];
    let mut term = Vec::with_capacity(dim);
    for r in &t.rows {
        term.clear();
        term.push(Complex64::new(r.sign.value(), 0.0));
        for (i, sym) in r.cells.iter().enumerate() {
            let v = columns[i][sym];
            let mut next = Vec::with_capacity(term.len() * 2);
            for &c in &term {
                next.push(c * v[0]);
                next.push(c * v[1]);
            }
            term = next;
        }
        for (s, c) in sum.iter_mut().zip(&term) {
            *s += c;
        }
    }
    let mut state = StateVector::from_amplitudes(sum)?;
    let norm = state.normalize();
    if norm == 0.0 {
        return Err(Error::Unnormalized { norm });
    }
    Ok(Expansion {
        state,
        coefficient: 1.0 / norm,
    })
}

/// Per-column alphabet used when decomposing a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColumnBasis {
    /// `{0, 1}`
    Computational,
    /// `{+, -}`
    Hadamard,
    /// `{psi, psi*}`; requires a binding with `a * b != 0`.
    InputPair,
}

impl ColumnBasis {
    fn symbols(self) -> [BasisSymbol; 2] {
        match self {
            ColumnBasis::Computational => [BasisSymbol::Zero, BasisSymbol::One],
            ColumnBasis::Hadamard => [BasisSymbol::Plus, BasisSymbol::Minus],
            ColumnBasis::InputPair => [BasisSymbol::PsiIn, BasisSymbol::PsiInStar],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisAssignment {
    pub labels: Vec<QubitLabel>,
    pub columns: Vec<ColumnBasis>,
    pub bindings: BTreeMap<QubitLabel, InputQubitState>,
}

impl BasisAssignment {
    pub fn new(labels: Vec<QubitLabel>, columns: Vec<ColumnBasis>) -> Self {
        assert_eq!(labels.len(), columns.len(), "one basis per column");
        Self {
            labels,
            columns,
            bindings: BTreeMap::new(),
        }
    }

    pub fn bind(mut self, label: QubitLabel, state: InputQubitState) -> Self {
        self.bindings.insert(label, state);
        self
    }

    /// Alternating computational/hadamard columns, optionally with an input pair
    /// in front: `start` is the basis of the first non-input column.
    pub fn alternating(labels: Vec<QubitLabel>, input_first: bool, start: ColumnBasis) -> Self {
        let mut columns = Vec::with_capacity(labels.len());
        let mut next = start;
        for i in 0..labels.len() {
            if i == 0 && input_first {
                columns.push(ColumnBasis::InputPair);
                continue;
            }
            columns.push(next);
            next = match next {
                ColumnBasis::Computational => ColumnBasis::Hadamard,
                _ => ColumnBasis::Computational,
            };
        }
        Self::new(labels, columns)
    }
}

/// Rewrites `v` in the per-column bases of `asg` and reads off the rows.
///
/// Every nonzero coefficient must equal `+c` or `-c` (relative to the first
/// nonzero one, so a global phase is absorbed) within
/// [`COEFFICIENT_TOLERANCE`].
pub fn decompose(v: &StateVector, asg: &BasisAssignment) -> Result<Table> {
    let n = asg.labels.len();
    if v.num_qubits() != n {
        return Err(Error::DimensionMismatch {
            left: v.num_qubits(),
            right: n,
        });
    }
    let mut work = v.clone();
    for (i, (&label, &basis)) in asg.labels.iter().zip(&asg.columns).enumerate() {
        let [s0, s1] = basis.symbols();
        let binding = asg.bindings.get(&label).copied();
        if basis == ColumnBasis::InputPair {
            let b = binding.ok_or(Error::UnboundInput(label))?;
            if (b.a * b.b).norm() < ZERO_COEFFICIENT {
                return Err(Error::DegenerateInputPair(label));
            }
        }
        let v0 = s0.vector(binding).ok_or(Error::UnboundInput(label))?;
        let v1 = s1.vector(binding).ok_or(Error::UnboundInput(label))?;
        // columns of m are the basis vectors
        let det = v0[0] * v1[1] - v1[0] * v0[1];
        let inv = [[v1[1] / det, -v1[0] / det], [-v0[1] / det, v0[0] / det]];
        work.apply_single_qubit(i + 1, &inv)?;
    }
    let coeffs = work.amplitudes();
    let reference = coeffs
        .iter()
        .copied()
        .find(|c| c.norm() >= ZERO_COEFFICIENT)
        .ok_or(Error::Unnormalized { norm: 0.0 })?;
    let mut rows = Vec::new();
    let mut tabular = true;
    for (idx, &c) in coeffs.iter().enumerate() {
        if c.norm() < ZERO_COEFFICIENT {
            continue;
        }
        let sign = if (c / reference).re >= 0.0 { Sign::Plus } else { Sign::Minus };
        if (c - reference * sign.value()).norm() > COEFFICIENT_TOLERANCE {
            tabular = false;
            break;
        }
        let cells = asg
            .columns
            .iter()
            .enumerate()
            .map(|(i, b)| b.symbols()[(idx >> (n - 1 - i)) & 1])
            .collect();
        rows.push(TableRow::new(sign, cells));
    }
    if !tabular {
        return Err(Error::NotTabular {
            histogram: histogram(coeffs),
        });
    }
    let mut t = Table::new(asg.labels.clone(), rows)?;
    t.bindings = asg.bindings.clone();
    Ok(t)
}

fn histogram(coeffs: &[Complex64]) -> Vec<(f64, usize)> {
    let mut buckets: BTreeMap<i64, usize> = BTreeMap::new();
    for c in coeffs {
        let m = c.norm();
        if m >= ZERO_COEFFICIENT {
            *buckets.entry((m * 1e9).round() as i64).or_default() += 1;
        }
    }
    buckets.into_iter().map(|(k, n)| (k as f64 * 1e-9, n)).collect()
}

pub fn render(t: &Table) -> String {
    let mut out = String::from("sign");
    for l in &t.labels {
        out.push_str(&format!("|{l}"));
    }
    out.push('\n');
    for r in &t.rows {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

pub fn parse(text: &str) -> Result<Table> {
    let mut labels: Option<Vec<QubitLabel>> = None;
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split('|').map(str::trim).collect();
        if parts[0] == "sign" {
            if labels.is_some() || !rows.is_empty() {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "header must come first".into(),
                });
            }
            let ls = parts[1..]
                .iter()
                .map(|p| {
                    p.parse::<QubitLabel>().map_err(|_| Error::Parse {
                        line: i + 1,
                        message: format!("bad column label {p:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            labels = Some(ls);
            continue;
        }
        let sign = match parts[0] {
            "+" => Sign::Plus,
            "-" | "−" => Sign::Minus,
            s => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("bad sign {s:?}"),
                })
            }
        };
        let cells = parts[1..]
            .iter()
            .map(|t| BasisSymbol::from_token(t))
            .collect::<Result<Vec<_>>>()?;
        let expected = labels.as_ref().map(Vec::len).unwrap_or_else(|| {
            rows.first().map(|r: &TableRow| r.cells.len()).unwrap_or(cells.len())
        });
        if cells.len() != expected {
            return Err(Error::RaggedRow {
                row: rows.len() + 1,
                expected,
                got: cells.len(),
            });
        }
        rows.push(TableRow::new(sign, cells));
    }
    let labels = match labels {
        Some(l) => l,
        None => (1..=rows.first().map(|r| r.cells.len()).unwrap_or(0)).collect(),
    };
    Table::new(labels, rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum TableComparison {
    Equal,
    EqualUpToGlobalSign,
    Different {
        only_left: Vec<TableRow>,
        only_right: Vec<TableRow>,
    },
}

impl TableComparison {
    pub fn is_match(&self) -> bool {
        !matches!(self, TableComparison::Different { .. })
    }
}

/// Row-order-insensitive comparison.
pub fn tables_equal(x: &Table, y: &Table) -> Result<TableComparison> {
    if x.labels != y.labels {
        return Err(Error::LabelMismatch {
            left: x.labels.clone(),
            right: y.labels.clone(),
        });
    }
    let left: BTreeSet<&TableRow> = x.rows.iter().collect();
    let right: BTreeSet<&TableRow> = y.rows.iter().collect();
    if left == right {
        return Ok(TableComparison::Equal);
    }
    let flipped = y.with_all_signs_flipped();
    if left == flipped.rows.iter().collect() {
        return Ok(TableComparison::EqualUpToGlobalSign);
    }
    Ok(TableComparison::Different {
        only_left: left.difference(&right).map(|r| (*r).clone()).collect(),
        only_right: right.difference(&left).map(|r| (*r).clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic() -> InputQubitState {
        InputQubitState::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap()
    }

    #[test]
    fn parse_and_render() {
        let t = parse("sign|1|2|3\n+|psi|0|+\n+|psi*|1|-\n").unwrap();
        assert_eq!(render(&t), "sign|1|2|3\n+|psi|0|+\n+|psi*|1|-\n");
        assert_eq!(t.input_columns(), vec![1]);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse("+|2|0").unwrap_err(), Error::UnknownSymbol("2".into()));
        assert!(matches!(
            parse("sign|1|2\n+|0|1\n+|0\n").unwrap_err(),
            Error::RaggedRow { row: 2, expected: 2, got: 1 }
        ));
        assert!(matches!(parse("sign|1\n+|0\n-|0\n").unwrap_err(), Error::DuplicateRow(_)));
        assert!(matches!(parse("*|0\n").unwrap_err(), Error::Parse { .. }));
    }

    #[test]
    fn single_row_zero() {
        let e = expand(&parse("+|0").unwrap()).unwrap();
        assert_eq!(e.state, StateVector::zeros(1).unwrap());
        assert!((e.coefficient - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unbound_input_is_rejected() {
        let t = parse("sign|1|2\n+|psi|0\n").unwrap();
        assert_eq!(expand(&t).unwrap_err(), Error::UnboundInput(1));
    }

    #[test]
    fn decompose_degenerate_pair() {
        let asg = BasisAssignment::new(vec![1], vec![ColumnBasis::InputPair]).bind(1, InputQubitState::zero());
        assert_eq!(
            decompose(&StateVector::zeros(1).unwrap(), &asg).unwrap_err(),
            Error::DegenerateInputPair(1)
        );
    }

    #[test]
    fn not_tabular() {
        let s = StateVector::product(&[generic()]).unwrap();
        let asg = BasisAssignment::new(vec![1], vec![ColumnBasis::Computational]);
        assert!(matches!(decompose(&s, &asg), Err(Error::NotTabular { histogram }) if histogram.len() == 2));
    }

    #[test]
    fn input_pair_decomposition() {
        let t = parse("sign|1|2|3\n+|psi|0|+\n+|psi*|1|-\n").unwrap().bind(1, generic());
        let s = expand(&t).unwrap().state;
        let asg = BasisAssignment::alternating(vec![1, 2, 3], true, ColumnBasis::Computational).bind(1, generic());
        let back = decompose(&s, &asg).unwrap();
        assert_eq!(tables_equal(&back, &t).unwrap(), TableComparison::Equal);
    }

    #[test]
    fn comparison_outcomes() {
        let x = parse("+|0|+\n+|1|-\n").unwrap();
        assert_eq!(tables_equal(&x, &x).unwrap(), TableComparison::Equal);
        assert_eq!(
            tables_equal(&x, &x.with_all_signs_flipped()).unwrap(),
            TableComparison::EqualUpToGlobalSign
        );
        let y = parse("+|0|+\n-|1|-\n").unwrap();
        match tables_equal(&x, &y).unwrap() {
            TableComparison::Different { only_left, only_right } => {
                assert_eq!(only_left.len(), 1);
                assert_eq!(only_right[0].to_string(), "-|1|-");
            }
            other => panic!("{other:?}"),
        }
        let z = parse("sign|2|3\n+|0|+\n").unwrap();
        assert!(matches!(tables_equal(&x, &z), Err(Error::LabelMismatch { .. })));
    }
}
