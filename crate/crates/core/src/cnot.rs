//! The one-way CNOT gate on the 15-qubit cluster.
//!
//! Control wire 1..7 and target wire 9..15 are bridged through qubit 8.
//! Qubits 1, 9, 10, 11, 13, 14 are measured in the X basis, qubits 2..6, 8,
//! 12 in the Y basis, and qubits 7 and 15 carry the output. For every outcome
//! branch the output equals `U_sigma * CNOT |psi_in>` up to global phase,
//! where the byproduct `U_sigma = X_c^gxc X_t^gxt Z_c^gzc Z_t^gzt` depends
//! affinely on the outcome bits.
//!
//! Outcome bits are packed in ascending label order of the measured qubits:
//! bit `i` of a branch index is the outcome of `MEASURED[i]`.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::cluster::{build_cluster_state, ClusterAssignment, ClusterGraph};
use crate::error::{Error, Result};
use crate::gf2::AffineForm;
use crate::measurement::{measure_pattern, MeasurementBasis, OutcomePolicy, OutcomeRecord, IMPOSSIBLE_BRANCH};
use crate::pauli::{Pauli, PauliString, Phase};
use crate::statevector::{InputQubitState, QubitLabel, StateVector};

pub const CONTROL_INPUT: QubitLabel = 1;
pub const TARGET_INPUT: QubitLabel = 9;
pub const CONTROL_OUTPUT: QubitLabel = 7;
pub const TARGET_OUTPUT: QubitLabel = 15;

pub const X_MEASURED: [QubitLabel; 6] = [1, 9, 10, 11, 13, 14];
pub const Y_MEASURED: [QubitLabel; 7] = [2, 3, 4, 5, 6, 8, 12];
pub const OUTPUTS: [QubitLabel; 2] = [CONTROL_OUTPUT, TARGET_OUTPUT];

/// Measured qubits in ascending label order; also the outcome bit order.
pub const MEASURED: [QubitLabel; 13] = [1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12, 13, 14];

pub const NUM_BRANCHES: usize = 1 << MEASURED.len();

/// Corrected outputs must reach fidelity `1 - FIDELITY_TOLERANCE`.
pub const FIDELITY_TOLERANCE: f64 = 1e-10;

/// Basis of a measured qubit, `None` for the outputs.
pub fn basis_of(q: QubitLabel) -> Option<MeasurementBasis> {
    if X_MEASURED.contains(&q) {
        Some(MeasurementBasis::X)
    } else if Y_MEASURED.contains(&q) {
        Some(MeasurementBasis::Y)
    } else {
        None
    }
}

/// Position of `q` in [`MEASURED`].
pub fn bit_index(q: QubitLabel) -> Option<usize> {
    MEASURED.iter().position(|&m| m == q)
}

/// All 13 measurements in ascending label order.
pub fn full_pattern() -> Vec<(QubitLabel, MeasurementBasis)> {
    MEASURED.iter().map(|&q| (q, basis_of(q).unwrap())).collect()
}

/// The 11 measurements that leave the input qubits 1 and 9 untouched.
pub fn partial_pattern() -> Vec<(QubitLabel, MeasurementBasis)> {
    full_pattern()
        .into_iter()
        .filter(|(q, _)| *q != CONTROL_INPUT && *q != TARGET_INPUT)
        .collect()
}

/// Packs the outcomes of the 13 measured qubits into a branch index.
pub fn pack_outcomes(rec: &OutcomeRecord) -> Result<u16> {
    MEASURED.iter().enumerate().try_fold(0u16, |acc, (i, &q)| {
        Ok(acc | (u16::from(rec.require(q)?) << i))
    })
}

/// The outcome bit of `q` in a packed branch index.
pub fn branch_bit(branch: u16, q: QubitLabel) -> u8 {
    bit_index(q).map(|i| ((branch >> i) & 1) as u8).unwrap_or(0)
}

/// Forced outcomes for a packed branch in ascending label order.
pub fn branch_bits(branch: u16) -> Vec<u8> {
    (0..MEASURED.len()).map(|i| ((branch >> i) & 1) as u8).collect()
}

/// Cluster assignment with the inputs on qubits 1 and 9.
pub fn cnot_cluster(control: InputQubitState, target: InputQubitState) -> Result<ClusterAssignment> {
    ClusterAssignment::new(ClusterGraph::cnot15(), [(CONTROL_INPUT, control), (TARGET_INPUT, target)])
}

pub fn cnot_cluster_state(control: InputQubitState, target: InputQubitState) -> Result<StateVector> {
    build_cluster_state(&cnot_cluster(control, target)?)
}

/// `CNOT (|control> ⊗ |target>)`, control on qubit 1.
pub fn cnot_reference(control: InputQubitState, target: InputQubitState) -> Result<StateVector> {
    let mut s = StateVector::product(&[control, target])?;
    s.amplitudes_mut().swap(2, 3);
    Ok(s)
}

/// Exponents of `X_c^x_control X_t^x_target Z_c^z_control Z_t^z_target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct ByproductExponents {
    pub x_control: u8,
    pub x_target: u8,
    pub z_control: u8,
    pub z_target: u8,
}

impl ByproductExponents {
    pub fn new(x_control: u8, x_target: u8, z_control: u8, z_target: u8) -> Self {
        Self {
            x_control: x_control & 1,
            x_target: x_target & 1,
            z_control: z_control & 1,
            z_target: z_target & 1,
        }
    }

    pub fn as_array(self) -> [u8; 4] {
        [self.x_control, self.x_target, self.z_control, self.z_target]
    }

    pub fn from_array(e: [u8; 4]) -> Self {
        Self::new(e[0], e[1], e[2], e[3])
    }

    /// All 16 quadruples, `(0,0,0,0)` first.
    pub fn all() -> impl Iterator<Item = ByproductExponents> {
        (0u8..16).map(|k| Self::new(k >> 3, k >> 2, k >> 1, k))
    }

    /// The operator on a two-qubit register (control = qubit 1).
    pub fn operator(self) -> PauliString {
        let factors = [
            (self.x_control, 1, Pauli::X),
            (self.x_target, 2, Pauli::X),
            (self.z_control, 1, Pauli::Z),
            (self.z_target, 2, Pauli::Z),
        ];
        factors
            .iter()
            .filter(|(e, _, _)| *e == 1)
            .fold(PauliString::identity(), |acc, &(_, q, p)| acc * PauliString::single(q, p))
    }
}

impl fmt::Display for ByproductExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.x_control, self.x_target, self.z_control, self.z_target
        )
    }
}

/// Names of the four exponents, in [`ByproductExponents::as_array`] order.
pub const EXPONENT_NAMES: [&str; 4] = ["gamma_x_control", "gamma_x_target", "gamma_z_control", "gamma_z_target"];

/// The stated byproduct exponents as affine forms over the packed outcome bits.
pub fn byproduct_formulas() -> [AffineForm; 4] {
    let idx = |qs: &[QubitLabel]| qs.iter().map(|&q| bit_index(q).unwrap()).collect::<Vec<_>>();
    let n = MEASURED.len();
    [
        AffineForm::new(n, &idx(&[2, 3, 5, 6]), 0),
        AffineForm::new(n, &idx(&[2, 3, 8, 10, 12, 14]), 0),
        AffineForm::new(n, &idx(&[1, 3, 4, 5, 8, 9, 11]), 1),
        AffineForm::new(n, &idx(&[9, 11, 13]), 0),
    ]
}

/// Renders an affine form over the packed outcome bits as `s2+s3+1`.
pub fn format_formula(f: &AffineForm) -> String {
    let mut parts: Vec<String> = f.terms().into_iter().map(|i| format!("s{}", MEASURED[i])).collect();
    if f.constant == 1 {
        parts.push("1".into());
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// Byproduct exponents predicted by the stated formulas.
pub fn byproduct_from_outcomes(rec: &OutcomeRecord) -> Result<ByproductExponents> {
    let branch = pack_outcomes(rec)?;
    Ok(predicted_exponents(branch))
}

pub fn predicted_exponents(branch: u16) -> ByproductExponents {
    let f = byproduct_formulas();
    ByproductExponents::new(
        f[0].eval(branch as u64),
        f[1].eval(branch as u64),
        f[2].eval(branch as u64),
        f[3].eval(branch as u64),
    )
}

/// Applies `U_sigma` (rightmost factor first) to a two-qubit state.
pub fn apply_byproduct_correction(raw: &StateVector, e: ByproductExponents) -> Result<StateVector> {
    let mut out = raw.clone();
    let factors = [
        (e.z_target, 2, Pauli::Z),
        (e.z_control, 1, Pauli::Z),
        (e.x_target, 2, Pauli::X),
        (e.x_control, 1, Pauli::X),
    ];
    for (exp, q, p) in factors {
        if exp == 1 {
            out.apply_pauli(&PauliString::single(q, p))?;
        }
    }
    Ok(out)
}

/// Outcome of searching the 16 Pauli corrections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Correction {
    Unique(ByproductExponents),
    /// Several corrections work; possible only for special inputs.
    Ambiguous(Vec<ByproductExponents>),
    None,
}

impl Correction {
    pub fn unique(&self) -> Option<ByproductExponents> {
        match self {
            Correction::Unique(e) => Some(*e),
            _ => None,
        }
    }

    /// Any working correction.
    pub fn first(&self) -> Option<ByproductExponents> {
        match self {
            Correction::Unique(e) => Some(*e),
            Correction::Ambiguous(v) => v.first().copied(),
            Correction::None => None,
        }
    }

    pub fn contains(&self, e: ByproductExponents) -> bool {
        match self {
            Correction::Unique(u) => *u == e,
            Correction::Ambiguous(v) => v.contains(&e),
            Correction::None => false,
        }
    }
}

impl Serialize for Correction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Correction::Unique(e) => s.collect_str(e),
            Correction::Ambiguous(v) => {
                let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                s.serialize_str(&format!("ambiguous[{}]", parts.join(" ")))
            }
            Correction::None => s.serialize_str("none"),
        }
    }
}

/// Finds every Pauli correction taking `raw` to `reference` up to phase.
pub fn solve_correction(raw: &StateVector, reference: &StateVector) -> Result<Correction> {
    let mut found = Vec::new();
    for e in ByproductExponents::all() {
        if apply_byproduct_correction(raw, e)?.fidelity(reference)? >= 1.0 - FIDELITY_TOLERANCE {
            found.push(e);
        }
    }
    Ok(match found.len() {
        0 => Correction::None,
        1 => Correction::Unique(found[0]),
        _ => Correction::Ambiguous(found),
    })
}

fn best_fidelity(raw: &StateVector, reference: &StateVector, correction: &Correction) -> Result<f64> {
    match correction.first() {
        Some(e) => apply_byproduct_correction(raw, e)?.fidelity(reference),
        None => ByproductExponents::all().try_fold(0.0f64, |best, e| {
            Ok(best.max(apply_byproduct_correction(raw, e)?.fidelity(reference)?))
        }),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CnotRunResult {
    pub outcomes: OutcomeRecord,
    #[serde(serialize_with = "serialize_amplitudes")]
    pub raw_output: StateVector,
    pub predicted: ByproductExponents,
    pub predicted_fidelity: f64,
    pub solved: Correction,
    pub corrected_fidelity: f64,
}

pub(crate) fn serialize_amplitudes<S: Serializer>(v: &StateVector, s: S) -> std::result::Result<S::Ok, S::Error> {
    let pairs: Vec<[f64; 2]> = v.amplitudes().iter().map(|c| [c.re, c.im]).collect();
    pairs.serialize(s)
}

/// Full pattern in ascending label order.
pub fn run_cnot(control: InputQubitState, target: InputQubitState, policy: &OutcomePolicy) -> Result<CnotRunResult> {
    run_cnot_in_order(control, target, &MEASURED, policy)
}

/// Runs the pattern measuring the 13 qubits in `order`; forced bits follow `order`.
pub fn run_cnot_in_order(
    control: InputQubitState,
    target: InputQubitState,
    order: &[QubitLabel],
    policy: &OutcomePolicy,
) -> Result<CnotRunResult> {
    let pattern = order
        .iter()
        .map(|&q| basis_of(q).map(|b| (q, b)).ok_or(Error::UnknownVertex(q)))
        .collect::<Result<Vec<_>>>()?;
    let state = cnot_cluster_state(control, target)?;
    let (outcomes, post) = measure_pattern(&state, &pattern, policy)?;
    let raw_output = post.extract(&OUTPUTS)?;
    let predicted = byproduct_from_outcomes(&outcomes)?;
    let reference = cnot_reference(control, target)?;
    let predicted_fidelity = apply_byproduct_correction(&raw_output, predicted)?.fidelity(&reference)?;
    let solved = solve_correction(&raw_output, &reference)?;
    let corrected_fidelity = best_fidelity(&raw_output, &reference, &solved)?;
    Ok(CnotRunResult {
        outcomes,
        raw_output,
        predicted,
        predicted_fidelity,
        solved,
        corrected_fidelity,
    })
}

/// One leaf of the exhaustive branch sweep.
#[derive(Debug, Clone)]
pub struct BranchResult {
    pub branch: u16,
    /// Product of the step probabilities.
    pub probability: f64,
    /// Largest `|p - 1/2|` over the 13 steps.
    pub max_step_deviation: f64,
    pub raw_output: StateVector,
    pub solved: Correction,
    /// Fidelity after the first working correction (or the best of all 16).
    pub corrected_fidelity: f64,
}

struct Node {
    state: StateVector,
    // labels of the unmeasured qubits, in state order
    labels: Vec<QubitLabel>,
    branch: u16,
    probability: f64,
    max_step_deviation: f64,
}

/// Depth below which the two subtrees of a node run in parallel.
const PARALLEL_DEPTH: usize = 8;

/// Enumerates all 2^13 forced outcome branches of the full pattern.
///
/// The tree is walked depth first; every inner node is measured once per
/// outcome, so the sweep costs about `2^14` projections instead of
/// `13 * 2^13`. Results come back ordered by branch index.
pub fn sweep_branches(control: InputQubitState, target: InputQubitState) -> Result<Vec<BranchResult>> {
    let root = Node {
        state: cnot_cluster_state(control, target)?,
        labels: (1..=15).collect(),
        branch: 0,
        probability: 1.0,
        max_step_deviation: 0.0,
    };
    let reference = cnot_reference(control, target)?;
    let pattern = full_pattern();
    let mut out = descend(root, 0, &pattern, &reference)?;
    out.sort_by_key(|b| b.branch);
    Ok(out)
}

fn descend(
    node: Node,
    depth: usize,
    pattern: &[(QubitLabel, MeasurementBasis)],
    reference: &StateVector,
) -> Result<Vec<BranchResult>> {
    if depth == pattern.len() {
        // only the outputs remain, in ascending label order
        debug_assert_eq!(node.labels, OUTPUTS);
        let mut raw_output = node.state;
        raw_output.normalize();
        let solved = solve_correction(&raw_output, reference)?;
        let corrected_fidelity = best_fidelity(&raw_output, reference, &solved)?;
        return Ok(vec![BranchResult {
            branch: node.branch,
            probability: node.probability,
            max_step_deviation: node.max_step_deviation,
            raw_output,
            solved,
            corrected_fidelity,
        }]);
    }
    let (q, basis) = pattern[depth];
    let pos = node
        .labels
        .iter()
        .position(|&l| l == q)
        .ok_or(Error::UnknownVertex(q))?;
    let mut labels = node.labels.clone();
    labels.remove(pos);
    // measuring qubit q is contracting it with the outcome eigenbra; the
    // squared norm of the contraction is the outcome probability
    let child = |s: u8| -> Result<Option<Node>> {
        let mut state = node.state.contract(pos + 1, basis.eigenvector(s))?;
        let p = state.normalize().powi(2);
        if p < IMPOSSIBLE_BRANCH {
            return Ok(None);
        }
        Ok(Some(Node {
            state,
            labels: labels.clone(),
            branch: node.branch | (u16::from(s) << depth),
            probability: node.probability * p,
            max_step_deviation: node.max_step_deviation.max((p - 0.5).abs()),
        }))
    };
    let zero = child(0)?;
    let one = child(1)?;
    let run = |n: Option<Node>| -> Result<Vec<BranchResult>> {
        match n {
            Some(n) => descend(n, depth + 1, pattern, reference),
            None => Ok(Vec::new()),
        }
    };
    let (mut left, right) = if depth < PARALLEL_DEPTH {
        let (l, r) = rayon::join(|| run(zero), || run(one));
        (l?, r?)
    } else {
        (run(zero)?, run(one)?)
    };
    left.extend(right);
    Ok(left)
}

/// Runs a list of forced branches in parallel, in input order.
pub fn run_branches(
    control: InputQubitState,
    target: InputQubitState,
    branches: &[u16],
) -> Result<Vec<CnotRunResult>> {
    branches
        .par_iter()
        .map(|&b| run_cnot(control, target, &OutcomePolicy::Forced(branch_bits(b))))
        .collect()
}

/// An eigenvalue relation of the partially measured cluster:
/// `operator |psi> = (-1)^(constant + sum of outcome bits) |psi>`.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectedEquation {
    pub id: &'static str,
    pub operator: PauliString,
    pub outcome_terms: Vec<QubitLabel>,
    pub constant: u8,
}

/// The four stated relations on qubits 1, 7, 9, 15.
pub fn projected_equations() -> Vec<ProjectedEquation> {
    let op = |letters: &[(QubitLabel, Pauli)]| PauliString::from_letters(Phase::ONE, letters.iter().copied());
    vec![
        ProjectedEquation {
            id: "eq32",
            operator: op(&[(1, Pauli::X), (7, Pauli::X), (15, Pauli::X)]),
            outcome_terms: vec![3, 4, 5, 8, 13],
            constant: 1,
        },
        ProjectedEquation {
            id: "eq33",
            operator: op(&[(1, Pauli::Z), (7, Pauli::Z)]),
            outcome_terms: vec![2, 3, 5, 6],
            constant: 0,
        },
        ProjectedEquation {
            id: "eq34",
            operator: op(&[(9, Pauli::X), (15, Pauli::X)]),
            outcome_terms: vec![11, 13],
            constant: 0,
        },
        ProjectedEquation {
            id: "eq35",
            operator: op(&[(7, Pauli::Z), (9, Pauli::Z), (15, Pauli::Z)]),
            outcome_terms: vec![5, 6, 8, 10, 12, 14],
            constant: 0,
        },
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectedCheck {
    pub id: &'static str,
    pub operator: PauliString,
    pub sign_exponent: u8,
    pub expected_eigenvalue: i8,
    /// `<psi| operator |psi>`.
    pub observed_expectation: f64,
    pub residual: f64,
    pub passed: bool,
}

/// Checks the four relations on a post-measurement 15-qubit state.
pub fn verify_projected_eigenvalue_equations(
    state: &StateVector,
    rec: &OutcomeRecord,
    tol: f64,
) -> Result<Vec<ProjectedCheck>> {
    projected_equations()
        .into_iter()
        .map(|eq| {
            let mut exp = eq.constant;
            for &q in &eq.outcome_terms {
                exp ^= rec.require(q)?;
            }
            let eigen: i8 = if exp == 0 { 1 } else { -1 };
            let moved = state.with_pauli(&eq.operator)?;
            let mut scaled = state.clone();
            scaled
                .amplitudes_mut()
                .iter_mut()
                .for_each(|c| *c *= Complex64::new(f64::from(eigen), 0.0));
            let residual = moved.max_abs_diff(&scaled)?;
            let observed_expectation = state.inner(&moved)?.re;
            Ok(ProjectedCheck {
                id: eq.id,
                operator: eq.operator,
                sign_exponent: exp,
                expected_eigenvalue: eigen,
                observed_expectation,
                residual,
                passed: residual <= tol,
            })
        })
        .collect()
}

/// Measures the partial pattern (inputs untouched) on the no-input cluster.
pub fn partial_run(branch_bits: &[u8]) -> Result<(OutcomeRecord, StateVector)> {
    let state = build_cluster_state(&ClusterAssignment::without_inputs(ClusterGraph::cnot15()))?;
    measure_pattern(&state, &partial_pattern(), &OutcomePolicy::Forced(branch_bits.to_vec()))
}

type IntMatrix4 = [[i32; 4]; 4];

fn int_mul(a: &IntMatrix4, b: &IntMatrix4) -> IntMatrix4 {
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn int_kron(a: [[i32; 2]; 2], b: [[i32; 2]; 2]) -> IntMatrix4 {
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[i / 2][j / 2] * b[i % 2][j % 2];
        }
    }
    out
}

const INT_I: [[i32; 2]; 2] = [[1, 0], [0, 1]];
const INT_X: [[i32; 2]; 2] = [[0, 1], [1, 0]];
const INT_Z: [[i32; 2]; 2] = [[1, 0], [0, -1]];

/// `CNOT` with control on the most significant qubit.
pub const CNOT_MATRIX: IntMatrix4 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]];

#[derive(Debug, Clone, Serialize)]
pub struct ConjugationIdentity {
    pub id: &'static str,
    pub operator: &'static str,
    pub image: &'static str,
    pub holds: bool,
}

/// Exact integer checks of `CNOT P CNOT` for `P` in `{X_c, Z_c, X_t, Z_t}`.
pub fn verify_cnot_conjugation_identities() -> Vec<ConjugationIdentity> {
    let xc = int_kron(INT_X, INT_I);
    let zc = int_kron(INT_Z, INT_I);
    let xt = int_kron(INT_I, INT_X);
    let zt = int_kron(INT_I, INT_Z);
    let cases: [(&str, &str, &str, IntMatrix4, IntMatrix4); 4] = [
        ("eq36", "X_c", "X_c X_t", xc, int_mul(&xc, &xt)),
        ("eq37", "Z_c", "Z_c", zc, zc),
        ("eq38", "X_t", "X_t", xt, xt),
        ("eq39", "Z_t", "Z_c Z_t", zt, int_mul(&zc, &zt)),
    ];
    cases
        .into_iter()
        .map(|(id, operator, image, p, q)| ConjugationIdentity {
            id,
            operator,
            image,
            holds: int_mul(&int_mul(&CNOT_MATRIX, &p), &CNOT_MATRIX) == q,
        })
        .collect()
}
