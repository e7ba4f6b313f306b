//! Projective single-qubit measurements in the Pauli eigenbases.
//!
//! Outcome `s = 0` is the `+1` eigenvector of the measured axis, so the
//! observed eigenvalue is `(-1)^s`. Measured qubits stay in the register,
//! projected onto the observed eigenvector.
//!
//! Random outcomes come from `ChaCha8Rng::seed_from_u64(seed)`, drawing one
//! uniform `f64` per step; `s = 0` when the draw is below `p(s = 0)`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{QubitLabel, StateVector};

/// Forced outcomes below this probability are rejected.
pub const IMPOSSIBLE_BRANCH: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasurementBasis {
    X,
    Y,
    Z,
}

impl MeasurementBasis {
    /// Eigenvector for outcome `s`.
    pub fn eigenvector(self, s: u8) -> [Complex64; 2] {
        let h = FRAC_1_SQRT_2;
        let sign = if s == 0 { 1.0 } else { -1.0 };
        match self {
            MeasurementBasis::X => [Complex64::new(h, 0.0), Complex64::new(sign * h, 0.0)],
            MeasurementBasis::Y => [Complex64::new(h, 0.0), Complex64::new(0.0, sign * h)],
            MeasurementBasis::Z if s == 0 => [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            MeasurementBasis::Z => [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        }
    }
}

impl fmt::Display for MeasurementBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutcomePolicy {
    /// One bit per pattern step, in pattern order.
    Forced(Vec<u8>),
    Sampled { seed: u64 },
}

impl OutcomePolicy {
    /// Parses a string of `0`/`1` characters into a forced policy.
    pub fn forced_from_str(bits: &str) -> Result<Self> {
        bits.chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse {
                    line: 1,
                    message: format!("outcome character {} is {c:?}, expected 0 or 1", i + 1),
                }),
            })
            .collect::<Result<Vec<u8>>>()
            .map(OutcomePolicy::Forced)
    }
}

/// How a single step picks its outcome.
pub enum OutcomeChoice<'a> {
    Forced(u8),
    Sample(&'a mut ChaCha8Rng),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeStep {
    pub qubit: QubitLabel,
    pub basis: MeasurementBasis,
    pub outcome: u8,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OutcomeRecord {
    pub steps: Vec<OutcomeStep>,
}

impl OutcomeRecord {
    pub fn get(&self, qubit: QubitLabel) -> Option<u8> {
        self.steps.iter().find(|s| s.qubit == qubit).map(|s| s.outcome)
    }

    pub fn require(&self, qubit: QubitLabel) -> Result<u8> {
        self.get(qubit).ok_or(Error::MissingOutcome(qubit))
    }

    /// Outcome bits in step order.
    pub fn bits(&self) -> String {
        self.steps.iter().map(|s| if s.outcome == 0 { '0' } else { '1' }).collect()
    }

    /// Product of step probabilities.
    pub fn branch_probability(&self) -> f64 {
        self.steps.iter().map(|s| s.probability).product()
    }
}

/// Born probability of outcome `s` for `basis` on `qubit`.
pub fn outcome_probability(state: &StateVector, qubit: QubitLabel, basis: MeasurementBasis, s: u8) -> Result<f64> {
    let bit = state.mask(qubit)?;
    let e = basis.eigenvector(s);
    let amps = state.amplitudes();
    Ok((0..amps.len())
        .filter(|i| i & bit == 0)
        .map(|i| (e[0].conj() * amps[i] + e[1].conj() * amps[i | bit]).norm_sqr())
        .sum())
}

/// Projects `state` onto outcome `s` without renormalizing; returns the
/// squared norm of the projected state.
fn project(state: &mut StateVector, bit: usize, e: [Complex64; 2]) -> f64 {
    let amps = state.amplitudes_mut();
    let mut weight = 0.0;
    for i in 0..amps.len() {
        if i & bit == 0 {
            let c = e[0].conj() * amps[i] + e[1].conj() * amps[i | bit];
            weight += c.norm_sqr();
            amps[i] = e[0] * c;
            amps[i | bit] = e[1] * c;
        }
    }
    weight
}

/// Measures one qubit in place and returns `(s, p)`.
pub fn measure(
    state: &mut StateVector,
    qubit: QubitLabel,
    basis: MeasurementBasis,
    choice: OutcomeChoice<'_>,
) -> Result<(u8, f64)> {
    let bit = state.mask(qubit)?;
    let s = match choice {
        OutcomeChoice::Forced(s) => s.min(1),
        OutcomeChoice::Sample(rng) => {
            let p0 = outcome_probability(state, qubit, basis, 0)?;
            if rng.gen::<f64>() < p0 {
                0
            } else {
                1
            }
        }
    };
    let p = outcome_probability(state, qubit, basis, s)?;
    if p < IMPOSSIBLE_BRANCH {
        return Err(Error::ImpossibleBranch {
            step: 0,
            qubit,
            outcome: s,
            probability: p,
        });
    }
    let w = project(state, bit, basis.eigenvector(s));
    let inv = 1.0 / w.sqrt();
    state.amplitudes_mut().iter_mut().for_each(|c| *c *= inv);
    Ok((s, p))
}

/// Measures the pattern in order and returns the record and post-measurement state.
pub fn measure_pattern(
    state: &StateVector,
    pattern: &[(QubitLabel, MeasurementBasis)],
    policy: &OutcomePolicy,
) -> Result<(OutcomeRecord, StateVector)> {
    let mut seen = std::collections::BTreeSet::new();
    for &(q, _) in pattern {
        if !seen.insert(q) {
            return Err(Error::DuplicateMeasurement(q));
        }
        state.mask(q)?;
    }
    let mut rng = match policy {
        OutcomePolicy::Forced(bits) => {
            if bits.len() != pattern.len() {
                return Err(Error::OutcomeCount {
                    expected: pattern.len(),
                    got: bits.len(),
                });
            }
            None
        }
        OutcomePolicy::Sampled { seed } => Some(ChaCha8Rng::seed_from_u64(*seed)),
    };
    let mut post = state.clone();
    let mut record = OutcomeRecord::default();
    for (step, &(qubit, basis)) in pattern.iter().enumerate() {
        let choice = match (&mut rng, policy) {
            (Some(rng), _) => OutcomeChoice::Sample(rng),
            (None, OutcomePolicy::Forced(bits)) => OutcomeChoice::Forced(bits[step]),
            (None, OutcomePolicy::Sampled { .. }) => unreachable!(),
        };
        let (outcome, probability) = measure(&mut post, qubit, basis, choice).map_err(|e| match e {
            Error::ImpossibleBranch {
                qubit,
                outcome,
                probability,
                ..
            } => Error::ImpossibleBranch {
                step: step + 1,
                qubit,
                outcome,
                probability,
            },
            e => e,
        })?;
        record.steps.push(OutcomeStep {
            qubit,
            basis,
            outcome,
            probability,
        });
    }
    Ok((record, post))
}
