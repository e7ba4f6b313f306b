//! Dense complex state vectors over labeled qubits.
//!
//! Qubit labels are 1-based. Qubit 1 occupies the most significant bit of the
//! amplitude index, so the basis state `|z_1 z_2 ... z_n>` lives at index
//! `sum_k z_k * 2^(n-k)` and tables read left to right like the amplitude
//! index in binary.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

pub const MAX_QUBITS: usize = 16;

/// Tolerance on the norm of user-supplied single-qubit states.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Default tolerance for state comparisons.
pub const STATE_TOLERANCE: f64 = 1e-10;

/// Default tolerance for stabilizer eigenvalue residuals.
pub const STABILIZER_TOLERANCE: f64 = 1e-12;

/// 1-based qubit label.
pub type QubitLabel = usize;

pub type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A single-qubit pure state `a|0> + b|1>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InputQubitState {
    pub a: Complex64,
    pub b: Complex64,
}

impl InputQubitState {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Unnormalized { norm });
        }
        Ok(Self { a, b })
    }

    /// Rescales `(a, b)` to unit norm. Fails only for the zero vector.
    pub fn normalized(a: Complex64, b: Complex64) -> Result<Self> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Unnormalized { norm });
        }
        Ok(Self {
            a: a / norm,
            b: b / norm,
        })
    }

    pub fn zero() -> Self {
        Self { a: ONE, b: ZERO }
    }

    pub fn one() -> Self {
        Self { a: ZERO, b: ONE }
    }

    pub fn plus() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self { a: h, b: h }
    }

    pub fn minus() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self { a: h, b: -h }
    }

    /// The sign-flipped partner `a|0> - b|1>`.
    pub fn star(self) -> Self {
        Self {
            a: self.a,
            b: -self.b,
        }
    }

    pub fn amplitudes(self) -> [Complex64; 2] {
        [self.a, self.b]
    }

    pub fn norm(self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr()).sqrt()
    }
}

/// Result of a phase-insensitive comparison `u ~ e^{i theta} v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseComparison {
    pub equal: bool,
    /// Phase `theta` in `(-pi, pi]` such that `u ~ e^{i theta} v`.
    pub theta: f64,
    /// `max_k |u_k - e^{i theta} v_k|`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `n` qubits.
    pub fn zeros(n: usize) -> Result<Self> {
        check_qubits(n)?;
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        Ok(Self { n, amps })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_qubits(n)?;
        let mut amps = vec![ZERO; 1 << n];
        *amps.get_mut(index).ok_or(Error::BadDimension(index))? = ONE;
        Ok(Self { n, amps })
    }

    /// Wraps raw amplitudes without renormalizing them.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::BadDimension(len));
        }
        let n = len.trailing_zeros() as usize;
        check_qubits(n)?;
        Ok(Self { n, amps })
    }

    /// Tensor product of single-qubit states; `states[0]` is qubit 1.
    pub fn product(states: &[InputQubitState]) -> Result<Self> {
        let n = states.len();
        check_qubits(n)?;
        for s in states {
            InputQubitState::new(s.a, s.b)?;
        }
        let mut amps = vec![ONE];
        for s in states {
            let mut next = Vec::with_capacity(amps.len() * 2);
            for &c in &amps {
                next.push(c * s.a);
                next.push(c * s.b);
            }
            amps = next;
        }
        Ok(Self { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    /// Index bit for `label`.
    pub fn mask(&self, label: QubitLabel) -> Result<usize> {
        if label == 0 || label > self.n {
            return Err(Error::LabelOutOfRange { label, n: self.n });
        }
        Ok(1 << (self.n - label))
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Rescales to unit norm and returns the previous norm.
    pub fn normalize(&mut self) -> f64 {
        let norm = self.norm();
        if norm > 0.0 {
            let inv = 1.0 / norm;
            self.amps.iter_mut().for_each(|c| *c *= inv);
        }
        norm
    }

    /// Controlled-phase entangler: negates every amplitude with `z_a = z_b = 1`.
    pub fn apply_controlled_phase(&mut self, a: QubitLabel, b: QubitLabel) -> Result<()> {
        if a == b {
            return Err(Error::SameQubit(a));
        }
        let both = self.mask(a)? | self.mask(b)?;
        for (i, c) in self.amps.iter_mut().enumerate() {
            if i & both == both {
                *c = -*c;
            }
        }
        Ok(())
    }

    /// Applies a 2x2 matrix (row-major, `m[out][in]`) to one qubit.
    pub fn apply_single_qubit(&mut self, label: QubitLabel, m: &Matrix2) -> Result<()> {
        let bit = self.mask(label)?;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    /// Applies `p` including its phase factor.
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        let mut flip = 0usize;
        let mut sign = 0usize;
        let mut y_count = 0u32;
        for (label, letter) in p.letters() {
            let bit = self.mask(label)?;
            if letter.flips() {
                flip |= bit;
            }
            if letter.phases() {
                sign |= bit;
            }
            if letter == Pauli::Y {
                y_count += 1;
            }
        }
        // Y = i X Z
        let global = p.phase().to_complex() * crate::pauli::Phase::from_power(y_count).to_complex();
        let mut out = vec![ZERO; self.amps.len()];
        for (i, &c) in self.amps.iter().enumerate() {
            let s = if (i & sign).count_ones() % 2 == 1 { -global } else { global };
            out[i ^ flip] = s * c;
        }
        self.amps = out;
        Ok(())
    }

    pub fn with_pauli(&self, p: &PauliString) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_pauli(p)?;
        Ok(out)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.same_dim(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(u, v)| u.conj() * v)
            .sum())
    }

    /// `|<self|other>|^2` for normalized inputs.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        self.same_dim(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(u, v)| (u - v).norm())
            .fold(0.0, f64::max))
    }

    /// Compares `self` with `other` up to a global phase.
    ///
    /// The phase is taken from `<other|self>`, which minimizes the 2-norm
    /// distance; the reported residual is the infinity norm at that phase.
    pub fn equal_up_to_global_phase(&self, other: &StateVector, tol: f64) -> Result<PhaseComparison> {
        let overlap = other.inner(self)?;
        let theta = if overlap.norm() > 0.0 { overlap.arg() } else { 0.0 };
        let rot = Complex64::from_polar(1.0, theta);
        let residual = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(u, v)| (u - rot * v).norm())
            .fold(0.0, f64::max);
        Ok(PhaseComparison {
            equal: residual <= tol,
            theta,
            residual,
        })
    }

    /// Reduced state on `keep` (in the given order) when the rest factors out.
    ///
    /// Fails with [`Error::EntangledRemainder`] when the purity of the reduced
    /// density matrix is below `1 - 1e-10`.
    pub fn extract(&self, keep: &[QubitLabel]) -> Result<StateVector> {
        let k = keep.len();
        if k == 0 || k > self.n {
            return Err(Error::QubitCount(k));
        }
        let kept_masks = keep.iter().map(|&l| self.mask(l)).collect::<Result<Vec<_>>>()?;
        let mut all = 0usize;
        for &m in &kept_masks {
            if all & m != 0 {
                return Err(Error::SameQubit(self.n - m.trailing_zeros() as usize));
            }
            all |= m;
        }
        let rest_masks: Vec<usize> = (1..=self.n)
            .map(|l| 1usize << (self.n - l))
            .filter(|m| all & m == 0)
            .collect();
        let kdim = 1usize << k;
        let rdim = 1usize << rest_masks.len();
        // full index of each kept / complement configuration
        let scatter = |masks: &[usize]| -> Vec<usize> {
            (0..1usize << masks.len())
                .map(|c| {
                    masks
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| c >> (masks.len() - 1 - j) & 1 == 1)
                        .fold(0, |acc, (_, &m)| acc | m)
                })
                .collect()
        };
        let kept_index = scatter(&kept_masks);
        let rest_index = scatter(&rest_masks);
        // amplitudes arranged as rows = complement configuration, cols = kept configuration
        let mut table = Vec::with_capacity(rdim * kdim);
        for &r in &rest_index {
            table.extend(kept_index.iter().map(|&k| self.amps[r | k]));
        }
        let mut rho = vec![ZERO; kdim * kdim];
        for r in 0..rdim {
            let row = &table[r * kdim..(r + 1) * kdim];
            for i in 0..kdim {
                for j in 0..kdim {
                    rho[i * kdim + j] += row[i] * row[j].conj();
                }
            }
        }
        let trace: f64 = (0..kdim).map(|i| rho[i * kdim + i].re).sum();
        let purity = rho.iter().map(|c| c.norm_sqr()).sum::<f64>() / (trace * trace);
        if !(purity >= 1.0 - 1e-10) {
            return Err(Error::EntangledRemainder { purity });
        }
        let best = (0..rdim)
            .map(|r| {
                let w: f64 = table[r * kdim..(r + 1) * kdim].iter().map(|c| c.norm_sqr()).sum();
                (r, w)
            })
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc })
            .0;
        let mut out = StateVector {
            n: k,
            amps: table[best * kdim..(best + 1) * kdim].to_vec(),
        };
        out.normalize();
        Ok(out)
    }

    /// Contracts qubit `label` with the bra `<e|`, giving the unnormalized
    /// state of the other `n - 1` qubits in their original order.
    pub fn contract(&self, label: QubitLabel, e: [Complex64; 2]) -> Result<StateVector> {
        if self.n < 2 {
            return Err(Error::QubitCount(self.n - 1));
        }
        let bit = self.mask(label)?;
        let low = bit - 1;
        let (e0, e1) = (e[0].conj(), e[1].conj());
        let amps = (0..self.amps.len() / 2)
            .map(|j| {
                let i = ((j & !low) << 1) | (j & low);
                e0 * self.amps[i] + e1 * self.amps[i | bit]
            })
            .collect();
        Ok(StateVector { n: self.n - 1, amps })
    }

    fn same_dim(&self, other: &StateVector) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCount(n));
    }
    Ok(())
}
