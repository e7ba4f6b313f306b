//! Fitting Boolean functions as affine forms over GF(2).
//!
//! Each sample `(x, y)` becomes the equation `c + sum_i w_i x_i = y (mod 2)`
//! in the unknowns `w_0..w_{n-1}, c`. Equations are reduced incrementally into
//! an echelon basis of bit-packed rows, so any number of samples can be fed in
//! and a single contradictory sample is reported immediately.

use serde::Serialize;
use thiserror::Error;

pub const MAX_VARIABLES: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FitError {
    #[error("no affine form fits: sample {sample} contradicts the previous ones")]
    Inconsistent { sample: usize },
    #[error("samples determine only {rank} of {unknowns} unknowns")]
    Underdetermined { rank: usize, unknowns: usize },
    #[error("too many variables ({0}, max {MAX_VARIABLES})")]
    TooManyVariables(usize),
}

/// `constant + sum_i coefficients[i] * x_i (mod 2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineForm {
    pub coefficients: Vec<u8>,
    pub constant: u8,
}

impl AffineForm {
    pub fn new(num_vars: usize, terms: &[usize], constant: u8) -> Self {
        let mut coefficients = vec![0; num_vars];
        for &t in terms {
            coefficients[t] ^= 1;
        }
        Self {
            coefficients,
            constant: constant & 1,
        }
    }

    /// Evaluates on inputs packed as bit `i` = `x_i`.
    pub fn eval(&self, x: u64) -> u8 {
        self.coefficients
            .iter()
            .enumerate()
            .fold(self.constant, |acc, (i, &c)| acc ^ (c & ((x >> i) & 1) as u8))
    }

    /// Indices of the variables with coefficient 1.
    pub fn terms(&self) -> Vec<usize> {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 1)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Incremental GF(2) elimination over `num_vars + 1` unknowns.
#[derive(Debug, Clone)]
pub struct AffineFitter {
    num_vars: usize,
    // pivots[col] = (row, rhs) with highest set bit `col`
    pivots: Vec<Option<(u64, u8)>>,
    samples: usize,
    inconsistent: Option<usize>,
}

impl AffineFitter {
    pub fn new(num_vars: usize) -> Result<Self, FitError> {
        if num_vars > MAX_VARIABLES {
            return Err(FitError::TooManyVariables(num_vars));
        }
        Ok(Self {
            num_vars,
            pivots: vec![None; num_vars + 1],
            samples: 0,
            inconsistent: None,
        })
    }

    pub fn add(&mut self, x: u64, y: u8) {
        let idx = self.samples;
        self.samples += 1;
        let mask = (1u64 << self.num_vars) - 1;
        let mut row = (x & mask) | (1u64 << self.num_vars);
        let mut rhs = y & 1;
        for col in (0..=self.num_vars).rev() {
            if row >> col & 1 == 0 {
                continue;
            }
            match self.pivots[col] {
                Some((prow, prhs)) => {
                    row ^= prow;
                    rhs ^= prhs;
                }
                None => {
                    self.pivots[col] = Some((row, rhs));
                    return;
                }
            }
        }
        if rhs != 0 && self.inconsistent.is_none() {
            self.inconsistent = Some(idx);
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.iter().filter(|p| p.is_some()).count()
    }

    pub fn num_samples(&self) -> usize {
        self.samples
    }

    pub fn solve(&self) -> Result<AffineForm, FitError> {
        if let Some(sample) = self.inconsistent {
            return Err(FitError::Inconsistent { sample });
        }
        let unknowns = self.num_vars + 1;
        let mut value = vec![0u8; unknowns];
        for col in 0..unknowns {
            let (row, rhs) = self.pivots[col].ok_or(FitError::Underdetermined {
                rank: self.rank(),
                unknowns,
            })?;
            let mut v = rhs;
            for (j, &vj) in value.iter().enumerate().take(col) {
                if row >> j & 1 == 1 {
                    v ^= vj;
                }
            }
            value[col] = v;
        }
        let constant = value.pop().unwrap_or(0);
        Ok(AffineForm {
            coefficients: value,
            constant,
        })
    }
}

/// Fits one affine form to all samples.
pub fn fit_affine(num_vars: usize, samples: impl IntoIterator<Item = (u64, u8)>) -> Result<AffineForm, FitError> {
    let mut fitter = AffineFitter::new(num_vars)?;
    for (x, y) in samples {
        fitter.add(x, y);
    }
    fitter.solve()
}
