//! Small dense complex matrices for operator-level identity checks.

use num_complex::Complex64;

use crate::pauli::PauliString;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self { dim, data }
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::identity(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * m.dim + i] = d;
        }
        m
    }

    /// Controlled-phase between labels `a` and `b` on an `n`-qubit register.
    pub fn controlled_phase(n: usize, a: usize, b: usize) -> Self {
        let both = (1 << (n - a)) | (1 << (n - b));
        let diag: Vec<Complex64> = (0..1usize << n)
            .map(|i| {
                if i & both == both {
                    Complex64::new(-1.0, 0.0)
                } else {
                    Complex64::new(1.0, 0.0)
                }
            })
            .collect();
        Self::diagonal(&diag)
    }

    /// Kronecker product of per-qubit matrices of `p` on `n` qubits, qubit 1 leftmost.
    pub fn pauli(n: usize, p: &PauliString) -> Self {
        let mut m = Self::identity(1);
        for label in 1..=n {
            let single = p.get(label).matrix();
            m = m.kron2(&single);
        }
        m.scale(p.phase().to_complex())
    }

    fn kron2(&self, rhs: &[[Complex64; 2]; 2]) -> Self {
        let dim = self.dim * 2;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.data[i * self.dim + j];
                for (k, row) in rhs.iter().enumerate() {
                    for (l, &b) in row.iter().enumerate() {
                        data[(2 * i + k) * dim + 2 * j + l] = a * b;
                    }
                }
            }
        }
        Self { dim, data }
    }

    pub fn scale(mut self, s: Complex64) -> Self {
        self.data.iter_mut().for_each(|c| *c *= s);
        self
    }

    pub fn add(mut self, rhs: &DenseMatrix) -> Self {
        assert_eq!(self.dim, rhs.dim);
        self.data.iter_mut().zip(&rhs.data).for_each(|(a, b)| *a += b);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn adjoint(&self) -> Self {
        let mut data = self.data.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                data[j * self.dim + i] = self.data[i * self.dim + j].conj();
            }
        }
        Self { dim: self.dim, data }
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Self { dim: n, data }
    }

    /// `max_ij |self_ij - rhs_ij|`.
    pub fn max_abs_diff(&self, rhs: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
