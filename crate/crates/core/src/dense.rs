//! Dense complex matrices used for gate definitions and for verification.
//!
//! Execution never builds a full `2^N x 2^N` matrix; these types exist so
//! that every decomposition can be checked against an explicit product.

use std::ops::Mul;

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};

use crate::error::{input, Result, SimError};
use crate::scalar::Real;

/// Largest register for which dense full-register matrices are built.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Square complex matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T: Real = f64> {
    dim: usize,
    data: Vec<Complex<T>>,
}

/// A dense matrix that is expected to be unitary.
pub type DenseUnitary<T = f64> = DenseMatrix<T>;

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex::new(T::zero(), T::zero()); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn diagonal(diag: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = *d;
        }
        m
    }

    /// Builds a matrix from row-major entries. Fails unless the length is a
    /// perfect square.
    pub fn from_row_major(data: Vec<Complex<T>>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim * dim != data.len() {
            return input(format!("{} entries do not form a square matrix", data.len()));
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex<T>) {
        self.data[row * self.dim + col] = value;
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect() }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[r * n..(r + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = *d + a * b;
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`; `self` acts on the more significant
    /// index bits.
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        Self::from_fn(a * b, |r, c| self.get(r / b, c / b) * other.get(r % b, c % b))
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self.get(i, i))
    }

    pub fn matvec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        (0..self.dim)
            .map(|r| {
                self.data[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&m, &x)| acc + m * x)
            })
            .collect()
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data.iter().zip(&other.data).map(|(&a, &b)| (a - b).norm().to_f64_lossy()).fold(0.0, f64::max)
    }

    /// Largest elementwise deviation of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        self.adjoint().matmul(self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    /// Embeds a local operator acting on `targets` (first target is the most
    /// significant local bit) into an `n_qubits` register, conditioned on all
    /// `controls` being `|1⟩`. Qubits are 1-based; qubit 1 is the most
    /// significant bit of the register index.
    pub fn embed(&self, targets: &[usize], controls: &[usize], n_qubits: usize) -> Result<Self> {
        if n_qubits > MAX_DENSE_QUBITS {
            return Err(SimError::Resource(format!(
                "dense embedding of {n_qubits} qubits exceeds the {MAX_DENSE_QUBITS}-qubit limit"
            )));
        }
        if self.dim != 1 << targets.len() {
            return input(format!("a {}-dimensional operator cannot act on {} qubits", self.dim, targets.len()));
        }
        let mut seen = vec![false; n_qubits + 1];
        for &q in targets.iter().chain(controls) {
            if q == 0 || q > n_qubits {
                return input(format!("qubit {q} outside register of {n_qubits}"));
            }
            if seen[q] {
                return input(format!("qubit {q} addressed twice"));
            }
            seen[q] = true;
        }
        let bit = |q: usize| 1usize << (n_qubits - q);
        let tmask: usize = targets.iter().map(|&q| bit(q)).sum();
        let cmask: usize = controls.iter().map(|&q| bit(q)).sum();
        let dim = 1 << n_qubits;
        let k = targets.len();
        let mut out = Self::zeros(dim);
        for col in 0..dim {
            if col & cmask != cmask {
                out.set(col, col, Complex::new(T::one(), T::zero()));
                continue;
            }
            let local_col = targets.iter().fold(0, |acc, &q| (acc << 1) | usize::from(col & bit(q) != 0));
            for local_row in 0..self.dim {
                let mut row = col & !tmask;
                for (pos, &q) in targets.iter().enumerate() {
                    if local_row >> (k - 1 - pos) & 1 == 1 {
                        row |= bit(q);
                    }
                }
                out.set(row, col, self.get(local_row, local_col));
            }
        }
        Ok(out)
    }

    pub fn cast<U: Real>(&self) -> DenseMatrix<U> {
        DenseMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::of(z.re.to_f64_lossy()), U::of(z.im.to_f64_lossy())))
                .collect(),
        }
    }
}

impl<T: Real> Mul for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;

    fn mul(self, rhs: &DenseMatrix<T>) -> DenseMatrix<T> {
        self.matmul(rhs)
    }
}

impl DenseMatrix<f64> {
    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim, self.dim, |r, c| self.get(r, c))
    }

    pub fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "matrix must be square");
        Self::from_fn(m.nrows(), |r, c| m[(r, c)])
    }

    /// Eigenvalues (ascending) and eigenvectors (as columns) of a Hermitian
    /// matrix.
    pub fn hermitian_eigh(&self) -> (Vec<f64>, DenseMatrix<f64>) {
        let eig = self.to_nalgebra().symmetric_eigen();
        let mut order: Vec<usize> = (0..self.dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = Self::from_fn(self.dim, |r, c| eig.eigenvectors[(r, order[c])]);
        (values, vectors)
    }

    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        self.hermitian_eigh().0
    }

    /// `exp(-i H t)` for a Hermitian `H`, through its eigendecomposition.
    pub fn hermitian_expm(&self, t: f64) -> DenseMatrix<f64> {
        let (values, vectors) = self.hermitian_eigh();
        let phases: Vec<Complex64> = values.iter().map(|&e| Complex64::from_polar(1.0, -e * t)).collect();
        let scaled = DenseMatrix::from_fn(self.dim, |r, c| vectors.get(r, c) * phases[c]);
        scaled.matmul(&vectors.adjoint())
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        if self.dim == 0 {
            return 0.0;
        }
        self.to_nalgebra().singular_values().iter().copied().fold(0.0, f64::max)
    }

    /// Largest elementwise deviation from `M†`.
    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }
}
