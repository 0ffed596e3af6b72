use num_complex::Complex;

use super::{QsimError, QubitId};
use crate::scalar::Scalar;

/// Row-major density matrix over an ordered qubit list.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    qubits: Vec<QubitId>,
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> DensityMatrix<T> {
    pub(crate) fn from_parts(qubits: Vec<QubitId>, entries: Vec<Complex<T>>) -> Self {
        let dim = 1 << qubits.len();
        debug_assert_eq!(entries.len(), dim * dim);
        Self {
            qubits,
            dim,
            entries,
        }
    }

    /// Maximally mixed state on `k` anonymous qubits.
    pub fn maximally_mixed(qubits: &[QubitId]) -> Self {
        let dim = 1usize << qubits.len();
        let w = T::one() / T::lit(dim as f64);
        let mut entries = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex::new(w, T::zero());
        }
        Self::from_parts(qubits.to_vec(), entries)
    }

    pub fn qubits(&self) -> &[QubitId] {
        &self.qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.dim + col]
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        (0..self.dim)
            .all(|i| (0..self.dim).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_distance(&self, other: &Self) -> Result<T, QsimError> {
        if self.dim != other.dim {
            return Err(QsimError::DensityDimension {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max))
    }

    /// Entrywise equality within `tol`. Qubit labels are ignored so that
    /// states held on different qubits can be compared.
    pub fn approx_eq(&self, other: &Self, tol: T) -> Result<bool, QsimError> {
        Ok(self.max_distance(other)? <= tol)
    }
}

/// State-equality test used by qubit propositions.
pub fn dm_equal<T: Scalar>(
    a: &DensityMatrix<T>,
    b: &DensityMatrix<T>,
    tol: T,
) -> Result<bool, QsimError> {
    a.approx_eq(b, tol)
}
