use std::fmt::Write as _;

use num_complex::Complex;

use super::{position_mask, scatter, DensityMatrix, QsimError, QubitId};
use crate::scalar::{Scalar, Tolerance};

/// Normalized amplitude vector over an ascending list of qubit ids.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    qubits: Vec<QubitId>,
    amps: Vec<Complex<T>>,
}

impl<T: Scalar> StateVector<T> {
    /// Builds a state from amplitudes listed in the basis order of `qubits`
    /// (first listed qubit most significant). The qubit list may be in any
    /// order; amplitudes are permuted into ascending id order.
    pub fn new(qubits: &[QubitId], amplitudes: Vec<Complex<T>>) -> Result<Self, QsimError> {
        Self::with_tolerance(qubits, amplitudes, &Tolerance::default())
    }

    pub fn with_tolerance(
        qubits: &[QubitId],
        amplitudes: Vec<Complex<T>>,
        tol: &Tolerance<T>,
    ) -> Result<Self, QsimError> {
        let n = qubits.len();
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(QsimError::DuplicateQubit(*q));
            }
        }
        let expected = 1usize << n;
        if amplitudes.len() != expected {
            return Err(QsimError::DimensionMismatch {
                expected,
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if norm == T::zero() {
            return Err(QsimError::ZeroVector);
        }
        if (norm - T::one()).abs() > tol.normalize {
            return Err(QsimError::NotNormalized {
                norm: norm.to_f64_lossy(),
            });
        }

        let mut sorted: Vec<QubitId> = qubits.to_vec();
        sorted.sort();
        // position of each sorted qubit in the caller's ordering
        let src_pos: Vec<usize> = sorted
            .iter()
            .map(|q| qubits.iter().position(|p| p == q).unwrap())
            .collect();
        let mut amps = vec![Complex::new(T::zero(), T::zero()); expected];
        for (dst, slot) in amps.iter_mut().enumerate() {
            let mut src = 0;
            for (pos, &sp) in src_pos.iter().enumerate() {
                if dst & position_mask(n, pos) != 0 {
                    src |= position_mask(n, sp);
                }
            }
            *slot = amplitudes[src].unscale(norm);
        }
        Ok(Self {
            qubits: sorted,
            amps,
        })
    }

    /// Computational basis state `|bits⟩` on the given qubits.
    pub fn basis(qubits: &[QubitId], bits: &[u8]) -> Result<Self, QsimError> {
        if bits.len() != qubits.len() {
            return Err(QsimError::DimensionMismatch {
                expected: qubits.len(),
                found: bits.len(),
            });
        }
        let n = qubits.len();
        let idx = bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b != 0)
            .fold(0, |acc, (p, _)| acc | position_mask(n, p));
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << n];
        amps[idx] = Complex::new(T::one(), T::zero());
        Self::new(qubits, amps)
    }

    /// The ebit `(|00⟩ + |11⟩)/√2` on `(a, b)`.
    pub fn ebit(a: QubitId, b: QubitId) -> Result<Self, QsimError> {
        let h = T::FRAC_1_SQRT_2();
        let z = T::zero();
        Self::new(
            &[a, b],
            vec![
                Complex::new(h, z),
                Complex::new(z, z),
                Complex::new(z, z),
                Complex::new(h, z),
            ],
        )
    }

    pub(crate) fn from_parts_unchecked(qubits: Vec<QubitId>, amps: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(amps.len(), 1 << qubits.len());
        Self { qubits, amps }
    }

    pub fn qubits(&self) -> &[QubitId] {
        &self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn contains(&self, q: QubitId) -> bool {
        self.qubits.binary_search(&q).is_ok()
    }

    pub(crate) fn position(&self, q: QubitId) -> Result<usize, QsimError> {
        self.qubits
            .binary_search(&q)
            .map_err(|_| QsimError::UnknownQubit(q))
    }

    pub(crate) fn masks(&self, targets: &[QubitId]) -> Result<Vec<usize>, QsimError> {
        let n = self.num_qubits();
        targets
            .iter()
            .map(|&q| self.position(q).map(|p| position_mask(n, p)))
            .collect()
    }

    pub fn norm(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt()
    }

    /// Amplitude of the basis state whose bits are listed in ascending id order.
    pub fn amplitude(&self, bits: &[u8]) -> Option<Complex<T>> {
        if bits.len() != self.num_qubits() {
            return None;
        }
        let n = self.num_qubits();
        let idx = bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b != 0)
            .fold(0, |acc, (p, _)| acc | position_mask(n, p));
        Some(self.amps[idx])
    }

    /// Joint state on the union of both registers.
    pub fn tensor(&self, other: &Self) -> Result<Self, QsimError> {
        if let Some(q) = self.qubits.iter().find(|q| other.contains(**q)) {
            return Err(QsimError::OverlappingQubits(*q));
        }
        let mut qubits: Vec<QubitId> = self.qubits.iter().chain(&other.qubits).copied().collect();
        qubits.sort();
        let n = qubits.len();
        let mask_of = |q: &QubitId| position_mask(n, qubits.binary_search(q).unwrap());
        let left: Vec<usize> = self.qubits.iter().map(mask_of).collect();
        let right: Vec<usize> = other.qubits.iter().map(mask_of).collect();

        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << n];
        for (i, a) in self.amps.iter().enumerate() {
            let base = scatter(i, &left);
            for (j, b) in other.amps.iter().enumerate() {
                amps[base | scatter(j, &right)] = a * b;
            }
        }
        Ok(Self { qubits, amps })
    }

    /// Renames a single-qubit state onto another qubit id.
    pub fn relabel(&self, from: QubitId, to: QubitId) -> Result<Self, QsimError> {
        let pos = self.position(from)?;
        if from != to && self.contains(to) {
            return Err(QsimError::OverlappingQubits(to));
        }
        let mut listed = self.qubits.clone();
        listed[pos] = to;
        Self::new(&listed, self.amps.clone())
    }

    /// Max-entry distance between amplitude vectors; phase-sensitive.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.qubits == other.qubits
            && self
                .amps
                .iter()
                .zip(&other.amps)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    pub fn density(&self) -> DensityMatrix<T> {
        self.reduced_density(&self.qubits.clone())
            .expect("register contains its own qubits")
    }

    /// Partial trace over every qubit not in `keep`. The result is laid out in
    /// the order of `keep`.
    pub fn reduced_density(&self, keep: &[QubitId]) -> Result<DensityMatrix<T>, QsimError> {
        for (i, q) in keep.iter().enumerate() {
            if keep[..i].contains(q) {
                return Err(QsimError::DuplicateQubit(*q));
            }
        }
        let keep_masks = self.masks(keep)?;
        let keep_all: usize = keep_masks.iter().fold(0, |a, m| a | m);
        let k = keep.len();
        let dim = 1usize << k;
        let mut entries = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for rest in 0..self.amps.len() {
            if rest & keep_all != 0 {
                continue;
            }
            for i in 0..dim {
                let ai = self.amps[rest | scatter(i, &keep_masks)];
                if ai.norm_sqr() == T::zero() {
                    continue;
                }
                for j in 0..dim {
                    let aj = self.amps[rest | scatter(j, &keep_masks)];
                    entries[i * dim + j] += ai * aj.conj();
                }
            }
        }
        Ok(DensityMatrix::from_parts(keep.to_vec(), entries))
    }

    /// Human-readable ket expansion, e.g. `0.7071|00> + 0.7071|11>`.
    pub fn ket_string(&self, precision: usize) -> String {
        let n = self.num_qubits();
        let cutoff = T::lit(0.5 * 10f64.powi(-(precision as i32)));
        let mut out = String::new();
        for (idx, a) in self.amps.iter().enumerate() {
            if a.norm() <= cutoff {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            let (re, im) = (a.re.to_f64_lossy(), a.im.to_f64_lossy());
            if im.abs() <= cutoff.to_f64_lossy() {
                let _ = write!(out, "{re:.precision$}");
            } else if re.abs() <= cutoff.to_f64_lossy() {
                let _ = write!(out, "{im:.precision$}i");
            } else {
                let _ = write!(out, "({re:.precision$}{im:+.precision$}i)");
            }
            out.push('|');
            for p in 0..n {
                out.push(if idx & position_mask(n, p) != 0 {
                    '1'
                } else {
                    '0'
                });
            }
            out.push('>');
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}
