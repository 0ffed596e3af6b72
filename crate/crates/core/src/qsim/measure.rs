use num_complex::Complex;

use super::{scatter, QsimError, QubitId, StateVector};
use crate::scalar::{Scalar, Tolerance};

/// One surviving outcome of a projective measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementBranch<T> {
    pub outcome: Vec<u8>,
    pub probability: T,
    pub post_state: StateVector<T>,
}

/// Bell basis over `|a b⟩` in outcome order `(s1, s2)`:
/// Φ+ ↦ (0,0), Ψ+ ↦ (0,1), Φ− ↦ (1,0), Ψ− ↦ (1,1).
/// `s1` is the phase bit, `s2` the bit-flip bit.
fn bell_basis<T: Scalar>() -> [([u8; 2], [Complex<T>; 4]); 4] {
    let h = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    let z = Complex::new(T::zero(), T::zero());
    [
        ([0, 0], [h, z, z, h]),
        ([0, 1], [z, h, h, z]),
        ([1, 0], [h, z, z, -h]),
        ([1, 1], [z, h, -h, z]),
    ]
}

impl<T: Scalar> StateVector<T> {
    /// Projective measurement of `q` in the computational basis.
    pub fn measure_computational(
        &self,
        q: QubitId,
        tol: &Tolerance<T>,
    ) -> Result<Vec<MeasurementBranch<T>>, QsimError> {
        let mask = self.masks(&[q])?[0];
        let mut branches = Vec::with_capacity(2);
        for bit in [0u8, 1] {
            let want = if bit == 1 { mask } else { 0 };
            let projected: Vec<Complex<T>> = self
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    if i & mask == want {
                        *a
                    } else {
                        Complex::new(T::zero(), T::zero())
                    }
                })
                .collect();
            if let Some(branch) = self.branch(vec![bit], projected, tol) {
                branches.push(branch);
            }
        }
        Ok(branches)
    }

    /// Bell measurement of the ordered pair `(qa, qb)`.
    pub fn measure_bell(
        &self,
        qa: QubitId,
        qb: QubitId,
        tol: &Tolerance<T>,
    ) -> Result<Vec<MeasurementBranch<T>>, QsimError> {
        if qa == qb {
            return Err(QsimError::SameQubit(qa));
        }
        let masks = self.masks(&[qa, qb])?;
        let both = masks[0] | masks[1];
        let mut branches = Vec::with_capacity(4);
        for (outcome, bell) in bell_basis::<T>() {
            let mut projected = vec![Complex::new(T::zero(), T::zero()); self.amplitudes().len()];
            for base in 0..projected.len() {
                if base & both != 0 {
                    continue;
                }
                let overlap: Complex<T> = (0..4)
                    .map(|ab| bell[ab].conj() * self.amplitudes()[base | scatter(ab, &masks)])
                    .sum();
                for (ab, coeff) in bell.iter().enumerate() {
                    projected[base | scatter(ab, &masks)] = coeff * overlap;
                }
            }
            if let Some(branch) = self.branch(outcome.to_vec(), projected, tol) {
                branches.push(branch);
            }
        }
        Ok(branches)
    }

    fn branch(
        &self,
        outcome: Vec<u8>,
        projected: Vec<Complex<T>>,
        tol: &Tolerance<T>,
    ) -> Option<MeasurementBranch<T>> {
        let probability: T = projected.iter().map(|a| a.norm_sqr()).sum();
        if probability <= tol.prune {
            return None;
        }
        let norm = probability.sqrt();
        let amps = projected.into_iter().map(|a| a.unscale(norm)).collect();
        Some(MeasurementBranch {
            outcome,
            probability,
            post_state: StateVector::from_parts_unchecked(self.qubits().to_vec(), amps),
        })
    }
}
