use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use super::{scatter, QsimError, QubitId, StateVector};
use crate::scalar::Scalar;

/// The fixed gate set: Pauli corrections, Hadamard and the two entangling gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gate {
    X,
    Z,
    H,
    CZ,
    /// Control is the first target, the flipped qubit the second.
    CNOT,
}

impl Gate {
    pub const ALL: [Gate; 5] = [Gate::X, Gate::Z, Gate::H, Gate::CZ, Gate::CNOT];

    pub fn arity(self) -> usize {
        match self {
            Gate::X | Gate::Z | Gate::H => 1,
            Gate::CZ | Gate::CNOT => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Gate::X => "X",
            Gate::Z => "Z",
            Gate::H => "H",
            Gate::CZ => "CZ",
            Gate::CNOT => "CNOT",
        }
    }

    /// Row-major unitary over the target qubits, first target most significant.
    fn matrix<T: Scalar>(self) -> Vec<Complex<T>> {
        let o = Complex::new(T::one(), T::zero());
        let z = Complex::new(T::zero(), T::zero());
        let m = -o;
        match self {
            Gate::X => vec![z, o, o, z],
            Gate::Z => vec![o, z, z, m],
            Gate::H => {
                let h = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
                vec![h, h, h, -h]
            }
            Gate::CZ => vec![
                o, z, z, z, //
                z, o, z, z, //
                z, z, o, z, //
                z, z, z, m,
            ],
            Gate::CNOT => vec![
                o, z, z, z, //
                z, o, z, z, //
                z, z, z, o, //
                z, z, o, z,
            ],
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Gate {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Gate::ALL.into_iter().find(|g| g.name() == s).ok_or(())
    }
}

impl<T: Scalar> StateVector<T> {
    /// Applies `gate` to `targets`, identity elsewhere.
    pub fn apply_gate(&self, gate: Gate, targets: &[QubitId]) -> Result<Self, QsimError> {
        if targets.len() != gate.arity() {
            return Err(QsimError::GateArity {
                gate,
                expected: gate.arity(),
                found: targets.len(),
            });
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(QsimError::DuplicateQubit(targets[0]));
        }
        let masks = self.masks(targets)?;
        Ok(self.apply_matrix(&masks, &gate.matrix()))
    }

    fn apply_matrix(&self, masks: &[usize], matrix: &[Complex<T>]) -> Self {
        let dim = 1usize << masks.len();
        let all: usize = masks.iter().fold(0, |a, m| a | m);
        let mut out = self.amplitudes().to_vec();
        let mut local = vec![Complex::new(T::zero(), T::zero()); dim];
        for base in 0..out.len() {
            if base & all != 0 {
                continue;
            }
            for (i, slot) in local.iter_mut().enumerate() {
                *slot = self.amplitudes()[base | scatter(i, masks)];
            }
            for i in 0..dim {
                let row = &matrix[i * dim..(i + 1) * dim];
                out[base | scatter(i, masks)] = row.iter().zip(&local).map(|(m, a)| m * a).sum();
            }
        }
        Self::from_parts_unchecked(self.qubits().to_vec(), out)
    }
}
