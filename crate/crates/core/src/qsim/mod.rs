//! Pure-state simulation over named qubits.
//!
//! Registers are addressed by [`QubitId`], never by position. Internally the
//! amplitudes of a [`StateVector`] are laid out over the ascending id order,
//! with the smallest id as the most significant bit of the basis index.

mod density;
mod gate;
mod measure;
mod named;
mod state;

use std::fmt;

use thiserror::Error;

pub use density::{dm_equal, DensityMatrix};
pub use gate::Gate;
pub use measure::MeasurementBranch;
pub use named::{named_state, SAMPLE_ALIASES};
pub use state::StateVector;

/// Network-wide qubit name (`1`, `2`, `3`, ...).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitId(pub u32);

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for QubitId {
    fn from(id: u32) -> Self {
        QubitId(id)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QsimError {
    #[error("expected {expected} amplitudes, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero vector cannot be normalized")]
    ZeroVector,
    #[error("vector norm {norm} is not within tolerance of 1")]
    NotNormalized { norm: f64 },
    #[error("qubit {0} listed more than once")]
    DuplicateQubit(QubitId),
    #[error("qubit {0} present in both operands")]
    OverlappingQubits(QubitId),
    #[error("qubit {0} is not part of the register")]
    UnknownQubit(QubitId),
    #[error("gate {gate} acts on {expected} qubit(s), {found} given")]
    GateArity {
        gate: Gate,
        expected: usize,
        found: usize,
    },
    #[error("Bell measurement needs two distinct qubits, got {0} twice")]
    SameQubit(QubitId),
    #[error("density matrices have dimensions {left} and {right}")]
    DensityDimension { left: usize, right: usize },
}

/// Bit mask of register position `pos` in an `n`-qubit basis index.
#[inline]
pub(crate) fn position_mask(n: usize, pos: usize) -> usize {
    1 << (n - 1 - pos)
}

/// Scatters the bits of `sub` (k bits, first target most significant) onto
/// the masks of the target positions.
#[inline]
pub(crate) fn scatter(sub: usize, masks: &[usize]) -> usize {
    let k = masks.len();
    masks
        .iter()
        .enumerate()
        .filter(|(t, _)| sub & (1 << (k - 1 - t)) != 0)
        .fold(0, |acc, (_, m)| acc | m)
}
