use num_complex::Complex;

use super::{QubitId, StateVector};
use crate::scalar::Scalar;

/// Built-in single-qubit sample aliases, in canonical order.
pub const SAMPLE_ALIASES: [&str; 6] = ["0", "1", "plus", "minus", "plusi", "minusi"];

/// Resolves a sample alias (`0`, `1`, `plus`, `minus`, `plusi`, `minusi`)
/// to the corresponding single-qubit state on `qubit`.
pub fn named_state<T: Scalar>(alias: &str, qubit: QubitId) -> Option<StateVector<T>> {
    let h = T::FRAC_1_SQRT_2();
    let z = T::zero();
    let o = T::one();
    let amps = match alias {
        "0" => [Complex::new(o, z), Complex::new(z, z)],
        "1" => [Complex::new(z, z), Complex::new(o, z)],
        "plus" => [Complex::new(h, z), Complex::new(h, z)],
        "minus" => [Complex::new(h, z), Complex::new(-h, z)],
        "plusi" => [Complex::new(h, z), Complex::new(z, h)],
        "minusi" => [Complex::new(h, z), Complex::new(z, -h)],
        _ => return None,
    };
    StateVector::new(&[qubit], amps.to_vec()).ok()
}
