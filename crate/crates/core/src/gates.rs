//! Fixed gates used by the bundled examples and tests.
//!
//! Two-qubit matrices use the ordering |q0 q1⟩ with q0 the most significant bit.

use crate::linalg::{CMatrix, C64, I, ONE, ZERO};

pub fn pauli_x() -> CMatrix {
    CMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).expect("2x2")
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]]).expect("2x2")
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_diag(&[ONE, -ONE])
}

pub fn hadamard() -> CMatrix {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    CMatrix::from_rows(&[vec![h, h], vec![h, -h]]).expect("2x2")
}

/// Controlled-NOT with the first qubit as control.
pub fn cnot() -> CMatrix {
    CMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0, 0.0],
    ])
    .expect("4x4")
}

/// CNOT·(H⊗I): maps |00⟩ to (|00⟩ + |11⟩)/√2.
pub fn bell_circuit() -> CMatrix {
    &cnot() * &hadamard().kron(&CMatrix::identity(2))
}
