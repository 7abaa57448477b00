//! Regenerates the bundled corpus: `cargo run -p irm-cli --example make_corpus`.

use std::path::Path;

use irm_cli::format::{OperatorFile, OperatorKind, StateFile};
use irm_core::gates;
use irm_core::linalg::{CMatrix, CVector, C64};
use irm_core::measurement::{Normalization, ProjectorSet, QuantumState};
use irm_core::mirror::BellState;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn ops(dir: &Path, name: &str, kind: OperatorKind, matrices: &[CMatrix]) {
    OperatorFile::new(kind, matrices)
        .write(&dir.join(format!("{name}.json")))
        .expect("write operator file");
}

fn state(dir: &Path, name: &str, psi: &QuantumState) {
    std::fs::write(dir.join(format!("{name}.json")), StateFile::new(psi).to_json()).expect("write state file");
}

fn real(rows: &[&[f64]]) -> CMatrix {
    CMatrix::from_real_rows(rows).unwrap()
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    std::fs::create_dir_all(&dir).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;

    ops(
        &dir,
        "projectors_2",
        OperatorKind::ProjectorSet,
        ProjectorSet::computational(2).projectors(),
    );
    ops(
        &dir,
        "projectors_4",
        OperatorKind::ProjectorSet,
        ProjectorSet::computational(4).projectors(),
    );
    let plus = CVector::new(vec![c(s, 0.0), c(s, 0.0)]).unwrap();
    let minus = CVector::new(vec![c(s, 0.0), c(-s, 0.0)]).unwrap();
    ops(
        &dir,
        "projectors_pm",
        OperatorKind::ProjectorSet,
        &[CMatrix::projector_onto(&plus), CMatrix::projector_onto(&minus)],
    );

    ops(&dir, "unitary_i", OperatorKind::Unitary, &[CMatrix::identity(2)]);
    ops(&dir, "unitary_x", OperatorKind::Unitary, &[gates::pauli_x()]);
    ops(&dir, "unitary_y", OperatorKind::Unitary, &[gates::pauli_y()]);
    ops(&dir, "unitary_z", OperatorKind::Unitary, &[gates::pauli_z()]);
    ops(&dir, "unitary_h", OperatorKind::Unitary, &[gates::hadamard()]);
    ops(
        &dir,
        "unitary_bell_circuit",
        OperatorKind::Unitary,
        &[gates::bell_circuit()],
    );
    let phase = CMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(1.0, 0.0)]);
    ops(&dir, "mirror_diag_1ii1", OperatorKind::Unitary, &[phase]);
    ops(
        &dir,
        "non_unitary",
        OperatorKind::Unitary,
        &[real(&[&[1.0, 1.0], &[0.0, 1.0]])],
    );

    ops(&dir, "singleton_x", OperatorKind::MeasurementSet, &[gates::pauli_x()]);
    ops(
        &dir,
        "general_set",
        OperatorKind::MeasurementSet,
        &[real(&[&[0.0, 1.0], &[0.0, 0.0]]), real(&[&[1.0, 0.0], &[0.0, 0.0]])],
    );
    ops(
        &dir,
        "invalid_set",
        OperatorKind::MeasurementSet,
        &[real(&[&[1.0, 0.0], &[0.0, 0.0]])],
    );

    // Trine: E_k = (2/3)|t_k><t_k| for three real unit vectors 120 degrees apart.
    let trine: Vec<CMatrix> = (0..3)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            let t = CVector::new(vec![c(a.cos(), 0.0), c(a.sin(), 0.0)]).unwrap();
            CMatrix::projector_onto(&t).scale(c(2.0 / 3.0, 0.0))
        })
        .collect();
    ops(&dir, "povm_trine", OperatorKind::Povm, &trine);
    ops(&dir, "observable_x", OperatorKind::Observable, &[gates::pauli_x()]);

    let amps = |v: Vec<C64>| QuantumState::from_amplitudes(v, Normalization::Strict).unwrap();
    state(&dir, "state_0", &QuantumState::basis(2, 0));
    state(&dir, "state_1", &QuantumState::basis(2, 1));
    state(&dir, "state_plus", &amps(vec![c(s, 0.0), c(s, 0.0)]));
    state(&dir, "state_00", &QuantumState::basis(4, 0));
    for bell in BellState::ALL {
        let name = ["bell_phi_plus", "bell_phi_minus", "bell_psi_plus", "bell_psi_minus"][bell.index()];
        state(&dir, name, &bell.state());
    }
    // Deliberately unnormalized (norm 5) to exercise the normalization warning.
    std::fs::write(
        dir.join("state_unnormalized.json"),
        "{\n  \"schema_version\": \"1\",\n  \"dim\": 2,\n  \"amplitudes\": [\n    [\n      3.0000000000000000e0,\n      0.0000000000000000e0\n    ],\n    [\n      0.0000000000000000e0,\n      4.0000000000000000e0\n    ]\n  ]\n}\n",
    )
    .unwrap();
}
