//! Mirror measurements and the compute/uncompute protocol.
//!
//! A unitary that commutes with every projector of a complete orthogonal set
//! leaves that set's outcome probabilities unchanged. Only that direction is
//! implemented and tested: commuting is sufficient, not necessary.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{commutator, frobenius_distance, CMatrix, C64, ONE, ZERO};
use crate::measurement::{povm_probabilities, DensityMatrix, Normalization, Povm, ProjectorSet, QuantumState};
use crate::reversible::{irm_povm, phase_superpose_projectors, PhaseVector, UnitaryOperator, PHASE_TOL};
use crate::within;

/// A unitary certified to commute with a projector set.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorUnitary {
    unitary: UnitaryOperator,
    reference_projectors: ProjectorSet,
    commutation_residuals: Vec<f64>,
}

impl MirrorUnitary {
    pub fn unitary(&self) -> &UnitaryOperator {
        &self.unitary
    }

    pub fn matrix(&self) -> &CMatrix {
        self.unitary.matrix()
    }

    pub fn reference_projectors(&self) -> &ProjectorSet {
        &self.reference_projectors
    }

    /// ‖[U, P_m]‖_F for each projector.
    pub fn commutation_residuals(&self) -> &[f64] {
        &self.commutation_residuals
    }
}

/// Why a unitary was not accepted as a mirror.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorRejection {
    pub worst_projector: usize,
    pub worst_residual: f64,
    pub commutation_residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MirrorVerdict {
    Mirror(MirrorUnitary),
    Rejected(MirrorRejection),
}

impl MirrorVerdict {
    pub fn is_mirror(&self) -> bool {
        matches!(self, MirrorVerdict::Mirror(_))
    }

    pub fn residuals(&self) -> &[f64] {
        match self {
            MirrorVerdict::Mirror(m) => &m.commutation_residuals,
            MirrorVerdict::Rejected(r) => &r.commutation_residuals,
        }
    }

    pub fn into_mirror(self) -> Option<MirrorUnitary> {
        match self {
            MirrorVerdict::Mirror(m) => Some(m),
            MirrorVerdict::Rejected(_) => None,
        }
    }
}

/// Accepts `u` iff `max_m ‖[U, P_m]‖_F ≤ tol`.
pub fn is_mirror(u: &UnitaryOperator, pset: &ProjectorSet, tol: f64) -> Result<MirrorVerdict> {
    if u.dim() != pset.dim() {
        return Err(Error::dims(pset.dim(), u.dim()));
    }
    let residuals = pset
        .projectors()
        .iter()
        .map(|p| Ok(commutator(u.matrix(), p)?.frobenius_norm()))
        .collect::<Result<Vec<f64>>>()?;
    // First projector attaining the maximum.
    let (worst_projector, worst_residual) = residuals.iter().copied().enumerate().fold(
        (0, f64::NEG_INFINITY),
        |best, cur| if cur.1 > best.1 { cur } else { best },
    );
    if within(worst_residual, 1.0, tol) {
        Ok(MirrorVerdict::Mirror(MirrorUnitary {
            unitary: u.clone(),
            reference_projectors: pset.clone(),
            commutation_residuals: residuals,
        }))
    } else {
        Ok(MirrorVerdict::Rejected(MirrorRejection {
            worst_projector,
            worst_residual,
            commutation_residuals: residuals,
        }))
    }
}

/// Outcome probabilities before and after applying a unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct PreservationReport {
    pub before: Vec<f64>,
    pub after: Vec<f64>,
    pub max_deviation: f64,
    pub preserved: bool,
}

/// Compares `p(m) = ⟨Ψ|P_m|Ψ⟩` with `p(m)' = ⟨UΨ|P_m|UΨ⟩`.
pub fn verify_probability_preservation(
    u: &UnitaryOperator,
    pset: &ProjectorSet,
    psi: &QuantumState,
    tol: f64,
) -> Result<PreservationReport> {
    if u.dim() != pset.dim() {
        return Err(Error::dims(pset.dim(), u.dim()));
    }
    let before = pset.probabilities(psi)?;
    let after = pset.probabilities(&u.apply(psi)?)?;
    let max_deviation = before
        .iter()
        .zip(&after)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(PreservationReport {
        before,
        after,
        max_deviation,
        preserved: max_deviation <= tol,
    })
}

/// `U_D = e^{iθ}(α P_0 + α* P_1)` on C², certified against the computational projectors.
pub fn build_qubit_mirror(theta: f64, alpha: C64) -> Result<MirrorUnitary> {
    let modulus = alpha.norm();
    if (modulus - 1.0).abs() > PHASE_TOL {
        return Err(Error::PhaseNotUnimodular { index: 0, modulus });
    }
    let global = C64::from_polar(1.0, theta);
    let phases = PhaseVector::from_complex(vec![global * alpha, global * alpha.conj()])?;
    extend_mirror(&phases, &ProjectorSet::computational(2))
}

/// `Σ α_m P_m` certified as a mirror of the same projector set.
pub fn extend_mirror(phases: &PhaseVector, pset: &ProjectorSet) -> Result<MirrorUnitary> {
    let u = phase_superpose_projectors(pset, phases)?;
    match is_mirror(&u, pset, pset.tol())? {
        MirrorVerdict::Mirror(m) => Ok(m),
        MirrorVerdict::Rejected(r) => unreachable!(
            "phase superposition failed to commute with projector {} (residual {:e})",
            r.worst_projector, r.worst_residual
        ),
    }
}

/// The four Bell states, indexed 0..=3 in the order Φ+, Φ−, Ψ+, Ψ−.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    pub fn from_index(index: usize) -> Result<Self> {
        Self::ALL.get(index).copied().ok_or(Error::InvalidBellIndex(index))
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Amplitudes over |00⟩, |01⟩, |10⟩, |11⟩.
    pub fn state(self) -> QuantumState {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let amps = match self {
            BellState::PhiPlus => [h, ZERO, ZERO, h],
            BellState::PhiMinus => [h, ZERO, ZERO, -h],
            BellState::PsiPlus => [ZERO, h, h, ZERO],
            BellState::PsiMinus => [ZERO, h, -h, ZERO],
        };
        QuantumState::from_amplitudes(amps.to_vec(), Normalization::Normalize).expect("unit vector")
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellState::PhiPlus => "Phi+",
            BellState::PhiMinus => "Phi-",
            BellState::PsiPlus => "Psi+",
            BellState::PsiMinus => "Psi-",
        })
    }
}

/// How the external two-element POVM is assembled from the computational projectors.
pub const PARITY_GROUPING: &str = "E_0 = P_00 + P_11 (even parity), E_1 = P_01 + P_10 (odd parity)";

/// External two-outcome view of a Bell state next to the internal single-outcome view.
#[derive(Debug, Clone, PartialEq)]
pub struct BellComparison {
    pub bell: BellState,
    pub state: QuantumState,
    pub grouping: &'static str,
    /// `[E_0, E_1]`
    pub external_elements: Vec<CMatrix>,
    pub external_probabilities: [f64; 2],
    /// ‖E_0 + E_1 − I‖_F
    pub external_residual: f64,
    /// `M̂†M̂`
    pub internal_element: CMatrix,
    pub internal_probability: f64,
    /// ‖M̂†M̂ − I‖_F
    pub internal_residual: f64,
    /// Computational-basis probabilities before and after the mirror.
    pub computational_before: Vec<f64>,
    pub computational_after: Vec<f64>,
    pub preservation_deviation: f64,
}

impl BellComparison {
    pub fn passed(&self, tol: f64) -> bool {
        within(self.external_residual, 2.0, tol)
            && within(self.internal_residual, 2.0, tol)
            && (self.internal_probability - 1.0).abs() <= tol
    }
}

fn two_qubit_projector(indices: &[usize]) -> CMatrix {
    let mut d = [ZERO; 4];
    for &k in indices {
        d[k] = ONE;
    }
    CMatrix::from_diag(&d)
}

/// Runs the Bell-state comparison for a mirror on C⁴ referenced to the
/// two-qubit computational projectors.
pub fn bell_comparison(bell_index: usize, mirror: &MirrorUnitary) -> Result<BellComparison> {
    let bell = BellState::from_index(bell_index)?;
    let u = mirror.unitary();
    if u.dim() != 4 {
        return Err(Error::dims(4, u.dim()));
    }
    let computational = ProjectorSet::computational(4);
    if let MirrorVerdict::Rejected(r) = is_mirror(u, &computational, u.tol())? {
        return Err(Error::NotBellCompatible {
            projector: r.worst_projector,
            residual: r.worst_residual,
        });
    }

    let state = bell.state();
    let rho = DensityMatrix::from_pure(&state);
    let id = CMatrix::identity(4);

    let e0 = two_qubit_projector(&[0, 3]);
    let e1 = two_qubit_projector(&[1, 2]);
    let external_residual = frobenius_distance(&(&e0 + &e1), &id)?;
    let external = Povm::new(vec![e0, e1], u.tol())?;
    let ext = povm_probabilities(&external, &rho)?;

    let internal = irm_povm(u)?;
    let internal_element = internal.elements()[0].clone();
    let internal_probability = povm_probabilities(&internal, &rho)?[0];
    let internal_residual = frobenius_distance(&internal_element, &id)?;

    let preservation = verify_probability_preservation(u, &computational, &state, u.tol())?;

    Ok(BellComparison {
        bell,
        state,
        grouping: PARITY_GROUPING,
        external_elements: external.elements().to_vec(),
        external_probabilities: [ext[0], ext[1]],
        external_residual,
        internal_element,
        internal_probability,
        internal_residual,
        computational_before: preservation.before,
        computational_after: preservation.after,
        preservation_deviation: preservation.max_deviation,
    })
}

/// Record of `|Ψ⟩ → U|Ψ⟩ → U†U|Ψ⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthProtocolTranscript {
    pub initial: QuantumState,
    pub computed: QuantumState,
    pub restored: QuantumState,
    /// |⟨Ψ_initial|Ψ_restored⟩| with no renormalization in between.
    pub fidelity: f64,
    /// `E_1 = U†U`
    pub povm_element: CMatrix,
    /// ‖E_1 − I‖_F
    pub identity_residual: f64,
    pub passed: bool,
}

/// Computes with `U`, uncomputes with `U† = U⁻¹`, and records the single
/// POVM element `U†U`.
pub fn truth_protocol(u: &UnitaryOperator, psi: &QuantumState, tol: f64) -> Result<TruthProtocolTranscript> {
    if u.dim() != psi.dim() {
        return Err(Error::dims(u.dim(), psi.dim()));
    }
    let inverse = u.inverse();
    let computed_raw = u.matrix().apply(psi.amplitudes())?;
    let restored_raw = inverse.matrix().apply(&computed_raw)?;
    let fidelity = psi.amplitudes().inner(&restored_raw)?.norm();

    let povm_element = inverse.matrix().matmul(u.matrix())?;
    let identity_residual = frobenius_distance(&povm_element, &CMatrix::identity(u.dim()))?;
    let passed = fidelity >= 1.0 - tol && within(identity_residual, 1.0, tol);

    Ok(TruthProtocolTranscript {
        initial: psi.clone(),
        computed: QuantumState::new(computed_raw, Normalization::Normalize)?,
        restored: QuantumState::new(restored_raw, Normalization::Normalize)?,
        fidelity: fidelity.min(1.0),
        povm_element,
        identity_residual,
        passed,
    })
}
