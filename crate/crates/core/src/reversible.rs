//! Unitaries as reversible, single-outcome generalized measurements.
//!
//! * [`unitary_as_measurement`]: `{M_1 = U}` is a complete set whose only
//!   outcome has probability one and leaves `U|Ψ⟩`.
//! * [`superpose_operators`]: `Σ α_m M_m` over a complete, mutually
//!   orthogonal family with unimodular `α_m` is unitary.
//! * [`phase_superpose_projectors`] / [`exp_observable`]: the projector
//!   special case, `Σ e^{iλ_m} P_m = e^{iA}`.
//! * [`irm_povm`]: the POVM of such a measurement is `{U†U} = {I}`.

use crate::error::{Error, Result};
use crate::linalg::{frobenius_distance, CMatrix, C64};
use crate::measurement::{validate_completeness, MeasurementOperatorSet, Observable, Povm, ProjectorSet, QuantumState};
use crate::within;

/// How far `|α|` may drift from 1.
pub const PHASE_TOL: f64 = 1e-12;

/// A matrix with `U†U = UU† = I` within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    matrix: CMatrix,
    residual: f64,
    tol: f64,
}

impl UnitaryOperator {
    pub fn new(matrix: CMatrix, tol: f64) -> Result<Self> {
        let n = matrix.require_square()?;
        let residual = matrix.unitarity_residual()?;
        if !within(residual, (n as f64).sqrt(), tol) {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { matrix, residual, tol })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: CMatrix::identity(n),
            residual: 0.0,
            tol: crate::DEFAULT_TOL,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// max(‖U†U − I‖_F, ‖UU† − I‖_F) measured at construction.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `U⁻¹ = U†`.
    pub fn inverse(&self) -> UnitaryOperator {
        UnitaryOperator {
            matrix: self.matrix.adjoint(),
            residual: self.residual,
            tol: self.tol,
        }
    }

    pub fn apply(&self, psi: &QuantumState) -> Result<QuantumState> {
        psi.evolve(&self.matrix)
    }
}

/// Unimodular coefficients `α_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    phases: Vec<C64>,
}

impl PhaseVector {
    pub fn from_complex(phases: Vec<C64>) -> Result<Self> {
        for (index, a) in phases.iter().enumerate() {
            let modulus = a.norm();
            if (a.norm_sqr() - 1.0).abs() > PHASE_TOL || !modulus.is_finite() {
                return Err(Error::PhaseNotUnimodular { index, modulus });
            }
        }
        Ok(Self { phases })
    }

    /// `α_m = e^{iλ_m}`.
    pub fn from_angles(angles: &[f64]) -> Result<Self> {
        Self::from_complex(angles.iter().map(|&t| C64::from_polar(1.0, t)).collect())
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.phases
    }
}

/// `{M_1 = U}` as a certified single-outcome measurement.
pub fn unitary_as_measurement(u: &UnitaryOperator) -> MeasurementOperatorSet {
    let set = MeasurementOperatorSet::new(vec![u.matrix.clone()]).expect("square");
    let report = validate_completeness(&set, u.tol);
    debug_assert!(report.passed);
    set.certify(u.tol)
        .unwrap_or_else(|_| unreachable!("unitary with residual {} failed completeness", report.residual))
}

fn check_phase_count(phases: &PhaseVector, operators: usize) -> Result<()> {
    if phases.len() != operators {
        return Err(Error::PhaseCountMismatch {
            phases: phases.len(),
            operators,
        });
    }
    Ok(())
}

fn weighted_sum(operators: &[CMatrix], phases: &PhaseVector) -> CMatrix {
    let n = operators[0].rows();
    operators
        .iter()
        .zip(phases.as_slice())
        .fold(CMatrix::zeros(n, n), |acc, (m, &a)| &acc + &m.scale(a))
}

/// `M = Σ α_m M_m` for a family satisfying completeness and
/// `M_i†M_j = M_i M_j† = 0` (i ≠ j).
///
/// Orthogonality is checked before completeness; the unitarity of the
/// result is then checked on its own.
pub fn superpose_operators(set: &MeasurementOperatorSet, phases: &PhaseVector, tol: f64) -> Result<UnitaryOperator> {
    check_phase_count(phases, set.len())?;
    let ops = set.operators();
    let adjoints: Vec<CMatrix> = ops.iter().map(CMatrix::adjoint).collect();
    for i in 0..ops.len() {
        for j in 0..ops.len() {
            if i == j {
                continue;
            }
            let scale = ops[i].frobenius_norm() * ops[j].frobenius_norm();
            let left = adjoints[i].matmul(&ops[j])?.frobenius_norm();
            let right = ops[i].matmul(&adjoints[j])?.frobenius_norm();
            let residual = left.max(right);
            if !within(residual, scale, tol) {
                return Err(Error::OrthogonalityViolation { i, j, residual });
            }
        }
    }
    let report = validate_completeness(set, tol);
    if !report.passed {
        return Err(Error::CompletenessViolation {
            residual: report.residual,
        });
    }
    UnitaryOperator::new(weighted_sum(ops, phases), tol)
}

/// `P̂ = Σ α_m P_m`, diagonal in any eigenbasis adapted to the projectors.
pub fn phase_superpose_projectors(pset: &ProjectorSet, phases: &PhaseVector) -> Result<UnitaryOperator> {
    check_phase_count(phases, pset.len())?;
    UnitaryOperator::new(weighted_sum(pset.projectors(), phases), pset.tol())
}

/// `e^{iA} = Σ e^{iλ_m} P_m`, built from the spectral projectors.
pub fn exp_observable(obs: &Observable) -> Result<UnitaryOperator> {
    let angles: Vec<f64> = obs.eigenvalues();
    phase_superpose_projectors(obs.projector_set(), &PhaseVector::from_angles(&angles)?)
}

/// The single POVM element `E_1 = U†U`, which is the identity.
pub fn irm_povm(u: &UnitaryOperator) -> Result<Povm> {
    let e = u.matrix.adjoint().matmul(&u.matrix)?;
    let residual = frobenius_distance(&e, &CMatrix::identity(u.dim()))?;
    if !within(residual, (u.dim() as f64).sqrt(), u.tol) {
        return Err(Error::NotUnitary { residual });
    }
    Povm::new(vec![e], u.tol)
}
