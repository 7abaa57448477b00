//! Generalized, projective and POVM measurements on pure states.
//!
//! A [`MeasurementOperatorSet`] only becomes usable for measurement after it
//! has passed the completeness check `Σ M_m†M_m = I` (see
//! [`MeasurementOperatorSet::certify`]). Outcomes are the dense labels
//! `0..N`, in the order the operators were supplied.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{frobenius_distance, hermitian_eig, CMatrix, CVector, C64, ZERO};
use crate::{within, DEFAULT_CLUSTER_TOL, P_FLOOR};

/// How far a state's norm may drift from 1 in strict mode.
pub const NORM_TOL: f64 = 1e-12;

/// Lowest eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;

/// What [`QuantumState::new`] does with an input vector whose norm is not 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Reject unless `|‖Ψ‖ − 1| ≤ NORM_TOL`.
    Strict,
    /// Divide by the norm; only the zero vector is rejected.
    Normalize,
}

/// A normalized pure state |Ψ⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: CVector,
}

impl QuantumState {
    pub fn new(amplitudes: CVector, mode: Normalization) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        if mode == Normalization::Strict && (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        let amplitudes = if norm == 1.0 {
            amplitudes
        } else {
            amplitudes.scale(C64::new(1.0 / norm, 0.0))
        };
        Ok(Self { amplitudes })
    }

    pub fn from_amplitudes(amplitudes: Vec<C64>, mode: Normalization) -> Result<Self> {
        Self::new(CVector::new(amplitudes)?, mode)
    }

    /// Computational basis state |index⟩.
    pub fn basis(dim: usize, index: usize) -> Self {
        Self {
            amplitudes: CVector::basis(dim, index),
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.dim()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn inner(&self, other: &QuantumState) -> Result<C64> {
        self.amplitudes.inner(&other.amplitudes)
    }

    /// |⟨self|other⟩|, clamped to [0, 1].
    pub fn fidelity(&self, other: &QuantumState) -> Result<f64> {
        Ok(self.inner(other)?.norm().min(1.0))
    }

    /// Applies `op` and renormalizes.
    pub fn evolve(&self, op: &CMatrix) -> Result<QuantumState> {
        QuantumState::new(op.apply(&self.amplitudes)?, Normalization::Normalize)
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: CMatrix::outer(&self.amplitudes, &self.amplitudes),
        }
    }
}

/// A density matrix ρ: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix, tol: f64) -> Result<Self> {
        matrix.require_square()?;
        let herm = matrix.hermiticity_residual()?;
        if !within(herm, matrix.frobenius_norm(), tol) {
            return Err(Error::InvalidDensityMatrix {
                reason: "not Hermitian",
                residual: herm,
            });
        }
        let trace_err = (matrix.trace() - C64::new(1.0, 0.0)).norm();
        if trace_err > 1e-10 {
            return Err(Error::InvalidDensityMatrix {
                reason: "trace differs from 1",
                residual: trace_err,
            });
        }
        let min_eig = hermitian_eig(&matrix, tol)?[0].value;
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidDensityMatrix {
                reason: "negative eigenvalue",
                residual: -min_eig,
            });
        }
        Ok(Self { matrix })
    }

    pub fn from_pure(state: &QuantumState) -> Self {
        state.density_matrix()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// Outcome of a completeness check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompletenessReport {
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
}

/// A collection `{M_m}` of square operators on a common space.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOperatorSet {
    dim: usize,
    operators: Vec<CMatrix>,
    certified: Option<CompletenessReport>,
}

impl MeasurementOperatorSet {
    /// Builds an uncertified set. Only shapes are checked here.
    pub fn new(operators: Vec<CMatrix>) -> Result<Self> {
        let first = operators.first().ok_or(Error::Empty("operator set"))?;
        let dim = first.require_square()?;
        for op in &operators {
            let n = op.require_square()?;
            if n != dim {
                return Err(Error::dims(dim, n));
            }
        }
        Ok(Self {
            dim,
            operators,
            certified: None,
        })
    }

    /// Builds a set and certifies it in one step.
    pub fn complete(operators: Vec<CMatrix>, tol: f64) -> Result<Self> {
        Self::new(operators)?.certify(tol)
    }

    /// Returns the same set marked usable for measurement, or the completeness residual.
    pub fn certify(self, tol: f64) -> Result<Self> {
        let report = validate_completeness(&self, tol);
        if !report.passed {
            return Err(Error::CompletenessViolation {
                residual: report.residual,
            });
        }
        Ok(Self {
            certified: Some(report),
            ..self
        })
    }

    pub(crate) fn certified_unchecked(operators: Vec<CMatrix>, residual: f64, tol: f64) -> Self {
        let dim = operators[0].rows();
        Self {
            dim,
            operators,
            certified: Some(CompletenessReport {
                residual,
                tol,
                passed: true,
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn certificate(&self) -> Option<CompletenessReport> {
        self.certified
    }

    pub fn is_certified(&self) -> bool {
        self.certified.is_some()
    }

    /// ‖Σ M_m†M_m − I‖_F
    pub fn completeness_residual(&self) -> f64 {
        let sum = self
            .operators
            .iter()
            .map(|m| m.adjoint().matmul(m).expect("square operators"))
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, e| &acc + &e);
        frobenius_distance(&sum, &CMatrix::identity(self.dim)).expect("same shape")
    }

    fn require_certified(&self) -> Result<()> {
        if self.is_certified() {
            Ok(())
        } else {
            Err(Error::IncompleteSet)
        }
    }
}

/// Checks `Σ M_m†M_m = I` within `tol`.
pub fn validate_completeness(set: &MeasurementOperatorSet, tol: f64) -> CompletenessReport {
    let residual = set.completeness_residual();
    CompletenessReport {
        residual,
        tol,
        passed: within(residual, (set.dim as f64).sqrt(), tol),
    }
}

fn require_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::dims(expected, found))
    }
}

/// Born-rule probabilities `p(m) = ⟨Ψ|M_m†M_m|Ψ⟩ = ‖M_m|Ψ⟩‖²`.
pub fn outcome_probabilities(set: &MeasurementOperatorSet, psi: &QuantumState) -> Result<Vec<f64>> {
    set.require_certified()?;
    require_dim(set.dim, psi.dim())?;
    set.operators
        .iter()
        .map(|m| Ok(m.apply(psi.amplitudes())?.norm_sqr()))
        .collect()
}

/// One realized outcome together with the state it leaves behind.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub outcome: usize,
    pub probability: f64,
    pub post_state: QuantumState,
}

/// Post-measurement state `M_m|Ψ⟩ / sqrt(p(m))` for a chosen outcome.
pub fn apply_outcome(set: &MeasurementOperatorSet, psi: &QuantumState, m: usize) -> Result<MeasurementRecord> {
    set.require_certified()?;
    require_dim(set.dim, psi.dim())?;
    let op = set.operators.get(m).ok_or(Error::UnknownOutcome {
        outcome: m,
        count: set.len(),
    })?;
    let image = op.apply(psi.amplitudes())?;
    let probability = image.norm_sqr();
    if probability <= P_FLOOR {
        return Err(Error::ZeroProbabilityOutcome {
            outcome: m,
            probability,
        });
    }
    let post = image.scale(C64::new(1.0 / probability.sqrt(), 0.0));
    Ok(MeasurementRecord {
        outcome: m,
        probability: probability.clamp(0.0, 1.0),
        post_state: QuantumState::new(post, Normalization::Normalize)?,
    })
}

/// Inverse-CDF lookup in label order. `u` must lie in [0, 1).
///
/// Rounding can leave the cumulative sum just below `u`; the last outcome
/// with probability above the floor absorbs that remainder.
pub fn pick_outcome(probabilities: &[f64], u: f64) -> usize {
    let mut cumulative = 0.0;
    for (m, &p) in probabilities.iter().enumerate() {
        cumulative += p.max(0.0);
        if u < cumulative {
            return m;
        }
    }
    probabilities
        .iter()
        .rposition(|&p| p > P_FLOOR)
        .unwrap_or(probabilities.len() - 1)
}

/// The generator behind every sampling routine: ChaCha8 seeded from a `u64`.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws one outcome with a generator seeded from `seed` and returns its record.
pub fn sample_measurement(set: &MeasurementOperatorSet, psi: &QuantumState, seed: u64) -> Result<MeasurementRecord> {
    let probabilities = outcome_probabilities(set, psi)?;
    let u: f64 = seeded_rng(seed).random();
    apply_outcome(set, psi, pick_outcome(&probabilities, u))
}

/// Outcome histogram over `shots` independent draws from one seeded stream.
pub fn sample_counts(set: &MeasurementOperatorSet, psi: &QuantumState, seed: u64, shots: u64) -> Result<Vec<u64>> {
    let probabilities = outcome_probabilities(set, psi)?;
    let mut rng = seeded_rng(seed);
    let mut counts = vec![0u64; probabilities.len()];
    for _ in 0..shots {
        counts[pick_outcome(&probabilities, rng.random())] += 1;
    }
    Ok(counts)
}

/// Residuals of the projector-set invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectorReport {
    /// max_m ‖P_m − P_m†‖_F
    pub hermiticity: f64,
    /// max_{m,m'} ‖P_m P_m' − δ_mm' P_m‖_F
    pub orthogonality: f64,
    /// ‖Σ_m P_m − I‖_F
    pub completeness: f64,
    pub passed: bool,
}

/// A complete set of orthogonal projectors `{P_m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorSet {
    dim: usize,
    projectors: Vec<CMatrix>,
    tol: f64,
}

impl ProjectorSet {
    /// Measures every projector-set invariant without rejecting anything.
    pub fn check(projectors: &[CMatrix], tol: f64) -> Result<ProjectorReport> {
        let set = MeasurementOperatorSet::new(projectors.to_vec())?;
        let dim = set.dim;
        let mut hermiticity = 0.0f64;
        let mut orthogonality = 0.0f64;
        let mut sum = CMatrix::zeros(dim, dim);
        let mut passed = true;
        for (i, p) in projectors.iter().enumerate() {
            let scale = p.frobenius_norm();
            let h = p.hermiticity_residual()?;
            passed &= within(h, scale, tol);
            hermiticity = hermiticity.max(h);
            for (j, q) in projectors.iter().enumerate() {
                let product = p.matmul(q)?;
                let r = if i == j {
                    frobenius_distance(&product, p)?
                } else {
                    product.frobenius_norm()
                };
                passed &= within(r, scale, tol);
                orthogonality = orthogonality.max(r);
            }
            sum = &sum + p;
        }
        let completeness = frobenius_distance(&sum, &CMatrix::identity(dim))?;
        passed &= within(completeness, (dim as f64).sqrt(), tol);
        Ok(ProjectorReport {
            hermiticity,
            orthogonality,
            completeness,
            passed,
        })
    }

    pub fn new(projectors: Vec<CMatrix>, tol: f64) -> Result<Self> {
        let report = Self::check(&projectors, tol)?;
        if !report.passed {
            let (reason, residual) = [
                ("projector not Hermitian", report.hermiticity),
                ("projectors not orthogonal and idempotent", report.orthogonality),
                ("projectors do not sum to the identity", report.completeness),
            ]
            .into_iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("three candidates");
            return Err(Error::InvalidProjectorSet {
                reason: reason.to_string(),
                residual,
            });
        }
        Ok(Self {
            dim: projectors[0].rows(),
            projectors,
            tol,
        })
    }

    /// Rank-one projectors onto the computational basis of dimension `dim`.
    pub fn computational(dim: usize) -> Self {
        let projectors = (0..dim)
            .map(|k| {
                let mut d = vec![ZERO; dim];
                d[k] = C64::new(1.0, 0.0);
                CMatrix::from_diag(&d)
            })
            .collect();
        Self {
            dim,
            projectors,
            tol: crate::DEFAULT_TOL,
        }
    }

    /// Rank-one projectors onto the vectors of an orthonormal basis.
    pub fn from_basis(vectors: &[CVector], tol: f64) -> Result<Self> {
        Self::new(vectors.iter().map(CMatrix::projector_onto).collect(), tol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// The same projectors as a certified measurement set.
    pub fn to_measurement_set(&self) -> MeasurementOperatorSet {
        let set = MeasurementOperatorSet::new(self.projectors.clone()).expect("validated shapes");
        let residual = set.completeness_residual();
        MeasurementOperatorSet::certified_unchecked(self.projectors.clone(), residual, self.tol)
    }

    /// `p(m) = ⟨Ψ|P_m|Ψ⟩`
    pub fn probabilities(&self, psi: &QuantumState) -> Result<Vec<f64>> {
        require_dim(self.dim, psi.dim())?;
        self.projectors
            .iter()
            .map(|p| Ok(p.expectation(psi.amplitudes())?.re))
            .collect()
    }
}

/// One eigenspace of an observable.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralComponent {
    pub eigenvalue: f64,
    pub projector: CMatrix,
    pub multiplicity: usize,
}

/// A Hermitian operator with its spectral decomposition `A = Σ λ_m P_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: CMatrix,
    spectrum: Vec<SpectralComponent>,
    projectors: ProjectorSet,
    eigenbasis: CMatrix,
    reconstruction_residual: f64,
}

impl Observable {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Eigenspaces in ascending eigenvalue order.
    pub fn spectrum(&self) -> &[SpectralComponent] {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum.iter().map(|c| c.eigenvalue).collect()
    }

    pub fn projector_set(&self) -> &ProjectorSet {
        &self.projectors
    }

    /// Unitary whose columns are the orthonormal eigenvectors, grouped by eigenspace.
    pub fn eigenbasis(&self) -> &CMatrix {
        &self.eigenbasis
    }

    /// ‖A − Σ λ_m P_m‖_F
    pub fn reconstruction_residual(&self) -> f64 {
        self.reconstruction_residual
    }
}

/// Spectral decomposition with the default eigenvalue clustering tolerance.
pub fn spectral_decompose(a: &CMatrix, tol: f64) -> Result<Observable> {
    spectral_decompose_clustered(a, tol, DEFAULT_CLUSTER_TOL)
}

/// Spectral decomposition; eigenvalues within `cluster_tol` of a cluster's
/// first member share one eigenspace whose eigenvalue is the cluster mean.
pub fn spectral_decompose_clustered(a: &CMatrix, tol: f64, cluster_tol: f64) -> Result<Observable> {
    let n = a.require_square()?;
    let pairs = hermitian_eig(a, tol)?;

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (k, pair) in pairs.iter().enumerate() {
        match clusters.last_mut() {
            Some(c) if (pair.value - pairs[c[0]].value).abs() <= cluster_tol => c.push(k),
            _ => clusters.push(vec![k]),
        }
    }

    let mut spectrum = Vec::with_capacity(clusters.len());
    let mut reconstruction = CMatrix::zeros(n, n);
    for members in &clusters {
        let eigenvalue = members.iter().map(|&k| pairs[k].value).sum::<f64>() / members.len() as f64;
        let projector = members
            .iter()
            .map(|&k| CMatrix::outer(&pairs[k].vector, &pairs[k].vector))
            .fold(CMatrix::zeros(n, n), |acc, p| &acc + &p);
        reconstruction = &reconstruction + &projector.scale(C64::new(eigenvalue, 0.0));
        spectrum.push(SpectralComponent {
            eigenvalue,
            projector,
            multiplicity: members.len(),
        });
    }

    let reconstruction_residual = frobenius_distance(a, &reconstruction)?;
    if !within(reconstruction_residual, a.frobenius_norm(), tol) {
        return Err(Error::SpectralReconstruction {
            residual: reconstruction_residual,
        });
    }
    let projectors = ProjectorSet::new(spectrum.iter().map(|c| c.projector.clone()).collect(), tol)?;

    let mut basis = Vec::with_capacity(n * n);
    for i in 0..n {
        for pair in &pairs {
            basis.push(pair.vector[i]);
        }
    }
    let eigenbasis = CMatrix::new(n, n, basis)?;

    Ok(Observable {
        matrix: a.clone(),
        spectrum,
        projectors,
        eigenbasis,
        reconstruction_residual,
    })
}

/// Residuals of the POVM invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PovmReport {
    /// max_m ‖E_m − E_m†‖_F
    pub hermiticity: f64,
    /// min over m of the smallest eigenvalue of E_m
    pub min_eigenvalue: f64,
    /// ‖Σ_m E_m − I‖_F
    pub completeness: f64,
    pub passed: bool,
}

/// A positive operator-valued measure `{E_m}` with `Σ E_m = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    elements: Vec<CMatrix>,
    tol: f64,
}

impl Povm {
    pub fn check(elements: &[CMatrix], tol: f64) -> Result<PovmReport> {
        let dim = MeasurementOperatorSet::new(elements.to_vec())?.dim;
        let mut hermiticity = 0.0f64;
        let mut min_eigenvalue = f64::INFINITY;
        let mut passed = true;
        let mut sum = CMatrix::zeros(dim, dim);
        for e in elements {
            let h = e.hermiticity_residual()?;
            hermiticity = hermiticity.max(h);
            if within(h, e.frobenius_norm(), tol) {
                let lowest = hermitian_eig(e, tol)?[0].value;
                min_eigenvalue = min_eigenvalue.min(lowest);
                passed &= lowest >= -PSD_TOL;
            } else {
                passed = false;
            }
            sum = &sum + e;
        }
        let completeness = frobenius_distance(&sum, &CMatrix::identity(dim))?;
        passed &= within(completeness, (dim as f64).sqrt(), tol);
        Ok(PovmReport {
            hermiticity,
            min_eigenvalue,
            completeness,
            passed,
        })
    }

    pub fn new(elements: Vec<CMatrix>, tol: f64) -> Result<Self> {
        let report = Self::check(&elements, tol)?;
        if !report.passed {
            let (reason, residual) = if !within(report.hermiticity, 1.0, tol) {
                ("element not Hermitian", report.hermiticity)
            } else if report.min_eigenvalue < -PSD_TOL {
                ("element not positive semidefinite", -report.min_eigenvalue)
            } else {
                ("elements do not sum to the identity", report.completeness)
            };
            return Err(Error::InvalidPovm {
                reason: reason.to_string(),
                residual,
            });
        }
        Ok(Self {
            dim: elements[0].rows(),
            elements,
            tol,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }
}

/// `E_m = M_m†M_m` for a certified set.
pub fn povm_from_operators(set: &MeasurementOperatorSet) -> Result<Povm> {
    set.require_certified()?;
    let tol = set.certified.map_or(crate::DEFAULT_TOL, |c| c.tol);
    let elements = set
        .operators
        .iter()
        .map(|m| m.adjoint().matmul(m))
        .collect::<Result<Vec<_>>>()?;
    Povm::new(elements, tol)
}

/// `p(m) = tr(E_m ρ)`.
pub fn povm_probabilities(povm: &Povm, rho: &DensityMatrix) -> Result<Vec<f64>> {
    require_dim(povm.dim, rho.dim())?;
    povm.elements
        .iter()
        .map(|e| {
            let p = e.matmul(rho.matrix())?.trace();
            debug_assert!(p.im.abs() <= 1e-10, "tr(E ρ) has imaginary part {}", p.im);
            Ok(p.re)
        })
        .collect()
}

/// Which special case a complete operator set falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementKind {
    Projective,
    UnitarySingleton,
    General,
}

impl fmt::Display for MeasurementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasurementKind::Projective => "PROJECTIVE",
            MeasurementKind::UnitarySingleton => "UNITARY_SINGLETON",
            MeasurementKind::General => "GENERAL",
        })
    }
}

/// Projective when every operator is a Hermitian idempotent and they are
/// mutually orthogonal; a unitary singleton when the set is one unitary;
/// general otherwise.
pub fn classify_measurement(set: &MeasurementOperatorSet, tol: f64) -> MeasurementKind {
    let projective = ProjectorSet::check(&set.operators, tol).is_ok_and(|r| r.passed);
    if projective {
        return MeasurementKind::Projective;
    }
    if let [only] = set.operators.as_slice() {
        let n = only.rows() as f64;
        if only.unitarity_residual().is_ok_and(|r| within(r, n.sqrt(), tol)) {
            return MeasurementKind::UnitarySingleton;
        }
    }
    MeasurementKind::General
}
