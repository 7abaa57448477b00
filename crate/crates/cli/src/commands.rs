//! Command implementations. Each returns a [`Report`] whose verdict decides
//! the exit code, or a [`CliError`] for input problems.

use std::path::{Path, PathBuf};

use irm_core::linalg::{CMatrix, C64};
use irm_core::measurement::{
    apply_outcome, classify_measurement, outcome_probabilities, sample_counts, sample_measurement, spectral_decompose,
    validate_completeness, MeasurementOperatorSet, Normalization, Povm, ProjectorSet, QuantumState,
};
use irm_core::mirror::{
    bell_comparison, build_qubit_mirror, extend_mirror, is_mirror, truth_protocol, verify_probability_preservation,
    MirrorUnitary, MirrorVerdict,
};
use irm_core::reversible::{PhaseVector, UnitaryOperator};
use irm_core::{within, Error};

use crate::format::{OperatorFile, OperatorKind, StateFile};
use crate::report::{Report, Verdict};
use crate::CliError;

/// Settings shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub tol: f64,
    /// Reject non-normalized state files instead of normalizing them.
    pub strict: bool,
}

impl Default for Context {
    fn default() -> Self {
        Context {
            tol: irm_core::DEFAULT_TOL,
            strict: false,
        }
    }
}

/// Splits core errors into input errors (exit 2) and semantic failures,
/// which become a failing report (exit 1).
fn failure(command: &str, err: Error) -> Result<Report, CliError> {
    match err {
        Error::DimensionMismatch { .. }
        | Error::NotSquare { .. }
        | Error::Empty(_)
        | Error::NonFinite { .. }
        | Error::InvalidBellIndex(_)
        | Error::ZeroVector
        | Error::NotNormalized { .. }
        | Error::PhaseCountMismatch { .. } => Err(CliError::Input(err.to_string())),
        other => {
            let mut report = Report::new(command, Verdict::Fail).detail(other.to_string());
            if let Some((name, value)) = error_residual(&other) {
                report = report.residual(name, value);
            }
            Ok(report)
        }
    }
}

fn error_residual(err: &Error) -> Option<(&'static str, f64)> {
    match *err {
        Error::CompletenessViolation { residual } => Some(("completeness", residual)),
        Error::NotUnitary { residual } => Some(("unitarity", residual)),
        Error::NotHermitian { residual } => Some(("hermiticity", residual)),
        Error::OrthogonalityViolation { residual, .. } => Some(("orthogonality", residual)),
        Error::InvalidProjectorSet { residual, .. } => Some(("projector_set", residual)),
        Error::InvalidPovm { residual, .. } => Some(("povm", residual)),
        Error::ZeroProbabilityOutcome { probability, .. } => Some(("outcome_probability", probability)),
        Error::NotBellCompatible { residual, .. } => Some(("commutator", residual)),
        Error::PhaseNotUnimodular { modulus, .. } => Some(("phase_modulus", modulus)),
        _ => None,
    }
}

/// Evaluates `$body` (a `Result<_, irm_core::Error>`), turning a semantic
/// error into an early failing report.
macro_rules! core_try {
    ($command:expr, $body:expr) => {
        match $body {
            Ok(v) => v,
            Err(e) => return failure($command, e),
        }
    };
}

fn load_state(path: &Path, ctx: &Context, notes: &mut Vec<String>) -> Result<QuantumState, CliError> {
    let file = StateFile::read(path)?;
    let mode = if ctx.strict {
        Normalization::Strict
    } else {
        Normalization::Normalize
    };
    let (state, norm) = file.state(mode)?;
    if (norm - 1.0).abs() > irm_core::measurement::NORM_TOL {
        notes.push(format!("warning: state normalized (input norm {norm:?})"));
    }
    Ok(state)
}

fn require_dims(what: &str, expected: usize, found: usize) -> Result<(), CliError> {
    if expected == found {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "{what}: dimension {found} does not match {expected}"
        )))
    }
}

fn with_notes(mut report: Report, notes: Vec<String>) -> Report {
    report.details.extend(notes);
    report
}

/// Checks the completeness relation matching the file's kind.
pub fn validate(path: &Path, ctx: &Context) -> Result<Report, CliError> {
    const CMD: &str = "validate";
    let file = OperatorFile::read(path)?;
    let matrices = file.matrices()?;
    let dim = file.dim;
    let report = match file.kind {
        OperatorKind::MeasurementSet => {
            let set = core_try!(CMD, MeasurementOperatorSet::new(matrices));
            let r = validate_completeness(&set, ctx.tol);
            Report::new(CMD, if r.passed { Verdict::Pass } else { Verdict::Fail })
                .residual("completeness", r.residual)
                .detail("checked: sum_m M_m^dagger M_m = I")
        }
        OperatorKind::ProjectorSet => {
            let r = core_try!(CMD, ProjectorSet::check(&matrices, ctx.tol));
            Report::new(CMD, if r.passed { Verdict::Pass } else { Verdict::Fail })
                .residual("hermiticity", r.hermiticity)
                .residual("orthogonality", r.orthogonality)
                .residual("completeness", r.completeness)
                .detail("checked: P_m = P_m^dagger, P_m P_m' = delta_mm' P_m, sum_m P_m = I")
        }
        OperatorKind::Povm => {
            let r = core_try!(CMD, Povm::check(&matrices, ctx.tol));
            Report::new(CMD, if r.passed { Verdict::Pass } else { Verdict::Fail })
                .residual("hermiticity", r.hermiticity)
                .residual("min_eigenvalue", r.min_eigenvalue)
                .residual("completeness", r.completeness)
                .detail("checked: E_m Hermitian and positive semidefinite, sum_m E_m = I")
        }
        OperatorKind::Unitary => {
            let m = file.single()?;
            let residual = core_try!(CMD, m.unitarity_residual());
            let ok = within(residual, (dim as f64).sqrt(), ctx.tol);
            Report::new(CMD, if ok { Verdict::Pass } else { Verdict::Fail })
                .residual("unitarity", residual)
                .detail("checked: U^dagger U = U U^dagger = I")
        }
        OperatorKind::Observable => {
            let a = file.single()?;
            let herm = core_try!(CMD, a.hermiticity_residual());
            match spectral_decompose(&a, ctx.tol) {
                Ok(obs) => Report::new(CMD, Verdict::Pass)
                    .residual("hermiticity", herm)
                    .residual("reconstruction", obs.reconstruction_residual())
                    .table("eigenvalue", obs.eigenvalues())
                    .table(
                        "multiplicity",
                        obs.spectrum().iter().map(|c| c.multiplicity as f64).collect(),
                    )
                    .detail("checked: A = A^dagger and A = sum_m lambda_m P_m"),
                Err(e) => return failure(CMD, e).map(|r| r.residual("hermiticity", herm)),
            }
        }
    };
    Ok(report.value("kind", file.kind.to_string()).value("dim", dim))
}

fn measurement_set(file: &OperatorFile) -> Result<Vec<CMatrix>, CliError> {
    file.expect_kind(&[
        OperatorKind::MeasurementSet,
        OperatorKind::ProjectorSet,
        OperatorKind::Unitary,
    ])?;
    file.matrices()
}

/// Prints PROJECTIVE, UNITARY_SINGLETON or GENERAL for a complete set.
pub fn classify(path: &Path, ctx: &Context) -> Result<Report, CliError> {
    const CMD: &str = "classify";
    let file = OperatorFile::read(path)?;
    let set = core_try!(CMD, MeasurementOperatorSet::new(measurement_set(&file)?));
    let set = core_try!(CMD, set.certify(ctx.tol));
    let kind = classify_measurement(&set, ctx.tol);
    let residual = set.certificate().map_or(f64::NAN, |c| c.residual);
    Ok(Report::new(CMD, Verdict::Value)
        .value("classification", kind.to_string())
        .residual("completeness", residual))
}

#[derive(Debug, Clone, Default)]
pub struct MeasureOptions {
    pub seed: Option<u64>,
    pub shots: Option<u64>,
    pub outcome: Option<usize>,
}

/// Exact outcome probabilities plus, depending on the options, one chosen
/// outcome, one sampled outcome, or a sampled histogram.
pub fn measure(set_path: &Path, state_path: &Path, opts: &MeasureOptions, ctx: &Context) -> Result<Report, CliError> {
    const CMD: &str = "measure";
    let mut notes = Vec::new();
    let file = OperatorFile::read(set_path)?;
    let set = core_try!(CMD, MeasurementOperatorSet::new(measurement_set(&file)?));
    let psi = load_state(state_path, ctx, &mut notes)?;
    require_dims("state", set.dim(), psi.dim())?;
    let set = core_try!(CMD, set.certify(ctx.tol));
    let probabilities = core_try!(CMD, outcome_probabilities(&set, &psi));
    let mut report = Report::new(CMD, Verdict::Value).probabilities(probabilities.clone());

    match (opts.outcome, opts.shots, opts.seed) {
        (Some(_), Some(_), _) => {
            return Err(CliError::Input("--outcome and --shots are mutually exclusive".into()));
        }
        (Some(m), None, _) => {
            let rec = core_try!(CMD, apply_outcome(&set, &psi, m));
            report = report
                .value("outcome", rec.outcome)
                .value("outcome_probability", rec.probability)
                .state("post_state", rec.post_state.amplitudes());
        }
        (None, Some(_), None) => {
            return Err(CliError::Input("--shots requires --seed".into()));
        }
        (None, Some(shots), Some(seed)) => {
            let counts = core_try!(CMD, sample_counts(&set, &psi, seed, shots));
            let frequencies = counts.iter().map(|&c| c as f64 / shots as f64).collect();
            report = report
                .value("seed", seed)
                .value("shots", shots)
                .value("counts", counts)
                .table("exact", probabilities)
                .table("frequency", frequencies);
        }
        (None, None, Some(seed)) => {
            let rec = core_try!(CMD, sample_measurement(&set, &psi, seed));
            report = report
                .value("seed", seed)
                .value("outcome", rec.outcome)
                .value("outcome_probability", rec.probability)
                .state("post_state", rec.post_state.amplitudes());
        }
        (None, None, None) => {}
    }
    Ok(with_notes(report, notes))
}

#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    pub theta: Option<f64>,
    pub alpha: Option<C64>,
    pub phases: Option<Vec<C64>>,
    pub angles: Option<Vec<f64>>,
    pub projectors: Option<PathBuf>,
    pub out: PathBuf,
}

fn mirror_report(command: &str, verdict: &MirrorVerdict) -> Report {
    let mut report = Report::new(
        command,
        if verdict.is_mirror() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    )
    .table("commutator_norm", verdict.residuals().to_vec())
    .value("mirror", verdict.is_mirror());
    if let MirrorVerdict::Rejected(r) = verdict {
        report = report
            .value("worst_projector", r.worst_projector)
            .residual("commutator", r.worst_residual);
    } else {
        let worst = verdict.residuals().iter().copied().fold(0.0, f64::max);
        report = report.residual("commutator", worst);
    }
    report
}

/// Builds a mirror unitary and writes it as a `unitary` operator file.
///
/// Without `--projectors` this is the qubit mirror `e^{iθ}(α P_0 + α* P_1)`;
/// with it, the phase superposition `Σ α_m P_m` over the given projectors.
pub fn mirror_build(opts: &BuildOptions, ctx: &Context) -> Result<Report, CliError> {
    const CMD: &str = "mirror build";
    let mirror: MirrorUnitary = match &opts.projectors {
        Some(path) => {
            if opts.alpha.is_some() || opts.theta.is_some() {
                return Err(CliError::Input(
                    "--alpha/--theta cannot be combined with --projectors".into(),
                ));
            }
            let file = OperatorFile::read(path)?;
            file.expect_kind(&[OperatorKind::ProjectorSet])?;
            let pset = core_try!(CMD, ProjectorSet::new(file.matrices()?, ctx.tol));
            let phases = match (&opts.phases, &opts.angles) {
                (Some(p), None) => core_try!(CMD, PhaseVector::from_complex(p.clone())),
                (None, Some(a)) => core_try!(CMD, PhaseVector::from_angles(a)),
                _ => {
                    return Err(CliError::Input(
                        "--projectors needs exactly one of --phases or --angles".into(),
                    ))
                }
            };
            core_try!(CMD, extend_mirror(&phases, &pset))
        }
        None => {
            if opts.phases.is_some() || opts.angles.is_some() {
                return Err(CliError::Input("--phases/--angles require --projectors".into()));
            }
            let alpha = opts
                .alpha
                .ok_or_else(|| CliError::Input("--alpha is required without --projectors".into()))?;
            core_try!(CMD, build_qubit_mirror(opts.theta.unwrap_or(0.0), alpha))
        }
    };
    OperatorFile::new(OperatorKind::Unitary, std::slice::from_ref(mirror.matrix())).write(&opts.out)?;
    let verdict = MirrorVerdict::Mirror(mirror.clone());
    Ok(mirror_report(CMD, &verdict)
        .residual("unitarity", mirror.unitary().residual())
        .value("dim", mirror.unitary().dim())
        .detail("operator file written"))
}

fn load_unitary(path: &Path, ctx: &Context) -> Result<Result<UnitaryOperator, Error>, CliError> {
    let file = OperatorFile::read(path)?;
    file.expect_kind(&[OperatorKind::Unitary])?;
    Ok(UnitaryOperator::new(file.single()?, ctx.tol))
}

/// Commutation residuals of a unitary against a projector set and, with a
/// state, the outcome probabilities before and after the unitary.
pub fn mirror_check(
    unitary: &Path,
    projectors: &Path,
    state: Option<&Path>,
    ctx: &Context,
) -> Result<Report, CliError> {
    const CMD: &str = "mirror check";
    let mut notes = Vec::new();
    let u = core_try!(CMD, load_unitary(unitary, ctx)?);
    let pfile = OperatorFile::read(projectors)?;
    pfile.expect_kind(&[OperatorKind::ProjectorSet])?;
    let pset = core_try!(CMD, ProjectorSet::new(pfile.matrices()?, ctx.tol));
    require_dims("projectors", u.dim(), pset.dim())?;
    let verdict = core_try!(CMD, is_mirror(&u, &pset, ctx.tol));
    let mut report = mirror_report(CMD, &verdict);
    if let Some(path) = state {
        let psi = load_state(path, ctx, &mut notes)?;
        require_dims("state", u.dim(), psi.dim())?;
        let pres = core_try!(CMD, verify_probability_preservation(&u, &pset, &psi, ctx.tol));
        report = report
            .table("p", pres.before)
            .table("p_prime", pres.after)
            .residual("max_deviation", pres.max_deviation)
            .value("preserved", pres.preserved);
        if !pres.preserved {
            report = report.fail();
        }
    }
    Ok(with_notes(report, notes))
}

/// Compute with U, uncompute with U†, and report fidelity and ‖U†U − I‖_F.
pub fn truth(unitary: &Path, state: &Path, ctx: &Context) -> Result<Report, CliError> {
    const CMD: &str = "truth";
    let mut notes = Vec::new();
    let u = core_try!(CMD, load_unitary(unitary, ctx)?);
    let psi = load_state(state, ctx, &mut notes)?;
    require_dims("state", u.dim(), psi.dim())?;
    let t = core_try!(CMD, truth_protocol(&u, &psi, ctx.tol));
    let report = Report::new(CMD, if t.passed { Verdict::Pass } else { Verdict::Fail })
        .value("fidelity", t.fidelity)
        .residual("identity", t.identity_residual)
        .residual("fidelity_defect", 1.0 - t.fidelity)
        .state("initial", t.initial.amplitudes())
        .state("computed", t.computed.amplitudes())
        .state("restored", t.restored.amplitudes())
        .detail("E_1 = U^dagger U is the only POVM element");
    Ok(with_notes(report, notes))
}

/// External two-outcome parity POVM against the internal single-outcome
/// POVM for one Bell state.
pub fn bell(index: usize, mirror: Option<&Path>, ctx: &Context) -> Result<Report, CliError> {
    const CMD: &str = "bell";
    if index > 3 {
        return Err(CliError::Input(format!("Bell index {index} out of range 0..=3")));
    }
    let u = match mirror {
        Some(path) => core_try!(CMD, load_unitary(path, ctx)?),
        None => UnitaryOperator::identity(4),
    };
    require_dims("mirror", 4, u.dim())?;
    let mirror = match core_try!(CMD, is_mirror(&u, &ProjectorSet::computational(4), ctx.tol)) {
        MirrorVerdict::Mirror(m) => m,
        MirrorVerdict::Rejected(r) => {
            return failure(
                CMD,
                Error::NotBellCompatible {
                    projector: r.worst_projector,
                    residual: r.worst_residual,
                },
            )
        }
    };
    let cmp = core_try!(CMD, bell_comparison(index, &mirror));
    let verdict = if cmp.passed(ctx.tol) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(Report::new(CMD, verdict)
        .value("bell_state", cmp.bell.to_string())
        .value("internal_probability", cmp.internal_probability)
        .table("external", cmp.external_probabilities.to_vec())
        .table("before", cmp.computational_before)
        .table("after", cmp.computational_after)
        .residual("external_completeness", cmp.external_residual)
        .residual("internal_identity", cmp.internal_residual)
        .residual("preservation_deviation", cmp.preservation_deviation)
        .state("state", cmp.state.amplitudes())
        .detail(format!(
            "external POVM grouping (a documented choice): {}",
            cmp.grouping
        ))
        .detail("internal POVM: the single element E_1 = M^dagger M = I")
        .detail("table rows: external has outcomes m = 0, 1; before/after are the four computational outcomes"))
}
