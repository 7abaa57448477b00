//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run alone with `cargo test -p irm-cli --test acceptance`.

mod common;

use std::path::Path;

use irm_cli::format::{OperatorFile, OperatorKind};
use irm_core::linalg::{expm_oracle, frobenius_distance, CMatrix, C64, I};
use irm_core::measurement::{
    apply_outcome, outcome_probabilities, sample_counts, seeded_rng, spectral_decompose, validate_completeness,
    MeasurementOperatorSet, Povm, ProjectorSet, QuantumState,
};
use irm_core::mirror::{
    bell_comparison, build_qubit_mirror, extend_mirror, is_mirror, truth_protocol, verify_probability_preservation,
    BellState, MirrorUnitary,
};
use irm_core::reversible::{exp_observable, superpose_operators, unitary_as_measurement, PhaseVector, UnitaryOperator};
use irm_core::{gates, random, Error, DEFAULT_TOL};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus(name: &str) -> OperatorFile {
    OperatorFile::read(&common::crate_dir().join("corpus").join(name)).expect("corpus file")
}

fn identity_defects(m: &CMatrix) -> (f64, f64) {
    let n = m.rows();
    let id = CMatrix::identity(n);
    let left = frobenius_distance(&(&m.adjoint() * m), &id).unwrap();
    let right = frobenius_distance(&(m * &m.adjoint()), &id).unwrap();
    (left, right)
}

fn criterion_1() -> Outcome {
    const TOL: f64 = 1e-12;
    let mut worst = 0.0f64;
    for name in ["projectors_2.json", "projectors_4.json", "projectors_pm.json"] {
        let r = ProjectorSet::check(&corpus(name).matrices().unwrap(), DEFAULT_TOL).map_err(|e| e.to_string())?;
        for v in [r.hermiticity, r.orthogonality, r.completeness] {
            ensure(v <= TOL, || format!("{name}: residual {v:e}"))?;
            worst = worst.max(v);
        }
    }
    for name in [
        "singleton_x.json",
        "general_set.json",
        "unitary_x.json",
        "unitary_y.json",
        "unitary_z.json",
        "unitary_h.json",
        "unitary_i.json",
        "unitary_bell_circuit.json",
        "mirror_diag_1ii1.json",
    ] {
        let set = MeasurementOperatorSet::new(corpus(name).matrices().unwrap()).unwrap();
        let r = validate_completeness(&set, DEFAULT_TOL);
        ensure(r.residual <= TOL, || {
            format!("{name}: completeness residual {:e}", r.residual)
        })?;
        worst = worst.max(r.residual);
    }
    let povm = Povm::check(&corpus("povm_trine.json").matrices().unwrap(), DEFAULT_TOL).unwrap();
    ensure(povm.completeness <= TOL, || {
        format!("trine POVM residual {:e}", povm.completeness)
    })?;
    worst = worst.max(povm.completeness);

    let invalid = MeasurementOperatorSet::new(corpus("invalid_set.json").matrices().unwrap()).unwrap();
    let r = validate_completeness(&invalid, DEFAULT_TOL);
    ensure(!r.passed && r.residual >= 0.1, || {
        format!("invalid set residual {}", r.residual)
    })?;
    Ok(format!(
        "worst bundled residual {worst:e}; invalid set residual {}",
        r.residual
    ))
}

fn criterion_2() -> Outcome {
    let mut rng = seeded_rng(2);
    let mut min_p = f64::INFINITY;
    let mut worst_sum = 0.0f64;
    const PAIRS: usize = 1000;
    for _ in 0..PAIRS {
        let n = rng.random_range(1..=16);
        let count = rng.random_range(1..=5);
        let set = random::complete_set(&mut rng, n, count);
        let psi = random::state(&mut rng, n);
        let p = outcome_probabilities(&set, &psi).map_err(|e| e.to_string())?;
        // Independent check of the Born rule via <psi|M†M|psi>.
        for (m, op) in set.operators().iter().enumerate() {
            let v = op.apply(psi.amplitudes()).unwrap();
            ensure((v.norm_sqr() - p[m]).abs() <= 1e-12, || {
                format!("p({m}) disagrees with |M psi|^2")
            })?;
        }
        min_p = p.iter().copied().fold(min_p, f64::min);
        worst_sum = worst_sum.max((p.iter().sum::<f64>() - 1.0).abs());
    }
    ensure(min_p >= -1e-12, || format!("negative probability {min_p:e}"))?;
    ensure(worst_sum <= 1e-10, || format!("sum defect {worst_sum:e}"))?;

    const SHOTS: u64 = 100_000;
    let bound = 5.0 / (SHOTS as f64).sqrt();
    let mut worst_freq = 0.0f64;
    let mut check = |set: &MeasurementOperatorSet, psi: &QuantumState, seed: u64| -> Result<(), String> {
        let p = outcome_probabilities(set, psi).unwrap();
        let counts = sample_counts(set, psi, seed, SHOTS).map_err(|e| e.to_string())?;
        ensure(counts.iter().sum::<u64>() == SHOTS, || {
            "counts do not sum to shots".into()
        })?;
        for (c, q) in counts.iter().zip(&p) {
            let d = (*c as f64 / SHOTS as f64 - q).abs();
            worst_freq = worst_freq.max(d);
            ensure(d <= bound, || format!("frequency off by {d} (bound {bound})"))?;
        }
        Ok(())
    };
    for seed in 0..10 {
        let n = rng.random_range(2..=8);
        let count = rng.random_range(2..=5);
        let set = random::complete_set(&mut rng, n, count);
        let psi = random::state(&mut rng, n);
        check(&set, &psi, seed)?;
    }
    let plus = QuantumState::new(
        irm_core::CVector::new(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).unwrap(),
        irm_core::measurement::Normalization::Normalize,
    )
    .unwrap();
    check(&ProjectorSet::computational(2).to_measurement_set(), &plus, 7)?;
    Ok(format!(
        "{PAIRS} pairs: min p {min_p:e}, max |sum-1| {worst_sum:e}; 11 histograms at 1e5 shots, max deviation {worst_freq:.4} <= {bound:.4}"
    ))
}

fn criterion_3() -> Outcome {
    let mut rng = seeded_rng(3);
    let mut worst = 0.0f64;
    for k in 0..100 {
        let n = [2, 4, 8][k % 3];
        let u = UnitaryOperator::new(random::unitary(&mut rng, n), DEFAULT_TOL).map_err(|e| e.to_string())?;
        let psi = random::state(&mut rng, n);
        let rec = apply_outcome(&unitary_as_measurement(&u), &psi, 0).map_err(|e| e.to_string())?;
        let expected = u.matrix().apply(psi.amplitudes()).unwrap();
        let dp = (rec.probability - 1.0).abs();
        let dv = rec.post_state.amplitudes().distance(&expected).unwrap();
        ensure(dp <= 1e-12 && dv <= 1e-12, || {
            format!("n={n}: |p-1|={dp:e}, |post-U psi|={dv:e}")
        })?;
        worst = worst.max(dp).max(dv);
    }
    Ok(format!("100 unitaries (n in 2,4,8), worst defect {worst:e}"))
}

fn criterion_4() -> Outcome {
    let mut rng = seeded_rng(4);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(1..=16);
        let groups = rng.random_range(1..=n.min(6));
        let family = random::orthogonal_family(&mut rng, n, groups);
        let set = MeasurementOperatorSet::new(family).unwrap();
        let phases = PhaseVector::from_complex(random::phases(&mut rng, groups)).unwrap();
        let m = superpose_operators(&set, &phases, DEFAULT_TOL).map_err(|e| e.to_string())?;
        let (left, right) = identity_defects(m.matrix());
        ensure(left <= 1e-9 && right <= 1e-9, || {
            format!("n={n}: defects {left:e}, {right:e}")
        })?;
        worst = worst.max(left).max(right);
    }

    // Counterexamples: complete but overlapping sets, and repeated projectors.
    let mut rejected = 0;
    let mut total = 0;
    for k in 0..200 {
        let set = if k % 2 == 0 {
            let n = rng.random_range(2..=8);
            let count = rng.random_range(2..=4);
            random::complete_set(&mut rng, n, count)
        } else {
            let n = rng.random_range(2..=8);
            let v = random::vector(&mut rng, n);
            let p = CMatrix::projector_onto(&v.scale(C64::new(1.0 / v.norm(), 0.0)));
            MeasurementOperatorSet::new(vec![p.clone(), p]).unwrap()
        };
        let phases = PhaseVector::from_complex(random::phases(&mut rng, set.len())).unwrap();
        total += 1;
        if let Err(Error::OrthogonalityViolation { .. }) = superpose_operators(&set, &phases, DEFAULT_TOL) {
            rejected += 1;
        }
    }
    ensure(rejected == total, || {
        format!("only {rejected}/{total} counterexamples rejected")
    })?;
    Ok(format!(
        "200 families, worst defect {worst:e}; {rejected}/{total} counterexamples rejected with OrthogonalityViolation"
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = seeded_rng(5);
    let mut worst = 0.0f64;
    let mut degenerate = 0;
    for k in 0..100 {
        let n = rng.random_range(1..=8);
        let a = if k % 4 == 0 && n > 1 || k < 20 {
            let n = n.max(2);
            let distinct = rng.random_range(1..n);
            let levels: Vec<f64> = (0..distinct).map(|_| rng.random_range(-4.0..4.0)).collect();
            let mut spectrum: Vec<f64> = (0..n).map(|j| levels[j % distinct]).collect();
            spectrum.rotate_left(rng.random_range(0..n));
            degenerate += 1;
            random::hermitian_with_spectrum(&mut rng, &spectrum)
        } else {
            let norm = rng.random_range(0.1..6.0);
            random::hermitian(&mut rng, n, norm)
        };
        let obs = spectral_decompose(&a, DEFAULT_TOL).map_err(|e| e.to_string())?;
        let u = exp_observable(&obs).map_err(|e| e.to_string())?;
        let d = frobenius_distance(u.matrix(), &expm_oracle(&a.scale(I)).unwrap()).unwrap();
        ensure(d <= 1e-8, || format!("n={n}: distance {d:e}"))?;
        worst = worst.max(d);
    }
    ensure(degenerate >= 20, || format!("only {degenerate} degenerate spectra"))?;
    Ok(format!(
        "100 Hermitian matrices ({degenerate} degenerate), worst distance {worst:e}"
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = seeded_rng(6);
    let mut mirrors: Vec<MirrorUnitary> = Vec::new();
    for _ in 0..50 {
        let theta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let alpha = random::phases(&mut rng, 1)[0];
        mirrors.push(build_qubit_mirror(theta, alpha).map_err(|e| e.to_string())?);
    }
    for _ in 0..50 {
        let n = rng.random_range(2..=8);
        let w = random::unitary(&mut rng, n);
        let basis: Vec<_> = (0..n).map(|j| w.column(j)).collect();
        let pset = ProjectorSet::from_basis(&basis, DEFAULT_TOL).map_err(|e| e.to_string())?;
        let phases = PhaseVector::from_complex(random::phases(&mut rng, n)).unwrap();
        mirrors.push(extend_mirror(&phases, &pset).map_err(|e| e.to_string())?);
    }
    let mut worst = 0.0f64;
    for m in &mirrors {
        let pset = m.reference_projectors();
        for _ in 0..200 {
            let psi = random::state(&mut rng, pset.dim());
            let r = verify_probability_preservation(m.unitary(), pset, &psi, 1e-10).map_err(|e| e.to_string())?;
            ensure(r.max_deviation <= 1e-10, || format!("deviation {:e}", r.max_deviation))?;
            worst = worst.max(r.max_deviation);
        }
    }
    let h = UnitaryOperator::new(gates::hadamard(), DEFAULT_TOL).unwrap();
    let pset = ProjectorSet::computational(2);
    ensure(!is_mirror(&h, &pset, DEFAULT_TOL).unwrap().is_mirror(), || {
        "H accepted as a mirror".into()
    })?;
    let r = verify_probability_preservation(&h, &pset, &QuantumState::basis(2, 0), 1e-10).unwrap();
    ensure(r.max_deviation >= 0.49, || format!("H deviation {}", r.max_deviation))?;
    Ok(format!(
        "{} mirrors x 200 states, worst deviation {worst:e}; H on |0> deviation {}",
        mirrors.len(),
        r.max_deviation
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = seeded_rng(7);
    let mut unitaries: Vec<(String, UnitaryOperator)> = Vec::new();
    for name in [
        "unitary_i.json",
        "unitary_x.json",
        "unitary_y.json",
        "unitary_z.json",
        "unitary_h.json",
        "unitary_bell_circuit.json",
        "mirror_diag_1ii1.json",
    ] {
        let file = corpus(name);
        assert_eq!(file.kind, OperatorKind::Unitary);
        let u = UnitaryOperator::new(file.single().unwrap(), DEFAULT_TOL).map_err(|e| format!("{name}: {e}"))?;
        unitaries.push((name.to_string(), u));
    }
    for k in 0..100 {
        let n = rng.random_range(1..=16);
        let u = UnitaryOperator::new(random::unitary(&mut rng, n), DEFAULT_TOL).map_err(|e| e.to_string())?;
        unitaries.push((format!("random #{k}"), u));
    }
    let mut worst_fid = 0.0f64;
    let mut worst_id = 0.0f64;
    for (name, u) in &unitaries {
        let n = u.dim();
        let mut states: Vec<QuantumState> = (0..n.min(4)).map(|j| QuantumState::basis(n, j)).collect();
        states.extend((0..4).map(|_| random::state(&mut rng, n)));
        for psi in &states {
            let t = truth_protocol(u, psi, 1e-10).map_err(|e| format!("{name}: {e}"))?;
            let (id, _) = identity_defects(u.matrix());
            ensure(t.fidelity >= 1.0 - 1e-10, || format!("{name}: fidelity {}", t.fidelity))?;
            ensure(t.identity_residual <= 1e-10 && id <= 1e-10, || {
                format!("{name}: identity residual {id:e}")
            })?;
            worst_fid = worst_fid.max(1.0 - t.fidelity);
            worst_id = worst_id.max(t.identity_residual);
        }
    }
    let bell = UnitaryOperator::new(gates::bell_circuit(), DEFAULT_TOL).unwrap();
    let t = truth_protocol(&bell, &QuantumState::basis(4, 0), 1e-10).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let phi_plus = irm_core::CVector::new(vec![
        C64::new(s, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(s, 0.0),
    ])
    .unwrap();
    let d = t.computed.amplitudes().distance(&phi_plus).unwrap();
    ensure(d <= 1e-12, || format!("Bell circuit computed state off by {d:e}"))?;
    let r = t
        .restored
        .amplitudes()
        .distance(QuantumState::basis(4, 0).amplitudes())
        .unwrap();
    ensure(r <= 1e-12, || format!("Bell circuit restored state off by {r:e}"))?;
    Ok(format!(
        "{} unitaries: max 1-fidelity {worst_fid:e}, max identity residual {worst_id:e}; Bell circuit gives Phi+ within {d:e}",
        unitaries.len()
    ))
}

fn criterion_8() -> Outcome {
    let mirrors = [
        UnitaryOperator::identity(4),
        UnitaryOperator::new(corpus("mirror_diag_1ii1.json").single().unwrap(), DEFAULT_TOL).unwrap(),
    ];
    let mut worst = 0.0f64;
    for u in &mirrors {
        let mirror = is_mirror(u, &ProjectorSet::computational(4), DEFAULT_TOL)
            .unwrap()
            .into_mirror()
            .ok_or("mirror rejected")?;
        for bell in BellState::ALL {
            let c = bell_comparison(bell.index(), &mirror).map_err(|e| e.to_string())?;
            let expected = match bell {
                BellState::PhiPlus | BellState::PhiMinus => [1.0, 0.0],
                BellState::PsiPlus | BellState::PsiMinus => [0.0, 1.0],
            };
            ensure(c.external_residual <= 1e-12, || {
                format!("{bell}: E0+E1 residual {:e}", c.external_residual)
            })?;
            for (p, q) in c.external_probabilities.iter().zip(expected) {
                ensure((p - q).abs() <= 1e-12, || {
                    format!("{bell}: external {:?}", c.external_probabilities)
                })?;
                worst = worst.max((p - q).abs());
            }
            ensure((c.internal_probability - 1.0).abs() <= 1e-12, || {
                format!("{bell}: internal {}", c.internal_probability)
            })?;
            ensure(c.preservation_deviation <= 1e-12, || {
                format!("{bell}: deviation {:e}", c.preservation_deviation)
            })?;
            worst = worst.max(c.external_residual).max((c.internal_probability - 1.0).abs());
        }
    }
    Ok(format!("4 Bell states x 2 mirrors, worst defect {worst:e}"))
}

fn criterion_9() -> Outcome {
    let transcripts = common::check_goldens()?;
    let numbers = common::check_formats_agree()?;
    let files = common::check_corpus_canonical()?;
    let builds = common::check_build_round_trip()?;
    ensure(Path::new(env!("CARGO_BIN_EXE_irm")).exists(), || {
        "binary missing".into()
    })?;
    Ok(format!(
        "{} cases, {transcripts} golden transcripts with exit codes; {numbers} numbers agree across formats; {files} corpus files and {builds} built mirrors round-trip bit-exactly",
        common::CASES.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("completeness validators on the corpus", criterion_1),
        ("probability law and sampling", criterion_2),
        ("unitary singleton measurements", criterion_3),
        ("phase superposition of orthogonal families", criterion_4),
        ("spectral exponential vs series oracle", criterion_5),
        ("mirror probability preservation", criterion_6),
        ("truth protocol", criterion_7),
        ("Bell comparison", criterion_8),
        ("CLI goldens, exit codes, round-trip", criterion_9),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(summary) => println!("PASS criterion {} ({name}) [{secs:.2}s]: {summary}", k + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {} ({name}) [{secs:.2}s]: {why}", k + 1);
            }
        }
    }
    if failures > 0 {
        println!("{failures} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
