//! Golden-file harness shared by the `cli` and `acceptance` test targets.
//!
//! Each case runs the `irm` binary from the crate directory in both output
//! formats. The golden file records the exit code, stdout and stderr.
//! Set `UPDATE_GOLDEN=1` to rewrite the goldens.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use irm_cli::format::{OperatorFile, OperatorKind, StateFile};
use serde_json::Value;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

const fn case(name: &'static str, args: &'static [&'static str], exit: i32) -> Case {
    Case { name, args, exit }
}

/// `{out}` in an argument list is replaced by a fresh temporary file path.
pub const CASES: &[Case] = &[
    case("validate_projectors_2", &["validate", "corpus/projectors_2.json"], 0),
    case("validate_projectors_4", &["validate", "corpus/projectors_4.json"], 0),
    case("validate_projectors_pm", &["validate", "corpus/projectors_pm.json"], 0),
    case("validate_general_set", &["validate", "corpus/general_set.json"], 0),
    case("validate_singleton_x", &["validate", "corpus/singleton_x.json"], 0),
    case("validate_unitary_h", &["validate", "corpus/unitary_h.json"], 0),
    case("validate_povm_trine", &["validate", "corpus/povm_trine.json"], 0),
    case("validate_observable_x", &["validate", "corpus/observable_x.json"], 0),
    case("validate_invalid_set", &["validate", "corpus/invalid_set.json"], 1),
    case("validate_non_unitary", &["validate", "corpus/non_unitary.json"], 1),
    case("validate_malformed", &["validate", "tests/fixtures/malformed.json"], 2),
    case("validate_missing", &["validate", "corpus/no_such_file.json"], 2),
    case("classify_projectors_2", &["classify", "corpus/projectors_2.json"], 0),
    case("classify_singleton_x", &["classify", "corpus/singleton_x.json"], 0),
    case(
        "classify_unitary_bell_circuit",
        &["classify", "corpus/unitary_bell_circuit.json"],
        0,
    ),
    case("classify_general_set", &["classify", "corpus/general_set.json"], 0),
    case("classify_invalid_set", &["classify", "corpus/invalid_set.json"], 1),
    case("classify_povm", &["classify", "corpus/povm_trine.json"], 2),
    case(
        "measure_plus_shots",
        &[
            "measure",
            "--set",
            "corpus/projectors_2.json",
            "--state",
            "corpus/state_plus.json",
            "--shots",
            "100000",
            "--seed",
            "7",
        ],
        0,
    ),
    case(
        "measure_zero_outcome_0",
        &[
            "measure",
            "--set",
            "corpus/projectors_2.json",
            "--state",
            "corpus/state_0.json",
            "--outcome",
            "0",
        ],
        0,
    ),
    case(
        "measure_zero_outcome_1",
        &[
            "measure",
            "--set",
            "corpus/projectors_2.json",
            "--state",
            "corpus/state_0.json",
            "--outcome",
            "1",
        ],
        1,
    ),
    case(
        "measure_general_seeded",
        &[
            "measure",
            "--set",
            "corpus/general_set.json",
            "--state",
            "corpus/state_plus.json",
            "--seed",
            "3",
        ],
        0,
    ),
    case(
        "measure_bell_parity",
        &[
            "measure",
            "--set",
            "corpus/projectors_4.json",
            "--state",
            "corpus/bell_psi_minus.json",
        ],
        0,
    ),
    case(
        "measure_unnormalized",
        &[
            "measure",
            "--set",
            "corpus/projectors_2.json",
            "--state",
            "corpus/state_unnormalized.json",
            "--outcome",
            "1",
        ],
        0,
    ),
    case(
        "measure_unnormalized_strict",
        &[
            "--strict",
            "measure",
            "--set",
            "corpus/projectors_2.json",
            "--state",
            "corpus/state_unnormalized.json",
        ],
        2,
    ),
    case(
        "measure_dim_mismatch",
        &[
            "measure",
            "--set",
            "corpus/projectors_4.json",
            "--state",
            "corpus/state_0.json",
        ],
        2,
    ),
    case(
        "measure_shots_without_seed",
        &[
            "measure",
            "--set",
            "corpus/projectors_2.json",
            "--state",
            "corpus/state_0.json",
            "--shots",
            "10",
        ],
        2,
    ),
    case(
        "mirror_build_alpha_i",
        &["mirror", "build", "--theta", "0", "--alpha", "i", "--out", "{out}"],
        0,
    ),
    case(
        "mirror_build_theta",
        &[
            "mirror", "build", "--theta", "-0.5", "--alpha", "0.6-0.8i", "--out", "{out}",
        ],
        0,
    ),
    case(
        "mirror_build_angles",
        &[
            "mirror",
            "build",
            "--projectors",
            "corpus/projectors_4.json",
            "--angles",
            "0,0.5,-1,3",
            "--out",
            "{out}",
        ],
        0,
    ),
    case(
        "mirror_build_phases_pm",
        &[
            "mirror",
            "build",
            "--projectors",
            "corpus/projectors_pm.json",
            "--phases",
            "1,-1",
            "--out",
            "{out}",
        ],
        0,
    ),
    case(
        "mirror_build_bad_alpha",
        &["mirror", "build", "--alpha", "2", "--out", "{out}"],
        1,
    ),
    case("mirror_build_no_alpha", &["mirror", "build", "--out", "{out}"], 2),
    case(
        "mirror_check_h",
        &[
            "mirror",
            "check",
            "--unitary",
            "corpus/unitary_h.json",
            "--projectors",
            "corpus/projectors_2.json",
            "--state",
            "corpus/state_0.json",
        ],
        1,
    ),
    case(
        "mirror_check_z_plus",
        &[
            "mirror",
            "check",
            "--unitary",
            "corpus/unitary_z.json",
            "--projectors",
            "corpus/projectors_2.json",
            "--state",
            "corpus/state_plus.json",
        ],
        0,
    ),
    case(
        "mirror_check_x_pm",
        &[
            "mirror",
            "check",
            "--unitary",
            "corpus/unitary_x.json",
            "--projectors",
            "corpus/projectors_pm.json",
        ],
        0,
    ),
    case(
        "mirror_check_non_unitary",
        &[
            "mirror",
            "check",
            "--unitary",
            "corpus/non_unitary.json",
            "--projectors",
            "corpus/projectors_2.json",
        ],
        1,
    ),
    case(
        "truth_h_zero",
        &[
            "truth",
            "--unitary",
            "corpus/unitary_h.json",
            "--state",
            "corpus/state_0.json",
        ],
        0,
    ),
    case(
        "truth_identity",
        &[
            "truth",
            "--unitary",
            "corpus/unitary_i.json",
            "--state",
            "corpus/state_plus.json",
        ],
        0,
    ),
    case(
        "truth_y_one",
        &[
            "truth",
            "--unitary",
            "corpus/unitary_y.json",
            "--state",
            "corpus/state_1.json",
        ],
        0,
    ),
    case(
        "truth_bell_circuit",
        &[
            "truth",
            "--unitary",
            "corpus/unitary_bell_circuit.json",
            "--state",
            "corpus/state_00.json",
        ],
        0,
    ),
    case(
        "truth_non_unitary",
        &[
            "truth",
            "--unitary",
            "corpus/non_unitary.json",
            "--state",
            "corpus/state_0.json",
        ],
        1,
    ),
    case(
        "truth_dim_mismatch",
        &[
            "truth",
            "--unitary",
            "corpus/unitary_h.json",
            "--state",
            "corpus/state_00.json",
        ],
        2,
    ),
    case(
        "bell_phi_plus_mirror",
        &["bell", "--index", "0", "--mirror", "corpus/mirror_diag_1ii1.json"],
        0,
    ),
    case("bell_phi_minus", &["bell", "--index", "1"], 0),
    case("bell_psi_plus", &["bell", "--index", "2"], 0),
    case(
        "bell_psi_minus_mirror",
        &["bell", "--index", "3", "--mirror", "corpus/mirror_diag_1ii1.json"],
        0,
    ),
    case(
        "bell_incompatible",
        &["bell", "--index", "0", "--mirror", "corpus/unitary_bell_circuit.json"],
        1,
    ),
    case("bell_bad_index", &["bell", "--index", "5"], 2),
    case("usage_no_command", &[], 2),
    case("usage_bad_index_value", &["bell", "--index", "x"], 2),
];

pub const FORMATS: [&str; 2] = ["human", "machine"];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn transcript(&self) -> String {
        format!(
            "exit: {}\n--- stdout\n{}--- stderr\n{}",
            self.code, self.stdout, self.stderr
        )
    }
}

fn temp_path(tag: &str) -> PathBuf {
    let nanos = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_nanos());
    std::env::temp_dir().join(format!("irm-{}-{tag}-{nanos}.json", std::process::id()))
}

/// Runs `irm` with the given arguments and `--format` from the crate directory.
pub fn run(args: &[&str], format: &str) -> Output {
    let out = temp_path("out");
    let result = run_with_out(args, format, &out);
    let _ = std::fs::remove_file(&out);
    result
}

pub fn run_with_out(args: &[&str], format: &str, out: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_irm"));
    cmd.current_dir(crate_dir());
    if !args.is_empty() {
        cmd.args(["--format", format]);
    }
    for a in args {
        if *a == "{out}" {
            cmd.arg(out);
        } else {
            cmd.arg(a);
        }
    }
    let output = cmd.output().expect("irm binary runs");
    Output {
        code: output.status.code().unwrap_or(-1),
        stdout: String::from_utf8(output.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(output.stderr).expect("utf-8 stderr"),
    }
}

fn golden_path(case: &Case, format: &str) -> PathBuf {
    crate_dir()
        .join("tests/golden")
        .join(format!("{}.{format}.txt", case.name))
}

/// Runs every case in both formats and compares against the goldens.
/// Returns the number of transcripts checked.
pub fn check_goldens() -> Result<usize, String> {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut problems = Vec::new();
    let mut checked = 0;
    for case in CASES {
        for format in FORMATS {
            let out = run(case.args, format);
            checked += 1;
            if out.code != case.exit {
                problems.push(format!(
                    "{} ({format}): exit {} expected {}\n{}",
                    case.name,
                    out.code,
                    case.exit,
                    out.transcript()
                ));
            }
            let path = golden_path(case, format);
            let text = out.transcript();
            if update {
                std::fs::write(&path, &text).map_err(|e| e.to_string())?;
                continue;
            }
            match std::fs::read_to_string(&path) {
                Ok(expected) if expected == text => {}
                Ok(expected) => problems.push(format!(
                    "{} ({format}): output differs from golden\n--- expected\n{expected}\n--- actual\n{text}",
                    case.name
                )),
                Err(e) => problems.push(format!("{}: missing golden {}: {e}", case.name, path.display())),
            }
        }
    }
    if problems.is_empty() {
        Ok(checked)
    } else {
        Err(problems.join("\n"))
    }
}

fn collect_numbers(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Number(n) if n.is_f64() => out.push(format!("{:?}", n.as_f64().unwrap())),
        Value::Number(n) => out.push(n.to_string()),
        Value::Array(items) => items.iter().for_each(|x| collect_numbers(x, out)),
        Value::Object(map) => map.values().for_each(|x| collect_numbers(x, out)),
        _ => {}
    }
}

/// Every number in the machine report appears verbatim in the human report,
/// and both formats exit with the same code.
pub fn check_formats_agree() -> Result<usize, String> {
    let mut numbers = 0;
    for case in CASES.iter().filter(|c| !c.args.is_empty()) {
        let human = run(case.args, "human");
        let machine = run(case.args, "machine");
        if human.code != machine.code {
            return Err(format!("{}: exit codes differ", case.name));
        }
        if machine.stdout.is_empty() {
            continue;
        }
        let doc: Value = serde_json::from_str(&machine.stdout)
            .map_err(|e| format!("{}: machine output is not one JSON document: {e}", case.name))?;
        let mut found = Vec::new();
        collect_numbers(&doc, &mut found);
        for n in found {
            if !human.stdout.contains(&n) {
                return Err(format!("{}: {n} missing from human output", case.name));
            }
            numbers += 1;
        }
    }
    Ok(numbers)
}

/// Every corpus file re-serializes to its own bytes.
pub fn check_corpus_canonical() -> Result<usize, String> {
    let mut count = 0;
    let mut entries: Vec<PathBuf> = std::fs::read_dir(crate_dir().join("corpus"))
        .map_err(|e| e.to_string())?
        .map(|e| e.map(|e| e.path()).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    entries.sort();
    for path in entries {
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let again = if text.contains("\"amplitudes\"") {
            StateFile::parse(&text).map(|f| f.to_json())
        } else {
            OperatorFile::parse(&text).map(|f| f.to_json())
        }
        .map_err(|e| format!("{}: {e}", path.display()))?;
        if again != text {
            return Err(format!("{} does not round-trip byte for byte", path.display()));
        }
        count += 1;
    }
    Ok(count)
}

/// `mirror build` output re-parses to matrices that are bit-identical to the
/// library's construction.
pub fn check_build_round_trip() -> Result<usize, String> {
    use irm_core::linalg::C64;
    use irm_core::mirror::build_qubit_mirror;

    let params: [(f64, C64, &str, &str); 4] = [
        (0.0, C64::new(0.0, 1.0), "0", "i"),
        (-0.5, C64::new(0.6, -0.8), "-0.5", "0.6-0.8i"),
        (1.2345678901234567, C64::new(-1.0, 0.0), "1.2345678901234567", "-1"),
        (3.0, C64::new(0.28, 0.96), "3", "0.28+0.96i"),
    ];
    for (theta, alpha, theta_arg, alpha_arg) in params {
        let out = temp_path("build");
        let result = run_with_out(
            &[
                "mirror", "build", "--theta", theta_arg, "--alpha", alpha_arg, "--out", "{out}",
            ],
            "machine",
            &out,
        );
        if result.code != 0 {
            return Err(format!("mirror build {alpha_arg} exited {}", result.code));
        }
        let file = OperatorFile::read(&out).map_err(|e| e.to_string())?;
        let _ = std::fs::remove_file(&out);
        if file.kind != OperatorKind::Unitary {
            return Err(format!("mirror build wrote kind {}", file.kind));
        }
        let read = file.single().map_err(|e| e.to_string())?;
        let expected = build_qubit_mirror(theta, alpha).map_err(|e| e.to_string())?;
        let same = read
            .as_slice()
            .iter()
            .zip(expected.matrix().as_slice())
            .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
        if !same {
            return Err(format!("mirror build {alpha_arg} did not round-trip bit-exactly"));
        }
    }
    Ok(params.len())
}
