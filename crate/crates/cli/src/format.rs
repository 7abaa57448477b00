//! On-disk operator and state files.
//!
//! Both are JSON documents. Complex numbers are `[re, im]` pairs and
//! matrices are row-major nested arrays of such pairs. Reals are written with
//! 17 significant digits so that a written file re-parses to the identical
//! bit pattern.

use std::fmt;
use std::fs;
use std::path::Path;

use irm_core::linalg::{CMatrix, C64};
use irm_core::measurement::{Normalization, QuantumState};
use serde::de::Deserializer;
use serde::ser::{Error as _, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::CliError;

pub const SCHEMA_VERSION: &str = "1";

/// A real number serialized with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom("non-finite real"));
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(S::Error::custom)?;
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        f64::deserialize(deserializer).map(Real)
    }
}

pub type ComplexPair = [Real; 2];

fn to_pair(z: C64) -> ComplexPair {
    [Real(z.re), Real(z.im)]
}

fn from_pair(p: &ComplexPair) -> C64 {
    C64::new(p[0].0, p[1].0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    MeasurementSet,
    ProjectorSet,
    Povm,
    Unitary,
    Observable,
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorKind::MeasurementSet => "measurement_set",
            OperatorKind::ProjectorSet => "projector_set",
            OperatorKind::Povm => "povm",
            OperatorKind::Unitary => "unitary",
            OperatorKind::Observable => "observable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabeledMatrix {
    pub label: usize,
    pub matrix: Vec<Vec<ComplexPair>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub schema_version: String,
    pub dim: usize,
    pub kind: OperatorKind,
    pub operators: Vec<LabeledMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub schema_version: String,
    pub dim: usize,
    pub amplitudes: Vec<ComplexPair>,
}

fn check_schema(version: &str) -> Result<(), CliError> {
    if version != SCHEMA_VERSION {
        return Err(CliError::Input(format!(
            "unsupported schema_version {version:?} (expected {SCHEMA_VERSION:?})"
        )));
    }
    Ok(())
}

impl OperatorFile {
    pub fn new(kind: OperatorKind, matrices: &[CMatrix]) -> Self {
        let dim = matrices.first().map_or(0, CMatrix::rows);
        OperatorFile {
            schema_version: SCHEMA_VERSION.to_string(),
            dim,
            kind,
            operators: matrices
                .iter()
                .enumerate()
                .map(|(label, m)| LabeledMatrix {
                    label,
                    matrix: m
                        .to_rows()
                        .into_iter()
                        .map(|r| r.into_iter().map(to_pair).collect())
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: OperatorFile =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed operator file: {e}")))?;
        check_schema(&file.schema_version)?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        Self::parse(&read_text(path)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("finite entries serialize");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        fs::write(path, self.to_json()).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
    }

    /// Matrices ordered by label. Labels must be exactly `0..N` and every
    /// matrix must be `dim × dim`.
    pub fn matrices(&self) -> Result<Vec<CMatrix>, CliError> {
        if self.dim == 0 {
            return Err(CliError::Input("dim must be positive".into()));
        }
        if self.operators.is_empty() {
            return Err(CliError::Input("operator list is empty".into()));
        }
        let mut slots: Vec<Option<CMatrix>> = vec![None; self.operators.len()];
        for op in &self.operators {
            let slot = slots.get_mut(op.label).ok_or_else(|| {
                CliError::Input(format!(
                    "label {} out of range: labels must be 0..{}",
                    op.label,
                    self.operators.len()
                ))
            })?;
            if slot.is_some() {
                return Err(CliError::Input(format!("duplicate label {}", op.label)));
            }
            if op.matrix.len() != self.dim || op.matrix.iter().any(|r| r.len() != self.dim) {
                return Err(CliError::Input(format!(
                    "operator {} is not {}x{}",
                    op.label, self.dim, self.dim
                )));
            }
            let rows: Vec<Vec<C64>> = op.matrix.iter().map(|r| r.iter().map(from_pair).collect()).collect();
            *slot =
                Some(CMatrix::from_rows(&rows).map_err(|e| CliError::Input(format!("operator {}: {e}", op.label)))?);
        }
        Ok(slots.into_iter().map(|m| m.expect("every label filled")).collect())
    }

    /// The single matrix of a `unitary` or `observable` file.
    pub fn single(&self) -> Result<CMatrix, CliError> {
        let mut ms = self.matrices()?;
        if ms.len() != 1 {
            return Err(CliError::Input(format!(
                "a {} file must hold exactly one operator, found {}",
                self.kind,
                ms.len()
            )));
        }
        Ok(ms.remove(0))
    }

    pub fn expect_kind(&self, allowed: &[OperatorKind]) -> Result<(), CliError> {
        if allowed.contains(&self.kind) {
            Ok(())
        } else {
            let names: Vec<String> = allowed.iter().map(ToString::to_string).collect();
            Err(CliError::Input(format!(
                "expected a file of kind {}, found {}",
                names.join(" or "),
                self.kind
            )))
        }
    }
}

impl StateFile {
    pub fn new(state: &QuantumState) -> Self {
        StateFile {
            schema_version: SCHEMA_VERSION.to_string(),
            dim: state.dim(),
            amplitudes: state.amplitudes().as_slice().iter().copied().map(to_pair).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: StateFile =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed state file: {e}")))?;
        check_schema(&file.schema_version)?;
        if file.amplitudes.len() != file.dim || file.dim == 0 {
            return Err(CliError::Input(format!(
                "state declares dim {} but has {} amplitudes",
                file.dim,
                file.amplitudes.len()
            )));
        }
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        Self::parse(&read_text(path)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("finite entries serialize");
        s.push('\n');
        s
    }

    /// Builds the state. Returns the input norm alongside so callers can
    /// warn when normalization changed it.
    pub fn state(&self, mode: Normalization) -> Result<(QuantumState, f64), CliError> {
        let amps: Vec<C64> = self.amplitudes.iter().map(from_pair).collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let state = QuantumState::from_amplitudes(amps, mode).map_err(|e| CliError::Input(e.to_string()))?;
        Ok((state, norm))
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use irm_core::gates;

    #[test]
    fn operator_file_round_trips_bit_exactly() {
        let h = gates::hadamard();
        let file = OperatorFile::new(OperatorKind::Unitary, std::slice::from_ref(&h));
        let back = OperatorFile::parse(&file.to_json()).unwrap();
        let m = back.single().unwrap();
        for (a, b) in m.as_slice().iter().zip(h.as_slice()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        assert_eq!(back.to_json(), file.to_json());
    }

    #[test]
    fn reals_use_seventeen_significant_digits() {
        let json = serde_json::to_string(&Real(std::f64::consts::FRAC_1_SQRT_2)).unwrap();
        assert_eq!(json, "7.0710678118654757e-1");
        assert_eq!(serde_json::to_string(&Real(-1.0)).unwrap(), "-1.0000000000000000e0");
    }

    #[test]
    fn rejects_bad_operator_files() {
        assert!(matches!(OperatorFile::parse("{"), Err(CliError::Input(_))));
        let wrong_version =
            r#"{"schema_version":"2","dim":1,"kind":"unitary","operators":[{"label":0,"matrix":[[[1,0]]]}]}"#;
        assert!(OperatorFile::parse(wrong_version).is_err());
        let dup = r#"{"schema_version":"1","dim":1,"kind":"measurement_set","operators":[
            {"label":0,"matrix":[[[1,0]]]},{"label":0,"matrix":[[[0,0]]]}]}"#;
        assert!(OperatorFile::parse(dup).unwrap().matrices().is_err());
        let gap = r#"{"schema_version":"1","dim":1,"kind":"measurement_set","operators":[
            {"label":0,"matrix":[[[1,0]]]},{"label":2,"matrix":[[[0,0]]]}]}"#;
        assert!(OperatorFile::parse(gap).unwrap().matrices().is_err());
        let shape = r#"{"schema_version":"1","dim":2,"kind":"unitary","operators":[{"label":0,"matrix":[[[1,0]]]}]}"#;
        assert!(OperatorFile::parse(shape).unwrap().matrices().is_err());
        let kind = r#"{"schema_version":"1","dim":1,"kind":"banana","operators":[]}"#;
        assert!(OperatorFile::parse(kind).is_err());
    }

    #[test]
    fn state_file_checks() {
        let ok = r#"{"schema_version":"1","dim":2,"amplitudes":[[3,0],[0,4]]}"#;
        let f = StateFile::parse(ok).unwrap();
        let (s, norm) = f.state(Normalization::Normalize).unwrap();
        assert_eq!(norm, 5.0);
        assert!((s.amplitudes()[0].re - 0.6).abs() < 1e-15);
        assert!(f.state(Normalization::Strict).is_err());
        let zero = r#"{"schema_version":"1","dim":1,"amplitudes":[[0,0]]}"#;
        assert!(StateFile::parse(zero).unwrap().state(Normalization::Normalize).is_err());
        let mismatch = r#"{"schema_version":"1","dim":3,"amplitudes":[[1,0]]}"#;
        assert!(StateFile::parse(mismatch).is_err());
    }
}
