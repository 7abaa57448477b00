//! Library half of the `irm` command-line tool: file formats, report
//! rendering and the command implementations. `main.rs` only parses
//! arguments and maps results to exit codes.

pub mod commands;
pub mod format;
pub mod report;

use thiserror::Error;

/// Failures that prevent a command from producing a report.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable, malformed or inconsistent input. Exit code 2.
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
        }
    }
}

/// Parses complex literals of the forms `a`, `bi`, `a+bi`, `a-bi`, `i` and `-i`.
pub fn parse_complex(text: &str) -> Result<irm_core::C64, CliError> {
    let bad = || CliError::Input(format!("cannot parse complex number {text:?}"));
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        let re = s.parse::<f64>().map_err(|_| bad())?;
        return if re.is_finite() {
            Ok(irm_core::C64::new(re, 0.0))
        } else {
            Err(bad())
        };
    };
    // Split at the last sign that is not the leading sign or part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re_part.parse::<f64>().map_err(|_| bad())?;
    let z = irm_core::C64::new(re, im);
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(bad());
    }
    Ok(z)
}
