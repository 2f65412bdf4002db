//! Channel JSON: `{"n": 4, "d": [[[re, im], ...], ...]}`, row-major.

use std::fs;
use std::path::Path;

use dephasing_core::{validate_channel_with, CMatrix, Complex64, PhaseDampingChannel};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub n: usize,
    pub d: Vec<Vec<[f64; 2]>>,
}

impl ChannelFile {
    pub fn from_channel(channel: &PhaseDampingChannel) -> Self {
        let m = channel.matrix();
        let n = m.nrows();
        ChannelFile {
            n,
            d: (0..n)
                .map(|i| (0..n).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        }
    }

    /// The matrix described by the file, after shape checks.
    pub fn matrix(&self) -> Result<CMatrix, CliError> {
        if self.n == 0 {
            return Err(CliError::Parse("n must be at least 1".into()));
        }
        if self.d.len() != self.n {
            return Err(CliError::Parse(format!(
                "expected {} rows, found {}",
                self.n,
                self.d.len()
            )));
        }
        if let Some((i, row)) = self.d.iter().enumerate().find(|(_, r)| r.len() != self.n) {
            return Err(CliError::Parse(format!(
                "row {i} has {} entries, expected {}",
                row.len(),
                self.n
            )));
        }
        Ok(CMatrix::from_fn(self.n, self.n, |i, j| {
            let [re, im] = self.d[i][j];
            Complex64::new(re, im)
        }))
    }
}

pub fn parse_channel(text: &str) -> Result<PhaseDampingChannel, CliError> {
    parse_channel_with(text, false)
}

/// Parses and validates a channel; `strict` tightens the PSD floor.
pub fn parse_channel_with(text: &str, strict: bool) -> Result<PhaseDampingChannel, CliError> {
    let file: ChannelFile =
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let matrix = file.matrix()?;
    let report =
        validate_channel_with(&matrix, strict).map_err(|e| CliError::Parse(e.to_string()))?;
    if !report.accepted() {
        return Err(CliError::Invalid(report));
    }
    PhaseDampingChannel::new(matrix).map_err(|_| CliError::Invalid(report))
}

pub fn read_channel(path: &Path, strict: bool) -> Result<PhaseDampingChannel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_channel_with(&text, strict)
}

pub fn channel_to_json(channel: &PhaseDampingChannel) -> String {
    serde_json::to_string(&ChannelFile::from_channel(channel)).expect("finite entries serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use dephasing_core::tetra_channel;

    #[test]
    fn round_trip_is_exact() {
        let t = tetra_channel();
        let back = parse_channel(&channel_to_json(&t)).unwrap();
        assert_eq!(back.matrix(), t.matrix());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_channel("{"), Err(CliError::Parse(_))));
        assert!(matches!(
            parse_channel(r#"{"n": 2, "d": [[[1,0],[0,0]]]}"#),
            Err(CliError::Parse(_))
        ));
        assert!(matches!(
            parse_channel(r#"{"n": 2, "d": [[[1,0]],[[0,0],[1,0]]]}"#),
            Err(CliError::Parse(_))
        ));
        assert!(matches!(
            parse_channel(r#"{"n": 1, "d": [[[1,0]]], "extra": 1}"#),
            Err(CliError::Parse(_))
        ));
    }

    #[test]
    fn validation_failure_carries_report() {
        let text = r#"{"n": 2, "d": [[[1,0],[2,0]],[[2,0],[1,0]]]}"#;
        match parse_channel(text) {
            Err(CliError::Invalid(r)) => assert!(!r.accepted()),
            other => panic!("expected validation failure, got {other:?}"),
        }
    }
}
