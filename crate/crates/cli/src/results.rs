//! The results-file schema shared by `run` (writer) and `anova`/`histogram`
//! (readers), plus the per-session CSV dump.

use std::fs;
use std::io::Write;
use std::path::Path;

use banditbench::engine::{ExperimentResult, SessionConfig};
use banditbench::stats::SampleGroup;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::manifest::RunManifest;

/// On-disk results document:
/// `{"manifest": {...}, "session": {...}, "arm_labels": [...], "policies": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsFile {
    pub manifest: RunManifest,
    #[serde(flatten)]
    pub result: ExperimentResult,
}

impl ResultsFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_slice(&bytes).map_err(|e| {
            CliError::Usage(format!("{}: not a valid results file: {e}", path.display()))
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let mut json = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Io(format!("serializing results: {e}")))?;
        json.push('\n');
        fs::write(path, json).map_err(|e| CliError::io(path, e))
    }

    /// Rejects files with no policies or no sessions.
    pub fn require_sessions(&self) -> Result<(), CliError> {
        if self.result.policies.is_empty()
            || self.result.policies.iter().all(|p| p.sessions.is_empty())
        {
            return Err(CliError::Usage("results file contains no sessions".to_string()));
        }
        Ok(())
    }

    /// Per-session metric groups for the statistical comparison: 0/1 success
    /// indicators in horizon mode, survival rounds in bankruptcy mode.
    pub fn metric_groups(&self) -> Vec<SampleGroup> {
        self.result
            .policies
            .iter()
            .map(|p| {
                let values = match self.result.session {
                    SessionConfig::Horizon { .. } => p
                        .sessions
                        .iter()
                        .map(|s| if s.final_balance >= 0 { 1.0 } else { 0.0 })
                        .collect(),
                    SessionConfig::Bankruptcy { .. } => {
                        p.sessions.iter().map(|s| s.rounds_played as f64).collect()
                    }
                };
                SampleGroup::new(p.label.clone(), values)
            })
            .collect()
    }
}

/// Writes the flat per-session CSV
/// (`policy,session_index,rounds_played,final_balance,bankrupt,capped`), with
/// the manifest on a leading `#` comment line.
pub fn write_session_csv(
    path: &Path,
    manifest: &RunManifest,
    result: &ExperimentResult,
) -> Result<(), CliError> {
    let mut out = Vec::new();
    let manifest_json = serde_json::to_string(manifest)
        .map_err(|e| CliError::Io(format!("serializing manifest: {e}")))?;
    writeln!(out, "# manifest {manifest_json}").unwrap();
    writeln!(out, "policy,session_index,rounds_played,final_balance,bankrupt,capped").unwrap();
    for policy in &result.policies {
        for (index, s) in policy.sessions.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                policy.label, index, s.rounds_played, s.final_balance, s.bankrupt, s.capped
            )
            .unwrap();
        }
    }
    fs::write(path, out).map_err(|e| CliError::io(path, e))
}
