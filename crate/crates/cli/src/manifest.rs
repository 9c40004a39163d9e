use serde::{Deserialize, Serialize};
use std::process::Command;

/// A named list of `scl` invocations with their expected exit codes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub name: String,
    pub commands: Vec<ManifestEntry>,
    /// Free-form record of bounds and precisions used.
    #[serde(default)]
    pub tolerances: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub args: Vec<String>,
    #[serde(default)]
    pub expect_exit: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReplayLine {
    pub args: Vec<String>,
    pub expected: i32,
    pub actual: i32,
    pub pass: bool,
}

/// Runs every entry through the current executable.
pub fn replay(manifest: &ExperimentManifest) -> std::io::Result<Vec<ReplayLine>> {
    let exe = std::env::current_exe()?;
    let mut out = Vec::new();
    for entry in &manifest.commands {
        let status = Command::new(&exe).args(&entry.args).output()?.status;
        let actual = status.code().unwrap_or(-1);
        out.push(ReplayLine { args: entry.args.clone(), expected: entry.expect_exit, actual, pass: actual == entry.expect_exit });
    }
    Ok(out)
}
