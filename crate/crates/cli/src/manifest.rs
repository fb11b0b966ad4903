use std::io::Write;

use serde::Serialize;

use crate::config::RunConfig;
use crate::report::Check;

/// Everything needed to replay a run bit for bit with the same build.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub config: &'a RunConfig,
    pub rng_algorithm: &'static str,
    pub seed: u64,
    pub execution: String,
    pub timestamp: String,
    pub checks: &'a [Check],
    pub warnings: &'a [String],
    pub exit_code: i32,
    pub error: Option<String>,
}

impl RunManifest<'_> {
    /// Writes pretty JSON to `dest`, or to stderr when `dest` is `-`.
    pub fn write(&self, dest: &str) -> std::io::Result<()> {
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        if dest == "-" {
            std::io::stderr().lock().write_all(json.as_bytes())
        } else {
            std::fs::write(dest, json)
        }
    }
}
