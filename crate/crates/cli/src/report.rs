use std::path::Path;

use heffter::report::{failures, Check};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Exit code for a run whose checks all pass.
pub const EXIT_OK: i32 = 0;
/// Exit code for a run where a named check failed.
pub const EXIT_FAILED: i32 = 1;
/// Exit code for unreadable or malformed input.
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug)]
pub struct InvalidInput(pub String);

impl<E: std::fmt::Display> From<E> for InvalidInput {
    fn from(e: E) -> Self {
        InvalidInput(e.to_string())
    }
}

pub type CliResult<T> = Result<T, InvalidInput>;

/// Collects everything a command read so the report can carry a digest of it.
pub struct Ctx {
    hasher: Sha256,
}

impl Ctx {
    pub fn new(argv: &[String]) -> Self {
        let mut hasher = Sha256::new();
        for a in argv {
            hasher.update(a.as_bytes());
            hasher.update([0]);
        }
        Ctx { hasher }
    }

    pub fn read(&mut self, path: &Path) -> CliResult<String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InvalidInput(format!("{}: {e}", path.display())))?;
        self.hasher.update((text.len() as u64).to_le_bytes());
        self.hasher.update(text.as_bytes());
        Ok(text)
    }

    pub fn finish(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

#[derive(Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failed: Vec<String>,
    pub checks: Vec<Check>,
    pub outputs: Value,
}

/// What a subcommand hands back: its outputs and the checks it ran.
pub struct Outcome {
    pub outputs: Value,
    pub checks: Vec<Check>,
    /// The artifact written by `--out`.
    pub artifact: Option<Value>,
}

impl Outcome {
    pub fn new(outputs: Value, checks: Vec<Check>) -> Self {
        Outcome { outputs, checks, artifact: None }
    }

    pub fn with_artifact(mut self, v: Value) -> Self {
        self.artifact = Some(v);
        self
    }
}

impl RunReport {
    pub fn new(command: Vec<String>, inputs_digest: String, outcome: Outcome) -> Self {
        let failed: Vec<String> = failures(&outcome.checks).into_iter().map(String::from).collect();
        RunReport {
            command,
            inputs_digest,
            ok: failed.is_empty(),
            failed,
            checks: outcome.checks,
            outputs: outcome.outputs,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.ok {
            EXIT_OK
        } else {
            EXIT_FAILED
        }
    }
}
