//! Run manifests: what produced an output file, in enough detail to
//! reproduce it.

use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use rfpm_core::InterpretationFlags;
use serde::{Deserialize, Serialize};

use crate::io::{json_bytes, read_text, write_atomic};
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Every parameter of the run except output paths.
    pub parameters: serde_json::Value,
    pub interpretation_flags: InterpretationFlags,
    pub tool_version: String,
    /// RFC 3339; taken from `SOURCE_DATE_EPOCH` when set.
    pub timestamp: String,
}

impl RunManifest {
    pub fn new<P: Serialize>(command: &str, parameters: &P, flags: InterpretationFlags) -> Result<Self, CliError> {
        Ok(Self {
            command: command.to_string(),
            parameters: serde_json::to_value(parameters).map_err(|e| CliError::Runtime(e.to_string()))?,
            interpretation_flags: flags,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = read_text(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::Runtime(format!("{}: bad manifest: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        write_atomic(path, &json_bytes(self)?)
    }
}

fn timestamp() -> String {
    let now = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::from_timestamp(secs, 0))
        .unwrap_or_else(Utc::now);
    now.to_rfc3339_opts(SecondsFormat::Secs, true)
}
