//! Provenance block written at the top of every output file.

use serde::{Deserialize, Serialize};

use crate::random::RNG_ALGORITHM;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Flag name and value, in the order given.
    pub parameters: Vec<(String, String)>,
    pub seed: Option<u64>,
    pub version: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Vec<(String, String)>, seed: Option<u64>) -> Self {
        RunManifest {
            command: command.into(),
            parameters,
            seed,
            version: format!("{} {} (rng {})", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"), RNG_ALGORITHM),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    /// `#`-prefixed lines; the timestamp is always the last line.
    pub fn comment_block(&self) -> String {
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let seed = self.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        format!(
            "# command: {}\n# parameters: {}\n# seed: {}\n# version: {}\n# timestamp: {}\n",
            self.command,
            params.join(" "),
            seed,
            self.version,
            self.timestamp
        )
    }
}
