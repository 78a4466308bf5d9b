//! Provenance block embedded in every artifact the tool writes.

use serde::{Deserialize, Serialize};

/// What produced a file: the subcommand, the tool version, the echoed
/// configuration, every seed involved, and digests of the parsed inputs.
/// Timestamps honor SOURCE_DATE_EPOCH; purely seed-determined artifacts
/// omit them so identical invocations write identical bytes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub args: serde_json::Value,
    pub seeds: Vec<u64>,
    pub input_digests: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
}

impl RunManifest {
    pub fn new(
        command: &str,
        args: serde_json::Value,
        seeds: Vec<u64>,
        input_digests: Vec<String>,
        stamped: bool,
    ) -> RunManifest {
        RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            args,
            seeds,
            input_digests,
            timestamp_unix: if stamped { Some(timestamp()) } else { None },
        }
    }
}

fn timestamp() -> u64 {
    if let Ok(epoch) = std::env::var("SOURCE_DATE_EPOCH") {
        if let Ok(value) = epoch.trim().parse::<u64>() {
            return value;
        }
    }
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unstamped_manifests_serialize_without_a_timestamp() {
        let m = RunManifest::new("gen", serde_json::json!({"n": 4}), vec![7], vec![], false);
        let text = serde_json::to_string(&m).unwrap();
        assert!(!text.contains("timestamp_unix"));
        let back: RunManifest = serde_json::from_str(&text).unwrap();
        assert_eq!(back.command, "gen");
        assert_eq!(back.seeds, vec![7]);
        assert_eq!(back.timestamp_unix, None);
    }

    #[test]
    fn stamped_manifests_round_trip() {
        let m = RunManifest::new("verify", serde_json::json!({}), vec![], vec![], true);
        let text = serde_json::to_string(&m).unwrap();
        let back: RunManifest = serde_json::from_str(&text).unwrap();
        assert_eq!(back.timestamp_unix, m.timestamp_unix);
        assert!(m.timestamp_unix.is_some());
    }
}
