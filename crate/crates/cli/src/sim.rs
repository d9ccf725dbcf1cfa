//! Simulation configs read from JSON files.

use std::path::Path;

use anyhow::{anyhow, Context, Result};
use modlat_core::SimConfig;

/// Parse a config, naming the offending field on failure.
pub fn parse_config(text: &str) -> Result<SimConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: SimConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            anyhow!("invalid config: {inner}")
        } else {
            anyhow!("invalid config field `{path}`: {inner}")
        }
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<SimConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text).with_context(|| path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str =
        r#"{"n":8,"spec":{"snr":4.0},"rate":0.3,"ensemble":{"kind":"spherical"},"decoder":"ml","trials":10,"seed":1}"#;

    #[test]
    fn parses_minimal_config() {
        assert_eq!(parse_config(GOOD).unwrap().n, 8);
    }

    #[test]
    fn names_bad_fields() {
        let bad = GOOD.replace("\"trials\":10", "\"trials\":\"many\"");
        let msg = format!("{:#}", parse_config(&bad).unwrap_err());
        assert!(msg.contains("trials"), "{msg}");
        let bad = GOOD.replace("{\"snr\":4.0}", "{\"snr\":-1.0}");
        let msg = format!("{:#}", parse_config(&bad).unwrap_err());
        assert!(msg.contains("snr"), "{msg}");
        let missing = GOOD.replace(",\"seed\":1", "");
        let msg = format!("{:#}", parse_config(&missing).unwrap_err());
        assert!(msg.contains("seed"), "{msg}");
    }
}
