//! Loading run configurations from disk.

use std::path::Path;

use anyhow::{Context, Result};

pub use rolecomms::bench::RunConfig;

pub fn load(path: &Path) -> Result<RunConfig> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    RunConfig::from_json(&text).with_context(|| format!("loading {}", path.display()))
}
