pub mod eval;
pub mod stats;
pub mod synth;
pub mod track;
pub mod translate;

use std::path::Path;

use thermotrack::error::{Error, Result};

use crate::config::{parse_config, render_effective, RunConfig};

/// Loads the run configuration (defaults when no file given).
pub fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    match path {
        Some(p) => parse_config(p),
        None => Ok(RunConfig::default()),
    }
}

/// Writes the effective configuration into the output directory.
pub fn echo_config(dir: &Path, cfg: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join("effective_config.txt");
    std::fs::write(&path, render_effective(cfg)).map_err(|e| Error::io(&path, e))
}
