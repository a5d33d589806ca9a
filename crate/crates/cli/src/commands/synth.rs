use std::path::Path;

use thermotrack::data::synth_sequence;
use thermotrack::error::Result;
use thermotrack::Real;

use crate::config::parse_synth_spec;
use crate::log_info;

/// Generates a synthetic sequence directory from a spec file.
pub fn run(spec: &Path, out: &Path) -> Result<()> {
    let spec = parse_synth_spec(spec)?;
    let seq = synth_sequence::<Real>(&spec, out)?;
    log_info!(
        "wrote {} frames of {}x{} to {}",
        seq.len(),
        spec.width,
        spec.height,
        out.display()
    );
    Ok(())
}
