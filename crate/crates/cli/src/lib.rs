//! Batch runner for rapidec scenarios: TOML scenario files, bundled
//! presets, CSV/JSON artifacts and a summary table.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod runner;

use std::path::Path;

pub use config::{parse_config, Check, ConfigErrors, RunConfig, ScenarioConfig};
pub use error::CliError;
pub use runner::{run, summary_table, RunOptions, RunReport};

/// Exit status for configuration and I/O problems.
pub const EXIT_CONFIG: i32 = 2;

/// Reads a scenario file, or a bundled preset when no such file exists.
pub fn load(arg: &str) -> Result<RunConfig, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        return Ok(parse_config(&text, arg, base)?);
    }
    match presets::find(arg) {
        Some(p) => Ok(parse_config(p.text, p.name, Path::new("."))?),
        None => Err(CliError::UnknownConfig(arg.to_string())),
    }
}
