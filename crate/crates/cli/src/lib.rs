//! Scenario runner behind the `okdyn` binary.

pub mod prepare;
pub mod run;
pub mod scenario;

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use okdyn::presets::{FamilySpec, GeneratorSpec, Presets};
use okdyn::ring::FieldSpecText;

pub use prepare::{prepare, Job};
pub use run::{run_file, run_jobs, Outcome};
pub use scenario::ScenarioFile;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("validation error in scenario '{scenario}' (line {line}), key '{key}': {message}")]
    Validation {
        scenario: String,
        line: usize,
        key: String,
        message: String,
    },
    #[error("task error in scenario '{scenario}' (line {line}): {message}")]
    Task { scenario: String, line: usize, message: String },
    #[error("preset file {path}: {message}")]
    Preset { path: String, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

/// Parses scenario text, mapping toml errors to a line and column.
pub fn parse_scenarios(text: &str) -> Result<ScenarioFile, CliError> {
    toml::from_str(text).map_err(|e: toml::de::Error| {
        let (line, column) = e.span().map_or((1, 1), |s| scenario::position(text, s.start));
        CliError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresetFile {
    #[serde(default)]
    fields: std::collections::BTreeMap<String, FieldSpecText>,
    #[serde(default)]
    generators: std::collections::BTreeMap<String, GeneratorSpec>,
    #[serde(default)]
    families: std::collections::BTreeMap<String, FamilySpec>,
}

/// Built-in presets extended by every `*.toml` file in `dir`, read in
/// file-name order; later entries replace earlier ones of the same name.
pub fn load_presets(dir: Option<&Path>) -> Result<Presets, CliError> {
    let mut presets = Presets::builtin();
    let Some(dir) = dir else {
        return Ok(presets);
    };
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    for path in files {
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        let file: PresetFile = toml::from_str(&text).map_err(|e| CliError::Preset {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        for (name, f) in file.fields {
            okdyn::NumberField::from_spec(&f).map_err(|e| CliError::Preset {
                path: path.display().to_string(),
                message: format!("field {name}: {e}"),
            })?;
            presets.add_field(&name, f);
        }
        for (name, g) in file.generators {
            presets.add_generator(&name, g);
            if presets.generator(&name).is_none() {
                return Err(CliError::Preset {
                    path: path.display().to_string(),
                    message: format!("generator {name} is not an irrational quadratic number"),
                });
            }
        }
        for (name, f) in file.families {
            presets.add_family(&name, f);
        }
    }
    Ok(presets)
}
