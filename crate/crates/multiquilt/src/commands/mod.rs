//! Subcommand implementations. Each returns the `result` part of the report.

mod algebra;
mod combinatorics;
mod numerics;

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::cli::{CliError, Command};
use crate::formats::{parse_document, FormatError};

pub use algebra::{bundled_dga, bundled_morphism};

pub fn dispatch(command: &Command, provenance: &str) -> Result<Value, CliError> {
    match command {
        Command::Enumerate(a) => combinatorics::enumerate(a),
        Command::Faces(a) => combinatorics::faces(a),
        Command::Relations(a) => combinatorics::relations(a),
        Command::Glue(a) => combinatorics::glue(a),
        Command::Surface(a) => combinatorics::surface(a, provenance),
        Command::AinftyCheck(a) => algebra::ainfty_check(a),
        Command::Decay(a) => numerics::decay(a, provenance),
        Command::Preglue(a) => numerics::preglue(a, provenance),
        Command::GlueNewton(a) => numerics::glue_newton(a, provenance),
        Command::Embed(a) => numerics::embed(a, provenance),
        Command::Surject(a) => numerics::surject(a),
    }
}

pub(crate) fn to_value(x: impl Serialize) -> Result<Value, CliError> {
    Ok(serde_json::to_value(x).expect("results serialize"))
}

pub(crate) fn read_input<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_document(&text).map_err(|e| match e {
        FormatError::Json(j) => CliError::Input {
            path: path.to_path_buf(),
            message: j.to_string(),
        },
        other => CliError::domain("format", other),
    })
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}
