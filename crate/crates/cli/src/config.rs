//! Model config files: a JSON object in the `ModelSpec` schema (variant
//! selected by the `"type"` field, snake_case field names).
//!
//! Errors carry a JSON pointer to the offending field where one can be
//! attributed.

use smalltime_core::model::{ModelError, ModelSpec};
use std::fmt;
use std::path::Path;

/// Config ingestion failure.
#[derive(Debug)]
pub enum ConfigError {
    /// File could not be read.
    Io(String),
    /// Not valid JSON at all.
    Syntax {
        /// 1-based line.
        line: usize,
        /// 1-based column.
        column: usize,
        /// Parser message.
        message: String,
    },
    /// JSON does not match the model schema; `pointer` locates the field.
    Schema {
        /// JSON pointer ("/jumps/alpha" style).
        pointer: String,
        /// What went wrong.
        message: String,
    },
    /// Schema-valid but violates a model invariant.
    Invalid {
        /// JSON pointer of the offending field (best effort).
        pointer: String,
        /// The violated constraint.
        message: String,
    },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(m) => write!(f, "config error: {m}"),
            ConfigError::Syntax { line, column, message } => {
                write!(f, "config error at line {line}, column {column}: {message}")
            }
            ConfigError::Schema { pointer, message } => {
                write!(f, "config error at `{pointer}`: {message}")
            }
            ConfigError::Invalid { pointer, message } => {
                write!(f, "config error at `{pointer}`: {message}")
            }
        }
    }
}

impl std::error::Error for ConfigError {}

/// Locates the first schema violation in a model config object: a missing or
/// non-numeric required field, a bad variant tag, or a malformed jump/
/// coefficient subobject. Tag-based enum deserialization buffers its content,
/// so serde's own path tracking stops at the object root; this walker
/// recovers the pointer.
fn locate_schema_issue(v: &serde_json::Value) -> Option<String> {
    let obj = match v.as_object() {
        Some(o) => o,
        None => return Some(String::new()),
    };
    let ty = match obj.get("type").and_then(|t| t.as_str()) {
        Some(t) => t,
        None => return Some("/type".to_string()),
    };
    let check_nums = |fields: &[&str]| -> Option<String> {
        fields
            .iter()
            .find(|f| !obj.get(**f).map(serde_json::Value::is_number).unwrap_or(false))
            .map(|f| format!("/{f}"))
    };
    let jumps_issue = |key: &str| -> Option<String> {
        match obj.get(key) {
            None | Some(serde_json::Value::Null) => None,
            Some(j) => locate_jump_issue(j).map(|p| format!("/{key}{p}")),
        }
    };
    match ty {
        "frozen_levy" => check_nums(&["s0", "sigma0"]).or_else(|| jumps_issue("jumps")),
        "heston" => check_nums(&[
            "s0",
            "v0",
            "mean_reversion",
            "long_run_var",
            "vol_of_vol",
            "correlation",
        ]),
        "levy_sde" => check_nums(&["s0", "driver_sigma"])
            .or_else(|| match obj.get("coefficient").and_then(|c| c.as_object()) {
                None => Some("/coefficient".to_string()),
                Some(c) => match c.get("id").and_then(|i| i.as_str()) {
                    Some("linear") if c.get("a").map(|x| x.is_number()) == Some(true) => None,
                    Some("affine")
                        if c.get("a").map(|x| x.is_number()) == Some(true)
                            && c.get("b").map(|x| x.is_number()) == Some(true) =>
                    {
                        None
                    }
                    Some("linear") => Some("/coefficient/a".to_string()),
                    Some("affine") => Some("/coefficient/a".to_string()),
                    _ => Some("/coefficient/id".to_string()),
                },
            })
            .or_else(|| jumps_issue("driver_jumps")),
        _ => Some("/type".to_string()),
    }
}

fn locate_jump_issue(v: &serde_json::Value) -> Option<String> {
    let obj = match v.as_object() {
        Some(o) => o,
        None => return Some(String::new()),
    };
    let ty = match obj.get("type").and_then(|t| t.as_str()) {
        Some(t) => t,
        None => return Some("/type".to_string()),
    };
    let check_nums = |fields: &[&str]| -> Option<String> {
        fields
            .iter()
            .find(|f| !obj.get(**f).map(serde_json::Value::is_number).unwrap_or(false))
            .map(|f| format!("/{f}"))
    };
    match ty {
        "compound_poisson" => match obj.get("atoms").and_then(|a| a.as_array()) {
            None => Some("/atoms".to_string()),
            Some(atoms) => atoms.iter().enumerate().find_map(|(i, a)| {
                let ok = a.as_object().map(|o| {
                    o.get("size").map(|x| x.is_number()) == Some(true)
                        && o.get("intensity").map(|x| x.is_number()) == Some(true)
                });
                if ok == Some(true) {
                    None
                } else {
                    Some(format!("/atoms/{i}"))
                }
            }),
        },
        "stable" => check_nums(&["alpha", "f_plus", "f_minus"]),
        "tempered_stable" => check_nums(&[
            "alpha_plus",
            "alpha_minus",
            "c_plus",
            "c_minus",
            "decay_plus",
            "decay_minus",
        ]),
        "nig" => check_nums(&["rho"]),
        "variance_gamma" => check_nums(&["c_plus", "c_minus", "decay_plus", "decay_minus"]),
        _ => Some("/type".to_string()),
    }
}

/// Depth-first search for the pointer of the first occurrence of `key`.
fn find_pointer(value: &serde_json::Value, key: &str) -> Option<String> {
    match value {
        serde_json::Value::Object(map) => {
            if map.contains_key(key) {
                return Some(format!("/{key}"));
            }
            for (k, v) in map {
                if let Some(p) = find_pointer(v, key) {
                    return Some(format!("/{k}{p}"));
                }
            }
            None
        }
        serde_json::Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                if let Some(p) = find_pointer(v, key) {
                    return Some(format!("/{i}{p}"));
                }
            }
            None
        }
        _ => None,
    }
}

/// Parses and validates a model from JSON text.
pub fn model_from_str(text: &str) -> Result<ModelSpec, ConfigError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let deserializer = value.clone();
    let model: ModelSpec = serde_path_to_error::deserialize(deserializer).map_err(|e| {
        let path = e.path().to_string();
        let pointer = if path == "." {
            locate_schema_issue(&value).unwrap_or_default()
        } else {
            format!("/{}", path.replace('.', "/"))
        };
        ConfigError::Schema { pointer, message: e.inner().to_string() }
    })?;
    model.validate().map_err(|err| {
        let pointer = match err {
            ModelError::OutOfRange { field, .. } => {
                find_pointer(&value, field).unwrap_or_else(|| format!("/{field}"))
            }
            _ => String::new(),
        };
        ConfigError::Invalid { pointer, message: err.to_string() }
    })?;
    Ok(model)
}

/// Reads and validates a model config file.
pub fn load_model(path: &Path) -> Result<ModelSpec, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
    model_from_str(&text)
}
