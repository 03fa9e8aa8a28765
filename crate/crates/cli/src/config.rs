use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

/// Overlays the keys of a JSON config file on the flag-derived `base`.
pub fn merge<T: Serialize + DeserializeOwned>(base: T, path: Option<&Path>) -> Result<T, CliError> {
    let Some(path) = path else {
        return Ok(base);
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::args(format!("InvalidConfig: {}: {e}", path.display())))?;
    let overrides: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::args(format!("InvalidConfig: {}: {e}", path.display())))?;
    let Value::Object(overrides) = overrides else {
        return Err(CliError::args(format!("InvalidConfig: {}: expected a JSON object", path.display())));
    };
    let mut merged = serde_json::to_value(base).expect("flag values serialize");
    let Value::Object(fields) = &mut merged else {
        unreachable!("option structs serialize to objects");
    };
    fields.extend(overrides);
    serde_json::from_value(merged)
        .map_err(|e| CliError::args(format!("InvalidConfig: {}: {e}", path.display())))
}
