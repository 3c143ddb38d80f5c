use serde::Serialize;

use crate::error::{Error, Result};

/// Pretty JSON for sweep rows, validation reports or angle summaries.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::invalid(format!("json encoding failed: {e}")))
}
