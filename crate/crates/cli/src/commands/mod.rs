pub mod channel;
pub mod dynamics;
pub mod ensemble;
pub mod fit;

use serde::Serialize;
use serde_json::{json, Value};

/// Serializes a derived result, or records why it could not be computed.
/// Summaries are advisory, so their failures never abort a run whose raw data is fine.
pub(crate) fn summary<T: Serialize>(r: entrocomplex::Result<T>) -> Value {
    match r {
        Ok(v) => serde_json::to_value(v).unwrap_or(Value::Null),
        Err(e) => json!({ "error": e.to_string() }),
    }
}
