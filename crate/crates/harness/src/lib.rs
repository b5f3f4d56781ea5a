//! Experiment runner for `fht-core`: configuration, sweeps over parameter
//! grids, and CSV / JSON-lines output.

pub mod config;
pub mod experiments;
pub mod record;

use serde_json::{Map, Value};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric failure in {experiment}: {source}")]
    Numeric {
        experiment: String,
        params: Map<String, Value>,
        source: fht_core::Error,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// 2 for configuration errors, 3 for numeric failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Numeric { .. } => 3,
            HarnessError::Io(_) => 1,
        }
    }

    /// JSON object describing the error (with the failing point's parameters
    /// for numeric failures).
    pub fn to_json(&self) -> Value {
        match self {
            HarnessError::Numeric {
                experiment,
                params,
                source,
            } => serde_json::json!({
                "error": "numeric",
                "experiment": experiment,
                "params": params,
                "message": source.to_string(),
            }),
            HarnessError::Config(m) => serde_json::json!({ "error": "config", "message": m }),
            HarnessError::Io(e) => serde_json::json!({ "error": "io", "message": e.to_string() }),
        }
    }
}
