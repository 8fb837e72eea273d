use serde::{Deserialize, Serialize};

use super::TrainedModel;
use crate::error::{Error, Result};
use crate::ingest::MinMaxScaler;

pub const MODEL_FORMAT: &str = "eeg-affect-model";
pub const MODEL_VERSION: u32 = 1;

/// Self-describing model file: learner, feature names and the scaler that
/// must be applied to inputs before prediction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub format: String,
    pub version: u32,
    pub feature_names: Vec<String>,
    pub scaler: Option<MinMaxScaler>,
    pub model: TrainedModel,
}

impl ModelDocument {
    pub fn new(model: TrainedModel, feature_names: Vec<String>, scaler: Option<MinMaxScaler>) -> Self {
        Self { format: MODEL_FORMAT.into(), version: MODEL_VERSION, feature_names, scaler, model }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_str(text)?;
        if doc.format != MODEL_FORMAT {
            return Err(Error::Model(format!("unknown format `{}`", doc.format)));
        }
        if doc.version != MODEL_VERSION {
            return Err(Error::Model(format!("unsupported version {}", doc.version)));
        }
        Ok(doc)
    }
}
