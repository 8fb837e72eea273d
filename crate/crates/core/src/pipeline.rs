//! Stage glue shared by the binary and the examples.

use serde::{Deserialize, Serialize};

use crate::advanced::{extract_advanced_features, fuse};
use crate::error::Result;
use crate::ingest::clip_recordings;
use crate::model::{FeatureMatrix, RawDataset};
use crate::stats::extract_stat_features;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureSet {
    Stat,
    Advanced,
    Fused,
}

/// Optionally clips each recording at `clip_z` standard deviations, then
/// extracts the requested feature set.
pub fn featurize(ds: &RawDataset, set: FeatureSet, clip_z: Option<f64>) -> Result<FeatureMatrix> {
    let clipped;
    let ds = match clip_z {
        Some(z) => {
            clipped = clip_recordings(ds, z)?;
            &clipped
        }
        None => ds,
    };
    match set {
        FeatureSet::Stat => Ok(extract_stat_features(ds)),
        FeatureSet::Advanced => extract_advanced_features(ds),
        FeatureSet::Fused => fuse(&extract_stat_features(ds), &extract_advanced_features(ds)?),
    }
}
