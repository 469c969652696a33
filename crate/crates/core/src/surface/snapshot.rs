//! One saved state per NDJSON line.

use serde::{Deserialize, Serialize};

use super::geometry::GeometryCache;
use super::state::{RepKind, StateData, SurfaceState};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Snapshot {
    pub step: u64,
    pub t: f64,
    pub rep: RepKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 2]>>,
    #[serde(rename = "H")]
    pub h: Vec<f64>,
    pub k_min: f64,
    pub area: f64,
}

impl Snapshot {
    pub fn of(step: u64, state: &SurfaceState, cache: &GeometryCache) -> Self {
        let (r, points) = match state.data() {
            StateData::Radial { r, .. } => (Some(r.clone()), None),
            StateData::Parametric { points } => (None, Some(points.iter().map(|p| [p[0], p[1]]).collect())),
        };
        Self {
            step,
            t: state.time(),
            rep: state.kind(),
            r,
            points,
            h: cache.mean_curvatures(),
            k_min: cache.convexity().k_min,
            area: cache.area(),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("snapshot serialization cannot fail")
    }
}
