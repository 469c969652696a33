//! Executable checks of the flow's qualitative theorems against run records.

mod checks;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::schemes::SchemeError;

pub use checks::{
    check_area_identity, check_comparison, check_convexity, check_evolution_identities, check_hmin_bound,
    check_wulff_selfsimilar, WULFF_TOL,
};

/// One sub-criterion of a check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckDetail {
    pub label: String,
    pub observed: f64,
    pub bound: f64,
    pub pass: bool,
    /// Time of the worst case, when the criterion is a series.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_t: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// Headline quantity compared against `bound`.
    pub observed: f64,
    pub bound: f64,
    /// Distance to the bound; positive when the check passes.
    pub margin: f64,
    pub details: Vec<CheckDetail>,
}

impl CheckResult {
    fn new(name: &str, observed: f64, bound: f64, margin: f64, details: Vec<CheckDetail>) -> Self {
        let pass = details.iter().all(|d| d.pass);
        Self { name: name.to_string(), pass, observed, bound, margin, details }
    }

    pub fn detail(&self, label: &str) -> Option<&CheckDetail> {
        self.details.iter().find(|d| d.label == label)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CheckError {
    #[error("initial data is not a Wulff shape (relative curvature spread {spread:e})")]
    WrongInitialData { spread: f64 },
    #[error("record has {found} recorded states, {needed} needed")]
    InsufficientSnapshots { found: usize, needed: usize },
    #[error("initial data is not mean convex (H_min(0) = {h_min})")]
    NotMeanConvex { h_min: f64 },
    #[error("initial data is not convex (k_min(0) = {k_min})")]
    NotConvexInitially { k_min: f64 },
    #[error("surfaces are not nested at t = 0 (gaps {outer_gap}, {inner_gap})")]
    NotNestedInitially { outer_gap: f64, inner_gap: f64 },
    #[error("tangential redistribution moves vertices along the surface; rerun with it disabled")]
    RedistributionActive,
    #[error("check needs a {0} record")]
    UnsupportedScheme(&'static str),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

impl From<crate::surface::SurfaceError> for CheckError {
    fn from(e: crate::surface::SurfaceError) -> Self {
        Self::Scheme(e.into())
    }
}

impl From<crate::kernel::NormError> for CheckError {
    fn from(e: crate::kernel::NormError) -> Self {
        Self::Scheme(e.into())
    }
}
