//! Flow configuration and its validation.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[default]
    RadialGraph,
    ParametricCurve,
    LevelSet,
}

/// Grid settings for the level-set scheme.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSetConfig {
    #[serde(default = "default_dx")]
    pub dx: f64,
    /// `[x_min, x_max, y_min, y_max]`; derived from the initial shape when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<[f64; 4]>,
    #[serde(default = "default_reinit_every")]
    pub reinit_every: u64,
    #[serde(default = "default_reinit_iters")]
    pub reinit_iters: usize,
}

impl Default for LevelSetConfig {
    fn default() -> Self {
        Self {
            dx: default_dx(),
            bounds: None,
            reinit_every: default_reinit_every(),
            reinit_iters: default_reinit_iters(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowConfig {
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    pub t_end: f64,
    #[serde(default = "default_r_stop")]
    pub r_stop: f64,
    #[serde(default = "default_h_cap")]
    pub h_cap: f64,
    #[serde(default = "default_snapshot_every")]
    pub snapshot_every: u64,
    /// Parametric scheme only.
    #[serde(default = "default_true")]
    pub tangential_redistribution: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<u64>,
    /// Replaces the adaptive step; still clamped to the remaining time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_dt: Option<f64>,
    #[serde(default)]
    pub level_set: LevelSetConfig,
}

/// A rejected configuration field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigIssue {
    pub key: &'static str,
    pub reason: String,
}

impl FlowConfig {
    pub fn new(scheme: Scheme, t_end: f64) -> Self {
        Self {
            scheme,
            cfl: default_cfl(),
            t_end,
            r_stop: default_r_stop(),
            h_cap: default_h_cap(),
            snapshot_every: default_snapshot_every(),
            tangential_redistribution: true,
            max_steps: None,
            fixed_dt: None,
            level_set: LevelSetConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigIssue> {
        let issue = |key, reason: &str| Err(ConfigIssue { key, reason: reason.to_string() });
        if !(self.cfl > 0.0 && self.cfl <= 0.5) {
            return issue("cfl", "must be in (0,0.5]");
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return issue("t_end", "must be finite and >= 0");
        }
        if !(self.r_stop > 0.0) {
            return issue("r_stop", "must be > 0");
        }
        if !(self.h_cap > 0.0) {
            return issue("h_cap", "must be > 0");
        }
        if self.snapshot_every == 0 {
            return issue("snapshot_every", "must be >= 1");
        }
        if let Some(dt) = self.fixed_dt {
            if !(dt > 0.0) {
                return issue("fixed_dt", "must be > 0");
            }
        }
        let ls = &self.level_set;
        if !(ls.dx > 0.0) {
            return issue("level_set.dx", "must be > 0");
        }
        if ls.reinit_every == 0 {
            return issue("level_set.reinit_every", "must be >= 1");
        }
        if let Some(b) = ls.bounds {
            if !(b[0] < b[1] && b[2] < b[3]) {
                return issue("level_set.bounds", "must satisfy x_min < x_max and y_min < y_max");
            }
        }
        Ok(())
    }
}

fn default_cfl() -> f64 {
    0.2
}

fn default_r_stop() -> f64 {
    0.05
}

fn default_h_cap() -> f64 {
    1e4
}

fn default_snapshot_every() -> u64 {
    10
}

fn default_true() -> bool {
    true
}

fn default_dx() -> f64 {
    0.0125
}

fn default_reinit_every() -> u64 {
    20
}

fn default_reinit_iters() -> usize {
    5
}
