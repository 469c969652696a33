use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::kernel::{NormError, NormSpec, Vector};
use crate::schemes::{FlowConfig, Scheme};
use crate::surface::{parametric_state, radial_state, Shape, SurfaceError, SurfaceState};

use super::ConfigError;

/// Directions used for the Busemann-Hausdorff quadrature.
const BH_SAMPLES: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    pub norm: NormSpec,
    pub initial: InitialSpec,
    pub flow: FlowConfig,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub volume: VolumeNormalization,
    /// Radii of the enclosing Wulff spheres for the comparison check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ComparisonSpec>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeNormalization {
    #[default]
    Unit,
    BusemannHausdorff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    Circle,
    Ellipse,
    Wulff,
    RadialValues,
    Points,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    pub kind: InitialKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semi_axes: Option<Vec<f64>>,
    /// Radial-graph values on the inverse-sphere direction grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 2]>>,
    /// Vertex count for closed-form shapes.
    #[serde(default = "default_n_points")]
    pub n_points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonSpec {
    pub inner_radius: f64,
    pub outer_radius: f64,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_n_points() -> usize {
    256
}

pub fn parse_config(path: &Path) -> Result<RunConfigFile, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => ConfigError::FileNotFound(path.to_path_buf()),
        _ => ConfigError::Read { path: path.to_path_buf(), source: e },
    })?;
    parse_config_str(&text)
}

/// Parses and validates a config document.
pub fn parse_config_str(text: &str) -> Result<RunConfigFile, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: RunConfigFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let key = e.path().to_string();
        let key = if key == "." { String::new() } else { key };
        ConfigError::schema(key, e.into_inner().to_string())
    })?;
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfigFile {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Err(e) = self.norm.build() {
            return Err(match e {
                NormError::InvalidParams { field, reason } => ConfigError::schema(format!("norm.{field}"), reason),
                other => ConfigError::schema("norm", other.to_string()),
            });
        }
        self.flow.validate().map_err(|i| ConfigError::schema(format!("flow.{}", i.key), i.reason))?;
        self.initial.validate(self.norm.dim)?;
        if let Some(c) = &self.comparison {
            if !(c.inner_radius > 0.0 && c.outer_radius > c.inner_radius) {
                return Err(ConfigError::schema("comparison", "need 0 < inner_radius < outer_radius"));
            }
        }
        Ok(())
    }

    pub fn center(&self) -> Vector {
        match &self.initial.center {
            Some(c) => Vector::from_slice(c),
            None => Vector::zeros(self.norm.dim),
        }
    }
}

impl InitialSpec {
    fn validate(&self, dim: usize) -> Result<(), ConfigError> {
        let missing = |key: &str| {
            Err(ConfigError::schema(format!("initial.{key}"), format!("required for {:?} data", self.kind)))
        };
        if let Some(c) = &self.center {
            if c.len() != dim || c.iter().any(|v| !v.is_finite()) {
                return Err(ConfigError::schema("initial.center", "must have one finite entry per dimension"));
            }
        }
        if self.n_points < 16 {
            return Err(ConfigError::schema("initial.n_points", "must be >= 16"));
        }
        match self.kind {
            InitialKind::Circle | InitialKind::Wulff => match self.radius {
                None => return missing("radius"),
                Some(r) if !(r > 0.0 && r.is_finite()) => {
                    return Err(ConfigError::schema("initial.radius", "must be positive"))
                }
                _ => {}
            },
            InitialKind::Ellipse => match &self.semi_axes {
                None => return missing("semi_axes"),
                Some(a) if a.len() != dim || a.iter().any(|v| !(*v > 0.0 && v.is_finite())) => {
                    return Err(ConfigError::schema("initial.semi_axes", "need one positive entry per dimension"))
                }
                _ => {}
            },
            InitialKind::RadialValues => match &self.values {
                None => return missing("values"),
                Some(v) if v.len() < 16 || v.len() % 2 == 1 || v.iter().any(|r| !(*r > 0.0 && r.is_finite())) => {
                    return Err(ConfigError::schema("initial.values", "need an even count >= 16 of positive values"))
                }
                _ => {}
            },
            InitialKind::Points => match &self.points {
                None => return missing("points"),
                Some(p) if p.len() < 8 || p.iter().flatten().any(|v| !v.is_finite()) => {
                    return Err(ConfigError::schema("initial.points", "need at least 8 finite points"))
                }
                _ => {}
            },
        }
        if dim != 2 && matches!(self.kind, InitialKind::Points) {
            return Err(ConfigError::schema("initial.kind", "points data is planar"));
        }
        Ok(())
    }

    fn shape(&self) -> Shape {
        match self.kind {
            InitialKind::Circle => Shape::Circle { radius: self.radius.unwrap_or(1.0) },
            InitialKind::Wulff => Shape::Wulff { radius: self.radius.unwrap_or(1.0) },
            InitialKind::Ellipse => Shape::Ellipse { semi_axes: self.semi_axes.clone().unwrap_or_default() },
            InitialKind::RadialValues => Shape::RadialValues { values: self.values.clone().unwrap_or_default() },
            InitialKind::Points => {
                Shape::Points { points: self.points.iter().flatten().map(|p| Vector::new2(p[0], p[1])).collect() }
            }
        }
    }
}

/// Builds the initial state in the representation the configured scheme
/// evolves; level-set runs start from the parametric curve.
pub fn build_initial(cfg: &RunConfigFile) -> Result<SurfaceState, SurfaceError> {
    let norm = cfg.norm.build()?;
    let center = cfg.center();
    let shape = cfg.initial.shape();
    let n = match &shape {
        Shape::RadialValues { values } => values.len(),
        _ => cfg.initial.n_points,
    };
    let state = match cfg.flow.scheme {
        Scheme::RadialGraph => radial_state(norm, center, &shape, n, 1)?,
        Scheme::ParametricCurve | Scheme::LevelSet => parametric_state(norm, center, &shape, n)?,
    };
    Ok(match cfg.volume {
        VolumeNormalization::Unit => state,
        VolumeNormalization::BusemannHausdorff => state.with_sigma(norm.bh_sigma(BH_SAMPLES)),
    })
}
