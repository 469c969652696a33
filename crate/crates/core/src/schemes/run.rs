//! Run orchestration: step-size control, stop criteria, diagnostics and
//! snapshots.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::kernel::{MinkowskiNorm, Vector};
use crate::surface::polyline::signed_area;
use crate::surface::{compute_geometry, DirectionGrid, GeometryCache, RepKind, Snapshot, SurfaceState};

use super::config::{FlowConfig, Scheme};
use super::levelset::{step_levelset, LevelSetGrid, MARGIN_CELLS};
use super::step::{adaptive_dt, step_parametric, step_radial, MIN_DT};
use super::SchemeError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    TEnd,
    RStop,
    HCap,
    MaxSteps,
    SchemeError(String),
}

/// One row of the scalar time series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRow {
    pub step: u64,
    pub t: f64,
    pub area: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub k_min: f64,
    pub r_min: f64,
    pub r_max: f64,
    /// Step that produced this state; zero for the initial row.
    pub dt: f64,
    /// `sum H^2 dmu` of this state.
    pub h2_integral: f64,
}

impl DiagnosticsRow {
    fn of(step: u64, dt: f64, state: &SurfaceState, cache: &GeometryCache) -> Self {
        let (r_min, r_max) = state.radial_extremes();
        Self {
            step,
            t: state.time(),
            area: cache.area(),
            h_min: cache.h_min(),
            h_max: cache.h_max(),
            k_min: cache.convexity().k_min,
            r_min,
            r_max,
            dt,
            h2_integral: cache.h2_integral(),
        }
    }
}

/// Append-only record of a run.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub config: FlowConfig,
    pub norm: MinkowskiNorm,
    pub center: Vector,
    pub sigma: f64,
    /// Direction grid of radial-graph runs.
    pub grid: Option<Arc<DirectionGrid>>,
    /// Grid spacing of level-set runs.
    pub dx: Option<f64>,
    pub diagnostics: Vec<DiagnosticsRow>,
    pub snapshots: Vec<Snapshot>,
    pub halt: StopReason,
}

impl RunRecord {
    pub fn steps(&self) -> u64 {
        self.diagnostics.last().map_or(0, |d| d.step)
    }

    /// Time of the last recorded state.
    pub fn halt_time(&self) -> f64 {
        self.diagnostics.last().map_or(0.0, |d| d.t)
    }

    pub fn surface_dim(&self) -> usize {
        self.norm.dim() - 1
    }

    /// Rebuilds the surface state stored in a snapshot.
    pub fn state_at(&self, snap: &Snapshot) -> Result<SurfaceState, SchemeError> {
        let state = match (&snap.r, &snap.points, &self.grid) {
            (Some(r), _, Some(grid)) => SurfaceState::radial(self.norm, self.center, grid.clone(), r.clone())?,
            (_, Some(p), _) => {
                let pts = p.iter().map(|q| Vector::new2(q[0], q[1])).collect();
                SurfaceState::parametric(self.norm, self.center, pts)?
            }
            _ => return Err(SchemeError::WrongRepresentation),
        };
        Ok(state.with_sigma(self.sigma).with_time(snap.t))
    }
}

struct Recorder {
    record: RunRecord,
    last_snap: Option<u64>,
}

impl Recorder {
    fn push(&mut self, step: u64, dt: f64, state: &SurfaceState, cache: &GeometryCache, snapshot: bool) {
        self.record.diagnostics.push(DiagnosticsRow::of(step, dt, state, cache));
        if snapshot {
            self.snap(step, state, cache);
        }
    }

    fn snap(&mut self, step: u64, state: &SurfaceState, cache: &GeometryCache) {
        self.record.snapshots.push(Snapshot::of(step, state, cache));
        self.last_snap = Some(step);
    }
}

/// Integrates the flow from `initial` until a stop criterion fires. Errors
/// inside the loop end the run with `StopReason::SchemeError` and keep the
/// last valid state; only an unusable initial state is returned as `Err`.
pub fn run(initial: &SurfaceState, config: &FlowConfig) -> Result<RunRecord, SchemeError> {
    config.validate().map_err(|i| SchemeError::InvalidConfig(format!("{}: {}", i.key, i.reason)))?;
    let want = match config.scheme {
        Scheme::RadialGraph => RepKind::RadialGraph,
        Scheme::ParametricCurve => RepKind::ParametricCurve,
        Scheme::LevelSet => return run_levelset(initial, config),
    };
    if initial.kind() != want {
        return Err(SchemeError::WrongRepresentation);
    }
    if initial.surface_dim() != 1 {
        return Err(SchemeError::InvalidConfig("flow stepping supports curves only".into()));
    }
    let mut rec = recorder(initial, config, None);
    let mut state = initial.clone();
    let mut cache = compute_geometry(&state)?;
    rec.push(0, 0.0, &state, &cache, true);
    let mut step = 0u64;
    let eps = 1e-12 * config.t_end.max(1.0);
    let halt = loop {
        if state.time() >= config.t_end - eps {
            break StopReason::TEnd;
        }
        if config.max_steps.is_some_and(|m| step >= m) {
            break StopReason::MaxSteps;
        }
        let remaining = config.t_end - state.time();
        let dt = match config.fixed_dt {
            Some(dt) => dt.min(remaining),
            None => adaptive_dt(&state, &cache, config.cfl, remaining),
        };
        let next = match config.scheme {
            Scheme::RadialGraph => step_radial(&state, &cache, dt, config.r_stop),
            _ => step_parametric(&state, &cache, dt, config.tangential_redistribution),
        };
        let next = match next {
            Ok(s) => s,
            Err(SchemeError::Collapse { .. }) => break StopReason::RStop,
            Err(e) => break StopReason::SchemeError(e.to_string()),
        };
        let next_cache = match compute_geometry(&next) {
            Ok(c) => c,
            Err(e) => break StopReason::SchemeError(e.to_string()),
        };
        if next.radial_extremes().0 <= config.r_stop {
            break StopReason::RStop;
        }
        if next_cache.h_abs_max() > config.h_cap {
            break StopReason::HCap;
        }
        step += 1;
        state = next;
        cache = next_cache;
        rec.push(step, dt, &state, &cache, step % config.snapshot_every == 0);
    };
    if rec.last_snap != Some(step) {
        rec.snap(step, &state, &cache);
    }
    rec.record.halt = halt;
    Ok(rec.record)
}

fn recorder(initial: &SurfaceState, config: &FlowConfig, dx: Option<f64>) -> Recorder {
    Recorder {
        record: RunRecord {
            config: config.clone(),
            norm: *initial.norm(),
            center: *initial.center(),
            sigma: initial.sigma(),
            grid: initial.grid().cloned(),
            dx,
            diagnostics: Vec::new(),
            snapshots: Vec::new(),
            halt: StopReason::TEnd,
        },
        last_snap: None,
    }
}

/// Default level-set box: bounding box of the initial curve grown by
/// `max(MARGIN_CELLS + 5, 10%)` cells.
pub fn default_bounds(points: &[Vector], dx: f64) -> [f64; 4] {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        y0 = y0.min(p[1]);
        y1 = y1.max(p[1]);
    }
    let pad = ((MARGIN_CELLS + 5) as f64 * dx).max(0.1 * (x1 - x0).max(y1 - y0));
    let snap = |v: f64| (v / dx).round() * dx;
    [snap(x0 - pad), snap(x1 + pad), snap(y0 - pad), snap(y1 + pad)]
}

/// The zero set of a level-set grid as a parametric state.
fn extracted_state(grid: &LevelSetGrid, like: &SurfaceState) -> Result<SurfaceState, SchemeError> {
    let mut pts = grid.extract()?;
    if signed_area(&pts) < 0.0 {
        pts.reverse();
    }
    Ok(SurfaceState::parametric(*like.norm(), *like.center(), pts)?.with_sigma(like.sigma()).with_time(grid.time()))
}

fn level_snapshot(step: u64, state: &SurfaceState, cache: &GeometryCache) -> Snapshot {
    let mut s = Snapshot::of(step, state, cache);
    s.rep = RepKind::LevelSet;
    s
}

fn run_levelset(initial: &SurfaceState, config: &FlowConfig) -> Result<RunRecord, SchemeError> {
    let ls = &config.level_set;
    let poly = initial.positions();
    if initial.norm().dim() != 2 {
        return Err(SchemeError::InvalidGrid("level sets are planar".into()));
    }
    let bounds = ls.bounds.unwrap_or_else(|| default_bounds(&poly, ls.dx));
    let mut grid = LevelSetGrid::from_polygon(*initial.norm(), &poly, bounds, ls.dx)?;
    let mut rec = recorder(initial, config, Some(ls.dx));
    let mut state = extracted_state(&grid, initial)?;
    let mut cache = compute_geometry(&state)?;
    rec.record.diagnostics.push(DiagnosticsRow::of(0, 0.0, &state, &cache));
    rec.record.snapshots.push(level_snapshot(0, &state, &cache));
    rec.last_snap = Some(0);
    let base_dt = config.fixed_dt.unwrap_or(config.cfl * ls.dx * ls.dx);
    let eps = 1e-12 * config.t_end.max(1.0);
    let mut step = 0u64;
    let halt = loop {
        if grid.time() >= config.t_end - eps {
            break StopReason::TEnd;
        }
        if config.max_steps.is_some_and(|m| step >= m) {
            break StopReason::MaxSteps;
        }
        let dt = base_dt.min(config.t_end - grid.time()).max(MIN_DT.min(config.t_end - grid.time()));
        // the record keeps the last valid extracted curve, so the grid can
        // be advanced in place
        if let Err(e) = step_levelset(&mut grid, dt, step, ls.reinit_every, ls.reinit_iters) {
            break StopReason::SchemeError(e.to_string());
        }
        let next = match extracted_state(&grid, initial).and_then(|s| {
            let c = compute_geometry(&s)?;
            Ok((s, c))
        }) {
            Ok(x) => x,
            Err(e) => break StopReason::SchemeError(e.to_string()),
        };
        if next.0.radial_extremes().0 <= config.r_stop {
            break StopReason::RStop;
        }
        if next.1.h_abs_max() > config.h_cap {
            break StopReason::HCap;
        }
        step += 1;
        (state, cache) = next;
        rec.record.diagnostics.push(DiagnosticsRow::of(step, dt, &state, &cache));
        if step % config.snapshot_every == 0 {
            rec.record.snapshots.push(level_snapshot(step, &state, &cache));
            rec.last_snap = Some(step);
        }
    };
    if rec.last_snap != Some(step) {
        rec.record.snapshots.push(level_snapshot(step, &state, &cache));
    }
    rec.record.halt = halt;
    Ok(rec.record)
}
