use crate::field::StateField;
use crate::grid::GridSpec;
use crate::limiter::LimiterKind;
use crate::step::step_any;
use crate::SolverError;
use pde_core::PdeSystem;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FluxKind {
    LaxFriedrichs,
    Roe,
}

impl FluxKind {
    pub fn parse(s: &str) -> Option<FluxKind> {
        Some(match s {
            "lax_friedrichs" => FluxKind::LaxFriedrichs,
            "roe" => FluxKind::Roe,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            FluxKind::LaxFriedrichs => "lax_friedrichs",
            FluxKind::Roe => "roe",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub flux: FluxKind,
    pub limiter: LimiterKind,
    pub cfl: f64,
    pub t_end: f64,
    pub frame_count: usize,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(SolverError::BadConfig(format!(
                "cfl {} must lie in (0, 1]",
                self.cfl
            )));
        }
        if self.frame_count < 1 {
            return Err(SolverError::BadConfig("frame_count must be >= 1".into()));
        }
        if !(self.t_end >= 0.0) {
            return Err(SolverError::BadConfig("t_end must be >= 0".into()));
        }
        Ok(())
    }
}

/// What produced a frame series: flux kind, limiter kind, CFL coefficient,
/// and grid resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverDescriptor {
    pub flux: FluxKind,
    pub limiter: LimiterKind,
    pub cfl: f64,
    pub resolution: Vec<usize>,
}

/// Time-stamped sequence of fields on a fixed grid; the training data and
/// ground truth for everything downstream.
#[derive(Debug, Clone)]
pub struct FrameSeries {
    pub times: Vec<f64>,
    pub frames: Vec<StateField>,
    pub provenance: SolverDescriptor,
}

impl FrameSeries {
    pub fn grid(&self) -> &GridSpec {
        &self.frames[0].grid
    }

    pub fn m(&self) -> usize {
        self.frames[0].m()
    }
}

/// Uniformly spaced output times including t = 0 and t_end.
pub fn output_times(t_end: f64, frame_count: usize) -> Vec<f64> {
    if frame_count == 1 {
        return vec![0.0];
    }
    (0..frame_count)
        .map(|k| t_end * k as f64 / (frame_count - 1) as f64)
        .collect()
}

/// Evolve `initial_data` (sampled at cell centers) and record frames at
/// uniformly spaced output times. The last step before each output time is
/// clipped to land on it exactly, which keeps runs bit-deterministic and
/// frame times comparable across flux choices.
pub fn run_simulation(
    sys: &PdeSystem,
    grid: &GridSpec,
    initial_data: &dyn Fn(&[f64]) -> Vec<f64>,
    config: &SolverConfig,
) -> Result<FrameSeries, SolverError> {
    grid.validate()?;
    config.validate()?;
    if grid.dim() != sys.dim() {
        return Err(SolverError::Mismatch(format!(
            "{}D grid for a {}D system",
            grid.dim(),
            sys.dim()
        )));
    }
    let mut field = StateField::from_fn(grid.clone(), sys.m(), |x| initial_data(x));
    field.validate(sys)?;
    let times = output_times(config.t_end, config.frame_count);
    let mut frames = Vec::with_capacity(times.len());
    frames.push(field.clone());
    let mut t = 0.0f64;
    for &target in &times[1..] {
        while t < target {
            let cap = target - t;
            let (next, dt) = step_any(sys, &field, config, Some(cap))?;
            field = next;
            // Land exactly on the output time without accumulation drift.
            if dt >= cap {
                t = target;
            } else {
                t += dt;
            }
        }
        frames.push(field.clone());
    }
    Ok(FrameSeries {
        times,
        frames,
        provenance: SolverDescriptor {
            flux: config.flux,
            limiter: config.limiter,
            cfl: config.cfl,
            resolution: grid.cells.clone(),
        },
    })
}
