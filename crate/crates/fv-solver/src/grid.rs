use crate::SolverError;
use serde::{Deserialize, Serialize};

/// Ghost-cell filling policy per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    /// Copy the nearest interior cell outward (zero-gradient outflow).
    OutflowCopy,
    Periodic,
}

/// Uniform cell-centered grid in one or two dimensions, with a ghost layer
/// wide enough for the reconstruction stencil.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub cells: Vec<usize>,
    pub ghost: usize,
    pub boundary: Vec<BoundaryKind>,
}

impl GridSpec {
    pub fn new_1d(
        lower: f64,
        upper: f64,
        cells: usize,
        boundary: BoundaryKind,
    ) -> Result<GridSpec, SolverError> {
        let g = GridSpec {
            lower: vec![lower],
            upper: vec![upper],
            cells: vec![cells],
            ghost: 2,
            boundary: vec![boundary],
        };
        g.validate()?;
        Ok(g)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn new_2d(
        lower: [f64; 2],
        upper: [f64; 2],
        cells: [usize; 2],
        boundary: [BoundaryKind; 2],
    ) -> Result<GridSpec, SolverError> {
        let g = GridSpec {
            lower: lower.to_vec(),
            upper: upper.to_vec(),
            cells: cells.to_vec(),
            ghost: 2,
            boundary: boundary.to_vec(),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let dim = self.dim();
        if !(1..=2).contains(&dim)
            || self.upper.len() != dim
            || self.cells.len() != dim
            || self.boundary.len() != dim
        {
            return Err(SolverError::BadConfig("inconsistent grid axes".into()));
        }
        for ax in 0..dim {
            if !(self.upper[ax] > self.lower[ax]) {
                return Err(SolverError::BadConfig(format!(
                    "axis {ax}: upper bound must exceed lower bound"
                )));
            }
            if self.cells[ax] < 4 {
                return Err(SolverError::BadConfig(format!(
                    "axis {ax}: need at least 4 cells"
                )));
            }
        }
        if self.ghost < 2 {
            return Err(SolverError::BadConfig(
                "ghost layer must be at least 2 cells for limited reconstruction".into(),
            ));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// Cell width along `axis`.
    pub fn dx(&self, axis: usize) -> f64 {
        (self.upper[axis] - self.lower[axis]) / self.cells[axis] as f64
    }

    /// Cell volume (length in 1D, area in 2D).
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|ax| self.dx(ax)).product()
    }

    /// Center coordinate of interior cell `i` along `axis`.
    pub fn center(&self, axis: usize, i: usize) -> f64 {
        self.lower[axis] + (i as f64 + 0.5) * self.dx(axis)
    }
}
