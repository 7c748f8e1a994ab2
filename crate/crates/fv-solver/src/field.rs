use crate::grid::{BoundaryKind, GridSpec};
use crate::SolverError;
use pde_core::PdeSystem;

/// Cell-averaged conserved variables on a grid, including the ghost layer.
/// Storage is row-major with x fastest and the m components of a cell
/// contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct StateField {
    pub grid: GridSpec,
    m: usize,
    nxt: usize,
    nyt: usize,
    data: Vec<f64>,
}

impl StateField {
    pub fn zeros(grid: GridSpec, m: usize) -> StateField {
        let g = grid.ghost;
        let nxt = grid.cells[0] + 2 * g;
        let nyt = if grid.dim() == 2 {
            grid.cells[1] + 2 * g
        } else {
            1
        };
        StateField {
            grid,
            m,
            nxt,
            nyt,
            data: vec![0.0; nxt * nyt * m],
        }
    }

    /// Fill interior cells by sampling `f` at cell centers, then fill ghosts.
    pub fn from_fn(grid: GridSpec, m: usize, f: impl Fn(&[f64]) -> Vec<f64>) -> StateField {
        let mut field = StateField::zeros(grid, m);
        let (nx, ny) = field.interior_extent();
        for iy in 0..ny {
            for ix in 0..nx {
                let mut point = vec![field.grid.center(0, ix)];
                if field.grid.dim() == 2 {
                    point.push(field.grid.center(1, iy));
                }
                let vals = f(&point);
                assert_eq!(vals.len(), m, "initial data component count mismatch");
                field.set_interior(ix, iy, &vals);
            }
        }
        field.fill_ghosts();
        field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Interior cell counts (nx, ny); ny = 1 in 1D.
    pub fn interior_extent(&self) -> (usize, usize) {
        let nx = self.grid.cells[0];
        let ny = if self.grid.dim() == 2 {
            self.grid.cells[1]
        } else {
            1
        };
        (nx, ny)
    }

    #[inline]
    fn offset_total(&self, ixt: usize, iyt: usize) -> usize {
        (iyt * self.nxt + ixt) * self.m
    }

    /// Slice of the m components at interior cell (ix, iy).
    #[inline]
    pub fn interior(&self, ix: usize, iy: usize) -> &[f64] {
        let g = self.grid.ghost;
        let iyt = if self.grid.dim() == 2 { iy + g } else { iy };
        let off = self.offset_total(ix + g, iyt);
        &self.data[off..off + self.m]
    }

    #[inline]
    pub fn set_interior(&mut self, ix: usize, iy: usize, vals: &[f64]) {
        let g = self.grid.ghost;
        let iyt = if self.grid.dim() == 2 { iy + g } else { iy };
        let off = self.offset_total(ix + g, iyt);
        self.data[off..off + self.m].copy_from_slice(vals);
    }

    /// Copy one x-line (including ghosts) at transverse index `iyt` into `buf`.
    pub(crate) fn copy_x_line(&self, iyt: usize, buf: &mut [f64]) {
        let off = self.offset_total(0, iyt);
        buf.copy_from_slice(&self.data[off..off + self.nxt * self.m]);
    }

    pub(crate) fn write_x_line_interior(&mut self, iyt: usize, buf: &[f64]) {
        let g = self.grid.ghost;
        let nx = self.grid.cells[0];
        let off = self.offset_total(g, iyt);
        self.data[off..off + nx * self.m].copy_from_slice(&buf[g * self.m..(g + nx) * self.m]);
    }

    /// Copy one y-line (including ghosts) at total x-index `ixt` into `buf`.
    pub(crate) fn copy_y_line(&self, ixt: usize, buf: &mut [f64]) {
        for iyt in 0..self.nyt {
            let off = self.offset_total(ixt, iyt);
            buf[iyt * self.m..(iyt + 1) * self.m].copy_from_slice(&self.data[off..off + self.m]);
        }
    }

    pub(crate) fn write_y_line_interior(&mut self, ixt: usize, buf: &[f64]) {
        let g = self.grid.ghost;
        let ny = self.grid.cells[1];
        for iy in 0..ny {
            let iyt = iy + g;
            let off = self.offset_total(ixt, iyt);
            self.data[off..off + self.m]
                .copy_from_slice(&buf[iyt * self.m..iyt * self.m + self.m]);
        }
    }

    pub(crate) fn total_extent(&self) -> (usize, usize) {
        (self.nxt, self.nyt)
    }

    /// Fill the ghost layer on every axis from its boundary kind.
    pub fn fill_ghosts(&mut self) {
        let g = self.grid.ghost;
        let m = self.m;
        let nx = self.grid.cells[0];
        // x axis: work line by line. Left ghost k mirrors total index
        // nx + k under periodicity, the nearest interior cell under outflow.
        for iyt in 0..self.nyt {
            for k in 0..g {
                let (src_lo, src_hi) = match self.grid.boundary[0] {
                    BoundaryKind::OutflowCopy => (g, g + nx - 1),
                    BoundaryKind::Periodic => (nx + k, g + k),
                };
                let lo_dst = self.offset_total(k, iyt);
                let lo_src = self.offset_total(src_lo, iyt);
                for c in 0..m {
                    self.data[lo_dst + c] = self.data[lo_src + c];
                }
                let hi_dst = self.offset_total(g + nx + k, iyt);
                let hi_src = self.offset_total(src_hi, iyt);
                for c in 0..m {
                    self.data[hi_dst + c] = self.data[hi_src + c];
                }
            }
        }
        if self.grid.dim() == 2 {
            let ny = self.grid.cells[1];
            for ixt in 0..self.nxt {
                for k in 0..g {
                    let (src_lo, src_hi) = match self.grid.boundary[1] {
                        BoundaryKind::OutflowCopy => (g, g + ny - 1),
                        BoundaryKind::Periodic => (ny + k, g + k),
                    };
                    let lo_dst = self.offset_total(ixt, k);
                    let lo_src = self.offset_total(ixt, src_lo);
                    for c in 0..m {
                        self.data[lo_dst + c] = self.data[lo_src + c];
                    }
                    let hi_dst = self.offset_total(ixt, g + ny + k);
                    let hi_src = self.offset_total(ixt, src_hi);
                    for c in 0..m {
                        self.data[hi_dst + c] = self.data[hi_src + c];
                    }
                }
            }
        }
    }

    /// Sum of one component over the interior, times the cell volume.
    pub fn total(&self, comp: usize) -> f64 {
        let (nx, ny) = self.interior_extent();
        let mut acc = 0.0;
        for iy in 0..ny {
            for ix in 0..nx {
                acc += self.interior(ix, iy)[comp];
            }
        }
        acc * self.grid.cell_volume()
    }

    /// Check every interior cell against the system's validity predicate.
    pub fn validate(&self, sys: &PdeSystem) -> Result<(), SolverError> {
        let (nx, ny) = self.interior_extent();
        for iy in 0..ny {
            for ix in 0..nx {
                if !sys.is_valid(self.interior(ix, iy)) {
                    return Err(SolverError::InvalidStateProduced {
                        cell: if self.grid.dim() == 2 {
                            vec![ix, iy]
                        } else {
                            vec![ix]
                        },
                    });
                }
            }
        }
        Ok(())
    }

    /// Max |difference| over interior cells and components.
    pub fn max_abs_diff(&self, other: &StateField) -> f64 {
        let (nx, ny) = self.interior_extent();
        let mut worst = 0.0f64;
        for iy in 0..ny {
            for ix in 0..nx {
                let a = self.interior(ix, iy);
                let b = other.interior(ix, iy);
                for c in 0..self.m {
                    worst = worst.max((a[c] - b[c]).abs());
                }
            }
        }
        worst
    }
}
