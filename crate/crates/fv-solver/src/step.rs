use crate::field::StateField;
use crate::flux::{lax_friedrichs_flux, roe_flux};
use crate::limiter::{limited_difference, LimiterKind};
use crate::run::{FluxKind, SolverConfig};
use crate::SolverError;
use pde_core::{Direction, PdeSystem};

/// Per-step diagnostics for a 1D step: the dt actually taken and the
/// numerical fluxes through the two domain boundaries (per component), which
/// account exactly for the change in the conserved totals.
#[derive(Debug, Clone)]
pub struct StepDiagnostics {
    pub dt: f64,
    pub boundary_flux_left: Vec<f64>,
    pub boundary_flux_right: Vec<f64>,
}

fn max_speed_axis(
    sys: &PdeSystem,
    field: &StateField,
    dir: Direction,
) -> Result<f64, SolverError> {
    let (nx, ny) = field.interior_extent();
    let mut worst = 0.0f64;
    for iy in 0..ny {
        for ix in 0..nx {
            worst = worst.max(sys.max_wave_speed(field.interior(ix, iy), dir)?);
        }
    }
    Ok(worst)
}

/// CFL time step for the current field, honoring an optional cap (used by the
/// run loop to land exactly on output times).
fn cfl_dt(
    sys: &PdeSystem,
    field: &StateField,
    config: &SolverConfig,
    cap: Option<f64>,
) -> Result<f64, SolverError> {
    let mut dt = f64::INFINITY;
    let dirs: &[Direction] = if field.grid.dim() == 2 {
        &[Direction::X, Direction::Y]
    } else {
        &[Direction::X]
    };
    for (axis, dir) in dirs.iter().enumerate() {
        let s = max_speed_axis(sys, field, *dir)?;
        if s > 0.0 {
            dt = dt.min(config.cfl * field.grid.dx(axis) / s);
        }
    }
    if let Some(cap) = cap {
        dt = dt.min(cap);
    }
    if !dt.is_finite() || !(dt > 0.0) {
        return Err(SolverError::BadConfig(
            "zero wave speed everywhere and no time-step cap".into(),
        ));
    }
    Ok(dt)
}

/// Compute the numerical fluxes along one line of cells (ghosts included)
/// and apply the conservative update to its interior. Returns the fluxes
/// through the first and last interior interfaces.
///
/// With a limiter, interface states come from the MUSCL piecewise-linear
/// reconstruction, limited per component on conserved variables.
#[allow(clippy::too_many_arguments)]
fn sweep_line(
    sys: &PdeSystem,
    dir: Direction,
    line: &mut [f64],
    g: usize,
    n: usize,
    m: usize,
    dx: f64,
    dt: f64,
    config: &SolverConfig,
    fluxes: &mut Vec<f64>,
) -> Result<(), SolverError> {
    fluxes.clear();
    fluxes.resize((n + 1) * m, 0.0);
    let cell = |i: usize| &line[i * m..(i + 1) * m];
    let mut ul = [0.0; 4];
    let mut ur = [0.0; 4];
    for k in 0..=n {
        // Interface k sits between total cells i = g + k - 1 and i + 1.
        let i = g + k - 1;
        if config.limiter == LimiterKind::None {
            ul[..m].copy_from_slice(cell(i));
            ur[..m].copy_from_slice(cell(i + 1));
        } else {
            let um1 = cell(i - 1);
            let u0 = cell(i);
            let u1 = cell(i + 1);
            let u2 = cell(i + 2);
            for c in 0..m {
                let dl = limited_difference(config.limiter, u0[c] - um1[c], u1[c] - u0[c]);
                let dr = limited_difference(config.limiter, u1[c] - u0[c], u2[c] - u1[c]);
                ul[c] = u0[c] + 0.5 * dl;
                ur[c] = u1[c] - 0.5 * dr;
            }
        }
        let out = &mut fluxes[k * m..(k + 1) * m];
        match config.flux {
            FluxKind::LaxFriedrichs => lax_friedrichs_flux(sys, &ul[..m], &ur[..m], dir, out)?,
            FluxKind::Roe => {
                // Degenerate Roe averages fall back to the diffusive flux.
                if roe_flux(sys, &ul[..m], &ur[..m], dir, out).is_err() {
                    lax_friedrichs_flux(sys, &ul[..m], &ur[..m], dir, out)?;
                }
            }
        }
    }
    let nu = dt / dx;
    for j in 0..n {
        let off = (g + j) * m;
        for c in 0..m {
            line[off + c] -= nu * (fluxes[(j + 1) * m + c] - fluxes[j * m + c]);
        }
    }
    Ok(())
}

fn sweep_axis(
    sys: &PdeSystem,
    field: &mut StateField,
    axis: usize,
    dt: f64,
    config: &SolverConfig,
) -> Result<(Vec<f64>, Vec<f64>), SolverError> {
    let m = field.m();
    let g = field.grid.ghost;
    let dx = field.grid.dx(axis);
    let (nxt, nyt) = field.total_extent();
    let (nx, ny) = field.interior_extent();
    let mut fluxes = Vec::new();
    let mut bleft = vec![0.0; m];
    let mut bright = vec![0.0; m];
    match axis {
        0 => {
            let mut line = vec![0.0; nxt * m];
            let rows: Vec<usize> = if field.grid.dim() == 2 {
                (g..g + ny).collect()
            } else {
                vec![0]
            };
            for iyt in rows {
                field.copy_x_line(iyt, &mut line);
                sweep_line(
                    sys,
                    Direction::X,
                    &mut line,
                    g,
                    nx,
                    m,
                    dx,
                    dt,
                    config,
                    &mut fluxes,
                )?;
                field.write_x_line_interior(iyt, &line);
                for c in 0..m {
                    bleft[c] += fluxes[c];
                    bright[c] += fluxes[nx * m + c];
                }
            }
        }
        1 => {
            let mut line = vec![0.0; nyt * m];
            for ixt in g..g + nx {
                field.copy_y_line(ixt, &mut line);
                sweep_line(
                    sys,
                    Direction::Y,
                    &mut line,
                    g,
                    ny,
                    m,
                    dx,
                    dt,
                    config,
                    &mut fluxes,
                )?;
                field.write_y_line_interior(ixt, &line);
                for c in 0..m {
                    bleft[c] += fluxes[c];
                    bright[c] += fluxes[ny * m + c];
                }
            }
        }
        _ => unreachable!(),
    }
    Ok((bleft, bright))
}

/// Advance one axis by `dt`. First-order runs take a single forward-Euler
/// update; limited runs take a Heun (SSP-RK2) step so the scheme is genuinely
/// second order with dt tied to dx through the CFL condition. Returns the
/// effective boundary fluxes.
fn advance_axis(
    sys: &PdeSystem,
    field: &mut StateField,
    axis: usize,
    dt: f64,
    config: &SolverConfig,
) -> Result<(Vec<f64>, Vec<f64>), SolverError> {
    if config.limiter == LimiterKind::None {
        field.fill_ghosts();
        return sweep_axis(sys, field, axis, dt, config);
    }
    let start = field.clone();
    field.fill_ghosts();
    let (bl1, br1) = sweep_axis(sys, field, axis, dt, config)?;
    field.fill_ghosts();
    let (bl2, br2) = sweep_axis(sys, field, axis, dt, config)?;
    average_fields(field, &start);
    let m = field.m();
    let half = |a: &[f64], b: &[f64]| (0..m).map(|c| 0.5 * (a[c] + b[c])).collect();
    Ok((half(&bl1, &bl2), half(&br1, &br2)))
}

/// next <- (next + start) / 2 on the interior.
fn average_fields(next: &mut StateField, start: &StateField) {
    let (nx, ny) = next.interior_extent();
    let m = next.m();
    let mut vals = vec![0.0; m];
    for iy in 0..ny {
        for ix in 0..nx {
            {
                let a = next.interior(ix, iy);
                let b = start.interior(ix, iy);
                for c in 0..m {
                    vals[c] = 0.5 * (a[c] + b[c]);
                }
            }
            next.set_interior(ix, iy, &vals);
        }
    }
}

/// One unsplit 1D step: conservative update from the interface fluxes at a
/// CFL-limited dt. Returns the stepped field and the dt used.
pub fn step_1d(
    sys: &PdeSystem,
    field: &StateField,
    config: &SolverConfig,
) -> Result<(StateField, f64), SolverError> {
    let (f, diag) = step_1d_detailed(sys, field, config, None)?;
    Ok((f, diag.dt))
}

/// `step_1d` with an optional dt cap plus boundary-flux diagnostics. The
/// boundary fluxes satisfy total_after = total_before - dt (F_right - F_left)
/// exactly up to rounding.
pub fn step_1d_detailed(
    sys: &PdeSystem,
    field: &StateField,
    config: &SolverConfig,
    dt_cap: Option<f64>,
) -> Result<(StateField, StepDiagnostics), SolverError> {
    if field.grid.dim() != 1 {
        return Err(SolverError::Mismatch("step_1d needs a 1D grid".into()));
    }
    config.validate()?;
    let dt = cfl_dt(sys, field, config, dt_cap)?;
    let mut next = field.clone();
    let (bl, br) = advance_axis(sys, &mut next, 0, dt, config)?;
    next.validate(sys)?;
    Ok((
        next,
        StepDiagnostics {
            dt,
            boundary_flux_left: bl,
            boundary_flux_right: br,
        },
    ))
}

/// One Strang-split 2D step: X(dt/2) -> Y(dt) -> X(dt/2), with dt from the
/// 2D CFL condition over both directional speeds. Ghosts are refilled before
/// every sweep. Returns the stepped field and the dt used.
pub fn step_2d(
    sys: &PdeSystem,
    field: &StateField,
    config: &SolverConfig,
) -> Result<(StateField, f64), SolverError> {
    step_2d_capped(sys, field, config, None)
}

pub(crate) fn step_2d_capped(
    sys: &PdeSystem,
    field: &StateField,
    config: &SolverConfig,
    dt_cap: Option<f64>,
) -> Result<(StateField, f64), SolverError> {
    if field.grid.dim() != 2 {
        return Err(SolverError::Mismatch("step_2d needs a 2D grid".into()));
    }
    config.validate()?;
    let dt = cfl_dt(sys, field, config, dt_cap)?;
    let mut next = field.clone();
    advance_axis(sys, &mut next, 0, 0.5 * dt, config)?;
    advance_axis(sys, &mut next, 1, dt, config)?;
    advance_axis(sys, &mut next, 0, 0.5 * dt, config)?;
    next.validate(sys)?;
    Ok((next, dt))
}

pub(crate) fn step_any(
    sys: &PdeSystem,
    field: &StateField,
    config: &SolverConfig,
    dt_cap: Option<f64>,
) -> Result<(StateField, f64), SolverError> {
    if field.grid.dim() == 2 {
        step_2d_capped(sys, field, config, dt_cap)
    } else {
        let (f, d) = step_1d_detailed(sys, field, config, dt_cap)?;
        Ok((f, d.dt))
    }
}
