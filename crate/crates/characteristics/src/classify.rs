use crate::profile::{InitialData, Profile1d};
use crate::CharError;
use fv_solver::FrameSeries;
use pde_core::PdeSystem;

/// Effective smoothness orders are capped here: past this the rate bound is
/// far below anything training can reach, so finer distinctions carry no
/// information.
pub const N_CAP: u32 = 8;

/// Tolerance for deciding that a one-sided derivative pair disagrees.
const JUMP_TOL: f64 = 1e-9;

/// Samples per piece when evaluating the sup/inf in the blow-up formulas.
const SUP_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    SmoothForever,
    BlowupAt,
    DiscontinuousFromStart,
    AsymptoticallySmooth,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::SmoothForever => "smooth_forever",
            Classification::BlowupAt => "blowup_at",
            Classification::DiscontinuousFromStart => "discontinuous_from_start",
            Classification::AsymptoticallySmooth => "asymptotically_smooth",
        }
    }
}

/// Per-wave-family blow-up record. `t_inf` is `f64::INFINITY` when the wave
/// never steepens (the 1/0 = +inf convention).
#[derive(Debug, Clone, PartialEq)]
pub struct WaveBlowup {
    pub wave: usize,
    pub alpha_sign: i8,
    pub t_inf: f64,
}

/// A-priori smoothness analysis of one problem's initial data under its flux.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothnessReport {
    pub classification: Classification,
    /// Smoothness order of the data measured globally.
    pub n_global: u32,
    /// Order of the smooth parts, capped at N_CAP.
    pub n_smooth_part: u32,
    pub t_inf: Vec<WaveBlowup>,
    pub discontinuity_count_at_t0: usize,
    pub notes: Vec<String>,
}

impl SmoothnessReport {
    /// Earliest finite blow-up time, if any wave has one.
    pub fn earliest_blowup(&self) -> f64 {
        self.t_inf
            .iter()
            .map(|w| w.t_inf)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Global and smooth-part smoothness orders of a 1D profile.
///
/// The global order is the number of continuous derivatives across the whole
/// domain: 0 when any value or first-derivative jump exists, k-1 when the
/// k-th derivative is the lowest to jump, N_CAP when the pieces join to the
/// cap (catalog pieces are analytic, so per-piece order is always the cap).
pub fn smoothness_order(profile: &Profile1d) -> Result<(u32, u32), CharError> {
    profile.validate()?;
    let mut lowest_jump: Option<u32> = None;
    for bi in 0..profile.breakpoints.len() {
        for k in 0..=N_CAP {
            let (l, r) = profile.one_sided(bi, k as usize);
            let scale = 1.0f64.max(l.abs()).max(r.abs());
            if (l - r).abs() > JUMP_TOL * scale {
                lowest_jump = Some(lowest_jump.map_or(k, |j| j.min(k)));
                break;
            }
        }
    }
    let global = match lowest_jump {
        Some(0) => 0,
        Some(k) => k - 1,
        None => N_CAP,
    };
    Ok((global, N_CAP))
}

fn value_jump_count(profile: &Profile1d) -> usize {
    (0..profile.breakpoints.len())
        .filter(|&bi| {
            let (l, r) = profile.one_sided(bi, 0);
            (l - r).abs() > JUMP_TOL * 1.0f64.max(l.abs()).max(r.abs())
        })
        .count()
}

/// Sample positions covering each piece interior plus both domain endpoints;
/// breakpoints are handled separately through one-sided limits.
fn piece_samples(profile: &Profile1d) -> Vec<(usize, f64)> {
    let mut edges = vec![profile.domain.0];
    edges.extend_from_slice(&profile.breakpoints);
    edges.push(profile.domain.1);
    let mut out = Vec::new();
    for (pi, w) in edges.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        for s in 0..SUP_SAMPLES {
            let frac = (s as f64 + 0.5) / SUP_SAMPLES as f64;
            out.push((pi, a + frac * (b - a)));
        }
    }
    out
}

/// Lemma-1 classification of a scalar problem.
///
/// Linear flux, or sign-matched convexity and monotonicity, keeps the data's
/// smoothness forever; otherwise characteristics cross at
/// t_inf = 1 / sup(-f''(u0) u0'), with 1/0 = +inf. Data that already jumps at
/// t = 0 is classified discontinuous-from-start; its smooth parts keep their
/// order (the Lemma's n >= 1 hypothesis is applied piecewise, noted in the
/// report).
pub fn classify_scalar(
    sys: &PdeSystem,
    data: &InitialData,
) -> Result<SmoothnessReport, CharError> {
    if !sys.is_scalar() {
        return Err(CharError::NotScalar);
    }
    data.validate()?;
    let mut notes = Vec::new();
    match data {
        InitialData::OneD(profiles) => {
            let profile = &profiles[0];
            let (n_global, n_smooth) = smoothness_order(profile)?;
            let jumps = value_jump_count(profile);

            // Steepening rate -f''(u0(x)) u0'(x) over samples and one-sided
            // breakpoint limits.
            let mut sup = f64::NEG_INFINITY;
            let mut any_decreasing = false;
            let mut any_increasing = false;
            let mut consider = |u: f64, du: f64| {
                let fpp = sys.scalar_flux_curvature(u).expect("scalar system");
                sup = sup.max(-fpp * du);
                if du > JUMP_TOL {
                    any_increasing = true;
                }
                if du < -JUMP_TOL {
                    any_decreasing = true;
                }
            };
            for (_, x) in piece_samples(profile) {
                consider(profile.eval(x), profile.derivative(x, 1));
            }
            for bi in 0..profile.breakpoints.len() {
                let (vl, _) = profile.one_sided(bi, 0);
                let (dl, _) = profile.one_sided(bi, 1);
                consider(vl, dl);
                let (_, vr) = profile.one_sided(bi, 0);
                let (_, dr) = profile.one_sided(bi, 1);
                consider(vr, dr);
            }

            let linear = sys.scalar_flux_curvature(0.0) == Some(0.0);
            let t_inf_formula = if sup > 0.0 { 1.0 / sup } else { f64::INFINITY };

            if jumps > 0 {
                notes.push(
                    "value jumps at t = 0; smoothness applied piecewise to the smooth parts"
                        .to_string(),
                );
                if linear {
                    notes.push("case 1: linear flux, jumps transport unchanged".to_string());
                } else {
                    notes.push("genuinely nonlinear flux with initial jumps".to_string());
                }
                return Ok(SmoothnessReport {
                    classification: Classification::DiscontinuousFromStart,
                    n_global,
                    n_smooth_part: n_smooth,
                    t_inf: vec![WaveBlowup {
                        wave: 0,
                        alpha_sign: curvature_sign(sys),
                        t_inf: t_inf_formula,
                    }],
                    discontinuity_count_at_t0: jumps,
                    notes,
                });
            }

            if linear {
                notes.push("case 1: linear flux (f'' = 0)".to_string());
                return Ok(smooth_forever_report(n_global, n_smooth, notes));
            }
            // The catalog's only nonlinear flux is convex (Burgers).
            if !any_decreasing && sup <= 0.0 {
                notes.push(
                    "case 1: convex flux with monotonically increasing data".to_string(),
                );
                return Ok(smooth_forever_report(n_global, n_smooth, notes));
            }
            if sup <= 0.0 {
                notes.push("steepening rate non-positive everywhere".to_string());
                return Ok(smooth_forever_report(n_global, n_smooth, notes));
            }
            notes.push(format!(
                "case 2: characteristics cross, sup(-f'' u0') = {sup:.6e}"
            ));
            Ok(SmoothnessReport {
                classification: Classification::BlowupAt,
                n_global,
                n_smooth_part: n_smooth,
                t_inf: vec![WaveBlowup {
                    wave: 0,
                    alpha_sign: curvature_sign(sys),
                    t_inf: t_inf_formula,
                }],
                discontinuity_count_at_t0: 0,
                notes,
            })
        }
        InitialData::TwoD(profiles) => {
            // The 2D catalog is piecewise constant, so the smooth parts are
            // flat and the only question is whether jumps exist at t = 0.
            let profile = &profiles[0];
            let jumps = if profile.has_jump() { 1 } else { 0 };
            let linear = sys.scalar_flux_curvature(0.0) == Some(0.0);
            if jumps > 0 {
                notes.push("piecewise-constant 2D data with jump curves at t = 0".to_string());
                if linear {
                    notes.push("case 1: linear flux, jumps transport unchanged".to_string());
                }
                Ok(SmoothnessReport {
                    classification: Classification::DiscontinuousFromStart,
                    n_global: 0,
                    n_smooth_part: N_CAP,
                    t_inf: vec![WaveBlowup {
                        wave: 0,
                        alpha_sign: curvature_sign(sys),
                        t_inf: f64::INFINITY,
                    }],
                    discontinuity_count_at_t0: jumps,
                    notes,
                })
            } else {
                notes.push("constant 2D data".to_string());
                Ok(smooth_forever_report(N_CAP, N_CAP, notes))
            }
        }
    }
}

fn curvature_sign(sys: &PdeSystem) -> i8 {
    match sys.scalar_flux_curvature(0.0) {
        Some(c) if c > 0.0 => 1,
        Some(c) if c < 0.0 => -1,
        _ => 0,
    }
}

fn smooth_forever_report(
    n_global: u32,
    n_smooth: u32,
    notes: Vec<String>,
) -> SmoothnessReport {
    SmoothnessReport {
        classification: Classification::SmoothForever,
        n_global,
        n_smooth_part: n_smooth,
        t_inf: vec![WaveBlowup {
            wave: 0,
            alpha_sign: 0,
            t_inf: f64::INFINITY,
        }],
        discontinuity_count_at_t0: 0,
        notes,
    }
}

/// Per-wave-family blow-up times for an m > 1 system via the decoupled
/// Riccati coefficients: alpha_i = grad(lambda_i) . r_i and
/// omega_i = l_i . dU/dx. A wave with alpha identically zero is linearly
/// degenerate (the Euler contact) and never steepens. Sampled like the
/// scalar sup, with one-sided limits at breakpoints; the per-point blow-up
/// time is 1 / max(0, -alpha_i omega_i) and the family time is its infimum
/// over samples.
///
/// Alpha is evaluated from closed-form gradients of the eigenvalues in
/// primitive variables and chain-ruled, which avoids differentiating
/// eigenvectors across sign flips.
pub fn wave_blowup_times(
    sys: &PdeSystem,
    data: &InitialData,
) -> Result<Vec<WaveBlowup>, CharError> {
    if sys.is_scalar() {
        return Err(CharError::NotSystem);
    }
    data.validate()?;
    let g = sys.params().gamma;
    match data {
        InitialData::TwoD(_) => {
            // Registered 2D data is piecewise constant: dU/dx = 0 on every
            // smooth part, so no wave steepens from the smooth interiors.
            Ok((0..sys.m())
                .map(|i| WaveBlowup {
                    wave: i,
                    alpha_sign: alpha_sign_euler(i, sys.m()),
                    t_inf: f64::INFINITY,
                })
                .collect())
        }
        InitialData::OneD(profiles) => {
            if profiles.len() != sys.m() {
                return Err(CharError::BadDescriptor(format!(
                    "{} component profiles for an m = {} system",
                    profiles.len(),
                    sys.m()
                )));
            }
            let mut sup = vec![f64::NEG_INFINITY; sys.m()];
            let eval_all = |x: f64, side: Side| -> (Vec<f64>, Vec<f64>) {
                let mut u = Vec::with_capacity(sys.m());
                let mut du = Vec::with_capacity(sys.m());
                for p in profiles {
                    let (v, d) = sample_sided(p, x, side);
                    u.push(v);
                    du.push(d);
                }
                (u, du)
            };
            let consider = |u: &[f64], du: &[f64], sup: &mut Vec<f64>| {
                if let Some(rates) = euler_steepening_rates(u, du, g) {
                    for (i, r) in rates.iter().enumerate() {
                        sup[i] = sup[i].max(*r);
                    }
                }
            };
            // Union of sample grids over the first profile's pieces; all
            // component profiles are evaluated at the same x positions.
            for (_, x) in piece_samples(&profiles[0]) {
                let (u, du) = eval_all(x, Side::Right);
                consider(&u, &du, &mut sup);
            }
            let mut bps: Vec<f64> = profiles
                .iter()
                .flat_map(|p| p.breakpoints.iter().copied())
                .collect();
            bps.sort_by(|a, b| a.partial_cmp(b).unwrap());
            bps.dedup();
            for &b in &bps {
                for side in [Side::Left, Side::Right] {
                    let (u, du) = eval_all(b, side);
                    consider(&u, &du, &mut sup);
                }
            }
            Ok((0..sys.m())
                .map(|i| WaveBlowup {
                    wave: i,
                    alpha_sign: alpha_sign_euler(i, sys.m()),
                    t_inf: if sup[i] > 0.0 {
                        1.0 / sup[i]
                    } else {
                        f64::INFINITY
                    },
                })
                .collect())
        }
    }
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

fn sample_sided(p: &Profile1d, x: f64, side: Side) -> (f64, f64) {
    // One-sided evaluation: nudge breakpoint hits onto the requested side.
    if let Some(bi) = p.breakpoints.iter().position(|&b| b == x) {
        let (vl, vr) = p.one_sided(bi, 0);
        let (dl, dr) = p.one_sided(bi, 1);
        return match side {
            Side::Left => (vl, dl),
            Side::Right => (vr, dr),
        };
    }
    (p.eval(x), p.derivative(x, 1))
}

/// Sign of grad(lambda_i) . r_i for the Euler wave ordering (acoustic-,
/// contact(s), acoustic+): the contact and shear fields are linearly
/// degenerate.
fn alpha_sign_euler(wave: usize, m: usize) -> i8 {
    if wave == 0 {
        -1
    } else if wave == m - 1 {
        1
    } else {
        0
    }
}

/// Steepening rates -alpha_i omega_i for 1D Euler at one point, from the
/// primitive-variable eigensystem:
/// alpha = (-/+)(gamma + 1) c / 2 for the acoustic fields and 0 for the
/// contact; omega_1,3 = -/+ u'/(2c) + P'/(2 gamma P), omega_2 = rho' - P'/c^2.
fn euler_steepening_rates(u: &[f64], du: &[f64], g: f64) -> Option<Vec<f64>> {
    let m = u.len();
    if m != 3 {
        return None;
    }
    let rho = u[0];
    if !(rho > 0.0) {
        return None;
    }
    let mom = u[1];
    let e = u[2];
    let vel = mom / rho;
    let p = (g - 1.0) * (e - 0.5 * mom * mom / rho);
    if !(p > 0.0) {
        return None;
    }
    let c = (g * p / rho).sqrt();
    let drho = du[0];
    let dvel = (du[1] - vel * drho) / rho;
    let dp = (g - 1.0) * (du[2] - mom * du[1] / rho + 0.5 * mom * mom * drho / (rho * rho));
    let alpha_ac = 0.5 * (g + 1.0) * c;
    let omega1 = -dvel / (2.0 * c) + dp / (2.0 * g * p);
    let omega2 = drho - dp / (c * c);
    let omega3 = dvel / (2.0 * c) + dp / (2.0 * g * p);
    let _ = omega2; // contact: alpha = 0, rate is identically zero
    Some(vec![alpha_ac * omega1, 0.0, -alpha_ac * omega3])
}

/// Upgrade a discontinuous-from-start report to asymptotically-smooth when
/// the solver run shows the jump amplitude genuinely decaying and every
/// jump-carrying wave family is genuinely nonlinear. Systems with a linearly
/// degenerate family (the Euler contact) are never upgraded: their contact
/// jumps persist forever.
pub fn refine_with_frames(
    report: &SmoothnessReport,
    sys: &PdeSystem,
    series: &FrameSeries,
) -> SmoothnessReport {
    let mut out = report.clone();
    if report.classification != Classification::DiscontinuousFromStart {
        return out;
    }
    if !sys.is_scalar() {
        out.notes.push(
            "linearly degenerate family present; jump amplitudes not re-examined".to_string(),
        );
        return out;
    }
    if sys.scalar_flux_curvature(0.0) == Some(0.0) {
        return out; // linear transport never damps a jump
    }
    let n = series.frames.len();
    if n < 4 {
        return out;
    }
    let probe = (n / 10).max(1);
    let early: f64 = series.frames[..probe]
        .iter()
        .map(jump_amplitude)
        .fold(0.0, f64::max);
    let late: f64 = series.frames[n - probe..]
        .iter()
        .map(jump_amplitude)
        .fold(0.0, f64::max);
    if early > 0.0 && late < 0.9 * early {
        out.classification = Classification::AsymptoticallySmooth;
        out.notes.push(format!(
            "jump amplitude decayed {early:.3e} -> {late:.3e} over the run; \
             genuinely nonlinear wave damps its own discontinuity"
        ));
    }
    out
}

/// Largest local oscillation of the leading component: max over short windows
/// of (max - min), scanned along rows and columns. Robust to a shock being
/// smeared over a few cells.
fn jump_amplitude(field: &fv_solver::StateField) -> f64 {
    const W: usize = 8;
    let (nx, ny) = field.interior_extent();
    let mut worst = 0.0f64;
    let mut scan = |vals: &[f64]| {
        for win in vals.windows(W.min(vals.len())) {
            let mx = win.iter().cloned().fold(f64::MIN, f64::max);
            let mn = win.iter().cloned().fold(f64::MAX, f64::min);
            worst = worst.max(mx - mn);
        }
    };
    for iy in 0..ny {
        let row: Vec<f64> = (0..nx).map(|ix| field.interior(ix, iy)[0]).collect();
        scan(&row);
    }
    if ny > 1 {
        for ix in 0..nx {
            let col: Vec<f64> = (0..ny).map(|iy| field.interior(ix, iy)[0]).collect();
            scan(&col);
        }
    }
    worst
}
