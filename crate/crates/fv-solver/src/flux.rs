use crate::SolverError;
use pde_core::{Direction, PdeSystem, SystemName};

/// Local Lax-Friedrichs (Rusanov) flux:
/// F = (f(uL) + f(uR))/2 - lambda (uR - uL)/2, with lambda the larger of the
/// two interface-local maximum wave speeds. Consistent: F(u, u) = f(u)
/// bit-exactly.
pub fn lax_friedrichs_flux(
    sys: &PdeSystem,
    ul: &[f64],
    ur: &[f64],
    dir: Direction,
    out: &mut [f64],
) -> Result<(), SolverError> {
    let lam = sys
        .max_wave_speed(ul, dir)?
        .max(sys.max_wave_speed(ur, dir)?);
    let m = sys.m();
    let mut fl = [0.0; 4];
    let mut fr = [0.0; 4];
    sys.flux_into(ul, dir, &mut fl[..m]);
    sys.flux_into(ur, dir, &mut fr[..m]);
    for c in 0..m {
        out[c] = 0.5 * (fl[c] + fr[c]) - 0.5 * lam * (ur[c] - ul[c]);
    }
    Ok(())
}

/// Whether the Roe average of two states exists (positive Roe-averaged
/// squared sound speed for Euler; always for scalar systems).
pub fn roe_average_exists(sys: &PdeSystem, ul: &[f64], ur: &[f64]) -> bool {
    match sys.name() {
        SystemName::Euler1d | SystemName::Euler2d => roe_average_state(sys, ul, ur).is_some(),
        _ => true,
    }
}

/// Synthetic conserved state whose velocity, total enthalpy, and sound speed
/// equal the Roe averages of `ul` and `ur`. None when the averaged squared
/// sound speed is non-positive.
fn roe_average_state(sys: &PdeSystem, ul: &[f64], ur: &[f64]) -> Option<Vec<f64>> {
    let g = sys.params().gamma;
    let m = sys.m();
    let rho_l = ul[0];
    let rho_r = ur[0];
    if !(rho_l > 0.0) || !(rho_r > 0.0) {
        return None;
    }
    let wl = rho_l.sqrt();
    let wr = rho_r.sqrt();
    let wsum = wl + wr;
    let nvel = m - 2; // velocity components
    let mut vel = [0.0; 2];
    let mut q2 = 0.0;
    for k in 0..nvel {
        let v = (wl * (ul[1 + k] / rho_l) + wr * (ur[1 + k] / rho_r)) / wsum;
        vel[k] = v;
        q2 += v * v;
    }
    let h_of = |u: &[f64]| -> f64 {
        let rho = u[0];
        let e = u[m - 1];
        let ke: f64 = (0..nvel).map(|k| u[1 + k] * u[1 + k]).sum::<f64>() / (2.0 * rho);
        let p = (g - 1.0) * (e - ke);
        (e + p) / rho
    };
    let h = (wl * h_of(ul) + wr * h_of(ur)) / wsum;
    let c2 = (g - 1.0) * (h - 0.5 * q2);
    if !(c2 > 0.0) {
        return None;
    }
    let rho = wl * wr;
    // Total energy reproducing (vel, h): E = rho (h + (g-1) q^2 / 2) / g.
    let e = rho * (h + (g - 1.0) * 0.5 * q2) / g;
    let mut state = vec![rho];
    for k in 0..nvel {
        state.push(rho * vel[k]);
    }
    state.push(e);
    Some(state)
}

/// Roe flux with a Harten-Hyman entropy fix.
///
/// F = (f(uL) + f(uR))/2 - R |Lambda| L (uR - uL)/2 at the Roe-averaged
/// eigenstructure. The scalar cases reduce to upwinding at the averaged
/// speed: a for advection and (uL + uR)/2 for Burgers. For each wave, when
/// |lambda_i| falls inside the characteristic spread
/// delta_i = max(0, lambda_i - lambda_i(uL), lambda_i(uR) - lambda_i)
/// the modulus is replaced by (lambda_i^2/delta_i + delta_i)/2, which opens
/// transonic rarefactions that a raw Roe scheme freezes into entropy-violating
/// jumps.
///
/// Errors with `Mismatch` when the Roe average does not exist; callers fall
/// back to `lax_friedrichs_flux`.
pub fn roe_flux(
    sys: &PdeSystem,
    ul: &[f64],
    ur: &[f64],
    dir: Direction,
    out: &mut [f64],
) -> Result<(), SolverError> {
    let m = sys.m();
    let mut fl = [0.0; 4];
    let mut fr = [0.0; 4];
    sys.flux_into(ul, dir, &mut fl[..m]);
    sys.flux_into(ur, dir, &mut fr[..m]);

    if sys.is_scalar() {
        let a_tilde = match sys.name() {
            SystemName::Advection1d | SystemName::Advection2d => sys.params().advection_speed,
            _ => 0.5 * (ul[0] + ur[0]),
        };
        let lam_l = sys.jacobian(ul, dir)[(0, 0)];
        let lam_r = sys.jacobian(ur, dir)[(0, 0)];
        let fixed = entropy_fixed_abs(a_tilde, lam_l, lam_r);
        out[0] = 0.5 * (fl[0] + fr[0]) - 0.5 * fixed * (ur[0] - ul[0]);
        return Ok(());
    }

    let avg = roe_average_state(sys, ul, ur).ok_or_else(|| {
        SolverError::Mismatch("Roe average undefined for degenerate states".into())
    })?;
    let eig = sys.eigen(&avg, dir)?;
    let eig_l = sys.eigen(ul, dir)?;
    let eig_r = sys.eigen(ur, dir)?;

    // Wave strengths: w = L (uR - uL).
    let mut du = [0.0; 4];
    for c in 0..m {
        du[c] = ur[c] - ul[c];
    }
    let mut strengths = [0.0; 4];
    for i in 0..m {
        let mut acc = 0.0;
        for c in 0..m {
            acc += eig.left[(i, c)] * du[c];
        }
        strengths[i] = acc;
    }
    // Dissipation: R |Lambda|_fixed w.
    for c in 0..m {
        let mut diss = 0.0;
        for i in 0..m {
            let fixed = entropy_fixed_abs(eig.lambda[i], eig_l.lambda[i], eig_r.lambda[i]);
            diss += eig.right[(c, i)] * fixed * strengths[i];
        }
        out[c] = 0.5 * (fl[c] + fr[c]) - 0.5 * diss;
    }
    Ok(())
}

#[inline]
fn entropy_fixed_abs(lam: f64, lam_l: f64, lam_r: f64) -> f64 {
    let delta = (lam - lam_l).max(lam_r - lam).max(0.0);
    if lam.abs() < delta {
        0.5 * (lam * lam / delta + delta)
    } else {
        lam.abs()
    }
}
