//! Reference solutions used to judge the solver, implemented independently
//! of the finite-volume code paths: the exact three-wave Riemann solution
//! for the 1D Euler equations, the exact shift solution for linear
//! advection, and the Rankine-Hugoniot shock position for the Burgers
//! top-hat problem.

/// Primitive constant state for the exact Riemann solution.
#[derive(Debug, Clone, Copy)]
pub struct GasState {
    pub rho: f64,
    pub vel: f64,
    pub pressure: f64,
}

/// Exact solution of the 1D Euler Riemann problem via pressure-function
/// iteration: star pressure and velocity from Newton's method on
/// f_L(p) + f_R(p) + (uR - uL) = 0, then self-similar sampling in x/t.
pub struct ExactRiemann {
    left: GasState,
    right: GasState,
    gamma: f64,
    p_star: f64,
    u_star: f64,
}

impl ExactRiemann {
    pub fn new(left: GasState, right: GasState, gamma: f64) -> ExactRiemann {
        let f = |p: f64, s: &GasState| -> (f64, f64) {
            let a = (gamma * s.pressure / s.rho).sqrt();
            if p > s.pressure {
                // Shock branch.
                let big_a = 2.0 / ((gamma + 1.0) * s.rho);
                let big_b = (gamma - 1.0) / (gamma + 1.0) * s.pressure;
                let root = (big_a / (p + big_b)).sqrt();
                let val = (p - s.pressure) * root;
                let deriv = root * (1.0 - 0.5 * (p - s.pressure) / (p + big_b));
                (val, deriv)
            } else {
                // Rarefaction branch.
                let exp = (gamma - 1.0) / (2.0 * gamma);
                let val = 2.0 * a / (gamma - 1.0) * ((p / s.pressure).powf(exp) - 1.0);
                let deriv = 1.0 / (s.rho * a) * (p / s.pressure).powf(-(gamma + 1.0) / (2.0 * gamma));
                (val, deriv)
            }
        };
        let du = right.vel - left.vel;
        // Two-rarefaction initial guess keeps Newton in the positive region.
        let al = (gamma * left.pressure / left.rho).sqrt();
        let ar = (gamma * right.pressure / right.rho).sqrt();
        let z = (gamma - 1.0) / (2.0 * gamma);
        let guess = ((al + ar - 0.5 * (gamma - 1.0) * du)
            / (al / left.pressure.powf(z) + ar / right.pressure.powf(z)))
        .powf(1.0 / z);
        let mut p = guess.max(1e-12);
        for _ in 0..60 {
            let (fl, dl) = f(p, &left);
            let (fr, dr) = f(p, &right);
            let g = fl + fr + du;
            let step = g / (dl + dr);
            p = (p - step).max(1e-12);
            if step.abs() < 1e-14 * (1.0 + p) {
                break;
            }
        }
        let (fl, _) = f(p, &left);
        let (fr, _) = f(p, &right);
        let u_star = 0.5 * (left.vel + right.vel) + 0.5 * (fr - fl);
        ExactRiemann {
            left,
            right,
            gamma,
            p_star: p,
            u_star,
        }
    }

    pub fn star(&self) -> (f64, f64) {
        (self.p_star, self.u_star)
    }

    /// Sample the self-similar solution at speed xi = (x - x0) / t.
    pub fn sample(&self, xi: f64) -> GasState {
        let g = self.gamma;
        if xi <= self.u_star {
            // Left of the contact.
            let s = &self.left;
            let a = (g * s.pressure / s.rho).sqrt();
            if self.p_star > s.pressure {
                // Left shock.
                let ratio = self.p_star / s.pressure;
                let shock_speed = s.vel
                    - a * ((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g)).sqrt();
                if xi < shock_speed {
                    *s
                } else {
                    let rho = s.rho * (ratio + (g - 1.0) / (g + 1.0))
                        / ((g - 1.0) / (g + 1.0) * ratio + 1.0);
                    GasState {
                        rho,
                        vel: self.u_star,
                        pressure: self.p_star,
                    }
                }
            } else {
                // Left rarefaction.
                let a_star = a * (self.p_star / s.pressure).powf((g - 1.0) / (2.0 * g));
                let head = s.vel - a;
                let tail = self.u_star - a_star;
                if xi < head {
                    *s
                } else if xi > tail {
                    let rho = s.rho * (self.p_star / s.pressure).powf(1.0 / g);
                    GasState {
                        rho,
                        vel: self.u_star,
                        pressure: self.p_star,
                    }
                } else {
                    let vel = 2.0 / (g + 1.0) * (a + (g - 1.0) / 2.0 * s.vel + xi);
                    let a_loc = a - (g - 1.0) / 2.0 * (vel - s.vel);
                    let rho = s.rho * (a_loc / a).powf(2.0 / (g - 1.0));
                    let pressure = s.pressure * (a_loc / a).powf(2.0 * g / (g - 1.0));
                    GasState { rho, vel, pressure }
                }
            }
        } else {
            // Right of the contact: mirror.
            let s = &self.right;
            let a = (g * s.pressure / s.rho).sqrt();
            if self.p_star > s.pressure {
                let ratio = self.p_star / s.pressure;
                let shock_speed = s.vel
                    + a * ((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g)).sqrt();
                if xi > shock_speed {
                    *s
                } else {
                    let rho = s.rho * (ratio + (g - 1.0) / (g + 1.0))
                        / ((g - 1.0) / (g + 1.0) * ratio + 1.0);
                    GasState {
                        rho,
                        vel: self.u_star,
                        pressure: self.p_star,
                    }
                }
            } else {
                let a_star = a * (self.p_star / s.pressure).powf((g - 1.0) / (2.0 * g));
                let head = s.vel + a;
                let tail = self.u_star + a_star;
                if xi > head {
                    *s
                } else if xi < tail {
                    let rho = s.rho * (self.p_star / s.pressure).powf(1.0 / g);
                    GasState {
                        rho,
                        vel: self.u_star,
                        pressure: self.p_star,
                    }
                } else {
                    let vel = 2.0 / (g + 1.0) * (-a + (g - 1.0) / 2.0 * s.vel + xi);
                    let a_loc = a + (g - 1.0) / 2.0 * (vel - s.vel);
                    let rho = s.rho * (a_loc / a).powf(2.0 / (g - 1.0));
                    let pressure = s.pressure * (a_loc / a).powf(2.0 * g / (g - 1.0));
                    GasState { rho, vel, pressure }
                }
            }
        }
    }

    /// Density at (x, t) for a jump initially at x0.
    pub fn density_at(&self, x: f64, x0: f64, t: f64) -> f64 {
        if t <= 0.0 {
            return if x <= x0 { self.left.rho } else { self.right.rho };
        }
        self.sample((x - x0) / t).rho
    }
}

/// The Sod shock tube states.
pub fn sod_exact() -> ExactRiemann {
    ExactRiemann::new(
        GasState {
            rho: 1.0,
            vel: 0.0,
            pressure: 1.0,
        },
        GasState {
            rho: 0.125,
            vel: 0.0,
            pressure: 0.1,
        },
        1.4,
    )
}

/// Exact scalar advection: the initial profile shifted by a t.
pub fn advected_step(x: f64, t: f64, a: f64, jump_at: f64, left: f64, right: f64) -> f64 {
    if x - a * t <= jump_at {
        left
    } else {
        right
    }
}

/// Burgers top-hat landmarks at time t (before the rarefaction head reaches
/// the shock): right shock from Rankine-Hugoniot, rarefaction head/tail
/// speeds from the characteristic speeds of the edge states.
pub struct TopHat {
    pub shock_position: f64,
    pub rarefaction_tail: f64,
    pub rarefaction_head: f64,
}

pub fn burgers_top_hat(t: f64) -> TopHat {
    let (u_out, u_in) = (-1.0, 3.0);
    let shock_speed = 0.5 * (u_in + u_out); // (f(3) - f(-1)) / (3 - (-1)) = 1
    TopHat {
        shock_position: 4.0 + shock_speed * t,
        rarefaction_tail: 2.0 + u_out * t,
        rarefaction_head: 2.0 + u_in * t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sod_star_region_matches_the_known_values() {
        let sol = sod_exact();
        let (p, u) = sol.star();
        assert!((p - 0.30313).abs() < 1e-4, "p* = {p}");
        assert!((u - 0.92745).abs() < 1e-4, "u* = {u}");
        // Density left of the contact and behind the shock.
        let rho_star_l = sol.sample(u - 0.01).rho;
        let rho_star_r = sol.sample(u + 0.01).rho;
        assert!((rho_star_l - 0.42632).abs() < 1e-4, "{rho_star_l}");
        assert!((rho_star_r - 0.26557).abs() < 1e-4, "{rho_star_r}");
    }

    #[test]
    fn sod_far_field_is_untouched() {
        let sol = sod_exact();
        assert_eq!(sol.density_at(0.01, 0.5, 0.2), 1.0);
        assert_eq!(sol.density_at(0.99, 0.5, 0.2), 0.125);
    }

    #[test]
    fn burgers_landmarks() {
        let th = burgers_top_hat(0.8);
        assert_eq!(th.shock_position, 4.8);
        assert_eq!(th.rarefaction_tail, 1.2);
        assert_eq!(th.rarefaction_head, 4.4);
    }
}
