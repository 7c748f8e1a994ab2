use crate::mat::Mat;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PdeError {
    #[error("unknown system name `{0}`")]
    UnknownSystem(String),
    #[error("non-physical parameter: {0}")]
    NonPhysicalParameter(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("direction {dir:?} not available for a {dim}-dimensional system")]
    BadDirection { dir: Direction, dim: usize },
}

/// The six registered equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemName {
    Advection1d,
    Advection2d,
    Burgers1d,
    Burgers2d,
    Euler1d,
    Euler2d,
}

impl SystemName {
    pub fn parse(s: &str) -> Option<SystemName> {
        Some(match s {
            "advection1d" => SystemName::Advection1d,
            "advection2d" => SystemName::Advection2d,
            "burgers1d" => SystemName::Burgers1d,
            "burgers2d" => SystemName::Burgers2d,
            "euler1d" => SystemName::Euler1d,
            "euler2d" => SystemName::Euler2d,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SystemName::Advection1d => "advection1d",
            SystemName::Advection2d => "advection2d",
            SystemName::Burgers1d => "burgers1d",
            SystemName::Burgers2d => "burgers2d",
            SystemName::Euler1d => "euler1d",
            SystemName::Euler2d => "euler2d",
        }
    }
}

/// Spatial direction of a directional flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    X,
    Y,
}

impl Direction {
    pub fn axis(&self) -> usize {
        match self {
            Direction::X => 0,
            Direction::Y => 1,
        }
    }
}

/// Equation constants. Only the constants relevant to the chosen system are
/// read: `advection_speed` for advection, `gamma` for Euler.
#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub advection_speed: f64,
    pub gamma: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            advection_speed: 1.0,
            gamma: 1.4,
        }
    }
}

/// A length-m vector of cell-averaged conserved quantities:
/// (rho, rho*u, [rho*v], E) for Euler, a single scalar otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservedState {
    pub values: Vec<f64>,
}

impl ConservedState {
    pub fn new(values: Vec<f64>) -> Self {
        ConservedState { values }
    }
}

/// Primitive variables: density, velocity components, pressure. Scalar
/// systems pass the conserved value through unchanged.
#[derive(Debug, Clone, PartialEq)]
pub enum Primitive {
    Scalar(f64),
    Euler {
        rho: f64,
        velocity: Vec<f64>,
        pressure: f64,
    },
}

/// Eigendecomposition of a directional flux Jacobian: eigenvalues ascending,
/// right eigenvectors as columns of `right`, left eigenvectors as rows of
/// `left`, normalized so that `left * right = I`.
#[derive(Debug, Clone)]
pub struct EigenDecomp {
    pub lambda: Vec<f64>,
    pub right: Mat,
    pub left: Mat,
}

/// One of the six registered systems, with consistent flux / Jacobian /
/// eigenstructure maps and a validity predicate.
#[derive(Debug, Clone)]
pub struct PdeSystem {
    name: SystemName,
    m: usize,
    dim: usize,
    params: Params,
}

/// Builds a fully populated system.
///
/// `name` must be one of `advection1d`, `advection2d`, `burgers1d`,
/// `burgers2d`, `euler1d`, `euler2d`; Euler requires `gamma > 1`.
pub fn make_system(name: &str, params: Params) -> Result<PdeSystem, PdeError> {
    let name = SystemName::parse(name).ok_or_else(|| PdeError::UnknownSystem(name.to_string()))?;
    PdeSystem::new(name, params)
}

impl PdeSystem {
    pub fn new(name: SystemName, params: Params) -> Result<PdeSystem, PdeError> {
        let (m, dim) = match name {
            SystemName::Advection1d | SystemName::Burgers1d => (1, 1),
            SystemName::Advection2d | SystemName::Burgers2d => (1, 2),
            SystemName::Euler1d => (3, 1),
            SystemName::Euler2d => (4, 2),
        };
        if matches!(name, SystemName::Euler1d | SystemName::Euler2d) && !(params.gamma > 1.0) {
            return Err(PdeError::NonPhysicalParameter(format!(
                "adiabatic index gamma = {} must exceed 1",
                params.gamma
            )));
        }
        if matches!(name, SystemName::Advection1d | SystemName::Advection2d)
            && !params.advection_speed.is_finite()
        {
            return Err(PdeError::NonPhysicalParameter(
                "advection speed must be finite".into(),
            ));
        }
        Ok(PdeSystem {
            name,
            m,
            dim,
            params,
        })
    }

    pub fn name(&self) -> SystemName {
        self.name
    }

    /// Count of conserved variables.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Spatial dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn is_scalar(&self) -> bool {
        self.m == 1
    }

    fn check_direction(&self, dir: Direction) -> Result<(), PdeError> {
        if dir.axis() >= self.dim {
            Err(PdeError::BadDirection { dir, dim: self.dim })
        } else {
            Ok(())
        }
    }

    /// Validity predicate. Scalar systems require finite entries; Euler
    /// additionally requires rho > 0 and P > 0.
    pub fn is_valid(&self, u: &[f64]) -> bool {
        if u.len() != self.m || u.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match self.name {
            SystemName::Euler1d | SystemName::Euler2d => {
                let rho = u[0];
                if rho <= 0.0 {
                    return false;
                }
                self.euler_pressure(u) > 0.0
            }
            _ => true,
        }
    }

    fn require_valid(&self, u: &[f64]) -> Result<(), PdeError> {
        if self.is_valid(u) {
            Ok(())
        } else {
            Err(PdeError::InvalidState(format!("{:?}", u)))
        }
    }

    /// Ideal-gas pressure P = (gamma - 1)(E - kinetic energy density).
    fn euler_pressure(&self, u: &[f64]) -> f64 {
        let g = self.params.gamma;
        let rho = u[0];
        match self.name {
            SystemName::Euler1d => {
                let mx = u[1];
                let e = u[2];
                (g - 1.0) * (e - 0.5 * mx * mx / rho)
            }
            SystemName::Euler2d => {
                let mx = u[1];
                let my = u[2];
                let e = u[3];
                (g - 1.0) * (e - 0.5 * (mx * mx + my * my) / rho)
            }
            _ => unreachable!("pressure only defined for Euler"),
        }
    }

    /// Directional flux F(U), written into `out`.
    pub fn flux_into(&self, u: &[f64], dir: Direction, out: &mut [f64]) {
        debug_assert_eq!(u.len(), self.m);
        debug_assert_eq!(out.len(), self.m);
        match self.name {
            SystemName::Advection1d | SystemName::Advection2d => {
                out[0] = self.params.advection_speed * u[0];
            }
            SystemName::Burgers1d | SystemName::Burgers2d => {
                out[0] = 0.5 * u[0] * u[0];
            }
            SystemName::Euler1d => {
                let rho = u[0];
                let mx = u[1];
                let e = u[2];
                let vel = mx / rho;
                let p = self.euler_pressure(u);
                out[0] = mx;
                out[1] = mx * vel + p;
                out[2] = vel * (e + p);
            }
            SystemName::Euler2d => {
                let rho = u[0];
                let mx = u[1];
                let my = u[2];
                let e = u[3];
                let p = self.euler_pressure(u);
                match dir {
                    Direction::X => {
                        let vel = mx / rho;
                        out[0] = mx;
                        out[1] = mx * vel + p;
                        out[2] = my * vel;
                        out[3] = vel * (e + p);
                    }
                    Direction::Y => {
                        let vel = my / rho;
                        out[0] = my;
                        out[1] = mx * vel;
                        out[2] = my * vel + p;
                        out[3] = vel * (e + p);
                    }
                }
            }
        }
    }

    pub fn flux(&self, u: &[f64], dir: Direction) -> Vec<f64> {
        let mut out = vec![0.0; self.m];
        self.flux_into(u, dir, &mut out);
        out
    }

    /// Directional flux Jacobian dF/dU.
    pub fn jacobian(&self, u: &[f64], dir: Direction) -> Mat {
        match self.name {
            SystemName::Advection1d | SystemName::Advection2d => {
                Mat::from_rows(&[&[self.params.advection_speed]])
            }
            SystemName::Burgers1d | SystemName::Burgers2d => Mat::from_rows(&[&[u[0]]]),
            SystemName::Euler1d => {
                let g = self.params.gamma;
                let rho = u[0];
                let vel = u[1] / rho;
                let e = u[2];
                let p = self.euler_pressure(u);
                let h = (e + p) / rho;
                Mat::from_rows(&[
                    &[0.0, 1.0, 0.0],
                    &[0.5 * (g - 3.0) * vel * vel, (3.0 - g) * vel, g - 1.0],
                    &[
                        0.5 * (g - 1.0) * vel * vel * vel - vel * h,
                        h - (g - 1.0) * vel * vel,
                        g * vel,
                    ],
                ])
            }
            SystemName::Euler2d => {
                let g = self.params.gamma;
                let rho = u[0];
                let (vn, vt) = match dir {
                    Direction::X => (u[1] / rho, u[2] / rho),
                    Direction::Y => (u[2] / rho, u[1] / rho),
                };
                let e = u[3];
                let p = self.euler_pressure(u);
                let h = (e + p) / rho;
                let q2 = vn * vn + vt * vt;
                let phi2 = 0.5 * (g - 1.0) * q2;
                // Rows below are for the x-flux with (vn, vt) = (u, v);
                // the y-flux is the same matrix with momentum rows/columns
                // swapped.
                let a = [
                    [0.0, 1.0, 0.0, 0.0],
                    [
                        phi2 - vn * vn,
                        (3.0 - g) * vn,
                        -(g - 1.0) * vt,
                        g - 1.0,
                    ],
                    [-vn * vt, vt, vn, 0.0],
                    [
                        vn * (phi2 - h),
                        h - (g - 1.0) * vn * vn,
                        -(g - 1.0) * vn * vt,
                        g * vn,
                    ],
                ];
                let perm: [usize; 4] = match dir {
                    Direction::X => [0, 1, 2, 3],
                    Direction::Y => [0, 2, 1, 3],
                };
                let mut m = Mat::zeros(4);
                for i in 0..4 {
                    for j in 0..4 {
                        m[(perm[i], perm[j])] = a[i][j];
                    }
                }
                m
            }
        }
    }

    /// Eigendecomposition of the directional flux Jacobian. Eigenvalues come
    /// back ascending; left and right eigenvectors satisfy L * R = I.
    ///
    /// The Euler eigenvectors use the standard conservative-variable Roe
    /// eigensystem with the acoustic rows carrying the 1/2 normalization
    /// factor.
    pub fn eigen(&self, u: &[f64], dir: Direction) -> Result<EigenDecomp, PdeError> {
        self.check_direction(dir)?;
        self.require_valid(u)?;
        Ok(match self.name {
            SystemName::Advection1d | SystemName::Advection2d => EigenDecomp {
                lambda: vec![self.params.advection_speed],
                right: Mat::identity(1),
                left: Mat::identity(1),
            },
            SystemName::Burgers1d | SystemName::Burgers2d => EigenDecomp {
                lambda: vec![u[0]],
                right: Mat::identity(1),
                left: Mat::identity(1),
            },
            SystemName::Euler1d => {
                let g = self.params.gamma;
                let rho = u[0];
                let vel = u[1] / rho;
                let e = u[2];
                let p = self.euler_pressure(u);
                let c = (g * p / rho).sqrt();
                let h = (e + p) / rho;
                let b1 = (g - 1.0) / (c * c);
                let b2 = 0.5 * b1 * vel * vel;
                let right = Mat::from_rows(&[
                    &[1.0, 1.0, 1.0],
                    &[vel - c, vel, vel + c],
                    &[h - vel * c, 0.5 * vel * vel, h + vel * c],
                ]);
                let left = Mat::from_rows(&[
                    &[
                        0.5 * (b2 + vel / c),
                        0.5 * (-b1 * vel - 1.0 / c),
                        0.5 * b1,
                    ],
                    &[1.0 - b2, b1 * vel, -b1],
                    &[
                        0.5 * (b2 - vel / c),
                        0.5 * (-b1 * vel + 1.0 / c),
                        0.5 * b1,
                    ],
                ]);
                EigenDecomp {
                    lambda: vec![vel - c, vel, vel + c],
                    right,
                    left,
                }
            }
            SystemName::Euler2d => {
                let g = self.params.gamma;
                let rho = u[0];
                let (vn, vt) = match dir {
                    Direction::X => (u[1] / rho, u[2] / rho),
                    Direction::Y => (u[2] / rho, u[1] / rho),
                };
                let e = u[3];
                let p = self.euler_pressure(u);
                let c = (g * p / rho).sqrt();
                let h = (e + p) / rho;
                let q2 = vn * vn + vt * vt;
                let b1 = (g - 1.0) / (c * c);
                let b2 = 0.5 * b1 * q2;
                // Columns: acoustic-, contact, shear, acoustic+ (in normal /
                // tangential component order; permuted back below).
                let right = [
                    [1.0, 1.0, 0.0, 1.0],
                    [vn - c, vn, 0.0, vn + c],
                    [vt, vt, 1.0, vt],
                    [h - vn * c, 0.5 * q2, vt, h + vn * c],
                ];
                let left = [
                    [
                        0.5 * (b2 + vn / c),
                        0.5 * (-b1 * vn - 1.0 / c),
                        0.5 * (-b1 * vt),
                        0.5 * b1,
                    ],
                    [1.0 - b2, b1 * vn, b1 * vt, -b1],
                    [-vt, 0.0, 1.0, 0.0],
                    [
                        0.5 * (b2 - vn / c),
                        0.5 * (-b1 * vn + 1.0 / c),
                        0.5 * (-b1 * vt),
                        0.5 * b1,
                    ],
                ];
                let perm: [usize; 4] = match dir {
                    Direction::X => [0, 1, 2, 3],
                    Direction::Y => [0, 2, 1, 3],
                };
                let mut r = Mat::zeros(4);
                let mut l = Mat::zeros(4);
                for i in 0..4 {
                    for j in 0..4 {
                        r[(perm[i], j)] = right[i][j];
                        l[(j, perm[i])] = left[j][i];
                    }
                }
                EigenDecomp {
                    lambda: vec![vn - c, vn, vn, vn + c],
                    right: r,
                    left: l,
                }
            }
        })
    }

    /// Largest characteristic speed max_i |lambda_i| in `dir`; feeds the CFL
    /// condition.
    pub fn max_wave_speed(&self, u: &[f64], dir: Direction) -> Result<f64, PdeError> {
        self.check_direction(dir)?;
        self.require_valid(u)?;
        Ok(match self.name {
            SystemName::Advection1d | SystemName::Advection2d => self.params.advection_speed.abs(),
            SystemName::Burgers1d | SystemName::Burgers2d => u[0].abs(),
            SystemName::Euler1d | SystemName::Euler2d => {
                let rho = u[0];
                let p = self.euler_pressure(u);
                let c = (self.params.gamma * p / rho).sqrt();
                let vel = match (self.name, dir) {
                    (SystemName::Euler1d, _) => u[1] / rho,
                    (SystemName::Euler2d, Direction::X) => u[1] / rho,
                    (SystemName::Euler2d, Direction::Y) => u[2] / rho,
                    _ => unreachable!(),
                };
                vel.abs() + c
            }
        })
    }

    /// Conserved -> primitive. Errors on non-positive density or pressure.
    pub fn primitive_from_conserved(&self, u: &[f64]) -> Result<Primitive, PdeError> {
        match self.name {
            SystemName::Euler1d | SystemName::Euler2d => {
                let rho = u[0];
                if !(rho > 0.0) {
                    return Err(PdeError::InvalidState(format!("density {rho} <= 0")));
                }
                let p = self.euler_pressure(u);
                if !(p > 0.0) {
                    return Err(PdeError::InvalidState(format!("pressure {p} <= 0")));
                }
                let velocity = if self.name == SystemName::Euler1d {
                    vec![u[1] / rho]
                } else {
                    vec![u[1] / rho, u[2] / rho]
                };
                Ok(Primitive::Euler {
                    rho,
                    velocity,
                    pressure: p,
                })
            }
            _ => Ok(Primitive::Scalar(u[0])),
        }
    }

    /// Primitive -> conserved; inverse of `primitive_from_conserved`.
    pub fn conserved_from_primitive(&self, prim: &Primitive) -> Vec<f64> {
        match prim {
            Primitive::Scalar(v) => vec![*v],
            Primitive::Euler {
                rho,
                velocity,
                pressure,
            } => {
                let g = self.params.gamma;
                let ke: f64 = 0.5 * rho * velocity.iter().map(|v| v * v).sum::<f64>();
                let e = pressure / (g - 1.0) + ke;
                let mut out = vec![*rho];
                out.extend(velocity.iter().map(|v| rho * v));
                out.push(e);
                out
            }
        }
    }

    /// Second derivative f''(u) of the scalar flux; None for systems.
    pub fn scalar_flux_curvature(&self, _u: f64) -> Option<f64> {
        match self.name {
            SystemName::Advection1d | SystemName::Advection2d => Some(0.0),
            SystemName::Burgers1d | SystemName::Burgers2d => Some(1.0),
            _ => None,
        }
    }

    /// Hessians of each flux component: out[alpha][(i, j)] = d2 F_alpha / dU_i dU_j.
    /// Used by the conservation-form residual gradients.
    pub fn flux_hessians(&self, u: &[f64], dir: Direction) -> Vec<Mat> {
        match self.name {
            SystemName::Advection1d | SystemName::Advection2d => vec![Mat::zeros(1)],
            SystemName::Burgers1d | SystemName::Burgers2d => {
                let mut h = Mat::zeros(1);
                h[(0, 0)] = 1.0;
                vec![h]
            }
            SystemName::Euler1d => {
                let g = self.params.gamma;
                let rho = u[0];
                let m = u[1];
                let e = u[2];
                let r2 = rho * rho;
                let r3 = r2 * rho;
                let r4 = r3 * rho;
                let h0 = Mat::zeros(3);
                let mut h1 = Mat::zeros(3);
                h1[(0, 0)] = (3.0 - g) * m * m / r3;
                h1[(0, 1)] = -(3.0 - g) * m / r2;
                h1[(1, 0)] = h1[(0, 1)];
                h1[(1, 1)] = (3.0 - g) / rho;
                let mut h2 = Mat::zeros(3);
                h2[(0, 0)] = 2.0 * g * m * e / r3 - 3.0 * (g - 1.0) * m * m * m / r4;
                h2[(0, 1)] = -g * e / r2 + 3.0 * (g - 1.0) * m * m / r3;
                h2[(1, 0)] = h2[(0, 1)];
                h2[(0, 2)] = -g * m / r2;
                h2[(2, 0)] = h2[(0, 2)];
                h2[(1, 1)] = -3.0 * (g - 1.0) * m / r2;
                h2[(1, 2)] = g / rho;
                h2[(2, 1)] = h2[(1, 2)];
                vec![h0, h1, h2]
            }
            SystemName::Euler2d => {
                // Hessians for the x-flux in (rho, mn, mt, E) ordering with
                // mn the momentum normal to the interface; permuted for Y.
                let g = self.params.gamma;
                let rho = u[0];
                let (a, b) = match dir {
                    Direction::X => (u[1], u[2]),
                    Direction::Y => (u[2], u[1]),
                };
                let e = u[3];
                let r2 = rho * rho;
                let r3 = r2 * rho;
                let r4 = r3 * rho;
                let h0 = Mat::zeros(4);
                let mut h1 = Mat::zeros(4);
                h1[(0, 0)] = (3.0 - g) * a * a / r3 - (g - 1.0) * b * b / r3;
                h1[(0, 1)] = -(3.0 - g) * a / r2;
                h1[(1, 0)] = h1[(0, 1)];
                h1[(0, 2)] = (g - 1.0) * b / r2;
                h1[(2, 0)] = h1[(0, 2)];
                h1[(1, 1)] = (3.0 - g) / rho;
                h1[(2, 2)] = -(g - 1.0) / rho;
                let mut h2 = Mat::zeros(4);
                h2[(0, 0)] = 2.0 * a * b / r3;
                h2[(0, 1)] = -b / r2;
                h2[(1, 0)] = h2[(0, 1)];
                h2[(0, 2)] = -a / r2;
                h2[(2, 0)] = h2[(0, 2)];
                h2[(1, 2)] = 1.0 / rho;
                h2[(2, 1)] = h2[(1, 2)];
                let mut h3 = Mat::zeros(4);
                let a3ab2 = a * a * a + a * b * b;
                h3[(0, 0)] = 2.0 * g * a * e / r3 - 3.0 * (g - 1.0) * a3ab2 / r4;
                h3[(0, 1)] = -g * e / r2 + (g - 1.0) * (3.0 * a * a + b * b) / r3;
                h3[(1, 0)] = h3[(0, 1)];
                h3[(0, 2)] = 2.0 * (g - 1.0) * a * b / r3;
                h3[(2, 0)] = h3[(0, 2)];
                h3[(0, 3)] = -g * a / r2;
                h3[(3, 0)] = h3[(0, 3)];
                h3[(1, 1)] = -3.0 * (g - 1.0) * a / r2;
                h3[(1, 2)] = -(g - 1.0) * b / r2;
                h3[(2, 1)] = h3[(1, 2)];
                h3[(1, 3)] = g / rho;
                h3[(3, 1)] = h3[(1, 3)];
                h3[(2, 2)] = -(g - 1.0) * a / r2;
                let mut out = vec![h0, h1, h2, h3];
                if dir == Direction::Y {
                    // Back from (rho, mn, mt, E) to conserved (rho, mx, my, E)
                    // ordering, both across components and within each Hessian.
                    out.swap(1, 2);
                    for h in &mut out {
                        *h = permute_hessian_y(h);
                    }
                }
                out
            }
        }
    }
}

/// Permute Hessian rows/columns from (rho, mn, mt, E) to (rho, mx, my, E).
fn permute_hessian_y(h: &Mat) -> Mat {
    let perm = [0usize, 2, 1, 3];
    let mut out = Mat::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            out[(perm[i], perm[j])] = h[(i, j)];
        }
    }
    out
}
