use crate::taylor::Taylor;
use crate::CharError;

/// One analytic form from the closed catalog.
#[derive(Debug, Clone, PartialEq)]
pub enum Piece {
    Constant(f64),
    /// intercept + slope * x
    Affine { intercept: f64, slope: f64 },
    /// offset + amplitude * sin(frequency * x + phase)
    Sine {
        amplitude: f64,
        frequency: f64,
        phase: f64,
        offset: f64,
    },
    /// amplitude * exp(-((x - center) / width)^2)
    Gaussian {
        amplitude: f64,
        center: f64,
        width: f64,
    },
}

impl Piece {
    fn taylor_at(&self, x: f64) -> Taylor {
        match *self {
            Piece::Constant(c) => Taylor::constant(c),
            Piece::Affine { intercept, slope } => Taylor::variable(x).scale(slope).shift(intercept),
            Piece::Sine {
                amplitude,
                frequency,
                phase,
                offset,
            } => Taylor::variable(x)
                .scale(frequency)
                .shift(phase)
                .sin()
                .scale(amplitude)
                .shift(offset),
            Piece::Gaussian {
                amplitude,
                center,
                width,
            } => {
                let s = Taylor::variable(x).shift(-center).scale(1.0 / width);
                s.mul(&s).scale(-1.0).exp().scale(amplitude)
            }
        }
    }

    /// Rescale the x axis by k (piece for u0(x / k) given the piece for u0).
    pub fn stretch(&self, k: f64) -> Piece {
        match *self {
            Piece::Constant(c) => Piece::Constant(c),
            Piece::Affine { intercept, slope } => Piece::Affine {
                intercept,
                slope: slope / k,
            },
            Piece::Sine {
                amplitude,
                frequency,
                phase,
                offset,
            } => Piece::Sine {
                amplitude,
                frequency: frequency / k,
                phase,
                offset,
            },
            Piece::Gaussian {
                amplitude,
                center,
                width,
            } => Piece::Gaussian {
                amplitude,
                center: center * k,
                width: width * k,
            },
        }
    }
}

/// Piecewise-analytic 1D profile: strictly increasing breakpoints inside the
/// domain, one catalog piece per subinterval (pieces.len() = breakpoints + 1).
/// Piece j applies on [b_{j-1}, b_j); evaluation at a breakpoint takes the
/// right piece, and one-sided limits are available for both.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile1d {
    pub domain: (f64, f64),
    pub breakpoints: Vec<f64>,
    pub pieces: Vec<Piece>,
}

impl Profile1d {
    pub fn uniform(domain: (f64, f64), piece: Piece) -> Profile1d {
        Profile1d {
            domain,
            breakpoints: Vec::new(),
            pieces: vec![piece],
        }
    }

    pub fn step(domain: (f64, f64), at: f64, left: f64, right: f64) -> Profile1d {
        Profile1d {
            domain,
            breakpoints: vec![at],
            pieces: vec![Piece::Constant(left), Piece::Constant(right)],
        }
    }

    pub fn validate(&self) -> Result<(), CharError> {
        if self.pieces.len() != self.breakpoints.len() + 1 {
            return Err(CharError::BadDescriptor(
                "need exactly breakpoints + 1 pieces".into(),
            ));
        }
        if !(self.domain.1 > self.domain.0) {
            return Err(CharError::BadDescriptor("empty domain".into()));
        }
        let mut prev = self.domain.0;
        for &b in &self.breakpoints {
            if !(b > prev) || !(b < self.domain.1) {
                return Err(CharError::BadDescriptor(
                    "breakpoints must be strictly increasing inside the domain".into(),
                ));
            }
            prev = b;
        }
        Ok(())
    }

    fn piece_index(&self, x: f64) -> usize {
        self.breakpoints.iter().take_while(|&&b| x >= b).count()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.pieces[self.piece_index(x)].taylor_at(x).value()
    }

    /// k-th derivative at x (right-continuous at breakpoints).
    pub fn derivative(&self, x: f64, k: usize) -> f64 {
        self.pieces[self.piece_index(x)].taylor_at(x).derivative(k)
    }

    /// One-sided k-th derivatives (left, right) at breakpoint index `bi`.
    pub fn one_sided(&self, bi: usize, k: usize) -> (f64, f64) {
        let b = self.breakpoints[bi];
        let left = self.pieces[bi].taylor_at(b).derivative(k);
        let right = self.pieces[bi + 1].taylor_at(b).derivative(k);
        (left, right)
    }

    /// Rescaled profile u0(x / k) on the stretched domain.
    pub fn stretch(&self, k: f64) -> Profile1d {
        Profile1d {
            domain: (self.domain.0 * k, self.domain.1 * k),
            breakpoints: self.breakpoints.iter().map(|b| b * k).collect(),
            pieces: self.pieces.iter().map(|p| p.stretch(k)).collect(),
        }
    }
}

/// 2D initial data forms used by the registered problems.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile2d {
    Disk {
        center: (f64, f64),
        radius_sq: f64,
        inside: f64,
        outside: f64,
    },
    /// Four constant states split at `corner`: values ordered
    /// [x >= cx & y >= cy, x < cx & y >= cy, x >= cx & y < cy, x < cx & y < cy].
    Quadrants { corner: (f64, f64), values: [f64; 4] },
}

impl Profile2d {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match *self {
            Profile2d::Disk {
                center,
                radius_sq,
                inside,
                outside,
            } => {
                if (x - center.0).powi(2) + (y - center.1).powi(2) <= radius_sq {
                    inside
                } else {
                    outside
                }
            }
            Profile2d::Quadrants { corner, values } => {
                match (x >= corner.0, y >= corner.1) {
                    (true, true) => values[0],
                    (false, true) => values[1],
                    (true, false) => values[2],
                    (false, false) => values[3],
                }
            }
        }
    }

    pub fn has_jump(&self) -> bool {
        match *self {
            Profile2d::Disk {
                inside, outside, ..
            } => inside != outside,
            Profile2d::Quadrants { values, .. } => values.iter().any(|v| *v != values[0]),
        }
    }
}

/// Per-component initial data for one problem.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    OneD(Vec<Profile1d>),
    TwoD(Vec<Profile2d>),
}

impl InitialData {
    pub fn scalar_1d(profile: Profile1d) -> InitialData {
        InitialData::OneD(vec![profile])
    }

    pub fn components(&self) -> usize {
        match self {
            InitialData::OneD(v) => v.len(),
            InitialData::TwoD(v) => v.len(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            InitialData::OneD(_) => 1,
            InitialData::TwoD(_) => 2,
        }
    }

    /// Sample all components at a point; the shape `run_simulation` wants.
    pub fn eval(&self, point: &[f64]) -> Vec<f64> {
        match self {
            InitialData::OneD(v) => v.iter().map(|p| p.eval(point[0])).collect(),
            InitialData::TwoD(v) => v.iter().map(|p| p.eval(point[0], point[1])).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), CharError> {
        if self.components() == 0 {
            return Err(CharError::BadDescriptor("no components".into()));
        }
        if let InitialData::OneD(v) = self {
            for p in v {
                p.validate()?;
            }
        }
        Ok(())
    }
}
