use serde::{Deserialize, Serialize};

/// Slope limiter for the piecewise-linear reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimiterKind {
    None,
    Minmod,
    MonotonizedCentered,
    VanLeer,
    Superbee,
}

impl LimiterKind {
    pub fn parse(s: &str) -> Option<LimiterKind> {
        Some(match s {
            "none" => LimiterKind::None,
            "minmod" => LimiterKind::Minmod,
            "monotonized_centered" | "mc" => LimiterKind::MonotonizedCentered,
            "van_leer" => LimiterKind::VanLeer,
            "superbee" => LimiterKind::Superbee,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            LimiterKind::None => "none",
            LimiterKind::Minmod => "minmod",
            LimiterKind::MonotonizedCentered => "monotonized_centered",
            LimiterKind::VanLeer => "van_leer",
            LimiterKind::Superbee => "superbee",
        }
    }
}

/// Evaluate the limiter function phi(theta) on a slope ratio.
///
/// All four limiters satisfy phi(theta) = 0 for theta <= 0, phi(1) = 1, and
/// 0 <= phi <= 2 inside the second-order TVD region. `theta` may be +/-inf;
/// the limiter's limit value applies there. `LimiterKind::None` evaluates to
/// zero (piecewise-constant reconstruction).
pub fn limiter_eval(kind: LimiterKind, theta: f64) -> f64 {
    if theta <= 0.0 || theta.is_nan() {
        return 0.0;
    }
    match kind {
        LimiterKind::None => 0.0,
        LimiterKind::Minmod => theta.min(1.0),
        LimiterKind::MonotonizedCentered => (0.5 * (1.0 + theta)).min(2.0).min(2.0 * theta),
        LimiterKind::VanLeer => {
            if theta.is_infinite() {
                2.0
            } else {
                2.0 * theta / (1.0 + theta)
            }
        }
        LimiterKind::Superbee => {
            if theta.is_infinite() {
                2.0
            } else {
                ((2.0 * theta).min(1.0)).max(theta.min(2.0)).max(0.0)
            }
        }
    }
}

/// Limited difference phi(a/b) * b, with the b = 0 case taken as the limit
/// value zero (phi is bounded). `a` and `b` are the backward and forward
/// cell differences around the cell being reconstructed.
#[inline]
pub fn limited_difference(kind: LimiterKind, a: f64, b: f64) -> f64 {
    if b == 0.0 {
        0.0
    } else {
        limiter_eval(kind, a / b) * b
    }
}
