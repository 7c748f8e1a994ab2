use crate::mlp::{InputNorm, Mlp};
use crate::NeuralError;

/// Closed-form strictly monotone stage with an exact inverse. `apply` maps a
/// stage input toward the solution; `inverse` is used to build training
/// targets for the stages before it.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticMap {
    /// y -> arcsinh(y) / c, Lipschitz 1/c, inverse u -> sinh(c u).
    ArcsinhOverC { c: f64 },
    /// y -> arctan(y) / c, Lipschitz 1/c, inverse u -> tan(c u) for |c u| < pi/2.
    ArctanOverC { c: f64 },
    /// y -> tanh(y) / c, Lipschitz 1/c, inverse u -> artanh(c u) for |c u| < 1.
    TanhOverC { c: f64 },
    /// y -> y / c; the trivial candidate that confers no actual advantage.
    IdentityOverC { c: f64 },
    /// y -> offset + scale * y, Lipschitz |scale|; un-normalizes data ranges.
    Affine { scale: f64, offset: f64 },
}

impl AnalyticMap {
    pub fn apply(&self, y: f64) -> f64 {
        match *self {
            AnalyticMap::ArcsinhOverC { c } => y.asinh() / c,
            AnalyticMap::ArctanOverC { c } => y.atan() / c,
            AnalyticMap::TanhOverC { c } => y.tanh() / c,
            AnalyticMap::IdentityOverC { c } => y / c,
            AnalyticMap::Affine { scale, offset } => offset + scale * y,
        }
    }

    /// Exact inverse; errors when `u` leaves the map's range.
    pub fn inverse(&self, u: f64) -> Result<f64, NeuralError> {
        match *self {
            AnalyticMap::ArcsinhOverC { c } => Ok((c * u).sinh()),
            AnalyticMap::ArctanOverC { c } => {
                let a = c * u;
                if a.abs() >= std::f64::consts::FRAC_PI_2 {
                    return Err(NeuralError::InverseDomain(format!(
                        "arctan stage: |c u| = {} >= pi/2",
                        a.abs()
                    )));
                }
                Ok(a.tan())
            }
            AnalyticMap::TanhOverC { c } => {
                let a = c * u;
                if a.abs() >= 1.0 {
                    return Err(NeuralError::InverseDomain(format!(
                        "tanh stage: |c u| = {} >= 1",
                        a.abs()
                    )));
                }
                Ok(a.atanh())
            }
            AnalyticMap::IdentityOverC { c } => Ok(c * u),
            AnalyticMap::Affine { scale, offset } => {
                if scale == 0.0 {
                    return Err(NeuralError::InverseDomain("zero-scale affine".into()));
                }
                Ok((u - offset) / scale)
            }
        }
    }

    pub fn lipschitz(&self) -> f64 {
        match *self {
            AnalyticMap::ArcsinhOverC { c }
            | AnalyticMap::ArctanOverC { c }
            | AnalyticMap::TanhOverC { c }
            | AnalyticMap::IdentityOverC { c } => 1.0 / c,
            AnalyticMap::Affine { scale, .. } => scale.abs(),
        }
    }

    pub fn form_name(&self) -> &'static str {
        match self {
            AnalyticMap::ArcsinhOverC { .. } => "arcsinh_over_c",
            AnalyticMap::ArctanOverC { .. } => "arctan_over_c",
            AnalyticMap::TanhOverC { .. } => "tanh_over_c",
            AnalyticMap::IdentityOverC { .. } => "identity_over_c",
            AnalyticMap::Affine { .. } => "affine",
        }
    }

    pub fn c(&self) -> Option<f64> {
        match *self {
            AnalyticMap::ArcsinhOverC { c }
            | AnalyticMap::ArctanOverC { c }
            | AnalyticMap::TanhOverC { c }
            | AnalyticMap::IdentityOverC { c } => Some(c),
            AnalyticMap::Affine { .. } => None,
        }
    }
}

/// Plain baseline: a stack of single-hidden-layer blocks applied in order,
/// trained end-to-end. A "6-layer" network is three stacked blocks (each
/// block contributes its hidden and output layers).
#[derive(Debug, Clone, PartialEq)]
pub struct PlainNet {
    pub stack: Vec<Mlp>,
    pub norm: InputNorm,
}

impl PlainNet {
    pub fn forward(&self, raw: &[f64]) -> Vec<f64> {
        let mut v = self.norm.apply(raw);
        for mlp in &self.stack {
            v = mlp.forward(&v);
        }
        v
    }
}

/// Compositional network: a learned discontinuity-carrying head, an analytic
/// suppression stage applied componentwise, learned smooth correctors on the
/// normalized scale, and a final per-component affine un-normalization.
/// Analytic stages are evaluated exactly at inference.
#[derive(Debug, Clone, PartialEq)]
pub struct BeaconsNet {
    pub head: Mlp,
    pub suppression: AnalyticMap,
    pub correctors: Vec<Mlp>,
    /// One affine map per component: normalized [0, 1] scale -> raw units.
    pub unnormalize: Vec<AnalyticMap>,
    pub norm: InputNorm,
    /// Trained per-stage empirical max errors (head first, correctors after).
    pub stage_errors: Vec<f64>,
}

impl BeaconsNet {
    pub fn m(&self) -> usize {
        self.head.d_out
    }

    pub fn forward(&self, raw: &[f64]) -> Vec<f64> {
        let x = self.norm.apply(raw);
        let mut v = self.head.forward(&x);
        for y in &mut v {
            *y = self.suppression.apply(*y);
        }
        for c in &self.correctors {
            v = c.forward(&v);
        }
        v.iter()
            .zip(&self.unnormalize)
            .map(|(y, map)| map.apply(*y))
            .collect()
    }
}

/// A trained network of either kind.
#[derive(Debug, Clone, PartialEq)]
pub enum DeepNet {
    Plain(PlainNet),
    Beacons(BeaconsNet),
}

impl DeepNet {
    pub fn kind(&self) -> &'static str {
        match self {
            DeepNet::Plain(_) => "plain",
            DeepNet::Beacons(_) => "beacons",
        }
    }

    pub fn d_in(&self) -> usize {
        match self {
            DeepNet::Plain(p) => p.stack[0].d_in,
            DeepNet::Beacons(b) => b.head.d_in,
        }
    }

    pub fn d_out(&self) -> usize {
        match self {
            DeepNet::Plain(p) => p.stack.last().unwrap().d_out,
            DeepNet::Beacons(b) => b.m(),
        }
    }
}

/// Pure evaluation at arbitrary raw points (including extrapolation beyond
/// the training window). Points are flat row-major.
pub fn infer(net: &DeepNet, points: &[f64]) -> Vec<Vec<f64>> {
    let d = net.d_in();
    points
        .chunks_exact(d)
        .map(|p| match net {
            DeepNet::Plain(pl) => pl.forward(p),
            DeepNet::Beacons(b) => b.forward(p),
        })
        .collect()
}
