use crate::rates::shallow_rate;
use crate::CertError;
use characteristics::{Classification, SmoothnessReport};
use neural::AnalyticMap;

/// One stage of a compositional architecture, listed innermost (head) first.
#[derive(Debug, Clone, PartialEq)]
pub enum Stage {
    /// Closed-form strictly monotone map with an exact inverse; contributes
    /// no approximation error, only its Lipschitz constant.
    Analytic { map: AnalyticMap },
    /// Shallow learned stage. `scale` is the affine factor that carries the
    /// normalized-ball rate back to the stage's target units; `n` is the
    /// target smoothness used for the smooth-part bound. Learned targets are
    /// 1-Lipschitz on the normalized scale, so learned stages fold with a
    /// unit Lipschitz constant.
    Learned {
        width: usize,
        d_in: usize,
        n: u32,
        scale: f64,
        head: bool,
    },
}

impl Stage {
    pub fn lipschitz(&self) -> f64 {
        match self {
            Stage::Analytic { map } => map.lipschitz(),
            Stage::Learned { .. } => 1.0,
        }
    }
}

/// Ordered composition of analytic Lipschitz maps and shallow learned
/// stages; exactly one learned stage carries the discontinuities.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionChain {
    pub stages: Vec<Stage>,
}

impl CompositionChain {
    /// Single learned stage, the degenerate chain of a plain architecture
    /// viewed as one d-input map.
    pub fn single(width: usize, d_in: usize, n: u32, scale: f64) -> CompositionChain {
        CompositionChain {
            stages: vec![Stage::Learned {
                width,
                d_in,
                n,
                scale,
                head: true,
            }],
        }
    }

    pub fn head_index(&self) -> Option<usize> {
        self.stages.iter().position(
            |s| matches!(s, Stage::Learned { head, .. } if *head),
        )
    }

    /// Structural invariants: exactly one head stage, and range containment
    /// for the analytic stage that follows the normalized head output. The
    /// normalized target scale is [0, 1]; a suppression map admits it when
    /// its inverse is defined across the whole interval.
    pub fn validate(&self) -> Result<(), CertError> {
        let heads = self
            .stages
            .iter()
            .filter(|s| matches!(s, Stage::Learned { head: true, .. }))
            .count();
        if heads != 1 {
            return Err(CertError::BadChain(format!(
                "{heads} head stages (need exactly one)"
            )));
        }
        for s in &self.stages {
            if let Stage::Analytic { map } = s {
                // range(u) on the normalized scale must sit inside range(f):
                // probe the inverse across [0, 1].
                for k in 0..=16 {
                    let u = k as f64 / 16.0;
                    if map.inverse(u).is_err() {
                        return Err(CertError::BadChain(format!(
                            "range containment violated: {} cannot reach u = {u}",
                            map.form_name()
                        )));
                    }
                }
            }
            if let Stage::Learned { scale, .. } = s {
                if !(*scale >= 0.0) || !scale.is_finite() {
                    return Err(CertError::BadChain("bad stage scale".into()));
                }
            }
        }
        Ok(())
    }

    /// Raw per-stage contributions of the outermost-first compose_bound
    /// fold: bound = sum over stages of rate(stage) * product of Lipschitz
    /// constants of all stages applied after it. `head_n` chooses the head
    /// stage's smoothness (the smooth-part order, or 0 for the non-smooth
    /// bound).
    pub fn fold_bound(&self, head_n: u32) -> f64 {
        let mut bound = 0.0;
        for (i, stage) in self.stages.iter().enumerate() {
            let rate = match stage {
                Stage::Analytic { .. } => 0.0,
                Stage::Learned {
                    width,
                    d_in,
                    n,
                    scale,
                    head,
                } => {
                    let n_eff = if *head { head_n } else { *n };
                    shallow_rate(*width, n_eff, *d_in) * scale
                }
            };
            let suffix: f64 = self.stages[i + 1..].iter().map(|s| s.lipschitz()).product();
            bound += rate * suffix;
        }
        bound
    }
}

/// Bound on the non-smooth parts, or the reason none can be proved.
#[derive(Debug, Clone, PartialEq)]
pub enum NonSmoothBound {
    Bound(f64),
    NoBound { reason: String },
}

/// Fold the chain against a smoothness report: the head stage uses the
/// report's smooth-part order for the smooth bound and order 0 for the
/// non-smooth bound. An asymptotically-smooth classification yields no
/// non-smooth bound, because the discontinuity set is asymptotically empty.
pub fn chain_bound(
    chain: &CompositionChain,
    report: &SmoothnessReport,
) -> Result<(f64, NonSmoothBound), CertError> {
    chain.validate()?;
    let smooth = chain.fold_bound(report.n_smooth_part);
    let nonsmooth = match report.classification {
        Classification::AsymptoticallySmooth => NonSmoothBound::NoBound {
            reason: "discontinuity set is asymptotically empty".into(),
        },
        _ => NonSmoothBound::Bound(chain.fold_bound(0)),
    };
    Ok((smooth, nonsmooth))
}
