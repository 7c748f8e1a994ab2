use crate::HarnessError;
use fv_solver::FrameSeries;

/// Normalized error and conservation metrics for one architecture, computed
/// over the predicted frames after the training cutoff.
///
/// Conventions (the literature reports normalized errors without defining
/// the normalizer, so these are fixed here and documented): the L-inf
/// normalizer is max |reference| over the post-cutoff frames; the L2
/// normalizer is the discrete L2 norm of the reference over the same set
/// (per-frame mean); conservation entries are raw sums of cell differences,
/// so they scale extensively with resolution, and they are signed.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub architecture: String,
    pub l_inf_final: f64,
    pub l2_final: f64,
    pub l_inf_all: f64,
    pub l2_all: f64,
    /// Signed, per conserved component.
    pub conservation_final: Vec<f64>,
    pub conservation_total: Vec<f64>,
}

impl MetricsRow {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let finite = self.l_inf_final.is_finite()
            && self.l2_final.is_finite()
            && self.l_inf_all.is_finite()
            && self.l2_all.is_finite()
            && self
                .conservation_final
                .iter()
                .chain(&self.conservation_total)
                .all(|v| v.is_finite());
        if !finite {
            return Err(HarnessError::Metrics("non-finite metric".into()));
        }
        if self.l_inf_final < 0.0 || self.l_inf_all < 0.0 {
            return Err(HarnessError::Metrics("negative L-inf".into()));
        }
        Ok(())
    }
}

/// Compare predicted frames against the reference on the frames after
/// `train_cutoff` (frame indices >= cutoff). `headline` picks the component
/// for the error metrics; conservation is reported for every component.
pub fn compute_metrics(
    reference: &FrameSeries,
    predicted: &FrameSeries,
    train_cutoff: usize,
    headline: usize,
    architecture: &str,
) -> Result<MetricsRow, HarnessError> {
    if reference.grid() != predicted.grid() {
        return Err(HarnessError::Metrics("grid mismatch".into()));
    }
    let post_ref = &reference.frames[train_cutoff..];
    let post_times = &reference.times[train_cutoff..];
    if predicted.frames.len() != post_ref.len() {
        return Err(HarnessError::Metrics(format!(
            "{} predicted frames for {} post-cutoff reference frames",
            predicted.frames.len(),
            post_ref.len()
        )));
    }
    for (tp, tr) in predicted.times.iter().zip(post_times) {
        if tp != tr {
            return Err(HarnessError::Metrics("frame time mismatch".into()));
        }
    }
    let m = reference.m();
    let (nx, ny) = post_ref[0].interior_extent();
    let dv = reference.grid().cell_volume();

    // Normalizers over the post-cutoff reference block.
    let mut ref_max = 0.0f64;
    let mut ref_l2_sq_sum = 0.0f64;
    for frame in post_ref {
        let mut frame_sq = 0.0;
        for iy in 0..ny {
            for ix in 0..nx {
                let v = frame.interior(ix, iy)[headline];
                ref_max = ref_max.max(v.abs());
                frame_sq += v * v;
            }
        }
        ref_l2_sq_sum += frame_sq * dv;
    }
    let linf_norm = if ref_max > 0.0 { ref_max } else { 1.0 };
    let l2_norm = {
        let mean = ref_l2_sq_sum / post_ref.len() as f64;
        if mean > 0.0 {
            mean.sqrt()
        } else {
            1.0
        }
    };

    let mut l_inf_all = 0.0f64;
    let mut l2_frames = Vec::with_capacity(post_ref.len());
    let mut l_inf_final = 0.0;
    let mut l2_final = 0.0;
    let mut cons_final = vec![0.0; m];
    let mut cons_total = vec![0.0; m];
    for (k, (rf, pf)) in post_ref.iter().zip(&predicted.frames).enumerate() {
        let mut frame_max = 0.0f64;
        let mut frame_sq = 0.0;
        let mut frame_cons = vec![0.0; m];
        for iy in 0..ny {
            for ix in 0..nx {
                let rv = rf.interior(ix, iy);
                let pv = pf.interior(ix, iy);
                let d = pv[headline] - rv[headline];
                frame_max = frame_max.max(d.abs());
                frame_sq += d * d;
                for c in 0..m {
                    frame_cons[c] += pv[c] - rv[c];
                }
            }
        }
        let frame_l2 = (frame_sq * dv).sqrt();
        l_inf_all = l_inf_all.max(frame_max);
        l2_frames.push(frame_l2);
        for c in 0..m {
            cons_total[c] += frame_cons[c];
        }
        if k + 1 == post_ref.len() {
            l_inf_final = frame_max;
            l2_final = frame_l2;
            cons_final = frame_cons;
        }
    }
    let row = MetricsRow {
        architecture: architecture.to_string(),
        l_inf_final: l_inf_final / linf_norm,
        l2_final: l2_final / l2_norm,
        l_inf_all: l_inf_all / linf_norm,
        l2_all: l2_frames.iter().sum::<f64>() / l2_frames.len() as f64 / l2_norm,
        conservation_final: cons_final,
        conservation_total: cons_total,
    };
    row.validate()?;
    Ok(row)
}

/// Raw (unnormalized) all-frame L-inf error of the headline component over
/// the post-cutoff frames, for comparison against certificate bounds on the
/// data's own affine scale.
pub fn raw_l_inf_all(
    reference: &FrameSeries,
    predicted: &FrameSeries,
    train_cutoff: usize,
    headline: usize,
) -> f64 {
    let post_ref = &reference.frames[train_cutoff..];
    let (nx, ny) = post_ref[0].interior_extent();
    let mut worst = 0.0f64;
    for (rf, pf) in post_ref.iter().zip(&predicted.frames) {
        for iy in 0..ny {
            for ix in 0..nx {
                let d = pf.interior(ix, iy)[headline] - rf.interior(ix, iy)[headline];
                worst = worst.max(d.abs());
            }
        }
    }
    worst
}
