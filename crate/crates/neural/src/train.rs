use crate::deepnet::{AnalyticMap, BeaconsNet, PlainNet};
use crate::loss::loss_and_grad_supervised;
use crate::mlp::{InputNorm, Mlp};
use crate::NeuralError;
use pde_core::Mat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Full-batch gradient-descent schedule. An epoch is `steps_per_epoch`
/// full-batch descent steps; training stops early once the max-norm
/// parameter update falls below `eps`, but never before `min_epochs`.
#[derive(Debug, Clone, Copy)]
pub struct TrainConfig {
    pub lr: f64,
    pub min_epochs: usize,
    pub max_epochs: usize,
    pub steps_per_epoch: usize,
    pub seed: u64,
    pub eps: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lr: 1e-4,
            min_epochs: 10,
            max_epochs: 50,
            steps_per_epoch: 200,
            seed: 0,
            eps: 1e-10,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), NeuralError> {
        if !(self.lr > 0.0) {
            return Err(NeuralError::BadConfig("learning rate must be > 0".into()));
        }
        if self.min_epochs > self.max_epochs || self.steps_per_epoch == 0 {
            return Err(NeuralError::BadConfig("bad epoch budget".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct TrainReport {
    /// Loss at the end of each completed epoch.
    pub epoch_losses: Vec<f64>,
    pub steps_taken: usize,
    pub converged: bool,
    /// Whether the per-epoch loss history was non-increasing (reported,
    /// not enforced).
    pub monotone: bool,
}

fn finish_report(epoch_losses: Vec<f64>, steps: usize, converged: bool) -> TrainReport {
    let monotone = epoch_losses.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    TrainReport {
        epoch_losses,
        steps_taken: steps,
        converged,
        monotone,
    }
}

/// Train a single block in place by full-batch descent against fixed
/// supervised targets.
pub fn train_mlp_supervised(
    net: &mut Mlp,
    inputs: &[f64],
    targets: &[f64],
    weight: Option<&Mat>,
    cfg: &TrainConfig,
) -> Result<TrainReport, NeuralError> {
    cfg.validate()?;
    if inputs.is_empty() {
        return Err(NeuralError::BadConfig("empty training data".into()));
    }
    let mut epoch_losses = Vec::with_capacity(cfg.max_epochs);
    let mut steps = 0usize;
    for epoch in 0..cfg.max_epochs {
        let mut last_loss = f64::NAN;
        let mut converged = false;
        for _ in 0..cfg.steps_per_epoch {
            let (loss, grad) = loss_and_grad_supervised(net, inputs, targets, weight)?;
            if !loss.is_finite() {
                return Err(NeuralError::Diverged(format!(
                    "non-finite loss at step {steps}"
                )));
            }
            last_loss = loss;
            let mut max_update = 0.0f64;
            apply_step(net, &grad, cfg.lr, &mut max_update);
            steps += 1;
            if epoch + 1 >= cfg.min_epochs && max_update < cfg.eps {
                converged = true;
                break;
            }
        }
        epoch_losses.push(last_loss);
        if converged {
            return Ok(finish_report(epoch_losses, steps, true));
        }
    }
    Ok(finish_report(epoch_losses, steps, false))
}

fn apply_step(net: &mut Mlp, grad: &[f64], lr: f64, max_update: &mut f64) {
    let mut idx = 0usize;
    for chunk in [
        net.w1.as_mut_slice(),
        net.b1.as_mut_slice(),
        net.w2.as_mut_slice(),
        net.b2.as_mut_slice(),
    ] {
        for v in chunk.iter_mut() {
            let upd = lr * grad[idx];
            *v -= upd;
            *max_update = max_update.max(upd.abs());
            idx += 1;
        }
    }
}

/// Mean squared error and per-block gradients for a stack trained
/// end-to-end (the plain baseline). Returns (loss, gradient per block).
fn stack_loss_and_grad(
    stack: &[Mlp],
    inputs: &[f64],
    targets: &[f64],
) -> Result<(f64, Vec<Vec<f64>>), NeuralError> {
    let d_in = stack[0].d_in;
    let d_out = stack.last().unwrap().d_out;
    let ns = inputs.len() / d_in;
    if ns == 0 || targets.len() != ns * d_out {
        return Err(NeuralError::DimMismatch("stack sample matrices".into()));
    }
    let mut grads: Vec<Vec<f64>> = stack.iter().map(|m| vec![0.0; m.param_count()]).collect();
    // Per-layer forward storage for one sample.
    let mut layer_in: Vec<Vec<f64>> = stack.iter().map(|m| vec![0.0; m.d_in]).collect();
    let mut hiddens: Vec<Vec<f64>> = stack.iter().map(|m| vec![0.0; m.n_hidden]).collect();
    let mut out = vec![0.0; d_out];
    let mut loss = 0.0;
    let scale = 2.0 / ns as f64;
    for s in 0..ns {
        let x = &inputs[s * d_in..(s + 1) * d_in];
        layer_in[0].copy_from_slice(x);
        for (li, mlp) in stack.iter().enumerate() {
            // Split to borrow this layer's input and the next layer's slot.
            let (head, tail) = layer_in.split_at_mut(li + 1);
            let input = &head[li];
            let output: &mut [f64] = if li + 1 < stack.len() {
                &mut tail[0]
            } else {
                &mut out
            };
            mlp.forward_into(input, &mut hiddens[li], output);
        }
        let t = &targets[s * d_out..(s + 1) * d_out];
        let mut delta: Vec<f64> = out
            .iter()
            .zip(t)
            .map(|(o, tv)| {
                loss += (o - tv) * (o - tv);
                scale * (o - tv)
            })
            .collect();
        // Backward through the stack.
        for li in (0..stack.len()).rev() {
            let mlp = &stack[li];
            let x_l = &layer_in[li];
            let h = &hiddens[li];
            let g = &mut grads[li];
            let (gw1, rest) = g.split_at_mut(mlp.w1.len());
            let (gb1, rest) = rest.split_at_mut(mlp.b1.len());
            let (gw2, gb2) = rest.split_at_mut(mlp.w2.len());
            let mut q = vec![0.0; mlp.n_hidden];
            for k in 0..mlp.d_out {
                let dk = delta[k];
                if dk != 0.0 {
                    gb2[k] += dk;
                    for i in 0..mlp.n_hidden {
                        gw2[k * mlp.n_hidden + i] += dk * h[i];
                    }
                }
                for i in 0..mlp.n_hidden {
                    q[i] += dk * mlp.w2[k * mlp.n_hidden + i];
                }
            }
            for (i, qi) in q.iter_mut().enumerate() {
                *qi *= 1.0 - h[i] * h[i];
            }
            for i in 0..mlp.n_hidden {
                if q[i] == 0.0 {
                    continue;
                }
                gb1[i] += q[i];
                for j in 0..mlp.d_in {
                    gw1[i * mlp.d_in + j] += q[i] * x_l[j];
                }
            }
            if li > 0 {
                let mut prev = vec![0.0; mlp.d_in];
                for i in 0..mlp.n_hidden {
                    if q[i] == 0.0 {
                        continue;
                    }
                    for j in 0..mlp.d_in {
                        prev[j] += q[i] * mlp.w1[i * mlp.d_in + j];
                    }
                }
                delta = prev;
            }
        }
    }
    Ok((loss / ns as f64, grads))
}

fn train_stack(
    stack: &mut [Mlp],
    inputs: &[f64],
    targets: &[f64],
    cfg: &TrainConfig,
) -> Result<TrainReport, NeuralError> {
    cfg.validate()?;
    let mut epoch_losses = Vec::with_capacity(cfg.max_epochs);
    let mut steps = 0usize;
    for epoch in 0..cfg.max_epochs {
        let mut last_loss = f64::NAN;
        let mut converged = false;
        for _ in 0..cfg.steps_per_epoch {
            let (loss, grads) = stack_loss_and_grad(stack, inputs, targets)?;
            if !loss.is_finite() {
                return Err(NeuralError::Diverged(format!(
                    "non-finite loss at step {steps}"
                )));
            }
            last_loss = loss;
            let mut max_update = 0.0f64;
            for (mlp, g) in stack.iter_mut().zip(&grads) {
                apply_step(mlp, g, cfg.lr, &mut max_update);
            }
            steps += 1;
            if epoch + 1 >= cfg.min_epochs && max_update < cfg.eps {
                converged = true;
                break;
            }
        }
        epoch_losses.push(last_loss);
        if converged {
            return Ok(finish_report(epoch_losses, steps, true));
        }
    }
    Ok(finish_report(epoch_losses, steps, false))
}

/// Build and train the plain deep baseline end-to-end on raw targets.
/// `layers` counts affine layers; each stacked block holds two, so it must
/// be even and at least 2.
pub fn train_plain(
    layers: usize,
    width: usize,
    points_raw: &[Vec<f64>],
    targets: &[f64],
    cfg: &TrainConfig,
) -> Result<(PlainNet, TrainReport), NeuralError> {
    if layers < 2 || layers % 2 != 0 {
        return Err(NeuralError::BadConfig(
            "plain nets need an even layer count >= 2".into(),
        ));
    }
    let d = points_raw[0].len();
    let m = targets.len() / points_raw.len();
    let norm = InputNorm::from_samples(points_raw);
    let inputs: Vec<f64> = points_raw.iter().flat_map(|p| norm.apply(p)).collect();
    let blocks = layers / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut stack = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let d_in = if b == 0 { d } else { width };
        let d_out = if b == blocks - 1 { m } else { width };
        stack.push(Mlp::seeded(d_in, width, d_out, &mut rng));
    }
    let report = train_stack(&mut stack, &inputs, targets, cfg)?;
    Ok((PlainNet { stack, norm }, report))
}

/// Architecture-side description of a compositional chain to train.
#[derive(Debug, Clone)]
pub struct BeaconsSpec {
    pub width: usize,
    pub correctors: usize,
    pub suppression: AnalyticMap,
    /// One affine per component mapping the normalized [0, 1] scale back to
    /// raw units (scale = data range, offset = data min).
    pub unnormalize: Vec<AnalyticMap>,
}

/// Layer-by-layer compositional training: the head learns the
/// discontinuity-carrying constituent (targets built through the exact
/// inverses of every downstream analytic map), and each corrector learns the
/// identity on the normalized scale with its own loss. Deterministic given
/// the seed.
pub fn train_beacons(
    spec: &BeaconsSpec,
    points_raw: &[Vec<f64>],
    targets_raw: &[f64],
    cfg: &TrainConfig,
) -> Result<(BeaconsNet, Vec<TrainReport>), NeuralError> {
    let d = points_raw[0].len();
    let ns = points_raw.len();
    let m = spec.unnormalize.len();
    if targets_raw.len() != ns * m {
        return Err(NeuralError::DimMismatch("target count".into()));
    }
    let norm = InputNorm::from_samples(points_raw);
    let inputs: Vec<f64> = points_raw.iter().flat_map(|p| norm.apply(p)).collect();

    // Normalized-scale targets through the affine inverses.
    let mut u01 = vec![0.0; ns * m];
    for s in 0..ns {
        for k in 0..m {
            u01[s * m + k] = spec.unnormalize[k].inverse(targets_raw[s * m + k])?;
        }
    }
    // Head targets through the suppression inverse (identity correctors
    // invert to themselves).
    let mut head_targets = vec![0.0; ns * m];
    for (ht, u) in head_targets.iter_mut().zip(&u01) {
        *ht = spec.suppression.inverse(*u)?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut head = Mlp::seeded(d, spec.width, m, &mut rng);
    let mut correctors: Vec<Mlp> = (0..spec.correctors)
        .map(|_| Mlp::seeded(m, spec.width, m, &mut rng))
        .collect();

    let mut reports = Vec::new();
    reports.push(train_mlp_supervised(
        &mut head,
        &inputs,
        &head_targets,
        None,
        cfg,
    )?);
    let mut stage_errors = vec![max_abs_error(&head, &inputs, &head_targets)];
    for c in correctors.iter_mut() {
        reports.push(train_mlp_supervised(c, &u01, &u01, None, cfg)?);
        stage_errors.push(max_abs_error(c, &u01, &u01));
    }

    Ok((
        BeaconsNet {
            head,
            suppression: spec.suppression.clone(),
            correctors,
            unnormalize: spec.unnormalize.clone(),
            norm,
            stage_errors,
        },
        reports,
    ))
}

fn max_abs_error(net: &Mlp, inputs: &[f64], targets: &[f64]) -> f64 {
    let mut hidden = vec![0.0; net.n_hidden];
    let mut out = vec![0.0; net.d_out];
    let mut worst = 0.0f64;
    for (x, t) in inputs
        .chunks_exact(net.d_in)
        .zip(targets.chunks_exact(net.d_out))
    {
        net.forward_into(x, &mut hidden, &mut out);
        for (o, tv) in out.iter().zip(t) {
            worst = worst.max((o - tv).abs());
        }
    }
    worst
}

/// Affine un-normalization stages from per-component data ranges: maps
/// [0, 1] onto [min, max]. Degenerate components get a unit scale so the
/// inverse stays defined.
pub fn unnormalize_from_targets(targets_raw: &[f64], m: usize) -> Vec<AnalyticMap> {
    let mut lo = vec![f64::INFINITY; m];
    let mut hi = vec![f64::NEG_INFINITY; m];
    for row in targets_raw.chunks_exact(m) {
        for k in 0..m {
            lo[k] = lo[k].min(row[k]);
            hi[k] = hi[k].max(row[k]);
        }
    }
    (0..m)
        .map(|k| {
            let span = hi[k] - lo[k];
            AnalyticMap::Affine {
                scale: if span > 0.0 { span } else { 1.0 },
                offset: lo[k],
            }
        })
        .collect()
}
