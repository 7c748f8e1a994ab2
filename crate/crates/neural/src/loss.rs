use crate::mlp::Mlp;
use crate::NeuralError;
use pde_core::{Direction, Mat, PdeSystem};

/// Check symmetry and positive semi-definiteness by LDL^T elimination with
/// a small pivot tolerance.
pub fn check_psd(w: &Mat) -> Result<(), NeuralError> {
    let n = w.dim();
    for i in 0..n {
        for j in 0..i {
            if (w[(i, j)] - w[(j, i)]).abs() > 1e-12 * (1.0 + w[(i, j)].abs()) {
                return Err(NeuralError::BadWeightMatrix("not symmetric".into()));
            }
        }
    }
    let mut a = w.clone();
    for k in 0..n {
        let pivot = a[(k, k)];
        if pivot < -1e-12 {
            return Err(NeuralError::BadWeightMatrix(format!(
                "negative pivot {pivot} at {k}"
            )));
        }
        if pivot.abs() <= 1e-14 {
            continue;
        }
        for i in k + 1..n {
            let f = a[(i, k)] / pivot;
            for j in k..n {
                let akj = a[(k, j)];
                a[(i, j)] -= f * akj;
            }
        }
    }
    Ok(())
}

fn weighted(w: Option<&Mat>, r: &[f64], out: &mut [f64]) {
    match w {
        None => out.copy_from_slice(r),
        Some(w) => w.mul_vec_into(r, out),
    }
}

fn quad_form(w: Option<&Mat>, r: &[f64]) -> f64 {
    match w {
        None => r.iter().map(|v| v * v).sum(),
        Some(w) => {
            let mut acc = 0.0;
            for (a, row) in r.iter().zip(0..w.dim()) {
                let mut wr = 0.0;
                for (b, j) in r.iter().zip(0..w.dim()) {
                    wr += w[(row, j)] * b;
                }
                acc += a * wr;
            }
            acc
        }
    }
}

/// Scratch holding per-sample forward state and the gradient accumulator.
struct GradScratch {
    hidden: Vec<f64>,
    out: Vec<f64>,
    grad: Vec<f64>,
}

impl GradScratch {
    fn new(net: &Mlp) -> GradScratch {
        GradScratch {
            hidden: vec![0.0; net.n_hidden],
            out: vec![0.0; net.d_out],
            grad: vec![0.0; net.param_count()],
        }
    }

    fn grad_slices<'a>(
        grad: &'a mut [f64],
        net: &Mlp,
    ) -> (&'a mut [f64], &'a mut [f64], &'a mut [f64], &'a mut [f64]) {
        let (gw1, rest) = grad.split_at_mut(net.w1.len());
        let (gb1, rest) = rest.split_at_mut(net.b1.len());
        let (gw2, gb2) = rest.split_at_mut(net.w2.len());
        (gw1, gb1, gw2, gb2)
    }

    /// Accumulate coef . d(out)/d(theta): coef is a weight per output
    /// component.
    fn add_value_grad(&mut self, net: &Mlp, x: &[f64], coef: &[f64]) {
        let (gw1, gb1, gw2, gb2) = Self::grad_slices(&mut self.grad, net);
        for k in 0..net.d_out {
            let c = coef[k];
            if c == 0.0 {
                continue;
            }
            gb2[k] += c;
            for i in 0..net.n_hidden {
                gw2[k * net.n_hidden + i] += c * self.hidden[i];
            }
        }
        for i in 0..net.n_hidden {
            let mut q = 0.0;
            for k in 0..net.d_out {
                q += coef[k] * net.w2[k * net.n_hidden + i];
            }
            let sp = 1.0 - self.hidden[i] * self.hidden[i];
            q *= sp;
            if q == 0.0 {
                continue;
            }
            gb1[i] += q;
            for j in 0..net.d_in {
                gw1[i * net.d_in + j] += q * x[j];
            }
        }
    }

    /// Accumulate sum over axes of coef[k][axis] . d(d out_k / d x_axis)/d(theta).
    fn add_mixed_grad(&mut self, net: &Mlp, x: &[f64], coef: &[Vec<f64>]) {
        let (gw1, gb1, gw2, _gb2) = Self::grad_slices(&mut self.grad, net);
        for i in 0..net.n_hidden {
            let h = self.hidden[i];
            let sp = 1.0 - h * h;
            let spp = -2.0 * h * sp; // tanh''
            // s_axis = sum_k coef[k][axis] w2[k,i]
            let mut s = vec![0.0; net.d_in];
            for k in 0..net.d_out {
                let w = net.w2[k * net.n_hidden + i];
                for (axis, sa) in s.iter_mut().enumerate() {
                    *sa += coef[k][axis] * w;
                }
            }
            // d(out_k,axis)/d w2[k,i] = sp * w1[i,axis]
            for k in 0..net.d_out {
                let mut acc = 0.0;
                for axis in 0..net.d_in {
                    acc += coef[k][axis] * net.w1[i * net.d_in + axis];
                }
                gw2[k * net.n_hidden + i] += sp * acc;
            }
            // d/d b1_i = w2[k,i] spp w1[i,axis]
            let mut sw = 0.0;
            for axis in 0..net.d_in {
                sw += s[axis] * net.w1[i * net.d_in + axis];
            }
            gb1[i] += spp * sw;
            // d/d w1[i,j] = w2[k,i] (spp x_j w1[i,axis] + sp delta_{j,axis})
            for j in 0..net.d_in {
                gw1[i * net.d_in + j] += spp * x[j] * sw + sp * s[j];
            }
        }
    }
}

/// Mean weighted squared data residual and its exact parameter gradient.
///
/// `inputs` and `targets` are flat row-major sample matrices. The optional
/// weight matrix must be symmetric positive semi-definite (identity when
/// absent).
pub fn loss_and_grad_supervised(
    net: &Mlp,
    inputs: &[f64],
    targets: &[f64],
    weight: Option<&Mat>,
) -> Result<(f64, Vec<f64>), NeuralError> {
    let d_in = net.d_in;
    let d_out = net.d_out;
    if inputs.len() % d_in != 0 || targets.len() % d_out != 0 {
        return Err(NeuralError::DimMismatch("ragged sample matrices".into()));
    }
    let ns = inputs.len() / d_in;
    if ns == 0 || targets.len() / d_out != ns {
        return Err(NeuralError::DimMismatch(format!(
            "{} inputs vs {} targets",
            ns,
            targets.len() / d_out
        )));
    }
    if let Some(w) = weight {
        if w.dim() != d_out {
            return Err(NeuralError::DimMismatch("weight matrix size".into()));
        }
        check_psd(w)?;
    }
    let mut scratch = GradScratch::new(net);
    let mut loss = 0.0;
    let mut r = vec![0.0; d_out];
    let mut wr = vec![0.0; d_out];
    let scale = 2.0 / ns as f64;
    for s in 0..ns {
        let x = &inputs[s * d_in..(s + 1) * d_in];
        let t = &targets[s * d_out..(s + 1) * d_out];
        let (hidden, out) = (&mut scratch.hidden, &mut scratch.out);
        net.forward_into(x, hidden, out);
        for k in 0..d_out {
            r[k] = out[k] - t[k];
        }
        loss += quad_form(weight, &r);
        weighted(weight, &r, &mut wr);
        for v in &mut wr {
            *v *= scale;
        }
        scratch.add_value_grad(net, x, &wr);
    }
    Ok((loss / ns as f64, scratch.grad))
}

/// Weights for the two residual families in the combined loss.
#[derive(Debug, Clone, Copy)]
pub struct ResidualWeights {
    pub lambda_pde: f64,
    pub lambda_bc: f64,
}

/// PDE-residual loss of the conservation-form operator
/// L[U] = dU/dt + dF(U)/dx (+ dG(U)/dy in 2D) at interior points, plus a
/// Dirichlet boundary residual U - target at boundary points, combined as
/// lambda_PDE J_PDE + lambda_BC J_BC. Gradients are exact: the flux terms are
/// chain-ruled through the flux Jacobian and Hessians at the network output.
///
/// The network inputs are taken as physical (t, x[, y]) directly.
pub fn loss_and_grad_residual(
    net: &Mlp,
    sys: &PdeSystem,
    interior: &[f64],
    boundary_points: &[f64],
    boundary_targets: &[f64],
    weights: ResidualWeights,
    weight_matrix: Option<&Mat>,
) -> Result<(f64, Vec<f64>), NeuralError> {
    let m = sys.m();
    let d_in = net.d_in;
    if net.d_out != m {
        return Err(NeuralError::DimMismatch(format!(
            "net outputs {} but system has m = {m}",
            net.d_out
        )));
    }
    if d_in != 1 + sys.dim() {
        return Err(NeuralError::DimMismatch(format!(
            "net inputs {} but space-time dimension is {}",
            d_in,
            1 + sys.dim()
        )));
    }
    if let Some(w) = weight_matrix {
        if w.dim() != m {
            return Err(NeuralError::DimMismatch("weight matrix size".into()));
        }
        check_psd(w)?;
    }
    let n_int = interior.len() / d_in;
    let n_bc = boundary_points.len() / d_in;
    if boundary_targets.len() != n_bc * m {
        return Err(NeuralError::DimMismatch("boundary target count".into()));
    }

    let mut scratch = GradScratch::new(net);
    let mut j_pde = 0.0;
    let mut j_bc = 0.0;
    let mut r = vec![0.0; m];
    let mut wr = vec![0.0; m];

    let dirs: Vec<Direction> = if sys.dim() == 2 {
        vec![Direction::X, Direction::Y]
    } else {
        vec![Direction::X]
    };

    for s in 0..n_int {
        let x = &interior[s * d_in..(s + 1) * d_in];
        let (hidden, out) = (&mut scratch.hidden, &mut scratch.out);
        net.forward_into(x, hidden, out);
        let u = out.clone();
        let jac = net.input_jacobian(x); // m x d_in; axis 0 is t
        let jacobians: Vec<Mat> = dirs.iter().map(|d| sys.jacobian(&u, *d)).collect();
        let hessians: Vec<Vec<Mat>> = dirs.iter().map(|d| sys.flux_hessians(&u, *d)).collect();

        // r_alpha = dU_alpha/dt + sum_dir sum_beta A_alpha,beta dU_beta/dx_dir
        for alpha in 0..m {
            let mut acc = jac[alpha * d_in];
            for (di, a) in jacobians.iter().enumerate() {
                for beta in 0..m {
                    acc += a[(alpha, beta)] * jac[beta * d_in + 1 + di];
                }
            }
            r[alpha] = acc;
        }
        j_pde += quad_form(weight_matrix, &r);
        weighted(weight_matrix, &r, &mut wr);
        let scale = 2.0 * weights.lambda_pde / n_int as f64;
        for v in &mut wr {
            *v *= scale;
        }

        // Value-derivative weights: v_gamma = sum_alpha wr_alpha
        //   sum_dir sum_beta H_dir,alpha[beta,gamma] dU_beta/dx_dir.
        let mut vcoef = vec![0.0; m];
        for gamma in 0..m {
            let mut acc = 0.0;
            for alpha in 0..m {
                if wr[alpha] == 0.0 {
                    continue;
                }
                let mut inner = 0.0;
                for (di, hs) in hessians.iter().enumerate() {
                    let h = &hs[alpha];
                    for beta in 0..m {
                        inner += h[(beta, gamma)] * jac[beta * d_in + 1 + di];
                    }
                }
                acc += wr[alpha] * inner;
            }
            vcoef[gamma] = acc;
        }
        scratch.add_value_grad(net, x, &vcoef);

        // Mixed-derivative weights: coef[beta][axis]. Axis 0 (t): wr_beta.
        // Axis 1+di: sum_alpha wr_alpha A_dir[alpha,beta].
        let mut mcoef = vec![vec![0.0; d_in]; m];
        for beta in 0..m {
            mcoef[beta][0] = wr[beta];
            for (di, a) in jacobians.iter().enumerate() {
                let mut acc = 0.0;
                for alpha in 0..m {
                    acc += wr[alpha] * a[(alpha, beta)];
                }
                mcoef[beta][1 + di] = acc;
            }
        }
        scratch.add_mixed_grad(net, x, &mcoef);
    }
    if n_int > 0 {
        j_pde /= n_int as f64;
    }

    for s in 0..n_bc {
        let x = &boundary_points[s * d_in..(s + 1) * d_in];
        let t = &boundary_targets[s * m..(s + 1) * m];
        let (hidden, out) = (&mut scratch.hidden, &mut scratch.out);
        net.forward_into(x, hidden, out);
        for k in 0..m {
            r[k] = out[k] - t[k];
        }
        j_bc += quad_form(weight_matrix, &r);
        weighted(weight_matrix, &r, &mut wr);
        let scale = 2.0 * weights.lambda_bc / n_bc as f64;
        for v in &mut wr {
            *v *= scale;
        }
        scratch.add_value_grad(net, x, &wr);
    }
    if n_bc > 0 {
        j_bc /= n_bc as f64;
    }

    Ok((
        weights.lambda_pde * j_pde + weights.lambda_bc * j_bc,
        scratch.grad,
    ))
}
