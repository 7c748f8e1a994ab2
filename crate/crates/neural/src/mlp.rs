use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Single-hidden-layer perceptron with tanh activation and a linear output
/// layer. Parameter count is d_out + (d_in + d_out + 1) * n_hidden, the
/// single-hidden-layer count with a vector output.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    pub d_in: usize,
    pub n_hidden: usize,
    pub d_out: usize,
    /// n_hidden x d_in, row-major.
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    /// d_out x n_hidden, row-major.
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

impl Mlp {
    pub fn zeros(d_in: usize, n_hidden: usize, d_out: usize) -> Mlp {
        Mlp {
            d_in,
            n_hidden,
            d_out,
            w1: vec![0.0; n_hidden * d_in],
            b1: vec![0.0; n_hidden],
            w2: vec![0.0; d_out * n_hidden],
            b2: vec![0.0; d_out],
        }
    }

    /// Symmetric uniform initialization in [-1/sqrt(fan_in), +1/sqrt(fan_in)],
    /// drawn from the caller's counter-based generator so runs are
    /// reproducible from the seed alone.
    pub fn seeded(d_in: usize, n_hidden: usize, d_out: usize, rng: &mut ChaCha8Rng) -> Mlp {
        let mut net = Mlp::zeros(d_in, n_hidden, d_out);
        let s1 = 1.0 / (d_in as f64).sqrt();
        for w in &mut net.w1 {
            *w = rng.gen_range(-s1..=s1);
        }
        for b in &mut net.b1 {
            *b = rng.gen_range(-s1..=s1);
        }
        let s2 = 1.0 / (n_hidden as f64).sqrt();
        for w in &mut net.w2 {
            *w = rng.gen_range(-s2..=s2);
        }
        for b in &mut net.b2 {
            *b = rng.gen_range(-s2..=s2);
        }
        net
    }

    pub fn param_count(&self) -> usize {
        self.d_out + (self.d_in + self.d_out + 1) * self.n_hidden
    }

    /// Forward pass writing hidden activations and outputs into buffers.
    pub fn forward_into(&self, x: &[f64], hidden: &mut [f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.d_in);
        for i in 0..self.n_hidden {
            let mut z = self.b1[i];
            let row = &self.w1[i * self.d_in..(i + 1) * self.d_in];
            for (w, xv) in row.iter().zip(x) {
                z += w * xv;
            }
            hidden[i] = z.tanh();
        }
        for k in 0..self.d_out {
            let mut acc = self.b2[k];
            let row = &self.w2[k * self.n_hidden..(k + 1) * self.n_hidden];
            for (w, h) in row.iter().zip(hidden.iter()) {
                acc += w * h;
            }
            out[k] = acc;
        }
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let mut hidden = vec![0.0; self.n_hidden];
        let mut out = vec![0.0; self.d_out];
        self.forward_into(x, &mut hidden, &mut out);
        out
    }

    /// Jacobian of outputs with respect to inputs, d_out x d_in row-major:
    /// d out_k / d x_j = sum_i w2[k,i] sech^2(z_i) w1[i,j].
    pub fn input_jacobian(&self, x: &[f64]) -> Vec<f64> {
        let mut hidden = vec![0.0; self.n_hidden];
        let mut out = vec![0.0; self.d_out];
        self.forward_into(x, &mut hidden, &mut out);
        let mut jac = vec![0.0; self.d_out * self.d_in];
        for i in 0..self.n_hidden {
            let sp = 1.0 - hidden[i] * hidden[i];
            for k in 0..self.d_out {
                let wk = self.w2[k * self.n_hidden + i] * sp;
                if wk == 0.0 {
                    continue;
                }
                for j in 0..self.d_in {
                    jac[k * self.d_in + j] += wk * self.w1[i * self.d_in + j];
                }
            }
        }
        jac
    }

    /// Canonical flat parameter order: w1 row-major, b1, w2 row-major, b2.
    pub fn params_flat(&self) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.param_count());
        p.extend_from_slice(&self.w1);
        p.extend_from_slice(&self.b1);
        p.extend_from_slice(&self.w2);
        p.extend_from_slice(&self.b2);
        p
    }

    pub fn set_params_flat(&mut self, p: &[f64]) {
        assert_eq!(p.len(), self.param_count());
        let (a, rest) = p.split_at(self.w1.len());
        let (b, rest) = rest.split_at(self.b1.len());
        let (c, d) = rest.split_at(self.w2.len());
        self.w1.copy_from_slice(a);
        self.b1.copy_from_slice(b);
        self.w2.copy_from_slice(c);
        self.b2.copy_from_slice(d);
    }

    /// Hard bound on each output: |b2_k| + sum_i |w2[k,i]|, since |tanh| <= 1.
    pub fn output_bound(&self) -> Vec<f64> {
        (0..self.d_out)
            .map(|k| {
                self.b2[k].abs()
                    + self.w2[k * self.n_hidden..(k + 1) * self.n_hidden]
                        .iter()
                        .map(|w| w.abs())
                        .sum::<f64>()
            })
            .collect()
    }
}

/// Per-axis affine map of raw inputs onto [-1, 1]; recorded on the trained
/// network so inference takes raw coordinates. Degenerate axes (hi == lo)
/// map to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct InputNorm {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl InputNorm {
    pub fn identity(d: usize) -> InputNorm {
        InputNorm {
            lo: vec![-1.0; d],
            hi: vec![1.0; d],
        }
    }

    pub fn from_samples(points: &[Vec<f64>]) -> InputNorm {
        let d = points[0].len();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for p in points {
            for j in 0..d {
                lo[j] = lo[j].min(p[j]);
                hi[j] = hi[j].max(p[j]);
            }
        }
        InputNorm { lo, hi }
    }

    pub fn apply_into(&self, raw: &[f64], out: &mut [f64]) {
        for j in 0..raw.len() {
            let span = self.hi[j] - self.lo[j];
            out[j] = if span == 0.0 {
                0.0
            } else {
                2.0 * (raw[j] - self.lo[j]) / span - 1.0
            };
        }
    }

    pub fn apply(&self, raw: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; raw.len()];
        self.apply_into(raw, &mut out);
        out
    }
}
