//! Truncated Taylor-series arithmetic (forward AD to a fixed order).
//!
//! Coefficient k stores f^(k)(x0) / k!. Order is fixed at compile time to
//! one past the smoothness cap, which is all the classifier ever needs.

pub const ORDER: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Taylor {
    pub c: [f64; ORDER],
}

impl Taylor {
    pub fn constant(v: f64) -> Taylor {
        let mut c = [0.0; ORDER];
        c[0] = v;
        Taylor { c }
    }

    /// The identity function expanded at x0.
    pub fn variable(x0: f64) -> Taylor {
        let mut c = [0.0; ORDER];
        c[0] = x0;
        c[1] = 1.0;
        Taylor { c }
    }

    pub fn add(&self, o: &Taylor) -> Taylor {
        let mut c = [0.0; ORDER];
        for k in 0..ORDER {
            c[k] = self.c[k] + o.c[k];
        }
        Taylor { c }
    }

    pub fn scale(&self, s: f64) -> Taylor {
        let mut c = [0.0; ORDER];
        for k in 0..ORDER {
            c[k] = self.c[k] * s;
        }
        Taylor { c }
    }

    pub fn shift(&self, s: f64) -> Taylor {
        let mut out = *self;
        out.c[0] += s;
        out
    }

    pub fn mul(&self, o: &Taylor) -> Taylor {
        let mut c = [0.0; ORDER];
        for i in 0..ORDER {
            if self.c[i] == 0.0 {
                continue;
            }
            for j in 0..ORDER - i {
                c[i + j] += self.c[i] * o.c[j];
            }
        }
        Taylor { c }
    }

    pub fn exp(&self) -> Taylor {
        let mut g = [0.0; ORDER];
        g[0] = self.c[0].exp();
        for k in 1..ORDER {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.c[j] * g[k - j];
            }
            g[k] = acc / k as f64;
        }
        Taylor { c: g }
    }

    pub fn sin(&self) -> Taylor {
        self.sin_cos().0
    }

    pub fn sin_cos(&self) -> (Taylor, Taylor) {
        let mut s = [0.0; ORDER];
        let mut co = [0.0; ORDER];
        s[0] = self.c[0].sin();
        co[0] = self.c[0].cos();
        for k in 1..ORDER {
            let mut sa = 0.0;
            let mut ca = 0.0;
            for j in 1..=k {
                sa += j as f64 * self.c[j] * co[k - j];
                ca += j as f64 * self.c[j] * s[k - j];
            }
            s[k] = sa / k as f64;
            co[k] = -ca / k as f64;
        }
        (Taylor { c: s }, Taylor { c: co })
    }

    /// k-th derivative value, k < ORDER.
    pub fn derivative(&self, k: usize) -> f64 {
        let mut fact = 1.0;
        for i in 2..=k {
            fact *= i as f64;
        }
        self.c[k] * fact
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_derivatives() {
        let x = Taylor::variable(0.3).scale(2.0).shift(0.1);
        let s = x.sin();
        // d/dx sin(2x + 0.1) = 2 cos(2x + 0.1), etc.
        let arg: f64 = 0.7;
        assert!((s.derivative(0) - arg.sin()).abs() < 1e-14);
        assert!((s.derivative(1) - 2.0 * arg.cos()).abs() < 1e-14);
        assert!((s.derivative(2) + 4.0 * arg.sin()).abs() < 1e-13);
        assert!((s.derivative(3) + 8.0 * arg.cos()).abs() < 1e-13);
    }

    #[test]
    fn gaussian_derivatives() {
        // g(x) = exp(-x^2) at x = 0.5: g' = -2x g, g'' = (4x^2 - 2) g.
        let x = Taylor::variable(0.5);
        let g = x.mul(&x).scale(-1.0).exp();
        let v = (-0.25f64).exp();
        assert!((g.derivative(0) - v).abs() < 1e-14);
        assert!((g.derivative(1) + 1.0 * v).abs() < 1e-14);
        assert!((g.derivative(2) - (4.0 * 0.25 - 2.0) * v).abs() < 1e-13);
    }
}
