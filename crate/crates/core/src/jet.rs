//! Second-order forward-mode automatic differentiation.
//!
//! A [`Jet`] carries a value together with its gradient and Hessian with
//! respect to up to [`MAX_VARS`] independent variables. Arithmetic on jets
//! propagates first and second derivatives exactly through the chain rule,
//! so curvature computations never need spatial finite differences.

/// Maximum number of independent variables a jet can track.
pub const MAX_VARS: usize = 8;

const HESS_LEN: usize = MAX_VARS * (MAX_VARS + 1) / 2;

#[inline]
fn tri(i: usize, j: usize) -> usize {
    // packed lower triangle, i >= j
    let (i, j) = if i >= j { (i, j) } else { (j, i) };
    i * (i + 1) / 2 + j
}

/// Value, gradient and Hessian of a scalar quantity in `n` variables.
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    n: usize,
    v: f64,
    g: [f64; MAX_VARS],
    h: [f64; HESS_LEN],
}

impl Jet {
    pub fn constant(v: f64, n: usize) -> Self {
        assert!(n <= MAX_VARS, "jet supports at most {MAX_VARS} variables");
        Jet {
            n,
            v,
            g: [0.0; MAX_VARS],
            h: [0.0; HESS_LEN],
        }
    }

    /// Seed for the `i`-th independent variable (0-based).
    pub fn variable(v: f64, i: usize, n: usize) -> Self {
        let mut j = Jet::constant(v, n);
        j.g[i] = 1.0;
        j
    }

    pub fn value(&self) -> f64 {
        self.v
    }

    /// First derivative with respect to variable `i`.
    pub fn d(&self, i: usize) -> f64 {
        self.g[i]
    }

    /// Second derivative with respect to variables `i`, `j`.
    pub fn dd(&self, i: usize, j: usize) -> f64 {
        self.h[tri(i, j)]
    }

    pub fn add(&self, o: &Jet) -> Jet {
        let mut r = *self;
        r.v += o.v;
        for i in 0..self.n {
            r.g[i] += o.g[i];
        }
        for i in 0..self.n {
            for j in 0..=i {
                r.h[tri(i, j)] += o.h[tri(i, j)];
            }
        }
        r
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        let mut r = *self;
        r.v -= o.v;
        for i in 0..self.n {
            r.g[i] -= o.g[i];
        }
        for i in 0..self.n {
            for j in 0..=i {
                r.h[tri(i, j)] -= o.h[tri(i, j)];
            }
        }
        r
    }

    pub fn neg(&self) -> Jet {
        let mut r = *self;
        r.v = -r.v;
        for i in 0..self.n {
            r.g[i] = -r.g[i];
        }
        for i in 0..self.n {
            for j in 0..=i {
                let t = tri(i, j);
                r.h[t] = -r.h[t];
            }
        }
        r
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let mut r = Jet::constant(self.v * o.v, self.n);
        for i in 0..self.n {
            r.g[i] = self.g[i] * o.v + self.v * o.g[i];
        }
        for i in 0..self.n {
            for j in 0..=i {
                let t = tri(i, j);
                r.h[t] =
                    self.h[t] * o.v + self.v * o.h[t] + self.g[i] * o.g[j] + self.g[j] * o.g[i];
            }
        }
        r
    }

    /// Quotient; `None` when the divisor value is zero.
    pub fn div(&self, o: &Jet) -> Option<Jet> {
        if o.v == 0.0 {
            return None;
        }
        // self * o^{-1} with the reciprocal chain rule folded in.
        let inv = 1.0 / o.v;
        let recip = o.chain(inv, -inv * inv, 2.0 * inv * inv * inv);
        Some(self.mul(&recip))
    }

    /// Chain rule for a scalar map `f` with `f(v)`, `f'(v)`, `f''(v)` supplied.
    fn chain(&self, f: f64, f1: f64, f2: f64) -> Jet {
        let mut r = Jet::constant(f, self.n);
        for i in 0..self.n {
            r.g[i] = f1 * self.g[i];
        }
        for i in 0..self.n {
            for j in 0..=i {
                let t = tri(i, j);
                r.h[t] = f1 * self.h[t] + f2 * self.g[i] * self.g[j];
            }
        }
        r
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn sinh(&self) -> Jet {
        self.chain(self.v.sinh(), self.v.cosh(), self.v.sinh())
    }

    pub fn cosh(&self) -> Jet {
        self.chain(self.v.cosh(), self.v.sinh(), self.v.cosh())
    }

    pub fn exp(&self) -> Jet {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    /// Square root; `None` when the value is not strictly positive
    /// (the derivatives blow up at zero).
    pub fn sqrt(&self) -> Option<Jet> {
        if self.v <= 0.0 {
            return None;
        }
        let s = self.v.sqrt();
        Some(self.chain(s, 0.5 / s, -0.25 / (s * self.v)))
    }

    /// Integer power by repeated squaring; `None` for `0^k` with `k < 0`.
    pub fn powi(&self, k: i32) -> Option<Jet> {
        if k == 0 {
            return Some(Jet::constant(1.0, self.n));
        }
        if k < 0 {
            if self.v == 0.0 {
                return None;
            }
            let p = self.powi(-k).unwrap();
            return Jet::constant(1.0, self.n).div(&p);
        }
        let mut acc = Jet::constant(1.0, self.n);
        let mut base = *self;
        let mut e = k as u32;
        loop {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        Some(acc)
    }
}
