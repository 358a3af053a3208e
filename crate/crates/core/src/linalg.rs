//! Small dense matrix helpers for the chart dimensions in play (m ≤ 8):
//! inversion, determinants, symmetric inertia, and pseudo-orthogonal
//! test rotations.

use crate::tensor::Signature;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Inverse and determinant by Gauss-Jordan with partial pivoting.
/// `None` when the matrix is numerically singular.
pub fn invert(a: &[f64], m: usize) -> Option<(Vec<f64>, f64)> {
    assert_eq!(a.len(), m * m);
    let mut w = a.to_vec();
    let mut inv = vec![0.0; m * m];
    for i in 0..m {
        inv[i * m + i] = 1.0;
    }
    let mut det = 1.0;
    for col in 0..m {
        let mut piv = col;
        let mut best = w[col * m + col].abs();
        for r in col + 1..m {
            let v = w[r * m + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best < 1e-300 {
            return None;
        }
        if piv != col {
            for c in 0..m {
                w.swap(col * m + c, piv * m + c);
                inv.swap(col * m + c, piv * m + c);
            }
            det = -det;
        }
        let p = w[col * m + col];
        det *= p;
        let pinv = 1.0 / p;
        for c in 0..m {
            w[col * m + c] *= pinv;
            inv[col * m + c] *= pinv;
        }
        for r in 0..m {
            if r == col {
                continue;
            }
            let f = w[r * m + col];
            if f == 0.0 {
                continue;
            }
            for c in 0..m {
                w[r * m + c] -= f * w[col * m + c];
                inv[r * m + c] -= f * inv[col * m + c];
            }
        }
    }
    Some((inv, det))
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps.
pub fn symmetric_eigenvalues(a: &[f64], m: usize) -> Vec<f64> {
    let mut w = a.to_vec();
    let scale = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1e-300);
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for i in 0..m {
            for j in i + 1..m {
                off = off.max(w[i * m + j].abs());
            }
        }
        if off < 1e-15 * scale {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = w[p * m + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = w[p * m + p];
                let aqq = w[q * m + q];
                let theta = 0.5 * (aqq - app) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = w[k * m + p];
                    let akq = w[k * m + q];
                    w[k * m + p] = c * akp - s * akq;
                    w[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = w[p * m + k];
                    let aqk = w[q * m + k];
                    w[p * m + k] = c * apk - s * aqk;
                    w[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..m).map(|i| w[i * m + i]).collect()
}

/// Signature counts (negative, positive) of a symmetric matrix; eigenvalues
/// below `tol` in magnitude count as degenerate and are reported separately.
pub fn inertia(a: &[f64], m: usize, tol: f64) -> (usize, usize, usize) {
    let ev = symmetric_eigenvalues(a, m);
    let mut neg = 0;
    let mut pos = 0;
    let mut zero = 0;
    for v in ev {
        if v < -tol {
            neg += 1;
        } else if v > tol {
            pos += 1;
        } else {
            zero += 1;
        }
    }
    (neg, pos, zero)
}

/// Matrix exponential by scaling and squaring with a truncated series.
pub fn matrix_exp(a: &[f64], m: usize) -> Vec<f64> {
    let norm: f64 = a.iter().map(|v| v.abs()).fold(0.0, f64::max) * m as f64;
    let k = norm.log2().ceil().max(0.0) as u32 + 1;
    let scale = 0.5f64.powi(k as i32);
    let scaled: Vec<f64> = a.iter().map(|v| v * scale).collect();
    let mut result = identity(m);
    let mut term = identity(m);
    for n in 1..=16 {
        term = mat_mul(&term, &scaled, m);
        for v in term.iter_mut() {
            *v /= n as f64;
        }
        for (r, t) in result.iter_mut().zip(term.iter()) {
            *r += t;
        }
    }
    for _ in 0..k {
        result = mat_mul(&result, &result, m);
    }
    result
}

pub fn identity(m: usize) -> Vec<f64> {
    let mut w = vec![0.0; m * m];
    for i in 0..m {
        w[i * m + i] = 1.0;
    }
    w
}

pub fn mat_mul(a: &[f64], b: &[f64], m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m * m];
    for i in 0..m {
        for k in 0..m {
            let aik = a[i * m + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..m {
                out[i * m + j] += aik * b[k * m + j];
            }
        }
    }
    out
}

/// Random element of the (pseudo-)orthogonal group of the signature:
/// `OᵀηO = η` with `η = diag(ξ)`, built as `exp(ηS)` for antisymmetric `S`.
pub fn pseudo_orthogonal(signs: &Signature, seed: u64) -> Vec<f64> {
    let m = signs.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gen = vec![0.0; m * m];
    for i in 0..m {
        for j in i + 1..m {
            let s: f64 = rng.gen_range(-0.6..0.6);
            gen[i * m + j] = s;
            gen[j * m + i] = -s;
        }
    }
    // a = η S lies in the Lie algebra of the group
    let mut a = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            a[i * m + j] = signs.xi0(i) * gen[i * m + j];
        }
    }
    matrix_exp(&a, m)
}
