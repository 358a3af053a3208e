//! Signature-aware tensor components: the generalized Kronecker delta,
//! algebraic curvature tensors with their symmetries enforced at
//! construction, and the symmetric 2-tensor containers used throughout.
//!
//! All public index arguments are 1-based, matching the usual tensor-index
//! conventions; storage is dense and 0-based internally.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TensorError {
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("index lists must have equal length (got {upper} and {lower})")]
    LengthMismatch { upper: usize, lower: usize },
    #[error("{0}")]
    Domain(String),
}

/// Frame signature: the diagonal inner products `ξ_i = g(e_i, e_i) = ±1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    signs: Vec<i8>,
}

impl Signature {
    pub fn riemannian(dim: usize) -> Self {
        assert!(dim >= 1, "signature needs at least one direction");
        Signature {
            signs: vec![1; dim],
        }
    }

    pub fn from_signs(signs: Vec<i8>) -> Result<Self, TensorError> {
        if signs.is_empty() {
            return Err(TensorError::Domain("signature must be non-empty".into()));
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(TensorError::Domain(
                "signature entries must be +1 or -1".into(),
            ));
        }
        Ok(Signature { signs })
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    /// Number of timelike (−1) directions.
    pub fn p(&self) -> usize {
        self.signs.iter().filter(|s| **s < 0).count()
    }

    /// Number of spacelike (+1) directions.
    pub fn q(&self) -> usize {
        self.signs.iter().filter(|s| **s > 0).count()
    }

    /// ξ_i for a 1-based index.
    pub fn xi(&self, i: usize) -> f64 {
        self.signs[i - 1] as f64
    }

    /// ξ for a 0-based index.
    pub fn xi0(&self, i: usize) -> f64 {
        self.signs[i] as f64
    }

    pub fn sign0(&self, i: usize) -> i8 {
        self.signs[i]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_riemannian(&self) -> bool {
        self.p() == 0
    }

    /// Signature of the subframe spanned by directions 2..m.
    pub fn tangential(&self) -> Signature {
        assert!(self.dim() >= 2);
        Signature {
            signs: self.signs[1..].to_vec(),
        }
    }

    pub fn push(&self, sign: i8) -> Signature {
        let mut signs = self.signs.clone();
        signs.push(sign);
        Signature { signs }
    }
}

/// Generalized Kronecker delta `ε^{upper}_{lower} = det(g(e^{u_μ}, e^{l_ν}))`.
///
/// Zero unless `upper` is a list of distinct indices and `lower` is a
/// permutation of it; otherwise the permutation sign times `∏ ξ_i` over the
/// indices involved. Empty lists give 1.
pub fn generalized_delta(
    signs: &Signature,
    upper: &[usize],
    lower: &[usize],
) -> Result<f64, TensorError> {
    if upper.len() != lower.len() {
        return Err(TensorError::LengthMismatch {
            upper: upper.len(),
            lower: lower.len(),
        });
    }
    let m = signs.dim();
    for &i in upper.iter().chain(lower.iter()) {
        if i < 1 || i > m {
            return Err(TensorError::IndexOutOfRange { index: i, dim: m });
        }
    }
    let n = upper.len();
    if n == 0 {
        return Ok(1.0);
    }
    // repeated upper index -> two equal determinant rows
    for a in 0..n {
        for b in a + 1..n {
            if upper[a] == upper[b] {
                return Ok(0.0);
            }
        }
    }
    // lower must be a permutation of upper
    let mut perm = vec![usize::MAX; n];
    for (pos, &l) in lower.iter().enumerate() {
        match upper.iter().position(|&u| u == l) {
            Some(src) => {
                if perm[pos] != usize::MAX {
                    return Ok(0.0);
                }
                perm[pos] = src;
            }
            None => return Ok(0.0),
        }
    }
    // duplicate lower entries map to the same source and were caught above
    // only if they collided positionally; check injectivity explicitly.
    {
        let mut seen = vec![false; n];
        for &s in &perm {
            if seen[s] {
                return Ok(0.0);
            }
            seen[s] = true;
        }
    }
    let mut sign = 1.0;
    let mut p = perm.clone();
    for i in 0..n {
        while p[i] != i {
            let j = p[i];
            p.swap(i, j);
            sign = -sign;
        }
    }
    let mut xi_prod = 1.0;
    for &u in upper {
        xi_prod *= signs.xi(u);
    }
    Ok(sign * xi_prod)
}

/// Sign of the permutation mapping tuple `from` onto tuple `to`; both must
/// contain the same distinct entries. 0-based helper for the evaluators.
pub(crate) fn permutation_sign_between(from: &[usize], to: &[usize]) -> f64 {
    let n = from.len();
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    for t in to {
        perm.push(from.iter().position(|f| f == t).unwrap());
    }
    let mut sign = 1.0;
    let mut p = perm;
    for i in 0..n {
        while p[i] != i {
            let j = p[i];
            p.swap(i, j);
            sign = -sign;
        }
    }
    sign
}

/// Dense rank-4 component array with the algebraic curvature symmetries
///
/// ```text
/// R_ijkl = -R_jikl = R_klij,   R_ijkl + R_jkil + R_kijl = 0
/// ```
///
/// The pair symmetries hold exactly as stored (components are written
/// through their canonical orbit representative); the first Bianchi
/// identity holds to roundoff for projected tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicCurvature {
    dim: usize,
    comp: Vec<f64>,
}

impl AlgebraicCurvature {
    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.dim + j) * self.dim + k) * self.dim + l
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn zero(dim: usize) -> Self {
        AlgebraicCurvature {
            dim,
            comp: vec![0.0; dim * dim * dim * dim],
        }
    }

    /// Component with 1-based indices.
    pub fn at(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.comp[self.idx(i - 1, j - 1, k - 1, l - 1)]
    }

    /// Component with 0-based indices.
    #[inline]
    pub fn at0(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.comp[self.idx(i, j, k, l)]
    }

    /// Canonicalize a raw component array: each symmetry orbit is averaged
    /// once and written back with the orbit signs, so the pair symmetries
    /// hold bit-exactly in storage.
    pub fn from_raw(dim: usize, raw: &[f64]) -> Self {
        assert_eq!(raw.len(), dim.pow(4));
        let mut out = AlgebraicCurvature::zero(dim);
        let id = |i: usize, j: usize, k: usize, l: usize| ((i * dim + j) * dim + k) * dim + l;
        for i in 0..dim {
            for j in i..dim {
                for k in 0..dim {
                    for l in k..dim {
                        if (k, l) < (i, j) {
                            continue;
                        }
                        if i == j || k == l {
                            // antisymmetric slots vanish identically
                            out.comp[id(i, j, k, l)] = 0.0;
                            out.comp[id(j, i, k, l)] = 0.0;
                            out.comp[id(i, j, l, k)] = 0.0;
                            out.comp[id(j, i, l, k)] = 0.0;
                            out.comp[id(k, l, i, j)] = 0.0;
                            out.comp[id(l, k, i, j)] = 0.0;
                            out.comp[id(k, l, j, i)] = 0.0;
                            out.comp[id(l, k, j, i)] = 0.0;
                            continue;
                        }
                        let avg = (raw[id(i, j, k, l)] - raw[id(j, i, k, l)] - raw[id(i, j, l, k)]
                            + raw[id(j, i, l, k)]
                            + raw[id(k, l, i, j)]
                            - raw[id(l, k, i, j)]
                            - raw[id(k, l, j, i)]
                            + raw[id(l, k, j, i)])
                            / 8.0;
                        out.comp[id(i, j, k, l)] = avg;
                        out.comp[id(j, i, k, l)] = -avg;
                        out.comp[id(i, j, l, k)] = -avg;
                        out.comp[id(j, i, l, k)] = avg;
                        out.comp[id(k, l, i, j)] = avg;
                        out.comp[id(l, k, i, j)] = -avg;
                        out.comp[id(k, l, j, i)] = -avg;
                        out.comp[id(l, k, j, i)] = avg;
                    }
                }
            }
        }
        out
    }

    /// Project a raw array onto the full curvature-symmetry subspace:
    /// pair canonicalization followed by the first-Bianchi projection
    /// `R - (1/3)(cyclic sum)`. Idempotent.
    pub fn project(dim: usize, raw: &[f64]) -> Self {
        let c = AlgebraicCurvature::from_raw(dim, raw);
        let mut proj = vec![0.0; dim.pow(4)];
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        let b = c.at0(i, j, k, l) + c.at0(j, k, i, l) + c.at0(k, i, j, l);
                        proj[((i * dim + j) * dim + k) * dim + l] = c.at0(i, j, k, l) - b / 3.0;
                    }
                }
            }
        }
        AlgebraicCurvature::from_raw(dim, &proj)
    }

    /// Deterministic random curvature tensor obtained by projecting a
    /// uniform random array onto the symmetry subspace.
    pub fn random(dim: usize, seed: u64) -> Result<Self, TensorError> {
        if dim == 0 {
            return Err(TensorError::Domain(
                "curvature dimension must be at least 1".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<f64> = (0..dim.pow(4)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Ok(AlgebraicCurvature::project(dim, &raw))
    }

    /// Constant-curvature (space-form) tensor: `R_ijji = κ ξ_i ξ_j` for
    /// `i ≠ j`, calibrated so the unit round sphere has `R_1221 = +1`.
    pub fn constant(dim: usize, kappa: f64, signs: &Signature) -> Result<Self, TensorError> {
        if dim < 2 {
            return Err(TensorError::Domain(
                "constant curvature needs dimension >= 2".into(),
            ));
        }
        assert_eq!(signs.dim(), dim, "signature dimension mismatch");
        let mut raw = vec![0.0; dim.pow(4)];
        let id = |i: usize, j: usize, k: usize, l: usize| ((i * dim + j) * dim + k) * dim + l;
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        // R_ijkl = κ (g_jk g_il − g_ik g_jl) in an orthonormal frame
                        let gjk = if j == k { signs.xi0(j) } else { 0.0 };
                        let gil = if i == l { signs.xi0(i) } else { 0.0 };
                        let gik = if i == k { signs.xi0(i) } else { 0.0 };
                        let gjl = if j == l { signs.xi0(j) } else { 0.0 };
                        raw[id(i, j, k, l)] = kappa * (gjk * gil - gik * gjl);
                    }
                }
            }
        }
        Ok(AlgebraicCurvature::from_raw(dim, &raw))
    }

    pub fn max_abs(&self) -> f64 {
        self.comp.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    /// Max first-Bianchi residual over all index combinations.
    pub fn bianchi_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    for l in 0..self.dim {
                        let b = self.at0(i, j, k, l) + self.at0(j, k, i, l) + self.at0(k, i, j, l);
                        worst = worst.max(b.abs());
                    }
                }
            }
        }
        worst
    }

    /// Restrict to the tangential block: drop the first frame direction and
    /// reindex the remaining `dim − 1` directions from 1.
    pub fn tangential_restriction(&self) -> AlgebraicCurvature {
        assert!(self.dim >= 2);
        let d = self.dim - 1;
        let mut out = AlgebraicCurvature::zero(d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let v = self.at0(i + 1, j + 1, k + 1, l + 1);
                        let t = ((i * d + j) * d + k) * d + l;
                        out.comp[t] = v;
                    }
                }
            }
        }
        out
    }

    /// Components after an orthonormal-frame change `e'_i = Σ_a O_{ai} e_a`.
    pub fn rotate(&self, o: &[f64]) -> AlgebraicCurvature {
        let m = self.dim;
        assert_eq!(o.len(), m * m);
        // contract one index at a time
        let mut cur = self.comp.clone();
        for _axis in 0..4 {
            let mut next = vec![0.0; m * m * m * m];
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        for inew in 0..m {
                            let mut s = 0.0;
                            for a in 0..m {
                                s += cur[((a * m + j) * m + k) * m + l] * o[a * m + inew];
                            }
                            // rotate axis 0 then cycle axes so each gets a turn
                            next[((j * m + k) * m + l) * m + inew] = s;
                        }
                    }
                }
            }
            cur = next;
        }
        AlgebraicCurvature::from_raw(m, &cur)
    }
}

/// Symmetric 2-tensor values; symmetry is exact in storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTwoTensor {
    dim: usize,
    comp: Vec<f64>,
}

impl SymTwoTensor {
    pub fn zero(dim: usize) -> Self {
        SymTwoTensor {
            dim,
            comp: vec![0.0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Build from a raw matrix, symmetrizing exactly.
    pub fn from_raw_symmetrize(dim: usize, raw: &[f64]) -> Self {
        assert_eq!(raw.len(), dim * dim);
        let mut t = SymTwoTensor::zero(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = if i == j {
                    raw[i * dim + j]
                } else {
                    (raw[i * dim + j] + raw[j * dim + i]) / 2.0
                };
                t.comp[i * dim + j] = v;
                t.comp[j * dim + i] = v;
            }
        }
        t
    }

    /// 1-based access.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.comp[(i - 1) * self.dim + (j - 1)]
    }

    #[inline]
    pub fn at0(&self, i: usize, j: usize) -> f64 {
        self.comp[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.comp[(i - 1) * self.dim + (j - 1)] = v;
        self.comp[(j - 1) * self.dim + (i - 1)] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.comp.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    /// `Oᵀ T O` for a frame change given in column convention.
    pub fn rotate(&self, o: &[f64]) -> SymTwoTensor {
        let m = self.dim;
        let mut raw = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                let mut s = 0.0;
                for a in 0..m {
                    for b in 0..m {
                        s += o[a * m + i] * self.comp[a * m + b] * o[b * m + j];
                    }
                }
                raw[i * m + j] = s;
            }
        }
        SymTwoTensor::from_raw_symmetrize(m, &raw)
    }

    /// Maximum asymmetry of a raw matrix (diagnostic for callers that
    /// symmetrize computed values).
    pub fn asymmetry_of_raw(dim: usize, raw: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                worst = worst.max((raw[i * dim + j] - raw[j * dim + i]).abs());
            }
        }
        worst
    }
}

/// Second fundamental form `L_ab = g(∇_{e_a} e_b, e_1)` of a boundary point,
/// stored over the tangential frame directions reindexed from 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondFundamentalForm {
    inner: SymTwoTensor,
}

impl SecondFundamentalForm {
    pub fn from_raw_symmetrize(boundary_dim: usize, raw: &[f64]) -> Self {
        SecondFundamentalForm {
            inner: SymTwoTensor::from_raw_symmetrize(boundary_dim, raw),
        }
    }

    pub fn zero(boundary_dim: usize) -> Self {
        SecondFundamentalForm {
            inner: SymTwoTensor::zero(boundary_dim),
        }
    }

    pub fn identity(boundary_dim: usize) -> Self {
        let mut t = SymTwoTensor::zero(boundary_dim);
        for i in 1..=boundary_dim {
            t.set(i, i, 1.0);
        }
        SecondFundamentalForm { inner: t }
    }

    pub fn boundary_dim(&self) -> usize {
        self.inner.dim()
    }

    /// 1-based tangential indices.
    pub fn at(&self, a: usize, b: usize) -> f64 {
        self.inner.at(a, b)
    }

    #[inline]
    pub fn at0(&self, a: usize, b: usize) -> f64 {
        self.inner.at0(a, b)
    }

    pub fn as_sym(&self) -> &SymTwoTensor {
        &self.inner
    }

    pub fn rotate(&self, o: &[f64]) -> SecondFundamentalForm {
        SecondFundamentalForm {
            inner: self.inner.rotate(o),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn riem(m: usize) -> Signature {
        Signature::riemannian(m)
    }

    #[test]
    fn delta_identity_and_odd_permutation() {
        let s = riem(2);
        assert_eq!(generalized_delta(&s, &[1, 2], &[1, 2]).unwrap(), 1.0);
        assert_eq!(generalized_delta(&s, &[1, 2], &[2, 1]).unwrap(), -1.0);
    }

    #[test]
    fn delta_repeated_index_vanishes() {
        let s = Signature::from_signs(vec![-1, 1]).unwrap();
        assert_eq!(generalized_delta(&s, &[1, 1], &[1, 1]).unwrap(), 0.0);
        assert_eq!(generalized_delta(&s, &[1, 2], &[2, 2]).unwrap(), 0.0);
    }

    #[test]
    fn delta_signature_factor() {
        let s = Signature::from_signs(vec![-1, 1]).unwrap();
        assert_eq!(generalized_delta(&s, &[1, 2], &[1, 2]).unwrap(), -1.0);
    }

    #[test]
    fn delta_empty_is_one_and_range_checked() {
        let s = riem(3);
        assert_eq!(generalized_delta(&s, &[], &[]).unwrap(), 1.0);
        assert!(matches!(
            generalized_delta(&s, &[4], &[4]),
            Err(TensorError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            generalized_delta(&s, &[1], &[1, 2]),
            Err(TensorError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn random_curvature_dim2_single_component() {
        let r = AlgebraicCurvature::random(2, 42).unwrap();
        let v = r.at(1, 2, 1, 2);
        assert_eq!(r.at(2, 1, 1, 2), -v);
        assert_eq!(r.at(1, 2, 2, 1), -v);
        assert_eq!(r.at(2, 1, 2, 1), v);
        assert_eq!(r.at(1, 1, 1, 1), 0.0);
        assert_eq!(r.bianchi_residual(), 0.0);
    }

    #[test]
    fn random_curvature_dim3_bianchi() {
        let r = AlgebraicCurvature::random(3, 7).unwrap();
        let cyc = r.at(1, 2, 3, 1) + r.at(2, 3, 1, 1) + r.at(3, 1, 2, 1);
        assert!(cyc.abs() <= 1e-13 * (1.0 + r.max_abs()));
        assert!(r.bianchi_residual() <= 1e-13 * (1.0 + r.max_abs()));
    }

    #[test]
    fn projection_is_idempotent() {
        let r = AlgebraicCurvature::random(4, 7).unwrap();
        let again = AlgebraicCurvature::project(4, &r.comp);
        for (a, b) in r.comp.iter().zip(again.comp.iter()) {
            assert!((a - b).abs() <= 1e-13 * (1.0 + r.max_abs()));
        }
    }

    #[test]
    fn pair_symmetries_exact_as_stored() {
        let r = AlgebraicCurvature::random(4, 3).unwrap();
        for i in 1..=4 {
            for j in 1..=4 {
                for k in 1..=4 {
                    for l in 1..=4 {
                        assert_eq!(r.at(i, j, k, l), -r.at(j, i, k, l));
                        assert_eq!(r.at(i, j, k, l), -r.at(i, j, l, k));
                        assert_eq!(r.at(i, j, k, l), r.at(k, l, i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn constant_curvature_round_sphere_calibration() {
        let s = riem(2);
        let r = AlgebraicCurvature::constant(2, 1.0, &s).unwrap();
        assert_relative_eq!(r.at(1, 2, 2, 1), 1.0);
        assert_relative_eq!(r.at(1, 2, 1, 2), -1.0);
        assert!(AlgebraicCurvature::constant(1, 1.0, &riem(1)).is_err());
    }

    #[test]
    fn constant_curvature_zero_kappa_is_zero() {
        let s = riem(4);
        let r = AlgebraicCurvature::constant(4, 0.0, &s).unwrap();
        assert_eq!(r.max_abs(), 0.0);
    }

    #[test]
    fn constant_curvature_scales_linearly() {
        let s = riem(2);
        let r1 = AlgebraicCurvature::constant(2, 0.7, &s).unwrap();
        let r2 = AlgebraicCurvature::constant(2, 1.4, &s).unwrap();
        for i in 1..=2 {
            for j in 1..=2 {
                for k in 1..=2 {
                    for l in 1..=2 {
                        assert_relative_eq!(r2.at(i, j, k, l), 2.0 * r1.at(i, j, k, l));
                    }
                }
            }
        }
    }

    #[test]
    fn random_rejects_dimension_zero() {
        assert!(AlgebraicCurvature::random(0, 1).is_err());
    }

    #[test]
    fn random_is_deterministic_in_seed() {
        let a = AlgebraicCurvature::random(3, 11).unwrap();
        let b = AlgebraicCurvature::random(3, 11).unwrap();
        assert_eq!(a, b);
    }
}
