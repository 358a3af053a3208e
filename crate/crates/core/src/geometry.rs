//! Chart-based pseudo-Riemannian geometry: metric evaluation, Levi-Civita
//! connection and curvature through second-order forward AD, orthonormal
//! and boundary-adapted frames, and the second fundamental form.
//!
//! Conventions: the curvature sign is fixed so that the unit round sphere
//! has orthonormal `R_1221 = +1` (equivalently, scalar curvature
//! `m(m-1) > 0` on round spheres). When a chart declares a boundary, it is
//! the lower face of coordinate 1, with coordinate 1 increasing inward; the
//! first vector of a boundary-adapted frame is the inward unit normal.

use crate::expr::{parse_expression, EvalError, Expr};
use crate::jet::Jet;
use crate::linalg;
use crate::tensor::{AlgebraicCurvature, SecondFundamentalForm, Signature};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("metric degenerate at {point:?}: {detail}")]
    DegenerateMetric { point: Vec<f64>, detail: String },
    #[error("null direction while building a frame at {point:?}")]
    NullDirection { point: Vec<f64> },
    #[error("chart `{0}` declares no boundary face")]
    NoBoundary(String),
    #[error("point {point:?} is not on the boundary face")]
    NotOnBoundary { point: Vec<f64> },
    #[error("evaluation failed at {point:?}: {source}")]
    Eval { point: Vec<f64>, source: EvalError },
    #[error("invalid chart: {0}")]
    Invalid(String),
}

/// Coordinate box with metric-component expressions.
#[derive(Debug, Clone)]
pub struct MetricChart {
    name: String,
    dim: usize,
    coord_names: Vec<String>,
    domain: Vec<(f64, f64)>,
    /// Upper-triangle entries, row-major: (1,1), (1,2), ..., (2,2), ...
    entries: Vec<Expr>,
    boundary_face: bool,
    signature: Signature,
    volume_weight: Option<Expr>,
}

#[inline]
fn tri_index(m: usize, i: usize, j: usize) -> usize {
    // 0-based upper triangle (i <= j)
    debug_assert!(i <= j && j < m);
    i * m - i * (i + 1) / 2 + j
}

/// Pointwise orthonormal frame: vectors in chart coordinates and their
/// inner-product signs. For boundary-adapted frames the first vector is
/// the inward unit normal.
#[derive(Debug, Clone)]
pub struct PointFrame {
    pub point: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub signs: Signature,
}

impl MetricChart {
    pub fn new(
        name: impl Into<String>,
        coord_names: Vec<String>,
        domain: Vec<(f64, f64)>,
        signature: Signature,
        boundary_face: bool,
    ) -> Result<Self, GeomError> {
        let dim = coord_names.len();
        if dim == 0 {
            return Err(GeomError::Invalid(
                "chart needs at least one coordinate".into(),
            ));
        }
        if dim > crate::jet::MAX_VARS {
            return Err(GeomError::Invalid(format!(
                "chart dimension {dim} exceeds the derivative tracking limit {}",
                crate::jet::MAX_VARS
            )));
        }
        if domain.len() != dim || signature.dim() != dim {
            return Err(GeomError::Invalid(format!(
                "dimension mismatch: {dim} coordinates, {} intervals, signature of dimension {}",
                domain.len(),
                signature.dim()
            )));
        }
        for (lo, hi) in &domain {
            if lo >= hi {
                return Err(GeomError::Invalid(format!("empty interval [{lo}, {hi}]")));
            }
        }
        for (k, n) in coord_names.iter().enumerate() {
            if coord_names[..k].contains(n) {
                return Err(GeomError::Invalid(format!("duplicate coordinate `{n}`")));
            }
        }
        let entries = vec![Expr::constant(0.0); dim * (dim + 1) / 2];
        Ok(MetricChart {
            name: name.into(),
            dim,
            coord_names,
            domain,
            entries,
            boundary_face,
            signature,
            volume_weight: None,
        })
    }

    /// Convenience constructor parsing entry expressions against the
    /// coordinate names. Entries are 1-based upper-triangle `(i, j, source)`.
    pub fn from_entries(
        name: &str,
        coords: &[&str],
        domain: &[(f64, f64)],
        signature: Signature,
        boundary_face: bool,
        entries: &[(usize, usize, &str)],
    ) -> Result<Self, GeomError> {
        let mut chart = MetricChart::new(
            name,
            coords.iter().map(|s| s.to_string()).collect(),
            domain.to_vec(),
            signature,
            boundary_face,
        )?;
        for (i, j, src) in entries {
            let e = parse_expression(src, coords)
                .map_err(|e| GeomError::Invalid(format!("entry ({i},{j}): {e}")))?;
            chart.set_entry(*i, *j, e)?;
        }
        Ok(chart)
    }

    /// Set an upper-triangle metric entry, 1-based.
    pub fn set_entry(&mut self, i: usize, j: usize, e: Expr) -> Result<(), GeomError> {
        if i < 1 || j < 1 || i > self.dim || j > self.dim || i > j {
            return Err(GeomError::Invalid(format!(
                "entry ({i},{j}) must satisfy 1 <= i <= j <= {}",
                self.dim
            )));
        }
        self.entries[tri_index(self.dim, i - 1, j - 1)] = e;
        Ok(())
    }

    pub fn set_volume_weight(&mut self, w: Option<Expr>) {
        self.volume_weight = w;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coord_names(&self) -> &[String] {
        &self.coord_names
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn has_boundary(&self) -> bool {
        self.boundary_face
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn entry(&self, i: usize, j: usize) -> &Expr {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        &self.entries[tri_index(self.dim, i - 1, j - 1)]
    }

    fn eval_err(&self, x: &[f64], e: EvalError) -> GeomError {
        GeomError::Eval {
            point: x.to_vec(),
            source: e,
        }
    }

    fn metric_values(&self, x: &[f64]) -> Result<Vec<f64>, GeomError> {
        let m = self.dim;
        let mut g = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let v = self.entries[tri_index(m, i, j)]
                    .value_at(x)
                    .map_err(|e| self.eval_err(x, e))?;
                g[i * m + j] = v;
                g[j * m + i] = v;
            }
        }
        Ok(g)
    }

    /// Metric matrix at a point, checked to be invertible with the
    /// declared signature.
    pub fn metric_at(&self, x: &[f64]) -> Result<Vec<f64>, GeomError> {
        let g = self.metric_values(x)?;
        self.check_signature(&g, x)?;
        Ok(g)
    }

    fn check_signature(&self, g: &[f64], x: &[f64]) -> Result<(), GeomError> {
        let m = self.dim;
        // Strict sign classification: charts legitimately produce tiny
        // eigenvalues near coordinate singularities (pole-adjacent nodes),
        // so only exact zeros and sign flips count as degeneracy.
        let (neg, pos, zero) = linalg::inertia(g, m, 0.0);
        if zero > 0 {
            return Err(GeomError::DegenerateMetric {
                point: x.to_vec(),
                detail: "singular matrix".into(),
            });
        }
        if neg != self.signature.p() || pos != self.signature.q() {
            return Err(GeomError::DegenerateMetric {
                point: x.to_vec(),
                detail: format!(
                    "signature ({neg},{pos}) differs from declared ({},{})",
                    self.signature.p(),
                    self.signature.q()
                ),
            });
        }
        Ok(())
    }

    fn metric_jets(&self, x: &[f64]) -> Result<Vec<Jet>, GeomError> {
        self.entries
            .iter()
            .map(|e| e.jet_at(x).map_err(|er| self.eval_err(x, er)))
            .collect()
    }

    /// Christoffel symbols `Γ^k_{ij}`, indexed `gamma[(k*m + i)*m + j]`.
    pub fn christoffel(&self, x: &[f64]) -> Result<Vec<f64>, GeomError> {
        let (gamma, _) = self.connection_data(x, false)?;
        Ok(gamma)
    }

    /// Christoffels and (optionally) their coordinate derivatives
    /// `dgamma[((a*m + k)*m + i)*m + j] = ∂_a Γ^k_{ij}`.
    fn connection_data(&self, x: &[f64], derivs: bool) -> Result<(Vec<f64>, Vec<f64>), GeomError> {
        let m = self.dim;
        let jets = self.metric_jets(x)?;
        let jet = |i: usize, j: usize| -> &Jet {
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            &jets[tri_index(m, i, j)]
        };
        let mut g = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                g[i * m + j] = jet(i, j).value();
            }
        }
        self.check_signature(&g, x)?;
        let (ginv, _det) = linalg::invert(&g, m).ok_or_else(|| GeomError::DegenerateMetric {
            point: x.to_vec(),
            detail: "singular matrix".into(),
        })?;
        let dg = |i: usize, j: usize, k: usize| jet(i, j).d(k);

        let mut gamma = vec![0.0; m * m * m];
        for k in 0..m {
            for i in 0..m {
                for j in i..m {
                    let mut s = 0.0;
                    for l in 0..m {
                        s += ginv[k * m + l] * (dg(j, l, i) + dg(i, l, j) - dg(i, j, l));
                    }
                    let v = 0.5 * s;
                    gamma[(k * m + i) * m + j] = v;
                    gamma[(k * m + j) * m + i] = v;
                }
            }
        }
        if !derivs {
            return Ok((gamma, Vec::new()));
        }

        // ∂_a g^{kl} = −g^{ks} (∂_a g_{st}) g^{tl}
        let mut dginv = vec![0.0; m * m * m]; // [(a*m + k)*m + l]
        for a in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let mut s = 0.0;
                    for u in 0..m {
                        for t in 0..m {
                            s += ginv[k * m + u] * dg(u, t, a) * ginv[t * m + l];
                        }
                    }
                    dginv[(a * m + k) * m + l] = -s;
                }
            }
        }
        let d2g = |i: usize, j: usize, k: usize, l: usize| jet(i, j).dd(k, l);
        let mut dgamma = vec![0.0; m * m * m * m];
        for a in 0..m {
            for k in 0..m {
                for i in 0..m {
                    for j in i..m {
                        let mut s = 0.0;
                        for l in 0..m {
                            s += dginv[(a * m + k) * m + l]
                                * (dg(j, l, i) + dg(i, l, j) - dg(i, j, l));
                            s += ginv[k * m + l]
                                * (d2g(j, l, i, a) + d2g(i, l, j, a) - d2g(i, j, l, a));
                        }
                        let v = 0.5 * s;
                        dgamma[((a * m + k) * m + i) * m + j] = v;
                        dgamma[((a * m + k) * m + j) * m + i] = v;
                    }
                }
            }
        }
        Ok((gamma, dgamma))
    }

    /// Coordinate-frame curvature `R_{ijkl} = g(R(∂_i, ∂_j) ∂_k, ∂_l)`,
    /// indexed `[((i*m + j)*m + k)*m + l]`.
    pub fn riemann_at(&self, x: &[f64]) -> Result<Vec<f64>, GeomError> {
        let m = self.dim;
        let (gamma, dgamma) = self.connection_data(x, true)?;
        let g = self.metric_values(x)?;
        let ga = |k: usize, i: usize, j: usize| gamma[(k * m + i) * m + j];
        let dga = |a: usize, k: usize, i: usize, j: usize| dgamma[((a * m + k) * m + i) * m + j];
        let mut r = vec![0.0; m * m * m * m];
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                for k in 0..m {
                    // R(∂_i, ∂_j) ∂_k = (∂_i Γ^s_{jk} − ∂_j Γ^s_{ik} + Γ^s_{iu} Γ^u_{jk} − Γ^s_{ju} Γ^u_{ik}) ∂_s
                    for l in 0..m {
                        let mut s_acc = 0.0;
                        for s in 0..m {
                            let mut t = dga(i, s, j, k) - dga(j, s, i, k);
                            for u in 0..m {
                                t += ga(s, i, u) * ga(u, j, k) - ga(s, j, u) * ga(u, i, k);
                            }
                            s_acc += g[s * m + l] * t;
                        }
                        r[((i * m + j) * m + k) * m + l] = s_acc;
                    }
                }
            }
        }
        Ok(r)
    }

    /// Signature-aware Gram-Schmidt frame. With `boundary_adapted`, the
    /// point must lie on the declared face; the face tangents are
    /// orthonormalized first and the inward unit normal is placed first
    /// in the resulting frame.
    pub fn orthonormal_frame_at(
        &self,
        x: &[f64],
        boundary_adapted: bool,
    ) -> Result<PointFrame, GeomError> {
        let m = self.dim;
        let g = self.metric_values(x)?;
        let inner = |v: &[f64], w: &[f64]| -> f64 {
            let mut s = 0.0;
            for a in 0..m {
                for b in 0..m {
                    s += v[a] * g[a * m + b] * w[b];
                }
            }
            s
        };
        let order: Vec<usize> = if boundary_adapted {
            if !self.boundary_face {
                return Err(GeomError::NoBoundary(self.name.clone()));
            }
            let lo = self.domain[0].0;
            if (x[0] - lo).abs() > 1e-9 * (1.0 + lo.abs()) {
                return Err(GeomError::NotOnBoundary { point: x.to_vec() });
            }
            // tangential directions first, the normal candidate last
            (1..m).chain(std::iter::once(0)).collect()
        } else {
            (0..m).collect()
        };
        let mut vecs: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut signs: Vec<i8> = Vec::with_capacity(m);
        for &dir in &order {
            let mut v = vec![0.0; m];
            v[dir] = 1.0;
            for (w, &sw) in vecs.iter().zip(signs.iter()) {
                let c = sw as f64 * inner(w, &v);
                for a in 0..m {
                    v[a] -= c * w[a];
                }
            }
            let nr = inner(&v, &v);
            // null means cancellation: compare against the no-cancellation
            // bound, not an absolute scale (short directions near chart
            // singularities are legitimate)
            let mut bound = 0.0;
            for a in 0..m {
                for b in 0..m {
                    bound += (v[a] * g[a * m + b] * v[b]).abs();
                }
            }
            if nr.abs() < 1e-12 * bound.max(1e-300) {
                return Err(GeomError::NullDirection { point: x.to_vec() });
            }
            let s = if nr > 0.0 { 1i8 } else { -1i8 };
            let scale = 1.0 / nr.abs().sqrt();
            for c in v.iter_mut() {
                *c *= scale;
            }
            vecs.push(v);
            signs.push(s);
        }
        if boundary_adapted {
            // move the normal to the front, inward-pointing
            let mut normal = vecs.pop().unwrap();
            let ns = signs.pop().unwrap();
            if normal[0] < 0.0 {
                for c in normal.iter_mut() {
                    *c = -*c;
                }
            }
            vecs.insert(0, normal);
            signs.insert(0, ns);
        }
        let mut declared: Vec<i8> = self.signature.signs().to_vec();
        let mut got = signs.clone();
        declared.sort_unstable();
        got.sort_unstable();
        if declared != got {
            return Err(GeomError::DegenerateMetric {
                point: x.to_vec(),
                detail: "frame signature differs from declared signature".into(),
            });
        }
        Ok(PointFrame {
            point: x.to_vec(),
            vectors: vecs,
            signs: Signature::from_signs(signs).expect("non-empty"),
        })
    }

    /// Full pipeline at a point: coordinate curvature converted to the
    /// orthonormal frame.
    pub fn frame_curvature_at(
        &self,
        x: &[f64],
        boundary_adapted: bool,
    ) -> Result<(AlgebraicCurvature, PointFrame), GeomError> {
        let r = self.riemann_at(x)?;
        let frame = self.orthonormal_frame_at(x, boundary_adapted)?;
        Ok((curvature_in_frame(self.dim, &r, &frame), frame))
    }

    /// Second fundamental form `L_ab = g(∇_{e_a} e_b, e_1)` at a boundary
    /// point, over the tangential frame directions.
    pub fn second_fundamental_form(&self, y: &[f64]) -> Result<SecondFundamentalForm, GeomError> {
        let m = self.dim;
        let frame = self.orthonormal_frame_at(y, true)?;
        let gamma = self.christoffel(y)?;
        let g = self.metric_values(y)?;
        let e1 = &frame.vectors[0];
        // w_k = g_{kl} e1^l
        let mut w = vec![0.0; m];
        for (k, wk) in w.iter_mut().enumerate() {
            let mut s = 0.0;
            for l in 0..m {
                s += g[k * m + l] * e1[l];
            }
            *wk = s;
        }
        let mt = m - 1;
        let mut raw = vec![0.0; mt * mt];
        for a in 0..mt {
            for b in 0..mt {
                let ea = &frame.vectors[a + 1];
                let eb = &frame.vectors[b + 1];
                let mut s = 0.0;
                for i in 0..m {
                    if ea[i] == 0.0 {
                        continue;
                    }
                    for j in 0..m {
                        if eb[j] == 0.0 {
                            continue;
                        }
                        let mut t = 0.0;
                        for k in 0..m {
                            t += gamma[(k * m + i) * m + j] * w[k];
                        }
                        s += ea[i] * eb[j] * t;
                    }
                }
                raw[a * mt + b] = s;
            }
        }
        Ok(SecondFundamentalForm::from_raw_symmetrize(mt, &raw))
    }

    /// Block product with a circle of circumference 2π: `g ⊕ (±1) dθ²`.
    pub fn product_with_circle(&self, sign: i8) -> MetricChart {
        assert!(sign == 1 || sign == -1);
        let m = self.dim;
        let mut theta = "theta".to_string();
        let mut counter = 2;
        while self.coord_names.contains(&theta) {
            theta = format!("theta{counter}");
            counter += 1;
        }
        let mut coord_names = self.coord_names.clone();
        coord_names.push(theta);
        let mut domain = self.domain.clone();
        domain.push((0.0, 2.0 * PI));
        let md = m + 1;
        let mut entries = vec![Expr::constant(0.0); md * (md + 1) / 2];
        for i in 0..m {
            for j in i..m {
                entries[tri_index(md, i, j)] = self.entries[tri_index(m, i, j)].clone();
            }
        }
        entries[tri_index(md, m, m)] = Expr::constant(sign as f64);
        MetricChart {
            name: format!("{}-x-circle", self.name),
            dim: md,
            coord_names,
            domain,
            entries,
            boundary_face: self.boundary_face,
            signature: self.signature.push(sign),
            volume_weight: self.volume_weight.clone(),
        }
    }

    /// Chart with metric `g + t h`; `h` is given as upper-triangle
    /// expressions aligned with this chart's entry layout.
    pub fn perturbed(&self, h: &[Expr], t: f64) -> MetricChart {
        assert_eq!(
            h.len(),
            self.entries.len(),
            "perturbation entry count mismatch"
        );
        let mut chart = self.clone();
        chart.name = format!("{}+t*h", self.name);
        for (e, hh) in chart.entries.iter_mut().zip(h.iter()) {
            *e = e.plus_scaled(t, hh);
        }
        chart
    }

    /// Number of upper-triangle entry slots.
    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    /// Interior volume density `√|det g|`, or the declared override.
    pub fn volume_density(&self, x: &[f64]) -> Result<f64, GeomError> {
        if let Some(w) = &self.volume_weight {
            return w.value_at(x).map_err(|e| self.eval_err(x, e));
        }
        let g = self.metric_values(x)?;
        let (_, det) = linalg::invert(&g, self.dim).ok_or_else(|| GeomError::DegenerateMetric {
            point: x.to_vec(),
            detail: "singular matrix".into(),
        })?;
        Ok(det.abs().sqrt())
    }

    /// Induced volume density on the boundary face.
    pub fn boundary_volume_density(&self, y: &[f64]) -> Result<f64, GeomError> {
        if !self.boundary_face {
            return Err(GeomError::NoBoundary(self.name.clone()));
        }
        let m = self.dim;
        let g = self.metric_values(y)?;
        let mt = m - 1;
        if mt == 0 {
            return Ok(1.0);
        }
        let mut tang = vec![0.0; mt * mt];
        for a in 0..mt {
            for b in 0..mt {
                tang[a * mt + b] = g[(a + 1) * m + (b + 1)];
            }
        }
        let (_, det) = linalg::invert(&tang, mt).ok_or_else(|| GeomError::DegenerateMetric {
            point: y.to_vec(),
            detail: "induced boundary metric is degenerate".into(),
        })?;
        Ok(det.abs().sqrt())
    }

    /// Assemble a full chart point from boundary-face coordinates.
    pub fn boundary_point(&self, rest: &[f64]) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.dim);
        x.push(self.domain[0].0);
        x.extend_from_slice(rest);
        x
    }
}

/// Curvature components relative to an orthonormal frame:
/// `R(e_a, e_b, e_c, e_d)` from coordinate components.
pub fn curvature_in_frame(dim: usize, r_coord: &[f64], frame: &PointFrame) -> AlgebraicCurvature {
    let m = dim;
    assert_eq!(r_coord.len(), m * m * m * m);
    // contract one axis at a time; axes cycle so the order is restored
    let mut cur = r_coord.to_vec();
    for _axis in 0..4 {
        let mut next = vec![0.0; m * m * m * m];
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    for (a, va) in frame.vectors.iter().enumerate() {
                        let mut s = 0.0;
                        for (i, vai) in va.iter().enumerate() {
                            s += cur[((i * m + j) * m + k) * m + l] * vai;
                        }
                        next[((j * m + k) * m + l) * m + a] = s;
                    }
                }
            }
        }
        cur = next;
    }
    AlgebraicCurvature::from_raw(m, &cur)
}

/// Catalog chart builders used across the test suites.
pub mod charts {
    use super::*;

    pub fn euclidean(dim: usize) -> MetricChart {
        let names: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
        let mut chart = MetricChart::new(
            format!("flat-{dim}"),
            names,
            vec![(0.0, 1.0); dim],
            Signature::riemannian(dim),
            false,
        )
        .unwrap();
        for i in 1..=dim {
            chart.set_entry(i, i, Expr::constant(1.0)).unwrap();
        }
        chart
    }

    /// Unit round sphere in hyperspherical coordinates.
    pub fn sphere(dim: usize) -> MetricChart {
        let mut names: Vec<String> = (1..dim).map(|i| format!("t{i}")).collect();
        names.push("ph".into());
        let mut domain = vec![(0.0, PI); dim - 1];
        domain.push((0.0, 2.0 * PI));
        let coords: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let mut chart = MetricChart::new(
            format!("sphere-{dim}"),
            names.clone(),
            domain,
            Signature::riemannian(dim),
            false,
        )
        .unwrap();
        chart.set_entry(1, 1, Expr::constant(1.0)).unwrap();
        let mut prefix = String::new();
        for i in 2..=dim {
            if i > 2 {
                prefix.push('*');
            }
            prefix.push_str(&format!("sin({})^2", coords[i - 2]));
            let e = parse_expression(&prefix, &coords).unwrap();
            chart.set_entry(i, i, e).unwrap();
        }
        chart
    }

    /// Flat unit disc; the boundary circle is the face `s = 0`, radius `1 - s`.
    pub fn disc() -> MetricChart {
        MetricChart::from_entries(
            "flat-disc",
            &["s", "ph"],
            &[(0.0, 1.0), (0.0, 2.0 * PI)],
            Signature::riemannian(2),
            true,
            &[(1, 1, "1"), (2, 2, "(1-s)^2")],
        )
        .unwrap()
    }

    /// Flat unit ball in dimension 3; boundary sphere at `s = 0`.
    pub fn ball3() -> MetricChart {
        MetricChart::from_entries(
            "flat-ball-3",
            &["s", "th", "ph"],
            &[(0.0, 1.0), (0.0, PI), (0.0, 2.0 * PI)],
            Signature::riemannian(3),
            true,
            &[(1, 1, "1"), (2, 2, "(1-s)^2"), (3, 3, "(1-s)^2*sin(th)^2")],
        )
        .unwrap()
    }

    /// Upper hemisphere of the unit 2-sphere; equator boundary at `s = 0`.
    pub fn hemisphere() -> MetricChart {
        MetricChart::from_entries(
            "hemisphere-2",
            &["s", "ph"],
            &[(0.0, PI / 2.0), (0.0, 2.0 * PI)],
            Signature::riemannian(2),
            true,
            &[(1, 1, "1"), (2, 2, "cos(s)^2")],
        )
        .unwrap()
    }

    /// Upper hemisphere of the unit 3-sphere; the boundary is the
    /// equatorial 2-sphere (totally geodesic) at `s = 0`.
    pub fn hemisphere3() -> MetricChart {
        MetricChart::from_entries(
            "hemisphere-3",
            &["s", "t2", "ph"],
            &[(0.0, PI / 2.0), (0.0, PI), (0.0, 2.0 * PI)],
            Signature::riemannian(3),
            true,
            &[
                (1, 1, "1"),
                (2, 2, "cos(s)^2"),
                (3, 3, "cos(s)^2*sin(t2)^2"),
            ],
        )
        .unwrap()
    }

    /// Flat cylinder `[0,1] × S¹` with the declared face at `s = 0`.
    pub fn cylinder() -> MetricChart {
        MetricChart::from_entries(
            "flat-cylinder",
            &["s", "ph"],
            &[(0.0, 1.0), (0.0, 2.0 * PI)],
            Signature::riemannian(2),
            true,
            &[(1, 1, "1"), (2, 2, "1")],
        )
        .unwrap()
    }

    /// Flat torus.
    pub fn torus2() -> MetricChart {
        MetricChart::from_entries(
            "flat-torus-2",
            &["a", "b"],
            &[(0.0, 2.0 * PI), (0.0, 2.0 * PI)],
            Signature::riemannian(2),
            false,
            &[(1, 1, "1"), (2, 2, "1")],
        )
        .unwrap()
    }

    /// Product of two unit 2-spheres.
    pub fn s2xs2() -> MetricChart {
        MetricChart::from_entries(
            "s2-x-s2",
            &["t1", "p1", "t2", "p2"],
            &[(0.0, PI), (0.0, 2.0 * PI), (0.0, PI), (0.0, 2.0 * PI)],
            Signature::riemannian(4),
            false,
            &[
                (1, 1, "1"),
                (2, 2, "sin(t1)^2"),
                (3, 3, "1"),
                (4, 4, "sin(t2)^2"),
            ],
        )
        .unwrap()
    }

    /// Flat unit square with the declared face at `x1 = 0`.
    pub fn slab2() -> MetricChart {
        MetricChart::from_entries(
            "flat-slab-2",
            &["x1", "x2"],
            &[(0.0, 1.0), (0.0, 1.0)],
            Signature::riemannian(2),
            true,
            &[(1, 1, "1"), (2, 2, "1")],
        )
        .unwrap()
    }
}
