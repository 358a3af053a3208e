//! Gauss-Legendre tensor-product quadrature over chart domains.
//!
//! Nodes are strictly interior to each interval, so coordinate
//! singularities on domain faces (sphere poles, disc centers) are never
//! sampled. Node evaluation is data-parallel; the reduction is a fixed
//! pairwise summation over the node ordering, so results do not depend on
//! the worker count.

use crate::geometry::{GeomError, MetricChart};
use rayon::prelude::*;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Tricomi-style initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' at x by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            dp = n as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Exact pairwise summation over a value slice (deterministic reduction).
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        2..=8 => v.iter().sum(),
        n => {
            let half = n / 2;
            pairwise_sum(&v[..half]) + pairwise_sum(&v[half..])
        }
    }
}

/// Tensor-product Gauss-Legendre rule with a fixed number of points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureRule {
    pub order: usize,
}

impl QuadratureRule {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be at least 1");
        QuadratureRule { order }
    }

    /// Mapped nodes/weights on an interval.
    pub fn nodes_on(&self, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
        let (xs, ws) = gauss_legendre(self.order);
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        (
            xs.iter().map(|x| mid + half * x).collect(),
            ws.iter().map(|w| w * half).collect(),
        )
    }
}

struct Grid {
    axes: Vec<(Vec<f64>, Vec<f64>)>,
}

impl Grid {
    fn new(rule: &QuadratureRule, domain: &[(f64, f64)]) -> Self {
        Grid {
            axes: domain
                .iter()
                .map(|(lo, hi)| rule.nodes_on(*lo, *hi))
                .collect(),
        }
    }

    fn len(&self) -> usize {
        self.axes.iter().map(|(n, _)| n.len()).product()
    }

    fn decode(&self, mut idx: usize) -> (Vec<f64>, f64) {
        let mut x = Vec::with_capacity(self.axes.len());
        let mut w = 1.0;
        for (nodes, weights) in self.axes.iter().rev() {
            let k = idx % nodes.len();
            idx /= nodes.len();
            x.push(nodes[k]);
            w *= weights[k];
        }
        x.reverse();
        (x, w)
    }
}

/// `∫_M f dx_g` over the chart box: tensor-product quadrature of
/// `f · √|det g|` (or the chart's volume-weight override).
pub fn integrate_interior<F>(
    chart: &MetricChart,
    rule: &QuadratureRule,
    f: F,
) -> Result<f64, GeomError>
where
    F: Fn(&[f64]) -> Result<f64, GeomError> + Sync,
{
    let grid = Grid::new(rule, chart.domain());
    let values: Result<Vec<f64>, GeomError> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (x, w) = grid.decode(idx);
            let dens = chart.volume_density(&x)?;
            Ok(w * dens * f(&x)?)
        })
        .collect();
    Ok(pairwise_sum(&values?))
}

/// `∫_∂M f dy_g` over the declared boundary face with the induced volume
/// element. The integrand receives the full chart point.
pub fn integrate_boundary<F>(
    chart: &MetricChart,
    rule: &QuadratureRule,
    f: F,
) -> Result<f64, GeomError>
where
    F: Fn(&[f64]) -> Result<f64, GeomError> + Sync,
{
    if !chart.has_boundary() {
        return Err(GeomError::NoBoundary(chart.name().to_string()));
    }
    if chart.dim() == 1 {
        let y = chart.boundary_point(&[]);
        return f(&y);
    }
    let grid = Grid::new(rule, &chart.domain()[1..]);
    let values: Result<Vec<f64>, GeomError> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (rest, w) = grid.decode(idx);
            let y = chart.boundary_point(&rest);
            let dens = chart.boundary_volume_density(&y)?;
            Ok(w * dens * f(&y)?)
        })
        .collect();
    Ok(pairwise_sum(&values?))
}

/// Evaluate the metric at every interior and boundary node, propagating the
/// first degeneracy error. Used to pre-check perturbed charts before
/// finite differencing.
pub fn validate_on_nodes(chart: &MetricChart, rule: &QuadratureRule) -> Result<(), GeomError> {
    let grid = Grid::new(rule, chart.domain());
    let check: Result<Vec<()>, GeomError> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (x, _) = grid.decode(idx);
            chart.metric_at(&x).map(|_| ())
        })
        .collect();
    check?;
    if chart.has_boundary() && chart.dim() > 1 {
        let grid = Grid::new(rule, &chart.domain()[1..]);
        let check: Result<Vec<()>, GeomError> = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let (rest, _) = grid.decode(idx);
                let y = chart.boundary_point(&rest);
                chart.metric_at(&y)?;
                chart.boundary_volume_density(&y).map(|_| ())
            })
            .collect();
        check?;
    }
    Ok(())
}

/// Boundary-face sample points of the rule (full chart points), used by the
/// pointwise restriction checks.
pub fn boundary_nodes(chart: &MetricChart, rule: &QuadratureRule) -> Vec<Vec<f64>> {
    if chart.dim() == 1 {
        return vec![chart.boundary_point(&[])];
    }
    let grid = Grid::new(rule, &chart.domain()[1..]);
    (0..grid.len())
        .map(|idx| {
            let (rest, _) = grid.decode(idx);
            chart.boundary_point(&rest)
        })
        .collect()
}
