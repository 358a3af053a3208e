//! Manifold spec files: a JSON description of a chart (plus an optional
//! perturbation) that the subcommands turn into geometry.

use anyhow::{anyhow, bail, Context, Result};
use cgb_core::expr::{parse_expression, Expr};
use cgb_core::geometry::MetricChart;
use cgb_core::tensor::Signature;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MetricEntry {
    pub i: usize,
    pub j: usize,
    pub expr: String,
}

/// On-disk chart description. Metric entries are 1-based upper-triangle
/// `(i, j, expr)` records; omitted entries are zero. The optional boundary
/// flag declares the lower face of coordinate 1 as the boundary, with
/// coordinate 1 increasing inward.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ManifoldSpec {
    pub name: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<Vec<i8>>,
    pub coords: Vec<String>,
    pub domain: Vec<[f64; 2]>,
    pub metric: Vec<MetricEntry>,
    #[serde(default)]
    pub boundary: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<Vec<MetricEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_characteristic: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume_weight: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<BTreeMap<String, f64>>,
}

impl ManifoldSpec {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read spec file {}", path.display()))?;
        let spec: ManifoldSpec = serde_json::from_str(&text)
            .with_context(|| format!("cannot parse spec file {}", path.display()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            bail!("dim must be at least 1");
        }
        if self.coords.len() != self.dim {
            bail!(
                "expected {} coordinate names, found {}",
                self.dim,
                self.coords.len()
            );
        }
        if self.domain.len() != self.dim {
            bail!(
                "expected {} domain intervals, found {}",
                self.dim,
                self.domain.len()
            );
        }
        if let Some(s) = &self.signature {
            if s.len() != self.dim {
                bail!("signature must list {} signs", self.dim);
            }
        }
        for (k, name) in self.coords.iter().enumerate() {
            if self.coords[..k].contains(name) {
                bail!("duplicate coordinate `{name}`");
            }
            if let Some(params) = &self.params {
                if params.contains_key(name) {
                    bail!("`{name}` is declared both as a coordinate and a parameter");
                }
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.metric {
            if e.i < 1 || e.j < 1 || e.i > self.dim || e.j > self.dim || e.i > e.j {
                bail!(
                    "metric entry ({}, {}) must satisfy 1 <= i <= j <= {}",
                    e.i,
                    e.j,
                    self.dim
                );
            }
            if !seen.insert((e.i, e.j)) {
                bail!("duplicate metric entry ({}, {})", e.i, e.j);
            }
        }
        Ok(())
    }

    fn parse_names(&self) -> (Vec<&str>, Vec<f64>) {
        let mut names: Vec<&str> = self.coords.iter().map(|s| s.as_str()).collect();
        let mut values = Vec::new();
        if let Some(params) = &self.params {
            for (k, v) in params {
                names.push(k.as_str());
                values.push(*v);
            }
        }
        (names, values)
    }

    fn parse_entry(&self, source: &str, what: &str) -> Result<Expr> {
        let (names, param_values) = self.parse_names();
        let e = parse_expression(source, &names).map_err(|e| anyhow!("{what}: {e}"))?;
        Ok(e.resolve_tail(self.dim, &param_values))
    }

    /// Build the chart (signature defaults to Riemannian).
    pub fn to_chart(&self) -> Result<MetricChart> {
        let signature = match &self.signature {
            Some(s) => Signature::from_signs(s.clone()).map_err(|e| anyhow!("{e}"))?,
            None => Signature::riemannian(self.dim),
        };
        let mut chart = MetricChart::new(
            self.name.clone(),
            self.coords.clone(),
            self.domain.iter().map(|d| (d[0], d[1])).collect(),
            signature,
            self.boundary,
        )
        .map_err(|e| anyhow!("{e}"))?;
        for e in &self.metric {
            let expr = self.parse_entry(&e.expr, &format!("metric entry ({}, {})", e.i, e.j))?;
            chart
                .set_entry(e.i, e.j, expr)
                .map_err(|e| anyhow!("{e}"))?;
        }
        if let Some(w) = &self.volume_weight {
            chart.set_volume_weight(Some(self.parse_entry(w, "volume weight")?));
        }
        Ok(chart)
    }

    /// Upper-triangle perturbation expressions aligned with the chart's
    /// entry layout, if the spec declares a perturbation.
    pub fn perturbation_entries(&self) -> Result<Option<Vec<Expr>>> {
        let Some(list) = &self.perturbation else {
            return Ok(None);
        };
        let mut v = vec![Expr::constant(0.0); self.dim * (self.dim + 1) / 2];
        let mut seen = std::collections::BTreeSet::new();
        for e in list {
            if e.i < 1 || e.j < 1 || e.i > self.dim || e.j > self.dim || e.i > e.j {
                bail!(
                    "perturbation entry ({}, {}) must satisfy 1 <= i <= j <= {}",
                    e.i,
                    e.j,
                    self.dim
                );
            }
            if !seen.insert((e.i, e.j)) {
                bail!("duplicate perturbation entry ({}, {})", e.i, e.j);
            }
            let idx = (e.i - 1) * self.dim - (e.i - 1) * e.i / 2 + (e.j - 1);
            v[idx] =
                self.parse_entry(&e.expr, &format!("perturbation entry ({}, {})", e.i, e.j))?;
        }
        Ok(Some(v))
    }
}
