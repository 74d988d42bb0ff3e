//! Composite Gauss–Legendre rules.

use std::num::NonZeroUsize;
use std::sync::Arc;

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const DEFAULT_NODES_PER_PANEL: usize = 32;
pub const DEFAULT_PANELS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureParams {
    #[serde(default = "default_nodes")]
    pub nodes_per_panel: usize,
    #[serde(default = "default_panels")]
    pub panels: usize,
}

fn default_nodes() -> usize {
    DEFAULT_NODES_PER_PANEL
}

fn default_panels() -> usize {
    DEFAULT_PANELS
}

impl Default for QuadratureParams {
    fn default() -> Self {
        Self {
            nodes_per_panel: DEFAULT_NODES_PER_PANEL,
            panels: DEFAULT_PANELS,
        }
    }
}

/// Composite Gauss–Legendre rule: each interval is split into `panels`
/// equal panels carrying `nodes_per_panel` Gauss nodes each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QuadratureParams", into = "QuadratureParams")]
pub struct QuadratureRule {
    params: QuadratureParams,
    /// Reference nodes and weights on `[-1, 1]`, ascending.
    reference: Arc<[(f64, f64)]>,
}

impl QuadratureRule {
    pub fn new(nodes_per_panel: usize, panels: usize) -> Result<Self> {
        let degree = NonZeroUsize::new(nodes_per_panel).ok_or_else(|| {
            Error::InvalidArgument("quadrature needs at least one node per panel".into())
        })?;
        if panels == 0 {
            return invalid("quadrature needs at least one panel");
        }
        let mut reference: Vec<(f64, f64)> =
            GaussLegendre::new(degree).as_node_weight_pairs().to_vec();
        reference.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self {
            params: QuadratureParams {
                nodes_per_panel,
                panels,
            },
            reference: reference.into(),
        })
    }

    pub fn nodes_per_panel(&self) -> usize {
        self.params.nodes_per_panel
    }

    pub fn panels(&self) -> usize {
        self.params.panels
    }

    pub fn params(&self) -> QuadratureParams {
        self.params
    }

    /// Total nodes placed on one interval.
    pub fn nodes_per_interval(&self) -> usize {
        self.params.nodes_per_panel * self.params.panels
    }

    /// The same rule with twice as many panels.
    pub fn refined(&self) -> Self {
        Self {
            params: QuadratureParams {
                panels: 2 * self.params.panels,
                ..self.params
            },
            reference: self.reference.clone(),
        }
    }

    /// Nodes and weights on `[a, b]`, ascending in the node.
    pub fn nodes(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let panels = self.params.panels;
        let width = (b - a) / panels as f64;
        let mut out = Vec::with_capacity(self.nodes_per_interval());
        for p in 0..panels {
            let lo = a + p as f64 * width;
            let mid = lo + 0.5 * width;
            for &(x, w) in self.reference.iter() {
                out.push((mid + 0.5 * width * x, 0.5 * width * w));
            }
        }
        out
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes(a, b).into_iter().map(|(x, w)| w * f(x)).sum()
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::new(DEFAULT_NODES_PER_PANEL, DEFAULT_PANELS).expect("default rule is valid")
    }
}

impl TryFrom<QuadratureParams> for QuadratureRule {
    type Error = Error;

    fn try_from(p: QuadratureParams) -> Result<Self> {
        QuadratureRule::new(p.nodes_per_panel, p.panels)
    }
}

impl From<QuadratureRule> for QuadratureParams {
    fn from(rule: QuadratureRule) -> Self {
        rule.params
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn weights_positive_and_nodes_inside() {
        let rule = QuadratureRule::default();
        let nodes = rule.nodes(0.0, 2.0);
        assert_eq!(nodes.len(), 128);
        assert!(nodes.iter().all(|&(x, w)| w > 0.0 && x > 0.0 && x < 2.0));
        assert!(nodes.windows(2).all(|p| p[0].0 < p[1].0));
        let total: f64 = nodes.iter().map(|n| n.1).sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn closed_form_integrals() {
        let rule = QuadratureRule::default();
        assert!((rule.integrate(0.0, 1.0, |_| 1.0) - 1.0).abs() < 1e-14);
        assert!(rule.integrate(0.0, 1.0, |s| (PI * s).cos()).abs() < 1e-12);
        assert!((rule.integrate(0.0, 1.0, |s| (PI * s).cos().powi(2)) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn refinement_is_stable_for_smooth_integrands() {
        let rule = QuadratureRule::default();
        let f = |s: f64| (8.0 * PI * s).cos() * (3.0 * PI * s).cos() + (-s * s).exp();
        let coarse = rule.integrate(0.0, 1.0, f);
        let fine = rule.refined().integrate(0.0, 1.0, f);
        assert!((coarse - fine).abs() < 1e-10);
    }

    #[test]
    fn invalid_rules() {
        assert!(QuadratureRule::new(0, 4).is_err());
        assert!(QuadratureRule::new(8, 0).is_err());
    }
}
