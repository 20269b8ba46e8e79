//! JSON form of quadrature rules, for caching rules between runs.
//!
//! ```json
//! { "kind": "surface", "dim": 3, "spacing": 0.098,
//!   "nodes": [[x1, x2, x3], ...], "normals": [[...], ...], "weights": [w, ...] }
//! { "kind": "volume", "dim": 3, "spacing": 0.098,
//!   "nodes": [[...], ...], "weights": [...] }
//! ```
//!
//! Arrays are parallel; `normals` are outward unit vectors.

use hypclif_core::{Point, SurfaceRule, VolumeRule};
use serde::{Deserialize, Serialize};

use crate::config::ConfigError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RuleDocument {
    Surface {
        dim: usize,
        spacing: f64,
        nodes: Vec<Vec<f64>>,
        normals: Vec<Vec<f64>>,
        weights: Vec<f64>,
    },
    Volume {
        dim: usize,
        spacing: f64,
        nodes: Vec<Vec<f64>>,
        weights: Vec<f64>,
    },
}

fn coords(points: &[Point]) -> Vec<Vec<f64>> {
    points.iter().map(|p| p.coords().to_vec()).collect()
}

fn points(dim: usize, rows: &[Vec<f64>]) -> Result<Vec<Point>, ConfigError> {
    rows.iter()
        .map(|r| {
            if r.len() == dim {
                Ok(Point::from_slice(r))
            } else {
                Err(ConfigError(format!(
                    "rule point has {} coordinates, expected {dim}",
                    r.len()
                )))
            }
        })
        .collect()
}

fn core_err(e: hypclif_core::Error) -> ConfigError {
    ConfigError(format!("invalid rule: {e}"))
}

impl From<&SurfaceRule> for RuleDocument {
    fn from(r: &SurfaceRule) -> Self {
        RuleDocument::Surface {
            dim: r.dim(),
            spacing: r.spacing(),
            nodes: coords(r.nodes()),
            normals: coords(r.normals()),
            weights: r.weights().to_vec(),
        }
    }
}

impl From<&VolumeRule> for RuleDocument {
    fn from(r: &VolumeRule) -> Self {
        RuleDocument::Volume {
            dim: r.dim(),
            spacing: r.spacing(),
            nodes: coords(r.nodes()),
            weights: r.weights().to_vec(),
        }
    }
}

impl RuleDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("rules contain only numbers")
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError(format!("invalid rule document: {e}")))
    }

    pub fn surface(&self) -> Result<SurfaceRule, ConfigError> {
        match self {
            RuleDocument::Surface {
                dim,
                spacing,
                nodes,
                normals,
                weights,
            } => SurfaceRule::from_parts(points(*dim, nodes)?, points(*dim, normals)?, weights.clone(), *spacing)
                .map_err(core_err),
            RuleDocument::Volume { .. } => Err(ConfigError("expected a surface rule".into())),
        }
    }

    pub fn volume(&self) -> Result<VolumeRule, ConfigError> {
        match self {
            RuleDocument::Volume {
                dim,
                spacing,
                nodes,
                weights,
            } => VolumeRule::from_parts(points(*dim, nodes)?, weights.clone(), *spacing).map_err(core_err),
            RuleDocument::Surface { .. } => Err(ConfigError("expected a volume rule".into())),
        }
    }
}
