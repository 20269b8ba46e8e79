//! JSON form of Möbius transforms as generator words.
//!
//! ```json
//! {"dim": 3, "word": [
//!   {"generator": "rotation", "i": 1, "j": 2, "angle": 2.03},
//!   {"generator": "inversion"},
//!   {"generator": "dilation", "factor": 1.74},
//!   {"generator": "translation", "by": [0.76, 0.54, 0.0]}
//! ]}
//! ```
//!
//! The word is applied right to left, as composition is written.

use hypclif_core::mobius::Generator;
use hypclif_core::{Point, VahlenTransform};
use serde::{Deserialize, Serialize};

use crate::config::ConfigError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorDocument {
    Translation { by: Vec<f64> },
    Dilation { factor: f64 },
    Rotation { i: usize, j: usize, angle: f64 },
    Inversion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformDocument {
    pub dim: usize,
    pub word: Vec<GeneratorDocument>,
}

impl From<&Generator> for GeneratorDocument {
    fn from(g: &Generator) -> Self {
        match g {
            Generator::Translation(t) => GeneratorDocument::Translation {
                by: t.coords().to_vec(),
            },
            Generator::Dilation(s) => GeneratorDocument::Dilation { factor: *s },
            Generator::Rotation { i, j, angle } => GeneratorDocument::Rotation {
                i: *i,
                j: *j,
                angle: *angle,
            },
            Generator::Inversion => GeneratorDocument::Inversion,
        }
    }
}

impl From<&GeneratorDocument> for Generator {
    fn from(g: &GeneratorDocument) -> Self {
        match g {
            GeneratorDocument::Translation { by } => Generator::Translation(Point::from_slice(by)),
            GeneratorDocument::Dilation { factor } => Generator::Dilation(*factor),
            GeneratorDocument::Rotation { i, j, angle } => Generator::Rotation {
                i: *i,
                j: *j,
                angle: *angle,
            },
            GeneratorDocument::Inversion => Generator::Inversion,
        }
    }
}

impl From<&VahlenTransform> for TransformDocument {
    fn from(t: &VahlenTransform) -> Self {
        TransformDocument {
            dim: t.dim(),
            word: t.word().iter().map(GeneratorDocument::from).collect(),
        }
    }
}

impl TransformDocument {
    /// Rebuild the transform; the word is validated against `dim`.
    pub fn transform(&self) -> Result<VahlenTransform, ConfigError> {
        VahlenTransform::from_word(self.dim, self.word.iter().map(Generator::from).collect())
            .map_err(|e| ConfigError(format!("invalid transform: {e}")))
    }
}

/// Serialize a list of transforms.
pub fn to_json(transforms: &[VahlenTransform]) -> Result<String, ConfigError> {
    let docs: Vec<TransformDocument> = transforms.iter().map(TransformDocument::from).collect();
    serde_json::to_string_pretty(&docs).map_err(|e| ConfigError(e.to_string()))
}

/// Parse a list written by [`to_json`].
pub fn from_json(text: &str) -> Result<Vec<VahlenTransform>, ConfigError> {
    let docs: Vec<TransformDocument> =
        serde_json::from_str(text).map_err(|e| ConfigError(format!("malformed transform list: {e}")))?;
    docs.iter().map(TransformDocument::transform).collect()
}
