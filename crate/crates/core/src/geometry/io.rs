use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ConvexBody, RadialDomain, Shape};
use crate::error::{invalid, Result};

/// On-disk shape record.
///
/// `kind` is `"radial"` (with `fourier`) or `"support"`; `samples` are the
/// radius or support values at `n_samples` uniform angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeFile {
    pub kind: String,
    pub n_samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fourier: Option<Vec<f64>>,
    pub samples: Vec<f64>,
}

impl From<&Shape> for ShapeFile {
    fn from(s: &Shape) -> Self {
        match s {
            Shape::Radial(r) => ShapeFile {
                kind: "radial".into(),
                n_samples: r.n_samples(),
                fourier: Some(r.fourier().to_vec()),
                samples: r.samples().to_vec(),
            },
            Shape::Convex(c) => ShapeFile {
                kind: "support".into(),
                n_samples: c.n_samples(),
                fourier: None,
                samples: c.support().to_vec(),
            },
        }
    }
}

impl TryFrom<ShapeFile> for Shape {
    type Error = crate::error::Error;

    fn try_from(f: ShapeFile) -> Result<Shape> {
        if f.samples.len() != f.n_samples {
            return Err(invalid(format!(
                "n_samples = {} but {} samples given",
                f.n_samples,
                f.samples.len()
            )));
        }
        match f.kind.as_str() {
            "radial" => {
                let r = match f.fourier {
                    Some(c) => RadialDomain::from_parts(c, f.samples)?,
                    None => RadialDomain::interpolating(&f.samples)?,
                };
                Ok(Shape::Radial(r))
            }
            "support" => Ok(Shape::Convex(ConvexBody::new(f.samples)?)),
            other => Err(invalid(format!("unknown shape kind {other:?}"))),
        }
    }
}

impl Shape {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ShapeFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Shape> {
        let f: ShapeFile = serde_json::from_str(text)?;
        Shape::try_from(f)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Shape> {
        Shape::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_records() {
        let bad = r#"{"kind":"blob","n_samples":2,"samples":[1,1]}"#;
        assert!(Shape::from_json(bad).is_err());
        let short = r#"{"kind":"support","n_samples":64,"samples":[1,1]}"#;
        assert!(Shape::from_json(short).is_err());
    }
}
