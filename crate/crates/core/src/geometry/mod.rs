//! Shape spaces: star-shaped radial domains and convex bodies, their
//! geometric functionals, metrics and admissibility constraints.

mod admissible;
mod convex;
pub mod fourier;
mod io;
mod metric;
mod radial;

pub use admissible::{AdmissibilityConfig, AdmissibilityReport, Constraint};
pub use convex::ConvexBody;
pub use io::ShapeFile;
pub use metric::{char_distance_raster, distance, MetricKind};
pub use radial::RadialDomain;

use crate::error::Result;

/// Either kind of shape handled by the flow engine.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Radial(RadialDomain),
    Convex(ConvexBody),
}

impl Shape {
    pub fn area(&self) -> f64 {
        match self {
            Shape::Radial(r) => r.area(),
            Shape::Convex(c) => c.area(),
        }
    }

    pub fn perimeter(&self) -> f64 {
        match self {
            Shape::Radial(r) => r.perimeter(),
            Shape::Convex(c) => c.perimeter(),
        }
    }

    /// Polar-graph representation used for meshing and set metrics.
    pub fn to_radial(&self) -> Result<RadialDomain> {
        match self {
            Shape::Radial(r) => Ok(r.clone()),
            Shape::Convex(c) => c.to_radial(),
        }
    }

    pub fn max_radius(&self) -> f64 {
        match self {
            Shape::Radial(r) => r.max_radius(),
            // farthest point of a convex body containing the origin
            Shape::Convex(c) => c
                .outer_polygon()
                .iter()
                .map(|p| p[0].hypot(p[1]))
                .fold(0.0, f64::max),
        }
    }

    pub fn diameter_bound(&self) -> f64 {
        2.0 * self.max_radius()
    }

    pub fn rescale_to_area(&self, target: f64) -> Result<Shape> {
        Ok(match self {
            Shape::Radial(r) => Shape::Radial(r.rescale_to_area(target)?),
            Shape::Convex(c) => Shape::Convex(c.rescale_to_area(target)?),
        })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Shape::Radial(_) => "radial",
            Shape::Convex(_) => "support",
        }
    }
}

impl From<RadialDomain> for Shape {
    fn from(r: RadialDomain) -> Self {
        Shape::Radial(r)
    }
}

impl From<ConvexBody> for Shape {
    fn from(c: ConvexBody) -> Self {
        Shape::Convex(c)
    }
}
