use std::fmt;
use std::f64::consts::PI;

use super::{ConvexBody, RadialDomain, Shape};
use crate::error::{invalid, Result};

/// Constants of the admissible shape class.
///
/// `smoothness` bounds the discrete `C²` surrogate of η; it stands in for
/// the Hölder-norm bound of the continuum class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityConfig {
    pub inradius: f64,
    pub smoothness: f64,
    pub volume_cap: f64,
    pub container: f64,
    /// Cone parameter, carried for reporting only.
    pub epsilon: f64,
}

impl AdmissibilityConfig {
    pub fn new(inradius: f64, smoothness: f64, volume_cap: f64, container: f64) -> Result<Self> {
        let cfg = Self {
            inradius,
            smoothness,
            volume_cap,
            container,
            epsilon: 0.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.inradius > 0.0 && self.inradius <= self.smoothness) {
            return Err(invalid("admissibility needs 0 < inradius <= smoothness bound"));
        }
        if PI * self.inradius * self.inradius > self.volume_cap {
            return Err(invalid("ball of the inradius bound exceeds the volume cap"));
        }
        if !(self.container >= self.inradius) {
            return Err(invalid("container is smaller than the inradius bound"));
        }
        Ok(())
    }
}

impl Default for AdmissibilityConfig {
    fn default() -> Self {
        Self {
            inradius: 0.25,
            smoothness: 60.0,
            volume_cap: 16.0 * PI,
            container: 4.0,
            epsilon: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    Inradius,
    Smoothness,
    Volume,
    Container,
    Convexity,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Constraint::Inradius => "inradius",
            Constraint::Smoothness => "smoothness",
            Constraint::Volume => "volume",
            Constraint::Container => "container",
            Constraint::Convexity => "convexity",
        })
    }
}

/// Outcome of an admissibility test; margins are relative slack per
/// constraint (negative means violated).
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub margins: Vec<(Constraint, f64)>,
}

impl AdmissibilityReport {
    /// The constraint with the smallest margin.
    pub fn binding(&self) -> Option<Constraint> {
        self.margins
            .iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|m| m.0)
    }

    pub fn violated(&self) -> Vec<Constraint> {
        self.margins.iter().filter(|m| m.1 < 0.0).map(|m| m.0).collect()
    }
}

impl Shape {
    pub fn admissibility(&self, cfg: &AdmissibilityConfig) -> AdmissibilityReport {
        let margins = match self {
            Shape::Radial(r) => radial_margins(r, cfg),
            Shape::Convex(c) => convex_margins(c, cfg),
        };
        AdmissibilityReport {
            admissible: margins.iter().all(|m| m.1 >= 0.0),
            margins,
        }
    }

    pub fn is_admissible(&self, cfg: &AdmissibilityConfig) -> bool {
        self.admissibility(cfg).admissible
    }
}

fn radial_margins(r: &RadialDomain, cfg: &AdmissibilityConfig) -> Vec<(Constraint, f64)> {
    let (m0, m1, m2) = r.c2_surrogate();
    let c2 = m0.max(m1).max(m2);
    vec![
        (Constraint::Inradius, r.min_radius() / cfg.inradius - 1.0),
        (Constraint::Smoothness, 1.0 - c2 / cfg.smoothness),
        (Constraint::Volume, 1.0 - r.area() / cfg.volume_cap),
        (Constraint::Container, 1.0 - r.max_radius() / cfg.container),
    ]
}

fn convex_margins(c: &ConvexBody, cfg: &AdmissibilityConfig) -> Vec<(Constraint, f64)> {
    let far = Shape::Convex(c.clone()).max_radius();
    vec![
        (Constraint::Inradius, c.min_support() / cfg.inradius - 1.0),
        (Constraint::Convexity, c.convexity_defect() + c.convexity_tolerance()),
        (Constraint::Volume, 1.0 - c.area() / cfg.volume_cap),
        (Constraint::Container, 1.0 - far / cfg.container),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> AdmissibilityConfig {
        AdmissibilityConfig::new(0.5, 50.0, 2.0 * PI, 3.0).unwrap()
    }

    #[test]
    fn inradius_ball_is_admissible() {
        let s = Shape::Radial(RadialDomain::ball(0.5, 256).unwrap());
        assert!(s.is_admissible(&cfg()));
    }

    #[test]
    fn thin_neck_fails_inradius() {
        let mut c = vec![0.0; 65];
        c[0] = 0.75;
        c[2] = 0.5;
        let s = Shape::Radial(RadialDomain::from_fourier(c, 256).unwrap());
        let rep = s.admissibility(&cfg());
        assert!((s.to_radial().unwrap().min_radius() - 0.25).abs() < 1e-12);
        assert!(!rep.admissible);
        assert_eq!(rep.binding(), Some(Constraint::Inradius));
        assert_eq!(rep.binding().unwrap().to_string(), "inradius");
    }

    #[test]
    fn big_ball_fails_volume() {
        let s = Shape::Radial(RadialDomain::ball(1.5, 256).unwrap());
        let rep = s.admissibility(&cfg());
        assert!(!rep.admissible);
        assert_eq!(rep.binding(), Some(Constraint::Volume));
        assert_eq!(rep.violated(), vec![Constraint::Volume]);
    }

    #[test]
    fn config_invariants() {
        assert!(AdmissibilityConfig::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(AdmissibilityConfig::new(1.0, 2.0, 1.0, 3.0).is_err());
        assert!(AdmissibilityConfig::new(2.0, 1.0, 100.0, 3.0).is_err());
    }
}
