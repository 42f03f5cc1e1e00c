//! Named shapes and seeded random shape generators.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::geometry::{fourier, ConvexBody, RadialDomain, Shape};

/// Which representation a catalog entry should be built in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeKind {
    Radial,
    Convex,
}

/// Parse `disk`, `ellipse(a,b)`, `square`, `rot-square` (alias
/// `square-rot45`) or `perturbed-ball(k,amplitude)`.
///
/// Squares are side 2 and the disk has radius 1. `kind` picks the
/// representation; a radial square is the polar graph of the convex one.
pub fn parse(name: &str, kind: ShapeKind) -> Result<Shape> {
    let n = RadialDomain::DEFAULT_SAMPLES;
    let (head, args) = split_args(name)?;
    let arity = |k: usize| -> Result<()> {
        if args.len() == k {
            Ok(())
        } else {
            Err(invalid(format!("shape '{head}' takes {k} arguments, got {}", args.len())))
        }
    };
    let convex = match head.as_str() {
        "disk" | "ball" => {
            arity(0)?;
            return match kind {
                ShapeKind::Radial => Ok(RadialDomain::ball(1.0, n)?.into()),
                ShapeKind::Convex => Ok(ConvexBody::ball([0.0, 0.0], 1.0, n)?.into()),
            };
        }
        "ellipse" => {
            arity(2)?;
            let (a, b) = (args[0], args[1]);
            if !(a > 0.0 && b > 0.0) {
                return Err(invalid("ellipse semi-axes must be positive"));
            }
            if kind == ShapeKind::Radial {
                let r = move |t: f64| a * b / ((b * t.cos()).powi(2) + (a * t.sin()).powi(2)).sqrt();
                return Ok(RadialDomain::from_fn(r, n, n / 2)?.into());
            }
            ConvexBody::ellipse(a, b, n)?
        }
        "square" => {
            arity(0)?;
            ConvexBody::square(1.0, n)?
        }
        "rot-square" | "square-rot45" => {
            arity(0)?;
            ConvexBody::rotated_square(1.0, n)?
        }
        "perturbed-ball" => {
            arity(2)?;
            let (k, amp) = (args[0], args[1]);
            if k < 0.0 || k.fract() != 0.0 {
                return Err(invalid("perturbed-ball mode must be a nonnegative integer"));
            }
            let k = k as usize;
            match kind {
                ShapeKind::Radial => return Ok(RadialDomain::perturbed_ball(1.0, k, amp)?.into()),
                ShapeKind::Convex => {
                    let s = fourier::uniform_angles(n)
                        .into_iter()
                        .map(|t| 1.0 + amp * (k as f64 * t).cos())
                        .collect();
                    ConvexBody::new(s)?
                }
            }
        }
        other => return Err(invalid(format!("unknown shape '{other}'"))),
    };
    match kind {
        ShapeKind::Convex => Ok(convex.into()),
        ShapeKind::Radial => Ok(convex.to_radial()?.into()),
    }
}

fn split_args(name: &str) -> Result<(String, Vec<f64>)> {
    let name = name.trim();
    let Some(open) = name.find('(') else {
        return Ok((name.to_string(), vec![]));
    };
    let inner = name[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| invalid(format!("unbalanced parentheses in '{name}'")))?;
    let args = inner
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| invalid(format!("bad shape argument '{s}' in '{name}'"))))
        .collect::<Result<_>>()?;
    Ok((name[..open].trim().to_string(), args))
}

/// Smooth star-shaped domain `1 + Σ_{m=2}^{6} (a_m cos mθ + b_m sin mθ)`
/// with `|a_m|, |b_m| ≤ amplitude/m²`, rescaled to area `π`.
pub fn random_radial(seed: u64, amplitude: f64) -> Result<RadialDomain> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = RadialDomain::DEFAULT_MODES;
    let mut c = vec![0.0; 2 * k + 1];
    c[0] = 1.0;
    for m in 2..=6 {
        let scale = amplitude / (m * m) as f64;
        c[m] = scale * rng.gen_range(-1.0..1.0);
        c[k + m] = scale * rng.gen_range(-1.0..1.0);
    }
    RadialDomain::from_fourier(c, RadialDomain::DEFAULT_SAMPLES)?.rescale_to_area(PI)
}

/// Convex body with support `r + ⟨c, u⟩ + Σ_{m=2}^{5} (a_m cos mθ + b_m sin mθ)`;
/// the coefficients keep `ρ + ρ''` positive, and `c` keeps the origin inside.
pub fn random_convex(seed: u64) -> Result<ConvexBody> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = RadialDomain::DEFAULT_SAMPLES;
    let r = rng.gen_range(0.8..1.3);
    let center = [rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2)];
    let mut modes = Vec::new();
    for m in 2..=5usize {
        let cap = 0.8 * r / ((m * m - 1) as f64 * 4.0 * std::f64::consts::SQRT_2);
        modes.push((m as f64, cap * rng.gen_range(-1.0..1.0), cap * rng.gen_range(-1.0..1.0)));
    }
    let s = fourier::uniform_angles(n)
        .into_iter()
        .map(|t| {
            r + center[0] * t.cos()
                + center[1] * t.sin()
                + modes.iter().map(|(m, a, b)| a * (m * t).cos() + b * (m * t).sin()).sum::<f64>()
        })
        .collect();
    ConvexBody::new(s)
}
