//! Scaling laws of the first eigenvalue and the Faber-Krahn inequality on
//! random star-shaped domains of area π.

use shapeflow::catalog::{self, ShapeKind};
use shapeflow::eigen::{disk_oracle, solve, BoundaryCondition, SolveOptions};
use shapeflow::geometry::RadialDomain;
use shapeflow::mesh::triangulate;

fn lambda(d: &RadialDomain, bc: BoundaryCondition) -> shapeflow::Result<f64> {
    let m = triangulate(d, 0.04 * d.max_radius())?;
    Ok(solve(&m, bc, SolveOptions::default())?.lambda1)
}

fn main() -> shapeflow::Result<()> {
    println!("{:<24} {:>12} {:>14} {:>14}", "shape", "lambda_D", "4 lambda_D(2x)", "r lambda_R(rx)");
    for name in ["disk", "ellipse(1.25,0.8)", "perturbed-ball(3,0.15)"] {
        let d = catalog::parse(name, ShapeKind::Radial)?.to_radial()?;
        let l = lambda(&d, BoundaryCondition::Dirichlet)?;
        let l2 = lambda(&d.scaled(2.0)?, BoundaryCondition::Dirichlet)?;
        let r = lambda(&d, BoundaryCondition::Robin(1.0))?;
        let r2 = lambda(&d.scaled(2.0)?, BoundaryCondition::Robin(1.0))?;
        println!("{name:<24} {l:>12.6} {:>14.6} {:>6.4} <= {r:.4}", 4.0 * l2, 2.0 * r2);
    }

    let ball_d = disk_oracle(1.0, BoundaryCondition::Dirichlet)?;
    let ball_r = disk_oracle(1.0, BoundaryCondition::Robin(1.0))?;
    let (mut min_d, mut min_r) = (f64::INFINITY, f64::INFINITY);
    for seed in 0..20 {
        let d = catalog::random_radial(seed, 0.6)?;
        min_d = min_d.min(lambda(&d, BoundaryCondition::Dirichlet)? / ball_d);
        min_r = min_r.min(lambda(&d, BoundaryCondition::Robin(1.0))? / ball_r);
    }
    println!("20 random domains of area pi: min lambda/lambda(B1) = {min_d:.4} (Dirichlet), {min_r:.4} (Robin)");
    Ok(())
}
