//! λ_R along radial interpolations: second differences, the α estimate and
//! chord margins.

use shapeflow::catalog;
use shapeflow::eigen::BoundaryCondition;
use shapeflow::variation::{alpha_convexity_check, VariationConfig};

fn main() -> shapeflow::Result<()> {
    let cfg = VariationConfig { mesh_factor: 0.02, ..VariationConfig::new(BoundaryCondition::Robin(1.0)) };
    let e0 = catalog::random_radial(200, 0.6)?;
    let e1 = catalog::random_radial(201, 0.6)?;
    let rep = alpha_convexity_check(&e0, &e1, 11, &cfg)?;
    println!("d = {:.6}, alpha estimate {:.6}, pass {}", rep.distance, rep.alpha_estimate, rep.pass);
    println!("{:>5} {:>12} {:>12}", "t", "lambda", "margin");
    for i in 0..rep.t_grid.len() {
        println!("{:>5.2} {:>12.8} {:>12.3e}", rep.t_grid[i], rep.values[i], rep.margins[i]);
    }
    Ok(())
}
