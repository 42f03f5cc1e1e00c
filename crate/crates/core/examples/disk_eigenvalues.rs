//! FEM eigenvalues of the unit disk against the shooting oracle.

use std::time::Instant;

use shapeflow::eigen::{disk_oracle, solve, BoundaryCondition, SolveOptions};
use shapeflow::geometry::RadialDomain;
use shapeflow::mesh::triangulate;

fn main() -> shapeflow::Result<()> {
    let disk = RadialDomain::ball(1.0, 256)?;
    let coarse = triangulate(&disk, 0.04)?;
    let fine = coarse.refine(&disk)?;
    println!("mesh: {} vertices (h_max {:.4}), refined {} vertices", coarse.n_vertices(), coarse.h_max, fine.n_vertices());
    println!("{:<18} {:>12} {:>12} {:>9} {:>12} {:>9} {:>8}", "bc", "oracle", "coarse", "rel", "refined", "rel", "secs");
    let bcs = [
        BoundaryCondition::Dirichlet,
        BoundaryCondition::Robin(0.5),
        BoundaryCondition::Robin(1.0),
        BoundaryCondition::Robin(10.0),
    ];
    for bc in bcs {
        let exact = disk_oracle(1.0, bc)?;
        let t = Instant::now();
        let a = solve(&coarse, bc, SolveOptions::default())?;
        let b = solve(&fine, bc, SolveOptions::default())?;
        println!(
            "{:<18} {:>12.8} {:>12.8} {:>9.2e} {:>12.8} {:>9.2e} {:>8.3}",
            bc.to_string(),
            exact,
            a.lambda1,
            (a.lambda1 - exact).abs() / exact,
            b.lambda1,
            (b.lambda1 - exact).abs() / exact,
            t.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
