//! Disk eigenvalue errors against the mesh part of the slack model, and
//! the one-step error of implicit Euler on `y' = -y` against its step part.

use shapeflow::eigen::{disk_oracle, solve, BoundaryCondition, SolveOptions};
use shapeflow::flow::SlackModel;
use shapeflow::geometry::RadialDomain;
use shapeflow::mesh::triangulate;

fn main() -> shapeflow::Result<()> {
    let s = SlackModel::CALIBRATED;
    let disk = RadialDomain::ball(1.0, 256)?;
    println!("{:>8} {:>10} {:>18} {:>11} {:>11}", "target", "h/diam", "bc", "rel err", "c2 h^2");
    for target in [0.16, 0.08, 0.04, 0.02] {
        let m = triangulate(&disk, target)?;
        let h = m.h_max / 2.0;
        for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Robin(1.0)] {
            let exact = disk_oracle(1.0, bc)?;
            let e = solve(&m, bc, SolveOptions::default())?.lambda1;
            println!("{target:>8} {h:>10.4} {:>18} {:>11.3e} {:>11.3e}", bc.to_string(), (e - exact).abs() / exact, s.value(0.0, h));
        }
    }
    println!();
    println!("{:>6} {:>14} {:>11}", "h", "euler rel err", "c1 h");
    for h in [0.2f64, 0.1, 0.05, 0.025] {
        let n = (1.0 / h) as i32;
        let err = ((1.0 + h).powi(-n) - (-1.0f64).exp()).abs() / (-1.0f64).exp();
        println!("{h:>6} {err:>14.3e} {:>11.3e}", s.value(h, 0.0));
    }
    Ok(())
}
