//! Flows from one start at decreasing step sizes: distances between the
//! piecewise-constant interpolants shrink with h.

use shapeflow::catalog;
use shapeflow::eigen::BoundaryCondition;
use shapeflow::flow::{gmm_diagnostic, FlowConfig};
use shapeflow::geometry::{MetricKind, Shape};

fn main() -> shapeflow::Result<()> {
    let u0: Shape = catalog::random_convex(3)?.into();
    let cfg = FlowConfig::new(0.2, 0.4, MetricKind::LpSupport { p: 2.0 }, BoundaryCondition::Dirichlet);
    let table = gmm_diagnostic(&u0, &cfg, &[0.2, 0.1, 0.05], &[0.2, 0.4])?;
    println!("{:>5} {:>7} {:>7} {:>10}", "t", "h", "h'", "distance");
    for e in table {
        println!("{:>5} {:>7} {:>7} {:>10.3e}", e.t, e.h_coarse, e.h_fine, e.distance);
    }
    Ok(())
}
