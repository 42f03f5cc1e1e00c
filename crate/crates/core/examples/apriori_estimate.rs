//! Squared distance of coarse implicit Euler end points to a fine
//! reference, against `(t/n)(φ(u0) - φ_{t/n}(u0))`.

use shapeflow::catalog::{self, ShapeKind};
use shapeflow::eigen::BoundaryCondition;
use shapeflow::flow::{apriori_check, FlowConfig, SlackModel};
use shapeflow::geometry::MetricKind;

fn main() -> shapeflow::Result<()> {
    let u0 = catalog::parse("ellipse(1.5,0.7)", ShapeKind::Convex)?;
    let cfg = FlowConfig::new(0.25, 1.0, MetricKind::LpSupport { p: 2.0 }, BoundaryCondition::Dirichlet);
    let rows = apriori_check(&u0, 1.0, &[2, 4, 16], &cfg, &SlackModel::CALIBRATED)?;
    println!("{:>4} {:>11} {:>11} {:>11} {:>5}", "n", "lhs", "rhs", "slack", "ok");
    for r in rows {
        println!("{:>4} {:>11.3e} {:>11.3e} {:>11.3e} {:>5}", r.n, r.lhs, r.rhs, r.slack, r.pass);
    }
    Ok(())
}
