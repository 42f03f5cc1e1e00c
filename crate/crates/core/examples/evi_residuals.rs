//! Discrete EVI residuals of a Dirichlet flow of a convex body against
//! test points sharing its parameter space.

use shapeflow::catalog;
use shapeflow::eigen::BoundaryCondition;
use shapeflow::experiment::evi_test_points;
use shapeflow::flow::{evi_residual, Flow, FlowConfig, SlackModel};
use shapeflow::geometry::{MetricKind, Shape};

fn main() -> shapeflow::Result<()> {
    let u0: Shape = catalog::random_convex(1)?.into();
    let points = evi_test_points(&u0, 5, 7)?;
    for h in [0.1, 0.05] {
        let flow = Flow::new(&u0, FlowConfig::new(h, 0.3, MetricKind::LpSupport { p: 2.0 }, BoundaryCondition::Dirichlet))?;
        let traj = flow.run(&u0)?;
        for (i, z) in points.iter().enumerate() {
            let rep = evi_residual(&traj, z, 0.0, &flow, &SlackModel::CALIBRATED)?;
            let worst = rep.residuals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            println!("h={h:<5} z{i}: max residual {worst:>11.3e}, positive part {:.1e} (bound {:.2e})", rep.max_positive, rep.bound);
        }
    }
    Ok(())
}
