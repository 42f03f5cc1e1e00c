//! With β < 0 the Robin eigenvalue drops without bound as sawtooth teeth
//! multiply at a fixed Hausdorff distance, and the flow refuses to start.

use std::f64::consts::PI;

use shapeflow::eigen::BoundaryCondition;
use shapeflow::flow::FlowConfig;
use shapeflow::geometry::MetricKind;
use shapeflow::negbeta::negative_beta_demo;

fn main() -> shapeflow::Result<()> {
    let rep = negative_beta_demo(-1.0, 0.1, &[4, 8, 16, 32, 64], 24)?;
    println!("{:>6} {:>10} {:>10} {:>12}", "teeth", "perimeter", "hausdorff", "lambda1");
    for l in &rep.levels {
        println!("{:>6} {:>10.4} {:>10.4} {:>12.6}", l.teeth, l.perimeter, l.hausdorff, l.lambda);
    }
    println!("strictly decreasing: {}", rep.strictly_decreasing);
    let cfg = FlowConfig::new(0.1, 1.0, MetricKind::SobolevRadial, BoundaryCondition::Robin(-1.0)).with_volume(PI);
    if let Err(e) = cfg.validate() {
        println!("flow: {e}");
    }
    Ok(())
}
