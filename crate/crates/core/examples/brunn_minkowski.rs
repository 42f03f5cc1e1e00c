//! Brunn-Minkowski margins of λ_D along Minkowski combinations, plus the
//! Robin data that only gets reported.

use shapeflow::catalog;
use shapeflow::eigen::BoundaryCondition;
use shapeflow::flow::SlackModel;
use shapeflow::geometry::ConvexBody;
use shapeflow::variation::brunn_minkowski_check;

fn print(label: &str, k0: &ConvexBody, k1: &ConvexBody, bc: BoundaryCondition) -> shapeflow::Result<()> {
    let ts: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let rep = brunn_minkowski_check(k0, k1, &ts, bc, 0.02, &SlackModel::CALIBRATED)?;
    println!("{label} [{}], slack {:.2e}, verdict {:?}", rep.bc, rep.slack, rep.verdict);
    for r in &rep.rows {
        println!("  t={:.1} lambda={:>10.5} strong={:>10.3e} weak={:>10.3e}", r.t, r.lambda, r.strong_margin, r.weak_margin);
    }
    Ok(())
}

fn main() -> shapeflow::Result<()> {
    let n = 256;
    print("square vs rotated square", &ConvexBody::square(1.0, n)?, &ConvexBody::rotated_square(1.0, n)?, BoundaryCondition::Dirichlet)?;
    print("two balls", &ConvexBody::ball([0.0, 0.0], 1.0, n)?, &ConvexBody::ball([0.3, 0.1], 1.5, n)?, BoundaryCondition::Dirichlet)?;
    let (k0, k1) = (catalog::random_convex(100)?, catalog::random_convex(101)?);
    print("random pair", &k0, &k1, BoundaryCondition::Dirichlet)?;
    print("random pair", &k0, &k1, BoundaryCondition::Robin(1.0))?;
    Ok(())
}
