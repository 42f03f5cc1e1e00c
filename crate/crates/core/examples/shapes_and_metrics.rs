//! Catalog shapes, their geometry, pairwise distances and a JSON round trip.

use shapeflow::catalog::{self, ShapeKind};
use shapeflow::geometry::{distance, AdmissibilityConfig, MetricKind, Shape};

fn main() -> shapeflow::Result<()> {
    let names = ["disk", "ellipse(1.3,0.75)", "square", "rot-square", "perturbed-ball(4,0.1)"];
    let shapes: Vec<Shape> = names.iter().map(|n| catalog::parse(n, ShapeKind::Radial)).collect::<Result<_, _>>()?;
    let adm = AdmissibilityConfig::default();
    for (n, s) in names.iter().zip(&shapes) {
        let rep = s.admissibility(&adm);
        println!("{n:<22} area {:.4} perimeter {:.4} admissible {} binding {:?}", s.area(), s.perimeter(), rep.admissible, rep.binding());
    }
    let metrics = [MetricKind::HausdorffCompact, MetricKind::Char { container: 4.0 }, MetricKind::SobolevRadial];
    for m in &metrics {
        println!("{}", m.name());
        for (i, a) in shapes.iter().enumerate() {
            let row: Vec<String> = shapes.iter().map(|b| distance(a, b, m).map(|d| format!("{d:8.4}"))).collect::<Result<_, _>>()?;
            println!("  {:<22} {}", names[i], row.join(" "));
        }
    }
    let json = shapes[1].to_json()?;
    let back = Shape::from_json(&json)?;
    println!("json round trip distance: {:.2e}", distance(&shapes[1], &back, &MetricKind::SobolevRadial)?);
    Ok(())
}
