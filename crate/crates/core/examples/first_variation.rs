//! Boundary-integral first variation against Richardson finite differences.

use shapeflow::catalog;
use shapeflow::eigen::BoundaryCondition;
use shapeflow::experiment::random_field;
use shapeflow::variation::{finite_diff_variation, first_variation, PerturbationField, VariationConfig};

fn main() -> shapeflow::Result<()> {
    println!("{:>4} {:<12} {:>14} {:>14} {:>10}", "seed", "bc", "boundary", "finite diff", "rel");
    for seed in 0..5 {
        let d = catalog::random_radial(seed, 0.6)?;
        let f = random_field(&d, seed);
        for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Robin(1.0)] {
            let cfg = VariationConfig::new(bc);
            let bw = first_variation(&d, &f, &cfg)?;
            let fd = finite_diff_variation(&d, &f, &cfg, 1)?;
            println!("{seed:>4} {:<12} {bw:>14.8} {fd:>14.8} {:>10.2e}", bc.to_string(), (bw - fd).abs() / fd.abs());
        }
    }

    let d = catalog::random_radial(0, 0.6)?;
    let cfg = VariationConfig::new(BoundaryCondition::Robin(1.0));
    let f = random_field(&d, 0);
    let second = finite_diff_variation(&d, &f, &cfg, 2)?;
    let doubled = finite_diff_variation(&d, &f.scaled(2.0), &cfg, 2)?;
    println!("second variation {second:.6}; doubled field {doubled:.6} (ratio {:.6})", doubled / second);
    let n = f.w12_norm(&d);
    println!("|second| / |v|^2 = {:.6}", second.abs() / (n * n));

    let ball = shapeflow::geometry::RadialDomain::ball(1.0, 256)?;
    let cfg = VariationConfig::new(BoundaryCondition::Dirichlet);
    let dil = first_variation(&ball, &PerturbationField::dilation(256), &cfg)?;
    println!("dilation of the unit disk: {dil:.6} (exact -2 j0^2 = {:.6})", -2.0 * 2.404825557695773f64.powi(2));
    Ok(())
}
