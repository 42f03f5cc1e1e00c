use std::f64::consts::PI;

use proptest::prelude::*;
use shapeflow::catalog;
use shapeflow::eigen::BoundaryCondition;
use shapeflow::flow::SlackModel;
use shapeflow::geometry::{distance, fourier, ConvexBody, MetricKind, RadialDomain, Shape};
use shapeflow::variation::{self, PerturbationField, VariationConfig};
use shapeflow::verify::variation_pairs;

fn radial(seed: u64) -> Shape {
    catalog::random_radial(seed, 0.6).unwrap().into()
}

fn radial_metrics() -> Vec<MetricKind> {
    vec![
        MetricKind::SobolevRadial,
        MetricKind::HausdorffCompact,
        MetricKind::HausdorffOpen { container: 4.0 },
        MetricKind::Char { container: 4.0 },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn metrics_are_symmetric_and_satisfy_the_triangle_inequality(a in 0u64..500, b in 0u64..500, c in 0u64..500) {
        let (x, y, z) = (radial(a), radial(b), radial(c));
        for m in radial_metrics() {
            let xy = distance(&x, &y, &m).unwrap();
            let yx = distance(&y, &x, &m).unwrap();
            let xz = distance(&x, &z, &m).unwrap();
            let zy = distance(&z, &y, &m).unwrap();
            prop_assert!((xy - yx).abs() <= 1e-12 * xy.max(1.0), "{m:?}: {xy} vs {yx}");
            prop_assert!(xy <= xz + zy + 1e-12, "{m:?}: {xy} > {xz} + {zy}");
            prop_assert!(distance(&x, &x, &m).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn l2_support_metric_is_symmetric_and_satisfies_the_triangle_inequality(a in 0u64..500, b in 0u64..500, c in 0u64..500) {
        let m = MetricKind::LpSupport { p: 2.0 };
        let s = |seed| -> Shape { catalog::random_convex(seed).unwrap().into() };
        let (x, y, z) = (s(a), s(b), s(c));
        let xy = distance(&x, &y, &m).unwrap();
        prop_assert!((xy - distance(&y, &x, &m).unwrap()).abs() <= 1e-14);
        prop_assert!(xy <= distance(&x, &z, &m).unwrap() + distance(&z, &y, &m).unwrap() + 1e-12);
    }

    #[test]
    fn minkowski_combination_is_affine_in_support(a in 0u64..500, b in 0u64..500, t in 0.0f64..1.0) {
        let k0 = catalog::random_convex(a).unwrap();
        let k1 = catalog::random_convex(b).unwrap();
        let kt = ConvexBody::combine(&k0, &k1, t).unwrap();
        for i in 0..kt.n_samples() {
            let want = (1.0 - t) * k0.support()[i] + t * k1.support()[i];
            prop_assert!((kt.support()[i] - want).abs() <= 1e-12);
        }
    }

    #[test]
    fn area_square_root_is_concave_along_minkowski_paths(a in 0u64..500, b in 0u64..500, t in 0.0f64..1.0) {
        let k0 = catalog::random_convex(a).unwrap();
        let k1 = catalog::random_convex(b).unwrap();
        let kt = ConvexBody::combine(&k0, &k1, t).unwrap();
        let chord = (1.0 - t) * k0.area().sqrt() + t * k1.area().sqrt();
        prop_assert!(kt.area().sqrt() >= chord * (1.0 - 1e-9), "{} < {}", kt.area().sqrt(), chord);
    }

    #[test]
    fn rescaling_hits_the_target_area(seed in 0u64..500, target in 0.5f64..8.0) {
        let r = radial(seed).rescale_to_area(target).unwrap();
        prop_assert!((r.area() - target).abs() <= 1e-10 * target);
        let c: Shape = catalog::random_convex(seed).unwrap().into();
        let c = c.rescale_to_area(target).unwrap();
        prop_assert!((c.area() - target).abs() <= 1e-10 * target);
    }

    #[test]
    fn fourier_round_trip_on_band_limited_samples(seed in 0u64..500) {
        let d = catalog::random_radial(seed, 0.6).unwrap();
        let k = d.modes();
        let back = fourier::synthesize(&fourier::analyze(d.samples(), k), d.n_samples());
        for (x, y) in back.iter().zip(d.samples()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn slack_grows_with_step_and_mesh(h in 0.0f64..1.0, m in 0.0f64..1.0, dh in 0.0f64..0.5, dm in 0.0f64..0.5) {
        let s = SlackModel::CALIBRATED;
        prop_assert!(s.value(h + dh, m + dm) >= s.value(h, m));
        prop_assert!(s.scaled(2.0).value(h, m) >= s.value(h, m));
    }

    #[test]
    fn power_form_equality_for_inverse_square_models(a in 0.5f64..3.0, b in -0.4f64..3.0) {
        let t: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let f: Vec<f64> = t.iter().map(|s| 1.0 / (a + b * s).powi(2)).collect();
        let rep = variation::general_sigma_check(&t, &f, -2.0, 1e-12).unwrap();
        prop_assert!(rep.power_form && rep.linear_form);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn first_variation_is_linear_in_the_field(seed in 0u64..200, s in -2.0f64..2.0) {
        let pairs = variation_pairs(seed, 2).unwrap();
        let d = &pairs[0].0;
        let (f, g) = (&pairs[0].1.normal, &pairs[1].1.normal);
        let cfg = VariationConfig { mesh_factor: 0.03, ..VariationConfig::new(BoundaryCondition::Robin(1.0)) };
        let combo: Vec<f64> = f.iter().zip(g).map(|(x, y)| x + s * y).collect();
        let a = variation::first_variation(d, &PerturbationField::normal(f.clone()), &cfg).unwrap();
        let b = variation::first_variation(d, &PerturbationField::normal(g.clone()), &cfg).unwrap();
        let c = variation::first_variation(d, &PerturbationField::normal(combo), &cfg).unwrap();
        prop_assert!((c - (a + s * b)).abs() <= 1e-8 * (a.abs() + s.abs() * b.abs()));
    }

    #[test]
    fn strong_bmi_margin_is_invariant_under_joint_scaling(a in 0u64..200, r in 0.6f64..1.8) {
        let k0 = catalog::random_convex(a).unwrap();
        let k1 = catalog::random_convex(a + 1).unwrap();
        let slack = SlackModel::CALIBRATED;
        let one = variation::brunn_minkowski_check(&k0, &k1, &[0.5], BoundaryCondition::Dirichlet, 0.03, &slack).unwrap();
        let scaled = variation::brunn_minkowski_check(
            &k0.scaled(r).unwrap(), &k1.scaled(r).unwrap(), &[0.5], BoundaryCondition::Dirichlet, 0.03, &slack,
        ).unwrap();
        prop_assert!((one.rows[0].strong_margin - scaled.rows[0].strong_margin).abs() <= one.slack);
    }

    #[test]
    fn chord_inequality_holds_on_the_estimation_grid(seed in 0u64..200) {
        let e0 = catalog::random_radial(seed, 0.5).unwrap();
        let e1 = catalog::random_radial(seed + 1, 0.5).unwrap();
        let cfg = VariationConfig { mesh_factor: 0.04, ..VariationConfig::new(BoundaryCondition::Robin(1.0)) };
        let rep = variation::alpha_convexity_check(&e0, &e1, 9, &cfg).unwrap();
        prop_assert!(rep.alpha_estimate.is_finite());
        let scale = rep.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for m in &rep.margins {
            prop_assert!(*m >= -1e-10 * scale, "{m}");
        }
    }
}

#[test]
fn sign_flipped_boundary_formula_is_detected() {
    let (d, f) = variation_pairs(900, 1).unwrap().remove(0);
    let cfg = VariationConfig::new(BoundaryCondition::Dirichlet);
    let bw = variation::first_variation(&d, &f, &cfg).unwrap();
    let fd = variation::finite_diff_variation(&d, &f, &cfg, 1).unwrap();
    assert!((bw - fd).abs() <= 1e-3 * fd.abs());
    assert!((-bw - fd).abs() > 1e-3 * fd.abs());
}

#[test]
fn hausdorff_distance_of_concentric_disks_is_the_radius_gap() {
    let a: Shape = RadialDomain::ball(1.0, 256).unwrap().into();
    let b: Shape = RadialDomain::ball(1.5, 256).unwrap().into();
    let d = distance(&a, &b, &MetricKind::HausdorffCompact).unwrap();
    assert!((d - 0.5).abs() < 1e-9);
    // symmetric difference of concentric disks: an annulus
    let c = distance(&a, &b, &MetricKind::Char { container: 4.0 }).unwrap();
    assert!((c - PI * (2.25 - 1.0)).abs() < 1e-2, "{c}");
}
