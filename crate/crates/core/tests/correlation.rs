use std::f64::consts::{FRAC_PI_2, PI};

use lebp::correlation::{
    corr_strip, density_semicircle, kernel_semicircle, kernel_semicircle_same_radius,
    pdf_special_start_joint, pdf_special_start_joint_product, two_point_determinant,
    two_point_semicircle, CutPoints,
};
use lebp::rect_kernels::SeriesPolicy;
use lebp::weyl::WeylPoint;

fn pol() -> SeriesPolicy {
    SeriesPolicy::default()
}

#[test]
fn two_point_across_arcs_is_a_determinant() {
    for &(r, t, rp, tp) in &[(2.0, 1.0, 3.0, 2.0), (4.0, FRAC_PI_2, 1.5, 0.3), (1.2, 2.9, 1.25, 2.8)] {
        let a = two_point_semicircle(4, r, t, rp, tp, &pol()).unwrap();
        let b = two_point_determinant(4, r, t, rp, tp, &pol()).unwrap();
        assert!((a.value - b).abs() <= a.bound + 1e-14, "{a:?} vs {b}");
    }
}

#[test]
fn same_arc_kernel_closed_form() {
    for &(t, tp) in &[(0.3, 2.0), (1.0, 1.0 + 1e-5), (2.5, 0.7)] {
        let closed = kernel_semicircle_same_radius(5, 3.0, t, tp).unwrap();
        let sum = kernel_semicircle(5, 3.0, t, 3.0, tp, &pol()).unwrap().value;
        assert!((closed - sum).abs() < 1e-9, "{closed} vs {sum}");
    }
}

#[test]
fn density_decays_like_one_over_r() {
    let a = density_semicircle(4, 2.0, 1.1).unwrap();
    let b = density_semicircle(4, 6.0, 1.1).unwrap();
    assert!((a / b - 3.0).abs() < 1e-14);
}

#[test]
fn joint_special_start_density_two_ways() {
    let cuts = [0.7, 1.4, 2.0];
    let thetas = vec![
        WeylPoint::new(vec![0.9, 2.0]).unwrap(),
        WeylPoint::new(vec![1.1, 2.4]).unwrap(),
        WeylPoint::new(vec![0.5, 1.7]).unwrap(),
    ];
    let a = pdf_special_start_joint(&cuts, &thetas, &pol()).unwrap();
    let b = pdf_special_start_joint_product(&cuts, &thetas, &pol()).unwrap();
    assert!((a - b).abs() < 1e-12 * a.abs(), "{a} vs {b}");
}

#[test]
fn correlation_vanishes_for_too_many_points() {
    let cuts = [CutPoints { x: 1.0, thetas: vec![0.5, 1.0, 2.0] }];
    assert!(corr_strip(2, &cuts, &pol()).is_err());
    let two = [CutPoints { x: 1.0, thetas: vec![0.5, 2.0] }];
    assert!(corr_strip(2, &two, &pol()).unwrap() > 0.0);
}

#[test]
fn density_integrates_to_n_over_the_arc() {
    // ∫_0^π ρ̂ r dθ = N on every arc
    let rule = lebp::numerics::QuadratureRule::angular(64);
    for n in [1, 3, 7] {
        let r = 2.5;
        let total = rule.integrate(|t| r * density_semicircle(n, r, t).unwrap());
        assert!((total - n as f64).abs() < 1e-12, "N={n}: {total}");
    }
    let _ = PI;
}
