use std::f64::consts::PI;

use lebp::numerics::det_lu;
use lebp::rect_kernels::{
    crossing_prefactor, crossing_ratio, fomin_boundary_det, fomin_expansion, hat_h,
    ln_crossing_ratio, ln_fomin_boundary_det_lu, fomin_expansion_auto, poisson_rect, RectConfig,
    SeriesPolicy,
};
use lebp::weyl::WeylPoint;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pol() -> SeriesPolicy {
    SeriesPolicy::default()
}

#[test]
fn expansion_agrees_with_determinant() {
    let cfg = RectConfig::new(4.0).unwrap();
    let phi = WeylPoint::new(vec![1.0, 2.0]).unwrap();
    let rho = WeylPoint::new(vec![1.2, 1.9]).unwrap();
    let lu = fomin_boundary_det(&cfg, &pol(), &phi, &rho).unwrap();
    let ex = fomin_expansion(&cfg, &pol(), phi.angles(), rho.angles(), 40).unwrap();
    assert!((lu.value - ex.value).abs() <= lu.bound + ex.bound + 1e-15 * lu.value.abs());
}

#[test]
fn expansion_survives_where_lu_cancels() {
    // for three paths at L = 12 the LU route loses everything to cancellation
    let cfg = RectConfig::new(12.0).unwrap();
    let p = WeylPoint::equispaced(3);
    let ex = fomin_expansion_auto(&cfg, &pol(), p.angles(), p.angles()).unwrap();
    let leading = lebp::rect_kernels::fomin_boundary_asymptotic(&cfg, p.angles(), p.angles());
    assert!((ex.ln_abs() - leading.ln()).abs() < 1e-6);
    let (_, ln_lu) = ln_fomin_boundary_det_lu(&cfg, &pol(), p.angles(), p.angles()).unwrap();
    assert!((ln_lu - ex.ln_abs()).abs() > 1.0, "LU unexpectedly accurate");
}

#[test]
fn crossing_prefactor_is_approached() {
    for n in [2, 3] {
        let p = WeylPoint::equispaced(n);
        let psi = (n * (n - 1) / 2) as f64;
        let target = crossing_prefactor(p.angles(), p.angles());
        let err = |l: f64| {
            let lam = crossing_ratio(&RectConfig::new(l).unwrap(), &pol(), &p, &p).unwrap();
            (lam * (psi * l).exp() / target - 1.0).abs()
        };
        assert!(err(14.0) < err(8.0));
        assert!(err(14.0) < 1e-4, "N={n}: {}", err(14.0));
    }
}

#[test]
fn single_path_ratio_is_one() {
    let p = WeylPoint::new(vec![0.8]).unwrap();
    let r = WeylPoint::new(vec![2.1]).unwrap();
    let v = ln_crossing_ratio(&RectConfig::new(3.0).unwrap(), &pol(), &p, &r).unwrap();
    assert!(v.abs() < 1e-15);
}

#[test]
fn sine_determinant_is_vandermonde() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=5 {
        for _ in 0..20 {
            let theta: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..PI - 0.01)).collect();
            let m = DMatrix::from_fn(n, n, |l, k| ((l + 1) as f64 * theta[k]).sin());
            let lhs = det_lu(&m).unwrap();
            let rhs = 2f64.powi((n * (n - 1) / 2) as i32) * hat_h(&theta);
            assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()), "n={n}: {lhs} vs {rhs}");
        }
    }
}

/// Centered five-point Laplacian of the Poisson kernel in `(x, θ)`.
fn laplacian(h: f64) -> f64 {
    let cfg = RectConfig::new(2.0).unwrap();
    let k = |x: f64, t: f64| poisson_rect(&cfg, &pol(), x, t, 1.3).unwrap().value;
    let (x, t) = (1.0, 1.1);
    (k(x + h, t) + k(x - h, t) + k(x, t + h) + k(x, t - h) - 4.0 * k(x, t)) / (h * h)
}

#[test]
fn poisson_kernel_is_harmonic_to_second_order() {
    let hs = [0.08, 0.04, 0.02];
    let r: Vec<f64> = hs.iter().map(|&h| laplacian(h).abs()).collect();
    for w in r.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((1.8..=2.2).contains(&order), "observed order {order}");
    }
}
