//! Values frozen from an independent extended-precision evaluation; see
//! `tests/oracles/gen_reference.py`.

use lebp::correlation::{density_semicircle, limit_kernel, ScaledCoordinates};
use lebp::graph_fomin::{fomin_det, BoundaryTuple, Network};
use lebp::lattice::LatticeStrip;
use lebp::numerics::sinh_ratio;
use lebp::rect_kernels::{
    boundary_poisson_rect, fomin_boundary_det, fomin_inner_det, poisson_rect, RectConfig,
    SeriesPolicy,
};
use lebp::weyl::WeylPoint;
use serde_json::Value;

fn reference() -> Value {
    serde_json::from_str(include_str!("oracles/reference.json")).expect("valid reference file")
}

fn f(v: &Value) -> f64 {
    v.as_str().expect("number as string").trim().parse().expect("parsable number")
}

fn fs(v: &Value) -> Vec<f64> {
    v.as_array().expect("array").iter().map(f).collect()
}

fn u(v: &Value) -> usize {
    v.as_u64().expect("integer") as usize
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn pol() -> SeriesPolicy {
    SeriesPolicy::default()
}

#[test]
fn sinh_ratio_matches_extended_precision() {
    for row in reference()["sinh_ratio"].as_array().unwrap() {
        let (n, num, den, want) = (u(&row[0]) as u64, f(&row[1]), f(&row[2]), f(&row[3]));
        let got = sinh_ratio(n, num, den);
        assert!(rel(got, want) < 1e-14, "n={n} num={num} den={den}: {got} vs {want}");
    }
}

#[test]
fn poisson_kernel_matches_direct_summation() {
    for row in reference()["poisson_rect"].as_array().unwrap() {
        let (l, x, t, r, want) = (f(&row[0]), f(&row[1]), f(&row[2]), f(&row[3]), f(&row[4]));
        let got = poisson_rect(&RectConfig::new(l).unwrap(), &pol(), x, t, r).unwrap();
        assert!((got.value - want).abs() < 1e-12, "{got:?} vs {want}");
        assert!(got.bound <= 1e-15);
    }
}

#[test]
fn boundary_kernel_matches_direct_summation() {
    for row in reference()["boundary_poisson_rect"].as_array().unwrap() {
        let (l, p, r, want) = (f(&row[0]), f(&row[1]), f(&row[2]), f(&row[3]));
        let got = boundary_poisson_rect(&RectConfig::new(l).unwrap(), &pol(), p, r).unwrap();
        assert!((got.value - want).abs() < 1e-12, "L={l}: {got:?} vs {want}");
    }
}

#[test]
fn fomin_determinants_match() {
    let r = reference();
    for row in r["fomin_boundary_det"].as_array().unwrap() {
        let cfg = RectConfig::new(f(&row[0])).unwrap();
        let phi = WeylPoint::new(fs(&row[1])).unwrap();
        let rho = WeylPoint::new(fs(&row[2])).unwrap();
        let got = fomin_boundary_det(&cfg, &pol(), &phi, &rho).unwrap().value;
        assert!(rel(got, f(&row[3])) < 1e-11, "{got} vs {}", f(&row[3]));
    }
    for row in r["fomin_inner_det"].as_array().unwrap() {
        let cfg = RectConfig::new(f(&row[0])).unwrap();
        let theta = WeylPoint::new(fs(&row[2])).unwrap();
        let rho = WeylPoint::new(fs(&row[3])).unwrap();
        let got = fomin_inner_det(&cfg, &pol(), f(&row[1]), &theta, &rho).unwrap().value;
        assert!(rel(got, f(&row[4])) < 1e-11, "{got} vs {}", f(&row[4]));
    }
}

#[test]
fn semicircle_density_matches_sum() {
    for row in reference()["semicircle_density"].as_array().unwrap() {
        let got = density_semicircle(u(&row[0]), f(&row[1]), f(&row[2])).unwrap();
        assert!(rel(got, f(&row[3])) < 1e-13, "{got} vs {}", f(&row[3]));
    }
}

#[test]
fn limit_kernel_matches_quadrature() {
    for row in reference()["limit_kernel"].as_array().unwrap() {
        let sc = ScaledCoordinates { u: f(&row[0]), a: f(&row[1]), up: f(&row[2]), ap: f(&row[3]) };
        let got = limit_kernel(&sc).unwrap();
        assert!((got - f(&row[4])).abs() < 1e-14, "{sc:?}: {got} vs {}", f(&row[4]));
    }
}

#[test]
fn grid_fomin_matches_exact_rationals() {
    for row in reference()["grid_fomin"].as_array().unwrap() {
        let (nx, ny) = (u(&row[0]), u(&row[1]));
        let net = Network::grid(nx, ny, 0.25).unwrap();
        let ids = |v: &Value| -> Vec<usize> {
            v.as_array()
                .unwrap()
                .iter()
                .map(|p| Network::grid_vertex(nx, ny, u(&p[0]), u(&p[1])).unwrap())
                .collect()
        };
        let ab = BoundaryTuple::new(&net, ids(&row[2]), ids(&row[3])).unwrap();
        let got = fomin_det(&net, &ab).unwrap();
        assert!(rel(got, f(&row[5])) < 1e-12, "{}: {got} vs {}", row[4], f(&row[5]));
    }
}

#[test]
fn lattice_exit_matches_exact_rationals() {
    for row in reference()["lattice_exit"].as_array().unwrap() {
        let strip = LatticeStrip::new(u(&row[0]), u(&row[1])).unwrap();
        let got = strip.boundary_kernel(u(&row[2]), u(&row[3])).unwrap();
        assert!(rel(got, f(&row[5])) < 1e-12, "{}: {got} vs {}", row[4], f(&row[5]));
    }
}
