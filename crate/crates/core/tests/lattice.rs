use std::f64::consts::{FRAC_PI_2, PI};

use lebp::lattice::{
    discrete_first_passage_density, discrete_green, discrete_poisson, harmonic_measure_direct, split_at_column, Ends,
    LatticeStrip,
};
use lebp::rect_kernels::{boundary_poisson_rect, RectConfig, SeriesPolicy};

#[test]
fn boundary_kernel_at_mid_height_converges() {
    let exact = boundary_poisson_rect(&RectConfig::new(PI).unwrap(), &SeriesPolicy::default(), FRAC_PI_2, FRAC_PI_2)
        .unwrap()
        .value;
    let err = |k: usize| {
        let s = LatticeStrip::for_width(k, PI).unwrap();
        let h = s.spacing();
        let mid = k.div_ceil(2);
        (s.boundary_kernel(mid, mid).unwrap() / (h * h) - exact).abs()
    };
    let (coarse, fine) = (err(19), err(39));
    assert!(fine < coarse / 3.0, "{coarse} -> {fine}");
}

#[test]
fn green_function_symmetry_on_random_pairs() {
    let s = LatticeStrip::new(20, 20).unwrap();
    let mut x: u64 = 12345;
    let mut next = |m: usize| {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        1 + ((x >> 33) as usize % m)
    };
    for _ in 0..10 {
        let a = (next(20), next(20));
        let b = (next(20), next(20));
        let ab = discrete_green(&s, a, b).unwrap();
        let ba = discrete_green(&s, b, a).unwrap();
        assert!((ab - ba).abs() < 1e-13 * ab.max(1.0));
        assert!(ab > 0.0);
    }
}

#[test]
fn conservation_through_any_column() {
    let s = LatticeStrip::new(9, 12).unwrap();
    for column in [2, 6, 12] {
        let split = split_at_column(&s, column, 2, 8).unwrap();
        assert!((split - s.boundary_kernel(2, 8).unwrap()).abs() < 1e-16);
    }
}

#[test]
fn single_path_density_factorizes_at_the_cut() {
    // hit the cut at row t, then exit anywhere on the right edge
    let s = LatticeStrip::new(9, 11).unwrap();
    let (a, column) = (4, 6);
    let total: f64 = (1..=9).map(|b| s.boundary_kernel(a, b).unwrap()).sum();
    let dd = discrete_first_passage_density(&s, 1, column, &[a], &Ends::All).unwrap();
    assert!((dd.total() - 1.0).abs() < 1e-13);
    for (rows, p) in &dd.values {
        let t = rows[0];
        let hit = harmonic_measure_direct(&s, column, a, t).unwrap();
        let exit: f64 = (1..=9).map(|b| discrete_poisson(&s, (column, t), b).unwrap()).sum();
        assert!((p - hit * exit / total).abs() < 1e-13, "row {t}: {p}");
    }
}

#[test]
fn coincident_starts_are_reported() {
    let s = LatticeStrip::new(7, 7).unwrap();
    assert!(discrete_first_passage_density(&s, 2, 4, &[3, 3], &Ends::All).is_err());
}

#[test]
fn cut_must_separate_the_ends() {
    let s = LatticeStrip::new(7, 7).unwrap();
    assert!(discrete_first_passage_density(&s, 1, 1, &[3], &Ends::All).is_err());
    assert!(discrete_first_passage_density(&s, 1, 8, &[3], &Ends::All).is_err());
}
