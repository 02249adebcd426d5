//! Validation suites with pinned tolerances. Each suite returns a
//! [`Report`] of measured errors against their limits; the command-line
//! `validate` subcommand and the acceptance tests both run these.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::correlation::{
    corr_strip, density_semicircle, kernel_semicircle, kernel_strip, kernel_strip_dual,
    limit_kernel, scaled_kernel, special_start_marginal, special_start_mass,
    special_start_mass_selberg, two_point_semicircle, CutPoints, KernelSpec, ScaledCoordinates,
};
use crate::error::Result;
use crate::figures::{count_local_maxima, density_ridges, two_point_arc};
use crate::graph_fomin::{brute_force_fomin_with, fomin_det, BoundaryTuple, Network, DEFAULT_WALK_BUDGET};
use crate::lattice::{boundary_kernel_errors, density_errors};
use crate::numerics::{Execution, QuadratureRule};
use crate::passage_densities::{first_passage_mass, joint_mass_two_cuts, pdf_first_passage_finite};
use crate::rect_kernels::{
    crossing_exponent, fit_crossing_exponent, RectConfig, SeriesPolicy, SineKernel,
};
use crate::weyl::{ChamberSequence, WeylPoint};

/// Pinned tolerances and limits.
pub mod tol {
    pub const FOMIN_MAX_LEN: usize = 14;
    pub const FOMIN_SECONDS: f64 = 60.0;
    pub const SEMIGROUP: f64 = 1e-10;
    pub const SEMIGROUP_NODES: usize = 200;
    pub const SEMIGROUP_SECONDS: f64 = 1.0;
    pub const CROSSING_REL: f64 = 1e-2;
    pub const CROSSING_WIDTHS: [f64; 4] = [6.0, 8.0, 10.0, 12.0];
    pub const NORM_FINITE: f64 = 1e-6;
    pub const NORM_SPECIAL: f64 = 1e-8;
    pub const NORM_JOINT: f64 = 1e-4;
    /// most negative sampled density relative to the largest
    pub const POSITIVITY: f64 = 1e-12;
    pub const KERNEL_DUAL: f64 = 1e-10;
    pub const MARGINAL: f64 = 1e-8;
    pub const DIAGONAL: f64 = 1e-10;
    /// relative, for `ρ̂_3(ir) = 4/(πr)`
    pub const TOP_OF_ARC: f64 = 4.0 * f64::EPSILON;
    pub const RIDGES: usize = 3;
    pub const PEAKS: usize = 4;
    pub const TWO_POINT_NEAR_DIAGONAL: f64 = 1e-6;
    pub const UNIFORM_REL: f64 = 2e-2;
    pub const SCALING: f64 = 1e-2;
    pub const LIMIT_QUADRATURE: f64 = 1e-10;
    pub const CONFORMAL: f64 = 1e-12;
    pub const LATTICE_LEVELS: [usize; 3] = [16, 32, 64];
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured <= limit`.
    pub fn at_most(name: impl Into<String>, measured: f64, limit: f64) -> Self {
        Check { name: name.into(), measured, limit, passed: measured <= limit }
    }

    /// Passes when `measured < limit`.
    pub fn below(name: impl Into<String>, measured: f64, limit: f64) -> Self {
        Check { name: name.into(), measured, limit, passed: measured < limit }
    }

    pub fn equals(name: impl Into<String>, measured: usize, expected: usize) -> Self {
        Check {
            name: name.into(),
            measured: measured as f64,
            limit: expected as f64,
            passed: measured == expected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(suite: &str, checks: Vec<Check>) -> Self {
        Report { suite: suite.to_string(), checks }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Fomin,
    Semigroup,
    Normalization,
    Crossing,
    Correlation,
    Figures,
    Limits,
    Lattice,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Fomin,
        Suite::Semigroup,
        Suite::Normalization,
        Suite::Crossing,
        Suite::Correlation,
        Suite::Figures,
        Suite::Limits,
        Suite::Lattice,
    ];

    pub fn run(self, pol: &SeriesPolicy, exec: Execution) -> Result<Report> {
        match self {
            Suite::Fomin => fomin(exec),
            Suite::Semigroup => semigroup(pol),
            Suite::Normalization => normalization(pol, exec),
            Suite::Crossing => crossing(pol),
            Suite::Correlation => correlation(pol),
            Suite::Figures => figures(pol, exec),
            Suite::Limits => limits(pol),
            Suite::Lattice => lattice(pol),
        }
    }
}

/// `i`-th point of the additive recurrence with the golden ratio, in `[0, 1)`.
fn low_discrepancy(i: usize, dim: usize) -> f64 {
    let alpha = [0.618_033_988_749_894_9, 0.754_877_666_246_692_7, 0.569_840_290_998_053_3][dim % 3];
    ((i + 1) as f64 * alpha + 0.1 * dim as f64).fract()
}

/// Fomin's identity on the 3×3 grid with two paths.
pub fn fomin(exec: Execution) -> Result<Report> {
    let start = Instant::now();
    let net = Network::grid(3, 3, 0.25)?;
    let v = |i, j| Network::grid_vertex(3, 3, i, j).expect("grid site");
    let ab = BoundaryTuple::new(&net, vec![v(0, 1), v(0, 3)], vec![v(4, 1), v(4, 3)])?;
    let det = fomin_det(&net, &ab)?;
    let brute = brute_force_fomin_with(&net, &ab, tol::FOMIN_MAX_LEN, DEFAULT_WALK_BUDGET, exec)?;
    let secs = start.elapsed().as_secs_f64();
    Ok(Report::new(
        "fomin",
        vec![
            Check::at_most("|det - brute force| vs tail bound", (det - brute.value).abs(), brute.bound),
            Check::below("runtime seconds", secs, tol::FOMIN_SECONDS),
        ],
    ))
}

struct SemigroupCase {
    width: f64,
    x: f64,
    xp: f64,
    theta: f64,
    rho: f64,
}

fn semigroup_cases() -> Vec<SemigroupCase> {
    (0..10)
        .map(|k| {
            let kf = k as f64;
            let x = 0.5 + 0.1 * kf;
            let xp = x + 0.6 + 0.05 * kf;
            SemigroupCase { width: xp + 0.7 + 0.1 * kf, x, xp, theta: 0.3 + 0.25 * kf, rho: 2.8 - 0.2 * kf }
        })
        .collect()
}

/// Both conservation-of-probability identities under a 200-node rule.
pub fn semigroup(pol: &SeriesPolicy) -> Result<Report> {
    let rule = QuadratureRule::cached(tol::SEMIGROUP_NODES);
    let mut checks = Vec::new();
    for boundary in [false, true] {
        let start = Instant::now();
        let mut worst: f64 = 0.0;
        for c in semigroup_cases() {
            let full = RectConfig::new(c.width)?;
            let part = RectConfig::new(c.xp)?;
            let (left, direct) = if boundary {
                (SineKernel::boundary(&part, pol)?, SineKernel::boundary(&full, pol)?)
            } else {
                (SineKernel::inner(&part, pol, c.x)?, SineKernel::inner(&full, pol, c.x)?)
            };
            let right = SineKernel::inner(&full, pol, c.xp)?;
            let mut integral = 0.0;
            for (t, w) in rule.nodes.iter().zip(&rule.weights) {
                integral += w * left.eval(pol, c.theta, *t)?.value * right.eval(pol, *t, c.rho)?.value;
            }
            worst = worst.max((integral - direct.eval(pol, c.theta, c.rho)?.value).abs());
        }
        let secs = start.elapsed().as_secs_f64();
        let tag = if boundary { "boundary" } else { "interior" };
        checks.push(Check::below(format!("{tag} start: max error"), worst, tol::SEMIGROUP));
        checks.push(Check::below(format!("{tag} start: runtime seconds"), secs, tol::SEMIGROUP_SECONDS));
    }
    Ok(Report::new("semigroup", checks))
}

/// Fitted decay rate of `log Λ` for two and three paths.
pub fn crossing(pol: &SeriesPolicy) -> Result<Report> {
    let mut checks = Vec::new();
    for n in [2, 3] {
        let p = WeylPoint::equispaced(n);
        let (rate, _) = fit_crossing_exponent(pol, &p, &p, &tol::CROSSING_WIDTHS)?;
        let target = crossing_exponent(n);
        checks.push(Check::below(
            format!("N={n}: fitted exponent {rate:.6}, relative error"),
            (rate / target - 1.0).abs(),
            tol::CROSSING_REL,
        ));
    }
    Ok(Report::new("crossing", checks))
}

/// Total masses of the first-passage densities.
pub fn normalization(pol: &SeriesPolicy, exec: Execution) -> Result<Report> {
    let phi = WeylPoint::new(vec![1.0, 2.0])?;
    let finite = first_passage_mass(&RectConfig::new(4.0)?, pol, 2.0, &phi, 32, exec)?;
    let mut checks =
        vec![Check::below("finite width N=2, |1 - mass|", (1.0 - finite).abs(), tol::NORM_FINITE)];
    for n in [2, 3] {
        let mass = special_start_mass(n, 48, exec);
        checks.push(Check::below(
            format!("special start N={n}, |1 - mass| by quadrature"),
            (1.0 - mass).abs(),
            tol::NORM_SPECIAL,
        ));
        checks.push(Check::below(
            format!("special start N={n}, |1 - mass| by Selberg"),
            (1.0 - special_start_mass_selberg(n)).abs(),
            tol::NORM_SPECIAL,
        ));
    }
    let seq = ChamberSequence::new(vec![1.0, 2.0], Some(4.0))?;
    let joint = joint_mass_two_cuts(pol, &seq, &phi, 24, exec)?;
    checks.push(Check::below("two cuts N=2, |1 - mass|", (1.0 - joint).abs(), tol::NORM_JOINT));
    checks.push(Check::at_most("N=3 density, -min/max over 500 points", negative_excursion(pol)?, tol::POSITIVITY));
    Ok(Report::new("normalization", checks))
}

/// The density formula is a signed determinant ratio; sample it and report
/// how far below zero it ever goes.
fn negative_excursion(pol: &SeriesPolicy) -> Result<f64> {
    let cfg = RectConfig::new(4.0)?;
    let phi = WeylPoint::new(vec![0.8, 1.6, 2.4])?;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..500 {
        let mut t: Vec<f64> = (0..3).map(|d| PI * low_discrepancy(i, d)).collect();
        t.sort_by(f64::total_cmp);
        if t.windows(2).any(|w| w[1] - w[0] < 1e-9) || t[0] <= 0.0 {
            continue;
        }
        let p = pdf_first_passage_finite(&cfg, pol, 1.0 + 2.0 * low_discrepancy(i + 3, 0), &WeylPoint::new(t)?, &phi)?;
        lo = lo.min(p);
        hi = hi.max(p);
    }
    Ok((-lo).max(0.0) / hi)
}

/// `K̂` summed in the semicircle variables directly, without the strip.
fn semicircle_kernel_direct(n: usize, r: f64, theta: f64, rp: f64, thetap: f64) -> f64 {
    let term = |k: usize| {
        let kf = k as i32;
        (rp / r).powi(kf) * (1.0 - rp.powi(-2 * kf)) / (1.0 - r.powi(-2 * kf))
            * (k as f64 * theta).sin()
            * (k as f64 * thetap).sin()
    };
    if r <= rp {
        FRAC_2_PI / r * (1..=n).map(term).sum::<f64>()
    } else {
        let mut s = 0.0;
        let mut k = n + 1;
        while (rp / r).powi(k as i32) > 1e-20 {
            s += term(k);
            k += 1;
        }
        -FRAC_2_PI / r * s
    }
}

/// The two forms of the cross-cut kernel on a 20-point sample with
/// `x − x′ ≥ 0.1`.
pub fn kernel_dual_form(pol: &SeriesPolicy) -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let xp = 0.2 + 1.5 * low_discrepancy(i, 0);
        let x = xp + 0.1 + 1.0 * low_discrepancy(i, 1);
        let theta = 0.1 + 2.9 * low_discrepancy(i, 2);
        let thetap = 0.1 + 2.9 * low_discrepancy(i + 7, 0);
        let s = KernelSpec::new(1 + i % 4, x, theta, xp, thetap)?;
        worst = worst.max((kernel_strip(&s, pol)?.value - kernel_strip_dual(&s, pol)?.value).abs());
    }
    Ok(vec![Check::below("tail sum vs finite sum minus Poisson kernel", worst, tol::KERNEL_DUAL)])
}

/// One-point function from the kernel against the quadrature marginal of
/// the special-start density.
pub fn one_point_marginal(pol: &SeriesPolicy) -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let theta = 0.05 + 3.0 * i as f64 / 9.0;
        let det = corr_strip(2, &[CutPoints { x: 1.0, thetas: vec![theta] }], pol)?;
        worst = worst.max((det - special_start_marginal(2, theta, 48)?).abs());
    }
    Ok(vec![Check::below("N=2 one-point function vs marginal", worst, tol::MARGINAL)])
}

/// Kernel on the diagonal against the closed-form density.
pub fn diagonal_density(pol: &SeriesPolicy) -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for n in [1, 2, 3, 5, 8] {
        for i in 0..10 {
            let theta = 0.02 + 3.1 * i as f64 / 9.0;
            let r = 1.5 + 3.0 * low_discrepancy(i, 1);
            let k = kernel_semicircle(n, r, theta, r, theta, pol)?.value;
            worst = worst.max((k - density_semicircle(n, r, theta)?).abs());
        }
    }
    let mut top: f64 = 0.0;
    for r in [1.5, 2.0, 4.0, 10.0] {
        let exact = 4.0 / (PI * r);
        top = top.max((density_semicircle(3, r, FRAC_PI_2)? / exact - 1.0).abs());
    }
    Ok(vec![
        Check::below("kernel diagonal vs closed-form density", worst, tol::DIAGONAL),
        Check::at_most("N=3 density at top of arc, relative", top, tol::TOP_OF_ARC),
    ])
}

/// Semicircle kernel against an independent sum in the variables `r, θ`
/// on a 50-point sample.
pub fn conformal_covariance(pol: &SeriesPolicy) -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let r = 1.2 + 3.8 * low_discrepancy(i, 0);
        let mut rp = 1.2 + 3.8 * low_discrepancy(i, 1);
        if (r.ln() - rp.ln()).abs() < 0.05 {
            rp = r;
        }
        let theta = 0.1 + 2.9 * low_discrepancy(i, 2);
        let thetap = 0.1 + 2.9 * low_discrepancy(i + 11, 0);
        let n = 1 + i % 6;
        let k = kernel_semicircle(n, r, theta, rp, thetap, pol)?.value;
        worst = worst.max((k - semicircle_kernel_direct(n, r, theta, rp, thetap)).abs());
    }
    Ok(vec![Check::below("semicircle vs mapped strip kernel", worst, tol::CONFORMAL)])
}

/// Kernel identities: both forms of the cross-cut kernel, the one-point
/// marginal, the diagonal closed form and conformal covariance.
pub fn correlation(pol: &SeriesPolicy) -> Result<Report> {
    let mut checks = kernel_dual_form(pol)?;
    checks.extend(one_point_marginal(pol)?);
    checks.extend(diagonal_density(pol)?);
    checks.extend(conformal_covariance(pol)?);
    Ok(Report::new("correlation", checks))
}

/// Qualitative features of the semicircle plots.
pub fn figures(pol: &SeriesPolicy, exec: Execution) -> Result<Report> {
    let ridges = density_ridges(3, 3.0, 2001)?;
    let arc = two_point_arc(5, 4.0, FRAC_PI_2, 4001, pol, exec)?;
    let peaks = count_local_maxima(&arc.iter().map(|s| s.value).collect::<Vec<_>>());
    let d = 1e-4 * PI;
    let near = two_point_semicircle(5, 4.0, FRAC_PI_2, 4.0, FRAC_PI_2 + d, pol)?
        .value
        .abs()
        .max(two_point_semicircle(5, 4.0, FRAC_PI_2, 4.0, FRAC_PI_2 - d, pol)?.value.abs());
    Ok(Report::new(
        "figures",
        vec![
            Check::equals("N=3 density ridges", ridges, tol::RIDGES),
            Check::equals("N=5 two-point peaks", peaks, tol::PEAKS),
            Check::below("N=5 two-point at angular distance 1e-4 pi", near, tol::TWO_POINT_NEAR_DIAGONAL),
        ],
    ))
}

/// `∫ e^{−cs} sin(as) sin(a′s) ds` over `[0,1]` or `[1,∞)` by panels of
/// Gauss–Legendre, the infinite range cut where `e^{−cs} < 1e−20`.
fn limit_kernel_quadrature(sc: &ScaledCoordinates) -> f64 {
    let c = sc.u - sc.up;
    let f = |s: f64| (-c * s).exp() * (sc.a * s).sin() * (sc.ap * s).sin();
    let (lo, hi, sign) = if c < 0.0 { (0.0, 1.0, 1.0) } else { (1.0, 1.0 + 46.0 / c, -1.0) };
    let panels = ((hi - lo) * 4.0).ceil() as usize;
    let width = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = lo + p as f64 * width;
        total += QuadratureRule::gauss_legendre(24, a, a + width).integrate(f);
    }
    sign * FRAC_2_PI * total
}

/// `πrρ̂_N/N → 1` for `N = 200` on `[π/6, 5π/6]`.
pub fn uniform_limit() -> Result<Vec<Check>> {
    let n = 200;
    let r = 2.0;
    let mut worst: f64 = 0.0;
    for i in 0..=2000 {
        let theta = PI / 6.0 + (2.0 * PI / 3.0) * i as f64 / 2000.0;
        worst = worst.max((PI * r * density_semicircle(n, r, theta)? / n as f64 - 1.0).abs());
    }
    Ok(vec![Check::below("N=200 uniform density, relative", worst, tol::UNIFORM_REL)])
}

/// Kernel in the window `r = N + u`, `θ = a/N` against its limit, and the
/// limit's closed form against quadrature.
pub fn scaling_limit(pol: &SeriesPolicy) -> Result<Vec<Check>> {
    let samples = [
        ScaledCoordinates { u: 0.0, a: 1.0, up: 1.0, ap: 1.0 },
        ScaledCoordinates { u: 1.0, a: 1.0, up: 0.0, ap: 2.0 },
        ScaledCoordinates { u: -1.0, a: 2.0, up: 2.0, ap: 1.0 },
    ];
    let (mut scaling, mut quad): (f64, f64) = (0.0, 0.0);
    for sc in &samples {
        let lim = limit_kernel(sc)?;
        scaling = scaling.max((scaled_kernel(500, sc, pol)?.value - lim).abs());
        quad = quad.max((lim - limit_kernel_quadrature(sc)).abs());
    }
    Ok(vec![
        Check::below("N=500 scaled kernel vs limit", scaling, tol::SCALING),
        Check::below("limit kernel closed form vs quadrature", quad, tol::LIMIT_QUADRATURE),
    ])
}

/// Bulk and edge limits of the semicircle ensemble.
pub fn limits(pol: &SeriesPolicy) -> Result<Report> {
    let mut checks = uniform_limit()?;
    checks.extend(scaling_limit(pol)?);
    Ok(Report::new("limits", checks))
}

/// Boundary kernel test points: multiples of `π/4` away from the corners.
pub fn lattice_kernel_points() -> Vec<(f64, f64)> {
    let q = PI / 4.0;
    vec![(q, q), (q, 2.0 * q), (2.0 * q, 2.0 * q), (2.0 * q, 3.0 * q), (3.0 * q, q)]
}

/// Starting angles and cut angles for the two-path density comparison on
/// the square `R_π` cut at `π/2`.
pub fn lattice_density_points() -> Result<(WeylPoint, Vec<WeylPoint>)> {
    let q = PI / 4.0;
    Ok((
        WeylPoint::new(vec![q, 3.0 * q])?,
        vec![
            WeylPoint::new(vec![q, 2.0 * q])?,
            WeylPoint::new(vec![q, 3.0 * q])?,
            WeylPoint::new(vec![2.0 * q, 3.0 * q])?,
        ],
    ))
}

/// Largest ratio of consecutive errors, which is below 1 exactly when
/// the errors strictly decrease.
fn worst_ratio(errors: &[f64]) -> f64 {
    errors.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max)
}

/// Lattice approximations against the continuum on `R_π` under refinement.
pub fn lattice(pol: &SeriesPolicy) -> Result<Report> {
    let levels = tol::LATTICE_LEVELS;
    let pts = lattice_kernel_points();
    let per_level = levels
        .iter()
        .map(|&m| boundary_kernel_errors(m, PI, &pts, pol))
        .collect::<Result<Vec<_>>>()?;
    let mut checks = Vec::new();
    for (p, &(phi, rho)) in pts.iter().enumerate() {
        let errs: Vec<f64> = per_level.iter().map(|e| e[p]).collect();
        checks.push(Check::below(
            format!("boundary kernel at ({phi:.4}, {rho:.4}): worst error ratio"),
            worst_ratio(&errs),
            1.0,
        ));
    }
    let (phi, thetas) = lattice_density_points()?;
    let errs = levels
        .iter()
        .map(|&m| {
            let e = density_errors(m, PI, FRAC_PI_2, &phi, &thetas, pol)?;
            Ok(e.into_iter().fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?;
    checks.push(Check::below("N=2 density max error: worst error ratio", worst_ratio(&errs), 1.0));
    Ok(Report::new("lattice", checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_comparisons() {
        assert!(Check::at_most("a", 1.0, 1.0).passed);
        assert!(!Check::below("a", 1.0, 1.0).passed);
        assert!(!Check::below("a", f64::NAN, 1.0).passed);
        assert!(Check::equals("a", 3, 3).passed);
    }

    #[test]
    fn low_discrepancy_in_unit_interval() {
        for d in 0..3 {
            for i in 0..100 {
                let v = low_discrepancy(i, d);
                assert!((0.0..1.0).contains(&v));
            }
        }
    }

    #[test]
    fn ratio_detects_increase() {
        assert!(worst_ratio(&[3.0, 2.0, 1.0]) < 1.0);
        assert!(worst_ratio(&[3.0, 1.0, 2.0]) > 1.0);
    }
}
