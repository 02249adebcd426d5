//! Determinantal correlations of first passage points for paths that all
//! start at `iπ/2` in the half strip `{Re z > 0, 0 < Im z < π}`, and their
//! image under `z ↦ e^z` in `{|w| > 1, Im w > 0}`.
//!
//! The correlation kernel on the strip is
//!
//! * `K(x, θ; x′, θ′) = (2/π) Σ_{n≤N} sinh(nx′)/sinh(nx) sin(nθ) sin(nθ′)` for `x <= x′`,
//! * `K(x, θ; x′, θ′) = −(2/π) Σ_{n>N} sinh(nx′)/sinh(nx) sin(nθ) sin(nθ′)` for `x > x′`,
//!
//! and on the semicircle domain `K̂(re^{iθ}, r′e^{iθ′}) = K(log r, θ; log r′, θ′)/r`.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Error, Result};
use crate::numerics::{
    chamber_integrate, cube_integrate, det_lu, factorial, sinh_ratio, Execution, QuadratureRule,
    TailBounded,
};
use crate::passage_densities::c_factor;
use crate::rect_kernels::{
    fomin_inner_det_signed, hat_h, sine_alternant, RectConfig, SeriesPolicy, SineKernel,
};
use crate::weyl::{check_open_angles, WeylPoint};

/// Below this `|cos θ − cos θ′|` the same-radius kernel is summed directly.
pub const DIAGONAL_SWITCH: f64 = 1e-6;
/// Below this `|sin θ|` the closed-form density is replaced by its sum.
pub const DENSITY_SWITCH: f64 = 1e-2;

/// Arguments of the strip kernel `K_N(x, θ; x′, θ′)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub n: usize,
    pub x: f64,
    pub theta: f64,
    pub xp: f64,
    pub thetap: f64,
}

impl KernelSpec {
    pub fn new(n: usize, x: f64, theta: f64, xp: f64, thetap: f64) -> Result<Self> {
        let s = KernelSpec { n, x, theta, xp, thetap };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(domain("N must be at least 1"));
        }
        if !(self.x > 0.0 && self.xp > 0.0) || !self.x.is_finite() || !self.xp.is_finite() {
            return Err(domain(format!("x = {}, x′ = {} must be positive", self.x, self.xp)));
        }
        check_open_angles(&[self.theta, self.thetap])
    }
}

/// `Σ_{n≤N} φ_n(x, θ) φ̂_n(x′, θ′)`.
fn finite_part(s: &KernelSpec) -> f64 {
    let mut v = 0.0;
    for n in 1..=s.n as u64 {
        let nf = n as f64;
        v += sinh_ratio(n, s.xp, s.x) * (nf * s.theta).sin() * (nf * s.thetap).sin();
    }
    FRAC_2_PI * v
}

/// `−(2/π) Σ_{n>N} sinh(nx′)/sinh(nx) sin(nθ) sin(nθ′)` for `x > x′`.
fn tail_part(s: &KernelSpec, pol: &SeriesPolicy) -> Result<TailBounded> {
    let kernel = SineKernel::inner(&RectConfig::new(s.x)?, pol, s.xp)?;
    let k = kernel.cutoff(pol)?.max(s.n as u64);
    let mut v = 0.0;
    for n in (s.n as u64 + 1)..=k {
        let nf = n as f64;
        v += kernel.coef(n) * (nf * s.theta).sin() * (nf * s.thetap).sin();
    }
    Ok(TailBounded::new(-v, kernel.tail(k)))
}

/// Correlation kernel `K^{π/2}_N(x, θ; x′, θ′)` on the strip.
pub fn kernel_strip(spec: &KernelSpec, pol: &SeriesPolicy) -> Result<TailBounded> {
    spec.validate()?;
    if spec.x <= spec.xp {
        Ok(TailBounded::exact(finite_part(spec)))
    } else {
        tail_part(spec, pol)
    }
}

/// The other form of the `x > x′` kernel:
/// `Σ_{n≤N} φ_n(x, θ) φ̂_n(x′, θ′) − H_{R_x}(x′ + iθ′, x + iθ)`.
pub fn kernel_strip_dual(spec: &KernelSpec, pol: &SeriesPolicy) -> Result<TailBounded> {
    spec.validate()?;
    if spec.x <= spec.xp {
        return Err(domain("dual form needs x > x′"));
    }
    let h = SineKernel::inner(&RectConfig::new(spec.x)?, pol, spec.xp)?.eval(
        pol,
        spec.thetap,
        spec.theta,
    )?;
    Ok(TailBounded::new(finite_part(spec) - h.value, h.bound))
}

/// A cut `x` with the first-passage angles observed on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutPoints {
    pub x: f64,
    pub thetas: Vec<f64>,
}

/// Multiple correlation function: the determinant of the kernel over all
/// observed points.
pub fn corr_strip(n: usize, cuts: &[CutPoints], pol: &SeriesPolicy) -> Result<f64> {
    let pts: Vec<(f64, f64)> =
        cuts.iter().flat_map(|c| c.thetas.iter().map(move |&t| (c.x, t))).collect();
    for c in cuts {
        if c.thetas.len() > n {
            return Err(domain(format!("{} points on one cut exceed N = {n}", c.thetas.len())));
        }
    }
    if pts.is_empty() {
        return Ok(1.0);
    }
    let m = pts.len();
    let mut k = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let s = KernelSpec::new(n, pts[i].0, pts[i].1, pts[j].0, pts[j].1)?;
            k[(i, j)] = kernel_strip(&s, pol)?.value;
        }
    }
    det_lu(&k)
}

/// `p^{π/2}_N(x, θ) = 2^{N²} π^{−N} ĥ_N(θ)²`; independent of `x`.
pub fn pdf_special_start(x: f64, theta: &WeylPoint) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(format!("x = {x} must be positive")));
    }
    Ok(special_start(theta.angles()))
}

fn special_start(theta: &[f64]) -> f64 {
    let n = theta.len() as i32;
    let h = hat_h(theta);
    2f64.powi(n * n) * PI.powi(-n) * h * h
}

fn check_cuts(cuts: &[f64], thetas: &[WeylPoint]) -> Result<usize> {
    if cuts.is_empty() || cuts.len() != thetas.len() {
        return Err(domain(format!("{} cuts but {} angle sets", cuts.len(), thetas.len())));
    }
    if !(cuts[0] > 0.0) || cuts.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(domain("cuts must satisfy 0 < x_1 < … < x_M"));
    }
    let n = thetas[0].len();
    if thetas.iter().any(|t| t.len() != n) {
        return Err(domain("every cut needs the same number of angles"));
    }
    Ok(n)
}

/// Joint density on several cuts:
/// `2^{N²} π^{−N} C_N(x_M)/C_N(x_1) ĥ_N(θ^1) Π f_N(x_m, θ^m; x_{m+1}, θ^{m+1}) ĥ_N(θ^M)`.
pub fn pdf_special_start_joint(
    cuts: &[f64],
    thetas: &[WeylPoint],
    pol: &SeriesPolicy,
) -> Result<f64> {
    let n = check_cuts(cuts, thetas)?;
    let m = cuts.len();
    let mut v = 2f64.powi((n * n) as i32) * PI.powi(-(n as i32)) * c_factor(n, cuts[m - 1])
        / c_factor(n, cuts[0])
        * hat_h(thetas[0].angles())
        * hat_h(thetas[m - 1].angles());
    for k in 0..m - 1 {
        v *= fomin_inner_det_signed(
            &RectConfig::new(cuts[k + 1])?,
            pol,
            cuts[k],
            thetas[k].angles(),
            thetas[k + 1].angles(),
        )?
        .value;
    }
    Ok(v)
}

/// Same joint density as a product of determinants,
/// `det[φ_j(x_1, θ^1_k)] Π det[H_{R_{x_{m+1}}}(…)] det[φ̂_p(x_M, θ^M_q)]`.
pub fn pdf_special_start_joint_product(
    cuts: &[f64],
    thetas: &[WeylPoint],
    pol: &SeriesPolicy,
) -> Result<f64> {
    let n = check_cuts(cuts, thetas)?;
    let m = cuts.len();
    let freqs: Vec<u64> = (1..=n as u64).collect();
    let root = FRAC_2_PI.sqrt();
    let first = DMatrix::from_fn(n, n, |j, k| {
        root * (freqs[j] as f64 * thetas[0].angles()[k]).sin()
            / (freqs[j] as f64 * cuts[0]).sinh()
    });
    let last = DMatrix::from_fn(n, n, |p, q| {
        root * (freqs[p] as f64 * cuts[m - 1]).sinh()
            * (freqs[p] as f64 * thetas[m - 1].angles()[q]).sin()
    });
    let mut v = det_lu(&first)? * det_lu(&last)?;
    for k in 0..m - 1 {
        v *= fomin_inner_det_signed(
            &RectConfig::new(cuts[k + 1])?,
            pol,
            cuts[k],
            thetas[k].angles(),
            thetas[k + 1].angles(),
        )?
        .value;
    }
    Ok(v)
}

/// One-point marginal of the special-start density,
/// `(1/(N−1)!) ∫_{(0,π)^{N−1}} p^{π/2}_N(θ, θ_2, …, θ_N) dθ_2 … dθ_N`.
pub fn special_start_marginal(n: usize, theta: f64, order: usize) -> Result<f64> {
    check_open_angles(&[theta])?;
    if n == 0 {
        return Err(domain("N must be at least 1"));
    }
    if n == 1 {
        return Ok(special_start(&[theta]));
    }
    let rule = QuadratureRule::cached(order);
    let integral = cube_integrate(
        |rest| {
            let mut b = Vec::with_capacity(n);
            b.push(theta);
            b.extend_from_slice(rest);
            special_start(&b)
        },
        &rule,
        n - 1,
        Execution::Sequential,
    );
    Ok(integral / factorial(n - 1))
}

/// `∫_W p^{π/2}_N` by chamber quadrature.
pub fn special_start_mass(n: usize, order: usize, exec: Execution) -> f64 {
    let rule = QuadratureRule::cached(order);
    chamber_integrate(special_start, &rule, n, exec)
}

/// Right side of the Chebyshev form of Selberg's integral,
/// `∫_{[−1,1]^N} |Δ(ξ)|^{2γ} Π (1 − ξ_j²)^{1/2} dξ`.
pub fn selberg_chebyshev(n: usize, gamma: f64) -> f64 {
    let nf = n as f64;
    let mut ln = (gamma * nf * (nf - 1.0) + 2.0 * nf) * 2f64.ln();
    for j in 0..n {
        let jf = j as f64;
        ln += ln_gamma(1.0 + gamma + jf * gamma) + 2.0 * ln_gamma(gamma * jf + 1.5)
            - ln_gamma(1.0 + gamma)
            - ln_gamma(gamma * (nf + jf - 1.0) + 3.0);
    }
    ln.exp()
}

/// `∫_W p^{π/2}_N` from Selberg's integral: `2^{N²} π^{−N} S_N(1) / N!`.
pub fn special_start_mass_selberg(n: usize) -> f64 {
    2f64.powi((n * n) as i32) * PI.powi(-(n as i32)) * selberg_chebyshev(n, 1.0) / factorial(n)
}

/// Comparison of `f∂_N(L, ρ|φ)/ĥ_N(φ)` with `2^{N²}/(π^N C_N(L)) ĥ_N(ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchurLimit {
    pub ratio: f64,
    pub limit: f64,
    pub rel_discrepancy: f64,
}

/// Evaluate `f∂_N(L, ρ|φ)/ĥ_N(φ)` at `φ` (typically near `(π/2, …, π/2)`)
/// against its leading-order special-start value.
///
/// The ratio is computed from the frequency expansion with the common
/// `ĥ_N(φ)` divided out of each alternant, so it stays accurate when the
/// entries of `φ` nearly coincide. The two sides differ at relative order
/// `e^{−2L}`, from partitions with `Ã_λ(π/2) ≠ 0`.
pub fn schur_limit_factor(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    phi: &[f64],
    rho: &WeylPoint,
) -> Result<SchurLimit> {
    let n = rho.len();
    if phi.len() != n {
        return Err(domain("φ and ρ must have the same length"));
    }
    check_open_angles(phi)?;
    let hp = hat_h(phi);
    if hp == 0.0 {
        return Err(domain("ĥ_N(φ) vanishes"));
    }
    let kernel = SineKernel::boundary(cfg, pol)?;
    let hadamard = (n as f64).powf(n as f64);
    let cb = crate::rect_kernels::CauchyBinet::new(&kernel, n, pol, hadamard, None)?;
    let s = cb.sum(|f| sine_alternant(f, phi) / hp * sine_alternant(f, rho.angles()));
    let ratio = s.unscaled().value;
    let limit = 2f64.powi((n * n) as i32) * PI.powi(-(n as i32)) / c_factor(n, cfg.width())
        * hat_h(rho.angles());
    Ok(SchurLimit { ratio, limit, rel_discrepancy: (ratio / limit - 1.0).abs() })
}

fn log_radius(r: f64) -> Result<f64> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(domain(format!("radius {r} must exceed 1")));
    }
    Ok(r.ln())
}

/// `K̂^i_N(re^{iθ}, r′e^{iθ′}) = K^{π/2}_N(log r, θ; log r′, θ′)/r`.
pub fn kernel_semicircle(
    n: usize,
    r: f64,
    theta: f64,
    rp: f64,
    thetap: f64,
    pol: &SeriesPolicy,
) -> Result<TailBounded> {
    let spec = KernelSpec::new(n, log_radius(r)?, theta, log_radius(rp)?, thetap)?;
    Ok(kernel_strip(&spec, pol)?.scale(1.0 / r))
}

/// Same-radius kernel `[sin((N+1)θ) sin Nθ′ − sin Nθ sin((N+1)θ′)]/(πr(cos θ − cos θ′))`,
/// summed directly near the diagonal.
pub fn kernel_semicircle_same_radius(n: usize, r: f64, theta: f64, thetap: f64) -> Result<f64> {
    log_radius(r)?;
    check_open_angles(&[theta, thetap])?;
    let gap = theta.cos() - thetap.cos();
    if gap.abs() < DIAGONAL_SWITCH {
        let s: f64 = (1..=n).map(|k| (k as f64 * theta).sin() * (k as f64 * thetap).sin()).sum();
        return Ok(2.0 / (PI * r) * s);
    }
    let nf = n as f64;
    Ok((((nf + 1.0) * theta).sin() * (nf * thetap).sin()
        - (nf * theta).sin() * ((nf + 1.0) * thetap).sin())
        / (PI * r * gap))
}

/// `ρ̂^i_N(re^{iθ}) = [N sin θ − cos θ cos Nθ sin Nθ + sin θ sin² Nθ]/(πr sin θ)`.
pub fn density_semicircle(n: usize, r: f64, theta: f64) -> Result<f64> {
    log_radius(r)?;
    if !(0.0..=PI).contains(&theta) {
        return Err(domain(format!("angle {theta} outside [0, π]")));
    }
    // symmetric under θ → π − θ; near π the trig calls lose relative accuracy
    let theta = if theta > FRAC_PI_2 { PI - theta } else { theta };
    let s = theta.sin();
    if s.abs() < DENSITY_SWITCH {
        let sum: f64 = (1..=n).map(|k| (k as f64 * theta).sin().powi(2)).sum();
        return Ok(2.0 / (PI * r) * sum);
    }
    let nf = n as f64;
    let (sn, cn) = (nf * theta).sin_cos();
    Ok((nf * s - theta.cos() * cn * sn + s * sn * sn) / (PI * r * s))
}

/// Two-point function of first passage points at `re^{iθ}` and `r′e^{iθ′}`.
///
/// On one arc this is `ρ̂ρ̂′ − K̂²`. Across arcs (`r < r′`, or swapped) it is
/// `ρ̂ρ̂′ + 4/(π² r r′) · Σ_{n≤N}(…) · Σ_{m>N}(…)`.
pub fn two_point_semicircle(
    n: usize,
    r: f64,
    theta: f64,
    rp: f64,
    thetap: f64,
    pol: &SeriesPolicy,
) -> Result<TailBounded> {
    let rho = density_semicircle(n, r, theta)?;
    let rhop = density_semicircle(n, rp, thetap)?;
    check_open_angles(&[theta, thetap])?;
    if r == rp {
        let k = kernel_semicircle_same_radius(n, r, theta, thetap)?;
        return Ok(TailBounded::exact(rho * rhop - k * k));
    }
    let (r, theta, rp, thetap) = if r < rp { (r, theta, rp, thetap) } else { (rp, thetap, r, theta) };
    let (x, xp) = (log_radius(r)?, log_radius(rp)?);
    let near = KernelSpec::new(n, x, theta, xp, thetap)?;
    let fin = finite_part(&near) / FRAC_2_PI;
    let far = KernelSpec::new(n, xp, thetap, x, theta)?;
    let tail = tail_part(&far, pol)?.scale(-1.0 / FRAC_2_PI);
    let c = 4.0 / (PI * PI * r * rp);
    Ok(TailBounded::new(rho * rhop + c * fin * tail.value, c * fin.abs() * tail.bound))
}

/// Same two-point function as the 2×2 determinant of kernel values.
pub fn two_point_determinant(
    n: usize,
    r: f64,
    theta: f64,
    rp: f64,
    thetap: f64,
    pol: &SeriesPolicy,
) -> Result<f64> {
    let k = |a: f64, b: f64, c: f64, d: f64| kernel_semicircle(n, a, b, c, d, pol).map(|v| v.value);
    Ok(k(r, theta, r, theta)? * k(rp, thetap, rp, thetap)?
        - k(r, theta, rp, thetap)? * k(rp, thetap, r, theta)?)
}

/// Coordinates of the scaling window `r = N + u`, `θ = a/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledCoordinates {
    pub u: f64,
    pub a: f64,
    pub up: f64,
    pub ap: f64,
}

/// `∫_{s0}^{s1} e^{−cs} cos(bs) ds`, with `s1 = ∞` allowed when `c > 0`.
fn exp_cos_integral(c: f64, b: f64, s0: f64, s1: f64) -> f64 {
    let d = c * c + b * b;
    if d == 0.0 {
        return s1 - s0;
    }
    let prim = |s: f64| {
        if s.is_infinite() {
            0.0
        } else {
            (-c * s).exp() * (-c * (b * s).cos() + b * (b * s).sin()) / d
        }
    };
    prim(s1) - prim(s0)
}

/// Scaling limit of the semicircle kernel:
/// `(2/π) ∫_0^1 e^{−(u−u′)s} sin(as) sin(a′s) ds` for `u < u′`, and
/// `−(2/π) ∫_1^∞ e^{−(u−u′)s} sin(as) sin(a′s) ds` for `u > u′`.
pub fn limit_kernel(sc: &ScaledCoordinates) -> Result<f64> {
    let c = sc.u - sc.up;
    let (d, s) = (sc.a - sc.ap, sc.a + sc.ap);
    let piece = |s0: f64, s1: f64| {
        0.5 * (exp_cos_integral(c, d, s0, s1) - exp_cos_integral(c, s, s0, s1))
    };
    if c < 0.0 {
        Ok(FRAC_2_PI * piece(0.0, 1.0))
    } else if c > 0.0 {
        Ok(-FRAC_2_PI * piece(1.0, f64::INFINITY))
    } else {
        Err(Error::Domain("the limit kernel is not defined at u = u′".into()))
    }
}

/// Semicircle kernel at `((N+u)e^{ia/N}, (N+u′)e^{ia′/N})`.
pub fn scaled_kernel(n: usize, sc: &ScaledCoordinates, pol: &SeriesPolicy) -> Result<TailBounded> {
    let nf = n as f64;
    kernel_semicircle(n, nf + sc.u, sc.a / nf, nf + sc.up, sc.ap / nf, pol)
}
