//! Closed-form kernels of the rectangle `R_L = (0, L) × (0, π)`.
//!
//! Both kernels are sine series in the vertical coordinate:
//!
//! * Poisson kernel from `x + iθ` to the right edge `L + iρ`:
//!   `(2/π) Σ sinh(nx)/sinh(nL) · sin(nθ) sin(nρ)`;
//! * boundary Poisson kernel from the left edge `iφ` to `L + iρ`:
//!   `(2/π) Σ n/sinh(nL) · sin(nφ) sin(nρ)`.
//!
//! Every series is truncated at the first index where an exact geometric
//! majorant of the remaining terms drops below the policy tolerance, and the
//! majorant is returned with the value. Determinants of these kernels are
//! available two ways: LU on the matrix of kernel values, and a graded sum
//! over partitions (Cauchy–Binet) that keeps full relative accuracy when the
//! determinant is many orders of magnitude below its entries.

use std::f64::consts::{FRAC_2_PI, PI};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numerics::linalg::{det_with_bound, log_abs_det};
use crate::numerics::partitions::{binomial, partitions_of};
use crate::numerics::series::{
    geometric_tail, linear_geometric_tail, ln_sinh, ln_sinh_ratio, sinh_ratio,
};
use crate::numerics::TailBounded;
use crate::weyl::{check_open_angles, WeylPoint};

pub use crate::numerics::partitions::Partition;

/// Truncation contract for every series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPolicy {
    /// Absolute target for the certified tail bound.
    pub tol: f64,
    /// Hard cap on the series index.
    pub n_max: u64,
    /// Smallest geometric separation accepted (e.g. `L − x`).
    pub min_gap: f64,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        SeriesPolicy { tol: 1e-15, n_max: 100_000, min_gap: 1e-3 }
    }
}

impl SeriesPolicy {
    pub fn new(tol: f64, n_max: u64, min_gap: f64) -> Result<Self> {
        if !(tol > 0.0) || n_max < 1 || !(min_gap > 0.0) {
            return Err(domain(format!(
                "invalid series policy tol={tol} n_max={n_max} min_gap={min_gap}"
            )));
        }
        Ok(SeriesPolicy { tol, n_max, min_gap })
    }

    pub fn with_tol(self, tol: f64) -> Self {
        SeriesPolicy { tol, ..self }
    }
}

/// The rectangle `(0, L) × (0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectConfig {
    width: f64,
}

impl RectConfig {
    pub fn new(width: f64) -> Result<Self> {
        if !(width > 0.0) || !width.is_finite() {
            return Err(domain(format!("rectangle width {width} must be positive")));
        }
        Ok(RectConfig { width })
    }

    pub fn width(&self) -> f64 {
        self.width
    }
}

/// A sine-series kernel `Σ c_n sin(nθ) sin(nρ)` together with an exact
/// majorant `c_n <= C · n^p · e^{−g n}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SineKernel {
    /// Poisson kernel `H_{R_L}(x + iθ, L + iρ)`.
    Inner { x: f64, width: f64 },
    /// Boundary Poisson kernel `H_{∂R_L}(iφ, L + iρ)`.
    Boundary { width: f64 },
}

impl SineKernel {
    pub fn inner(cfg: &RectConfig, pol: &SeriesPolicy, x: f64) -> Result<Self> {
        let l = cfg.width();
        if !(x > 0.0 && x < l) {
            return Err(domain(format!("inner point x={x} must satisfy 0 < x < L={l}")));
        }
        if l - x < pol.min_gap {
            return Err(Error::Precision { gap: l - x, min_gap: pol.min_gap });
        }
        Ok(SineKernel::Inner { x, width: l })
    }

    pub fn boundary(cfg: &RectConfig, pol: &SeriesPolicy) -> Result<Self> {
        let l = cfg.width();
        if l < pol.min_gap {
            return Err(Error::Precision { gap: l, min_gap: pol.min_gap });
        }
        Ok(SineKernel::Boundary { width: l })
    }

    /// Coefficient `c_n`, including the `2/π` prefactor.
    pub fn coef(&self, n: u64) -> f64 {
        match *self {
            SineKernel::Inner { x, width } => FRAC_2_PI * sinh_ratio(n, x, width),
            SineKernel::Boundary { width } => {
                let t = n as f64 * width;
                FRAC_2_PI * 2.0 * n as f64 * (-t).exp() / (-(-2.0 * t).exp_m1())
            }
        }
    }

    /// `ln c_n`, finite where `c_n` underflows.
    pub fn ln_coef(&self, n: u64) -> f64 {
        match *self {
            SineKernel::Inner { x, width } => FRAC_2_PI.ln() + ln_sinh_ratio(n, x, width),
            SineKernel::Boundary { width } => {
                FRAC_2_PI.ln() + (n as f64).ln() - ln_sinh(n as f64 * width)
            }
        }
    }

    /// `(C, p, g)` of the majorant `C n^p e^{−g n}`.
    pub(crate) fn envelope(&self) -> (f64, i32, f64) {
        match *self {
            SineKernel::Inner { x, width } => {
                (FRAC_2_PI / (-(-2.0 * width).exp_m1()), 0, width - x)
            }
            SineKernel::Boundary { width } => {
                (2.0 * FRAC_2_PI / (-(-2.0 * width).exp_m1()), 1, width)
            }
        }
    }

    /// Certified bound on `Σ_{n>k} |c_n|`.
    pub fn tail(&self, k: u64) -> f64 {
        let (c, p, g) = self.envelope();
        let q = (-g).exp();
        if p == 0 {
            geometric_tail(c, q, k)
        } else {
            linear_geometric_tail(c, q, k)
        }
    }

    /// Smallest `k` with `tail(k) < tol`, or a truncation error.
    pub fn cutoff(&self, pol: &SeriesPolicy) -> Result<u64> {
        let (_, _, g) = self.envelope();
        // geometric decay: start from the pure-exponential estimate and walk
        let mut k = ((-(pol.tol.ln()) / g).floor() as u64).saturating_sub(2).max(1);
        k = k.min(pol.n_max);
        while self.tail(k) >= pol.tol && k > 1 && self.tail(k - 1) < pol.tol {
            k -= 1;
        }
        while self.tail(k) >= pol.tol {
            if k >= pol.n_max {
                return Err(Error::Truncation { achieved: self.tail(k), terms: k as usize, tol: pol.tol });
            }
            k += 1;
        }
        // step back while still certified
        while k > 1 && self.tail(k - 1) < pol.tol {
            k -= 1;
        }
        Ok(k)
    }

    /// `Σ_n c_n sin(nθ) sin(nρ)` with its certified tail.
    pub fn eval(&self, pol: &SeriesPolicy, theta: f64, rho: f64) -> Result<TailBounded> {
        let k = self.cutoff(pol)?;
        let mut s = 0.0;
        for n in 1..=k {
            let nf = n as f64;
            s += self.coef(n) * (nf * theta).sin() * (nf * rho).sin();
        }
        Ok(TailBounded::new(s, self.tail(k)))
    }

    /// `ln_scale, value, bound` with `kernel = e^{ln_scale} (value ± bound)`,
    /// scaled by the first coefficient so that nothing underflows.
    pub fn eval_scaled(&self, pol: &SeriesPolicy, theta: f64, rho: f64) -> Result<ScaledSum> {
        let ln1 = self.ln_coef(1);
        let (c, p, g) = self.envelope();
        let q = (-g).exp();
        // relative tail: Σ_{n>k} C n^p q^n / c_1
        let rel_tail = |k: u64| -> f64 {
            let t = if p == 0 { geometric_tail(c, q, k) } else { linear_geometric_tail(c, q, k) };
            (t.ln() - ln1).exp()
        };
        let mut k = 1u64;
        while rel_tail(k) >= pol.tol {
            if k >= pol.n_max {
                return Err(Error::Truncation { achieved: rel_tail(k), terms: k as usize, tol: pol.tol });
            }
            k += 1;
        }
        let mut s = 0.0;
        for n in 1..=k {
            let nf = n as f64;
            s += (self.ln_coef(n) - ln1).exp() * (nf * theta).sin() * (nf * rho).sin();
        }
        Ok(ScaledSum { ln_scale: ln1, value: s, bound: rel_tail(k) })
    }
}

/// `e^{ln_scale} · (value ± bound)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledSum {
    pub ln_scale: f64,
    pub value: f64,
    pub bound: f64,
}

impl ScaledSum {
    pub fn unscaled(&self) -> TailBounded {
        let s = self.ln_scale.exp();
        TailBounded::new(self.value * s, self.bound * s)
    }

    /// `ln |value|`, including the scale.
    pub fn ln_abs(&self) -> f64 {
        self.ln_scale + self.value.abs().ln()
    }
}

/// Index sets `S = {n_1 < … < n_N}` of a graded Cauchy–Binet sum
/// `Σ_S Π_{n∈S} c_n · term(S)`, with their weights `Π c_n` relative to
/// `e^{ln_scale}` and a certified relative bound on everything left out.
///
/// Sets are visited by partition size `Σ n − N(N+1)/2`. `term_bound` must
/// bound `|term(S)|` uniformly. With `cap = Some(k)` only grades `<= k` are
/// kept; otherwise grades are added until the relative tail drops below
/// `pol.tol`.
#[derive(Debug, Clone)]
pub struct CauchyBinet {
    pub ln_scale: f64,
    pub bound: f64,
    pub terms: Vec<(Vec<u64>, f64)>,
}

impl CauchyBinet {
    pub fn new(
        kernel: &SineKernel,
        n: usize,
        pol: &SeriesPolicy,
        term_bound: f64,
        cap: Option<u32>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(domain("empty index set"));
        }
        let ln_scale: f64 = (1..=n as u64).map(|j| kernel.ln_coef(j)).sum();
        let (c, p, g) = kernel.envelope();
        let base = (n * (n + 1) / 2) as f64;
        let nf = n as f64;
        // ln of the grade-k majorant relative to e^{ln_scale}
        let ln_grade = |k: u64| -> f64 {
            let s = k as f64 + base;
            binomial(k + n as u64 - 1, n as u64 - 1).ln()
                + nf * c.ln()
                + p as f64 * nf * (s / nf).ln()
                - g * s
                + term_bound.ln()
                - ln_scale
        };
        let tail_after = |k: u64| -> f64 {
            // successive grade ratios decrease, so once one is below 1/2 the
            // remainder is dominated by a geometric series
            let mut total = 0.0;
            let mut j = k + 1;
            loop {
                let lt = ln_grade(j);
                let r = (ln_grade(j + 1) - lt).exp();
                if r < 0.5 {
                    return total + lt.exp() / (1.0 - r);
                }
                total += lt.exp();
                j += 1;
                if j > k + 100_000 {
                    return f64::INFINITY;
                }
            }
        };
        let mut terms = Vec::new();
        let mut k: u32 = 0;
        loop {
            for lambda in partitions_of(k, n) {
                let mut freqs = lambda.frequencies();
                freqs.reverse();
                let ln_w: f64 = freqs.iter().map(|&f| kernel.ln_coef(f)).sum::<f64>() - ln_scale;
                let w = ln_w.exp();
                if w != 0.0 {
                    terms.push((freqs, w));
                }
            }
            let bound = tail_after(k as u64);
            let done = match cap {
                Some(cap) => k >= cap,
                None => bound < pol.tol,
            };
            if done {
                return Ok(CauchyBinet { ln_scale, bound, terms });
            }
            k += 1;
            if k as u64 + n as u64 > pol.n_max {
                return Err(Error::Truncation { achieved: bound, terms: k as usize, tol: pol.tol });
            }
        }
    }

    /// `Σ_S w_S term(S)`; `term` receives the frequencies in increasing order.
    pub fn sum<F: FnMut(&[u64]) -> f64>(&self, mut term: F) -> ScaledSum {
        let value = self.terms.iter().map(|(s, w)| w * term(s)).sum();
        ScaledSum { ln_scale: self.ln_scale, value, bound: self.bound }
    }
}

/// Poisson kernel `H_{R_L}(x + iθ, L + iρ)`.
pub fn poisson_rect(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    x: f64,
    theta: f64,
    rho: f64,
) -> Result<TailBounded> {
    check_open_angles(&[theta, rho])?;
    SineKernel::inner(cfg, pol, x)?.eval(pol, theta, rho)
}

/// Boundary Poisson kernel `H_{∂R_L}(iφ, L + iρ)`.
pub fn boundary_poisson_rect(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    phi: f64,
    rho: f64,
) -> Result<TailBounded> {
    check_open_angles(&[phi, rho])?;
    SineKernel::boundary(cfg, pol)?.eval(pol, phi, rho)
}

fn kernel_det(
    kernel: &SineKernel,
    pol: &SeriesPolicy,
    left: &[f64],
    right: &[f64],
) -> Result<TailBounded> {
    if left.len() != right.len() || left.is_empty() {
        return Err(domain(format!(
            "determinant needs equal nonzero lengths, got {} and {}",
            left.len(),
            right.len()
        )));
    }
    check_open_angles(left)?;
    check_open_angles(right)?;
    let n = left.len();
    let k = kernel.cutoff(pol)?;
    let coefs: Vec<f64> = (1..=k).map(|m| kernel.coef(m)).collect();
    let sl: Vec<Vec<f64>> = left
        .iter()
        .map(|&t| (1..=k).map(|m| (m as f64 * t).sin()).collect())
        .collect();
    let sr: Vec<Vec<f64>> = right
        .iter()
        .map(|&t| (1..=k).map(|m| (m as f64 * t).sin()).collect())
        .collect();
    let m = DMatrix::from_fn(n, n, |j, l| {
        coefs
            .iter()
            .zip(sl[j].iter().zip(&sr[l]))
            .map(|(c, (a, b))| c * a * b)
            .sum()
    });
    det_with_bound(&m, kernel.tail(k))
}

/// `det[H_{∂R_L}(iφ_j, L + iρ_k)]` by LU, for angles in any order.
/// The sign follows the given orderings.
pub fn fomin_boundary_det_signed(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    phi: &[f64],
    rho: &[f64],
) -> Result<TailBounded> {
    kernel_det(&SineKernel::boundary(cfg, pol)?, pol, phi, rho)
}

/// Fomin determinant of boundary Poisson kernels, `f^∂_N(L, ρ | φ)`.
pub fn fomin_boundary_det(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    phi: &WeylPoint,
    rho: &WeylPoint,
) -> Result<TailBounded> {
    fomin_boundary_det_signed(cfg, pol, phi.angles(), rho.angles())
}

/// `det[H_{R_L}(x + iθ_j, L + iρ_k)]` by LU, for angles in any order.
pub fn fomin_inner_det_signed(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    x: f64,
    theta: &[f64],
    rho: &[f64],
) -> Result<TailBounded> {
    kernel_det(&SineKernel::inner(cfg, pol, x)?, pol, theta, rho)
}

/// Fomin determinant of Poisson kernels, `f_N(x, θ; L, ρ)`.
pub fn fomin_inner_det(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    x: f64,
    theta: &WeylPoint,
    rho: &WeylPoint,
) -> Result<TailBounded> {
    fomin_inner_det_signed(cfg, pol, x, theta.angles(), rho.angles())
}

/// `ĥ_N(θ) = Π sin θ_j · Π_{k<ℓ} (cos θ_ℓ − cos θ_k)`.
pub fn hat_h(theta: &[f64]) -> f64 {
    let mut v: f64 = theta.iter().map(|t| t.sin()).product();
    for k in 0..theta.len() {
        for l in (k + 1)..theta.len() {
            v *= theta[l].cos() - theta[k].cos();
        }
    }
    v
}

/// `det[sin(n_k θ_j)]_{j,k}` for the given frequencies.
pub fn sine_alternant(freqs: &[u64], theta: &[f64]) -> f64 {
    let n = theta.len();
    debug_assert_eq!(freqs.len(), n);
    match n {
        1 => (freqs[0] as f64 * theta[0]).sin(),
        2 => {
            let s = |f: u64, t: f64| (f as f64 * t).sin();
            s(freqs[0], theta[0]) * s(freqs[1], theta[1])
                - s(freqs[1], theta[0]) * s(freqs[0], theta[1])
        }
        _ => {
            let m = DMatrix::from_fn(n, n, |j, k| (freqs[k] as f64 * theta[j]).sin());
            m.lu().determinant()
        }
    }
}

/// Numerator of the modified Schur function: `A_λ(φ) = det[sin((λ_k+N−k+1) φ_j)]`.
pub fn schur_numerator(lambda: &Partition, phi: &[f64]) -> f64 {
    sine_alternant(&lambda.frequencies(), phi)
}

/// `ŝ_λ(φ) = A_λ(φ) / A_∅(φ)`.
pub fn schur_hat(lambda: &Partition, phi: &[f64]) -> f64 {
    schur_numerator(lambda, phi) / schur_numerator(&Partition::empty(phi.len()), phi)
}

/// `a_λ = Π_j (λ_j+N−j+1) / sinh((λ_j+N−j+1) L)`.
pub fn a_lambda(cfg: &RectConfig, lambda: &Partition) -> f64 {
    lambda
        .frequencies()
        .iter()
        .map(|&f| {
            let t = f as f64 * cfg.width();
            2.0 * f as f64 * (-t).exp() / (-(-2.0 * t).exp_m1())
        })
        .product()
}

fn check_pair(phi: &[f64], rho: &[f64]) -> Result<usize> {
    if phi.len() != rho.len() || phi.is_empty() {
        return Err(domain("φ and ρ must have the same nonzero length"));
    }
    check_open_angles(phi)?;
    check_open_angles(rho)?;
    Ok(phi.len())
}

/// Boundary Fomin determinant as the partition expansion
/// `(2/π)^N Σ_λ a_λ A_λ(φ) A_λ(ρ)`, which equals
/// `(2/π)^N det[sin(jφ_k)] det[sin(ℓρ_m)] Σ_λ a_λ ŝ_λ(φ) ŝ_λ(ρ)`.
/// Partitions are summed up to `|λ| <= partition_cap`; the tail estimate
/// must meet `pol.tol` or a truncation error is returned.
pub fn fomin_expansion(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    phi: &[f64],
    rho: &[f64],
    partition_cap: u32,
) -> Result<TailBounded> {
    let s = expansion_scaled(cfg, pol, phi, rho, Some(partition_cap))?;
    let out = s.unscaled();
    if out.bound > pol.tol && s.bound > pol.tol {
        return Err(Error::Truncation {
            achieved: out.bound,
            terms: partition_cap as usize,
            tol: pol.tol,
        });
    }
    Ok(out)
}

/// Partition expansion with the cap chosen automatically from `pol.tol`
/// (interpreted relative to the leading term).
pub fn fomin_expansion_auto(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    phi: &[f64],
    rho: &[f64],
) -> Result<ScaledSum> {
    expansion_scaled(cfg, pol, phi, rho, None)
}

fn expansion_scaled(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    phi: &[f64],
    rho: &[f64],
    cap: Option<u32>,
) -> Result<ScaledSum> {
    let n = check_pair(phi, rho)?;
    let kernel = SineKernel::boundary(cfg, pol)?;
    let hadamard = (n as f64).powf(n as f64);
    let cb = CauchyBinet::new(&kernel, n, pol, hadamard, cap)?;
    Ok(cb.sum(|s| sine_alternant(s, phi) * sine_alternant(s, rho)))
}

/// `ln Λ_{R_L}(φ, ρ)` where `Λ = f^∂_N / Π_j H_{∂R_L}(iφ_j, L+iρ_j)`.
///
/// Evaluated entirely in log space: the numerator through the partition
/// expansion, the diagonal kernels through first-coefficient scaling.
pub fn ln_crossing_ratio(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    phi: &WeylPoint,
    rho: &WeylPoint,
) -> Result<f64> {
    let n = check_pair(phi.angles(), rho.angles())?;
    let num = fomin_expansion_auto(cfg, pol, phi.angles(), rho.angles())?;
    if !(num.value > 0.0) {
        return Err(domain(format!("nonpositive Fomin determinant {:e}", num.value)));
    }
    let kernel = SineKernel::boundary(cfg, pol)?;
    let mut ln_den = 0.0;
    for j in 0..n {
        let h = kernel.eval_scaled(pol, phi.angles()[j], rho.angles()[j])?;
        if h.value == 0.0 {
            return Err(domain("diagonal boundary kernel vanishes"));
        }
        ln_den += h.ln_abs();
    }
    Ok(num.ln_abs() - ln_den)
}

/// `Λ_{R_L}(φ, ρ)`.
pub fn crossing_ratio(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    phi: &WeylPoint,
    rho: &WeylPoint,
) -> Result<f64> {
    Ok(ln_crossing_ratio(cfg, pol, phi, rho)?.exp())
}

/// `ψ_N = N(N−1)/2`.
pub fn crossing_exponent(n: usize) -> f64 {
    (n * (n.saturating_sub(1))) as f64 / 2.0
}

/// Large-`L` limit of `Λ e^{ψ_N L}`:
/// `2^{N(N−1)} N! ĥ_N(φ) ĥ_N(ρ) / Π_j sin φ_j sin ρ_j`.
pub fn crossing_prefactor(phi: &[f64], rho: &[f64]) -> f64 {
    let n = phi.len();
    let sines: f64 = phi.iter().chain(rho).map(|t| t.sin()).product();
    2f64.powi((n * (n - 1)) as i32) * crate::numerics::factorial(n) * hat_h(phi) * hat_h(rho)
        / sines
}

/// Least-squares line through `(L, ln Λ)`; returns `(decay rate, intercept)`
/// so that `ln Λ ≈ intercept − rate·L`.
pub fn fit_crossing_exponent(
    pol: &SeriesPolicy,
    phi: &WeylPoint,
    rho: &WeylPoint,
    widths: &[f64],
) -> Result<(f64, f64)> {
    let pts = widths
        .iter()
        .map(|&l| Ok((l, ln_crossing_ratio(&RectConfig::new(l)?, pol, phi, rho)?)))
        .collect::<Result<Vec<_>>>()?;
    let (slope, intercept) = least_squares(&pts);
    Ok((-slope, intercept))
}

/// Ordinary least squares `y = a x + b`, returns `(a, b)`.
pub fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let a = sxy / sxx;
    (a, my - a * mx)
}

/// Leading large-`L` form of the boundary Fomin determinant:
/// `2^{N(N+1)} π^{−N} N! e^{−N(N+1)L/2} ĥ_N(φ) ĥ_N(ρ)`.
pub fn fomin_boundary_asymptotic(cfg: &RectConfig, phi: &[f64], rho: &[f64]) -> f64 {
    let n = phi.len();
    let nf = n as f64;
    2f64.powi((n * (n + 1)) as i32) * PI.powi(-(n as i32)) * crate::numerics::factorial(n)
        * (-nf * (nf + 1.0) * cfg.width() / 2.0).exp()
        * hat_h(phi)
        * hat_h(rho)
}

/// `(sign, ln|det|)` of the LU route, for diagnostics.
pub fn ln_fomin_boundary_det_lu(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    phi: &[f64],
    rho: &[f64],
) -> Result<(f64, f64)> {
    let kernel = SineKernel::boundary(cfg, pol)?;
    let n = check_pair(phi, rho)?;
    let m = DMatrix::from_fn(n, n, |j, k| {
        kernel.eval(pol, phi[j], rho[k]).map(|t| t.value).unwrap_or(f64::NAN)
    });
    log_abs_det(&m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol() -> SeriesPolicy {
        SeriesPolicy::default()
    }

    #[test]
    fn dirichlet_zero_at_bottom_edge() {
        let cfg = RectConfig::new(2.0).unwrap();
        let v = poisson_rect(&cfg, &pol(), 1.0, 1e-12, 1.0).unwrap();
        assert!(v.value.abs() < 1e-11);
        let b = boundary_poisson_rect(&cfg, &pol(), 1e-12, 1.0).unwrap();
        assert!(b.value.abs() < 1e-11);
    }

    #[test]
    fn reflection_symmetry() {
        let cfg = RectConfig::new(2.5).unwrap();
        let a = poisson_rect(&cfg, &pol(), 1.3, 0.4, 2.2).unwrap().value;
        let b = poisson_rect(&cfg, &pol(), 1.3, PI - 0.4, PI - 2.2).unwrap().value;
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn precision_gap_enforced() {
        let cfg = RectConfig::new(2.0).unwrap();
        let err = poisson_rect(&cfg, &pol(), 2.0 - 1e-4, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::Precision { .. }));
    }

    #[test]
    fn truncation_error_when_cap_too_small() {
        let cfg = RectConfig::new(2.0).unwrap();
        let tight = SeriesPolicy::new(1e-15, 5, 1e-3).unwrap();
        let err = poisson_rect(&cfg, &tight, 1.9, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::Truncation { .. }));
    }

    #[test]
    fn large_width_boundary_kernel_leading_term() {
        let cfg = RectConfig::new(20.0).unwrap();
        let (phi, rho) = (0.7, 2.1);
        let v = boundary_poisson_rect(&cfg, &pol(), phi, rho).unwrap().value;
        let lead = 4.0 / PI * (-20.0f64).exp() * phi.sin() * rho.sin();
        assert!((v / lead - 1.0).abs() < 1e-8);
    }

    #[test]
    fn one_by_one_determinants_are_kernels() {
        let cfg = RectConfig::new(3.0).unwrap();
        let p = WeylPoint::new(vec![1.1]).unwrap();
        let r = WeylPoint::new(vec![0.4]).unwrap();
        let d = fomin_boundary_det(&cfg, &pol(), &p, &r).unwrap().value;
        let h = boundary_poisson_rect(&cfg, &pol(), 1.1, 0.4).unwrap().value;
        assert_eq!(d, h);
        let d = fomin_inner_det(&cfg, &pol(), 1.0, &p, &r).unwrap().value;
        let h = poisson_rect(&cfg, &pol(), 1.0, 1.1, 0.4).unwrap().value;
        assert_eq!(d, h);
    }

    #[test]
    fn equal_columns_give_zero() {
        let cfg = RectConfig::new(3.0).unwrap();
        let d = fomin_boundary_det_signed(&cfg, &pol(), &[1.0, 2.0], &[1.5, 1.5]).unwrap();
        assert!(d.value.abs() < 1e-18);
    }

    #[test]
    fn transposition_flips_sign() {
        let cfg = RectConfig::new(3.0).unwrap();
        let a = fomin_inner_det_signed(&cfg, &pol(), 1.2, &[0.5, 2.0], &[1.0, 2.5]).unwrap();
        let b = fomin_inner_det_signed(&cfg, &pol(), 1.2, &[2.0, 0.5], &[1.0, 2.5]).unwrap();
        assert!((a.value + b.value).abs() < 1e-16);
    }

    #[test]
    fn hat_h_values() {
        assert_eq!(hat_h(&[PI / 2.0]), 1.0);
        let v = hat_h(&[PI / 3.0, 2.0 * PI / 3.0]);
        assert!((v + 0.75).abs() < 1e-15);
    }

    #[test]
    fn schur_hat_of_empty_partition_is_one() {
        let phi = [0.3, 1.4, 2.6];
        assert!((schur_hat(&Partition::empty(3), &phi) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn expansion_matches_lu_route() {
        let cfg = RectConfig::new(4.0).unwrap();
        let phi = [1.0, 2.0];
        let rho = [1.2, 1.9];
        let lu = fomin_boundary_det_signed(&cfg, &pol(), &phi, &rho).unwrap();
        let ex = fomin_expansion(&cfg, &pol(), &phi, &rho, 12).unwrap();
        assert!(
            (lu.value - ex.value).abs() <= lu.bound + ex.bound + 1e-15 * lu.value.abs().max(1e-300) + 1e-20,
            "{lu:?} vs {ex:?}"
        );
        assert!((lu.value / ex.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn expansion_cap_zero_is_asymptotic_form() {
        let cfg = RectConfig::new(30.0).unwrap();
        let phi = [0.8, 2.0];
        let rho = [1.0, 2.3];
        let loose = pol().with_tol(1e-3);
        let ex = fomin_expansion(&cfg, &loose, &phi, &rho, 0).unwrap();
        let asym = fomin_boundary_asymptotic(&cfg, &phi, &rho);
        assert!((ex.value / asym - 1.0).abs() < 1e-12);
    }

    #[test]
    fn crossing_ratio_is_one_for_single_path() {
        let cfg = RectConfig::new(5.0).unwrap();
        let p = WeylPoint::new(vec![1.0]).unwrap();
        let r = WeylPoint::new(vec![2.0]).unwrap();
        assert!((crossing_ratio(&cfg, &pol(), &p, &r).unwrap() - 1.0).abs() < 1e-13);
    }
}
