//! First-passage-point densities of `N` paths whose loop erasures do not
//! intersect, for the rectangle `R_L` and for the half strip (`L → ∞`).
//!
//! The normalizers
//!
//! * `N∂_N(L, φ) = ∫_W det[H_{∂R_L}(iφ_j, L + iρ_k)] dρ`,
//! * `N_N(x, L, θ) = ∫_W det[H_{R_L}(x + iθ_j, L + iρ_k)] dρ`
//!
//! integrate a single determinant over the Weyl chamber `W`. Such an
//! integrand is antisymmetric, so a full-cube rule would return zero. They
//! are instead expanded over frequency sets `S` (Cauchy–Binet), and each
//! chamber integral of `det[sin(n_i ρ_k)]` is evaluated exactly as a
//! Pfaffian (de Bruijn).

use nalgebra::DMatrix;

use crate::error::{domain, Result};
use crate::numerics::{
    chamber_integrate, factorial, pfaffian, Execution, QuadratureRule, TailBounded,
};
use crate::rect_kernels::{
    fomin_boundary_det_signed, fomin_inner_det_signed, hat_h, sine_alternant, CauchyBinet,
    RectConfig, ScaledSum, SeriesPolicy, SineKernel,
};
use crate::weyl::{ChamberSequence, WeylPoint};

/// `∫_0^π sin(ny) dy`.
fn sine_mass(n: u64) -> f64 {
    if n % 2 == 1 {
        2.0 / n as f64
    } else {
        0.0
    }
}

/// `∫_0^π sin(ny) cos(my) dy`.
fn sine_cosine(n: u64, m: u64) -> f64 {
    if n == m {
        return 0.0;
    }
    let (n, m) = (n as i64, m as i64);
    let part = |k: i64| if k.rem_euclid(2) == 1 { 2.0 / k as f64 } else { 0.0 };
    0.5 * (part(n + m) + part(n - m))
}

/// `∫∫_{y<z} sin(ny) sin(mz) dy dz`.
fn ordered_pair(n: u64, m: u64) -> f64 {
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    (sine_cosine(n, m) - sign * sine_mass(n)) / m as f64
}

/// `∫_{0<ρ_1<…<ρ_N<π} det[sin(n_i ρ_k)] dρ` for frequencies `n_1, …, n_N`.
pub fn sine_chamber_integral(freqs: &[u64]) -> f64 {
    let n = freqs.len();
    if n == 0 {
        return 1.0;
    }
    let size = n + n % 2;
    let mut a = DMatrix::zeros(size, size);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = ordered_pair(freqs[i], freqs[j]) - ordered_pair(freqs[j], freqs[i]);
            a[(i, j)] = v;
            a[(j, i)] = -v;
        }
        if n % 2 == 1 {
            a[(i, n)] = sine_mass(freqs[i]);
            a[(n, i)] = -sine_mass(freqs[i]);
        }
    }
    pfaffian(&a)
}

/// Normalizer as a function of its free angles:
/// `Σ_S w_S det[sin(n θ_j)]_{n∈S}` with `w_S = Π c_n · ∫_W det[sin(n ρ_k)]`.
#[derive(Debug, Clone)]
pub struct NormExpansion {
    n: usize,
    cb: CauchyBinet,
}

impl NormExpansion {
    fn build(kernel: &SineKernel, n: usize, pol: &SeriesPolicy) -> Result<Self> {
        let nf = n as f64;
        let hadamard = nf.powf(nf) * std::f64::consts::PI.powi(n as i32) / factorial(n);
        let mut cb = CauchyBinet::new(kernel, n, pol, hadamard, None)?;
        for (s, w) in cb.terms.iter_mut() {
            *w *= sine_chamber_integral(s);
        }
        cb.terms.retain(|(_, w)| *w != 0.0);
        Ok(NormExpansion { n, cb })
    }

    /// Expansion of `N∂_N(L, ·)`.
    pub fn boundary(cfg: &RectConfig, pol: &SeriesPolicy, n: usize) -> Result<Self> {
        Self::build(&SineKernel::boundary(cfg, pol)?, n, pol)
    }

    /// Expansion of `N_N(x, L, ·)`.
    pub fn inner(cfg: &RectConfig, pol: &SeriesPolicy, x: f64, n: usize) -> Result<Self> {
        Self::build(&SineKernel::inner(cfg, pol, x)?, n, pol)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Value at `angles` (any order; antisymmetric in them).
    pub fn eval(&self, angles: &[f64]) -> Result<ScaledSum> {
        if angles.len() != self.n {
            return Err(domain(format!(
                "expected {} angles, got {}",
                self.n,
                angles.len()
            )));
        }
        Ok(self.cb.sum(|s| sine_alternant(s, angles)))
    }
}

fn ratio(a: &ScaledSum, b: &ScaledSum) -> f64 {
    (a.ln_scale - b.ln_scale).exp() * (a.value / b.value)
}

/// `N∂_N(L, φ)` in scaled form.
pub fn norm_boundary_scaled(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    phi: &WeylPoint,
) -> Result<ScaledSum> {
    NormExpansion::boundary(cfg, pol, phi.len())?.eval(phi.angles())
}

/// `N∂_N(L, φ)`, the total weight of admissible exits.
pub fn norm_boundary(cfg: &RectConfig, pol: &SeriesPolicy, phi: &WeylPoint) -> Result<TailBounded> {
    Ok(norm_boundary_scaled(cfg, pol, phi)?.unscaled())
}

/// `N_N(x, L, θ)` in scaled form.
pub fn norm_inner_scaled(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    x: f64,
    theta: &WeylPoint,
) -> Result<ScaledSum> {
    NormExpansion::inner(cfg, pol, x, theta.len())?.eval(theta.angles())
}

/// `N_N(x, L, θ)`.
pub fn norm_inner(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    x: f64,
    theta: &WeylPoint,
) -> Result<TailBounded> {
    Ok(norm_inner_scaled(cfg, pol, x, theta)?.unscaled())
}

/// `∫_W ĥ_N(ρ) dρ`.
pub fn hat_h_chamber_integral(n: usize) -> f64 {
    let freqs: Vec<u64> = (1..=n as u64).collect();
    sine_chamber_integral(&freqs) / 2f64.powi((n * (n - 1) / 2) as i32)
}

/// Large-`L` form of `N∂_N(L, φ)`:
/// `2^{N(N+1)} π^{−N} N! e^{−N(N+1)L/2} ĥ_N(φ) ∫_W ĥ_N`.
pub fn norm_boundary_asymptotic(cfg: &RectConfig, phi: &WeylPoint) -> f64 {
    let n = phi.len();
    let nf = n as f64;
    2f64.powi((n * (n + 1)) as i32)
        * std::f64::consts::PI.powi(-(n as i32))
        * factorial(n)
        * (-nf * (nf + 1.0) * cfg.width() / 2.0).exp()
        * hat_h(phi.angles())
        * hat_h_chamber_integral(n)
}

/// Large-`L` form of `N_N(x, L, θ)`:
/// `2^{N(N+1)} π^{−N} e^{−N(N+1)L/2} ĥ_N(θ) Π sinh(jx) ∫_W ĥ_N`.
pub fn norm_inner_asymptotic(cfg: &RectConfig, x: f64, theta: &WeylPoint) -> f64 {
    let n = theta.len();
    norm_boundary_asymptotic(cfg, theta) / factorial(n) * sinh_product(n, x)
}

fn sinh_product(n: usize, x: f64) -> f64 {
    (1..=n).map(|j| (j as f64 * x).sinh()).product()
}

/// `C_N(x) = Π_{j≤N} sinh(jx) / N!`.
pub fn c_factor(n: usize, x: f64) -> f64 {
    sinh_product(n, x) / factorial(n)
}

/// Density `p^L_N(x, ·|φ)` with its normalizers precomputed, for repeated
/// evaluation (quadrature, grids).
#[derive(Debug, Clone)]
pub struct FirstPassage {
    pol: SeriesPolicy,
    x: f64,
    phi: Vec<f64>,
    inner: NormExpansion,
    ln_boundary: ScaledSum,
}

impl FirstPassage {
    pub fn new(cfg: &RectConfig, pol: &SeriesPolicy, x: f64, phi: &WeylPoint) -> Result<Self> {
        let inner = NormExpansion::inner(cfg, pol, x, phi.len())?;
        let ln_boundary = norm_boundary_scaled(cfg, pol, phi)?;
        Ok(FirstPassage { pol: *pol, x, phi: phi.angles().to_vec(), inner, ln_boundary })
    }

    /// Density at `θ`, which may be unordered; the value is symmetric.
    pub fn density(&self, theta: &[f64]) -> Result<f64> {
        let cut = RectConfig::new(self.x)?;
        let f = fomin_boundary_det_signed(&cut, &self.pol, &self.phi, theta)?.value;
        if f == 0.0 {
            return Ok(0.0);
        }
        let norm = self.inner.eval(theta)?;
        Ok(f * ratio(&norm, &self.ln_boundary))
    }
}

/// `p^L_N(x, θ|φ) = f∂_N(x, θ|φ) N_N(x, L, θ) / N∂_N(L, φ)`.
pub fn pdf_first_passage_finite(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    x: f64,
    theta: &WeylPoint,
    phi: &WeylPoint,
) -> Result<f64> {
    same_len(theta, phi)?;
    FirstPassage::new(cfg, pol, x, phi)?.density(theta.angles())
}

/// `p_N(x, θ|φ) = C_N(x) f∂_N(x, θ|φ) ĥ_N(θ)/ĥ_N(φ)`.
pub fn pdf_first_passage(
    pol: &SeriesPolicy,
    x: f64,
    theta: &WeylPoint,
    phi: &WeylPoint,
) -> Result<f64> {
    same_len(theta, phi)?;
    first_passage_infinite(pol, x, theta.angles(), phi.angles())
}

fn first_passage_infinite(pol: &SeriesPolicy, x: f64, theta: &[f64], phi: &[f64]) -> Result<f64> {
    let hp = hat_h(phi);
    if hp == 0.0 {
        return Err(domain("coincident starting angles"));
    }
    let cut = RectConfig::new(x)?;
    let f = fomin_boundary_det_signed(&cut, pol, phi, theta)?.value;
    Ok(c_factor(phi.len(), x) * f * hat_h(theta) / hp)
}

fn same_len(a: &WeylPoint, b: &WeylPoint) -> Result<()> {
    if a.len() != b.len() {
        return Err(domain(format!("angle counts differ: {} vs {}", a.len(), b.len())));
    }
    Ok(())
}

/// `q^L_N(x_m, θ^m; x_{m+1}, θ^{m+1})
///  = N_N(x_{m+1}, L, θ^{m+1}) / N_N(x_m, L, θ^m) · f_N(x_m, θ^m; x_{m+1}, θ^{m+1})`.
pub fn transition_factor(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    x_m: f64,
    theta_m: &WeylPoint,
    x_next: f64,
    theta_next: &WeylPoint,
) -> Result<f64> {
    same_len(theta_m, theta_next)?;
    if !(0.0 < x_m && x_m < x_next && x_next < cfg.width()) {
        return Err(domain(format!(
            "need 0 < x_m < x_next < L, got {x_m}, {x_next}, {}",
            cfg.width()
        )));
    }
    let n = theta_m.len();
    let from = NormExpansion::inner(cfg, pol, x_m, n)?.eval(theta_m.angles())?;
    if from.value == 0.0 {
        return Err(domain("vanishing normalizer at the earlier cut"));
    }
    let to = NormExpansion::inner(cfg, pol, x_next, n)?.eval(theta_next.angles())?;
    let f = fomin_inner_det_signed(
        &RectConfig::new(x_next)?,
        pol,
        x_m,
        theta_m.angles(),
        theta_next.angles(),
    )?
    .value;
    Ok(ratio(&to, &from) * f)
}

fn determinant_chain(
    pol: &SeriesPolicy,
    cuts: &[f64],
    thetas: &[&[f64]],
    phi: &[f64],
) -> Result<f64> {
    let mut v = fomin_boundary_det_signed(&RectConfig::new(cuts[0])?, pol, phi, thetas[0])?.value;
    for m in 0..cuts.len() - 1 {
        if v == 0.0 {
            return Ok(0.0);
        }
        v *= fomin_inner_det_signed(
            &RectConfig::new(cuts[m + 1])?,
            pol,
            cuts[m],
            thetas[m],
            thetas[m + 1],
        )?
        .value;
    }
    Ok(v)
}

/// Joint density of first passage points on the cuts of `seq`.
///
/// With a finite width (taken from `seq`) this is
/// `N_N(x_M, L, θ^M)/N∂_N(L, φ) · f∂_N(x_1, θ^1|φ) Π f_N(x_m, θ^m; x_{m+1}, θ^{m+1})`;
/// without one, the prefactor becomes `C_N(x_M) ĥ_N(θ^M)/ĥ_N(φ)`.
pub fn joint_pdf(
    pol: &SeriesPolicy,
    seq: &ChamberSequence,
    thetas: &[WeylPoint],
    phi: &WeylPoint,
) -> Result<f64> {
    if thetas.len() != seq.len() || thetas.is_empty() {
        return Err(domain(format!(
            "{} cuts but {} angle sets",
            seq.len(),
            thetas.len()
        )));
    }
    for t in thetas {
        same_len(t, phi)?;
    }
    let raw: Vec<&[f64]> = thetas.iter().map(|t| t.angles()).collect();
    joint_raw(pol, seq, &raw, phi.angles())
}

fn joint_raw(pol: &SeriesPolicy, seq: &ChamberSequence, thetas: &[&[f64]], phi: &[f64]) -> Result<f64> {
    let cuts = seq.cuts();
    let last = *cuts.last().expect("nonempty");
    let chain = determinant_chain(pol, cuts, thetas, phi)?;
    if chain == 0.0 {
        return Ok(0.0);
    }
    let n = phi.len();
    let theta_m = thetas[thetas.len() - 1];
    match seq.width() {
        Some(l) => {
            let cfg = RectConfig::new(l)?;
            let top = NormExpansion::inner(&cfg, pol, last, n)?.eval(theta_m)?;
            let bottom = NormExpansion::boundary(&cfg, pol, n)?.eval(phi)?;
            Ok(ratio(&top, &bottom) * chain)
        }
        None => {
            let hp = hat_h(phi);
            if hp == 0.0 {
                return Err(domain("coincident starting angles"));
            }
            Ok(c_factor(n, last) * hat_h(theta_m) / hp * chain)
        }
    }
}

/// `∫_W p^L_N(x, θ|φ) dθ` by cube quadrature of the symmetric integrand.
pub fn first_passage_mass(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    x: f64,
    phi: &WeylPoint,
    order: usize,
    exec: Execution,
) -> Result<f64> {
    let fp = FirstPassage::new(cfg, pol, x, phi)?;
    fp.density(phi.angles())?;
    let rule = QuadratureRule::cached(order);
    Ok(chamber_integrate(|t| fp.density(t).unwrap_or(f64::NAN), &rule, phi.len(), exec))
}

type Prefactor = Box<dyn Fn(&[f64]) -> Result<f64> + Sync>;

/// `∫_W p^L_N(x_1, θ|φ) q^L_N(x_1, θ; x_2, θ_2) dθ`, which should equal
/// `p^L_N(x_2, θ_2|φ)`.
#[allow(clippy::too_many_arguments)]
pub fn propagate(
    cfg: &RectConfig,
    pol: &SeriesPolicy,
    x1: f64,
    x2: f64,
    theta2: &WeylPoint,
    phi: &WeylPoint,
    order: usize,
    exec: Execution,
) -> Result<f64> {
    let n = phi.len();
    let fp = FirstPassage::new(cfg, pol, x1, phi)?;
    let from = NormExpansion::inner(cfg, pol, x1, n)?;
    let to = NormExpansion::inner(cfg, pol, x2, n)?.eval(theta2.angles())?;
    let width2 = RectConfig::new(x2)?;
    let rule = QuadratureRule::cached(order);
    let integrand = |t: &[f64]| -> f64 {
        let p = fp.density(t).unwrap_or(f64::NAN);
        if p == 0.0 {
            return 0.0;
        }
        let f = fomin_inner_det_signed(&width2, pol, x1, t, theta2.angles())
            .map(|v| v.value)
            .unwrap_or(f64::NAN);
        let nm = from.eval(t).map(|s| ratio(&to, &s)).unwrap_or(f64::NAN);
        p * f * nm
    };
    Ok(chamber_integrate(integrand, &rule, n, exec))
}

/// Total mass of the two-cut joint density over `W × W` using node tables
/// on an `order`-point rule per axis.
pub fn joint_mass_two_cuts(
    pol: &SeriesPolicy,
    seq: &ChamberSequence,
    phi: &WeylPoint,
    order: usize,
    exec: Execution,
) -> Result<f64> {
    if seq.len() != 2 {
        return Err(domain("joint mass needs exactly two cuts"));
    }
    let (x1, x2) = (seq.cuts()[0], seq.cuts()[1]);
    let n = phi.len();
    let rule = QuadratureRule::cached(order);
    let q = rule.len();
    let first = SineKernel::boundary(&RectConfig::new(x1)?, pol)?;
    let step = SineKernel::inner(&RectConfig::new(x2)?, pol, x1)?;
    let mut b = vec![vec![0.0; q]; n];
    for (j, row) in b.iter_mut().enumerate() {
        for (a, v) in row.iter_mut().enumerate() {
            *v = first.eval(pol, phi.angles()[j], rule.nodes[a])?.value;
        }
    }
    let mut t = vec![vec![0.0; q]; q];
    for (a, row) in t.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = step.eval(pol, rule.nodes[a], rule.nodes[c])?.value;
        }
    }
    let prefactor: Prefactor = match seq.width() {
        Some(l) => {
            let cfg = RectConfig::new(l)?;
            let top = NormExpansion::inner(&cfg, pol, x2, n)?;
            let bottom = NormExpansion::boundary(&cfg, pol, n)?.eval(phi.angles())?;
            Box::new(move |th: &[f64]| Ok(ratio(&top.eval(th)?, &bottom)))
        }
        None => {
            let c = c_factor(n, x2) / hat_h(phi.angles());
            Box::new(move |th: &[f64]| Ok(c * hat_h(th)))
        }
    };
    let tuples = odometer(q, n);
    let outer = exec.map(&tuples, |bi| -> Result<f64> {
        let th: Vec<f64> = bi.iter().map(|&i| rule.nodes[i]).collect();
        let wb: f64 = bi.iter().map(|&i| rule.weights[i]).product();
        if distinct(bi).is_none() {
            return Ok(0.0);
        }
        let mut inner = 0.0;
        for ai in &tuples {
            if distinct(ai).is_none() {
                continue;
            }
            let wa: f64 = ai.iter().map(|&i| rule.weights[i]).product();
            let d1 = small_det(n, |j, k| b[j][ai[k]]);
            let d2 = small_det(n, |j, k| t[ai[j]][bi[k]]);
            inner += wa * d1 * d2;
        }
        Ok(wb * inner * prefactor(&th)?)
    });
    let mut total = 0.0;
    for v in outer {
        total += v?;
    }
    Ok(total / (factorial(n) * factorial(n)))
}

fn distinct(ix: &[usize]) -> Option<()> {
    for i in 0..ix.len() {
        for j in (i + 1)..ix.len() {
            if ix[i] == ix[j] {
                return None;
            }
        }
    }
    Some(())
}

fn odometer(q: usize, n: usize) -> Vec<Vec<usize>> {
    let total = q.pow(n as u32);
    (0..total)
        .map(|mut k| {
            let mut v = vec![0; n];
            for slot in v.iter_mut().rev() {
                *slot = k % q;
                k /= q;
            }
            v
        })
        .collect()
}

fn small_det(n: usize, f: impl Fn(usize, usize) -> f64) -> f64 {
    match n {
        1 => f(0, 0),
        2 => f(0, 0) * f(1, 1) - f(0, 1) * f(1, 0),
        _ => DMatrix::from_fn(n, n, f).lu().determinant(),
    }
}
