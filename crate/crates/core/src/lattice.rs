//! Square-lattice strips with absorbing boundary, as a discrete model of
//! the rectangle `R_L`.
//!
//! A [`LatticeStrip`] has `K` interior rows at heights `jh`, `h = π/(K+1)`,
//! and `W` interior columns at `ih`, so its width is `(W+1)h`. Interior
//! sites step to each neighbour with weight `1/4`; a walk leaving a boundary
//! site takes its first step with weight 1. With that convention the
//! discrete Poisson kernel approximates `h·H` and the boundary-to-boundary
//! kernel approximates `h²·H∂`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::factorization::CscCholesky;
use nalgebra_sparse::{CooMatrix, CscMatrix};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::numerics::det_lu;
use crate::passage_densities::pdf_first_passage_finite;
use crate::rect_kernels::{boundary_poisson_rect, RectConfig, SeriesPolicy};
use crate::weyl::WeylPoint;

/// Interior site `(column, row)`, both 1-based.
pub type Site = (usize, usize);

pub struct LatticeStrip {
    rows: usize,
    cols: usize,
    factor: CscCholesky<f64>,
}

impl std::fmt::Debug for LatticeStrip {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LatticeStrip").field("rows", &self.rows).field("cols", &self.cols).finish()
    }
}

impl LatticeStrip {
    /// Strip with `rows` interior rows and `cols` interior columns.
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(domain("a lattice strip needs at least one interior row and column"));
        }
        let n = rows * cols;
        let mut coo = CooMatrix::new(n, n);
        for i in 1..=cols {
            for j in 1..=rows {
                let p = (i - 1) * rows + (j - 1);
                coo.push(p, p, 1.0);
                if j < rows {
                    coo.push(p, p + 1, -0.25);
                    coo.push(p + 1, p, -0.25);
                }
                if i < cols {
                    coo.push(p, p + rows, -0.25);
                    coo.push(p + rows, p, -0.25);
                }
            }
        }
        let a = CscMatrix::from(&coo);
        let factor =
            CscCholesky::factor(&a).map_err(|e| Error::Solver(format!("Cholesky failed: {e}")))?;
        Ok(LatticeStrip { rows, cols, factor })
    }

    /// Strip with `rows` interior rows approximating `R_L`; `L/h` must be
    /// an integer.
    pub fn for_width(rows: usize, width: f64) -> Result<Self> {
        let h = PI / (rows + 1) as f64;
        let cells = width / h;
        let rounded = cells.round();
        if (cells - rounded).abs() > 1e-9 || rounded < 2.0 {
            return Err(domain(format!("width {width} is not a multiple >= 2 of h = {h}")));
        }
        LatticeStrip::new(rows, rounded as usize - 1)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn spacing(&self) -> f64 {
        PI / (self.rows + 1) as f64
    }

    pub fn width(&self) -> f64 {
        (self.cols + 1) as f64 * self.spacing()
    }

    fn index(&self, s: Site) -> Result<usize> {
        let (i, j) = s;
        if !(1..=self.cols).contains(&i) || !(1..=self.rows).contains(&j) {
            return Err(domain(format!("site {s:?} is not interior")));
        }
        Ok((i - 1) * self.rows + (j - 1))
    }

    fn check_row(&self, j: usize) -> Result<()> {
        if !(1..=self.rows).contains(&j) {
            return Err(domain(format!("row {j} outside 1..={}", self.rows)));
        }
        Ok(())
    }

    /// Columns `G e_s` for each source site.
    fn green_columns(&self, sources: &[Site]) -> Result<DMatrix<f64>> {
        let n = self.rows * self.cols;
        let mut rhs = DMatrix::zeros(n, sources.len());
        for (c, &s) in sources.iter().enumerate() {
            rhs[(self.index(s)?, c)] = 1.0;
        }
        Ok(self.factor.solve(&rhs))
    }

    /// Probability that a walk from each left-boundary row in `starts`
    /// first leaves through right-boundary row `j`, as a `starts × rows`
    /// matrix.
    fn boundary_block(&self, starts: &[usize]) -> Result<DMatrix<f64>> {
        for &a in starts {
            self.check_row(a)?;
        }
        let src: Vec<Site> = starts.iter().map(|&a| (1, a)).collect();
        let g = self.green_columns(&src)?;
        // first step off the boundary has weight 1, the last step 1/4
        let last = (self.cols - 1) * self.rows;
        Ok(DMatrix::from_fn(starts.len(), self.rows, |s, j| 0.25 * g[(last + j, s)]))
    }

    /// Boundary-to-boundary kernel from left row `a` to right row `b`.
    pub fn boundary_kernel(&self, a: usize, b: usize) -> Result<f64> {
        self.check_row(b)?;
        Ok(self.boundary_block(&[a])?[(0, b - 1)])
    }
}

/// `G(a, b)` for interior sites `a`, `b`, including the empty walk.
pub fn discrete_green(strip: &LatticeStrip, a: Site, b: Site) -> Result<f64> {
    let g = strip.green_columns(&[a])?;
    Ok(g[(strip.index(b)?, 0)])
}

/// Harmonic measure of right-boundary row `b` seen from interior site `s`.
pub fn discrete_poisson(strip: &LatticeStrip, s: Site, b: usize) -> Result<f64> {
    strip.check_row(b)?;
    let g = strip.green_columns(&[s])?;
    Ok(0.25 * g[(strip.index((strip.cols, b))?, 0)])
}

/// Which exits on the right boundary are admitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ends {
    /// Sum over every ordered tuple of right-boundary rows.
    All,
    /// These rows in this order; the result is then a signed density.
    Fixed(Vec<usize>),
}

/// Discrete first-passage density on one column: every increasing tuple of
/// rows with its probability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteDensity {
    pub spacing: f64,
    pub column: usize,
    pub values: Vec<(Vec<usize>, f64)>,
}

impl DiscreteDensity {
    pub fn total(&self) -> f64 {
        self.values.iter().map(|v| v.1).sum()
    }

    pub fn at(&self, rows: &[usize]) -> Option<f64> {
        self.values.iter().find(|v| v.0 == rows).map(|v| v.1)
    }
}

fn increasing_tuples(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for r in start..=m {
            cur.push(r);
            go(r + 1, m, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, m, n, &mut Vec::new(), &mut out);
    out
}

fn minor(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> Result<f64> {
    det_lu(&DMatrix::from_fn(rows.len(), cols.len(), |r, c| m[(rows[r], cols[c])]))
}

/// Probability that `N` walks from left rows `starts` first cross column
/// `column` at each increasing tuple of rows, conditioned on Fomin
/// non-intersection of their loop erasures, built from the exact one-step
/// decomposition at the column.
pub fn discrete_first_passage_density(
    strip: &LatticeStrip,
    n: usize,
    column: usize,
    starts: &[usize],
    ends: &Ends,
) -> Result<DiscreteDensity> {
    if starts.len() != n || n == 0 {
        return Err(domain(format!("{n} paths but {} starts", starts.len())));
    }
    if !(2..=strip.cols).contains(&column) {
        return Err(domain(format!("cut column {column} must lie in 2..={}", strip.cols)));
    }
    if let Ends::Fixed(e) = ends {
        if e.len() != n {
            return Err(domain("one end row per path"));
        }
        for &b in e {
            strip.check_row(b)?;
        }
    }
    let k = strip.rows;
    let left = LatticeStrip::new(k, column - 1)?;
    let first = left.boundary_block(starts)?;
    let through = strip.boundary_block(starts)?;
    // exit probabilities from every site of the cut column
    let cut_sites: Vec<Site> = (1..=k).map(|t| (column, t)).collect();
    let g = strip.green_columns(&cut_sites)?;
    let exit = DMatrix::from_fn(k, k, |t, b| 0.25 * g[((strip.cols - 1) * k + b, t)]);
    let all_rows: Vec<Vec<usize>> = increasing_tuples(k, n);
    let zero: Vec<usize> = (0..n).collect();
    let to_idx = |rows: &[usize]| rows.iter().map(|r| r - 1).collect::<Vec<_>>();
    let normalizer = match ends {
        Ends::All => {
            let mut s = 0.0;
            for b in &all_rows {
                s += minor(&through, &zero, &to_idx(b))?;
            }
            s
        }
        Ends::Fixed(e) => minor(&through, &zero, &to_idx(e))?.abs(),
    };
    if normalizer == 0.0 {
        return Err(domain("no admissible configurations: the normalizer vanishes"));
    }
    let mut values = Vec::with_capacity(all_rows.len());
    for t in &all_rows {
        let ti = to_idx(t);
        let head = minor(&first, &zero, &ti)?;
        let tail = match ends {
            Ends::All => {
                let mut s = 0.0;
                for b in &all_rows {
                    s += minor(&exit, &ti, &to_idx(b))?;
                }
                s
            }
            Ends::Fixed(e) => minor(&exit, &ti, &to_idx(e))?,
        };
        values.push((t.clone(), head * tail / normalizer));
    }
    Ok(DiscreteDensity { spacing: strip.spacing(), column, values })
}

/// `Σ_t W_cut(a, t) · H((column, t), b)`, which equals the through kernel.
pub fn split_at_column(strip: &LatticeStrip, column: usize, a: usize, b: usize) -> Result<f64> {
    if !(2..=strip.cols).contains(&column) {
        return Err(domain(format!("cut column {column} must lie in 2..={}", strip.cols)));
    }
    let left = LatticeStrip::new(strip.rows, column - 1)?;
    let mut s = 0.0;
    for t in 1..=strip.rows {
        s += left.boundary_kernel(a, t)? * discrete_poisson(strip, (column, t), b)?;
    }
    Ok(s)
}

/// Harmonic measure of cut row `t` from left row `a` by a direct Dirichlet
/// solve on the part of the strip left of `column`.
pub fn harmonic_measure_direct(strip: &LatticeStrip, column: usize, a: usize, t: usize) -> Result<f64> {
    let left = LatticeStrip::new(strip.rows, column - 1)?;
    left.check_row(a)?;
    left.check_row(t)?;
    // u = 1 at the cut site (column, t), 0 on the rest of the boundary
    let n = left.rows * left.cols;
    let mut rhs = DMatrix::zeros(n, 1);
    rhs[(left.index((left.cols, t))?, 0)] = 0.25;
    let u: DVector<f64> = left.factor.solve(&rhs).column(0).into_owned();
    Ok(u[left.index((1, a))?])
}

/// One refinement level of a lattice-versus-continuum comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RefinementRow {
    pub cells: usize,
    pub h: f64,
    pub error: f64,
    /// error at the previous (coarser) level divided by this one
    pub ratio: f64,
}

fn with_ratios(rows: Vec<(usize, f64, f64)>) -> Vec<RefinementRow> {
    let mut out: Vec<RefinementRow> = Vec::with_capacity(rows.len());
    for (cells, h, error) in rows {
        let ratio = out.last().map(|p| p.error / error).unwrap_or(f64::NAN);
        out.push(RefinementRow { cells, h, error, ratio });
    }
    out
}

fn row_of(angle: f64, h: f64) -> Result<usize> {
    let r = angle / h;
    if (r - r.round()).abs() > 1e-9 {
        return Err(domain(format!("angle {angle} is not on the lattice with h = {h}")));
    }
    Ok(r.round() as usize)
}

/// Per-point errors `|W/h² − H∂_{R_L}(φ, ρ)|` on a strip of width `L`
/// with `cells = K + 1` rows of cells.
pub fn boundary_kernel_errors(
    cells: usize,
    width: f64,
    points: &[(f64, f64)],
    pol: &SeriesPolicy,
) -> Result<Vec<f64>> {
    let strip = LatticeStrip::for_width(cells - 1, width)?;
    let h = strip.spacing();
    let cfg = RectConfig::new(width)?;
    points
        .iter()
        .map(|&(phi, rho)| {
            let d = strip.boundary_kernel(row_of(phi, h)?, row_of(rho, h)?)? / (h * h);
            Ok((d - boundary_poisson_rect(&cfg, pol, phi, rho)?.value).abs())
        })
        .collect()
}

/// Refinement table for the boundary kernel (maximum error over `points`).
pub fn boundary_kernel_refinement(
    levels: &[usize],
    width: f64,
    points: &[(f64, f64)],
    pol: &SeriesPolicy,
) -> Result<Vec<RefinementRow>> {
    let mut rows = Vec::new();
    for &cells in levels {
        let errs = boundary_kernel_errors(cells, width, points, pol)?;
        rows.push((cells, PI / cells as f64, errs.into_iter().fold(0.0, f64::max)));
    }
    Ok(with_ratios(rows))
}

/// Per-point errors `|P/h^N − p^L_N(x, θ|φ)|` of the discrete
/// first-passage density.
pub fn density_errors(
    cells: usize,
    width: f64,
    x: f64,
    phi: &WeylPoint,
    thetas: &[WeylPoint],
    pol: &SeriesPolicy,
) -> Result<Vec<f64>> {
    let strip = LatticeStrip::for_width(cells - 1, width)?;
    let h = strip.spacing();
    let n = phi.len();
    let column = row_of(x, h)?;
    let starts = phi.angles().iter().map(|&a| row_of(a, h)).collect::<Result<Vec<_>>>()?;
    let dd = discrete_first_passage_density(&strip, n, column, &starts, &Ends::All)?;
    let cfg = RectConfig::new(width)?;
    thetas
        .iter()
        .map(|t| {
            let rows = t.angles().iter().map(|&a| row_of(a, h)).collect::<Result<Vec<_>>>()?;
            let d = dd.at(&rows).ok_or_else(|| domain("cut rows not found"))? / h.powi(n as i32);
            Ok((d - pdf_first_passage_finite(&cfg, pol, x, t, phi)?).abs())
        })
        .collect()
}

/// Refinement table for the first-passage density (maximum error).
pub fn density_refinement(
    levels: &[usize],
    width: f64,
    x: f64,
    phi: &WeylPoint,
    thetas: &[WeylPoint],
    pol: &SeriesPolicy,
) -> Result<Vec<RefinementRow>> {
    let mut rows = Vec::new();
    for &cells in levels {
        let errs = density_errors(cells, width, x, phi, thetas, pol)?;
        rows.push((cells, PI / cells as f64, errs.into_iter().fold(0.0, f64::max)));
    }
    Ok(with_ratios(rows))
}
