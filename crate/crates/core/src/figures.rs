//! Data behind the semicircle-domain plots: the one-point density of
//! first passage points and the two-point function on and across arcs.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::correlation::{density_semicircle, two_point_semicircle};
use crate::error::{domain, Result};
use crate::numerics::Execution;
use crate::rect_kernels::SeriesPolicy;

/// One sample of a planar plot; `(x, y)` is the point `r e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanarSample {
    pub x: f64,
    pub y: f64,
    pub value: f64,
    pub tail_bound: f64,
}

/// One sample of a plot against the angle `θ′`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularSample {
    pub theta: f64,
    pub value: f64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum FigureData {
    Planar(Vec<PlanarSample>),
    Angular(Vec<AngularSample>),
}

/// Grid resolution for the figure generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FigureGrid {
    /// samples per axis for planar plots
    pub planar: usize,
    /// samples in `θ′` for angular plots
    pub angular: usize,
}

impl Default for FigureGrid {
    fn default() -> Self {
        FigureGrid { planar: 81, angular: 2001 }
    }
}

/// Half-width of the square window `[−R, R] × (0, R]` for planar plots.
pub const PLANAR_EXTENT: f64 = 4.0;

/// Interior points `θ_k = kπ/(n+1)`, `k = 1..=n`.
pub fn open_angles(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 * PI / (n + 1) as f64).collect()
}

fn planar_points(m: usize) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(m * m);
    for iy in 1..=m {
        let y = PLANAR_EXTENT * iy as f64 / m as f64;
        for ix in 0..m {
            let x = -PLANAR_EXTENT + 2.0 * PLANAR_EXTENT * ix as f64 / (m - 1) as f64;
            if x.hypot(y) > 1.0 {
                pts.push((x, y));
            }
        }
    }
    pts
}

/// `ρ̂^i_N` over the part of the window outside the unit disk.
pub fn density_plane(n: usize, m: usize, exec: Execution) -> Result<Vec<PlanarSample>> {
    let pts = planar_points(m);
    exec.map(&pts, |&(x, y)| {
        let value = density_semicircle(n, x.hypot(y), y.atan2(x))?;
        Ok(PlanarSample { x, y, value, tail_bound: 0.0 })
    })
    .into_iter()
    .collect()
}

/// Two-point function against `θ′` on the arc `|z| = r` with the other point
/// at `re^{iθ}`.
pub fn two_point_arc(
    n: usize,
    r: f64,
    theta: f64,
    samples: usize,
    pol: &SeriesPolicy,
    exec: Execution,
) -> Result<Vec<AngularSample>> {
    let angles = open_angles(samples);
    exec.map(&angles, |&t| {
        let v = two_point_semicircle(n, r, theta, r, t, pol)?;
        Ok(AngularSample { theta: t, value: v.value, tail_bound: v.bound })
    })
    .into_iter()
    .collect()
}

/// Two-point function with one point fixed at `re^{iθ}` and the other
/// ranging over the window.
pub fn two_point_plane(
    n: usize,
    r: f64,
    theta: f64,
    m: usize,
    pol: &SeriesPolicy,
    exec: Execution,
) -> Result<Vec<PlanarSample>> {
    let pts = planar_points(m);
    exec.map(&pts, |&(x, y)| {
        let v = two_point_semicircle(n, r, theta, x.hypot(y), y.atan2(x), pol)?;
        Ok(PlanarSample { x, y, value: v.value, tail_bound: v.bound })
    })
    .into_iter()
    .collect()
}

/// Data for plot `id` (7 to 10).
pub fn figure(id: u32, grid: FigureGrid, pol: &SeriesPolicy, exec: Execution) -> Result<FigureData> {
    match id {
        7 => Ok(FigureData::Planar(density_plane(3, grid.planar, exec)?)),
        8 => Ok(FigureData::Angular(two_point_arc(5, 4.0, FRAC_PI_2, grid.angular, pol, exec)?)),
        9 => Ok(FigureData::Angular(two_point_arc(20, 4.0, FRAC_PI_2, grid.angular, pol, exec)?)),
        10 => Ok(FigureData::Planar(two_point_plane(3, 2.0, FRAC_PI_2, grid.planar, pol, exec)?)),
        _ => Err(domain(format!("unknown figure id {id}; expected 7, 8, 9 or 10"))),
    }
}

/// Number of strict interior local maxima of a sampled curve.
pub fn count_local_maxima(values: &[f64]) -> usize {
    values.windows(3).filter(|w| w[1] > w[0] && w[1] > w[2]).count()
}

/// Ridges of `ρ̂^i_N` crossed by the arc `|z| = r`, from `samples` angles.
pub fn density_ridges(n: usize, r: f64, samples: usize) -> Result<usize> {
    let v = open_angles(samples)
        .into_iter()
        .map(|t| density_semicircle(n, r, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(count_local_maxima(&v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_maxima() {
        assert_eq!(count_local_maxima(&[0.0, 1.0, 0.0, 2.0, 1.0]), 2);
        assert_eq!(count_local_maxima(&[1.0, 1.0, 1.0]), 0);
        assert_eq!(count_local_maxima(&[1.0]), 0);
    }

    #[test]
    fn single_path_density_has_one_ridge() {
        assert_eq!(density_ridges(1, 2.0, 501).unwrap(), 1);
    }

    #[test]
    fn planar_window_avoids_unit_disk() {
        let d = density_plane(2, 21, Execution::Sequential).unwrap();
        assert!(d.iter().all(|s| s.x.hypot(s.y) > 1.0 && s.y > 0.0));
    }

    #[test]
    fn unknown_figure_is_rejected() {
        let r = figure(6, FigureGrid::default(), &SeriesPolicy::default(), Execution::Sequential);
        assert!(r.is_err());
    }
}
