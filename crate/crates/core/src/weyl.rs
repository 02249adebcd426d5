//! Ordered angle configurations and chamber cut sequences.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// A point of the Weyl chamber `0 < θ_1 < … < θ_N < π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylPoint {
    angles: Vec<f64>,
}

impl WeylPoint {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(domain("a Weyl point needs at least one angle"));
        }
        check_open_angles(&angles)?;
        if !angles.windows(2).all(|w| w[0] < w[1]) {
            return Err(domain(format!("angles {angles:?} are not strictly increasing")));
        }
        Ok(WeylPoint { angles })
    }

    /// `N` equally spaced angles `jπ/(N+1)`.
    pub fn equispaced(n: usize) -> Self {
        WeylPoint {
            angles: (1..=n).map(|j| j as f64 * PI / (n as f64 + 1.0)).collect(),
        }
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// `(π − θ_N, …, π − θ_1)`, again ordered.
    pub fn reflected(&self) -> Self {
        WeylPoint { angles: self.angles.iter().rev().map(|t| PI - t).collect() }
    }
}

/// Reject angles outside the open interval `(0, π)`.
pub fn check_open_angles(angles: &[f64]) -> Result<()> {
    for &a in angles {
        if !(a > 0.0 && a < PI) {
            return Err(domain(format!("angle {a} is outside (0, π)")));
        }
    }
    Ok(())
}

/// Cut positions `0 < x_1 < … < x_M`, with an optional right edge `L > x_M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChamberSequence {
    cuts: Vec<f64>,
    width: Option<f64>,
}

impl ChamberSequence {
    pub fn new(cuts: Vec<f64>, width: Option<f64>) -> Result<Self> {
        if cuts.is_empty() {
            return Err(domain("a chamber sequence needs at least one cut"));
        }
        if !(cuts[0] > 0.0) || !cuts.windows(2).all(|w| w[0] < w[1]) {
            return Err(domain(format!("cuts {cuts:?} must be positive and increasing")));
        }
        if let Some(l) = width {
            if !(l > *cuts.last().unwrap()) {
                return Err(domain(format!("width {l} must exceed the last cut")));
            }
        }
        Ok(ChamberSequence { cuts, width })
    }

    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    pub fn width(&self) -> Option<f64> {
        self.width
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_enforced() {
        assert!(WeylPoint::new(vec![1.0, 2.0]).is_ok());
        assert!(WeylPoint::new(vec![2.0, 1.0]).is_err());
        assert!(WeylPoint::new(vec![1.0, 1.0]).is_err());
        assert!(WeylPoint::new(vec![0.0, 1.0]).is_err());
        assert!(WeylPoint::new(vec![1.0, PI]).is_err());
    }

    #[test]
    fn cuts_enforced() {
        assert!(ChamberSequence::new(vec![1.0, 2.0], Some(3.0)).is_ok());
        assert!(ChamberSequence::new(vec![1.0, 2.0], Some(2.0)).is_err());
        assert!(ChamberSequence::new(vec![0.0], None).is_err());
        assert!(ChamberSequence::new(vec![2.0, 1.0], None).is_err());
    }

    #[test]
    fn reflection_stays_ordered() {
        let w = WeylPoint::new(vec![0.3, 1.1, 2.0]).unwrap();
        let r = w.reflected();
        assert!(WeylPoint::new(r.angles().to_vec()).is_ok());
        for (a, b) in r.reflected().angles().iter().zip(w.angles()) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
