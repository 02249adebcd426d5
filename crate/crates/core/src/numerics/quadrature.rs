//! Gauss–Legendre rules mapped onto (0, π) and arbitrary intervals.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Nodes and weights of a Gauss–Legendre rule on a finite interval.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
}

/// Gauss–Legendre nodes and weights on [-1, 1], ascending.
fn legendre_reference(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "quadrature order must be positive");
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

impl QuadratureRule {
    /// Gauss–Legendre rule of the given order on `(a, b)`.
    pub fn gauss_legendre(order: usize, a: f64, b: f64) -> Self {
        let (xs, ws) = legendre_reference(order);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        QuadratureRule {
            nodes: xs.iter().map(|x| mid + half * x).collect(),
            weights: ws.iter().map(|w| half * w).collect(),
            order,
        }
    }

    /// Gauss–Legendre rule on the angle interval (0, π).
    pub fn angular(order: usize) -> Self {
        Self::gauss_legendre(order, 0.0, PI)
    }

    /// Shared angular rule; built once per order and never mutated afterwards.
    pub fn cached(order: usize) -> Arc<QuadratureRule> {
        static CACHE: OnceLock<Mutex<BTreeMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry(order)
            .or_insert_with(|| Arc::new(QuadratureRule::angular(order)))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_pi() {
        for order in [1, 2, 7, 24, 32, 64, 200] {
            let r = QuadratureRule::angular(order);
            let s: f64 = r.weights.iter().sum();
            assert!((s - PI).abs() < 1e-14, "order {order}: {s}");
        }
    }

    #[test]
    fn polynomial_exactness() {
        // degree 2n-1 exact on [-1,1]
        for n in [3usize, 10, 31] {
            let r = QuadratureRule::gauss_legendre(n, -1.0, 1.0);
            let deg = 2 * n - 2; // even power, nonzero integral
            let got = r.integrate(|x| x.powi(deg as i32));
            let want = 2.0 / (deg as f64 + 1.0);
            assert!((got - want).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn sine_orthogonality_at_order_64() {
        let r = QuadratureRule::angular(64);
        let mut worst: f64 = 0.0;
        for n in 1..=25 {
            for m in 1..=25 {
                let got = r.integrate(|t| (n as f64 * t).sin() * (m as f64 * t).sin());
                let want = if n == m { PI / 2.0 } else { 0.0 };
                worst = worst.max((got - want).abs());
            }
        }
        assert!(worst < 1e-12, "worst {worst:e}");
    }

    #[test]
    fn sine_orthogonality_to_frequency_fifty() {
        let r = QuadratureRule::angular(128);
        let mut worst: f64 = 0.0;
        for n in 1..=50 {
            for m in 1..=50 {
                let got = r.integrate(|t| (n as f64 * t).sin() * (m as f64 * t).sin());
                let want = if n == m { PI / 2.0 } else { 0.0 };
                worst = worst.max((got - want).abs());
            }
        }
        assert!(worst < 1e-12, "worst {worst:e}");
    }

    #[test]
    fn cached_rule_is_shared() {
        let a = QuadratureRule::cached(17);
        let b = QuadratureRule::cached(17);
        assert!(Arc::ptr_eq(&a, &b));
    }
}
