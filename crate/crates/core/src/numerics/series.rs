//! Overflow-free sinh ratios and certified geometric tail bounds.

use serde::{Deserialize, Serialize};

/// A truncated-series value together with a certified bound on the
/// discarded tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBounded {
    pub value: f64,
    pub bound: f64,
}

impl TailBounded {
    pub fn new(value: f64, bound: f64) -> Self {
        TailBounded { value, bound }
    }

    pub fn exact(value: f64) -> Self {
        TailBounded { value, bound: 0.0 }
    }

    pub fn scale(self, k: f64) -> Self {
        TailBounded { value: self.value * k, bound: self.bound * k.abs() }
    }
}

impl std::ops::Add for TailBounded {
    type Output = TailBounded;
    fn add(self, rhs: TailBounded) -> TailBounded {
        TailBounded { value: self.value + rhs.value, bound: self.bound + rhs.bound }
    }
}

impl std::ops::Sub for TailBounded {
    type Output = TailBounded;
    fn sub(self, rhs: TailBounded) -> TailBounded {
        TailBounded { value: self.value - rhs.value, bound: self.bound + rhs.bound }
    }
}

/// `sinh(n·num) / sinh(n·den)` evaluated as
/// `e^{-n(den-num)} (1 - e^{-2n·num}) / (1 - e^{-2n·den})`.
///
/// Never overflows for `num <= den`; deep underflow flushes to zero.
pub fn sinh_ratio(n: u64, num: f64, den: f64) -> f64 {
    debug_assert!(num > 0.0 && den > 0.0);
    let nf = n as f64;
    // n(den − num) carried as hi + lo: a rounded exponent near 100 would
    // already cost 1e-14 relative after exp
    let (dh, dl) = two_sum(den, -num);
    let (eh, el) = two_prod(nf, dh);
    let lo = el + nf * dl;
    let a = nf * num;
    let b = nf * den;
    (-eh).exp() * (1.0 - lo) * (-(-2.0 * a).exp_m1()) / (-(-2.0 * b).exp_m1())
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// `ln(sinh(n·num)/sinh(n·den))`, finite even where [`sinh_ratio`] underflows.
pub fn ln_sinh_ratio(n: u64, num: f64, den: f64) -> f64 {
    let n = n as f64;
    let a = n * num;
    let b = n * den;
    -(b - a) + (-(-2.0 * a).exp_m1()).ln() - (-(-2.0 * b).exp_m1()).ln()
}

/// `ln sinh(t)` for `t > 0` without overflow.
pub fn ln_sinh(t: f64) -> f64 {
    t - std::f64::consts::LN_2 + (-(-2.0 * t).exp_m1()).ln()
}

/// `Σ_{n>k} c·q^n` for `0 <= q < 1`.
pub fn geometric_tail(c: f64, q: f64, k: u64) -> f64 {
    debug_assert!((0.0..1.0).contains(&q));
    c * q.powf(k as f64 + 1.0) / (1.0 - q)
}

/// `Σ_{n>k} c·n·q^n` for `0 <= q < 1`.
pub fn linear_geometric_tail(c: f64, q: f64, k: u64) -> f64 {
    debug_assert!((0.0..1.0).contains(&q));
    let k = k as f64;
    c * q.powf(k + 1.0) * ((k + 1.0) - k * q) / ((1.0 - q) * (1.0 - q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_arguments_give_one() {
        for n in [1, 3, 50, 10_000] {
            assert!((sinh_ratio(n, 0.7, 0.7) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn large_gap_no_overflow() {
        let v = sinh_ratio(700, 1.0, 2.0);
        assert!(v.is_finite());
        assert!((v / (-700.0f64).exp() - 1.0).abs() < 1e-12);
        let deep = sinh_ratio(100_000, 1.0, 2.0);
        assert_eq!(deep, 0.0);
        assert!((ln_sinh_ratio(100_000, 1.0, 2.0) + 100_000.0).abs() < 1e-9);
    }

    #[test]
    fn monotone_in_numerator() {
        let mut prev = 0.0;
        for i in 1..200 {
            let v = sinh_ratio(3, i as f64 * 0.01, 2.0);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn tails_match_partial_sums() {
        let q: f64 = 0.37;
        let direct: f64 = (6..400).map(|n| 2.0 * q.powi(n)).sum();
        assert!((geometric_tail(2.0, q, 5) - direct).abs() < 1e-15);
        let direct: f64 = (6..400).map(|n| 2.0 * n as f64 * q.powi(n)).sum();
        assert!((linear_geometric_tail(2.0, q, 5) - direct).abs() < 1e-14);
    }

    #[test]
    fn ln_sinh_large() {
        assert!((ln_sinh(1000.0) - (1000.0 - std::f64::consts::LN_2)).abs() < 1e-12);
        assert!((ln_sinh(0.5) - 0.5f64.sinh().ln()).abs() < 1e-15);
    }
}
