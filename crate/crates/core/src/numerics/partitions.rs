//! Integer partitions with at most `N` parts, enumerated by size.

use serde::{Deserialize, Serialize};

/// Weakly decreasing nonnegative parts `λ_1 ≥ … ≥ λ_N ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Option<Self> {
        if parts.windows(2).all(|w| w[0] >= w[1]) {
            Some(Partition(parts))
        } else {
            None
        }
    }

    pub fn empty(n: usize) -> Self {
        Partition(vec![0; n])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|λ|`.
    pub fn size(&self) -> u64 {
        self.0.iter().map(|&p| p as u64).sum()
    }

    /// Strictly decreasing frequencies `λ_j + N − j + 1`, j = 1..N.
    pub fn frequencies(&self) -> Vec<u64> {
        let n = self.0.len();
        self.0
            .iter()
            .enumerate()
            .map(|(j, &l)| l as u64 + (n - j) as u64)
            .collect()
    }

    /// Inverse of [`Partition::frequencies`]; expects a strictly decreasing
    /// list of positive integers.
    pub fn from_frequencies(freqs: &[u64]) -> Option<Self> {
        let n = freqs.len();
        let mut parts = Vec::with_capacity(n);
        for (j, &f) in freqs.iter().enumerate() {
            let base = (n - j) as u64;
            if f < base {
                return None;
            }
            parts.push((f - base) as u32);
        }
        Partition::new(parts)
    }
}

/// All partitions of `k` into at most `n` parts, lexicographically decreasing.
pub fn partitions_of(k: u32, n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fill(k, n, k, &mut cur, &mut out);
    out
}

fn fill(remaining: u32, slots: usize, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if slots == 0 {
        if remaining == 0 {
            out.push(Partition(cur.clone()));
        }
        return;
    }
    // the remaining slots can absorb at most slots * cap
    if (remaining as u64) > slots as u64 * cap as u64 {
        return;
    }
    let hi = remaining.min(cap);
    for p in (0..=hi).rev() {
        cur.push(p);
        fill(remaining - p, slots - 1, p, cur, out);
        cur.pop();
    }
}

/// Partitions with `|λ| <= cap`, graded by size then lexicographic.
pub fn partitions_up_to(cap: u32, n: usize) -> Vec<Partition> {
    (0..=cap).flat_map(|k| partitions_of(k, n)).collect()
}

/// Binomial coefficient as a float.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_known_values() {
        // p(k, <=3 parts) for k = 0..8
        let expect = [1, 1, 2, 3, 4, 5, 7, 8, 10];
        for (k, &e) in expect.iter().enumerate() {
            assert_eq!(partitions_of(k as u32, 3).len(), e, "k={k}");
        }
    }

    #[test]
    fn order_is_lexicographically_decreasing() {
        let ps = partitions_of(4, 3);
        let parts: Vec<_> = ps.iter().map(|p| p.parts().to_vec()).collect();
        assert_eq!(parts, vec![vec![4, 0, 0], vec![3, 1, 0], vec![2, 2, 0], vec![2, 1, 1]]);
    }

    #[test]
    fn frequency_round_trip() {
        for p in partitions_up_to(6, 3) {
            let f = p.frequencies();
            assert!(f.windows(2).all(|w| w[0] > w[1]));
            assert_eq!(Partition::from_frequencies(&f).unwrap(), p);
        }
        assert_eq!(Partition::empty(3).frequencies(), vec![3, 2, 1]);
    }
}
