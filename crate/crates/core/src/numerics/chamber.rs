//! Integration over the Weyl chamber 0 < θ_1 < … < θ_N < π.

use crate::numerics::exec::Execution;
use crate::numerics::quadrature::QuadratureRule;

/// `N!` as a float.
pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Integrate a permutation-symmetric `f` over the ordered chamber by tensor
/// quadrature over the cube `(0, π)^N` divided by `N!`.
///
/// The outer axis is split across workers; every outer slice is summed in a
/// fixed odometer order and the slices are reduced in index order.
pub fn chamber_integrate<F>(f: F, rule: &QuadratureRule, n: usize, exec: Execution) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    cube_integrate(f, rule, n, exec) / factorial(n)
}

/// Tensor-product quadrature over `(0, π)^N` with no symmetrisation.
pub fn cube_integrate<F>(f: F, rule: &QuadratureRule, n: usize, exec: Execution) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    if n == 0 {
        return f(&[]);
    }
    let m = rule.len();
    let slices = exec.map_range(m, |i0| {
        let mut idx = vec![0usize; n];
        idx[0] = i0;
        let mut point = vec![0.0; n];
        let mut acc = 0.0;
        loop {
            let mut w = 1.0;
            for (k, &i) in idx.iter().enumerate() {
                point[k] = rule.nodes[i];
                w *= rule.weights[i];
            }
            acc += w * f(&point);
            // odometer over axes 1..n
            let mut axis = n;
            loop {
                if axis == 1 {
                    return acc;
                }
                axis -= 1;
                idx[axis] += 1;
                if idx[axis] < m {
                    break;
                }
                idx[axis] = 0;
            }
        }
    });
    slices.into_iter().sum()
}
