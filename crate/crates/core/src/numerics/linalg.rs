//! Small dense determinants and Pfaffians.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::numerics::series::TailBounded;

/// Largest determinant size accepted by [`det_lu`].
pub const MAX_DET_SIZE: usize = 64;

fn check_square(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Domain(format!(
            "determinant of a non-square {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() > MAX_DET_SIZE {
        return Err(Error::TooLarge { size: m.nrows(), max: MAX_DET_SIZE });
    }
    Ok(())
}

/// Determinant by LU with partial pivoting. Exactly singular input gives 0.
pub fn det_lu(m: &DMatrix<f64>) -> Result<f64> {
    check_square(m)?;
    if m.nrows() == 0 {
        return Ok(1.0);
    }
    Ok(m.clone().lu().determinant())
}

/// `(sign, ln|det|)`; sign is 0 for a singular matrix.
pub fn log_abs_det(m: &DMatrix<f64>) -> Result<(f64, f64)> {
    check_square(m)?;
    let n = m.nrows();
    if n == 0 {
        return Ok((1.0, 0.0));
    }
    let lu = m.clone().lu();
    let u = lu.u();
    let mut sign = lu.p().determinant::<f64>();
    let mut log = 0.0;
    for i in 0..n {
        let d = u[(i, i)];
        if d == 0.0 {
            return Ok((0.0, f64::NEG_INFINITY));
        }
        if d < 0.0 {
            sign = -sign;
        }
        log += d.abs().ln();
    }
    Ok((sign, log))
}

/// Determinant of a matrix whose entries each carry an absolute error of at
/// most `entry_bound`. The returned bound follows from multilinearity in the
/// rows and Hadamard's inequality.
pub fn det_with_bound(m: &DMatrix<f64>, entry_bound: f64) -> Result<TailBounded> {
    let value = det_lu(m)?;
    let n = m.nrows();
    let row_err = (n as f64).sqrt() * entry_bound;
    let mut with = 1.0;
    let mut without = 1.0;
    for i in 0..n {
        let norm = m.row(i).norm();
        with *= norm + row_err;
        without *= norm;
    }
    Ok(TailBounded::new(value, (with - without).max(0.0)))
}

/// Pfaffian of a small antisymmetric matrix by expansion along the first row.
pub fn pfaffian(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    debug_assert_eq!(n, a.ncols());
    if n % 2 == 1 {
        return 0.0;
    }
    let idx: Vec<usize> = (0..n).collect();
    pfaffian_rec(a, &idx)
}

fn pfaffian_rec(a: &DMatrix<f64>, idx: &[usize]) -> f64 {
    match idx.len() {
        0 => 1.0,
        2 => a[(idx[0], idx[1])],
        _ => {
            let first = idx[0];
            let mut total = 0.0;
            for (k, &j) in idx.iter().enumerate().skip(1) {
                let entry = a[(first, j)];
                if entry == 0.0 {
                    continue;
                }
                let rest: Vec<usize> = idx[1..]
                    .iter()
                    .copied()
                    .filter(|&v| v != j)
                    .collect();
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                total += sign * entry * pfaffian_rec(a, &rest);
            }
            total
        }
    }
}

/// Build a square matrix from a closure over `(row, col)`.
pub fn matrix_from_fn(n: usize, f: impl FnMut(usize, usize) -> f64) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cofactor_det(m: &DMatrix<f64>) -> f64 {
        let n = m.nrows();
        if n == 1 {
            return m[(0, 0)];
        }
        let mut total = 0.0;
        for j in 0..n {
            let minor = m.clone().remove_row(0).remove_column(j);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * m[(0, j)] * cofactor_det(&minor);
        }
        total
    }

    #[test]
    fn identity_and_swap() {
        let id = DMatrix::<f64>::identity(5, 5);
        assert_eq!(det_lu(&id).unwrap(), 1.0);
        let mut sw = id.clone();
        sw.swap_rows(1, 3);
        assert_eq!(det_lu(&sw).unwrap(), -1.0);
        assert_eq!(log_abs_det(&sw).unwrap(), (-1.0, 0.0));
    }

    #[test]
    fn singular_is_zero_not_error() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert_eq!(det_lu(&m).unwrap(), 0.0);
    }

    #[test]
    fn too_large_rejected() {
        let m = DMatrix::<f64>::identity(65, 65);
        assert!(matches!(det_lu(&m), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn random_4x4_matches_cofactor_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let m = DMatrix::from_fn(4, 4, |_, _| rng.gen_range(-1.0..1.0));
            let a = det_lu(&m).unwrap();
            let b = cofactor_det(&m);
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            let (s, l) = log_abs_det(&m).unwrap();
            assert!((s * l.exp() - b).abs() < 1e-12);
        }
    }

    #[test]
    fn pfaffian_squares_to_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2usize, 4, 6] {
            let mut a = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in (i + 1)..n {
                    let v: f64 = rng.gen_range(-1.0..1.0);
                    a[(i, j)] = v;
                    a[(j, i)] = -v;
                }
            }
            let pf = pfaffian(&a);
            let det = det_lu(&a).unwrap();
            assert!((pf * pf - det).abs() < 1e-12);
        }
        // Pf of the standard 4x4: a12 a34 - a13 a24 + a14 a23
        let a = DMatrix::from_row_slice(
            4,
            4,
            &[0.0, 1.0, 2.0, 3.0, -1.0, 0.0, 4.0, 5.0, -2.0, -4.0, 0.0, 6.0, -3.0, -5.0, -6.0, 0.0],
        );
        assert_eq!(pfaffian(&a), 1.0 * 6.0 - 2.0 * 5.0 + 3.0 * 4.0);
    }

    #[test]
    fn det_bound_covers_perturbation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = DMatrix::from_fn(3, 3, |_, _| rng.gen_range(-1.0..1.0));
        let eps = 1e-3;
        let tb = det_with_bound(&m, eps).unwrap();
        for _ in 0..100 {
            let p = DMatrix::from_fn(3, 3, |i, j| m[(i, j)] + eps * rng.gen_range(-1.0..1.0));
            assert!((det_lu(&p).unwrap() - tb.value).abs() <= tb.bound);
        }
    }
}
