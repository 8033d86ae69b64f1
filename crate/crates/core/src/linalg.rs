//! Mode-aware rank, inverse, null space and tolerance-aware comparisons.
//!
//! Exact mode uses row reduction with literal zero tests. Floating mode
//! routes rank decisions through the SVD.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, Tolerance};
use crate::svd::{rank_from_sigma, svd_c64};

/// Reduced row echelon form and pivot columns. Exact mode only in spirit:
/// float input is reduced with a magnitude threshold relative to the
/// largest entry.
pub fn rref<S: Scalar>(m: &Matrix<S>) -> (Matrix<S>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let scale = a.entries().iter().map(Scalar::modulus).fold(0.0, f64::max);
    let negligible = |x: &S| {
        if S::EXACT {
            x.is_zero()
        } else {
            x.modulus() <= 1e-12 * scale
        }
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot_row = if S::EXACT {
            (r..rows).find(|&i| !a[(i, c)].is_zero())
        } else {
            (r..rows)
                .filter(|&i| !negligible(&a[(i, c)]))
                .max_by(|&x, &y| a[(x, c)].modulus().partial_cmp(&a[(y, c)].modulus()).unwrap())
        };
        let Some(p) = pivot_row else { continue };
        if p != r {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        // Entries left of column c in row r are already zero.
        let inv = S::one() / a[(r, c)].clone();
        for j in c..cols {
            a[(r, j)] = a[(r, j)].clone() * inv.clone();
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                if a[(r, j)].is_zero() {
                    continue;
                }
                let v = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                a[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Exact rank by forward elimination without normalizing pivot rows.
fn echelon_rank<S: Scalar>(m: &Matrix<S>) -> usize {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else { continue };
        if p != r {
            for j in c..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = S::one() / a[(r, c)].clone();
        for i in r + 1..rows {
            if a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone() * inv.clone();
            for j in c + 1..cols {
                if a[(r, j)].is_zero() {
                    continue;
                }
                let v = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                a[(i, j)] = v;
            }
        }
        r += 1;
    }
    r
}

/// Rank: row reduction in exact mode; singular values above
/// `tol.rank_threshold_factor * sigma_1` in floating mode.
pub fn rank<S: Scalar>(m: &Matrix<S>, tol: &Tolerance) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    if S::EXACT {
        echelon_rank(m)
    } else {
        let (_, sigma, _) = svd_c64(&m.to_c64());
        rank_from_sigma(&sigma, tol.rank_threshold_factor)
    }
}

/// Inverse of a square matrix, `None` when singular (numerically singular in
/// floating mode).
pub fn inverse<S: Scalar>(m: &Matrix<S>, tol: &Tolerance) -> Result<Option<Matrix<S>>> {
    let n = m.require_square()?;
    if n == 0 {
        return Ok(Some(m.clone()));
    }
    if S::EXACT {
        let aug = Matrix::from_blocks(
            m,
            &Matrix::identity(n),
            &Matrix::zeros(0, n),
            &Matrix::zeros(0, n),
        );
        let (red, pivots) = rref(&aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        Ok(Some(red.block(0, n, n, n)))
    } else {
        let (u, sigma, v) = svd_c64(&m.to_c64());
        if rank_from_sigma(&sigma, tol.rank_threshold_factor) < n {
            return Ok(None);
        }
        let mut vs = v.clone();
        for j in 0..n {
            for i in 0..n {
                vs[(i, j)] /= sigma[j];
            }
        }
        Ok(Some(Matrix::from_c64(&(&vs * &u.adjoint()))))
    }
}

/// Inverse or [`Error::Singular`].
pub fn inverse_or_err<S: Scalar>(m: &Matrix<S>, tol: &Tolerance) -> Result<Matrix<S>> {
    inverse(m, tol)?.ok_or(Error::Singular)
}

/// Basis of the null space as columns of the returned `cols x k` matrix.
pub fn null_space<S: Scalar>(m: &Matrix<S>, tol: &Tolerance) -> Matrix<S> {
    let cols = m.cols();
    if S::EXACT {
        let (red, pivots) = rref(m);
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis[(f, k)] = S::one();
            for (row, &p) in pivots.iter().enumerate() {
                basis[(p, k)] = -red[(row, f)].clone();
            }
        }
        basis
    } else {
        let (_, sigma, v) = svd_c64(&m.to_c64());
        let r = rank_from_sigma(&sigma, tol.rank_threshold_factor);
        let basis: Matrix<Complex64> = v.block(0, r, cols, cols - r);
        Matrix::from_c64(&basis)
    }
}

/// Exact mode: entrywise equality. Floating mode:
/// `||X - Y||_F <= rel * max(1, ||X||_F, ||Y||_F)`.
pub fn approx_eq<S: Scalar>(x: &Matrix<S>, y: &Matrix<S>, tol: &Tolerance) -> Result<bool> {
    x.same_shape(y)?;
    Ok(close(x, y, tol))
}

/// [`approx_eq`] for operands already known to share a shape.
pub(crate) fn close<S: Scalar>(x: &Matrix<S>, y: &Matrix<S>, tol: &Tolerance) -> bool {
    if S::EXACT {
        return x == y;
    }
    let scale = 1f64.max(x.frobenius_norm()).max(y.frobenius_norm());
    (x - y).frobenius_norm() <= tol.rel * scale
}

/// `close(x * y, target)`; exact mode compares row by row and stops at the
/// first differing row.
pub(crate) fn product_close<S: Scalar>(x: &Matrix<S>, y: &Matrix<S>, target: &Matrix<S>, tol: &Tolerance) -> bool {
    if !S::EXACT {
        return close(&(x * y), target, tol);
    }
    let mut acc = vec![S::zero(); y.cols()];
    for i in 0..x.rows() {
        acc.iter_mut().for_each(|v| *v = S::zero());
        for (k, a) in x.row(i).iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (v, b) in acc.iter_mut().zip(y.row(k)) {
                if !b.is_zero() {
                    *v = std::mem::replace(v, S::zero()) + a.clone() * b.clone();
                }
            }
        }
        if acc.as_slice() != target.row(i) {
            return false;
        }
    }
    true
}

/// Idempotence test: exact `M^2 = M`, or
/// `||M^2 - M||_F <= rel * max(1, ||M||_F^2)` in floating mode.
pub fn is_projector<S: Scalar>(m: &Matrix<S>, tol: &Tolerance) -> Result<bool> {
    m.require_square()?;
    let sq = m * m;
    if S::EXACT {
        return Ok(sq == *m);
    }
    let f = m.frobenius_norm();
    Ok((&sq - m).frobenius_norm() <= tol.rel * 1f64.max(f * f))
}

/// `AB = BA` under the mode's equality.
pub fn commutes<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>, tol: &Tolerance) -> bool {
    close(&(a * b), &(b * a), tol)
}
