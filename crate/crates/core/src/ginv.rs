//! Moore-Penrose and group inverses, index and EP tests.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hs::hs_decompose;
use crate::linalg::{close, inverse_or_err, rank, rref};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, Tolerance};
use crate::svd::{rank_from_sigma, svd_c64};

/// Moore-Penrose inverse.
///
/// Floating mode inverts the retained singular values; exact mode uses the
/// full-rank factorization `A = FG`, `A† = G*(F*AG*)⁻¹F*`.
pub fn moore_penrose<S: Scalar>(a: &Matrix<S>, tol: &Tolerance) -> Matrix<S> {
    let (m, n) = a.shape();
    if a.is_zero() || m == 0 || n == 0 {
        return Matrix::zeros(n, m);
    }
    if S::EXACT {
        let (red, pivots) = rref(a);
        let r = pivots.len();
        let f = Matrix::from_fn(m, r, |i, k| a[(i, pivots[k])].clone());
        let g = red.block(0, 0, r, n);
        let (fs, gs) = (f.adjoint(), g.adjoint());
        let core = &(&fs * a) * &gs;
        let core_inv = inverse_or_err(&core, tol).expect("full-rank factorization core is invertible");
        &(&gs * &core_inv) * &fs
    } else {
        let (u, sigma, v) = svd_c64(&a.to_c64());
        let r = rank_from_sigma(&sigma, tol.rank_threshold_factor);
        let mut out = Matrix::<Complex64>::zeros(n, m);
        for k in 0..r {
            let inv = 1.0 / sigma[k];
            for i in 0..n {
                for j in 0..m {
                    out[(i, j)] += v[(i, k)] * u[(j, k)].conj() * inv;
                }
            }
        }
        Matrix::from_c64(&out)
    }
}

/// `rank(A²) = rank(A)`.
pub fn index_le_one<S: Scalar>(a: &Matrix<S>, tol: &Tolerance) -> Result<bool> {
    a.require_square()?;
    Ok(index_le_one_given_square(a, &(a * a), tol))
}

/// [`index_le_one`] with `A²` already at hand.
pub(crate) fn index_le_one_given_square<S: Scalar>(a: &Matrix<S>, a2: &Matrix<S>, tol: &Tolerance) -> bool {
    rank(a2, tol) == rank(a, tol)
}

/// Group inverse `A#` of an index-one matrix.
///
/// Exact mode: `A# = A (A³)† A`. Floating mode goes through the
/// Hartwig-Spindelböck decomposition:
/// `A# = U [[(ΣK)⁻¹, (ΣK)⁻¹K⁻¹L], [O, O]] U*`.
pub fn group_inverse<S: Scalar>(a: &Matrix<S>, tol: &Tolerance) -> Result<Matrix<S>> {
    if !index_le_one(a, tol)? {
        return Err(Error::IndexTooLarge);
    }
    if S::EXACT {
        if a.is_zero() {
            return Ok(a.clone());
        }
        let cube = &(a * a) * a;
        return Ok(&(a * &moore_penrose(&cube, tol)) * a);
    }
    let af = a.to_c64();
    let d = match hs_decompose(&af, tol) {
        Ok(d) => d,
        Err(Error::ZeroMatrix) => return Ok(Matrix::zeros(a.rows(), a.cols())),
        Err(e) => return Err(e),
    };
    let sk_inv = inverse_or_err(&d.sigma_k(), tol).map_err(|_| Error::IndexTooLarge)?;
    let k_inv = inverse_or_err(&d.k, tol).map_err(|_| Error::IndexTooLarge)?;
    let top_right = &(&sk_inv * &k_inv) * &d.l;
    Ok(Matrix::from_c64(&d.embed_top(&sk_inv, &top_right)))
}

/// `BB† = B†B`, equivalently `R(B) = R(B*)`.
pub fn is_ep<S: Scalar>(b: &Matrix<S>, tol: &Tolerance) -> Result<bool> {
    b.require_square()?;
    let p = moore_penrose(b, tol);
    Ok(close(&(b * &p), &(&p * b), tol))
}

/// Residuals of the four Penrose equations, relative to `max(1, ||A||·||X||)`
/// style scales. Exact mode reports 0 or 1 per equation.
pub fn penrose_residuals<S: Scalar>(a: &Matrix<S>, x: &Matrix<S>) -> [f64; 4] {
    let rel = |lhs: &Matrix<S>, rhs: &Matrix<S>| -> f64 {
        if S::EXACT {
            if lhs == rhs { 0.0 } else { 1.0 }
        } else {
            (lhs - rhs).frobenius_norm() / 1f64.max(lhs.frobenius_norm()).max(rhs.frobenius_norm())
        }
    };
    let ax = a * x;
    let xa = x * a;
    [
        rel(&(&ax * a), a),
        rel(&(&xa * x), x),
        rel(&ax, &ax.adjoint()),
        rel(&xa, &xa.adjoint()),
    ]
}

/// Residuals of `AXA = A`, `XAX = X`, `AX = XA`.
pub fn group_residuals<S: Scalar>(a: &Matrix<S>, x: &Matrix<S>) -> [f64; 3] {
    let rel = |lhs: &Matrix<S>, rhs: &Matrix<S>| -> f64 {
        if S::EXACT {
            if lhs == rhs { 0.0 } else { 1.0 }
        } else {
            (lhs - rhs).frobenius_norm() / 1f64.max(lhs.frobenius_norm()).max(rhs.frobenius_norm())
        }
    };
    let ax = a * x;
    let xa = x * a;
    [rel(&(&ax * a), a), rel(&(&xa * x), x), rel(&ax, &xa)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::{ExactMatrix, FloatMatrix};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn moore_penrose_examples() {
        assert_eq!(moore_penrose(&ExactMatrix::identity(3), &tol()), ExactMatrix::identity(3));
        assert_eq!(moore_penrose(&ExactMatrix::zeros(2, 3), &tol()), ExactMatrix::zeros(3, 2));
        let a = ExactMatrix::from_i64(&[&[1, 1], &[0, 0]]);
        let expected = ExactMatrix::from_rows(vec![vec![ratio(1, 2), ratio(0, 1)], vec![ratio(1, 2), ratio(0, 1)]]).unwrap();
        let p = moore_penrose(&a, &tol());
        assert_eq!(p, expected);
        assert_eq!(penrose_residuals(&a, &p), [0.0; 4]);
        let pf = moore_penrose(&a.to_c64(), &tol());
        assert!(close(&pf, &expected.to_c64(), &tol()));
    }

    #[test]
    fn index_examples() {
        assert!(!index_le_one(&ExactMatrix::from_i64(&[&[0, 1], &[0, 0]]), &tol()).unwrap());
        assert!(index_le_one(&ExactMatrix::from_i64(&[&[0, 1], &[0, 1]]), &tol()).unwrap());
        assert!(index_le_one(&FloatMatrix::from_i64(&[&[2, 1], &[1, 1]]), &tol()).unwrap());
        assert!(index_le_one(&ExactMatrix::zeros(2, 3), &tol()).is_err());
    }

    #[test]
    fn group_inverse_examples() {
        let a = ExactMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(group_inverse(&a, &tol()).unwrap(), crate::linalg::inverse_or_err(&a, &tol()).unwrap());
        let p = ExactMatrix::from_i64(&[&[0, 1], &[0, 1]]);
        assert_eq!(group_inverse(&p, &tol()).unwrap(), p);
        let d = ExactMatrix::diag(&[ratio(2, 1), ratio(0, 1)]);
        assert_eq!(group_inverse(&d, &tol()).unwrap(), ExactMatrix::diag(&[ratio(1, 2), ratio(0, 1)]));
        let df = group_inverse(&d.to_c64(), &tol()).unwrap();
        assert!(close(&df, &ExactMatrix::diag(&[ratio(1, 2), ratio(0, 1)]).to_c64(), &tol()));
        assert_eq!(
            group_inverse(&ExactMatrix::from_i64(&[&[0, 1], &[0, 0]]), &tol()),
            Err(Error::IndexTooLarge)
        );
        assert_eq!(group_inverse(&FloatMatrix::zeros(2, 2), &tol()).unwrap(), FloatMatrix::zeros(2, 2));
    }

    #[test]
    fn ep_examples() {
        assert!(is_ep(&ExactMatrix::from_i64(&[&[1, 2], &[3, 4]]), &tol()).unwrap());
        assert!(!is_ep(&ExactMatrix::from_i64(&[&[1, 1], &[0, 0]]), &tol()).unwrap());
        assert!(!is_ep(&FloatMatrix::from_i64(&[&[1, 1], &[0, 0]]), &tol()).unwrap());
        assert!(is_ep(&FloatMatrix::from_i64(&[&[2, 1, 0], &[1, 0, 0], &[0, 0, 0]]), &tol()).unwrap());
    }
}
