//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.
//!
//! Rotations orthogonalize the columns of the input, which diagonalizes
//! `M* M` implicitly. The sweep order is fixed, so the result depends only
//! on the input bits.

use num_complex::Complex64;

use crate::matrix::Matrix;
use crate::scalar::FloatScalar;

const MAX_SWEEPS: usize = 80;

/// `M = U diag(sigma) V*` with `U` (m x m) and `V` (n x n) unitary and
/// `sigma` (length `min(m, n)`) sorted in descending order.
#[derive(Debug, Clone)]
pub struct Svd<S> {
    pub u: Matrix<S>,
    pub sigma: Vec<f64>,
    pub v: Matrix<S>,
}

impl<S: FloatScalar> Svd<S> {
    /// `U diag(sigma) V*` with `diag(sigma)` padded to the original shape.
    pub fn reconstruct(&self) -> Matrix<S> {
        let (m, n) = (self.u.rows(), self.v.rows());
        let mut d = Matrix::<S>::zeros(m, n);
        for (i, &s) in self.sigma.iter().enumerate() {
            d[(i, i)] = S::from_c64(Complex64::new(s, 0.0));
        }
        &(&self.u * &d) * &self.v.adjoint()
    }

    /// Number of singular values above `factor * sigma_1`.
    pub fn numerical_rank(&self, factor: f64) -> usize {
        rank_from_sigma(&self.sigma, factor)
    }
}

pub(crate) fn rank_from_sigma(sigma: &[f64], factor: f64) -> usize {
    match sigma.first() {
        Some(&s1) if s1 > 0.0 => sigma.iter().filter(|&&s| s > factor * s1).count(),
        _ => 0,
    }
}

/// Singular value decomposition of a floating-point matrix.
pub fn svd<S: FloatScalar>(m: &Matrix<S>) -> Svd<S> {
    let (u, sigma, v) = svd_c64(&m.to_c64());
    Svd {
        u: Matrix::from_c64(&u),
        sigma,
        v: Matrix::from_c64(&v),
    }
}

pub(crate) fn svd_c64(m: &Matrix<Complex64>) -> (Matrix<Complex64>, Vec<f64>, Matrix<Complex64>) {
    let (u, sigma, v) = if m.rows() >= m.cols() {
        jacobi_tall(m)
    } else {
        let (u, s, v) = jacobi_tall(&m.adjoint());
        (v, s, u)
    };
    normalize_phases(u, sigma, v)
}

/// One-sided Jacobi for `rows >= cols`.
fn jacobi_tall(m: &Matrix<Complex64>) -> (Matrix<Complex64>, Vec<f64>, Matrix<Complex64>) {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<Complex64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); cols];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..cols {
            for j in i + 1..cols {
                let alpha: f64 = a[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = a[i].iter().zip(&a[j]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Remove the phase of gamma from column j, then rotate as in the real case.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let ph = phase.conj();
                for k in 0..rows {
                    let x = a[i][k];
                    let y = a[j][k] * ph;
                    a[i][k] = x * c - y * s;
                    a[j][k] = x * s + y * c;
                }
                for k in 0..cols {
                    let x = v[i][k];
                    let y = v[j][k] * ph;
                    v[i][k] = x * c - y * s;
                    v[j][k] = x * s + y * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = a
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap().then(x.cmp(&y)));

    let smax = norms.iter().cloned().fold(0.0, f64::max);
    let negligible = smax * f64::EPSILON * (rows.max(cols) as f64) * 4.0;

    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(rows);
    let mut sigma = Vec::with_capacity(cols);
    let mut v_mat = Matrix::<Complex64>::zeros(cols, cols);
    let mut missing = Vec::new();
    for (pos, &idx) in order.iter().enumerate() {
        sigma.push(norms[idx]);
        for k in 0..cols {
            v_mat[(k, pos)] = v[idx][k];
        }
        if norms[idx] > negligible && norms[idx] > 0.0 {
            u_cols.push(a[idx].iter().map(|z| z / norms[idx]).collect());
        } else {
            u_cols.push(Vec::new());
            missing.push(pos);
        }
    }
    for _ in cols..rows {
        missing.push(u_cols.len());
        u_cols.push(Vec::new());
    }
    complete_basis(&mut u_cols, &missing, rows);

    let u = Matrix::from_fn(rows, rows, |i, j| u_cols[j][i]);
    (u, sigma, v_mat)
}

/// Fill the listed empty columns with an orthonormal completion drawn from
/// the standard basis, taking the candidate with the largest residual each time.
fn complete_basis(cols: &mut [Vec<Complex64>], missing: &[usize], dim: usize) {
    for &slot in missing {
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for candidate in 0..dim {
            let mut w = vec![Complex64::new(0.0, 0.0); dim];
            w[candidate] = Complex64::new(1.0, 0.0);
            for _ in 0..2 {
                for c in cols.iter().filter(|c| !c.is_empty()) {
                    let proj: Complex64 = c.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                    for (wk, ck) in w.iter_mut().zip(c) {
                        *wk -= proj * ck;
                    }
                }
            }
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, w));
            }
        }
        let (norm, w) = best.expect("dimension is positive");
        cols[slot] = w.into_iter().map(|z| z / norm).collect();
    }
}

/// Scale every right singular vector so its first non-negligible component is
/// real positive; the matching left vector absorbs the conjugate phase.
fn normalize_phases(
    mut u: Matrix<Complex64>,
    sigma: Vec<f64>,
    mut v: Matrix<Complex64>,
) -> (Matrix<Complex64>, Vec<f64>, Matrix<Complex64>) {
    let n = v.cols();
    for j in 0..n {
        let lead = (0..v.rows()).map(|i| v[(i, j)]).find(|z| z.norm() > 1e-12);
        if let Some(z) = lead {
            let ph = (z / z.norm()).conj();
            for i in 0..v.rows() {
                v[(i, j)] *= ph;
            }
            if j < u.cols() {
                for i in 0..u.rows() {
                    u[(i, j)] *= ph;
                }
            }
        }
    }
    (u, sigma, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::FloatMatrix;

    fn is_unitary(m: &FloatMatrix) -> bool {
        let p = &m.adjoint() * m;
        (&p - &FloatMatrix::identity(m.rows())).frobenius_norm() < 1e-12
    }

    #[test]
    fn identity_has_unit_singular_values() {
        let d = svd(&FloatMatrix::identity(2));
        assert_eq!(d.sigma, vec![1.0, 1.0]);
    }

    #[test]
    fn nilpotent_two_by_two() {
        let m = FloatMatrix::from_i64(&[&[0, 2], &[0, 0]]);
        let d = svd(&m);
        assert!((d.sigma[0] - 2.0).abs() < 1e-14);
        assert!(d.sigma[1].abs() < 1e-14);
        assert!(is_unitary(&d.u) && is_unitary(&d.v));
        assert!((&d.reconstruct() - &m).frobenius_norm() < 1e-13);
    }

    #[test]
    fn zero_matrix() {
        let d = svd(&FloatMatrix::zeros(2, 2));
        assert_eq!(d.sigma, vec![0.0, 0.0]);
        assert!(is_unitary(&d.u) && is_unitary(&d.v));
        assert_eq!(d.numerical_rank(1e-10), 0);
    }

    #[test]
    fn completion_when_no_axis_dominates() {
        // I - vv* with v = (1,1,1,1)/2: every axis has residual 1/2 against the range.
        let m = FloatMatrix::from_fn(4, 4, |i, j| Complex64::new(if i == j { 0.75 } else { -0.25 }, 0.0));
        let d = svd(&m);
        assert!(is_unitary(&d.u) && is_unitary(&d.v));
        assert!((&d.reconstruct() - &m).frobenius_norm() < 1e-13);
    }

    #[test]
    fn wide_and_tall_shapes() {
        let m = FloatMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6]]);
        let d = svd(&m);
        assert_eq!(d.u.shape(), (2, 2));
        assert_eq!(d.v.shape(), (3, 3));
        assert!((&d.reconstruct() - &m).frobenius_norm() < 1e-12);
        let t = m.transpose();
        let d = svd(&t);
        assert!((&d.reconstruct() - &t).frobenius_norm() < 1e-12);
    }

    #[test]
    fn right_vectors_have_real_positive_lead() {
        let m = FloatMatrix::from_fn(3, 3, |i, j| Complex64::new((i + 2 * j) as f64, (i * j) as f64 - 1.0));
        let d = svd(&m);
        for j in 0..3 {
            let lead = (0..3).map(|i| d.v[(i, j)]).find(|z| z.norm() > 1e-12).unwrap();
            assert!(lead.im.abs() < 1e-14 && lead.re > 0.0);
        }
        assert!((&d.reconstruct() - &m).frobenius_norm() < 1e-12 * m.frobenius_norm());
    }
}
