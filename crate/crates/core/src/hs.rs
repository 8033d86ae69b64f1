//! Hartwig-Spindelböck decomposition
//! `B = U [[ΣK, ΣL], [O, O]] U*` with `U` unitary, `Σ` the positive singular
//! values of `B` and `KK* + LL* = I_r`.
//!
//! The decomposition is not unique; callers compare reconstructions and
//! invariants, never `U` itself.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::close;
use crate::matrix::Matrix;
use crate::scalar::{FloatScalar, Tolerance};
use crate::svd::svd;

#[derive(Debug, Clone)]
pub struct HsDecomposition<S> {
    pub u: Matrix<S>,
    pub sigma: Vec<f64>,
    pub k: Matrix<S>,
    pub l: Matrix<S>,
    pub r: usize,
}

impl<S: FloatScalar> HsDecomposition<S> {
    /// Assemble from parts and check every invariant.
    pub fn from_parts(u: Matrix<S>, sigma: Vec<f64>, k: Matrix<S>, l: Matrix<S>, tol: &Tolerance) -> Result<Self> {
        let r = sigma.len();
        let d = HsDecomposition { u, sigma, k, l, r };
        d.validate(tol)?;
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.u.rows()
    }

    /// `Σ` as an `r x r` diagonal matrix.
    pub fn sigma_matrix(&self) -> Matrix<S> {
        let entries: Vec<S> = self.sigma.iter().map(|&s| S::from_c64(Complex64::new(s, 0.0))).collect();
        Matrix::diag(&entries)
    }

    /// The `r x r` core block `ΣK`.
    pub fn sigma_k(&self) -> Matrix<S> {
        &self.sigma_matrix() * &self.k
    }

    /// The `r x (n - r)` block `ΣL`.
    pub fn sigma_l(&self) -> Matrix<S> {
        &self.sigma_matrix() * &self.l
    }

    /// `U [[top_left, top_right], [O, O]] U*`.
    pub fn embed_top(&self, top_left: &Matrix<S>, top_right: &Matrix<S>) -> Matrix<S> {
        let n = self.n();
        let r = self.r;
        let inner = Matrix::from_blocks(top_left, top_right, &Matrix::zeros(n - r, r), &Matrix::zeros(n - r, n - r));
        &(&self.u * &inner) * &self.u.adjoint()
    }

    /// `U diag(a, d) U*`.
    pub fn embed_diag(&self, a: &Matrix<S>, d: &Matrix<S>) -> Matrix<S> {
        let inner = Matrix::block_diag(&[a.clone(), d.clone()]);
        &(&self.u * &inner) * &self.u.adjoint()
    }

    /// `U* M U`.
    pub fn to_local(&self, m: &Matrix<S>) -> Matrix<S> {
        &(&self.u.adjoint() * m) * &self.u
    }

    pub fn reconstruct(&self) -> Matrix<S> {
        self.embed_top(&self.sigma_k(), &self.sigma_l())
    }

    /// Check unitarity of `U`, `KK* + LL* = I_r`, shapes and ordering of `Σ`.
    pub fn validate(&self, tol: &Tolerance) -> Result<()> {
        let n = self.u.require_square()?;
        let r = self.r;
        if r == 0 || r > n || self.sigma.len() != r {
            return Err(Error::ShapeMismatch(format!("r = {r} with n = {n}")));
        }
        if self.k.shape() != (r, r) || self.l.shape() != (r, n - r) {
            return Err(Error::ShapeMismatch("K must be r x r and L r x (n-r)".into()));
        }
        if self.sigma.iter().any(|&s| !(s > 0.0)) || self.sigma.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::PrecondViolated("sigma must be positive and descending".into()));
        }
        if !close(&(&self.u.adjoint() * &self.u), &Matrix::identity(n), tol) {
            return Err(Error::PrecondViolated("U is not unitary".into()));
        }
        let kl = &(&self.k * &self.k.adjoint()) + &(&self.l * &self.l.adjoint());
        if !close(&kl, &Matrix::identity(r), tol) {
            return Err(Error::PrecondViolated("KK* + LL* differs from I_r".into()));
        }
        Ok(())
    }
}

/// Decompose a nonzero square floating-point matrix.
///
/// From the SVD `B = W diag(Σ, 0) V*`: `U = W` and `[K L]` is the first `r`
/// rows of `V* W`.
pub fn hs_decompose<S: FloatScalar>(b: &Matrix<S>, tol: &Tolerance) -> Result<HsDecomposition<S>> {
    let n = b.require_square()?;
    let d = svd(b);
    let r = d.numerical_rank(tol.rank_threshold_factor);
    if r == 0 {
        return Err(Error::ZeroMatrix);
    }
    let vw = &d.v.adjoint() * &d.u;
    Ok(HsDecomposition {
        k: vw.block(0, 0, r, r),
        l: vw.block(0, r, r, n - r),
        sigma: d.sigma[..r].to_vec(),
        u: d.u,
        r,
    })
}

pub fn hs_reconstruct<S: FloatScalar>(d: &HsDecomposition<S>) -> Matrix<S> {
    d.reconstruct()
}

/// `ΣK` together with its invertibility, which holds exactly when `B` has
/// index at most one. Singular values of `ΣK` are judged against `σ₁` of
/// `B`, so a rounding-level core is singular even when it is `1 x 1`.
#[derive(Debug, Clone)]
pub struct CoreBlock<S> {
    pub matrix: Matrix<S>,
    pub nonsingular: bool,
}

pub fn sigma_k<S: FloatScalar>(d: &HsDecomposition<S>, tol: &Tolerance) -> CoreBlock<S> {
    let matrix = d.sigma_k();
    let scale = d.sigma.first().copied().unwrap_or(0.0);
    let nonsingular = svd(&matrix)
        .sigma
        .iter()
        .all(|&s| s > tol.rank_threshold_factor * scale);
    CoreBlock { matrix, nonsingular }
}
