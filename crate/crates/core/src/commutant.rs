//! The algebra of matrices commuting with a Jordan matrix `J`, and the
//! poset `δ` of idempotents inside it.
//!
//! A matrix commutes with `J` exactly when it is block diagonal across
//! eigenvalues and, inside the block of eigenvalue `λ_j`, every sub-block
//! `R_ik` (`r_ij x r_kj`) is an upper triangular Toeplitz core padded with
//! zeros: `[X; O]` when `r_ij > r_kj`, `[O X]` when `r_ij < r_kj`, `X` when
//! equal. [`CommutantMatrix`] stores exactly those cores, so its expansion
//! commutes with `J` by construction.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::jordan::{build_jordan_matrix, JordanSpec};
use crate::linalg::{close, commutes, inverse, is_projector, rank};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, Tolerance};

/// Upper triangular Toeplitz matrix `a₁I + a₂N + … + a_m N^{m-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rutm<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Rutm<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        Rutm { coeffs }
    }

    pub fn zero(size: usize) -> Self {
        Rutm::new(vec![S::zero(); size])
    }

    pub fn identity(size: usize) -> Self {
        let mut coeffs = vec![S::zero(); size];
        if let Some(c) = coeffs.first_mut() {
            *c = S::one();
        }
        Rutm::new(coeffs)
    }

    pub fn size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn expand(&self) -> Matrix<S> {
        let m = self.size();
        Matrix::from_fn(m, m, |i, j| if j >= i { self.coeffs[j - i].clone() } else { S::zero() })
    }

    /// Product of two RUTMs of equal size (truncated polynomial product in `N`).
    pub fn mul(&self, other: &Rutm<S>) -> Rutm<S> {
        let m = self.size();
        let coeffs = (0..m)
            .map(|l| (0..=l).fold(S::zero(), |acc, i| acc + self.coeffs[i].clone() * other.coeffs[l - i].clone()))
            .collect();
        Rutm::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// All idempotent RUTMs of the given size, found by solving the coefficient
/// equations of `X² = X` degree by degree.
///
/// Degree 0 gives `a₁² = a₁`. Degree `l ≥ 1` gives
/// `(2a₁ - 1) a_{l+1} = a_{l+1}·0 - Σ_{0<i<l} a_{i+1} a_{l-i+1}` with `2a₁ - 1 = ±1`,
/// so each higher coefficient is forced.
pub fn rutm_idempotents<S: Scalar>(size: usize) -> Vec<Rutm<S>> {
    assert!(size >= 1, "RUTM size must be positive");
    let mut out = Vec::new();
    for a0 in [S::zero(), S::one()] {
        let lead = a0.clone() + a0.clone() - S::one();
        let mut coeffs = vec![a0];
        for l in 1..size {
            let cross = (1..l).fold(S::zero(), |acc, i| acc + coeffs[i].clone() * coeffs[l - i].clone());
            coeffs.push(-cross / lead.clone());
        }
        let x = Rutm::new(coeffs);
        debug_assert_eq!(x.mul(&x), x);
        out.push(x);
    }
    out
}

/// Sub-block `R_ik` of an eigenvalue block: a RUTM core of size
/// `min(rows, cols)` padded with zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct CullenBlock<S> {
    pub rows: usize,
    pub cols: usize,
    pub core: Rutm<S>,
}

impl<S: Scalar> CullenBlock<S> {
    pub fn new(rows: usize, cols: usize, core: Rutm<S>) -> Result<Self> {
        if core.size() != rows.min(cols) {
            return Err(Error::ShapeMismatch(format!(
                "core of size {} in a {rows}x{cols} block",
                core.size()
            )));
        }
        Ok(CullenBlock { rows, cols, core })
    }

    /// Column offset of the core inside the block (`[O X]` case).
    fn core_col(&self) -> usize {
        self.cols - self.core.size()
    }

    pub fn expand(&self) -> Matrix<S> {
        let mut out = Matrix::zeros(self.rows, self.cols);
        // [X; O] puts the core at the top-left; [O X] at the top-right.
        let c0 = if self.rows < self.cols { self.core_col() } else { 0 };
        out.set_block(0, c0, &self.core.expand());
        out
    }
}

/// Element of the commutant of `J(spec)`, stored as per-eigenvalue grids
/// `blocks[j][i][k]` of Cullen blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutantMatrix<S> {
    spec: JordanSpec<S>,
    blocks: Vec<Vec<Vec<CullenBlock<S>>>>,
}

impl<S: Scalar> CommutantMatrix<S> {
    /// Build from core coefficients `coeffs[j][i][k]`; each vector must have
    /// length `min(r_ij, r_kj)`.
    pub fn new(spec: &JordanSpec<S>, coeffs: Vec<Vec<Vec<Vec<S>>>>) -> Result<Self> {
        if coeffs.len() != spec.s() {
            return Err(Error::ShapeMismatch(format!("{} eigenvalue grids for s = {}", coeffs.len(), spec.s())));
        }
        let mut blocks = Vec::with_capacity(spec.s());
        for (e, grid) in spec.eigenvalues().iter().zip(coeffs) {
            let t = e.t();
            if grid.len() != t || grid.iter().any(|row| row.len() != t) {
                return Err(Error::ShapeMismatch(format!("grid must be {t}x{t}")));
            }
            let mut rows = Vec::with_capacity(t);
            for (i, row) in grid.into_iter().enumerate() {
                let mut out_row = Vec::with_capacity(t);
                for (k, c) in row.into_iter().enumerate() {
                    out_row.push(CullenBlock::new(e.sizes[i], e.sizes[k], Rutm::new(c))?);
                }
                rows.push(out_row);
            }
            blocks.push(rows);
        }
        Ok(CommutantMatrix {
            spec: spec.without_similarity(),
            blocks,
        })
    }

    fn from_fn(spec: &JordanSpec<S>, mut f: impl FnMut(usize, usize, usize, usize) -> Rutm<S>) -> Self {
        let blocks = spec
            .eigenvalues()
            .iter()
            .enumerate()
            .map(|(j, e)| {
                (0..e.t())
                    .map(|i| {
                        (0..e.t())
                            .map(|k| {
                                let core = f(j, i, k, e.sizes[i].min(e.sizes[k]));
                                CullenBlock::new(e.sizes[i], e.sizes[k], core).expect("core sized by min")
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        CommutantMatrix {
            spec: spec.without_similarity(),
            blocks,
        }
    }

    pub fn zero(spec: &JordanSpec<S>) -> Self {
        Self::from_fn(spec, |_, _, _, m| Rutm::zero(m))
    }

    pub fn identity(spec: &JordanSpec<S>) -> Self {
        Self::from_fn(spec, |_, i, k, m| if i == k { Rutm::identity(m) } else { Rutm::zero(m) })
    }

    /// Diagonal 0/1 element choosing `I` on the Jordan blocks flagged in
    /// `choice` (one flag per block, in matrix order).
    pub fn block_choice(spec: &JordanSpec<S>, choice: &[bool]) -> Result<Self> {
        if choice.len() != spec.block_count() {
            return Err(Error::ShapeMismatch(format!(
                "{} choices for {} Jordan blocks",
                choice.len(),
                spec.block_count()
            )));
        }
        let starts: Vec<usize> = spec
            .eigenvalues()
            .iter()
            .scan(0, |acc, e| {
                let s = *acc;
                *acc += e.t();
                Some(s)
            })
            .collect();
        Ok(Self::from_fn(spec, |j, i, k, m| {
            if i == k && choice[starts[j] + i] {
                Rutm::identity(m)
            } else {
                Rutm::zero(m)
            }
        }))
    }

    /// Random element with Gaussian-integer core coefficients whose real and
    /// imaginary parts lie in `[-bound, bound]`.
    pub fn random(spec: &JordanSpec<S>, rng: &mut impl Rng, bound: i64) -> Self {
        Self::from_fn(spec, |_, _, _, m| {
            Rutm::new(
                (0..m)
                    .map(|_| S::from_gaussian(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound)))
                    .collect(),
            )
        })
    }

    /// Read the Cullen cores off a matrix and check that re-expanding them
    /// reproduces it; fails with [`Error::NotInCommutant`] otherwise.
    pub fn from_matrix(spec: &JordanSpec<S>, m: &Matrix<S>, tol: &Tolerance) -> Result<Self> {
        let r = spec.r();
        if m.shape() != (r, r) {
            return Err(Error::ShapeMismatch(format!("expected {r}x{r}, got {}x{}", m.rows(), m.cols())));
        }
        let offsets = spec.eigen_offsets();
        let block_starts: Vec<Vec<usize>> = spec
            .eigenvalues()
            .iter()
            .zip(&offsets)
            .map(|(e, &o)| {
                e.sizes
                    .iter()
                    .scan(o, |acc, &sz| {
                        let s = *acc;
                        *acc += sz;
                        Some(s)
                    })
                    .collect()
            })
            .collect();
        let out = Self::from_fn(spec, |j, i, k, size| {
            let e = &spec.eigenvalues()[j];
            let (ri, rk) = (e.sizes[i], e.sizes[k]);
            let row0 = block_starts[j][i];
            let col0 = block_starts[j][k] + if ri < rk { rk - size } else { 0 };
            Rutm::new((0..size).map(|d| m[(row0, col0 + d)].clone()).collect())
        });
        if !close(&out.expand(), m, tol) {
            return Err(Error::NotInCommutant);
        }
        Ok(out)
    }

    pub fn spec(&self) -> &JordanSpec<S> {
        &self.spec
    }

    pub fn blocks(&self) -> &[Vec<Vec<CullenBlock<S>>>] {
        &self.blocks
    }

    /// Eigenvalue block `D_j`.
    pub fn eigen_block(&self, j: usize) -> Matrix<S> {
        let e = &self.spec.eigenvalues()[j];
        let dim = e.dim();
        let mut out = Matrix::zeros(dim, dim);
        let mut r0 = 0;
        for (i, row) in self.blocks[j].iter().enumerate() {
            let mut c0 = 0;
            for (k, b) in row.iter().enumerate() {
                out.set_block(r0, c0, &b.expand());
                c0 += e.sizes[k];
            }
            r0 += e.sizes[i];
        }
        out
    }

    /// `diag(D_1, …, D_s)`.
    pub fn expand(&self) -> Matrix<S> {
        let ds: Vec<Matrix<S>> = (0..self.spec.s()).map(|j| self.eigen_block(j)).collect();
        Matrix::block_diag(&ds)
    }
}

/// Idempotent element of the commutant: a member of `δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutantProjector<S> {
    grid: CommutantMatrix<S>,
    matrix: Matrix<S>,
}

impl<S: Scalar> CommutantProjector<S> {
    /// Fails with [`Error::NotInDelta`] when the expansion is not idempotent.
    pub fn new(grid: CommutantMatrix<S>, tol: &Tolerance) -> Result<Self> {
        let matrix = grid.expand();
        if !is_projector(&matrix, tol)? {
            return Err(Error::NotInDelta);
        }
        Ok(CommutantProjector { grid, matrix })
    }

    pub fn from_matrix(spec: &JordanSpec<S>, m: &Matrix<S>, tol: &Tolerance) -> Result<Self> {
        let grid = CommutantMatrix::from_matrix(spec, m, tol).map_err(|e| match e {
            Error::NotInCommutant => Error::NotInDelta,
            other => other,
        })?;
        Self::new(grid, tol)
    }

    pub fn grid(&self) -> &CommutantMatrix<S> {
        &self.grid
    }

    pub fn spec(&self) -> &JordanSpec<S> {
        self.grid.spec()
    }

    /// The expanded `r x r` matrix.
    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<S> {
        self.matrix
    }

    pub fn rank(&self, tol: &Tolerance) -> usize {
        rank(&self.matrix, tol)
    }
}

/// Expanded matrix of a commutant projector.
pub fn expand<S: Scalar>(cp: &CommutantProjector<S>) -> Matrix<S> {
    cp.matrix().clone()
}

/// Ranks a projector can have when `J` has one eigenvalue with two blocks of
/// sizes `q >= p >= 1`: `{0, p, q, q+p}`, collapsing to `{0, q, 2q}` when
/// `q = p`.
pub fn admissible_ranks(q: usize, p: usize) -> Result<BTreeSet<usize>> {
    if p == 0 || q < p {
        return Err(Error::PrecondViolated(format!("need q >= p >= 1, got q = {q}, p = {p}")));
    }
    Ok([0, p, q, q + p].into_iter().collect())
}

/// `T² = T` and `TJ = JT`.
pub fn delta_membership<S: Scalar>(t: &Matrix<S>, spec: &JordanSpec<S>, tol: &Tolerance) -> Result<bool> {
    let r = spec.r();
    if t.shape() != (r, r) {
        return Err(Error::ShapeMismatch(format!("expected {r}x{r}, got {}x{}", t.rows(), t.cols())));
    }
    Ok(is_projector(t, tol)? && commutes(t, &build_jordan_matrix(spec), tol))
}

/// Projector order: `T1 <= T2` iff `T1 = T1 T2 = T2 T1`.
pub fn proj_leq<S: Scalar>(t1: &Matrix<S>, t2: &Matrix<S>, tol: &Tolerance) -> bool {
    close(&(t1 * t2), t1, tol) && close(&(t2 * t1), t1, tol)
}

/// Neither `T1 <= T2` nor `T2 <= T1`.
pub fn proj_incomparable<S: Scalar>(t1: &Matrix<S>, t2: &Matrix<S>, tol: &Tolerance) -> bool {
    !proj_leq(t1, t2, tol) && !proj_leq(t2, t1, tol)
}

/// Seeded source of `δ` elements `T = S E S⁻¹`, where `E` picks `O` or `I`
/// per Jordan block and `S = I + C` for a random commutant element `C`.
///
/// Conjugation need not reach every element of `δ`; it does reach every rank
/// class.
pub struct DeltaSampler<S> {
    spec: JordanSpec<S>,
    rng: ChaCha8Rng,
    tol: Tolerance,
}

/// Invertible commutant element and its inverse.
#[derive(Debug, Clone)]
pub struct Conjugator<S> {
    pub s: Matrix<S>,
    pub s_inv: Matrix<S>,
}

impl<S: Scalar> Conjugator<S> {
    pub fn conjugate(&self, m: &Matrix<S>) -> Matrix<S> {
        &(&self.s * m) * &self.s_inv
    }
}

impl<S: Scalar> DeltaSampler<S> {
    pub const COEFF_BOUND: i64 = 2;

    pub fn new(spec: &JordanSpec<S>, seed: u64) -> Self {
        DeltaSampler {
            spec: spec.without_similarity(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            tol: S::default_tolerance(),
        }
    }

    pub fn spec(&self) -> &JordanSpec<S> {
        &self.spec
    }

    /// Draw `S = I + C` until invertible.
    pub fn conjugator(&mut self) -> Conjugator<S> {
        let id = Matrix::identity(self.spec.r());
        loop {
            let c = CommutantMatrix::random(&self.spec, &mut self.rng, Self::COEFF_BOUND).expand();
            let s = &id + &c;
            if let Ok(Some(s_inv)) = inverse(&s, &self.tol) {
                return Conjugator { s, s_inv };
            }
        }
    }

    /// Uniform random O/I choice per Jordan block.
    pub fn choice(&mut self) -> Vec<bool> {
        (0..self.spec.block_count()).map(|_| self.rng.gen_bool(0.5)).collect()
    }

    /// `S E S⁻¹` for a given conjugator and block choice.
    pub fn conjugate_choice(&self, conj: &Conjugator<S>, choice: &[bool]) -> Result<CommutantProjector<S>> {
        let e = CommutantMatrix::block_choice(&self.spec, choice)?.expand();
        CommutantProjector::from_matrix(&self.spec, &conj.conjugate(&e), &self.tol)
    }

    pub fn sample_with_choice(&mut self, choice: &[bool]) -> Result<CommutantProjector<S>> {
        let conj = self.conjugator();
        self.conjugate_choice(&conj, choice)
    }

    pub fn sample(&mut self) -> CommutantProjector<S> {
        let choice = self.choice();
        self.sample_with_choice(&choice).expect("choice sized from spec")
    }
}

/// One sampled `δ` element, deterministic in `seed`.
pub fn sample_delta_projector<S: Scalar>(spec: &JordanSpec<S>, seed: u64) -> CommutantProjector<S> {
    DeltaSampler::new(spec, seed).sample()
}
