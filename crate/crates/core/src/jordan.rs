//! Jordan structure of the core block: specifications, the Jordan matrix,
//! block sizes from rank sequences, and similarity checks.
//!
//! There is no general eigenvalue solver. Exact callers supply candidate
//! eigenvalues; floating callers supply `(P, spec)` and pass the similarity
//! gate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{close, inverse, null_space, rank};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, Tolerance};

/// Jordan blocks attached to one nonzero eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBlocks<S> {
    pub lambda: S,
    /// Block sizes, descending.
    pub sizes: Vec<usize>,
}

impl<S: Scalar> EigenBlocks<S> {
    pub fn new(lambda: S, sizes: Vec<usize>) -> Self {
        EigenBlocks { lambda, sizes }
    }

    /// Geometric multiplicity `t_j`.
    pub fn t(&self) -> usize {
        self.sizes.len()
    }

    /// Algebraic multiplicity `r_j`.
    pub fn dim(&self) -> usize {
        self.sizes.iter().sum()
    }
}

/// Jordan canonical form data for a nonsingular matrix, with an optional
/// similarity `P` such that `M = P J P⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanSpec<S> {
    eigenvalues: Vec<EigenBlocks<S>>,
    p: Option<Matrix<S>>,
}

impl<S: Scalar> JordanSpec<S> {
    /// Validate distinct nonzero eigenvalues and nonempty descending sizes.
    pub fn new(eigenvalues: Vec<EigenBlocks<S>>) -> Result<Self> {
        for (j, e) in eigenvalues.iter().enumerate() {
            if e.lambda.is_zero() {
                return Err(Error::InvalidSpec(format!("eigenvalue {j} is zero")));
            }
            if e.sizes.is_empty() {
                return Err(Error::InvalidSpec(format!("eigenvalue {j} has no blocks")));
            }
            if e.sizes.contains(&0) {
                return Err(Error::InvalidSpec(format!("eigenvalue {j} has an empty block")));
            }
            if e.sizes.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::InvalidSpec(format!("block sizes of eigenvalue {j} are not descending")));
            }
            if eigenvalues[..j].iter().any(|o| o.lambda == e.lambda) {
                return Err(Error::InvalidSpec(format!("eigenvalue {j} repeats an earlier one")));
            }
        }
        Ok(JordanSpec { eigenvalues, p: None })
    }

    /// Convenience constructor from `(lambda, sizes)` pairs.
    pub fn from_pairs(pairs: Vec<(S, Vec<usize>)>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(l, s)| EigenBlocks::new(l, s)).collect())
    }

    /// Attach a similarity matrix; it must be `r x r` and nonsingular.
    pub fn with_similarity(mut self, p: Matrix<S>, tol: &Tolerance) -> Result<Self> {
        let r = self.r();
        if p.shape() != (r, r) {
            return Err(Error::ShapeMismatch(format!("P must be {r}x{r}")));
        }
        if inverse(&p, tol)?.is_none() {
            return Err(Error::Singular);
        }
        self.p = Some(p);
        Ok(self)
    }

    pub fn without_similarity(&self) -> Self {
        JordanSpec {
            eigenvalues: self.eigenvalues.clone(),
            p: None,
        }
    }

    pub fn eigenvalues(&self) -> &[EigenBlocks<S>] {
        &self.eigenvalues
    }

    pub fn similarity(&self) -> Option<&Matrix<S>> {
        self.p.as_ref()
    }

    /// Number of distinct eigenvalues.
    pub fn s(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Total dimension.
    pub fn r(&self) -> usize {
        self.eigenvalues.iter().map(EigenBlocks::dim).sum()
    }

    /// Total number of Jordan blocks.
    pub fn block_count(&self) -> usize {
        self.eigenvalues.iter().map(EigenBlocks::t).sum()
    }

    /// `(eigenvalue index, size, offset)` for every block in matrix order.
    pub fn blocks(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let mut offset = 0;
        for (j, e) in self.eigenvalues.iter().enumerate() {
            for &sz in &e.sizes {
                out.push((j, sz, offset));
                offset += sz;
            }
        }
        out
    }

    /// Offset of each eigenvalue's diagonal region.
    pub fn eigen_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.eigenvalues
            .iter()
            .map(|e| {
                let o = acc;
                acc += e.dim();
                o
            })
            .collect()
    }

    /// Same spec with every eigenvalue converted to another scalar type.
    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> JordanSpec<T> {
        JordanSpec {
            eigenvalues: self
                .eigenvalues
                .iter()
                .map(|e| EigenBlocks::new(f(&e.lambda), e.sizes.clone()))
                .collect(),
            p: self.p.as_ref().map(|p| p.map(&f)),
        }
    }
}

/// Single Jordan block `λI + N` of the given size.
pub fn jordan_block<S: Scalar>(lambda: &S, size: usize) -> Matrix<S> {
    Matrix::from_fn(size, size, |i, j| {
        if i == j {
            lambda.clone()
        } else if j == i + 1 {
            S::one()
        } else {
            S::zero()
        }
    })
}

/// Block-diagonal Jordan matrix `J` of a spec.
pub fn build_jordan_matrix<S: Scalar>(spec: &JordanSpec<S>) -> Matrix<S> {
    let blocks: Vec<Matrix<S>> = spec
        .eigenvalues
        .iter()
        .flat_map(|e| e.sizes.iter().map(move |&s| jordan_block(&e.lambda, s)))
        .collect();
    Matrix::block_diag(&blocks)
}

/// Recover block sizes from the rank sequence of `(M - λI)^k` for each
/// candidate eigenvalue (exact mode).
///
/// Candidates with zero multiplicity and duplicates are dropped. Fails with
/// [`Error::IncompleteSpectrum`] when the multiplicities found do not add up
/// to the dimension.
pub fn weyr_structure<S: Scalar>(m: &Matrix<S>, candidates: &[S]) -> Result<JordanSpec<S>> {
    let n = m.require_square()?;
    if !S::EXACT {
        return Err(Error::NotSupported("block sizes from rank sequences need exact arithmetic".into()));
    }
    let tol = S::default_tolerance();
    if candidates.iter().any(|c| c.is_zero()) || rank(m, &tol) < n {
        return Err(Error::ZeroEigenvalue);
    }
    weyr_blocks(m, candidates, n)
}

/// Block structure of the nonzero eigenvalues of an index-one `B` (exact
/// mode). This is the Jordan structure of the core block `ΣK`. Zero
/// candidates are ignored.
pub fn nonzero_structure<S: Scalar>(b: &Matrix<S>, candidates: &[S]) -> Result<JordanSpec<S>> {
    b.require_square()?;
    if !S::EXACT {
        return Err(Error::NotSupported("block sizes from rank sequences need exact arithmetic".into()));
    }
    let tol = S::default_tolerance();
    if !crate::ginv::index_le_one(b, &tol)? {
        return Err(Error::IndexTooLarge);
    }
    let nonzero: Vec<S> = candidates.iter().filter(|c| !c.is_zero()).cloned().collect();
    weyr_blocks(b, &nonzero, rank(b, &tol))
}

fn weyr_blocks<S: Scalar>(m: &Matrix<S>, candidates: &[S], expected: usize) -> Result<JordanSpec<S>> {
    let n = m.rows();
    let tol = S::default_tolerance();
    let mut eigenvalues = Vec::new();
    let mut found = 0;
    for (idx, lambda) in candidates.iter().enumerate() {
        if candidates[..idx].contains(lambda) {
            continue;
        }
        let shifted = m - &Matrix::identity(n).scale(lambda);
        // ranks[k] = rank((M - λI)^k)
        let mut ranks = vec![n];
        let mut power = Matrix::identity(n);
        loop {
            power = &power * &shifted;
            let rk = rank(&power, &tol);
            let prev = *ranks.last().unwrap();
            ranks.push(rk);
            if rk == prev {
                break;
            }
        }
        let multiplicity = n - *ranks.last().unwrap();
        if multiplicity == 0 {
            continue;
        }
        // Blocks of size >= k: ranks[k-1] - ranks[k].
        let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
        let mut sizes = Vec::new();
        for k in (1..=at_least.len()).rev() {
            let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
            sizes.extend(std::iter::repeat_n(k, exactly));
        }
        found += multiplicity;
        eigenvalues.push(EigenBlocks::new(lambda.clone(), sizes));
    }
    if found != expected {
        return Err(Error::IncompleteSpectrum { found, expected });
    }
    JordanSpec::new(eigenvalues)
}

/// `P` nonsingular and `P J P⁻¹ ≈ M`.
pub fn validate_similarity<S: Scalar>(p: &Matrix<S>, spec: &JordanSpec<S>, m: &Matrix<S>, tol: &Tolerance) -> bool {
    let r = spec.r();
    if p.shape() != (r, r) || m.shape() != (r, r) {
        return false;
    }
    match inverse(p, tol) {
        Ok(Some(p_inv)) => close(&(&(p * &build_jordan_matrix(spec)) * &p_inv), m, tol),
        _ => false,
    }
}

/// Find a nonsingular `P` with `M P = P J`, i.e. `M = P J P⁻¹`.
///
/// The solutions of `MX = XJ` form a linear space; a random combination of a
/// basis is nonsingular with probability one when `M` really has the Jordan
/// form of `spec`. Fails with [`Error::SimilarityMismatch`] otherwise.
pub fn similarity_to_jordan<S: Scalar>(m: &Matrix<S>, spec: &JordanSpec<S>, seed: u64, tol: &Tolerance) -> Result<Matrix<S>> {
    let r = m.require_square()?;
    if spec.r() != r {
        return Err(Error::ShapeMismatch(format!("spec has dimension {} but matrix is {r}x{r}", spec.r())));
    }
    let j = build_jordan_matrix(spec);
    // Column-major vec(X): vec(MX - XJ) = (I ⊗ M - Jᵀ ⊗ I) vec(X).
    let dim = r * r;
    let op = Matrix::from_fn(dim, dim, |row, col| {
        let (ri, rc) = (row % r, row / r);
        let (ci, cc) = (col % r, col / r);
        let mut v = S::zero();
        if rc == cc {
            v = v + m[(ri, ci)].clone();
        }
        if ri == ci {
            v = v - j[(cc, rc)].clone();
        }
        v
    });
    let basis = null_space(&op, tol);
    let expected_dim = commutant_dimension(spec);
    if basis.cols() != expected_dim {
        return Err(Error::SimilarityMismatch(format!(
            "intertwiner space has dimension {} but the Jordan form needs {expected_dim}",
            basis.cols()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let coeffs: Vec<S> = (0..basis.cols())
            .map(|_| S::from_gaussian(rng.gen_range(-3..=3), rng.gen_range(-3..=3)))
            .collect();
        let p = Matrix::from_fn(r, r, |i, c| {
            (0..basis.cols()).fold(S::zero(), |acc, k| acc + coeffs[k].clone() * basis[(c * r + i, k)].clone())
        });
        if validate_similarity(&p, spec, m, tol) {
            return Ok(p);
        }
    }
    Err(Error::SimilarityMismatch("no nonsingular intertwiner found".into()))
}

/// Dimension of the algebra of matrices commuting with `J`:
/// `Σ_j Σ_{i,k} min(r_ij, r_kj)`.
pub fn commutant_dimension<S: Scalar>(spec: &JordanSpec<S>) -> usize {
    spec.eigenvalues
        .iter()
        .map(|e| {
            e.sizes
                .iter()
                .map(|&a| e.sizes.iter().map(|&b| a.min(b)).sum::<usize>())
                .sum::<usize>()
        })
        .sum()
}
