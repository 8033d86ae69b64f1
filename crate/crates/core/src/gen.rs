//! Seeded generators for specs, similarities and index-one matrices with a
//! prescribed Jordan structure.

use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::hs::{hs_decompose, HsDecomposition};
use crate::jordan::{build_jordan_matrix, validate_similarity, JordanSpec};
use crate::linalg::inverse_or_err;
use crate::matrix::Matrix;
use crate::scalar::{FloatScalar, Scalar, Tolerance};

/// Shape limits for [`random_spec`].
#[derive(Debug, Clone, Copy)]
pub struct SpecShape {
    pub max_s: usize,
    pub max_t: usize,
    pub max_size: usize,
}

/// Random spec with `1..=max_s` distinct nonzero Gaussian-integer
/// eigenvalues, `1..=max_t` blocks each, sizes in `1..=max_size`.
pub fn random_spec<S: Scalar>(rng: &mut impl Rng, shape: SpecShape) -> JordanSpec<S> {
    let s = rng.gen_range(1..=shape.max_s);
    let mut lambdas: Vec<(i64, i64)> = Vec::new();
    while lambdas.len() < s {
        let z = (rng.gen_range(-3..=3), rng.gen_range(-1..=1));
        if z != (0, 0) && !lambdas.contains(&z) {
            lambdas.push(z);
        }
    }
    let pairs = lambdas
        .into_iter()
        .map(|(re, im)| {
            let t = rng.gen_range(1..=shape.max_t);
            let mut sizes: Vec<usize> = (0..t).map(|_| rng.gen_range(1..=shape.max_size)).collect();
            sizes.sort_unstable_by(|a, b| b.cmp(a));
            (S::from_gaussian(re, im), sizes)
        })
        .collect();
    JordanSpec::from_pairs(pairs).expect("generated spec is valid")
}

/// Random `n x n` matrix with determinant one: a product of unit lower and
/// unit upper triangular factors with entries in `{-1, 0, 1}`.
pub fn random_unimodular<S: Scalar>(n: usize, rng: &mut impl Rng) -> Matrix<S> {
    let mut draw = |lower: bool| {
        Matrix::from_fn(n, n, |i, j| match (i == j, (i > j) == lower) {
            (true, _) => S::one(),
            (false, true) => S::from_i64(rng.gen_range(-1..=1)),
            _ => S::zero(),
        })
    };
    let l = draw(true);
    let u = draw(false);
    &l * &u
}

/// Random unitary matrix from Gram-Schmidt on a random complex matrix.
pub fn random_unitary<S: FloatScalar>(n: usize, rng: &mut impl Rng) -> Matrix<S> {
    loop {
        let raw = Matrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let mut q = Matrix::<Complex64>::zeros(n, n);
        let mut ok = true;
        for j in 0..n {
            let mut v: Vec<Complex64> = (0..n).map(|i| raw[(i, j)]).collect();
            for k in 0..j {
                let dot: Complex64 = (0..n).map(|i| q[(i, k)].conj() * v[i]).sum();
                for (i, vi) in v.iter_mut().enumerate() {
                    *vi -= dot * q[(i, k)];
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-3 {
                ok = false;
                break;
            }
            for (i, vi) in v.iter().enumerate() {
                q[(i, j)] = vi / norm;
            }
        }
        if ok {
            return Matrix::from_c64(&q);
        }
    }
}

/// Random complex matrix with Gaussian-integer entries in `[-bound, bound]`.
pub fn random_gaussian_matrix<S: Scalar>(rows: usize, cols: usize, bound: i64, rng: &mut impl Rng) -> Matrix<S> {
    Matrix::from_fn(rows, cols, |_, _| {
        S::from_gaussian(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound))
    })
}

/// An index-one `B` whose core `ΣK` has the Jordan structure of `spec`,
/// with its decomposition and a similarity `ΣK = PJP⁻¹` attached to the
/// returned spec.
#[derive(Debug, Clone)]
pub struct FloatInstance<S> {
    pub b: Matrix<S>,
    pub hs: HsDecomposition<S>,
    pub spec: JordanSpec<S>,
}

impl<S: FloatScalar> FloatInstance<S> {
    /// `P` with `ΣK = PJP⁻¹`.
    pub fn p(&self) -> &Matrix<S> {
        self.spec.similarity().expect("instances always carry P")
    }
}

/// Build `B = U₀ [[M, N], [O, O]] U₀*` with `M = P₀JP₀⁻¹`, then transport
/// `P₀` to the decomposition actually computed for `B`.
///
/// The range of `B` is spanned by the first `r` columns of both `U₀` and
/// `U`, so `V = U₀*U` is block diagonal and `ΣK = V₁*MV₁`, `P = V₁*P₀`.
pub fn float_instance<S: FloatScalar>(
    spec: &JordanSpec<S>,
    n: usize,
    rng: &mut impl Rng,
    tol: &Tolerance,
) -> Result<FloatInstance<S>> {
    let r = spec.r();
    assert!(r >= 1 && r <= n, "need 1 <= r <= n");
    let p0: Matrix<S> = random_unimodular(r, rng);
    let m = &(&p0 * &build_jordan_matrix(spec)) * &inverse_or_err(&p0, tol)?;
    let nblock: Matrix<S> = random_gaussian_matrix(r, n - r, 1, rng);
    let u0: Matrix<S> = random_unitary(n, rng);
    let inner = Matrix::from_blocks(&m, &nblock, &Matrix::zeros(n - r, r), &Matrix::zeros(n - r, n - r));
    let b = &(&u0 * &inner) * &u0.adjoint();
    let hs = hs_decompose(&b, tol)?;
    let v1 = &u0.block(0, 0, n, r).adjoint() * &hs.u.block(0, 0, n, r);
    let p = &v1.adjoint() * &p0;
    let spec = spec.without_similarity().with_similarity(p, tol)?;
    debug_assert!(validate_similarity(spec.similarity().unwrap(), &spec, &hs.sigma_k(), &Tolerance::new(1e-6, tol.rank_threshold_factor)?));
    Ok(FloatInstance { b, hs, spec })
}

/// `B = Q diag(J, O) Q⁻¹` with a random unimodular `Q`, in any mode.
pub fn index_one_from_spec<S: Scalar>(spec: &JordanSpec<S>, n: usize, rng: &mut impl Rng) -> (Matrix<S>, Matrix<S>) {
    let r = spec.r();
    assert!(r <= n, "spec dimension exceeds n");
    let q: Matrix<S> = random_unimodular(n, rng);
    let inner = Matrix::block_diag(&[build_jordan_matrix(spec), Matrix::zeros(n - r, n - r)]);
    let q_inv = inverse_or_err(&q, &S::default_tolerance()).expect("unimodular matrices are invertible");
    (&(&q * &inner) * &q_inv, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ginv::index_le_one;
    use crate::linalg::rank;
    use crate::{ExactMatrix, ExactScalar, FloatScalar64};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unimodular_is_invertible() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..6 {
            let q: ExactMatrix = random_unimodular(n, &mut rng);
            assert_eq!(rank(&q, &Tolerance::default()), n);
        }
    }

    #[test]
    fn float_instance_similarity_holds() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let shape = SpecShape { max_s: 2, max_t: 2, max_size: 2 };
        for _ in 0..20 {
            let spec: JordanSpec<FloatScalar64> = random_spec(&mut rng, shape);
            let n = spec.r() + rng.gen_range(0..=2);
            let inst = float_instance(&spec, n, &mut rng, &tol).unwrap();
            assert_eq!(inst.hs.r, spec.r());
            let loose = Tolerance::new(1e-7, 1e-10).unwrap();
            assert!(validate_similarity(inst.p(), &inst.spec, &inst.hs.sigma_k(), &loose));
            assert!(index_le_one(&inst.b, &tol).unwrap());
        }
    }

    #[test]
    fn exact_instance_has_index_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let spec: JordanSpec<ExactScalar> = random_spec(&mut rng, SpecShape { max_s: 2, max_t: 2, max_size: 2 });
        let (b, _) = index_one_from_spec(&spec, spec.r() + 1, &mut rng);
        assert!(index_le_one(&b, &Tolerance::default()).unwrap());
        assert_eq!(rank(&b, &Tolerance::default()), spec.r());
    }
}
