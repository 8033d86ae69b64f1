//! The sharp order `A ≤# B ⟺ A² = AB = BA` and its projector models.
//!
//! Predecessors of `B = U [[ΣK, ΣL], [O, O]] U*` are exactly
//! `A = U [[TΣK, TΣL], [O, O]] U*` with `T` in `τ`, the idempotents
//! commuting with `ΣK`. [`phi`] and [`phi_inv`] move between the two sides;
//! [`psi`] carries `δ` (idempotents commuting with the Jordan form `J` of
//! `ΣK = PJP⁻¹`) onto `τ`.

use crate::error::{Error, Result};
use crate::ginv::{index_le_one, index_le_one_given_square};
use crate::hs::HsDecomposition;
use crate::jordan::{build_jordan_matrix, jordan_block, JordanSpec};
use crate::linalg::{close, commutes, inverse, inverse_or_err, is_projector, product_close};
use crate::matrix::Matrix;
use crate::scalar::{FloatScalar, Scalar, Tolerance};

/// `A ≤# B`. Both arguments must have index at most one.
pub fn sharp_leq<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>, tol: &Tolerance) -> Result<bool> {
    a.same_shape(b)?;
    a.require_square()?;
    let a2 = a * a;
    if !index_le_one_given_square(a, &a2, tol) || !index_le_one(b, tol)? {
        return Err(Error::IndexTooLarge);
    }
    Ok(product_close(a, b, &a2, tol) && product_close(b, a, &a2, tol))
}

/// Pairwise sharp order on a list: entry `[i][j]` is `items[i] ≤# items[j]`.
/// Each element's index is checked once.
pub fn sharp_relation<S: Scalar>(items: &[Matrix<S>], tol: &Tolerance) -> Result<Vec<Vec<bool>>> {
    let mut squares = Vec::with_capacity(items.len());
    for m in items {
        m.require_square()?;
        if let Some(first) = items.first() {
            m.same_shape(first)?;
        }
        let sq = m * m;
        if !index_le_one_given_square(m, &sq, tol) {
            return Err(Error::IndexTooLarge);
        }
        squares.push(sq);
    }
    Ok(items
        .iter()
        .zip(&squares)
        .map(|(a, a2)| {
            items
                .iter()
                .map(|b| product_close(a, b, a2, tol) && product_close(b, a, a2, tol))
                .collect()
        })
        .collect())
}

/// `T² = T` and `TΣK = ΣKT`.
pub fn tau_membership<S: FloatScalar>(t: &Matrix<S>, hs: &HsDecomposition<S>, tol: &Tolerance) -> Result<bool> {
    if t.shape() != (hs.r, hs.r) {
        return Err(Error::ShapeMismatch(format!("T must be {0}x{0}", hs.r)));
    }
    Ok(is_projector(t, tol)? && commutes(t, &hs.sigma_k(), tol))
}

fn require_tau<S: FloatScalar>(t: &Matrix<S>, hs: &HsDecomposition<S>, tol: &Tolerance) -> Result<()> {
    if tau_membership(t, hs, tol)? {
        Ok(())
    } else {
        Err(Error::NotInTau)
    }
}

/// The predecessor `U [[TΣK, TΣL], [O, O]] U*` of `B`.
pub fn phi_inv<S: FloatScalar>(t: &Matrix<S>, hs: &HsDecomposition<S>, tol: &Tolerance) -> Result<Matrix<S>> {
    require_tau(t, hs, tol)?;
    Ok(hs.embed_top(&(t * &hs.sigma_k()), &(t * &hs.sigma_l())))
}

/// The projector `T ∈ τ` with `A = φ⁻¹(T)`, read off as `M₁₁ (ΣK)⁻¹` where
/// `M₁₁` is the leading block of `U*AU`, then checked by reconstruction.
pub fn phi<S: FloatScalar>(a: &Matrix<S>, hs: &HsDecomposition<S>, tol: &Tolerance) -> Result<Matrix<S>> {
    let n = hs.n();
    if a.shape() != (n, n) {
        return Err(Error::ShapeMismatch(format!("A must be {n}x{n}")));
    }
    let core_inv = inverse(&hs.sigma_k(), tol)?.ok_or(Error::IndexTooLarge)?;
    let m11 = hs.to_local(a).block(0, 0, hs.r, hs.r);
    let t = &m11 * &core_inv;
    match phi_inv(&t, hs, tol) {
        Ok(back) if close(&back, a, tol) => Ok(t),
        _ => Err(Error::NotAPredecessor),
    }
}

/// `ψ(T) = PTP⁻¹`, mapping `δ` onto `τ`.
pub fn psi<S: Scalar>(t: &Matrix<S>, p: &Matrix<S>, tol: &Tolerance) -> Result<Matrix<S>> {
    t.same_shape(p)?;
    let p_inv = inverse_or_err(p, tol)?;
    Ok(&(p * t) * &p_inv)
}

/// `ψ⁻¹(T) = P⁻¹TP`.
pub fn psi_inv<S: Scalar>(t: &Matrix<S>, p: &Matrix<S>, tol: &Tolerance) -> Result<Matrix<S>> {
    t.same_shape(p)?;
    let p_inv = inverse_or_err(p, tol)?;
    Ok(&(&p_inv * t) * p)
}

/// Group inverse of `φ⁻¹(T)` from `(TΣK)# = (ΣK)⁻¹T`:
/// `U [[(ΣK)⁻¹T, (ΣK)⁻¹T K⁻¹L], [O, O]] U*`.
pub fn predecessor_group_inverse<S: FloatScalar>(
    t: &Matrix<S>,
    hs: &HsDecomposition<S>,
    tol: &Tolerance,
) -> Result<Matrix<S>> {
    require_tau(t, hs, tol)?;
    let core_inv = inverse(&hs.sigma_k(), tol)?.ok_or(Error::IndexTooLarge)?;
    let k_inv = inverse(&hs.k, tol)?.ok_or(Error::SingularK)?;
    let tl = &core_inv * t;
    let tr = &(&tl * &k_inv) * &hs.l;
    Ok(hs.embed_top(&tl, &tr))
}

/// A predecessor together with its projector model.
#[derive(Debug, Clone)]
pub struct Predecessor<S> {
    pub t: Matrix<S>,
    pub a: Matrix<S>,
}

impl<S: FloatScalar> Predecessor<S> {
    pub fn from_projector(t: Matrix<S>, hs: &HsDecomposition<S>, tol: &Tolerance) -> Result<Self> {
        let a = phi_inv(&t, hs, tol)?;
        Ok(Predecessor { t, a })
    }

    pub fn from_matrix(a: Matrix<S>, hs: &HsDecomposition<S>, tol: &Tolerance) -> Result<Self> {
        let t = phi(&a, hs, tol)?;
        Ok(Predecessor { t, a })
    }
}

fn require_single_blocks<S: Scalar>(spec: &JordanSpec<S>) -> Result<()> {
    if spec.eigenvalues().iter().any(|e| e.t() > 1) {
        return Err(Error::MultiplicityExceedsOne);
    }
    Ok(())
}

/// `P diag(J, O_{n-r}) P⁻¹` for an `n x n` similarity `P`.
pub fn padded_jordan<S: Scalar>(p: &Matrix<S>, spec: &JordanSpec<S>, tol: &Tolerance) -> Result<Matrix<S>> {
    let n = p.require_square()?;
    let r = spec.r();
    if r > n {
        return Err(Error::ShapeMismatch(format!("spec dimension {r} exceeds n = {n}")));
    }
    let inner = Matrix::block_diag(&[build_jordan_matrix(spec), Matrix::zeros(n - r, n - r)]);
    psi(&inner, p, tol)
}

/// All `2^l` predecessors `P diag(D₁, …, D_l, O) P⁻¹`, `D_i ∈ {O, J_i}`, of
/// `B = P diag(J₁, …, J_l, O) P⁻¹` when each eigenvalue has a single block.
/// Entry `m` of the result picks `J_i` exactly when bit `i` of `m` is set.
pub fn jordan_predecessors<S: Scalar>(
    p: &Matrix<S>,
    spec: &JordanSpec<S>,
    n: usize,
    tol: &Tolerance,
) -> Result<Vec<Matrix<S>>> {
    require_single_blocks(spec)?;
    if p.shape() != (n, n) {
        return Err(Error::ShapeMismatch(format!("P must be {n}x{n}")));
    }
    let r = spec.r();
    if r > n {
        return Err(Error::ShapeMismatch(format!("spec dimension {r} exceeds n = {n}")));
    }
    let p_inv = inverse_or_err(p, tol)?;
    let blocks: Vec<Matrix<S>> = spec.eigenvalues().iter().map(|e| jordan_block(&e.lambda, e.sizes[0])).collect();
    let l = blocks.len();
    let mut out = Vec::with_capacity(1 << l);
    for mask in 0..(1usize << l) {
        let mut parts: Vec<Matrix<S>> = blocks
            .iter()
            .enumerate()
            .map(|(i, j)| if mask >> i & 1 == 1 { j.clone() } else { Matrix::zeros(j.rows(), j.cols()) })
            .collect();
        parts.push(Matrix::zeros(n - r, n - r));
        out.push(&(p * &Matrix::block_diag(&parts)) * &p_inv);
    }
    Ok(out)
}

/// Counterexample to "every predecessor of `P diag(J₁, …, J_t) P⁻¹` is
/// `P diag(D₁, …, D_t) P⁻¹` with `D_i ∈ {O, J_i}`".
#[derive(Debug, Clone)]
pub struct ConjectureReport<S> {
    pub b: Matrix<S>,
    pub a: Matrix<S>,
    /// `A ≤# B`.
    pub leq: bool,
    /// Whether `A` equals one of the block-choice matrices.
    pub diagonal_form: bool,
    /// Number of block-choice matrices compared against.
    pub forms_checked: usize,
}

impl<S> ConjectureReport<S> {
    /// The conjecture fails exactly when `A ≤# B` but `A` has no block form.
    pub fn refutes(&self) -> bool {
        self.leq && !self.diagonal_form
    }
}

/// `B = I₃` (so `P = I₃`, three blocks `J_i = (1)`) and
/// `A = [[0,1,0],[0,1,0],[0,0,0]]`.
pub fn conjecture_refutation<S: Scalar>() -> ConjectureReport<S> {
    let tol = S::default_tolerance();
    let b = Matrix::<S>::identity(3);
    let a = Matrix::from_i64(&[&[0, 1, 0], &[0, 1, 0], &[0, 0, 0]]);
    let leq = sharp_leq(&a, &b, &tol).expect("both arguments have index one");
    let spec = JordanSpec::from_pairs(vec![(S::one(), vec![1, 1, 1])]).expect("valid spec");
    let forms: Vec<Matrix<S>> = (0..8usize)
        .map(|mask| {
            let d: Vec<S> = (0..3).map(|i| if mask >> i & 1 == 1 { S::one() } else { S::zero() }).collect();
            Matrix::diag(&d)
        })
        .collect();
    debug_assert_eq!(spec.block_count(), 3);
    let diagonal_form = forms.iter().any(|f| close(f, &a, &tol));
    ConjectureReport {
        b,
        a,
        leq,
        diagonal_form,
        forms_checked: forms.len(),
    }
}

/// `B = P diag(J, X) P⁻¹` for `A = P diag(J, O) P⁻¹`.
///
/// Every successor of `A` has this shape, but not every such `B` is a
/// successor; check with [`sharp_leq`].
pub fn successor_form<S: Scalar>(
    a: &Matrix<S>,
    p: &Matrix<S>,
    spec: &JordanSpec<S>,
    x: &Matrix<S>,
    tol: &Tolerance,
) -> Result<Matrix<S>> {
    let n = p.require_square()?;
    let r = spec.r();
    if a.shape() != (n, n) || r > n || x.shape() != (n - r, n - r) {
        return Err(Error::ShapeMismatch(format!(
            "need A and P of size {n}, X of size {}",
            n.saturating_sub(r)
        )));
    }
    if !close(&padded_jordan(p, spec, tol)?, a, tol) {
        return Err(Error::PrecondViolated("A differs from P diag(J, O) P⁻¹".into()));
    }
    let inner = Matrix::block_diag(&[build_jordan_matrix(spec), x.clone()]);
    psi(&inner, p, tol)
}

/// Nonsingular `C = U [[ΣK, (Σ - K⁻¹)L], [O, I]] U*` with `B ≤# C`.
pub fn extend_to_nonsingular<S: FloatScalar>(hs: &HsDecomposition<S>, tol: &Tolerance) -> Result<Matrix<S>> {
    let k_inv = inverse(&hs.k, tol)?.ok_or(Error::SingularK)?;
    let n = hs.n();
    let r = hs.r;
    let top_right = &(&hs.sigma_matrix() - &k_inv) * &hs.l;
    let inner = Matrix::from_blocks(&hs.sigma_k(), &top_right, &Matrix::zeros(n - r, r), &Matrix::identity(n - r));
    Ok(&(&hs.u * &inner) * &hs.u.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hs::hs_decompose;
    use crate::scalar::ratio;
    use crate::{ExactMatrix, ExactScalar, FloatMatrix};
    use num_complex::Complex64;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn e(v: i64) -> ExactScalar {
        ratio(v, 1)
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn diag210() -> (FloatMatrix, HsDecomposition<Complex64>) {
        let b = FloatMatrix::diag(&[c(2.0), c(1.0), c(0.0)]);
        let hs = hs_decompose(&b, &tol()).unwrap();
        (b, hs)
    }

    #[test]
    fn sharp_leq_examples() {
        let b = ExactMatrix::identity(3);
        assert!(sharp_leq(&ExactMatrix::zeros(3, 3), &b, &tol()).unwrap());
        assert!(sharp_leq(&b, &b, &tol()).unwrap());
        let a = ExactMatrix::from_i64(&[&[0, 1, 0], &[0, 1, 0], &[0, 0, 0]]);
        assert!(sharp_leq(&a, &b, &tol()).unwrap());
        assert!(!sharp_leq(&b, &a, &tol()).unwrap());
        let nil = ExactMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert_eq!(sharp_leq(&nil, &ExactMatrix::identity(2), &tol()), Err(Error::IndexTooLarge));
    }

    #[test]
    fn relation_matches_pairwise_calls() {
        let items = vec![
            ExactMatrix::zeros(3, 3),
            ExactMatrix::identity(3),
            ExactMatrix::from_i64(&[&[0, 1, 0], &[0, 1, 0], &[0, 0, 0]]),
            ExactMatrix::from_i64(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 2]]),
        ];
        let rel = sharp_relation(&items, &tol()).unwrap();
        for (i, a) in items.iter().enumerate() {
            for (j, b) in items.iter().enumerate() {
                assert_eq!(rel[i][j], sharp_leq(a, b, &tol()).unwrap(), "{i} {j}");
            }
        }
        let floats: Vec<FloatMatrix> = items.iter().map(ExactMatrix::to_c64).collect();
        assert_eq!(sharp_relation(&floats, &tol()).unwrap(), rel);
        let nil = ExactMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert_eq!(sharp_relation(&[nil], &tol()), Err(Error::IndexTooLarge));
        let mixed = vec![ExactMatrix::zeros(2, 2), ExactMatrix::zeros(3, 3)];
        assert!(matches!(sharp_relation(&mixed, &tol()), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn phi_examples() {
        let (b, hs) = diag210();
        let t = phi(&FloatMatrix::zeros(3, 3), &hs, &tol()).unwrap();
        assert!(close(&t, &FloatMatrix::zeros(2, 2), &tol()));
        let t = phi(&b, &hs, &tol()).unwrap();
        assert!(close(&t, &FloatMatrix::identity(2), &tol()));
        let t = phi(&FloatMatrix::diag(&[c(2.0), c(0.0), c(0.0)]), &hs, &tol()).unwrap();
        assert!(close(&t, &FloatMatrix::diag(&[c(1.0), c(0.0)]), &tol()));
        let not_below = FloatMatrix::diag(&[c(0.0), c(0.0), c(1.0)]);
        assert_eq!(phi(&not_below, &hs, &tol()), Err(Error::NotAPredecessor));
    }

    #[test]
    fn phi_inv_examples() {
        let (b, hs) = diag210();
        assert!(close(&phi_inv(&FloatMatrix::identity(2), &hs, &tol()).unwrap(), &b, &tol()));
        let a = phi_inv(&FloatMatrix::diag(&[c(0.0), c(1.0)]), &hs, &tol()).unwrap();
        assert!(close(&a, &FloatMatrix::diag(&[c(0.0), c(1.0), c(0.0)]), &tol()));
        let bad = FloatMatrix::from_i64(&[&[1, 1], &[0, 0]]);
        assert_eq!(phi_inv(&bad, &hs, &tol()), Err(Error::NotInTau));
    }

    #[test]
    fn psi_round_trip() {
        let p = ExactMatrix::from_i64(&[&[1, 2], &[0, 1]]);
        let t = ExactMatrix::from_i64(&[&[1, 0], &[0, 0]]);
        let image = psi(&t, &p, &tol()).unwrap();
        assert_eq!(psi_inv(&image, &p, &tol()).unwrap(), t);
        assert_eq!(psi(&t, &ExactMatrix::identity(2), &tol()).unwrap(), t);
        assert_eq!(psi(&t, &ExactMatrix::zeros(2, 2), &tol()), Err(Error::Singular));
    }

    #[test]
    fn predecessor_group_inverse_examples() {
        let (_, hs) = diag210();
        let g = predecessor_group_inverse(&FloatMatrix::identity(2), &hs, &tol()).unwrap();
        assert!(close(&g, &FloatMatrix::diag(&[c(0.5), c(1.0), c(0.0)]), &tol()));
        let g = predecessor_group_inverse(&FloatMatrix::zeros(2, 2), &hs, &tol()).unwrap();
        assert!(close(&g, &FloatMatrix::zeros(3, 3), &tol()));
    }

    #[test]
    fn jordan_predecessor_examples() {
        let spec = JordanSpec::from_pairs(vec![(e(2), vec![1]), (e(1), vec![1])]).unwrap();
        let preds = jordan_predecessors(&ExactMatrix::identity(3), &spec, 3, &tol()).unwrap();
        let want = [[0, 0], [2, 0], [0, 1], [2, 1]];
        assert_eq!(preds.len(), 4);
        for (m, w) in preds.iter().zip(want) {
            assert_eq!(m, &ExactMatrix::diag(&[e(w[0]), e(w[1]), e(0)]));
        }
        let empty = JordanSpec::<ExactScalar>::from_pairs(vec![]).unwrap();
        assert_eq!(jordan_predecessors(&ExactMatrix::identity(2), &empty, 2, &tol()).unwrap(), vec![ExactMatrix::zeros(2, 2)]);
        let single = JordanSpec::from_pairs(vec![(e(5), vec![2])]).unwrap();
        let preds = jordan_predecessors(&ExactMatrix::identity(2), &single, 2, &tol()).unwrap();
        assert_eq!(preds, vec![ExactMatrix::zeros(2, 2), ExactMatrix::from_i64(&[&[5, 1], &[0, 5]])]);
        let multi = JordanSpec::from_pairs(vec![(e(1), vec![1, 1])]).unwrap();
        assert_eq!(
            jordan_predecessors(&ExactMatrix::identity(2), &multi, 2, &tol()),
            Err(Error::MultiplicityExceedsOne)
        );
    }

    #[test]
    fn conjecture_is_refuted() {
        let rep = conjecture_refutation::<ExactScalar>();
        assert_eq!(rep.b, ExactMatrix::identity(3));
        assert!(rep.leq);
        assert!(!rep.diagonal_form);
        assert_eq!(rep.forms_checked, 8);
        assert!(rep.refutes());
    }

    #[test]
    fn successor_examples() {
        let spec = JordanSpec::from_pairs(vec![(e(2), vec![1])]).unwrap();
        let a = ExactMatrix::diag(&[e(2), e(0)]);
        let b = successor_form(&a, &ExactMatrix::identity(2), &spec, &ExactMatrix::from_i64(&[&[5]]), &tol()).unwrap();
        assert_eq!(b, ExactMatrix::diag(&[e(2), e(5)]));
        assert!(sharp_leq(&a, &b, &tol()).unwrap());

        let full = JordanSpec::from_pairs(vec![(e(3), vec![2])]).unwrap();
        let a = ExactMatrix::from_i64(&[&[3, 1], &[0, 3]]);
        let b = successor_form(&a, &ExactMatrix::identity(2), &full, &ExactMatrix::zeros(0, 0), &tol()).unwrap();
        assert_eq!(b, a);
    }

    #[test]
    fn successor_shape_is_not_sufficient() {
        let p = ExactMatrix::from_i64(&[&[1, 1, 1], &[0, 1, 3], &[0, 0, 1]]);
        let spec = JordanSpec::from_pairs(vec![(e(1), vec![2])]).unwrap();
        let a = padded_jordan(&p, &spec, &tol()).unwrap();
        let b = ExactMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(!sharp_leq(&a, &b, &tol()).unwrap());
        assert!(successor_form(&b, &p, &spec, &ExactMatrix::from_i64(&[&[1]]), &tol()).is_err());
    }

    #[test]
    fn extension_examples() {
        let (b, hs) = diag210();
        let cmat = extend_to_nonsingular(&hs, &tol()).unwrap();
        assert!(close(&cmat, &FloatMatrix::diag(&[c(2.0), c(1.0), c(1.0)]), &tol()));
        assert!(sharp_leq(&b, &cmat, &tol()).unwrap());
        let nonsing = FloatMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let hs = hs_decompose(&nonsing, &tol()).unwrap();
        assert!(close(&extend_to_nonsingular(&hs, &tol()).unwrap(), &nonsing, &tol()));
        let nil = hs_decompose(&FloatMatrix::from_i64(&[&[0, 2], &[0, 0]]), &tol()).unwrap();
        assert_eq!(extend_to_nonsingular(&nil, &tol()), Err(Error::SingularK));
    }
}
