//! Idempotent solutions of matrix systems built from a fixed `B`:
//! `{BX = XB, X² = X}` and `{XBX = BX, X² = X}`.

use serde::Serialize;

use crate::commutant::{delta_membership, DeltaSampler};
use crate::error::{Error, Result};
use crate::ginv::is_ep;
use crate::hs::HsDecomposition;
use crate::jordan::{similarity_to_jordan, JordanSpec};
use crate::lattice::boolean_center;
use crate::linalg::{close, commutes, inverse, is_projector, rank};
use crate::matrix::Matrix;
use crate::order::{psi, psi_inv};
use crate::scalar::{FloatScalar, Scalar, Tolerance};

fn is_ep_decomposition<S: FloatScalar>(hs: &HsDecomposition<S>, tol: &Tolerance) -> bool {
    hs.l.frobenius_norm() <= tol.rel * 1f64.max(hs.k.frobenius_norm())
}

fn require_tau<S: FloatScalar>(t: &Matrix<S>, hs: &HsDecomposition<S>, tol: &Tolerance) -> Result<()> {
    if t.shape() != (hs.r, hs.r) {
        return Err(Error::ShapeMismatch(format!("T must be {0}x{0}", hs.r)));
    }
    if !is_projector(t, tol)? || !commutes(t, &hs.sigma_k(), tol) {
        return Err(Error::NotInTau);
    }
    Ok(())
}

/// `S = U diag(T, W) U*`, a solution of `{BX = XB, X² = X}` for EP `B`.
pub fn solve_ep_commute_idempotent<S: FloatScalar>(
    hs: &HsDecomposition<S>,
    t: &Matrix<S>,
    w: &Matrix<S>,
    tol: &Tolerance,
) -> Result<Matrix<S>> {
    if !is_ep_decomposition(hs, tol) {
        return Err(Error::NotEp);
    }
    require_tau(t, hs, tol)?;
    let k = hs.n() - hs.r;
    if w.shape() != (k, k) {
        return Err(Error::ShapeMismatch(format!("W must be {k}x{k}")));
    }
    if !is_projector(w, tol)? {
        return Err(Error::WNotProjector);
    }
    Ok(hs.embed_diag(t, w))
}

/// Split a claimed solution `S` back into `(T, W)`.
pub fn decompose_ep_solution<S: FloatScalar>(
    hs: &HsDecomposition<S>,
    s: &Matrix<S>,
    tol: &Tolerance,
) -> Result<(Matrix<S>, Matrix<S>)> {
    if !is_ep_decomposition(hs, tol) {
        return Err(Error::NotEp);
    }
    let (n, r) = (hs.n(), hs.r);
    if s.shape() != (n, n) {
        return Err(Error::ShapeMismatch(format!("S must be {n}x{n}")));
    }
    let local = hs.to_local(s);
    let t = local.block(0, 0, r, r);
    let w = local.block(r, r, n - r, n - r);
    if !close(&hs.embed_diag(&t, &w), s, tol) {
        return Err(Error::PrecondViolated("S is not block diagonal in the decomposition basis".into()));
    }
    require_tau(&t, hs, tol)?;
    if !is_projector(&w, tol)? {
        return Err(Error::WNotProjector);
    }
    Ok((t, w))
}

fn single_blocks<S: Scalar>(spec: &JordanSpec<S>) -> Result<()> {
    if spec.eigenvalues().iter().any(|e| e.t() > 1) {
        return Err(Error::HypothesisViolated("some eigenvalue has more than one Jordan block".into()));
    }
    Ok(())
}

fn count_for(s: usize, n: usize, r: usize, ep: bool) -> Result<u128> {
    match n - r {
        0 => Ok(1u128 << s),
        1 if ep => Ok(1u128 << (s + 1)),
        1 => Err(Error::HypothesisViolated("B is singular but not EP".into())),
        d => Err(Error::HypothesisViolated(format!("rank deficit {d} exceeds one"))),
    }
}

/// Number of solutions of `{BX = XB, X² = X}`: `2^s` for nonsingular `B`,
/// `2^{s+1}` for EP `B` of rank `n - 1`, when every eigenvalue of `ΣK` has a
/// single Jordan block.
pub fn count_solutions<S: FloatScalar>(hs: &HsDecomposition<S>, spec: &JordanSpec<S>, tol: &Tolerance) -> Result<u128> {
    single_blocks(spec)?;
    if spec.r() != hs.r {
        return Err(Error::ShapeMismatch(format!("spec has dimension {} but rank is {}", spec.r(), hs.r)));
    }
    count_for(spec.s(), hs.n(), hs.r, is_ep_decomposition(hs, tol))
}

/// [`count_solutions`] straight from `B`, in either mode.
pub fn count_solutions_for_matrix<S: Scalar>(b: &Matrix<S>, spec: &JordanSpec<S>, tol: &Tolerance) -> Result<u128> {
    let n = b.require_square()?;
    single_blocks(spec)?;
    let r = rank(b, tol);
    if spec.r() != r {
        return Err(Error::ShapeMismatch(format!("spec has dimension {} but rank is {r}", spec.r())));
    }
    count_for(spec.s(), n, r, is_ep(b, tol)?)
}

/// `SB^k = B^kS` for `k = 1..=kmax`.
pub fn verify_power_commute<S: Scalar>(s: &Matrix<S>, b: &Matrix<S>, kmax: u32, tol: &Tolerance) -> bool {
    let mut power = b.clone();
    for k in 1..=kmax {
        if k > 1 {
            power = &power * b;
        }
        if !commutes(s, &power, tol) {
            return false;
        }
    }
    true
}

/// `S = U diag(T, O) U*`, a solution of `{XBX = BX, X² = X}`.
pub fn solve_xbx_family<S: FloatScalar>(hs: &HsDecomposition<S>, t: &Matrix<S>, tol: &Tolerance) -> Result<Matrix<S>> {
    require_tau(t, hs, tol)?;
    let k = hs.n() - hs.r;
    Ok(hs.embed_diag(t, &Matrix::zeros(k, k)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FamilyKind {
    EpCommuteIdempotent,
    JordanCommuteIdempotent,
    XbxFamily,
}

/// `{PTP⁻¹ : T ∈ δ}`: every projector commuting with a nonsingular
/// `B = PJP⁻¹`.
#[derive(Debug, Clone)]
pub struct SolutionFamily<S> {
    pub kind: FamilyKind,
    pub p: Matrix<S>,
    pub spec: JordanSpec<S>,
    /// Shape of the free parameter `T`.
    pub free_part_shape: (usize, usize),
    pub finite_count: Option<u128>,
    /// All members, when finitely many.
    pub members: Option<Vec<Matrix<S>>>,
}

impl<S: Scalar> SolutionFamily<S> {
    pub fn contains(&self, x: &Matrix<S>, tol: &Tolerance) -> Result<bool> {
        let t = psi_inv(x, &self.p, tol)?;
        delta_membership(&t, &self.spec, tol)
    }

    /// `count` members `PTP⁻¹` with `T` drawn from the seeded `δ` sampler.
    pub fn sample(&self, seed: u64, count: usize, tol: &Tolerance) -> Result<Vec<Matrix<S>>> {
        let mut sampler = DeltaSampler::new(&self.spec, seed);
        (0..count).map(|_| psi(sampler.sample().matrix(), &self.p, tol)).collect()
    }
}

/// Projectors commuting with `B = PJP⁻¹`. When every eigenvalue has one
/// block the `2^s` members `P diag(D₁, …, D_s) P⁻¹`, `D_j ∈ {O, I}`, are
/// listed in bitmask order.
pub fn solve_jordan_commuting_projectors<S: Scalar>(
    p: &Matrix<S>,
    spec: &JordanSpec<S>,
    tol: &Tolerance,
) -> Result<SolutionFamily<S>> {
    let r = spec.r();
    if p.shape() != (r, r) {
        return Err(Error::ShapeMismatch(format!("P must be {r}x{r}")));
    }
    if inverse(p, tol)?.is_none() {
        return Err(Error::SingularityMismatch("P is singular, so PJP⁻¹ is undefined".into()));
    }
    let finite = spec.eigenvalues().iter().all(|e| e.t() == 1);
    let members = if finite {
        Some(
            boolean_center(spec)
                .iter()
                .map(|c| psi(c.matrix(), p, tol))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    Ok(SolutionFamily {
        kind: FamilyKind::JordanCommuteIdempotent,
        p: p.clone(),
        spec: spec.without_similarity(),
        free_part_shape: (r, r),
        finite_count: members.as_ref().map(|m| m.len() as u128),
        members,
    })
}

/// Every solution of `{BX = XB, X² = X}` for EP `B` of rank `n` or `n - 1`
/// whose core has single Jordan blocks: `U diag(T, W) U*` with `T` ranging
/// over the `2^s` elements `PDP⁻¹` and `W ∈ {O, I}`. Member `m` uses centre
/// element `m mod 2^s` and `W = I` iff `m >= 2^s`.
pub fn ep_solution_members<S: FloatScalar>(
    hs: &HsDecomposition<S>,
    spec: &JordanSpec<S>,
    tol: &Tolerance,
) -> Result<Vec<Matrix<S>>> {
    count_solutions(hs, spec, tol)?;
    let p = match spec.similarity() {
        Some(p) => p.clone(),
        None => similarity_to_jordan(&hs.sigma_k(), spec, 0, tol)?,
    };
    let k = hs.n() - hs.r;
    let ws: Vec<Matrix<S>> = if k == 0 {
        vec![Matrix::zeros(0, 0)]
    } else {
        vec![Matrix::zeros(1, 1), Matrix::identity(1)]
    };
    let center = boolean_center(spec);
    let mut out = Vec::with_capacity(center.len() * ws.len());
    for w in &ws {
        for c in &center {
            let t = psi(c.matrix(), &p, tol)?;
            out.push(solve_ep_commute_idempotent(hs, &t, w, tol)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ginv::{group_inverse, moore_penrose};
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

    fn fdiag(v: &[f64]) -> FloatMatrix {
        FloatMatrix::diag(&v.iter().map(|&x| c(x)).collect::<Vec<_>>())
    }

    #[test]
    fn ep_solution_examples() {
        let b = fdiag(&[1.0, 2.0, 0.0]);
        let hs = hs_decompose(&b, &tol()).unwrap();
        let s = solve_ep_commute_idempotent(&hs, &FloatMatrix::zeros(2, 2), &FloatMatrix::zeros(1, 1), &tol()).unwrap();
        assert!(close(&s, &FloatMatrix::zeros(3, 3), &tol()));
        let s = solve_ep_commute_idempotent(&hs, &FloatMatrix::identity(2), &FloatMatrix::identity(1), &tol()).unwrap();
        assert!(close(&s, &FloatMatrix::identity(3), &tol()));
        let (t, w) = decompose_ep_solution(&hs, &s, &tol()).unwrap();
        assert!(close(&t, &FloatMatrix::identity(2), &tol()) && close(&w, &FloatMatrix::identity(1), &tol()));
        let bad_w = FloatMatrix::from_i64(&[&[2]]);
        assert_eq!(
            solve_ep_commute_idempotent(&hs, &FloatMatrix::zeros(2, 2), &bad_w, &tol()),
            Err(Error::WNotProjector)
        );
        let non_ep = hs_decompose(&FloatMatrix::from_i64(&[&[1, 1], &[0, 0]]), &tol()).unwrap();
        assert_eq!(
            solve_ep_commute_idempotent(&non_ep, &FloatMatrix::identity(1), &FloatMatrix::zeros(1, 1), &tol()),
            Err(Error::NotEp)
        );
    }

    #[test]
    fn diag_120_has_eight_diagonal_solutions() {
        let b = fdiag(&[1.0, 2.0, 0.0]);
        let hs = hs_decompose(&b, &tol()).unwrap();
        let spec = JordanSpec::from_pairs(vec![(c(1.0), vec![1]), (c(2.0), vec![1])]).unwrap();
        assert_eq!(count_solutions(&hs, &spec, &tol()).unwrap(), 8);
        let members = ep_solution_members(&hs, &spec, &Tolerance::new(1e-8, 1e-10).unwrap()).unwrap();
        assert_eq!(members.len(), 8);
        for (i, m) in members.iter().enumerate() {
            for (j, other) in members.iter().enumerate() {
                assert_eq!(i == j, close(m, other, &tol()));
            }
            assert!(m.entries().iter().enumerate().all(|(k, z)| k % 4 == 0 || z.norm() < 1e-9));
            assert!(verify_power_commute(m, &b, 6, &tol()));
        }
    }

    #[test]
    fn counts_from_matrix() {
        let t = tol();
        let spec2 = JordanSpec::from_pairs(vec![(e(1), vec![1]), (e(2), vec![1])]).unwrap();
        let d120 = ExactMatrix::diag(&[e(1), e(2), e(0)]);
        assert_eq!(count_solutions_for_matrix(&d120, &spec2, &t).unwrap(), 8);
        assert_eq!(count_solutions_for_matrix(&ExactMatrix::diag(&[e(1), e(2)]), &spec2, &t).unwrap(), 4);
        let jb = ExactMatrix::from_i64(&[&[5, 1], &[0, 5]]);
        let spec1 = JordanSpec::from_pairs(vec![(e(5), vec![2])]).unwrap();
        assert_eq!(count_solutions_for_matrix(&jb, &spec1, &t).unwrap(), 2);
        let two_blocks = JordanSpec::from_pairs(vec![(e(1), vec![1, 1])]).unwrap();
        assert!(matches!(
            count_solutions_for_matrix(&ExactMatrix::identity(2), &two_blocks, &t),
            Err(Error::HypothesisViolated(_))
        ));
        let d1200 = ExactMatrix::diag(&[e(1), e(2), e(0), e(0)]);
        assert!(matches!(count_solutions_for_matrix(&d1200, &spec2, &t), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn power_commute_detects_failure() {
        let b = ExactMatrix::from_i64(&[&[1, 1], &[0, 2]]);
        assert!(verify_power_commute(&ExactMatrix::identity(2), &b, 5, &tol()));
        assert!(!verify_power_commute(&ExactMatrix::diag(&[e(1), e(0)]), &b, 5, &tol()));
    }

    #[test]
    fn xbx_examples() {
        let t = tol();
        let b = FloatMatrix::from_i64(&[&[1, 1], &[0, 0]]);
        let hs = hs_decompose(&b, &t).unwrap();
        let s = solve_xbx_family(&hs, &FloatMatrix::zeros(1, 1), &t).unwrap();
        assert!(close(&s, &FloatMatrix::zeros(2, 2), &t));
        let s = solve_xbx_family(&hs, &FloatMatrix::identity(1), &t).unwrap();
        assert!(close(&(&(&s * &b) * &s), &(&b * &s), &t));
        assert!(is_projector(&s, &t).unwrap());
        // T = I gives the orthogonal projector BB† onto the range of B.
        assert!(close(&s, &(&b * &moore_penrose(&b, &t)), &t));
        assert!(!close(&s, &(&b * &group_inverse(&b, &t).unwrap()), &t));
    }

    #[test]
    fn jordan_family_examples() {
        let t = tol();
        let spec = JordanSpec::from_pairs(vec![(e(2), vec![1]), (e(3), vec![1])]).unwrap();
        let fam = solve_jordan_commuting_projectors(&ExactMatrix::identity(2), &spec, &t).unwrap();
        let want = [[0, 0], [1, 0], [0, 1], [1, 1]];
        let members = fam.members.clone().unwrap();
        assert_eq!(members.len(), 4);
        for (m, w) in members.iter().zip(want) {
            assert_eq!(m, &ExactMatrix::diag(&[e(w[0]), e(w[1])]));
            assert!(fam.contains(m, &t).unwrap());
        }
        let single = JordanSpec::from_pairs(vec![(e(5), vec![2])]).unwrap();
        let fam = solve_jordan_commuting_projectors(&ExactMatrix::identity(2), &single, &t).unwrap();
        assert_eq!(fam.members.unwrap(), vec![ExactMatrix::zeros(2, 2), ExactMatrix::identity(2)]);
        assert!(matches!(
            solve_jordan_commuting_projectors(&ExactMatrix::zeros(2, 2), &single, &t),
            Err(Error::SingularityMismatch(_))
        ));
    }

    #[test]
    fn jordan_family_two_blocks_ranks() {
        let t = tol();
        let spec = JordanSpec::from_pairs(vec![(e(3), vec![3, 1])]).unwrap();
        let p = ExactMatrix::from_i64(&[&[1, 1, 0, 0], &[0, 1, 0, 1], &[0, 0, 1, 0], &[1, 0, 0, 1]]);
        let fam = solve_jordan_commuting_projectors(&p, &spec, &t).unwrap();
        assert!(fam.members.is_none());
        let b = psi(&crate::jordan::build_jordan_matrix(&spec), &p, &t).unwrap();
        for s in fam.sample(2, 30, &t).unwrap() {
            assert!([0, 1, 3, 4].contains(&rank(&s, &t)));
            assert!(fam.contains(&s, &t).unwrap());
            assert!(verify_power_commute(&s, &b, 6, &t));
        }
    }
}
