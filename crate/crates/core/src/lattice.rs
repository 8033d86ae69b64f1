//! Lattice structure of down-sets `[O, B]`, read off the projector models.

use serde::Serialize;

use crate::commutant::{admissible_ranks, proj_incomparable, proj_leq, CommutantMatrix, CommutantProjector, DeltaSampler};
use crate::error::{Error, Result};
use crate::ginv::{index_le_one, moore_penrose};
use crate::hs::HsDecomposition;
use crate::jordan::{similarity_to_jordan, JordanSpec};
use crate::linalg::{close, commutes, is_projector, null_space, rank};
use crate::matrix::Matrix;
use crate::order::{phi, phi_inv, psi, sharp_leq};
use crate::scalar::{FloatScalar, Scalar, Tolerance};

fn require_commuting<S: Scalar>(t1: &Matrix<S>, t2: &Matrix<S>, tol: &Tolerance) -> Result<()> {
    t1.same_shape(t2)?;
    if !commutes(t1, t2, tol) {
        return Err(Error::NonCommuting);
    }
    Ok(())
}

/// `T₁ ∧ T₂ = T₁T₂` for commuting projectors.
pub fn meet_commuting<S: Scalar>(t1: &Matrix<S>, t2: &Matrix<S>, tol: &Tolerance) -> Result<Matrix<S>> {
    require_commuting(t1, t2, tol)?;
    Ok(t1 * t2)
}

/// `T₁ ∨ T₂ = T₁ + T₂ - T₁T₂` for commuting projectors.
pub fn join_commuting<S: Scalar>(t1: &Matrix<S>, t2: &Matrix<S>, tol: &Tolerance) -> Result<Matrix<S>> {
    require_commuting(t1, t2, tol)?;
    Ok(&(t1 + t2) - &(t1 * t2))
}

/// `A₁ ∧ A₂ = A₁B†A₂` for predecessors of `B` with commuting projectors.
pub fn matrix_meet<S: FloatScalar>(
    a1: &Matrix<S>,
    a2: &Matrix<S>,
    hs: &HsDecomposition<S>,
    tol: &Tolerance,
) -> Result<Matrix<S>> {
    let t1 = phi(a1, hs, tol)?;
    let t2 = phi(a2, hs, tol)?;
    require_commuting(&t1, &t2, tol)?;
    let b_dag = moore_penrose(&hs.reconstruct(), tol);
    Ok(&(a1 * &b_dag) * a2)
}

/// `I - T`, the complement of `T` among projectors commuting with `core`
/// (`ΣK` for `τ`, `J` for `δ`).
pub fn complement_in_downset<S: Scalar>(t: &Matrix<S>, core: &Matrix<S>, tol: &Tolerance) -> Result<Matrix<S>> {
    let r = core.require_square()?;
    if t.shape() != (r, r) {
        return Err(Error::ShapeMismatch(format!("T must be {r}x{r}")));
    }
    if !is_projector(t, tol)? || !commutes(t, core, tol) {
        return Err(Error::NotInTau);
    }
    Ok(&Matrix::identity(r) - t)
}

/// Shape of one eigenvalue's factor in the product decomposition of `δ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum FactorKind {
    /// One block: `{O, I}`.
    TwoChain,
    /// Two blocks: bounded, with an infinite antichain in each intermediate
    /// rank class.
    BoundedInfiniteAntichain { ranks: Vec<usize> },
    /// Three or more blocks: not a lattice.
    NonLatticeFactor,
}

/// Symbolic description of `[O, B]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DownsetDescriptor {
    pub s: usize,
    pub factors: Vec<FactorKind>,
    pub is_lattice: bool,
    pub is_distributive: bool,
    pub is_boolean: bool,
    pub boolean_center_size: u128,
    pub max_chain_length: usize,
    /// Number of elements when finite (the Boolean case).
    pub count: Option<u128>,
}

pub fn classify_downset<S: Scalar>(spec: &JordanSpec<S>) -> DownsetDescriptor {
    let factors: Vec<FactorKind> = spec
        .eigenvalues()
        .iter()
        .map(|e| match e.sizes.as_slice() {
            [_] => FactorKind::TwoChain,
            [q, p] => FactorKind::BoundedInfiniteAntichain {
                ranks: admissible_ranks(*q, *p).expect("sizes are descending").into_iter().collect(),
            },
            _ => FactorKind::NonLatticeFactor,
        })
        .collect();
    let is_lattice = !factors.contains(&FactorKind::NonLatticeFactor);
    let is_boolean = factors.iter().all(|f| *f == FactorKind::TwoChain);
    let boolean_center_size = 1u128.checked_shl(spec.s() as u32).unwrap_or(u128::MAX);
    DownsetDescriptor {
        s: spec.s(),
        factors,
        is_lattice,
        // A product of chains is distributive; an M₃-like factor or a
        // non-lattice factor is not.
        is_distributive: is_boolean,
        is_boolean,
        boolean_center_size,
        max_chain_length: spec.block_count() + 1,
        count: is_boolean.then_some(boolean_center_size),
    }
}

/// The `2^s` projectors `diag(D₁, …, D_s)`, `D_j ∈ {O, I}`, that commute with
/// all of `δ`. Entry `m` uses `I` on eigenvalue `j` exactly when bit `j` of
/// `m` is set.
pub fn boolean_center<S: Scalar>(spec: &JordanSpec<S>) -> Vec<CommutantProjector<S>> {
    let tol = S::default_tolerance();
    let s = spec.s();
    (0..(1usize << s))
        .map(|mask| {
            let choice: Vec<bool> = spec
                .eigenvalues()
                .iter()
                .enumerate()
                .flat_map(|(j, e)| std::iter::repeat_n(mask >> j & 1 == 1, e.t()))
                .collect();
            let grid = CommutantMatrix::block_choice(spec, &choice).expect("choice sized from spec");
            CommutantProjector::new(grid, &tol).expect("0/1 block choices are idempotent")
        })
        .collect()
}

/// Four elements of `δ` with `T₁, T₂ ≤ T₃, T₄`, `T₁ ∥ T₂`, `T₃ ∥ T₄`, and
/// no element strictly between `T₂` and `T₃`: neither `T₁ ∨ T₂` nor
/// `T₃ ∧ T₄` exists.
#[derive(Debug, Clone)]
pub struct NonLatticeWitness<S> {
    /// Eigenvalue whose first three blocks carry the construction.
    pub eigenvalue: usize,
    pub t: [Matrix<S>; 4],
    pub checks: WitnessChecks,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessChecks {
    pub in_delta: [bool; 4],
    pub t1_le_t3: bool,
    pub t1_le_t4: bool,
    pub t2_le_t3: bool,
    pub t2_le_t4: bool,
    pub t1_incomparable_t2: bool,
    pub t3_incomparable_t4: bool,
}

impl WitnessChecks {
    pub fn all(&self) -> bool {
        self.in_delta.iter().all(|&b| b)
            && self.t1_le_t3
            && self.t1_le_t4
            && self.t2_le_t3
            && self.t2_le_t4
            && self.t1_incomparable_t2
            && self.t3_incomparable_t4
    }
}

/// Build the witness on the first eigenvalue with at least three blocks,
/// whose leading sizes are `r₁ ≥ r₂ ≥ r₃`. With `X = [I; O]` (`r₁ x r₂`),
/// `Y = [O I]` (`r₃ x r₂`):
///
/// ```text
/// G₁ = [O X O; O I O; O O O]   G₂ = [O X O; O I O; O Y O]
/// G₃ = [O X O; O I O; O O I]   G₄ = [O X O; O I O; Z Y' I]
/// ```
///
/// where `Y' = Y, Z = [O -I]` if `r₁ = r₂`, and `Y' = O`, `Z = -e₁e_{r₁}ᵀ`
/// otherwise.
pub fn non_lattice_witness<S: Scalar>(spec: &JordanSpec<S>, tol: &Tolerance) -> Result<NonLatticeWitness<S>> {
    let (j, e) = spec
        .eigenvalues()
        .iter()
        .enumerate()
        .find(|(_, e)| e.t() >= 3)
        .ok_or(Error::NoEligibleEigenvalue)?;
    let (r1, r2, r3) = (e.sizes[0], e.sizes[1], e.sizes[2]);
    let id = |k: usize| Matrix::<S>::identity(k);
    let mut x = Matrix::zeros(r1, r2);
    x.set_block(0, 0, &id(r2));
    let mut y = Matrix::zeros(r3, r2);
    y.set_block(0, r2 - r3, &id(r3));
    let mut z = Matrix::zeros(r3, r1);
    if r1 == r2 {
        z.set_block(0, r1 - r3, &(-&id(r3)));
    } else {
        z[(0, r1 - 1)] = -S::one();
    }
    let g = |bottom: [Option<Matrix<S>>; 3]| {
        let mut m = Matrix::zeros(r1 + r2 + r3, r1 + r2 + r3);
        m.set_block(0, r1, &x);
        m.set_block(r1, r1, &id(r2));
        let cols = [0, r1, r1 + r2];
        for (c0, b) in cols.iter().zip(bottom) {
            if let Some(b) = b {
                m.set_block(r1 + r2, *c0, &b);
            }
        }
        m
    };
    let y4 = (r1 == r2).then(|| y.clone());
    let gs = [
        g([None, None, None]),
        g([None, Some(y.clone()), None]),
        g([None, None, Some(id(r3))]),
        g([Some(z), y4, Some(id(r3))]),
    ];
    let offset = spec.eigen_offsets()[j];
    let r = spec.r();
    let t = gs.map(|gm| {
        let mut m = Matrix::zeros(r, r);
        m.set_block(offset, offset, &gm);
        m
    });
    let in_delta = [0, 1, 2, 3].map(|i| CommutantProjector::from_matrix(spec, &t[i], tol).is_ok());
    let checks = WitnessChecks {
        in_delta,
        t1_le_t3: proj_leq(&t[0], &t[2], tol),
        t1_le_t4: proj_leq(&t[0], &t[3], tol),
        t2_le_t3: proj_leq(&t[1], &t[2], tol),
        t2_le_t4: proj_leq(&t[1], &t[3], tol),
        t1_incomparable_t2: proj_incomparable(&t[0], &t[1], tol),
        t3_incomparable_t4: proj_incomparable(&t[2], &t[3], tol),
    };
    Ok(NonLatticeWitness { eigenvalue: j, t, checks })
}

/// Count sampled `δ` elements lying strictly between `lo` and `hi`.
pub fn strict_intermediates_sampled<S: Scalar>(
    spec: &JordanSpec<S>,
    lo: &Matrix<S>,
    hi: &Matrix<S>,
    samples: usize,
    seed: u64,
    tol: &Tolerance,
) -> usize {
    let mut sampler = DeltaSampler::new(spec, seed);
    (0..samples)
        .filter(|_| {
            let t = sampler.sample().into_matrix();
            proj_leq(lo, &t, tol) && proj_leq(&t, hi, tol) && !close(&t, lo, tol) && !close(&t, hi, tol)
        })
        .count()
}

fn require_interval<S: Scalar>(t1: &Matrix<S>, t2: &Matrix<S>, tol: &Tolerance) -> Result<()> {
    t1.same_shape(t2)?;
    if !proj_leq(t1, t2, tol) {
        return Err(Error::PrecondViolated("T1 is not below T2".into()));
    }
    Ok(())
}

/// `[O, T₂ - T₁] → [T₁, T₂]`, `Q ↦ Q + T₁`.
pub fn interval_iso_forward<S: Scalar>(
    q: &Matrix<S>,
    t1: &Matrix<S>,
    t2: &Matrix<S>,
    tol: &Tolerance,
) -> Result<Matrix<S>> {
    require_interval(t1, t2, tol)?;
    q.same_shape(t1)?;
    if !is_projector(q, tol)? || !proj_leq(q, &(t2 - t1), tol) {
        return Err(Error::PrecondViolated("argument is not below T2 - T1".into()));
    }
    Ok(q + t1)
}

/// `[T₁, T₂] → [O, T₂ - T₁]`, `Q ↦ Q - T₁`.
pub fn interval_iso_backward<S: Scalar>(
    q: &Matrix<S>,
    t1: &Matrix<S>,
    t2: &Matrix<S>,
    tol: &Tolerance,
) -> Result<Matrix<S>> {
    require_interval(t1, t2, tol)?;
    q.same_shape(t1)?;
    if !is_projector(q, tol)? || !proj_leq(t1, q, tol) || !proj_leq(q, t2, tol) {
        return Err(Error::PrecondViolated("argument is outside [T1, T2]".into()));
    }
    Ok(q - t1)
}

/// Cumulative block projectors `E_i = diag(I, …, I, O, …, O)` (first `i`
/// Jordan blocks), `i = 0..=l`.
pub fn cumulative_block_projectors<S: Scalar>(spec: &JordanSpec<S>) -> Vec<Matrix<S>> {
    let l = spec.block_count();
    (0..=l)
        .map(|i| {
            let choice: Vec<bool> = (0..l).map(|k| k < i).collect();
            CommutantMatrix::block_choice(spec, &choice).expect("choice sized from spec").expand()
        })
        .collect()
}

/// A maximal chain `O ≤# A₁ ≤# … ≤# A_l = B`, one step per Jordan block of
/// `ΣK`. Uses the similarity attached to `spec`, or solves for one.
pub fn max_chain<S: FloatScalar>(hs: &HsDecomposition<S>, spec: &JordanSpec<S>, tol: &Tolerance) -> Result<Vec<Matrix<S>>> {
    let p = match spec.similarity() {
        Some(p) => p.clone(),
        None => similarity_to_jordan(&hs.sigma_k(), spec, 0, tol)?,
    };
    cumulative_block_projectors(spec)
        .iter()
        .map(|e| phi_inv(&psi(e, &p, tol)?, hs, tol))
        .collect()
}

/// Infimum of `{B₁, B₂}` among `2 x 2` matrices of index at most one.
///
/// A common lower bound of rank one is `A = μxw*/(w*x)` with `x` a shared
/// eigenvector for the same `μ ≠ 0` and `w` a shared eigenvector of the
/// adjoints; so `x` spans `ker(B₁ - B₂)` and `w` spans `ker(B₁ - B₂)*`. Such
/// an `A` is unique when it exists, and the meet is `A`, else `O`.
pub fn meet_in_c2<S: Scalar>(b1: &Matrix<S>, b2: &Matrix<S>) -> Result<Matrix<S>> {
    if !S::EXACT {
        return Err(Error::NotSupported("the 2x2 meet needs exact arithmetic".into()));
    }
    let tol = S::default_tolerance();
    if b1.shape() != (2, 2) || b2.shape() != (2, 2) {
        return Err(Error::ShapeMismatch("meet_in_c2 takes 2x2 matrices".into()));
    }
    if !index_le_one(b1, &tol)? || !index_le_one(b2, &tol)? {
        return Err(Error::IndexTooLarge);
    }
    if sharp_leq(b1, b2, &tol)? {
        return Ok(b1.clone());
    }
    if sharp_leq(b2, b1, &tol)? {
        return Ok(b2.clone());
    }
    let d = b1 - b2;
    if rank(&d, &tol) != 1 {
        return Ok(Matrix::zeros(2, 2));
    }
    let x = null_space(&d, &tol);
    let w = null_space(&d.adjoint(), &tol);
    let Some(mu) = eigenvalue_of(b1, &x) else {
        return Ok(Matrix::zeros(2, 2));
    };
    let wx = (&w.adjoint() * &x)[(0, 0)].clone();
    if mu.is_zero() || wx.is_zero() || eigenvalue_of(&b1.adjoint(), &w).is_none() {
        return Ok(Matrix::zeros(2, 2));
    }
    Ok((&x * &w.adjoint()).scale(&(mu / wx)))
}

/// `μ` with `Mv = μv`, if `v` (a nonzero column) is an eigenvector.
fn eigenvalue_of<S: Scalar>(m: &Matrix<S>, v: &Matrix<S>) -> Option<S> {
    let mv = m * v;
    let k = (0..v.rows()).find(|&i| !v[(i, 0)].is_zero())?;
    let mu = mv[(k, 0)].clone() / v[(k, 0)].clone();
    (mv == v.scale(&mu)).then_some(mu)
}
