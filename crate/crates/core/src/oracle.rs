//! Exhaustive ground truth over small exact grids.

use std::thread;

use crate::error::{Error, Result};
use crate::ginv::index_le_one;
use crate::linalg::{is_projector, rank};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Default cap on `|grid|^(n²)`.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

fn budget(n: usize, grid_len: usize, cap: u128) -> Result<u128> {
    let needed = (grid_len as u128)
        .checked_pow((n * n) as u32)
        .unwrap_or(u128::MAX);
    if needed > cap {
        return Err(Error::BudgetExceeded { needed, cap });
    }
    Ok(needed)
}

fn require_exact<S: Scalar>() -> Result<()> {
    if !S::EXACT {
        return Err(Error::NotSupported("the oracle runs in exact mode only".into()));
    }
    Ok(())
}

/// Matrix number `code` in lexicographic order: entry 0 is the most
/// significant digit in base `|grid|`.
fn decode<S: Scalar>(n: usize, grid: &[S], mut code: u128) -> Matrix<S> {
    let g = grid.len() as u128;
    let mut digits = vec![0usize; n * n];
    for d in digits.iter_mut().rev() {
        *d = (code % g) as usize;
        code /= g;
    }
    Matrix::new(n, n, digits.into_iter().map(|d| grid[d].clone()).collect()).expect("n*n entries")
}

fn filter_range<S: Scalar>(
    n: usize,
    grid: &[S],
    range: std::ops::Range<u128>,
    keep: &(impl Fn(&Matrix<S>) -> bool + Sync),
) -> Vec<Matrix<S>> {
    range.map(|code| decode(n, grid, code)).filter(|m| keep(m)).collect()
}

/// All grid matrices satisfying `keep`, in lexicographic order, split
/// across `jobs` threads.
pub fn enumerate_filtered<S: Scalar>(
    n: usize,
    grid: &[S],
    cap: u128,
    jobs: usize,
    keep: impl Fn(&Matrix<S>) -> bool + Sync,
) -> Result<Vec<Matrix<S>>> {
    require_exact::<S>()?;
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    let total = budget(n, grid.len(), cap)?;
    let jobs = jobs.max(1) as u128;
    let chunk = total.div_ceil(jobs);
    let keep = &keep;
    let parts: Vec<Vec<Matrix<S>>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let lo = (j * chunk).min(total);
                let hi = ((j + 1) * chunk).min(total);
                scope.spawn(move || filter_range(n, grid, lo..hi, keep))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    Ok(parts.into_iter().flatten().collect())
}

/// All `n x n` matrices with entries from `grid` and index at most one.
pub fn enumerate_index1<S: Scalar>(n: usize, grid: &[S], cap: u128) -> Result<Vec<Matrix<S>>> {
    enumerate_index1_jobs(n, grid, cap, 1)
}

pub fn enumerate_index1_jobs<S: Scalar>(n: usize, grid: &[S], cap: u128, jobs: usize) -> Result<Vec<Matrix<S>>> {
    let tol = S::default_tolerance();
    enumerate_filtered(n, grid, cap, jobs, |m| index_le_one(m, &tol).expect("square"))
}

/// All grid idempotents commuting with `b`.
pub fn enumerate_commuting_idempotents<S: Scalar>(b: &Matrix<S>, grid: &[S], cap: u128) -> Result<Vec<Matrix<S>>> {
    let n = b.require_square()?;
    let tol = S::default_tolerance();
    enumerate_filtered(n, grid, cap, 1, |x| {
        is_projector(x, &tol).expect("square") && (b * x) == (x * b)
    })
}

/// `A ≤# B` for operands already known to have index at most one.
fn leq<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> bool {
    let a2 = a * a;
    a2 == a * b && a2 == b * a
}

/// Every universe element below both `b1` and `b2`.
pub fn brute_common_lower_bounds<S: Scalar>(b1: &Matrix<S>, b2: &Matrix<S>, universe: &[Matrix<S>]) -> Vec<Matrix<S>> {
    universe.iter().filter(|a| leq(a, b1) && leq(a, b2)).cloned().collect()
}

/// `candidate` is a common lower bound of `b1`, `b2` dominating every
/// common lower bound in `universe`.
pub fn verify_glb<S: Scalar>(candidate: &Matrix<S>, b1: &Matrix<S>, b2: &Matrix<S>, universe: &[Matrix<S>]) -> bool {
    let tol = S::default_tolerance();
    if !index_le_one(candidate, &tol).unwrap_or(false) || !leq(candidate, b1) || !leq(candidate, b2) {
        return false;
    }
    brute_common_lower_bounds(b1, b2, universe).iter().all(|a| leq(a, candidate))
}

/// Precomputed down-sets of a list of tops inside a universe, as bitsets.
pub struct DownsetIndex<'a, S> {
    universe: &'a [Matrix<S>],
    below: Vec<Vec<u64>>,
}

impl<'a, S: Scalar> DownsetIndex<'a, S> {
    pub fn new(universe: &'a [Matrix<S>], tops: &[Matrix<S>]) -> Self {
        let words = universe.len().div_ceil(64);
        let below = tops
            .iter()
            .map(|b| {
                let mut bits = vec![0u64; words];
                for (i, a) in universe.iter().enumerate() {
                    if leq(a, b) {
                        bits[i / 64] |= 1 << (i % 64);
                    }
                }
                bits
            })
            .collect();
        DownsetIndex { universe, below }
    }

    /// Common lower bounds of tops `i` and `j`.
    pub fn common(&self, i: usize, j: usize) -> Vec<&'a Matrix<S>> {
        let mut out = Vec::new();
        for (w, (x, y)) in self.below[i].iter().zip(&self.below[j]).enumerate() {
            let mut bits = x & y;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(&self.universe[w * 64 + b]);
                bits &= bits - 1;
            }
        }
        out
    }

    /// [`verify_glb`] using the precomputed down-sets.
    pub fn verify_glb(&self, candidate: &Matrix<S>, i: usize, j: usize, b1: &Matrix<S>, b2: &Matrix<S>) -> bool {
        leq(candidate, b1) && leq(candidate, b2) && self.common(i, j).into_iter().all(|a| leq(a, candidate))
    }

    /// Common lower bounds that dominate all others; a meet inside the
    /// universe is exactly one such element.
    pub fn maxima(&self, i: usize, j: usize) -> Vec<&'a Matrix<S>> {
        let common = self.common(i, j);
        common
            .iter()
            .filter(|m| common.iter().all(|a| leq(a, m)))
            .copied()
            .collect()
    }
}

/// Nonsingular members of a list.
pub fn nonsingular<S: Scalar>(ms: &[Matrix<S>]) -> Vec<Matrix<S>> {
    let tol = S::default_tolerance();
    ms.iter().filter(|m| rank(m, &tol) == m.rows()).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::{ExactMatrix, ExactScalar, FloatScalar64};

    fn grid(v: &[i64]) -> Vec<ExactScalar> {
        v.iter().map(|&x| ratio(x, 1)).collect()
    }

    fn d(v: &[i64]) -> ExactMatrix {
        ExactMatrix::diag(&grid(v))
    }

    #[test]
    fn one_by_one() {
        let all = enumerate_index1(1, &grid(&[0, 1]), DEFAULT_BUDGET).unwrap();
        assert_eq!(all, vec![ExactMatrix::from_i64(&[&[0]]), ExactMatrix::from_i64(&[&[1]])]);
    }

    #[test]
    fn two_by_two_counts() {
        let all = enumerate_index1(2, &grid(&[-1, 0, 1]), DEFAULT_BUDGET).unwrap();
        // 81 matrices minus the nonzero nilpotents [[a,b],[c,-a]] with a² + bc = 0.
        let nilpotent = (0..81u128)
            .map(|c| decode(2, &grid(&[-1, 0, 1]), c))
            .filter(|m| !m.is_zero() && m.pow(2).is_zero())
            .count();
        assert_eq!(nilpotent, 8);
        assert_eq!(all.len(), 81 - 8);
        let par = enumerate_index1_jobs(2, &grid(&[-1, 0, 1]), DEFAULT_BUDGET, 4).unwrap();
        assert_eq!(par, all);
    }

    #[test]
    fn projectors_on_binary_grid() {
        let tol = crate::Tolerance::default();
        let all = enumerate_index1(2, &grid(&[0, 1]), DEFAULT_BUDGET).unwrap();
        let projectors: Vec<_> = all.iter().filter(|m| is_projector(m, &tol).unwrap()).collect();
        // O, I, diag(1,0), diag(0,1), [[1,1],[0,0]], [[1,0],[1,0]], [[0,1],[0,1]], [[0,0],[1,1]].
        assert_eq!(projectors.len(), 8);
    }

    #[test]
    fn budget_is_enforced() {
        let g = grid(&[-2, -1, 0, 1, 2, 3]);
        assert_eq!(
            enumerate_index1(3, &g, DEFAULT_BUDGET),
            Err(Error::BudgetExceeded { needed: 6u128.pow(9), cap: DEFAULT_BUDGET })
        );
        let f = vec![FloatScalar64::new(0.0, 0.0)];
        assert!(matches!(enumerate_index1(1, &f, DEFAULT_BUDGET), Err(Error::NotSupported(_))));
    }

    #[test]
    fn lower_bound_examples() {
        let universe = enumerate_index1(2, &grid(&[0, 1, 2]), DEFAULT_BUDGET).unwrap();
        let b = d(&[1, 2]);
        let lbs = brute_common_lower_bounds(&b, &b, &universe);
        for want in [d(&[0, 0]), d(&[1, 0]), d(&[0, 2]), d(&[1, 2])] {
            assert!(lbs.contains(&want));
        }
        assert_eq!(lbs.len(), 4);
        let lbs = brute_common_lower_bounds(&d(&[1, 1]), &d(&[2, 2]), &universe);
        assert_eq!(lbs, vec![d(&[0, 0])]);
        assert!(verify_glb(&d(&[1, 0]), &d(&[1, 2]), &d(&[1, 3]), &universe));
        assert!(!verify_glb(&d(&[0, 0]), &d(&[1, 2]), &d(&[1, 3]), &universe));
        assert!(verify_glb(&d(&[0, 0]), &d(&[2, 1]), &ExactMatrix::from_i64(&[&[1, 1], &[0, 2]]), &universe));
    }

    #[test]
    fn index_matches_direct_search() {
        let universe = enumerate_index1(2, &grid(&[0, 1, 2]), DEFAULT_BUDGET).unwrap();
        let tops = vec![d(&[1, 2]), d(&[1, 1]), ExactMatrix::from_i64(&[&[1, 1], &[0, 2]])];
        let idx = DownsetIndex::new(&universe, &tops);
        for i in 0..tops.len() {
            for j in 0..tops.len() {
                let direct = brute_common_lower_bounds(&tops[i], &tops[j], &universe);
                let fast: Vec<ExactMatrix> = idx.common(i, j).into_iter().cloned().collect();
                assert_eq!(direct, fast);
            }
        }
        assert_eq!(idx.maxima(0, 0), vec![&tops[0]]);
    }

    #[test]
    fn commuting_idempotents_of_diagonal() {
        let b = d(&[1, 2, 0]);
        let sols = enumerate_commuting_idempotents(&b, &grid(&[-1, 0, 1]), DEFAULT_BUDGET).unwrap();
        assert_eq!(sols.len(), 8);
        assert!(sols.iter().all(|s| (0..3).all(|i| (0..3).all(|j| i == j || s[(i, j)] == ratio(0, 1)))));
    }
}
