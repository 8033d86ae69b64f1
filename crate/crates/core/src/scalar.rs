//! Scalar abstraction shared by the exact and floating matrix modes.
//!
//! Exact mode uses Gaussian rationals ([`GaussianRational`]), floating mode
//! uses `Complex<f64>` or `Complex<f32>`. Algorithms are written once against
//! [`Scalar`]; the few that only make sense in floating point (SVD, the
//! Hartwig-Spindelböck decomposition) are bounded on [`FloatScalar`].

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_traits::{Float, One, Zero};

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::rational::Rational;

/// Gaussian rational.
pub type ExactComplex = GaussianRational;

/// Comparison thresholds for floating mode. Exact mode ignores them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative tolerance for equality-style checks.
    pub rel: f64,
    /// Singular values below `rank_threshold_factor * sigma_1` count as zero.
    pub rank_threshold_factor: f64,
}

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance {
        rel: 1e-9,
        rank_threshold_factor: 1e-10,
    };

    pub fn new(rel: f64, rank_threshold_factor: f64) -> Result<Self> {
        if !(rel.is_finite() && rel > 0.0) {
            return Err(Error::InvalidTolerance(format!("rel must be positive, got {rel}")));
        }
        if !(rank_threshold_factor.is_finite() && rank_threshold_factor > 0.0) {
            return Err(Error::InvalidTolerance(format!(
                "rank_threshold_factor must be positive, got {rank_threshold_factor}"
            )));
        }
        Ok(Tolerance {
            rel,
            rank_threshold_factor,
        })
    }

    /// Same thresholds with `rel` replaced.
    pub fn with_rel(self, rel: f64) -> Result<Self> {
        Tolerance::new(rel, self.rank_threshold_factor)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::DEFAULT
    }
}

/// A complex field element usable as a matrix entry.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for exact arithmetic; equality tests are then literal.
    const EXACT: bool;

    fn conj(&self) -> Self;

    /// Complex modulus as an `f64`.
    fn modulus(&self) -> f64;

    fn to_c64(&self) -> Complex64;

    /// Convert from `Complex64`. Exact mode converts the binary value
    /// exactly; non-finite input panics.
    fn from_c64(z: Complex64) -> Self;

    fn from_gaussian(re: i64, im: i64) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_gaussian(v, 0)
    }

    /// Tolerance suited to the precision of this scalar.
    fn default_tolerance() -> Tolerance {
        Tolerance::DEFAULT
    }
}

/// Floating-point scalars.
pub trait FloatScalar: Scalar + Copy {
    type Real: Float + Debug;
}

macro_rules! impl_float_scalar {
    ($real:ty, $rel:expr, $rank:expr) => {
        impl Scalar for Complex<$real> {
            const EXACT: bool = false;

            fn conj(&self) -> Self {
                Complex::conj(self)
            }

            fn modulus(&self) -> f64 {
                self.norm() as f64
            }

            fn to_c64(&self) -> Complex64 {
                Complex64::new(self.re as f64, self.im as f64)
            }

            fn from_c64(z: Complex64) -> Self {
                Complex::new(z.re as $real, z.im as $real)
            }

            fn from_gaussian(re: i64, im: i64) -> Self {
                Complex::new(re as $real, im as $real)
            }

            fn default_tolerance() -> Tolerance {
                Tolerance {
                    rel: $rel,
                    rank_threshold_factor: $rank,
                }
            }
        }

        impl FloatScalar for Complex<$real> {
            type Real = $real;
        }
    };
}

impl_float_scalar!(f64, 1e-9, 1e-10);
impl_float_scalar!(f32, 1e-4, 1e-5);

impl Scalar for ExactComplex {
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        GaussianRational::conj(self)
    }

    fn modulus(&self) -> f64 {
        GaussianRational::to_c64(self).norm()
    }

    fn to_c64(&self) -> Complex64 {
        GaussianRational::to_c64(self)
    }

    fn from_c64(z: Complex64) -> Self {
        GaussianRational::try_from_c64(z).expect("finite value required for exact conversion")
    }

    fn from_gaussian(re: i64, im: i64) -> Self {
        GaussianRational::from_gaussian(re, im)
    }
}

/// Build an exact scalar from `p/q` numerator/denominator pairs.
pub fn exact(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> ExactComplex {
    GaussianRational::new(
        Rational::from_i64_pair(re_num, re_den),
        Rational::from_i64_pair(im_num, im_den),
    )
}

/// Exact real rational `p/q`.
pub fn ratio(p: i64, q: i64) -> ExactComplex {
    exact(p, q, 0, 1)
}
