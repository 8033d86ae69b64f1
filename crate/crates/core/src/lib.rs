//! Sharp partial order on square complex matrices of index at most one.
//!
//! The crate computes down-sets `[O, B]` through their isomorphism with
//! posets of projectors commuting with the core block `ΣK` of a
//! Hartwig-Spindelböck decomposition (and with its Jordan form), classifies
//! their lattice structure, builds witnesses and chains, and solves the
//! associated idempotent matrix equations.
//!
//! All algorithms are generic over [`Scalar`]; [`ExactMatrix`] (Gaussian
//! rationals) and [`FloatMatrix`] (`Complex<f64>`) are the two modes used in
//! practice.

pub mod commutant;
pub mod equations;
pub mod error;
pub mod gaussian;
pub mod gen;
pub mod ginv;
pub mod hs;
pub mod jordan;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod order;
pub mod rational;
pub mod scalar;
pub mod svd;

pub use commutant::{CommutantMatrix, CommutantProjector, CullenBlock, Rutm};
pub use equations::{FamilyKind, SolutionFamily};
pub use error::{Error, Result};
pub use hs::HsDecomposition;
pub use jordan::{EigenBlocks, JordanSpec};
pub use lattice::{DownsetDescriptor, FactorKind, NonLatticeWitness};
pub use gaussian::GaussianRational;
pub use matrix::Matrix;
pub use rational::Rational;
pub use scalar::{ExactComplex, FloatScalar, Scalar, Tolerance};

use num_complex::Complex;

/// Exact Gaussian-rational scalar.
pub type ExactScalar = ExactComplex;
/// Double-precision complex scalar.
pub type FloatScalar64 = Complex<f64>;
/// Single-precision complex scalar.
pub type FloatScalar32 = Complex<f32>;

pub type ExactMatrix = Matrix<ExactScalar>;
pub type FloatMatrix = Matrix<FloatScalar64>;
pub type Float32Matrix = Matrix<FloatScalar32>;
