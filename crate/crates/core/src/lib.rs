//! Exact computations around h-fold sumsets `hA = {a_1 + ... + a_h : a_i in A}`.
//!
//! * [`sumset`]: sumsets, size profiles and deficit tables.
//! * [`lattice`]: the coefficient lattice of `A` and its successive L1 minima.
//! * [`theory`]: closed-form sizes below the second minimum, their brute-force
//!   verification, and sets with prescribed minima.
//! * [`types`]: h-types of addition and multiplication tables and the maps that
//!   transport them between rationals, integers and products.
//! * [`experiments`]: seeded sampling and exhaustive scans over subsets of `[n]`.
//!
//! Algorithms are generic over a [`Scalar`] integer type. [`BigInt`] never
//! overflows; fixed-width types report [`Error::Overflow`] instead of wrapping.

pub mod combinatorics;
pub mod decimal;
mod error;
pub mod experiments;
pub mod lattice;
mod scalar;
mod sets;
pub mod sumset;
pub mod theory;
pub mod types;

pub use num_bigint::BigInt;
pub use num_rational::Ratio;

pub use combinatorics::{binomial, composition_count, enumerate_compositions, CompositionTable, CompositionVector};
pub use error::{Error, Result};
pub use scalar::{cast, Scalar};
pub use sets::{normalize, IntegerSet, RationalSet};

/// Arbitrary-precision rational.
pub type BigRational = Ratio<BigInt>;
/// Integer set over arbitrary-precision integers.
pub type BigIntegerSet = IntegerSet<BigInt>;
/// Rational set over arbitrary-precision integers.
pub type BigRationalSet = RationalSet<BigInt>;
/// Integer set over `i64`, used by the experiment kernels.
pub type SmallIntegerSet = IntegerSet<i64>;
pub type BigLatticeBasis = lattice::LatticeBasis<BigInt>;
pub type BigMinimaReport = lattice::MinimaReport<BigInt>;
pub type BigSumsetProfile = sumset::SumsetProfile<BigInt>;
pub type BigVerificationReport = theory::VerificationReport<BigInt>;
