//! Ordinal patterns of (−β)-transformations: the threshold `B₋(π)` of a
//! permutation, shift spaces of negative bases, and the inverse problem of
//! building a permutation with a prescribed threshold.
//!
//! ```
//! use negbeta::{analysis::analyze, Permutation};
//!
//! let pi: Permutation = "4321".parse().unwrap();
//! let report = analyze(&pi).unwrap();
//! assert_eq!(report.b_minus.to_decimal(3), "2.247");
//! ```

pub mod algebraic;
pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod inverse;
pub mod perm;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod search;
pub mod words;

pub use algebraic::{b_of, AlgebraicNumber, PerronPisot};
pub use dynamics::{BetaValue, Expansion, Precision, ScalarBase, ShiftSpace};
pub use error::{Error, Result};
pub use perm::{DigitVector, Landmarks, Permutation};
pub use poly::IntPolynomial;
pub use scalar::{BaseScalar, QuadraticNumber};
pub use words::{Digit, EventuallyPeriodicWord};

/// Exact rational base.
pub type RationalBase = ScalarBase<num_rational::BigRational>;
/// Exact base in a real quadratic field.
pub type QuadraticBase = ScalarBase<QuadraticNumber>;
/// Approximate base in double precision.
pub type FloatBase = ScalarBase<f64>;
