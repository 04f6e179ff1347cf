//! Exact linear algebra over the rationals.
//!
//! Everything here is exact: matrices hold [`Rational`] entries and all
//! elimination is done fraction-free on integer-scaled rows, so ranks and
//! kernels are never subject to rounding.

mod complex;
mod echelon;
mod sparse;

pub use complex::{BoundedChainComplex, LinalgError};
pub use echelon::{kernel_basis, kernel_matrix, rank, solve_in_span, Echelon};
pub use sparse::{SparseMatrix, SparseVec};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or `"p"` into a rational. Decimal notation is rejected.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.contains('.') || s.is_empty() {
        return None;
    }
    let r: Rational = s.parse().ok()?;
    if r.denom().is_zero() {
        return None;
    }
    Some(r)
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
