//! Exact polynomial arithmetic: exponent vectors, sparse multivariate
//! polynomials under lex order, S-polynomials and the symmetric sums the
//! Hecke systems are built from.

mod exponent;
mod multipoly;
mod params;
mod spoly;
mod symmetric;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use exponent::{lex_compare, ExponentVector};
pub use multipoly::MultiPoly;
pub use params::ParamPoly;
pub use spoly::s_polynomial;
pub use symmetric::{sym_sum, wn_symmetrize};

/// Exact rational scalar (always reduced, positive denominator).
pub type Rational = BigRational;

/// Coefficient ring for [`MultiPoly`].
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Multiplicative inverse when it exists inside the ring.
    fn inverse(&self) -> Option<Self>;
}

impl Coefficient for BigRational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `base^exp` for a possibly negative exponent.
pub fn rat_pow(base: &Rational, exp: i64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp.unsigned_abs() {
        acc *= base;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Integer power of a small prime as an exact rational.
pub fn p_pow(p: u64, exp: i64) -> Rational {
    rat_pow(&Rational::from_integer(BigInt::from(p)), exp)
}
