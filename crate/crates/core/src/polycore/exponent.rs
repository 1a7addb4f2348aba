use std::cmp::Ordering;
use std::fmt;

use crate::error::{Result, SatakeError};

/// Exponents of a monomial. Position 0 is the most significant variable
/// under the lexicographic order (x1 > x2 > ... > xn, or x0 first when the
/// polynomial carries x0).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Self {
        ExponentVector(exponents)
    }

    pub fn zero(len: usize) -> Self {
        ExponentVector(vec![0; len])
    }

    /// Unit vector with a single 1 at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = vec![0; len];
        v[index] = 1;
        ExponentVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, index: usize) -> u32 {
        self.0[index]
    }

    /// Componentwise sum. Lengths must agree.
    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.len(), other.len());
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &ExponentVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` as an exponent vector, if `self` divides `other`.
    pub fn quotient_into(&self, other: &ExponentVector) -> Option<ExponentVector> {
        if !self.divides(other) {
            return None;
        }
        Some(ExponentVector(
            other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect(),
        ))
    }

    /// Componentwise maximum (the lcm of two monomials).
    pub fn lcm(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = &u32> {
        self.0.iter()
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

impl From<&[u32]> for ExponentVector {
    fn from(v: &[u32]) -> Self {
        ExponentVector(v.to_vec())
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Lexicographic comparison, scanning the most significant variable first.
pub fn lex_compare(a: &ExponentVector, b: &ExponentVector) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(SatakeError::Structural(format!(
            "cannot compare exponent vectors of lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.0.cmp(&b.0))
}
