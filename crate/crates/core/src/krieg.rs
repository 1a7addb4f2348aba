//! Spherical images of the local Hecke generators.
//!
//! `krieg_raw(a, b)` is the classical closed form for the coefficient of a
//! generator on an orbit sum; [`omega_matrix`] rearranges those values into
//! the upper-triangular matrix indexed by (generator, orbit class).

use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::error::{Result, SatakeError};
use crate::polycore::{p_pow, rat, wn_symmetrize, ExponentVector, MultiPoly, Rational};

/// How the genus-2 `T_1(p^2)` row is laid out.
///
/// `Standard` is the matrix produced by the closed form for every genus.
/// `PublishedGenus2` swaps the two off-diagonal `T_1(p^2)` coefficients when
/// `n = 2`; that variant is what the classical genus-2 tables were computed
/// with, and is kept so those tables can be reproduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MatrixConvention {
    #[default]
    Standard,
    PublishedGenus2,
}

impl MatrixConvention {
    pub fn name(self) -> &'static str {
        match self {
            MatrixConvention::Standard => "standard",
            MatrixConvention::PublishedGenus2 => "published",
        }
    }
}

impl std::str::FromStr for MatrixConvention {
    type Err = SatakeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(MatrixConvention::Standard),
            "published" | "published-genus2" => Ok(MatrixConvention::PublishedGenus2),
            other => Err(SatakeError::Domain(format!(
                "unknown matrix convention {other:?} (expected standard or published)"
            ))),
        }
    }
}

/// A local Hecke generator at `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `T_0(p)`.
    T0p,
    /// `T_i(p^2)` for `0 <= i <= n`.
    Tp2(usize),
}

fn check_prime(p: u64) -> Result<()> {
    if p < 2 {
        return Err(SatakeError::Domain(format!("p = {p} is not a prime")));
    }
    Ok(())
}

fn q_factor(p: u64, j: i64, t: i64) -> Rational {
    (p_pow(p, 2 * j + 2 * t) - Rational::one()) / (p_pow(p, 2 * t) - Rational::one())
}

/// The auxiliary coefficient `d(l, j)`.
pub fn d_coeff(l: u32, j: u32, p: u64) -> Result<Rational> {
    check_prime(p)?;
    let (l, j) = (l as i64, j as i64);
    if l == 0 {
        return Ok(Rational::one());
    }
    // The l = 1 closed form is the l >= 2 formula with an empty second product.
    let full: Rational = (1..=l).map(|t| q_factor(p, j, t)).product();
    let short: Rational = (1..l).map(|t| q_factor(p, j, t)).product();
    Ok(full + p_pow(p, j) * short)
}

/// Unnormalized closed-form coefficient `c(a, b)`, with the parity split
/// `c(2i+1, b) = (p^(b+1) - 1) c(2i, b+1)`.
pub fn krieg_raw(a: u32, b: u32, p: u64) -> Result<Rational> {
    check_prime(p)?;
    if a % 2 == 1 {
        let inner = krieg_raw(a - 1, b + 1, p)?;
        return Ok((p_pow(p, b as i64 + 1) - Rational::one()) * inner);
    }
    let i = (a / 2) as i64;
    let j = b as i64;
    let mut acc = Rational::zero();
    for l in 0..=i {
        let sign = if l % 2 == 0 { rat(1) } else { rat(-1) };
        let binom = Rational::from_integer(binomial(BigInt::from(2 * i + j), BigInt::from(i - l)));
        let exp = 4 * i * i + 4 * i * j + 2 * i + (j * j + j) / 2 - 2 * j * l - l * l;
        acc += sign * binom * p_pow(p, exp) * d_coeff(l as u32, b, p)?;
    }
    Ok(acc)
}

/// Coefficient of the orbit sum with `j` linear variables in the spherical
/// image of `T_i(p^2)` for genus `n`.
pub fn c_coeff(i: usize, j: usize, p: u64, n: usize) -> Result<Rational> {
    if i > j || j > n {
        return Err(SatakeError::Domain(format!(
            "coefficient index ({i}, {j}) outside the triangle 0 <= i <= j <= {n}"
        )));
    }
    let raw = krieg_raw((j - i) as u32, i as u32, p)?;
    Ok(raw * p_pow(p, -((j * (j + 1)) as i64)))
}

/// Exponent vector `(2, ..., 2, 1, ..., 1)` with `j` trailing ones.
pub fn orbit_exponents(n: usize, j: usize) -> ExponentVector {
    ExponentVector::new((0..n).map(|t| if t < n - j { 2 } else { 1 }).collect())
}

/// Upper-triangular matrix of spherical-image coefficients. Row `i` is the
/// generator `T_i(p^2)`, column `j` the orbit class with `j` linear
/// variables.
#[derive(Clone, PartialEq)]
pub struct OmegaMatrix {
    pub n: usize,
    pub p: u64,
    pub convention: MatrixConvention,
    entries: Vec<Vec<Rational>>,
}

impl OmegaMatrix {
    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    pub fn size(&self) -> usize {
        self.n + 1
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    /// `sum_i M[i][j]`: the coefficient of orbit class `j` in the image of
    /// `sum_i T_i(p^2)`.
    pub fn column_sums(&self) -> Vec<Rational> {
        (0..=self.n)
            .map(|j| (0..=j).map(|i| self.entries[i][j].clone()).sum())
            .collect()
    }

    /// Re-checks triangularity, the non-zero diagonal and the parity
    /// recursion on the assembled entries.
    pub fn validate(&self) -> Result<()> {
        let p = self.p;
        for i in 0..=self.n {
            if self.entries[i][i].is_zero() {
                return Err(SatakeError::Internal(format!("zero diagonal entry {i}")));
            }
            for j in 0..i {
                if !self.entries[i][j].is_zero() {
                    return Err(SatakeError::Internal(format!(
                        "entry ({i}, {j}) below the diagonal is non-zero"
                    )));
                }
            }
        }
        if self.convention == MatrixConvention::Standard {
            for i in 0..self.n {
                for j in (i + 1..=self.n).step_by(2) {
                    let lhs = &self.entries[i][j];
                    let rhs = (p_pow(p, i as i64 + 1) - Rational::one()) * &self.entries[i + 1][j];
                    if *lhs != rhs {
                        return Err(SatakeError::Internal(format!("parity recursion fails at ({i}, {j})")));
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for OmegaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OmegaMatrix(n={}, p={}, {:?})", self.n, self.p, self.convention)?;
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub fn omega_matrix(n: usize, p: u64, convention: MatrixConvention) -> Result<OmegaMatrix> {
    if n == 0 {
        return Err(SatakeError::Domain("genus must be at least 1".into()));
    }
    check_prime(p)?;
    let mut entries = vec![vec![Rational::zero(); n + 1]; n + 1];
    for (i, row) in entries.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate().skip(i) {
            *slot = c_coeff(i, j, p, n)?;
        }
    }
    if convention == MatrixConvention::PublishedGenus2 && n == 2 {
        let row = &mut entries[1];
        row.swap(1, 2);
    }
    let m = OmegaMatrix {
        n,
        p,
        convention,
        entries,
    };
    m.validate()?;
    Ok(m)
}

/// `Omega(T)` as a polynomial in `x0, x1, ..., xn`.
pub fn spherical_image(generator: Generator, m: &OmegaMatrix) -> Result<MultiPoly> {
    let n = m.n;
    match generator {
        Generator::T0p => {
            let mut acc = MultiPoly::var(n + 1, 0);
            for i in 1..=n {
                let factor = &MultiPoly::one(n + 1) + &MultiPoly::var(n + 1, i);
                acc = &acc * &factor;
            }
            Ok(acc)
        }
        Generator::Tp2(i) => {
            if i > n {
                return Err(SatakeError::Domain(format!(
                    "generator T_{i}(p^2) does not exist in genus {n}"
                )));
            }
            let mut acc = MultiPoly::zero(n + 1);
            for j in i..=n {
                let orbit = wn_symmetrize(n, 2, &orbit_exponents(n, j))?;
                acc = &acc + &orbit.scale(m.entry(i, j));
            }
            Ok(acc)
        }
    }
}
