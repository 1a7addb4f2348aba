use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};

use super::{Coefficient, ExponentVector, Rational};
use crate::error::{Result, SatakeError};

/// Sparse polynomial in `nvars` variables. Terms are kept in a `BTreeMap`
/// keyed by exponent vector, so iteration runs in increasing lex order and
/// the leading term is the last entry. Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<K: Coefficient = Rational> {
    nvars: usize,
    terms: BTreeMap<ExponentVector, K>,
}

impl<K: Coefficient> MultiPoly<K> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, K::one())
    }

    pub fn constant(nvars: usize, c: K) -> Self {
        Self::monomial(ExponentVector::zero(nvars), c)
    }

    pub fn monomial(exponents: ExponentVector, c: K) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    /// The variable at position `index` (0-based).
    pub fn var(nvars: usize, index: usize) -> Self {
        Self::monomial(ExponentVector::unit(nvars, index), K::one())
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated monomials.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, K)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(SatakeError::Structural(format!(
                    "monomial {e:?} does not have {nvars} variables"
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &K)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &ExponentVector) -> Option<&K> {
        self.terms.get(e)
    }

    pub fn leading_term(&self) -> Option<(&ExponentVector, &K)> {
        self.terms.iter().next_back()
    }

    pub fn leading_monomial(&self) -> Option<&ExponentVector> {
        self.leading_term().map(|(e, _)| e)
    }

    pub fn leading_coeff(&self) -> Option<&K> {
        self.leading_term().map(|(_, c)| c)
    }

    /// Adds `c * x^e` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, e: ExponentVector, c: K) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut out = Self::zero(self.nvars);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.clone() * c.clone());
        }
        out
    }

    /// `c * x^m * self`.
    pub fn mul_monomial(&self, m: &ExponentVector, c: &K) -> Self {
        let mut out = Self::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            out.add_term(e.add(m), a.clone() * c.clone());
        }
        out
    }

    /// Exact division by a monomial; `None` if some term is not divisible.
    pub fn div_monomial(&self, m: &ExponentVector) -> Option<Self> {
        let mut out = Self::zero(self.nvars);
        for (e, a) in &self.terms {
            out.terms.insert(m.quotient_into(e)?, a.clone());
        }
        Some(out)
    }

    /// Componentwise maximum exponent over all terms.
    pub fn degree_vector(&self) -> Vec<u32> {
        let mut d = vec![0; self.nvars];
        for e in self.terms.keys() {
            for (slot, x) in d.iter_mut().zip(e.iter()) {
                *slot = (*slot).max(*x);
            }
        }
        d
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.total_degree()).max().unwrap_or(0)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Maps every coefficient into another ring, pruning zeros.
    pub fn map_coeffs<L: Coefficient>(&self, f: impl Fn(&K) -> L) -> MultiPoly<L> {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), f(a));
        }
        out
    }

    /// Substitutes `value` for the variable at `index`, removing it.
    pub fn specialize(&self, index: usize, value: &K) -> Self {
        let mut out = Self::zero(self.nvars - 1);
        for (e, a) in &self.terms {
            let mut c = a.clone();
            for _ in 0..e.get(index) {
                c = c * value.clone();
            }
            let rest: Vec<u32> = e
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != index)
                .map(|(_, x)| *x)
                .collect();
            out.add_term(ExponentVector::new(rest), c);
        }
        out
    }

    /// Coefficients in the variable `index`, lowest degree first. Fails if
    /// any other variable occurs.
    pub fn to_univariate(&self, index: usize) -> Result<Vec<K>> {
        let deg = self.degree_vector().get(index).copied().unwrap_or(0) as usize;
        let mut coeffs = vec![K::zero(); deg + 1];
        for (e, a) in &self.terms {
            if e.iter().enumerate().any(|(i, x)| i != index && *x != 0) {
                return Err(SatakeError::Structural(format!(
                    "term {e:?} involves variables other than position {index}"
                )));
            }
            coeffs[e.get(index) as usize] = a.clone();
        }
        Ok(coeffs)
    }

    /// Writes the polynomial with the given variable names, highest term
    /// first.
    pub fn fmt_with(&self, names: &[&str], f: &mut fmt::Formatter<'_>) -> fmt::Result
    where
        K: fmt::Display,
    {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, x)| **x > 0)
                .map(|(i, x)| {
                    if *x == 1 {
                        names[i].to_string()
                    } else {
                        format!("{}^{}", names[i], x)
                    }
                })
                .collect();
            let coeff = c.to_string();
            let (neg, body) = match coeff.strip_prefix('-') {
                Some(rest) if !rest.contains(['+', ' ']) => (true, rest.to_string()),
                _ => (false, coeff),
            };
            let body = if body.contains(['+', ' ']) {
                format!("({body})")
            } else {
                body
            };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            match (body.as_str(), mono.is_empty()) {
                (b, true) => write!(f, "{b}")?,
                ("1", false) => write!(f, "{}", mono.join("*"))?,
                (b, false) => write!(f, "{b}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }

    fn check_same_ring(&self, other: &Self) {
        assert_eq!(
            self.nvars, other.nvars,
            "polynomials live in rings with different variable counts"
        );
    }
}

impl MultiPoly<Rational> {
    /// Evaluates at a complex point. Coefficients are rounded to `f64` only
    /// here; terms are accumulated with Neumaier compensation.
    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.nvars {
            return Err(SatakeError::Structural(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        let mut re = NeumaierSum::default();
        let mut im = NeumaierSum::default();
        for (e, a) in &self.terms {
            let mut t = Complex64::new(a.to_f64().unwrap_or(f64::NAN), 0.0);
            for (x, k) in point.iter().zip(e.iter()) {
                if *k > 0 {
                    t *= x.powu(*k);
                }
            }
            re.add(t.re);
            im.add(t.im);
        }
        Ok(Complex64::new(re.total(), im.total()))
    }

    /// Value at `point` together with `sum |a_e| |point^e|`, the natural
    /// scale for judging how close the value is to zero.
    pub fn evaluate_scaled(&self, point: &[Complex64]) -> Result<(Complex64, f64)> {
        let value = self.evaluate(point)?;
        let moduli: Vec<Complex64> = point.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect();
        let scale = self.map_coeffs(|a| a.abs()).evaluate(&moduli)?.re;
        Ok((value, scale))
    }

    pub fn evaluate_exact(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(SatakeError::Structural(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        let mut acc = Rational::from_integer(0.into());
        for (e, a) in &self.terms {
            let mut t = a.clone();
            for (x, k) in point.iter().zip(e.iter()) {
                for _ in 0..*k {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Sum of absolute values of the coefficients.
    pub fn coeff_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|a| a.abs().to_f64().unwrap_or(f64::INFINITY))
            .sum()
    }
}

impl<K: Coefficient> fmt::Debug for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().rev()).finish()
    }
}

impl<K: Coefficient + fmt::Display> fmt::Display for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        self.fmt_with(&refs, f)
    }
}

#[derive(Default)]
struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

impl<K: Coefficient> Add<&MultiPoly<K>> for &MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn add(self, rhs: &MultiPoly<K>) -> MultiPoly<K> {
        self.check_same_ring(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<K: Coefficient> Sub<&MultiPoly<K>> for &MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn sub(self, rhs: &MultiPoly<K>) -> MultiPoly<K> {
        self.check_same_ring(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<K: Coefficient> Mul<&MultiPoly<K>> for &MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn mul(self, rhs: &MultiPoly<K>) -> MultiPoly<K> {
        self.check_same_ring(rhs);
        let mut out = MultiPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.add(e2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<K: Coefficient> Neg for &MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn neg(self) -> MultiPoly<K> {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<K: Coefficient> $tr<MultiPoly<K>> for MultiPoly<K> {
            type Output = MultiPoly<K>;
            fn $m(self, rhs: MultiPoly<K>) -> MultiPoly<K> {
                (&self).$m(&rhs)
            }
        }
        impl<K: Coefficient> $tr<&MultiPoly<K>> for MultiPoly<K> {
            type Output = MultiPoly<K>;
            fn $m(self, rhs: &MultiPoly<K>) -> MultiPoly<K> {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<K: Coefficient> Neg for MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn neg(self) -> MultiPoly<K> {
        -&self
    }
}
