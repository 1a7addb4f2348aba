use std::cmp::Ordering;

use super::{lex_compare, Coefficient, MultiPoly};
use crate::error::{Result, SatakeError};

/// Fraction-free S-polynomial `lc(L) * x^(b-a) * s - lc(s) * L`, where `s`
/// is the argument with the lex-smaller leading monomial `x^a` and `L` the
/// one with the larger `x^b`.
///
/// `x^a` must divide `x^b`. Cross-multiplying by the leading coefficients
/// keeps integer chains integral and needs no inverses, so symbolic
/// coefficients work too. The result does not depend on argument order.
pub fn s_polynomial<K: Coefficient>(f: &MultiPoly<K>, g: &MultiPoly<K>) -> Result<MultiPoly<K>> {
    if f.nvars() != g.nvars() {
        return Err(SatakeError::Structural(format!(
            "S-polynomial of polynomials in {} and {} variables",
            f.nvars(),
            g.nvars()
        )));
    }
    let ((ef, cf), (eg, cg)) = match (f.leading_term(), g.leading_term()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(SatakeError::Elimination("S-polynomial of the zero polynomial".into())),
    };
    let (small, large, es, el, cs, cl) = match lex_compare(ef, eg)? {
        Ordering::Less => (f, g, ef, eg, cf, cg),
        _ => (g, f, eg, ef, cg, cf),
    };
    let shift = es
        .quotient_into(el)
        .ok_or_else(|| SatakeError::Elimination(format!("leading monomial {es:?} does not divide {el:?}")))?;
    let zero = super::ExponentVector::zero(el.len());
    Ok(&small.mul_monomial(&shift, cl) - &large.mul_monomial(&zero, cs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{rat, ExponentVector, Rational};

    fn poly(nvars: usize, terms: &[(&[u32], i64)]) -> MultiPoly<Rational> {
        MultiPoly::from_terms(nvars, terms.iter().map(|(e, c)| (ExponentVector::from(*e), rat(*c)))).unwrap()
    }

    #[test]
    fn self_s_polynomial_vanishes() {
        let f = poly(2, &[(&[2, 1], 1), (&[0, 3], -4), (&[0, 0], 7)]);
        assert!(s_polynomial(&f, &f).unwrap().is_zero());
    }

    #[test]
    fn hand_expanded_example() {
        let f = poly(2, &[(&[2, 2], 1), (&[0, 0], 1)]);
        let g = poly(2, &[(&[2, 1], 1), (&[0, 1], 1)]);
        // x2 (x1^2 x2 + x2) - (x1^2 x2^2 + 1) = x2^2 - 1
        let expected = poly(2, &[(&[0, 0], -1), (&[0, 2], 1)]);
        assert_eq!(s_polynomial(&f, &g).unwrap(), expected);
        assert_eq!(s_polynomial(&g, &f).unwrap(), expected);
    }

    #[test]
    fn non_divisible_leading_monomials_fail() {
        let f = poly(2, &[(&[2, 0], 1)]);
        let g = poly(2, &[(&[1, 1], 1)]);
        assert!(matches!(s_polynomial(&f, &g).unwrap_err(), SatakeError::Elimination(_)));
    }

    #[test]
    fn unequal_leading_coefficients_cross_multiply() {
        let f = poly(1, &[(&[2], 2), (&[0], 1)]);
        let g = poly(1, &[(&[1], 3), (&[0], 1)]);
        // 2 x (3x + 1) - 3 (2x^2 + 1) = 2x - 3
        assert_eq!(s_polynomial(&f, &g).unwrap(), poly(1, &[(&[1], 2), (&[0], -3)]));
    }

    #[test]
    fn opposite_signs_cancel() {
        let f = poly(1, &[(&[2], -1), (&[0], 1)]);
        let g = poly(1, &[(&[1], 1), (&[0], 1)]);
        // -x (x + 1) - (-x^2 + 1) = -x - 1
        assert_eq!(s_polynomial(&f, &g).unwrap(), poly(1, &[(&[0], -1), (&[1], -1)]));
    }
}
