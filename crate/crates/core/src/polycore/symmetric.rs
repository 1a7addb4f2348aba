use std::collections::BTreeSet;

use num_traits::One;

use super::{ExponentVector, MultiPoly, Rational};
use crate::error::{Result, SatakeError};

/// Sum over the `S_n` orbit of `x1^2...xk^2 * x(k+1)...x(k+j)`, each
/// monomial with coefficient 1. Zero when `k < 0`, `j < 0` or `k + j > n`.
pub fn sym_sum(n: usize, k: i64, j: i64) -> MultiPoly {
    if k < 0 || j < 0 || (k + j) as usize > n {
        return MultiPoly::zero(n);
    }
    let mut base = vec![0u32; n];
    for (i, slot) in base.iter_mut().enumerate() {
        *slot = if (i as i64) < k {
            2
        } else if (i as i64) < k + j {
            1
        } else {
            0
        };
    }
    let mut out = MultiPoly::zero(n);
    for e in distinct_permutations(base) {
        out.add_term(ExponentVector::new(e), Rational::one());
    }
    out
}

/// Sum over the signed-permutation orbit of `x0^r * x^a` in `n + 1`
/// variables (position 0 is `x0`). Each sign flip sends an exponent `a_i`
/// to `r - a_i`, so every `a_i` must be at most `r`.
pub fn wn_symmetrize(n: usize, r: u32, a: &ExponentVector) -> Result<MultiPoly> {
    if a.len() != n {
        return Err(SatakeError::Structural(format!(
            "exponent vector has length {}, expected {n}",
            a.len()
        )));
    }
    if let Some(bad) = a.iter().find(|&&x| x > r) {
        return Err(SatakeError::Domain(format!(
            "exponent {bad} exceeds x0 power {r}; orbit would leave the polynomial ring"
        )));
    }
    let mut orbit: BTreeSet<Vec<u32>> = BTreeSet::new();
    for mask in 0u64..(1u64 << n) {
        let flipped: Vec<u32> = a
            .iter()
            .enumerate()
            .map(|(i, x)| if mask >> i & 1 == 1 { r - x } else { *x })
            .collect();
        let mut sorted = flipped;
        sorted.sort_unstable();
        orbit.insert(sorted);
    }
    // Distinct sorted representatives have disjoint permutation classes.
    let mut out = MultiPoly::zero(n + 1);
    for base in orbit {
        for perm in distinct_permutations(base) {
            let mut e = Vec::with_capacity(n + 1);
            e.push(r);
            e.extend(perm);
            out.add_term(ExponentVector::new(e), Rational::one());
        }
    }
    Ok(out)
}

/// All distinct orderings of a multiset, in increasing lex order.
fn distinct_permutations(mut v: Vec<u32>) -> Vec<Vec<u32>> {
    v.sort_unstable();
    let mut out = vec![v.clone()];
    while next_permutation(&mut v) {
        out.push(v.clone());
    }
    out
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::rat;

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::from(v)
    }

    fn ones(nvars: usize, monos: &[&[u32]]) -> MultiPoly {
        MultiPoly::from_terms(nvars, monos.iter().map(|e| (ev(e), rat(1)))).unwrap()
    }

    /// Orbit of a monomial under all permutations, enumerated the slow way.
    fn brute_orbit(n: usize, base: &[u32]) -> BTreeSet<Vec<u32>> {
        fn perms(items: Vec<usize>) -> Vec<Vec<usize>> {
            if items.len() <= 1 {
                return vec![items];
            }
            let mut out = Vec::new();
            for i in 0..items.len() {
                let mut rest = items.clone();
                let head = rest.remove(i);
                for mut tail in perms(rest) {
                    tail.insert(0, head);
                    out.push(tail);
                }
            }
            out
        }
        perms((0..n).collect())
            .into_iter()
            .map(|sigma| sigma.iter().map(|&s| base[s]).collect())
            .collect()
    }

    #[test]
    fn empty_monomial_sum_is_one() {
        assert_eq!(sym_sum(2, 0, 0), MultiPoly::one(2));
    }

    #[test]
    fn sym_sum_three_one_one() {
        let expected = ones(
            3,
            &[&[2, 1, 0], &[2, 0, 1], &[1, 2, 0], &[0, 2, 1], &[1, 0, 2], &[0, 1, 2]],
        );
        assert_eq!(sym_sum(3, 1, 1), expected);
        let brute = brute_orbit(3, &[2, 1, 0]);
        assert_eq!(brute.len(), 6);
        for e in brute {
            assert!(expected.coeff(&ExponentVector::new(e)).is_some());
        }
    }

    #[test]
    fn sym_sum_vanishes_out_of_range() {
        assert!(sym_sum(2, 1, 2).is_zero());
        assert!(sym_sum(3, -1, 1).is_zero());
    }

    #[test]
    fn wn_orbit_genus_one() {
        assert_eq!(wn_symmetrize(1, 1, &ev(&[1])).unwrap(), ones(2, &[&[1, 1], &[1, 0]]));
    }

    #[test]
    fn wn_orbit_all_twos() {
        assert_eq!(
            wn_symmetrize(2, 2, &ev(&[2, 2])).unwrap(),
            ones(3, &[&[2, 2, 2], &[2, 2, 0], &[2, 0, 2], &[2, 0, 0]])
        );
    }

    #[test]
    fn wn_orbit_fixed_point() {
        assert_eq!(wn_symmetrize(2, 2, &ev(&[1, 1])).unwrap(), ones(3, &[&[2, 1, 1]]));
    }

    #[test]
    fn wn_rejects_laurent_exponents() {
        let err = wn_symmetrize(2, 1, &ev(&[2, 0])).unwrap_err();
        assert!(matches!(err, SatakeError::Domain(_)));
    }

    #[test]
    fn next_permutation_counts_multiset_orderings() {
        assert_eq!(distinct_permutations(vec![1, 1, 2, 2]).len(), 6);
        assert_eq!(distinct_permutations(vec![0, 1, 2]).len(), 6);
    }
}
