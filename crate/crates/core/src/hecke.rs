//! From Hecke eigenvalues to the reduced polynomial system.
//!
//! The eigenvalue of `T_g(p^2)` is a triangular combination of the values
//! `k_i` of the orbit sums `Sym(x0^2 x^b)` at the Satake parameters, where
//! `k_i` belongs to the orbit with `n - i + 1` linear variables. Dividing by
//! `k_1 = a0^2 a1 ... an` yields the constants `c_j` of the system
//! `f_j = sum_k S(n; k, j-1) - c_j x1...xn`.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use crate::error::{Result, SatakeError};
use crate::krieg::{MatrixConvention, OmegaMatrix};
use crate::polycore::{rat, sym_sum, Coefficient, ExponentVector, MultiPoly, Rational};

/// Eigenvalues of the generators `T_i(p^2)`.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorEigenvalues {
    /// `values[i - 1]` is the eigenvalue of `T_i(p^2)`; the top generator
    /// may be missing and is then filled in from the weight.
    PerGenerator {
        values: Vec<Option<BigInt>>,
        t0p2: Option<BigInt>,
    },
    /// Genus 2 only: the eigenvalue of `T(p^2) = T_0(p^2) + T_1(p^2) + T_2(p^2)`.
    Aggregate { tp2: BigInt },
}

/// One eigenform at one prime.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueRecord {
    pub label: String,
    pub n: usize,
    pub k: u32,
    pub p: u64,
    pub lambda_t0p: BigInt,
    pub generators: GeneratorEigenvalues,
}

impl EigenvalueRecord {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(SatakeError::Dataset(format!("{}: genus must be positive", self.label)));
        }
        if !is_prime(self.p) {
            return Err(SatakeError::Dataset(format!("{}: {} is not prime", self.label, self.p)));
        }
        if !self.k.is_multiple_of(2) {
            return Err(SatakeError::Dataset(format!(
                "{}: weight {} is odd",
                self.label, self.k
            )));
        }
        match &self.generators {
            GeneratorEigenvalues::Aggregate { .. } if self.n != 2 => Err(SatakeError::Dataset(format!(
                "{}: aggregate T(p^2) eigenvalue requires genus 2",
                self.label
            ))),
            GeneratorEigenvalues::PerGenerator { values, .. } => {
                if values.len() != self.n {
                    return Err(SatakeError::Dataset(format!(
                        "{}: expected {} generator eigenvalues, got {}",
                        self.label,
                        self.n,
                        values.len()
                    )));
                }
                if let Some(missing) = values[..self.n - 1].iter().position(Option::is_none) {
                    return Err(SatakeError::Dataset(format!(
                        "{}: eigenvalue of T_{}(p^2) missing",
                        self.label,
                        missing + 1
                    )));
                }
                if let Some(top) = &values[self.n - 1] {
                    let expected = scalar_eigenvalue(self.n, self.k, self.p)?;
                    if Rational::from_integer(top.clone()) != expected {
                        return Err(SatakeError::Dataset(format!(
                            "{}: T_{}(p^2) eigenvalue {} differs from the scalar value {}",
                            self.label, self.n, top, expected
                        )));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// True if the top generator's eigenvalue is not part of the input.
    pub fn top_synthesized(&self) -> bool {
        match &self.generators {
            GeneratorEigenvalues::PerGenerator { values, .. } => values.last().is_some_and(Option::is_none),
            GeneratorEigenvalues::Aggregate { .. } => true,
        }
    }

    /// `lambda(T_i(p^2))` for `i = 1..=n`, synthesizing the top one if absent.
    fn generator_values(&self) -> Result<Vec<Rational>> {
        match &self.generators {
            GeneratorEigenvalues::PerGenerator { values, .. } => {
                let top = scalar_eigenvalue(self.n, self.k, self.p)?;
                Ok(values
                    .iter()
                    .map(|v| match v {
                        Some(x) => Rational::from_integer(x.clone()),
                        None => top.clone(),
                    })
                    .collect())
            }
            GeneratorEigenvalues::Aggregate { .. } => Err(SatakeError::Internal(
                "per-generator values requested for an aggregate record".into(),
            )),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Eigenvalue of the scalar generator `T_n(p^2)`: `p^(nk - n(n+1))`.
pub fn scalar_eigenvalue(n: usize, k: u32, p: u64) -> Result<Rational> {
    let exp = (n as i64) * (k as i64) - (n * (n + 1)) as i64;
    Ok(crate::polycore::p_pow(p, exp))
}

fn diag(m: &OmegaMatrix, i: usize) -> Result<&Rational> {
    let d = m.entry(i, i);
    if d.is_zero() {
        return Err(SatakeError::Internal(format!(
            "diagonal entry {i} of the matrix vanishes"
        )));
    }
    Ok(d)
}

/// Solves the triangular system for `k_1..k_n` from `lambda(T_i(p^2))`,
/// `i = 1..=n` (index `i - 1` in `lambdas`).
pub fn k_constants_from(lambdas: &[Rational], m: &OmegaMatrix) -> Result<Vec<Rational>> {
    let n = m.n;
    if lambdas.len() != n {
        return Err(SatakeError::Structural(format!(
            "expected {n} generator eigenvalues, got {}",
            lambdas.len()
        )));
    }
    let mut ks: Vec<Rational> = Vec::with_capacity(n + 1);
    for j in 1..=n {
        let g = n - j + 1;
        let mut rhs = lambdas[g - 1].clone();
        for (i, ki) in ks.iter().enumerate() {
            rhs -= m.entry(g, n - i) * ki;
        }
        ks.push(rhs / diag(m, g)?);
    }
    Ok(ks)
}

/// `k_{n+1}` from the square identity `lambda(T_0(p))^2 = sum 2^(n+1-j) k_j`.
pub fn last_k_from_identity(lambda_t0p: &Rational, ks: &[Rational]) -> Rational {
    let n = ks.len();
    let mut acc = lambda_t0p * lambda_t0p;
    for (idx, kj) in ks.iter().enumerate() {
        let j = idx + 1;
        acc -= rat(2).pow((n + 1 - j) as u32) * kj;
    }
    acc
}

/// Full vector `k_1..k_{n+1}` for a record.
pub fn k_constants(rec: &EigenvalueRecord, m: &OmegaMatrix) -> Result<Vec<Rational>> {
    rec.validate()?;
    if m.n != rec.n || m.p != rec.p {
        return Err(SatakeError::Structural(format!(
            "matrix is for (n={}, p={}), record {} has (n={}, p={})",
            m.n, m.p, rec.label, rec.n, rec.p
        )));
    }
    let t0p = Rational::from_integer(rec.lambda_t0p.clone());
    match &rec.generators {
        GeneratorEigenvalues::Aggregate { tp2 } => {
            let tp2 = Rational::from_integer(tp2.clone());
            genus2_k_constants(&t0p, &tp2, rec.k, m)
        }
        GeneratorEigenvalues::PerGenerator { t0p2, .. } => {
            let mut ks = k_constants_from(&rec.generator_values()?, m)?;
            let last = last_k_from_identity(&t0p, &ks);
            if let Some(supplied) = t0p2 {
                let supplied = Rational::from_integer(supplied.clone());
                let mut direct = supplied.clone();
                for (i, ki) in ks.iter().enumerate() {
                    direct -= m.entry(0, rec.n - i) * ki;
                }
                let direct = direct / diag(m, 0)?;
                if direct != last {
                    return Err(SatakeError::InconsistentDataset(format!(
                        "{}: supplied T_0(p^2) eigenvalue {} contradicts T_0(p)^2 (expected {})",
                        rec.label,
                        supplied,
                        t0p2_value(&ks, &last, m)
                    )));
                }
            }
            ks.push(last);
            Ok(ks)
        }
    }
}

fn t0p2_value(ks: &[Rational], last: &Rational, m: &OmegaMatrix) -> Rational {
    let n = m.n;
    let mut acc = m.entry(0, 0) * last;
    for (i, ki) in ks.iter().enumerate() {
        acc += m.entry(0, n - i) * ki;
    }
    acc
}

/// Eigenvalue of `T_0(p^2)` implied by `T_0(p)` and `k_1..k_n` (a trailing
/// `k_{n+1}` is accepted and must agree with the square identity).
pub fn t0p2_from_identity(lambda_t0p: &BigInt, kvec: &[Rational], m: &OmegaMatrix) -> Result<BigInt> {
    let n = m.n;
    if kvec.len() != n && kvec.len() != n + 1 {
        return Err(SatakeError::Structural(format!(
            "expected {n} or {} constants, got {}",
            n + 1,
            kvec.len()
        )));
    }
    let ks = &kvec[..n];
    let last = last_k_from_identity(&Rational::from_integer(lambda_t0p.clone()), ks);
    if kvec.len() == n + 1 && kvec[n] != last {
        return Err(SatakeError::InconsistentDataset(format!(
            "k_{} = {} contradicts the square identity ({last})",
            n + 1,
            kvec[n]
        )));
    }
    let value = t0p2_value(ks, &last, m);
    if !value.is_integer() {
        return Err(SatakeError::Normalization(format!(
            "T_0(p^2) eigenvalue {value} is not an integer"
        )));
    }
    Ok(value.to_integer())
}

/// `c_j = k_{n+2-j} / k_1` for `j = 1..=n`.
pub fn reduced_constants(kvec: &[Rational]) -> Result<Vec<Rational>> {
    let k1 = kvec
        .first()
        .ok_or_else(|| SatakeError::Structural("empty constant vector".into()))?;
    if k1.is_zero() {
        return Err(SatakeError::Degenerate(
            "k_1 vanishes, so some Satake parameter would be zero".into(),
        ));
    }
    let n = kvec.len() - 1;
    Ok((1..=n).map(|j| &kvec[n + 1 - j] / k1).collect())
}

fn genus2_k_constants(t0p: &Rational, tp2: &Rational, k: u32, m: &OmegaMatrix) -> Result<Vec<Rational>> {
    if m.n != 2 {
        return Err(SatakeError::Domain(
            "aggregate eigenvalues exist only in genus 2".into(),
        ));
    }
    let k1 = scalar_eigenvalue(2, k, m.p)? / diag(m, 2)?;
    let cols = m.column_sums();
    // lambda(T(p))^2 = 4 k1 + 2 k2 + k3
    // lambda(T(p^2)) = cols[2] k1 + cols[1] k2 + cols[0] k3
    let sq = t0p * t0p;
    let coeff = &cols[1] - &cols[0] * rat(2);
    if coeff.is_zero() {
        return Err(SatakeError::Internal("singular genus-2 system".into()));
    }
    let k2 = (tp2 - &cols[2] * &k1 - &cols[0] * (&sq - rat(4) * &k1)) / coeff;
    let k3 = &sq - rat(4) * &k1 - rat(2) * &k2;
    Ok(vec![k1, k2, k3])
}

/// Genus-2 constants `(c1, c2)` from `lambda(T(p))` and `lambda(T(p^2))`.
pub fn genus2_constants(
    lambda_tp: &BigInt,
    lambda_tp2: &BigInt,
    k: u32,
    p: u64,
    convention: MatrixConvention,
) -> Result<(Rational, Rational)> {
    let m = crate::krieg::omega_matrix(2, p, convention)?;
    let ks = genus2_k_constants(
        &Rational::from_integer(lambda_tp.clone()),
        &Rational::from_integer(lambda_tp2.clone()),
        k,
        &m,
    )?;
    let c = reduced_constants(&ks)?;
    Ok((c[0].clone(), c[1].clone()))
}

/// The system `f_1..f_n` in `x1..xn`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedSystem<K: Coefficient = Rational> {
    pub n: usize,
    pub constants: Vec<K>,
    pub polys: Vec<MultiPoly<K>>,
    /// `a0^2 a1 ... an`, when the system came from eigenvalues.
    pub k1: Option<Rational>,
}

/// `f_i = sum_{k=0}^{n-i+1} S(n; k, i-1) - c_i x1...xn`.
pub fn build_system<K>(constants: &[K], n: usize) -> Result<ReducedSystem<K>>
where
    K: Coefficient + From<Rational>,
{
    if n == 0 || constants.len() != n {
        return Err(SatakeError::Structural(format!(
            "need {n} constants for genus {n}, got {}",
            constants.len()
        )));
    }
    let all_ones = ExponentVector::new(vec![1; n]);
    let mut polys = Vec::with_capacity(n);
    for (idx, c) in constants.iter().enumerate() {
        let i = idx + 1;
        let mut f = MultiPoly::<Rational>::zero(n);
        for k in 0..=(n + 1 - i) {
            f = &f + &sym_sum(n, k as i64, i as i64 - 1);
        }
        let mut f: MultiPoly<K> = f.map_coeffs(|a| K::from(a.clone()));
        f.add_term(all_ones.clone(), -c.clone());
        polys.push(f);
    }
    Ok(ReducedSystem {
        n,
        constants: constants.to_vec(),
        polys,
        k1: None,
    })
}

/// System for a record, together with `k_1..k_{n+1}`.
pub fn system_for_record(rec: &EigenvalueRecord, m: &OmegaMatrix) -> Result<(ReducedSystem, Vec<Rational>)> {
    let ks = k_constants(rec, m)?;
    let cs = reduced_constants(&ks)?;
    let mut sys = build_system(&cs, rec.n)?;
    sys.k1 = Some(ks[0].clone());
    Ok((sys, ks))
}

/// `k_1` predicted by the weight alone, `p^(nk - n(n+1)/2)`.
pub fn expected_k1(n: usize, k: u32, p: u64) -> Rational {
    crate::polycore::p_pow(p, (n as i64) * (k as i64) - (n * (n + 1) / 2) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krieg::{omega_matrix, spherical_image, Generator};
    use crate::polycore::{ratio, ParamPoly};
    use num_traits::One;

    fn big(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    #[test]
    fn scalar_eigenvalue_examples() {
        assert_eq!(scalar_eigenvalue(2, 20, 2).unwrap(), crate::polycore::p_pow(2, 34));
        assert_eq!(scalar_eigenvalue(4, 8, 2).unwrap(), rat(4096));
        assert_eq!(scalar_eigenvalue(1, 12, 3).unwrap(), crate::polycore::p_pow(3, 10));
    }

    #[test]
    fn reduced_constants_examples() {
        assert_eq!(
            reduced_constants(&[rat(1), rat(1), rat(1)]).unwrap(),
            vec![rat(1), rat(1)]
        );
        assert!(matches!(
            reduced_constants(&[rat(0), rat(1)]),
            Err(SatakeError::Degenerate(_))
        ));
    }

    #[test]
    fn genus_one_system() {
        let sys = build_system(&[rat(3)], 1).unwrap();
        let expected = MultiPoly::from_terms(
            1,
            vec![
                (ExponentVector::from(&[2u32][..]), rat(1)),
                (ExponentVector::from(&[1u32][..]), rat(-3)),
                (ExponentVector::from(&[0u32][..]), rat(1)),
            ],
        )
        .unwrap();
        assert_eq!(sys.polys[0], expected);
    }

    #[test]
    fn genus_two_symbolic_system() {
        let cs = [ParamPoly::param(1), ParamPoly::param(2)];
        let sys = build_system(&cs, 2).unwrap();
        let term = |e: [u32; 2], c: ParamPoly| (ExponentVector::from(&e[..]), c);
        let one = ParamPoly::one();
        let f1 = MultiPoly::from_terms(
            2,
            vec![
                term([0, 0], one.clone()),
                term([2, 0], one.clone()),
                term([0, 2], one.clone()),
                term([2, 2], one.clone()),
                term([1, 1], -ParamPoly::param(1)),
            ],
        )
        .unwrap();
        let f2 = MultiPoly::from_terms(
            2,
            vec![
                term([1, 0], one.clone()),
                term([0, 1], one.clone()),
                term([2, 1], one.clone()),
                term([1, 2], one.clone()),
                term([1, 1], -ParamPoly::param(2)),
            ],
        )
        .unwrap();
        assert_eq!(sys.polys, vec![f1, f2]);
    }

    #[test]
    fn leading_coefficients_are_one() {
        for n in 1..=5 {
            let cs: Vec<Rational> = (1..=n as i64).map(|i| ratio(i, 7)).collect();
            let sys = build_system(&cs, n).unwrap();
            for (idx, f) in sys.polys.iter().enumerate() {
                let (e, c) = f.leading_term().unwrap();
                assert_eq!(c, &rat(1));
                let expected: Vec<u32> = (0..n).map(|t| if t < n - idx { 2 } else { 1 }).collect();
                assert_eq!(e.as_slice(), &expected[..]);
            }
        }
    }

    /// Eigenvalues computed by evaluating the spherical images at an exact
    /// rational tuple.
    fn synthesize(alpha: &[Rational], m: &OmegaMatrix) -> (Rational, Vec<Rational>, Rational) {
        let t0p = spherical_image(Generator::T0p, m)
            .unwrap()
            .evaluate_exact(alpha)
            .unwrap();
        let gens = (1..=m.n)
            .map(|i| {
                spherical_image(Generator::Tp2(i), m)
                    .unwrap()
                    .evaluate_exact(alpha)
                    .unwrap()
            })
            .collect();
        let t0p2 = spherical_image(Generator::Tp2(0), m)
            .unwrap()
            .evaluate_exact(alpha)
            .unwrap();
        (t0p, gens, t0p2)
    }

    #[test]
    fn k_constants_match_orbit_values() {
        let alpha = vec![rat(6), ratio(2, 3), rat(-3), ratio(5, 2)];
        let m = omega_matrix(3, 3, MatrixConvention::Standard).unwrap();
        let (t0p, gens, t0p2) = synthesize(&alpha, &m);
        let mut ks = k_constants_from(&gens, &m).unwrap();
        ks.push(last_k_from_identity(&t0p, &ks));
        for (idx, k) in ks.iter().enumerate() {
            let ones = 3 - idx;
            let orbit = crate::polycore::wn_symmetrize(3, 2, &crate::krieg::orbit_exponents(3, ones)).unwrap();
            assert_eq!(k, &orbit.evaluate_exact(&alpha).unwrap(), "k_{}", idx + 1);
        }
        assert_eq!(t0p2_value(&ks[..3], &ks[3], &m), t0p2);
    }

    #[test]
    fn genus_two_paths_agree() {
        // a0^2 a1 a2 = p^(2k-3) for k = 6, p = 5
        let alpha = vec![rat(625), rat(15), ratio(1, 3)];
        for conv in [MatrixConvention::Standard, MatrixConvention::PublishedGenus2] {
            let m = omega_matrix(2, 5, conv).unwrap();
            let (t0p, gens, t0p2) = synthesize(&alpha, &m);
            let mut ks = k_constants_from(&gens, &m).unwrap();
            ks.push(last_k_from_identity(&t0p, &ks));
            let generic = reduced_constants(&ks).unwrap();
            let aggregate = &gens[0] + &gens[1] + &t0p2;
            let fast = genus2_k_constants(&t0p, &aggregate, 6, &m).unwrap();
            assert_eq!(fast, ks);
            let (c1, c2) = (fast[2].clone() / &fast[0], fast[1].clone() / &fast[0]);
            assert_eq!(generic, vec![c1, c2]);
        }
    }

    #[test]
    fn inconsistent_t0p2_is_rejected() {
        let alpha = vec![rat(2), rat(3), rat(5)];
        let m = omega_matrix(2, 2, MatrixConvention::Standard).unwrap();
        let (t0p, gens, t0p2) = synthesize(&alpha, &m);
        assert!(t0p.is_integer());
        let ks = k_constants_from(&gens, &m).unwrap();
        let value = t0p2_value(&ks, &last_k_from_identity(&t0p, &ks), &m);
        assert_eq!(value, t0p2);
        let err = t0p2_from_identity(&t0p.to_integer(), &[ks[0].clone(), ks[1].clone(), rat(0)], &m).unwrap_err();
        assert!(matches!(err, SatakeError::InconsistentDataset(_)));
    }

    #[test]
    fn genus_one_identity() {
        // alpha = (1, 1): T0(p) = 2, k1 = 1, and the square identity gives k2 = 4 - 2 k1
        let m = omega_matrix(1, 2, MatrixConvention::Standard).unwrap();
        assert_eq!(last_k_from_identity(&rat(2), &[rat(1)]), rat(2));
        // the toy tuple is not attached to a modular form, so integrality trips
        let err = t0p2_from_identity(&big("2"), &[rat(1), rat(2)], &m).unwrap_err();
        assert!(matches!(err, SatakeError::Normalization(_)));
    }

    #[test]
    fn record_validation() {
        let rec = EigenvalueRecord {
            label: "x".into(),
            n: 2,
            k: 20,
            p: 2,
            lambda_t0p: big("1"),
            generators: GeneratorEigenvalues::PerGenerator {
                values: vec![Some(big("5")), Some(big("7"))],
                t0p2: None,
            },
        };
        assert!(matches!(rec.validate(), Err(SatakeError::Dataset(_))));
        let mut ok = rec.clone();
        ok.generators = GeneratorEigenvalues::PerGenerator {
            values: vec![Some(big("5")), None],
            t0p2: None,
        };
        assert!(ok.validate().is_ok());
        assert!(ok.top_synthesized());
        let mut odd = ok.clone();
        odd.k = 7;
        assert!(odd.validate().is_err());
    }
}
