//! Numerical roots of palindromic polynomials.
//!
//! Coefficient slices are stored lowest degree first. A palindromic
//! polynomial of degree `2m` is reduced to a degree-`m` polynomial in
//! `y = x + 1/x`, solved by Aberth-Ehrlich iteration (closed form up to
//! degree 2), and lifted back through `z^2 - y z + 1 = 0`.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::eliminator::SatakeTuple;
use crate::error::{Result, SatakeError};
use crate::polycore::Rational;

/// Tolerances shared by the numerical stages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Stopping threshold for root corrections.
    pub root: f64,
    /// Backward-error bound a root must satisfy to be certified.
    pub certify: f64,
    /// Distance below which roots count as one cluster, and the slack for
    /// matching inverse pairs.
    pub cluster: f64,
    /// Comparison against printed four-decimal tables.
    pub table: f64,
    /// Maximum disagreement between independent solution paths.
    pub paths: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root: 1e-13,
            certify: 1e-10,
            cluster: 1e-6,
            table: 5e-4,
            paths: 1e-8,
        }
    }
}

const MAX_ITERATIONS: usize = 500;
const POLISH_STEPS: usize = 3;
/// Fixed rotation of the starting circle, in radians (golden-ratio based,
/// so no starting point lands on a symmetry axis of real polynomials).
const START_ANGLE: f64 = 0.618_033_988_749_894_8;

/// Palindromic test: exact for rationals.
pub fn is_palindromic_exact(a: &[Rational]) -> bool {
    a.len() % 2 == 1 && a.iter().eq(a.iter().rev())
}

/// Palindromic test for floating coefficients, relative to the largest one.
pub fn is_palindromic(a: &[Complex64], rel_tol: f64) -> bool {
    let scale = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
    a.len() % 2 == 1
        && a.iter()
            .zip(a.iter().rev())
            .all(|(x, y)| (x - y).norm() <= rel_tol * scale.max(f64::MIN_POSITIVE))
}

/// `Q` with `Q(x + 1/x) = P(x) / x^m`, built from `D_i(y) = x^i + x^-i`:
/// `D_0 = 2`, `D_1 = y`, `D_{i+1} = y D_i - D_{i-1}`.
fn reduce_core<T>(a: &[T]) -> Vec<T>
where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let m = (a.len() - 1) / 2;
    let two = T::one() + T::one();
    let mut q = vec![T::zero(); m + 1];
    q[0] = a[m].clone();
    let mut prev: Vec<T> = vec![two];
    let mut cur: Vec<T> = vec![T::zero(), T::one()];
    for i in 1..=m {
        for (slot, d) in q.iter_mut().zip(&cur) {
            *slot = slot.clone() + a[m + i].clone() * d.clone();
        }
        // D_{i+1} = y D_i - D_{i-1}
        let mut next = vec![T::zero(); cur.len() + 1];
        for (k, d) in cur.iter().enumerate() {
            next[k + 1] = next[k + 1].clone() + d.clone();
        }
        for (k, d) in prev.iter().enumerate() {
            next[k] = next[k].clone() - d.clone();
        }
        prev = std::mem::replace(&mut cur, next);
    }
    q
}

pub fn palindromic_reduce_exact(a: &[Rational]) -> Result<Vec<Rational>> {
    if !is_palindromic_exact(a) {
        return Err(SatakeError::Domain(
            "polynomial is not palindromic of even degree".into(),
        ));
    }
    Ok(reduce_core(a))
}

pub fn palindromic_reduce(a: &[Complex64]) -> Result<Vec<Complex64>> {
    if !is_palindromic(a, 1e-12) {
        return Err(SatakeError::Domain(
            "polynomial is not palindromic of even degree".into(),
        ));
    }
    Ok(reduce_core(a))
}

fn horner(a: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for c in a.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

pub fn eval(a: &[Complex64], z: Complex64) -> Complex64 {
    horner(a, z).0
}

/// `sum |a_k| |z|^k`, the scale against which `|P(z)|` is judged.
fn magnitude_bound(a: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    a.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

/// Relative backward error `|P(z)| / (sum |a_i| max(1, |z|)^deg)`.
pub fn certification_ratio(a: &[Complex64], z: Complex64) -> f64 {
    let deg = a.len().saturating_sub(1) as i32;
    let scale: f64 = a.iter().map(|c| c.norm()).sum::<f64>() * z.norm().max(1.0).powi(deg);
    if scale == 0.0 {
        return 0.0;
    }
    eval(a, z).norm() / scale
}

fn quadratic_roots(c: Complex64, b: Complex64, a: Complex64) -> [Complex64; 2] {
    // a z^2 + b z + c, avoiding cancellation in -b +- s
    let s = (b * b - 4.0 * a * c).sqrt();
    let s = if (b.conj() * s).re >= 0.0 { s } else { -s };
    let q = -(b + s) / 2.0;
    if q.norm() == 0.0 {
        return [Complex64::zero(), Complex64::zero()];
    }
    [q / a, c / q]
}

/// All roots of `sum a_k z^k`, as a deterministic function of the input.
pub fn all_roots(a: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    let mut a: Vec<Complex64> = a.to_vec();
    while a.last().is_some_and(|c| c.norm() == 0.0) {
        a.pop();
    }
    if a.len() < 2 {
        return Err(SatakeError::Domain("root finding needs degree at least 1".into()));
    }
    let mut zeros = 0;
    while a[0].norm() == 0.0 {
        a.remove(0);
        zeros += 1;
    }
    let mut roots = vec![Complex64::zero(); zeros];
    let d = a.len() - 1;
    let lead = a[d];
    let monic: Vec<Complex64> = a.iter().map(|c| c / lead).collect();
    match d {
        0 => {}
        1 => roots.push(-monic[0]),
        2 => roots.extend(quadratic_roots(monic[0], monic[1], monic[2])),
        _ => roots.extend(aberth(&monic, tol)?),
    }
    Ok(roots)
}

fn aberth(monic: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    let d = monic.len() - 1;
    // Every root lies in |z| <= 2R.
    let radius = (0..d)
        .map(|k| monic[k].norm().powf(1.0 / (d - k) as f64))
        .fold(0.0, f64::max);
    // Work in w = z / R so all roots have modulus at most 2.
    let scaled: Vec<Complex64> = monic
        .iter()
        .enumerate()
        .map(|(k, c)| c / radius.powi((d - k) as i32))
        .collect();
    let mut w: Vec<Complex64> = (0..d)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + START_ANGLE;
            Complex64::from_polar(1.0, theta)
        })
        .collect();
    let eps = f64::EPSILON;
    let mut max_corr = f64::INFINITY;
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        max_corr = 0.0f64;
        let mut all_small = true;
        for i in 0..d {
            let (p, dp) = horner(&scaled, w[i]);
            if p.norm() <= 4.0 * eps * magnitude_bound(&scaled, w[i]) {
                continue;
            }
            all_small = false;
            let ratio = p / dp;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| Complex64::one() / (w[i] - w[j]))
                .sum();
            let corr = ratio / (Complex64::one() - ratio * repulsion);
            if corr.is_finite() {
                w[i] -= corr;
                max_corr = max_corr.max(corr.norm() / w[i].norm().max(1.0));
            }
        }
        if all_small || max_corr < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SatakeError::RootFinder {
            iterations: MAX_ITERATIONS,
            max_correction: max_corr,
        });
    }
    for wi in w.iter_mut() {
        for _ in 0..POLISH_STEPS {
            let (p, dp) = horner(&scaled, *wi);
            if dp.norm() == 0.0 {
                break;
            }
            let cand = *wi - p / dp;
            if eval(&scaled, cand).norm() < p.norm() {
                *wi = cand;
            } else {
                break;
            }
        }
    }
    Ok(w.into_iter().map(|x| x * radius).collect())
}

/// The two solutions of `z^2 - y z + 1 = 0`, larger-modulus one first, the
/// second obtained as its inverse.
pub fn lift_roots(y: Complex64) -> (Complex64, Complex64) {
    let s = (y * y - 4.0).sqrt();
    let s = if (y.conj() * s).re >= 0.0 { s } else { -s };
    let z1 = (y + s) / 2.0;
    (z1, z1.inv())
}

/// Roots of a polynomial grouped into inverse pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// Index pairs `(i, j)` with `roots[i] * roots[j] ~ 1`.
    pub pairs: Vec<(usize, usize)>,
    /// Number of roots (itself included) within `cluster_tol` of each root.
    pub multiplicity: Vec<usize>,
    pub cluster_tol: f64,
}

impl RootSet {
    fn new(roots: Vec<Complex64>, pairs: Vec<(usize, usize)>, cluster_tol: f64) -> Self {
        let multiplicity = roots
            .iter()
            .map(|z| roots.iter().filter(|w| (*w - z).norm() <= cluster_tol).count())
            .collect();
        RootSet {
            roots,
            pairs,
            multiplicity,
            cluster_tol,
        }
    }

    /// One root per inverse pair, the first of each pair.
    pub fn representatives(&self) -> Vec<Complex64> {
        self.pairs.iter().map(|(i, _)| self.roots[*i]).collect()
    }

    pub fn has_clusters(&self) -> bool {
        self.multiplicity.iter().any(|m| *m > 1)
    }
}

/// Greedy matching of each root to the unmatched root closest to its
/// inverse.
pub fn inverse_pairing(roots: &[Complex64], tol: f64) -> Result<RootSet> {
    if !roots.len().is_multiple_of(2) {
        return Err(SatakeError::Pairing(format!(
            "cannot pair an odd number ({}) of roots",
            roots.len()
        )));
    }
    let mut used = vec![false; roots.len()];
    let mut pairs = Vec::with_capacity(roots.len() / 2);
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let target = roots[i].inv();
        let best = (0..roots.len())
            .filter(|&j| !used[j])
            .map(|j| (j, (roots[j] - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((j, err)) if err <= tol * target.norm().max(1.0) => {
                used[j] = true;
                pairs.push((i, j));
            }
            Some((_, err)) => {
                return Err(SatakeError::Pairing(format!(
                    "root {} has no inverse partner (closest is {err:e} away)",
                    roots[i]
                )))
            }
            None => unreachable!("even count leaves a partner candidate"),
        }
    }
    Ok(RootSet::new(roots.to_vec(), pairs, tol))
}

/// Roots of a palindromic polynomial through the half-degree reduction,
/// with inverse pairs known by construction.
pub fn palindromic_roots(a: &[Complex64], tol: &Tolerances) -> Result<RootSet> {
    let q = palindromic_reduce(a)?;
    let ys = all_roots(&q, tol.root)?;
    let mut roots = Vec::with_capacity(2 * ys.len());
    let mut pairs = Vec::with_capacity(ys.len());
    for y in ys {
        let (z1, z2) = lift_roots(y);
        pairs.push((roots.len(), roots.len() + 1));
        roots.push(z1);
        roots.push(z2);
    }
    for z in &roots {
        let ratio = certification_ratio(a, *z);
        if !(ratio < tol.certify) {
            return Err(SatakeError::RootFinder {
                iterations: 0,
                max_correction: ratio,
            });
        }
    }
    Ok(RootSet::new(roots, pairs, tol.cluster))
}

/// One-sided certificate that a real palindromic polynomial of degree `2m`
/// has a unimodular root pair: some `k < m` with
/// `|a_k| >= |a_m| cos(pi / (floor(m / (m - k)) + 2))`.
pub fn km_unimodular_test(a: &[f64]) -> bool {
    if a.len().is_multiple_of(2) || a.len() < 3 {
        return false;
    }
    let m = (a.len() - 1) / 2;
    let mid = a[m].abs();
    (0..m).any(|k| {
        let q = (m / (m - k)) as f64;
        // a few ulps of slack so exact equality survives rounding of cos
        a[k].abs() >= mid * (std::f64::consts::PI / (q + 2.0)).cos() * (1.0 - 8.0 * f64::EPSILON)
    })
}

/// Outcome of the unimodularity check on `a1..an`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    Unimodular,
    Violated { max_deviation: f64 },
    Uncertified,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Unimodular => "unimodular",
            Verdict::Violated { .. } => "violated",
            Verdict::Uncertified => "uncertified",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RpReport {
    pub verdict: Verdict,
    /// `||a_i| - 1|` for `i = 1..n`.
    pub deviations: Vec<f64>,
    /// Genus 2 only: `g_i = a_i + 1/a_i` and whether `|g_i| < 2`.
    pub gammas: Option<Vec<(Complex64, bool)>>,
}

/// Ramanujan-Petersson check: every `|a_i|` within `tol` of 1. Uncertified
/// tuples get no verdict, though deviations are still reported.
pub fn rp_verdict(t: &SatakeTuple, tol: f64) -> RpReport {
    let deviations: Vec<f64> = t.moduli().iter().map(|m| (m - 1.0).abs()).collect();
    let worst = deviations.iter().copied().fold(0.0, f64::max);
    let verdict = if !t.certified || deviations.iter().any(|d| !d.is_finite()) {
        Verdict::Uncertified
    } else if worst < tol {
        Verdict::Unimodular
    } else {
        Verdict::Violated { max_deviation: worst }
    };
    let gammas = (t.genus() == 2).then(|| {
        t.alpha[1..]
            .iter()
            .map(|a| {
                let g = a + a.inv();
                (g, g.norm() < 2.0)
            })
            .collect()
    });
    RpReport {
        verdict,
        deviations,
        gammas,
    }
}

/// Complex number with exact rational parts.
#[derive(Debug, Clone, PartialEq)]
struct ExactComplex {
    re: Rational,
    im: Rational,
}

impl ExactComplex {
    fn from_f64(z: Complex64) -> Option<Self> {
        Some(ExactComplex {
            re: Rational::from_float(z.re)?,
            im: Rational::from_float(z.im)?,
        })
    }

    fn from_rational(r: &Rational) -> Self {
        ExactComplex {
            re: r.clone(),
            im: Rational::zero(),
        }
    }

    fn add(&self, o: &Self) -> Self {
        ExactComplex {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn mul(&self, o: &Self) -> Self {
        ExactComplex {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn div(&self, o: &Self) -> Option<Self> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        Some(ExactComplex {
            re: (&self.re * &o.re + &self.im * &o.im) / &den,
            im: (&self.im * &o.re - &self.re * &o.im) / &den,
        })
    }

    fn round_bits(&self, bits: u32) -> Self {
        let scale = Rational::from_integer(BigInt::one() << bits);
        let r = |x: &Rational| (x * &scale).round() / &scale;
        ExactComplex {
            re: r(&self.re),
            im: r(&self.im),
        }
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn abs_upper(&self) -> Rational {
        self.re.abs() + self.im.abs()
    }
}

/// Newton polishing of a root of an exact rational polynomial, carried out
/// in rational complex arithmetic rounded to `bits` fractional bits per
/// step. Returns the polished root rounded back to `f64`.
pub fn polish_extended(a: &[Rational], z: Complex64, bits: u32, steps: usize) -> Complex64 {
    let Some(mut x) = ExactComplex::from_f64(z) else {
        return z;
    };
    let coeffs: Vec<ExactComplex> = a.iter().map(ExactComplex::from_rational).collect();
    let zero = ExactComplex::from_rational(&Rational::zero());
    let threshold = Rational::new(BigInt::one(), BigInt::one() << bits);
    for _ in 0..steps {
        let mut p = zero.clone();
        let mut dp = zero.clone();
        for c in coeffs.iter().rev() {
            dp = dp.mul(&x).add(&p);
            p = p.mul(&x).add(c);
        }
        let Some(step) = p.div(&dp) else { break };
        let done = step.abs_upper() < threshold;
        x = ExactComplex {
            re: &x.re - &step.re,
            im: &x.im - &step.im,
        }
        .round_bits(bits);
        if done {
            break;
        }
    }
    x.to_complex()
}

/// Significand bits requested through `SATAKE_PRECISION_BITS`, if any.
pub fn precision_bits_from_env() -> Option<u32> {
    std::env::var("SATAKE_PRECISION_BITS")
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .filter(|b| *b > 53)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{rat, ratio};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|x| c(*x, 0.0)).collect()
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn reduce_symbolic_quartic() {
        // x^4 - c2 x^3 + (2 + c1) x^2 - c2 x + 1 with c1 = 3, c2 = 5
        let p = vec![rat(1), rat(-5), rat(5), rat(-5), rat(1)];
        assert_eq!(palindromic_reduce_exact(&p).unwrap(), vec![rat(3), rat(-5), rat(1)]);
    }

    #[test]
    fn reduce_x_squared_plus_one() {
        let p = vec![rat(1), rat(0), rat(1)];
        assert_eq!(palindromic_reduce_exact(&p).unwrap(), vec![rat(0), rat(1)]);
    }

    #[test]
    fn reduce_rejects_non_palindromic() {
        assert!(palindromic_reduce_exact(&[rat(1), rat(2), rat(3)]).is_err());
        assert!(palindromic_reduce_exact(&[rat(1), rat(1)]).is_err());
    }

    #[test]
    fn reduce_planted_pairs() {
        // (x^2 - 3x + 1)(x^2 - (10/3) x + 1): pairs with y = 3 and y = 10/3
        let p = vec![rat(1), ratio(-19, 3), rat(12), ratio(-19, 3), rat(1)];
        let q = palindromic_reduce_exact(&p).unwrap();
        let eval_q = |y: Rational| q.iter().rev().fold(rat(0), |acc, c| acc * &y + c);
        assert_eq!(eval_q(rat(3)), rat(0));
        assert_eq!(eval_q(ratio(10, 3)), rat(0));
    }

    #[test]
    fn quadratic_roots_example() {
        let r = sorted(all_roots(&real(&[6.0, -5.0, 1.0]), 1e-13).unwrap());
        assert!((r[0] - c(2.0, 0.0)).norm() < 1e-14);
        assert!((r[1] - c(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn aberth_recovers_planted_roots() {
        let planted = [c(1.5, 0.5), c(-0.25, 2.0), c(3.0, 0.0), c(-1.0, -1.0), c(0.1, 0.0)];
        let mut poly = vec![c(1.0, 0.0)];
        for r in planted {
            let mut next = vec![Complex64::zero(); poly.len() + 1];
            for (k, a) in poly.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            poly = next;
        }
        let found = all_roots(&poly, 1e-13).unwrap();
        for r in planted {
            assert!(found.iter().any(|f| (f - r).norm() < 1e-10), "missing {r}");
        }
    }

    #[test]
    fn aberth_handles_double_roots() {
        // (x - 1)^2 (x + 2)
        let found = all_roots(&real(&[2.0, -3.0, 0.0, 1.0]), 1e-13).unwrap();
        assert_eq!(found.len(), 3);
        assert_eq!(found.iter().filter(|z| (*z - c(1.0, 0.0)).norm() < 1e-6).count(), 2);
    }

    #[test]
    fn all_roots_is_deterministic() {
        let p = real(&[1.0, -2.5, 3.0, 0.7, -1.2, 1.0]);
        let a = all_roots(&p, 1e-13).unwrap();
        let b = all_roots(&p, 1e-13).unwrap();
        assert_eq!(
            a.iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect::<Vec<_>>(),
            b.iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect::<Vec<_>>()
        );
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift_roots(c(2.0, 0.0)), (c(1.0, 0.0), c(1.0, 0.0)));
        let (a, b) = lift_roots(c(0.0, 0.0));
        assert!((a - c(0.0, 1.0)).norm() < 1e-15 && (b - c(0.0, -1.0)).norm() < 1e-15);
        let (a, b) = lift_roots(c(3.0, 0.0));
        let s5 = 5f64.sqrt();
        assert!((a.re - (3.0 + s5) / 2.0).abs() < 1e-14);
        assert!((b.re - (3.0 - s5) / 2.0).abs() < 1e-14);
        assert!(((a * b) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pairing_example() {
        let roots = vec![c(2.0, 0.0), c(0.0, 1.0), c(0.5, 0.0), c(0.0, -1.0)];
        let set = inverse_pairing(&roots, 1e-6).unwrap();
        assert_eq!(set.pairs, vec![(0, 2), (1, 3)]);
        assert!(!set.has_clusters());
        assert!(inverse_pairing(&[c(2.0, 0.0), c(3.0, 0.0)], 1e-6).is_err());
        assert!(inverse_pairing(&[c(2.0, 0.0)], 1e-6).is_err());
    }

    #[test]
    fn pairing_flags_double_pairs() {
        let z = c(0.6, 0.8);
        let set = inverse_pairing(&[z, z, z.inv(), z.inv()], 1e-6).unwrap();
        assert_eq!(set.pairs.len(), 2);
        assert!(set.multiplicity.iter().all(|m| *m == 2));
    }

    #[test]
    fn km_examples() {
        assert!(km_unimodular_test(&[1.0, 1.0, 1.0]));
        assert!(!km_unimodular_test(&[1.0, -3.0, 1.0]));
        assert!(km_unimodular_test(&[1.0, 2.0, 1.0]));
    }

    #[test]
    fn palindromic_roots_come_in_pairs() {
        let p = real(&[1.0, -19.0 / 3.0, 12.0, -19.0 / 3.0, 1.0]);
        let set = palindromic_roots(&p, &Tolerances::default()).unwrap();
        for (i, j) in &set.pairs {
            assert!((set.roots[*i] * set.roots[*j] - c(1.0, 0.0)).norm() < 1e-12);
        }
        let reps = sorted(set.representatives());
        assert!((reps[0].re - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((reps[1].re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn extended_polish_refines_roots() {
        // x^2 - 2: start from a crude estimate of sqrt(2)
        let a = vec![rat(-2), rat(0), rat(1)];
        let z = polish_extended(&a, c(1.4, 0.0), 200, 20);
        assert_eq!(z.re, 2f64.sqrt());
        assert_eq!(z.im, 0.0);
    }

    fn tuple(alpha: Vec<Complex64>, certified: bool) -> SatakeTuple {
        let n = alpha.len() - 1;
        SatakeTuple {
            alpha,
            residual: 0.0,
            certified,
            multiplicity: vec![false; n],
            provenance: crate::eliminator::Provenance::HatRecursion,
        }
    }

    #[test]
    fn all_ones_is_unimodular() {
        let r = rp_verdict(&tuple(vec![c(1.0, 0.0); 3], true), 1e-6);
        assert_eq!(r.verdict, Verdict::Unimodular);
        assert_eq!(r.deviations, vec![0.0, 0.0]);
        // a = 1 sits on the boundary |g| = 2
        assert_eq!(r.gammas.unwrap(), vec![(c(2.0, 0.0), false); 2]);
    }

    #[test]
    fn ikeda_type_moduli_violate() {
        let alpha = vec![
            c(1.0, 0.0),
            c(-0.1875, 0.6817),
            c(-0.1875, -0.6817),
            c(-0.75, 2.7271),
            c(-0.75, -2.7271),
        ];
        let r = rp_verdict(&tuple(alpha, true), 1e-6);
        match r.verdict {
            Verdict::Violated { max_deviation } => assert!((max_deviation - 1.8284).abs() < 1e-3),
            other => panic!("unexpected verdict {other:?}"),
        }
        assert!((r.deviations[0] - 0.2930).abs() < 1e-3);
        assert!(r.gammas.is_none());
    }

    #[test]
    fn uncertified_tuples_get_no_verdict() {
        let r = rp_verdict(&tuple(vec![c(1.0, 0.0), c(0.6, 0.8)], false), 1e-6);
        assert_eq!(r.verdict, Verdict::Uncertified);
        assert!(r.deviations[0] < 1e-12);
    }

    #[test]
    fn unimodular_genus_two_has_small_gammas() {
        let a1 = Complex64::from_polar(1.0, 0.87);
        let a2 = Complex64::from_polar(1.0, 1.79);
        let r = rp_verdict(&tuple(vec![c(3.0, 0.0), a1, a2], true), 1e-9);
        assert_eq!(r.verdict, Verdict::Unimodular);
        assert!(r
            .gammas
            .unwrap()
            .iter()
            .all(|(g, inside)| *inside && g.im.abs() < 1e-12));
    }
}
