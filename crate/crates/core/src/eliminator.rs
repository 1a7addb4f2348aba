//! Elimination of the reduced system and recovery of Satake parameters.
//!
//! The S-polynomial chain collapses `f_1..f_n` to a polynomial
//! `x1...x(n-1) P_n(xn)` with `P_n` palindromic of degree `2n`. A root `z`
//! of `P_n` is one parameter; substituting it produces a system of the same
//! shape in one variable fewer, whose constants come from `hat_reduce`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Result, SatakeError};
use crate::hecke::{build_system, EigenvalueRecord, GeneratorEigenvalues, ReducedSystem};
use crate::krieg::{spherical_image, Generator, OmegaMatrix};
use crate::polycore::{s_polynomial, Coefficient, ExponentVector, MultiPoly, ParamPoly, Rational};
use crate::rootfind::{
    all_roots, inverse_pairing, lift_roots, palindromic_reduce_exact, polish_extended, RootSet, Tolerances,
};

/// Output of the S-polynomial chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Elimination<K: Coefficient> {
    /// `f_1, ..., f_n` followed by every generated polynomial.
    pub chain: Vec<MultiPoly<K>>,
    /// Last polynomial of the chain.
    pub g: MultiPoly<K>,
    /// `g / (x1...x(n-1))` as a polynomial in `xn`, lowest degree first.
    pub p: Vec<K>,
}

/// Runs the S-polynomial chain
/// `f_{n+1} = S(f1, f2)`, `f_{n+2} = S(f2, f_{n+1})`, then for each
/// `j = 3..=n`, `j` more steps `f_{next} = S(f_{last}, f_j)`.
pub fn algorithm_a<K: Coefficient>(sys: &ReducedSystem<K>) -> Result<Elimination<K>> {
    let n = sys.n;
    let mut f = sys.polys.clone();
    if f.len() != n || n == 0 {
        return Err(SatakeError::Structural(format!(
            "system of genus {n} has {} polynomials",
            f.len()
        )));
    }
    if n >= 2 {
        let next = s_polynomial(&f[0], &f[1])?;
        f.push(next);
        let next = s_polynomial(&f[1], &f[n])?;
        f.push(next);
        for j in 3..=n {
            for _ in 0..j {
                let next = s_polynomial(f.last().expect("chain is non-empty"), &f[j - 1])?;
                f.push(next);
            }
        }
    }
    let g = f.last().expect("chain is non-empty").clone();
    let mut expected = vec![1u32; n];
    expected[n - 1] = 2 * n as u32;
    if g.degree_vector() != expected {
        return Err(SatakeError::Elimination(format!(
            "final polynomial has degree {:?}, expected {:?}",
            g.degree_vector(),
            expected
        )));
    }
    let mut divisor = vec![1u32; n];
    divisor[n - 1] = 0;
    let reduced = g
        .div_monomial(&ExponentVector::new(divisor))
        .ok_or_else(|| SatakeError::Elimination("final polynomial is not divisible by x1...x(n-1)".into()))?;
    let p = reduced
        .to_univariate(n - 1)
        .map_err(|_| SatakeError::Elimination("quotient still involves x1...x(n-1)".into()))?;
    if p.len() != 2 * n + 1 || !p.iter().eq(p.iter().rev()) {
        return Err(SatakeError::Elimination("eliminant is not palindromic".into()));
    }
    Ok(Elimination { chain: f, g, p })
}

const CACHED_LEVELS: usize = 8;

/// `P_m` over symbolic constants `c1..cm`, computed once per `m`.
pub fn symbolic_pn(m: usize) -> Result<Vec<ParamPoly>> {
    static CACHE: [OnceLock<Vec<ParamPoly>>; CACHED_LEVELS] = [const { OnceLock::new() }; CACHED_LEVELS];
    let compute = || -> Result<Vec<ParamPoly>> {
        let cs: Vec<ParamPoly> = (1..=m).map(ParamPoly::param).collect();
        Ok(algorithm_a(&build_system(&cs, m)?)?.p)
    };
    match CACHE.get(m) {
        Some(cell) => {
            if let Some(p) = cell.get() {
                return Ok(p.clone());
            }
            let p = compute()?;
            Ok(cell.get_or_init(|| p).clone())
        }
        None => compute(),
    }
}

/// Constants `c'_1..c'_{n-1}` of the system left after fixing `xn = z`:
/// `d_0 = z c_1`, `d_i = z (z^2+1)^i c_{i+1} - z d_{i-1}`,
/// `c'_{i+1} = d_i / (z^2+1)^(i+1)`.
pub fn hat_reduce(z: Complex64, constants: &[Complex64], guard: f64) -> Result<Vec<Complex64>> {
    let n = constants.len();
    if n < 2 {
        return Err(SatakeError::Structural(
            "hat reduction needs at least two constants".into(),
        ));
    }
    let s = z * z + 1.0;
    if s.norm() < guard {
        return Err(SatakeError::Degenerate(format!(
            "root {z} is too close to +-i for back-substitution"
        )));
    }
    let mut out = Vec::with_capacity(n - 1);
    let mut d = z * constants[0];
    let mut s_pow = s;
    out.push(d / s_pow);
    for c in &constants[1..n - 1] {
        d = z * s_pow * c - z * d;
        s_pow *= s;
        out.push(d / s_pow);
    }
    Ok(out)
}

/// Which route produced a tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Root of `P_n`, then back-substitution level by level.
    HatRecursion,
    /// One root from each inverse pair of `P_n`.
    PairingShortcut,
    /// Quadratic in `y = x + 1/x` (genus 2 only).
    Genus2ClosedForm,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::HatRecursion => "hat-recursion",
            Provenance::PairingShortcut => "pairing-shortcut",
            Provenance::Genus2ClosedForm => "genus2-closed-form",
        }
    }
}

/// Parameters `a1..an` from both solution paths.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSolution {
    pub alphas: Vec<Complex64>,
    pub provenance: Provenance,
    /// Result of the independent path (pairing shortcut when the primary
    /// is the hat recursion).
    pub cross_check: Vec<Complex64>,
    /// Largest distance between the two paths after canonicalization.
    pub path_gap: f64,
    /// Roots of `P_n`, grouped into inverse pairs.
    pub roots: RootSet,
    pub eliminant: Vec<Rational>,
}

fn to_complex(r: &Rational) -> Complex64 {
    Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
}

/// Roots of an exact palindromic polynomial via its half-degree reduction.
fn exact_palindromic_roots(p: &[Rational], tol: &Tolerances, bits: Option<u32>) -> Result<RootSet> {
    let q = palindromic_reduce_exact(p)?;
    let qc: Vec<Complex64> = q.iter().map(to_complex).collect();
    let mut ys = all_roots(&qc, tol.root)?;
    if let Some(bits) = bits {
        for y in ys.iter_mut() {
            *y = polish_extended(&q, *y, bits, 64);
        }
    }
    let mut roots = Vec::with_capacity(2 * ys.len());
    for y in ys {
        let (z1, z2) = lift_roots(y);
        roots.push(z1);
        roots.push(z2);
    }
    let pc: Vec<Complex64> = p.iter().map(to_complex).collect();
    for z in &roots {
        let ratio = crate::rootfind::certification_ratio(&pc, *z);
        if !(ratio < tol.certify) {
            return Err(SatakeError::RootFinder {
                iterations: 0,
                max_correction: ratio,
            });
        }
    }
    let pairs = (0..roots.len() / 2).map(|i| (2 * i, 2 * i + 1)).collect();
    let multiplicity = roots
        .iter()
        .map(|z| roots.iter().filter(|w| (*w - z).norm() <= tol.cluster).count())
        .collect();
    Ok(RootSet {
        roots,
        pairs,
        multiplicity,
        cluster_tol: tol.cluster,
    })
}

fn best_pivot(set: &RootSet) -> Complex64 {
    set.representatives()
        .into_iter()
        .max_by(|a, b| (a * a + 1.0).norm().total_cmp(&(b * b + 1.0).norm()))
        .expect("root set is non-empty")
}

/// Back-substitution from complex constants down to genus 1. Returns
/// `a1..am`.
fn descend(constants: Vec<Complex64>, tol: &Tolerances) -> Result<Vec<Complex64>> {
    let m = constants.len();
    if m == 1 {
        return Ok(vec![lift_roots(constants[0]).0]);
    }
    let p: Vec<Complex64> = symbolic_pn(m)?.iter().map(|c| c.evaluate(&constants)).collect();
    let set = crate::rootfind::palindromic_roots(&p, tol)?;
    let z = best_pivot(&set);
    let reduced = hat_reduce(z, &constants, tol.cluster)?;
    let mut alphas = descend(reduced, tol)?;
    alphas.push(z);
    Ok(alphas)
}

fn pairing_shortcut(p: &[Rational], tol: &Tolerances) -> Result<Vec<Complex64>> {
    let pc: Vec<Complex64> = p.iter().map(to_complex).collect();
    let roots = all_roots(&pc, tol.root)?;
    Ok(inverse_pairing(&roots, tol.cluster)?.representatives())
}

/// Solves the reduced system through both paths and checks they agree.
pub fn solve_system(sys: &ReducedSystem, tol: &Tolerances) -> Result<SystemSolution> {
    let bits = crate::rootfind::precision_bits_from_env();
    let elim = algorithm_a(sys)?;
    let roots = exact_palindromic_roots(&elim.p, tol, bits)?;
    let shortcut = pairing_shortcut(&elim.p, tol)?;

    let z = best_pivot(&roots);
    let constants: Vec<Complex64> = sys.constants.iter().map(to_complex).collect();
    let primary = if sys.n == 1 {
        Ok(vec![z])
    } else {
        hat_reduce(z, &constants, tol.cluster).and_then(|reduced| {
            let mut alphas = descend(reduced, tol)?;
            alphas.push(z);
            Ok(alphas)
        })
    };
    let (alphas, provenance) = match primary {
        Ok(a) => (a, Provenance::HatRecursion),
        Err(SatakeError::Degenerate(_)) => (shortcut.clone(), Provenance::PairingShortcut),
        Err(e) => return Err(e),
    };
    let path_gap = orbit_distance(&alphas, &shortcut);
    if !(path_gap <= tol.paths.max(tol.cluster * cluster_slack(&roots))) {
        return Err(SatakeError::Solver(format!(
            "hat recursion and pairing shortcut differ by {path_gap:e}: {alphas:?} vs {shortcut:?}"
        )));
    }
    Ok(SystemSolution {
        alphas,
        provenance,
        cross_check: shortcut,
        path_gap,
        roots,
        eliminant: elim.p,
    })
}

/// Clustered roots are only determined to about the square root of the
/// working precision, so the agreement check is relaxed for them.
fn cluster_slack(roots: &RootSet) -> f64 {
    if roots.has_clusters() {
        1.0
    } else {
        0.0
    }
}

/// Every solution of the system, one per branch of the back-substitution
/// (`2^n n!` for generic constants). Intended for small `n`.
pub fn enumerate_solutions(sys: &ReducedSystem, tol: &Tolerances) -> Result<Vec<Vec<Complex64>>> {
    fn walk(
        constants: Vec<Complex64>,
        tol: &Tolerances,
        out: &mut Vec<Vec<Complex64>>,
        suffix: Vec<Complex64>,
    ) -> Result<()> {
        let m = constants.len();
        let roots = if m == 1 {
            let (a, b) = lift_roots(constants[0]);
            vec![a, b]
        } else {
            let p: Vec<Complex64> = symbolic_pn(m)?.iter().map(|c| c.evaluate(&constants)).collect();
            crate::rootfind::palindromic_roots(&p, tol)?.roots
        };
        for z in roots {
            let mut next_suffix = vec![z];
            next_suffix.extend(suffix.iter().copied());
            if m == 1 {
                out.push(next_suffix);
            } else {
                walk(hat_reduce(z, &constants, tol.cluster)?, tol, out, next_suffix)?;
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    let constants: Vec<Complex64> = sys.constants.iter().map(to_complex).collect();
    walk(constants, tol, &mut out, Vec::new())?;
    Ok(out)
}

/// Genus-2 shortcut: `y^2 - c2 y + c1 = 0`, then `z + 1/z = y`.
pub fn genus2_closed_form(c1: &Rational, c2: &Rational) -> Vec<Complex64> {
    let q = [to_complex(c1), -to_complex(c2), Complex64::new(1.0, 0.0)];
    let ys = all_roots(&q, 1e-15).expect("monic quadratic always has roots");
    ys.into_iter().map(|y| lift_roots(y).0).collect()
}

/// Representative of `{a, 1/a}`: non-negative imaginary part, modulus at
/// least one when the imaginary part is negligible.
fn pair_representative(a: Complex64, tie_tol: f64) -> (Complex64, bool) {
    let inv = a.inv();
    let flip = if a.im.abs() <= tie_tol * a.norm().max(1.0) {
        a.norm() < 1.0
    } else {
        a.im < 0.0
    };
    if flip {
        (inv, true)
    } else {
        (a, false)
    }
}

fn canonical_order(v: &mut [Complex64]) {
    v.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
}

/// Canonical representatives of `a1..an`, sorted.
pub fn canonical_alphas(alphas: &[Complex64], tie_tol: f64) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = alphas.iter().map(|a| pair_representative(*a, tie_tol).0).collect();
    canonical_order(&mut v);
    v
}

/// Distance between two parameter sets modulo inversion and reordering:
/// greedy matching of canonical representatives.
pub fn orbit_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let ca = canonical_alphas(a, 1e-12);
    let cb = canonical_alphas(b, 1e-12);
    let mut used = vec![false; cb.len()];
    let mut worst = 0.0f64;
    for x in &ca {
        let (j, d) = cb
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm() / x.norm().max(1.0)))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("equal lengths");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// How `a0` was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct Alpha0 {
    pub value: Complex64,
    /// Other candidates when the value is not determined by `T_0(p)`.
    pub alternatives: Vec<Complex64>,
    pub fallback: bool,
}

/// `a0 = lambda(T_0(p)) / prod(1 + a_i)`, or, when that product vanishes,
/// a square root of `k1 / prod a_i`.
pub fn recover_alpha0(lambda_t0p: &BigInt, alphas: &[Complex64], k1: Option<&Rational>) -> Result<Alpha0> {
    let lambda = lambda_t0p.to_f64().unwrap_or(f64::NAN);
    let prod: Complex64 = alphas.iter().map(|a| 1.0 + a).product();
    let scale: f64 = alphas.iter().map(|a| 1.0 + a.norm()).product();
    if prod.norm() > 1e-8 * scale {
        let value = Complex64::new(lambda, 0.0) / prod;
        if value.norm() == 0.0 {
            return Err(SatakeError::Degenerate("T_0(p) eigenvalue forces a0 = 0".into()));
        }
        return Ok(Alpha0 {
            value,
            alternatives: Vec::new(),
            fallback: false,
        });
    }
    let k1 = k1
        .ok_or_else(|| SatakeError::Degenerate("a parameter equals -1 and k1 is unknown; a0 is undetermined".into()))?;
    let prod_a: Complex64 = alphas.iter().product();
    let root = (to_complex(k1) / prod_a).sqrt();
    let candidates = [root, -root];
    let residual = |a0: &Complex64| (a0 * prod - lambda).norm();
    let (best, other) = if residual(&candidates[0]) <= residual(&candidates[1]) {
        (candidates[0], candidates[1])
    } else {
        (candidates[1], candidates[0])
    };
    let ambiguous = (residual(&best) - residual(&other)).abs() <= 1e-9 * (lambda.abs() + 1.0);
    Ok(Alpha0 {
        value: best,
        alternatives: if ambiguous { vec![other] } else { Vec::new() },
        fallback: true,
    })
}

/// A point of the Satake orbit in canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct SatakeTuple {
    /// `a0, a1, ..., an`.
    pub alpha: Vec<Complex64>,
    pub residual: f64,
    pub certified: bool,
    /// `true` for parameters that coincide with another one.
    pub multiplicity: Vec<bool>,
    pub provenance: Provenance,
}

impl SatakeTuple {
    pub fn genus(&self) -> usize {
        self.alpha.len() - 1
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.alpha[1..].iter().map(|a| a.norm()).collect()
    }
}

/// Canonical form of `(a0, a1, ..., an)`: every `a_i` replaced by the
/// representative of `{a_i, 1/a_i}` (with `a0 -> a0 a_i` for each
/// inversion), then `a1..an` sorted by decreasing real, then imaginary, part.
pub fn canonicalize(raw: &[Complex64], cluster_tol: f64, provenance: Provenance) -> Result<SatakeTuple> {
    if raw.len() < 2 {
        return Err(SatakeError::Structural("tuple needs a0 and at least one a_i".into()));
    }
    if raw.iter().any(|a| a.norm() == 0.0 || !a.is_finite()) {
        return Err(SatakeError::Domain(
            "Satake parameters must be finite and non-zero".into(),
        ));
    }
    let mut a0 = raw[0];
    let mut rest = Vec::with_capacity(raw.len() - 1);
    for a in &raw[1..] {
        let (rep, flipped) = pair_representative(*a, 1e-12);
        if flipped {
            a0 *= a;
        }
        rest.push(rep);
    }
    canonical_order(&mut rest);
    let multiplicity = rest
        .iter()
        .enumerate()
        .map(|(i, a)| {
            rest.iter()
                .enumerate()
                .any(|(j, b)| i != j && (a - b).norm() <= cluster_tol * a.norm().max(1.0))
        })
        .collect();
    let mut alpha = vec![a0];
    alpha.extend(rest);
    Ok(SatakeTuple {
        alpha,
        residual: f64::NAN,
        certified: false,
        multiplicity,
        provenance,
    })
}

fn relative_error(value: Complex64, target: f64, scale: f64) -> f64 {
    (value - target).norm() / target.abs().max(scale).max(f64::MIN_POSITIVE)
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Largest relative defect of the tuple against the system, `T_0(p)`, every
/// available `T_i(p^2)` eigenvalue and `k1`. Non-finite if anything cannot
/// be evaluated.
pub fn residual(t: &SatakeTuple, sys: &ReducedSystem, rec: &EigenvalueRecord, m: &OmegaMatrix) -> f64 {
    residual_inner(t, sys, rec, m).unwrap_or(f64::INFINITY)
}

fn residual_inner(t: &SatakeTuple, sys: &ReducedSystem, rec: &EigenvalueRecord, m: &OmegaMatrix) -> Result<f64> {
    let alphas = &t.alpha[1..];
    let mut worst = 0.0f64;
    for f in &sys.polys {
        let (v, s) = f.evaluate_scaled(alphas)?;
        worst = worst.max(if s == 0.0 { v.norm() } else { v.norm() / s });
    }
    let point = &t.alpha[..];
    let mut check = |poly: &MultiPoly, target: f64| -> Result<()> {
        let (v, s) = poly.evaluate_scaled(point)?;
        worst = worst.max(relative_error(v, target, s));
        Ok(())
    };
    check(&spherical_image(Generator::T0p, m)?, big_to_f64(&rec.lambda_t0p))?;
    match &rec.generators {
        GeneratorEigenvalues::PerGenerator { values, t0p2 } => {
            let top = crate::hecke::scalar_eigenvalue(rec.n, rec.k, rec.p)?;
            for (idx, v) in values.iter().enumerate() {
                let target = match v {
                    Some(x) => big_to_f64(x),
                    None => top.to_f64().unwrap_or(f64::NAN),
                };
                check(&spherical_image(Generator::Tp2(idx + 1), m)?, target)?;
            }
            if let Some(x) = t0p2 {
                check(&spherical_image(Generator::Tp2(0), m)?, big_to_f64(x))?;
            }
        }
        GeneratorEigenvalues::Aggregate { tp2 } => {
            let mut total = MultiPoly::zero(rec.n + 1);
            for i in 0..=rec.n {
                total = &total + &spherical_image(Generator::Tp2(i), m)?;
            }
            check(&total, big_to_f64(tp2))?;
        }
    }
    if let Some(k1) = &sys.k1 {
        let prod: Complex64 = t.alpha[0] * t.alpha[0] * alphas.iter().product::<Complex64>();
        let target = k1.to_f64().unwrap_or(f64::NAN);
        worst = worst.max((prod - target).norm() / target.abs());
    }
    Ok(worst)
}

/// Residual of `f_1..f_n` alone, for systems without eigenvalue data.
pub fn system_residual(sys: &ReducedSystem, alphas: &[Complex64]) -> f64 {
    sys.polys
        .iter()
        .map(|f| match f.evaluate_scaled(alphas) {
            Ok((v, s)) if s > 0.0 => v.norm() / s,
            Ok((v, _)) => v.norm(),
            Err(_) => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}
