//! Test oracles shared by the integration suites. Everything here is written
//! independently of the library's internals: exact Gaussian-rational
//! evaluation, planted unimodular tuples, random constant generators.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use satake_core::eliminator::{canonicalize, orbit_distance, solve_system, system_residual, Provenance};
use satake_core::hecke::{build_system, k_constants_from, last_k_from_identity, reduced_constants};
use satake_core::krieg::{omega_matrix, spherical_image, Generator, MatrixConvention};
use satake_core::polycore::{rat, ratio, MultiPoly, Rational};
use satake_core::rootfind::Tolerances;

/// `re + im i` with exact rational parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Gq {
    pub re: Rational,
    pub im: Rational,
}

impl Gq {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gq { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Gq {
            re,
            im: Rational::zero(),
        }
    }

    pub fn one() -> Self {
        Gq::real(Rational::one())
    }

    pub fn add(&self, o: &Gq) -> Gq {
        Gq::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn mul(&self, o: &Gq) -> Gq {
        Gq::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    pub fn conj(&self) -> Gq {
        Gq::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn pow(&self, e: u32) -> Gq {
        (0..e).fold(Gq::one(), |acc, _| acc.mul(self))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap(), self.im.to_f64().unwrap())
    }
}

/// Term-by-term evaluation with exact arithmetic.
pub fn eval_exact(poly: &MultiPoly, point: &[Gq]) -> Gq {
    let mut acc = Gq::real(Rational::zero());
    for (e, c) in poly.terms() {
        let mut term = Gq::real(c.clone());
        for (x, k) in point.iter().zip(e.iter()) {
            term = term.mul(&x.pow(*k));
        }
        acc = acc.add(&term);
    }
    acc
}

/// `r = (a + b i)^2 / (a^2 + b^2)` lies on the unit circle and is rational;
/// the planted parameter is `r^2`, so its square root `r` is rational too.
pub fn planted_root(a: i64, b: i64) -> Gq {
    let d = rat(a * a + b * b);
    Gq::new(rat(a * a - b * b) / &d, rat(2 * a * b) / d)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Rationals with small numerators and denominators.
pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=7).prop_map(|(n, d)| ratio(n, d))
}

/// Non-zero rationals, for constants that should be generic.
pub fn generic_rational() -> impl Strategy<Value = Rational> {
    (1i64..=40, 1i64..=9, any::<bool>()).prop_map(|(n, d, neg)| ratio(if neg { -n } else { n }, d))
}

pub fn constants(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(small_rational(), n)
}

/// A planted genus-`n` case: `(a, b)` seeds for each parameter, a prime and
/// a positive scale `s` with `a0 = s / prod(r_i)`.
#[derive(Clone, Debug)]
pub struct Planted {
    pub seeds: Vec<(i64, i64)>,
    pub p: u64,
    pub s: i64,
}

pub fn planted(max_n: usize) -> impl Strategy<Value = Planted> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                prop::collection::vec((1i64..=9, -9i64..=9), n),
                prop::sample::select(vec![2u64, 3, 5, 7]),
                1i64..=40,
            )
        })
        .prop_map(|(seeds, p, s)| Planted { seeds, p, s })
        .prop_filter("well separated, away from +-1 and +-i", well_separated)
}

fn well_separated(pl: &Planted) -> bool {
    let alphas: Vec<Complex64> = pl
        .seeds
        .iter()
        .map(|&(a, b)| planted_root(a, b).pow(2).to_complex())
        .collect();
    let special = [1.0, -1.0].map(|x| Complex64::new(x, 0.0));
    let away = alphas
        .iter()
        .all(|a| special.iter().all(|s| (a - s).norm() > 0.05) && (a * a + 1.0).norm() > 0.05);
    let apart = alphas.iter().enumerate().all(|(i, a)| {
        alphas[i + 1..]
            .iter()
            .all(|b| (a - b).norm() > 0.05 && (a - b.inv()).norm() > 0.05)
    });
    away && apart
}

pub struct RoundTrip {
    /// Planted `(a0, a1..an)`.
    pub planted: Vec<Complex64>,
    /// Recovered `(a0, a1..an)`.
    pub recovered: Vec<Complex64>,
    /// Largest relative difference between canonical forms.
    pub tuple_error: f64,
    /// Largest relative defect of the recovered tuple against every
    /// regenerated eigenvalue and the reduced system.
    pub residual: f64,
    /// `k1` came back as exactly `s^2`.
    pub k1_exact: bool,
    /// Every regenerated eigenvalue was exactly real.
    pub real_eigenvalues: bool,
}

fn rel(value: Complex64, target: f64) -> f64 {
    (value - target).norm() / target.abs().max(1.0)
}

/// Plants a tuple, regenerates `T_0(p)` and `T_i(p^2)` eigenvalues exactly,
/// then recovers the tuple through constants, system and solver.
pub fn round_trip(pl: &Planted) -> Result<RoundTrip, String> {
    let n = pl.seeds.len();
    let roots: Vec<Gq> = pl.seeds.iter().map(|&(a, b)| planted_root(a, b)).collect();
    let alphas: Vec<Gq> = roots.iter().map(|r| r.pow(2)).collect();
    // 1 / r = conj(r) on the unit circle
    let a0 = roots.iter().fold(Gq::real(rat(pl.s)), |acc, r| acc.mul(&r.conj()));
    let mut point = vec![a0];
    point.extend(alphas.iter().cloned());

    let m = omega_matrix(n, pl.p, MatrixConvention::Standard).map_err(|e| e.to_string())?;
    let image = |g: Generator| {
        spherical_image(g, &m)
            .map(|f| eval_exact(&f, &point))
            .map_err(|e| e.to_string())
    };
    let t0p = image(Generator::T0p)?;
    let gens: Vec<Gq> = (1..=n).map(|i| image(Generator::Tp2(i))).collect::<Result<_, _>>()?;
    let t0p2 = image(Generator::Tp2(0))?;
    let real_eigenvalues = t0p.im.is_zero() && t0p2.im.is_zero() && gens.iter().all(|g| g.im.is_zero());

    let lambdas: Vec<Rational> = gens.iter().map(|g| g.re.clone()).collect();
    let mut ks = k_constants_from(&lambdas, &m).map_err(|e| e.to_string())?;
    let k1_exact = ks[0] == rat(pl.s * pl.s);
    ks.push(last_k_from_identity(&t0p.re, &ks));
    let cs = reduced_constants(&ks).map_err(|e| e.to_string())?;
    let sys = build_system(&cs, n).map_err(|e| e.to_string())?;
    let sol = solve_system(&sys, &Tolerances::default()).map_err(|e| e.to_string())?;

    let lambda0 = t0p.re.to_f64().unwrap();
    let prod: Complex64 = sol.alphas.iter().map(|a| 1.0 + a).product();
    let mut recovered = vec![lambda0 / prod];
    recovered.extend(sol.alphas.iter().copied());
    let planted_c: Vec<Complex64> = point.iter().map(Gq::to_complex).collect();

    let tol = Tolerances::default();
    let cp = canonicalize(&planted_c, tol.cluster, Provenance::HatRecursion).map_err(|e| e.to_string())?;
    let cr = canonicalize(&recovered, tol.cluster, sol.provenance).map_err(|e| e.to_string())?;
    let tuple_error = cp
        .alpha
        .iter()
        .zip(&cr.alpha)
        .map(|(x, y)| (x - y).norm() / x.norm().max(1.0))
        .fold(orbit_distance(&planted_c[1..], &recovered[1..]), f64::max);

    let mut residual = system_residual(&sys, &recovered[1..]);
    let targets = std::iter::once((Generator::T0p, &t0p))
        .chain(std::iter::once((Generator::Tp2(0), &t0p2)))
        .chain(gens.iter().enumerate().map(|(i, g)| (Generator::Tp2(i + 1), g)));
    for (g, target) in targets {
        let f = spherical_image(g, &m).map_err(|e| e.to_string())?;
        let (v, scale) = f.evaluate_scaled(&recovered).map_err(|e| e.to_string())?;
        let t = target.re.to_f64().unwrap();
        residual = residual.max((v - t).norm() / t.abs().max(scale).max(f64::MIN_POSITIVE));
    }
    Ok(RoundTrip {
        planted: planted_c,
        recovered,
        tuple_error,
        residual,
        k1_exact,
        real_eigenvalues,
    })
}

/// Lifts a polynomial in `x1..xn` to `x0, x1..xn`, multiplied by `x0^r`.
pub fn times_x0_power(f: &MultiPoly, r: u32) -> MultiPoly {
    let n = f.nvars();
    let mut out = MultiPoly::zero(n + 1);
    for (e, c) in f.terms() {
        let mut v = vec![r];
        v.extend(e.iter().copied());
        out.add_term(v.into(), c.clone());
    }
    out
}

/// `|x|` of a rational, as `f64`.
pub fn abs_f64(x: &Rational) -> f64 {
    x.abs().to_f64().unwrap()
}
