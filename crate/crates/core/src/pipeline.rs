//! Batch driver: dataset records in, result rows out.

use globset::{Glob, GlobSet, GlobSetBuilder};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, DatasetEntry, Expected};
use crate::eliminator::{
    canonicalize, genus2_closed_form, orbit_distance, recover_alpha0, residual, solve_system, Alpha0, Provenance,
    SatakeTuple, SystemSolution,
};
use crate::error::{Result, SatakeError};
use crate::hecke::{system_for_record, EigenvalueRecord, ReducedSystem};
use crate::krieg::{omega_matrix, MatrixConvention, OmegaMatrix};
use crate::polycore::Rational;
use crate::rootfind::{rp_verdict, RpReport, Tolerances, Verdict};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComputeOptions {
    /// `None` uses the dataset's declared convention, else the standard one.
    pub convention: Option<MatrixConvention>,
    pub tol: Tolerances,
    /// Threshold on `||a_i| - 1|` for the unimodularity verdict.
    pub rp_tol: f64,
    /// Per-component tolerance against printed 4-decimal values.
    pub table_tol: f64,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        ComputeOptions {
            convention: None,
            tol: Tolerances::default(),
            rp_tol: 1e-6,
            table_tol: 5e-4,
        }
    }
}

/// Which records to run: label globs and a prime list, both optional.
#[derive(Debug, Clone, Default)]
pub struct Selection {
    forms: Option<GlobSet>,
    primes: Option<Vec<u64>>,
}

impl Selection {
    pub fn all() -> Self {
        Selection::default()
    }

    pub fn new(forms: &[String], primes: Option<Vec<u64>>) -> Result<Self> {
        let forms = if forms.is_empty() {
            None
        } else {
            let mut b = GlobSetBuilder::new();
            for f in forms {
                b.add(Glob::new(f).map_err(|e| SatakeError::Domain(format!("bad form pattern {f:?}: {e}")))?);
            }
            Some(b.build().map_err(|e| SatakeError::Domain(e.to_string()))?)
        };
        Ok(Selection { forms, primes })
    }

    pub fn matches(&self, label: &str, p: u64) -> bool {
        self.forms.as_ref().is_none_or(|g| g.is_match(label)) && self.primes.as_ref().is_none_or(|ps| ps.contains(&p))
    }
}

/// Everything computed for one record.
#[derive(Debug, Clone)]
pub struct Solved {
    pub matrix: OmegaMatrix,
    pub system: ReducedSystem,
    pub ks: Vec<Rational>,
    pub solution: SystemSolution,
    /// Genus 2 only: roots of the quadratic in `y = x + 1/x`.
    pub closed_form: Option<Vec<Complex64>>,
    pub alpha0: Alpha0,
    pub tuple: SatakeTuple,
    pub report: RpReport,
}

impl Solved {
    /// Largest disagreement between the independent solution paths.
    pub fn path_gap(&self) -> f64 {
        let closed = self
            .closed_form
            .as_ref()
            .map_or(0.0, |c| orbit_distance(c, &self.solution.alphas));
        self.solution.path_gap.max(closed)
    }
}

/// Runs the full chain for one record.
pub fn solve_record(rec: &EigenvalueRecord, convention: MatrixConvention, options: &ComputeOptions) -> Result<Solved> {
    let tol = &options.tol;
    let matrix = omega_matrix(rec.n, rec.p, convention)?;
    let (system, ks) = system_for_record(rec, &matrix)?;
    let solution = solve_system(&system, tol)?;
    let closed_form = (rec.n == 2).then(|| genus2_closed_form(&system.constants[0], &system.constants[1]));
    let (alphas, provenance) = match &closed_form {
        Some(c) => (c.clone(), Provenance::Genus2ClosedForm),
        None => (solution.alphas.clone(), solution.provenance),
    };
    let alpha0 = recover_alpha0(&rec.lambda_t0p, &alphas, system.k1.as_ref())?;
    let mut raw = vec![alpha0.value];
    raw.extend(alphas);
    let mut tuple = canonicalize(&raw, tol.cluster, provenance)?;
    tuple.residual = residual(&tuple, &system, rec, &matrix);
    tuple.certified = tuple.residual < tol.certify;
    let report = rp_verdict(&tuple, options.rp_tol);
    let solved = Solved {
        matrix,
        system,
        ks,
        solution,
        closed_form,
        alpha0,
        tuple,
        report,
    };
    let gap = solved.path_gap();
    if !(gap
        <= tol
            .paths
            .max(tol.cluster * f64::from(u8::from(solved.solution.roots.has_clusters()))))
    {
        return Err(SatakeError::Solver(format!(
            "{} p={}: solution paths disagree by {gap:e}",
            rec.label, rec.p
        )));
    }
    Ok(solved)
}

/// Best match of computed parameters against printed values, modulo
/// reordering and inversion. Returns the worst per-component error scaled
/// by its tolerance (at most 1 means every component is within tolerance)
/// and the largest absolute component error of that matching.
pub fn match_expected(computed: &[Complex64], expected: &[Expected], tol: f64) -> Option<(f64, f64)> {
    if computed.len() != expected.len() {
        return None;
    }
    let score = |a: Complex64, e: &Expected| -> (f64, f64) {
        let dr = (a.re - e.value.re).abs();
        let di = (a.im - e.value.im).abs();
        ((dr / e.re_tol.unwrap_or(tol)).max(di / tol), dr.max(di))
    };
    fn search(
        i: usize,
        used: &mut Vec<bool>,
        computed: &[Complex64],
        expected: &[Expected],
        score: &dyn Fn(Complex64, &Expected) -> (f64, f64),
        acc: (f64, f64),
        best: &mut Option<(f64, f64)>,
    ) {
        if best.is_some_and(|b| acc.0 >= b.0) {
            return;
        }
        if i == expected.len() {
            *best = Some(acc);
            return;
        }
        for j in 0..computed.len() {
            if used[j] {
                continue;
            }
            used[j] = true;
            for cand in [computed[j], computed[j].inv()] {
                let (s, a) = score(cand, &expected[i]);
                search(
                    i + 1,
                    used,
                    computed,
                    expected,
                    score,
                    (acc.0.max(s), acc.1.max(a)),
                    best,
                );
            }
            used[j] = false;
        }
    }
    let mut best = None;
    search(
        0,
        &mut vec![false; computed.len()],
        computed,
        expected,
        &score,
        (0.0, 0.0),
        &mut best,
    );
    best
}

/// Rounds to 10 significant digits, the precision of the JSON output.
pub fn sig10(x: f64) -> f64 {
    if x.is_finite() && x != 0.0 {
        format!("{x:.9e}").parse().unwrap_or(x)
    } else {
        x
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then(|| sig10(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gamma {
    pub re: f64,
    pub im: f64,
    /// `|g| < 2`.
    pub inside: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    /// Worst component error divided by its tolerance.
    pub scaled_error: f64,
    pub max_abs_error: f64,
    pub passed: bool,
}

/// One output line per (form, prime).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub label: String,
    pub p: u64,
    pub genus: usize,
    pub weight: u32,
    pub convention: String,
    /// `[re, im]` of `a0, a1, ..., an` in canonical form.
    pub alpha: Vec<[f64; 2]>,
    /// `|a1|..|an|`.
    pub moduli: Vec<f64>,
    pub residual: Option<f64>,
    pub certified: bool,
    pub verdict: String,
    pub max_deviation: Option<f64>,
    pub deviations: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gammas: Option<Vec<Gamma>>,
    pub provenance: Option<String>,
    pub path_gap: Option<f64>,
    pub multiplicity: Vec<bool>,
    pub alpha0_fallback: bool,
    /// Inputs that were filled in rather than read, e.g. `T4(p^2)`.
    pub synthesized: Vec<String>,
    pub excluded: bool,
    pub flags: Vec<String>,
    pub notes: Vec<String>,
    pub comparison: Option<Comparison>,
    pub error: Option<String>,
}

impl ResultRow {
    /// True when the row counts against the exit status: not excluded and
    /// either failed to compute, is uncertified, or misses its expectation.
    pub fn failed(&self) -> bool {
        !self.excluded && (self.error.is_some() || !self.certified || self.comparison.is_some_and(|c| !c.passed))
    }
}

fn blank_row(entry: &DatasetEntry, convention: MatrixConvention) -> ResultRow {
    let rec = &entry.record;
    let synthesized = if rec.top_synthesized() {
        vec![format!("T{}(p^2)", rec.n)]
    } else {
        Vec::new()
    };
    ResultRow {
        label: rec.label.clone(),
        p: rec.p,
        genus: rec.n,
        weight: rec.k,
        convention: convention.name().to_string(),
        alpha: Vec::new(),
        moduli: Vec::new(),
        residual: None,
        certified: false,
        verdict: Verdict::Uncertified.name().to_string(),
        max_deviation: None,
        deviations: Vec::new(),
        gammas: None,
        provenance: None,
        path_gap: None,
        multiplicity: Vec::new(),
        alpha0_fallback: false,
        synthesized,
        excluded: entry.excluded(),
        flags: entry.flags.clone(),
        notes: entry.note.iter().cloned().collect(),
        comparison: None,
        error: None,
    }
}

/// Result row for a single dataset entry; failures are recorded in the row.
pub fn compute_entry(entry: &DatasetEntry, convention: MatrixConvention, options: &ComputeOptions) -> ResultRow {
    let mut row = blank_row(entry, convention);
    let solved = match solve_record(&entry.record, convention, options) {
        Ok(s) => s,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let t = &solved.tuple;
    row.alpha = t.alpha.iter().map(|a| [sig10(a.re), sig10(a.im)]).collect();
    row.moduli = t.moduli().into_iter().map(sig10).collect();
    row.residual = finite(t.residual);
    row.certified = t.certified;
    row.verdict = solved.report.verdict.name().to_string();
    if let Verdict::Violated { max_deviation } = solved.report.verdict {
        row.max_deviation = Some(sig10(max_deviation));
    }
    row.deviations = solved.report.deviations.iter().copied().map(sig10).collect();
    row.gammas = solved.report.gammas.as_ref().map(|gs| {
        gs.iter()
            .map(|(g, inside)| Gamma {
                re: sig10(g.re),
                im: sig10(g.im),
                inside: *inside,
            })
            .collect()
    });
    row.provenance = Some(t.provenance.name().to_string());
    row.path_gap = finite(solved.path_gap());
    row.multiplicity = t.multiplicity.clone();
    row.alpha0_fallback = solved.alpha0.fallback;
    if !solved.alpha0.alternatives.is_empty() {
        row.notes.push("a0 is ambiguous up to sign".into());
    }
    if !entry.expected.is_empty() {
        row.comparison = match_expected(&t.alpha[1..], &entry.expected, options.table_tol).map(|(s, a)| Comparison {
            scaled_error: sig10(s),
            max_abs_error: sig10(a),
            passed: s <= 1.0,
        });
    }
    row
}

/// Runs every selected record, in dataset order.
pub fn run_compute(dataset: &Dataset, selection: &Selection, options: &ComputeOptions) -> Vec<ResultRow> {
    let convention = options.convention.or_else(|| dataset.convention()).unwrap_or_default();
    let chosen: Vec<&DatasetEntry> = dataset
        .entries
        .iter()
        .filter(|e| selection.matches(&e.record.label, e.record.p))
        .collect();
    chosen
        .par_iter()
        .map(|e| compute_entry(e, convention, options))
        .collect()
}
