//! Multi-start Nelder-Mead search over parametrized generator families.
//!
//! A parameter vector `[rho, angle, re_1, im_1, ..., re_d, im_d]` decodes to
//! `rho * e^{i angle}` when `d = 0` and to the scaled Blaschke product with
//! zeros `re_k + i im_k` otherwise. Decoding clamps: `rho` into `[0, 1]` and
//! each zero radially into the disk of radius 0.95.
//!
//! The objective is the negated margin of the chosen inequality, so a search
//! pushes `lhs` towards (or past) its bound. Candidates are scored on the
//! representation formulas alone; the winner is then run through the full
//! membership scan, and only a verified member can certify a violation.

use std::cmp::Ordering;
use std::f64::consts::TAU;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coefficients::{taylor_coeffs, CoefficientKind, CoefficientVector};
use crate::error::{Error, Result};
use crate::families::{
    build_concave, build_starlike, center_from_pinned, concave_laurent, concave_taylor, pinned_value, starlike_laurent, StarlikeCenter,
};
use crate::inequalities::{
    check_bpw_a0, check_derived_bounds, check_k_bound, check_thm1, check_thm2, check_thm6_i, check_thm6_ii,
    check_thm7_lower, check_theorem_a, check_w0_disk, check_wirths_am1, theorem_a_disk,
};
use crate::report::{format_number, InequalityId, InequalityReport, Validity};
use crate::schur::{ruscheweyh_check, sample_in_disk, schwarz_pick_check, SchurGenerator, SAMPLE_ZERO_RADIUS};
use crate::series::check_pole;
use crate::tolerance::MARGIN_TOL;

pub const DEFAULT_BUDGET: usize = 2000;
pub const DEFAULT_STARTS: usize = 16;
pub const DEFAULT_DEGREE: usize = 2;

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;
const DIAMETER_TOL: f64 = 1e-9;
const RHO_STEP: f64 = 0.2;
const ANGLE_STEP: f64 = 0.5;
const ZERO_STEP: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchProblem {
    pub ineq: InequalityId,
    pub p: f64,
    /// Coefficient index for the indexed inequalities.
    pub n: Option<usize>,
    /// Omitted point for the starlike inequalities; defaults to `-p/(1+p)^2`.
    pub w0: Option<Complex64>,
    /// Largest Blaschke degree; start `k` uses degree `k mod (degree + 1)`.
    pub degree: usize,
    /// Objective evaluations per start.
    pub budget: usize,
    pub starts: usize,
    pub seed: u64,
}

impl SearchProblem {
    /// Defaults: smallest admissible `n`, degree 2, 2000 evaluations per
    /// start, 16 starts, seed 0.
    pub fn new(ineq: InequalityId, p: f64) -> Result<Self> {
        check_pole(p)?;
        Ok(Self {
            ineq,
            p,
            n: min_index(ineq),
            w0: None,
            degree: DEFAULT_DEGREE,
            budget: DEFAULT_BUDGET,
            starts: DEFAULT_STARTS,
            seed: 0,
        })
    }

    pub fn with_n(mut self, n: usize) -> Self {
        if min_index(self.ineq).is_some() {
            self.n = Some(n);
        }
        self
    }

    pub fn with_w0(mut self, w0: Complex64) -> Self {
        self.w0 = Some(w0);
        self
    }

    pub fn with_degree(mut self, degree: usize) -> Self {
        self.degree = degree;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_starts(mut self, starts: usize) -> Self {
        self.starts = starts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        check_pole(self.p)?;
        if let (Some(min), Some(n)) = (min_index(self.ineq), self.n) {
            if n < min {
                return Err(Error::IndexTooSmall {
                    what: self.ineq.as_str(),
                    n,
                    min,
                });
            }
        }
        if let Some(w0) = self.w0 {
            StarlikeCenter::new(w0, self.p)?;
        }
        Ok(())
    }

    fn index(&self) -> usize {
        self.n.or(min_index(self.ineq)).unwrap_or(0)
    }

    fn center(&self) -> Result<Complex64> {
        match self.w0 {
            Some(w0) => Ok(w0),
            None => Ok(StarlikeCenter::lower(self.p)?.w0()),
        }
    }
}

fn min_index(ineq: InequalityId) -> Option<usize> {
    match ineq {
        InequalityId::TheoremA => Some(2),
        InequalityId::Thm2 => Some(3),
        InequalityId::Ruscheweyh => Some(1),
        _ => None,
    }
}

/// Which object the parameters feed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    /// The generator itself, expanded about `p`.
    Generator,
    /// A concave member built from the generator.
    Concave,
    /// An omitted point `w0` whose pinned value is the generator at 0.
    Center,
    /// A starlike member with fixed `w0` and the generator as inner factor.
    Starlike,
}

fn target(ineq: InequalityId) -> Target {
    use InequalityId::*;
    match ineq {
        SchwarzPick | Ruscheweyh => Target::Generator,
        TheoremA | WirthsAm1 | BpwA0 | Thm1 | Thm2 => Target::Concave,
        W0Disk | W0ModulusLower | W0ModulusUpper | KBound => Target::Center,
        Thm6I | Thm6IWeak | Thm6Ii | DerivedAm1 | DerivedA0 | Thm7Lower | LivingstonOriginal => Target::Starlike,
    }
}

/// Clamp a parameter vector into its decoding box.
pub fn clamp_params(params: &[f64]) -> Vec<f64> {
    let mut out = params.to_vec();
    if let Some(rho) = out.first_mut() {
        *rho = rho.clamp(0.0, 1.0);
    }
    if out.len() > 1 {
        out[1] = out[1].rem_euclid(TAU);
    }
    for pair in out.get_mut(2..).into_iter().flat_map(|s| s.chunks_exact_mut(2)) {
        let r = pair[0].hypot(pair[1]);
        if r > SAMPLE_ZERO_RADIUS {
            pair[0] *= SAMPLE_ZERO_RADIUS / r;
            pair[1] *= SAMPLE_ZERO_RADIUS / r;
        }
    }
    out
}

/// Decode `[rho, angle, zeros...]` into a generator.
pub fn decode(params: &[f64]) -> SchurGenerator {
    let x = clamp_params(params);
    let rho = x.first().copied().unwrap_or(0.0);
    let angle = x.get(1).copied().unwrap_or(0.0);
    let zeros: Vec<Complex64> = x
        .get(2..)
        .unwrap_or(&[])
        .chunks_exact(2)
        .map(|z| Complex64::new(z[0], z[1]))
        .collect();
    if zeros.is_empty() {
        SchurGenerator::Constant {
            value: Complex64::from_polar(rho, angle),
        }
    } else {
        SchurGenerator::Blaschke {
            zeros,
            factor: Complex64::from_polar(1.0, angle),
            scale: rho,
        }
    }
}

fn pick(reports: Vec<InequalityReport>, id: InequalityId) -> Result<InequalityReport> {
    reports
        .into_iter()
        .find(|r| r.id == id)
        .ok_or(Error::InvalidGenerator(format!("no `{id}` report")))
}

/// The report for `problem` at the decoded generator `omega`.
pub fn evaluate(problem: &SearchProblem, omega: &SchurGenerator) -> Result<InequalityReport> {
    use InequalityId::*;
    let p = problem.p;
    let n = problem.index();
    match target(problem.ineq) {
        Target::Generator => {
            let e = omega.taylor_about_p(p, n.max(1))?;
            match problem.ineq {
                SchwarzPick => schwarz_pick_check(&e),
                _ => ruscheweyh_check(&e, n),
            }
        }
        Target::Concave => match problem.ineq {
            TheoremA => {
                let t = concave_taylor(p, omega, n)?;
                let a = CoefficientVector::new(
                    CoefficientKind::TaylorA,
                    p,
                    t.coeffs()[1..=n].to_vec(),
                );
                check_theorem_a(&a, n, p)
            }
            Thm2 => {
                let lau = concave_laurent(p, omega, n)?;
                let a = CoefficientVector::new(
                    CoefficientKind::LaurentA,
                    p,
                    (-1..=n as isize).map(|k| lau.coeff(k)).collect(),
                );
                check_thm2(&a, n, p)
            }
            _ => {
                let lau = concave_laurent(p, omega, 1)?;
                let (am1, a0) = (lau.coeff(-1), lau.coeff(0));
                match problem.ineq {
                    WirthsAm1 => check_wirths_am1(am1, p),
                    BpwA0 => check_bpw_a0(a0, p),
                    _ => check_thm1(am1, a0, p),
                }
            }
        },
        Target::Center => {
            let w0 = center_from_pinned(omega.value(Complex64::new(0.0, 0.0)), p);
            match problem.ineq {
                KBound => check_k_bound(w0, p),
                id => pick(check_w0_disk(w0, p)?, id),
            }
        }
        Target::Starlike => {
            let w0 = problem.center()?;
            let full = SchurGenerator::Pinned {
                a: clamp_unit(pinned_value(w0, p)),
                inner: Box::new(omega.clone()),
            };
            let lau = starlike_laurent(p, w0, &full, 1)?;
            let (am1, a0) = (lau.coeff(-1), lau.coeff(0));
            match problem.ineq {
                Thm6I | Thm6IWeak => pick(check_thm6_i(am1, w0, p)?, problem.ineq),
                Thm6Ii => check_thm6_ii(a0, w0, p),
                DerivedAm1 | DerivedA0 => pick(check_derived_bounds(am1, a0, w0, p)?, problem.ineq),
                Thm7Lower => check_thm7_lower(am1, w0, p),
                _ => {
                    #[allow(deprecated)]
                    crate::inequalities::check_livingston_original(am1, w0, p)
                }
            }
        }
    }
}

fn clamp_unit(a: Complex64) -> Complex64 {
    let r = a.norm();
    if r > 1.0 {
        a / r
    } else {
        a
    }
}

/// Whether the decoded candidate is a genuine family member (always true for
/// the generator and center targets, which involve no member function).
pub fn is_certified_member(problem: &SearchProblem, omega: &SchurGenerator) -> Result<bool> {
    let order = problem.index().max(2);
    Ok(match target(problem.ineq) {
        Target::Generator | Target::Center => omega.validate().is_ok(),
        Target::Concave => build_concave(problem.p, omega.clone(), order)?.is_member(),
        Target::Starlike => build_starlike(problem.p, problem.center()?, omega.clone(), order)?.is_member(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub ineq: InequalityId,
    pub p: f64,
    pub n: Option<usize>,
    /// `lhs` at the best candidate (largest for upper bounds, smallest for
    /// lower bounds).
    pub best_lhs: f64,
    pub rhs: f64,
    /// Margin at the best candidate; negative means the bound was exceeded.
    pub gap: f64,
    /// Clamped parameter vector of the best candidate.
    pub params: Vec<f64>,
    pub generator: SchurGenerator,
    pub evals: usize,
    /// `gap < 1e-3 max(1, |rhs|)`.
    pub converged: bool,
    pub validity: Validity,
    /// The best candidate passed the membership scan.
    pub member: bool,
}

impl SearchResult {
    /// A verified member exceeding an in-range bound.
    pub fn certifies_violation(&self) -> bool {
        self.member && self.validity.is_in_range() && self.gap < MARGIN_TOL
    }
}

struct Simplex {
    x: Vec<f64>,
    f: f64,
}

fn cmp_vertex(a: &Simplex, b: &Simplex) -> Ordering {
    a.f.total_cmp(&b.f).then_with(|| cmp_params(&a.x, &b.x))
}

fn cmp_params(a: &[f64], b: &[f64]) -> Ordering {
    for (u, v) in a.iter().zip(b) {
        match u.total_cmp(v) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

struct Outcome {
    x: Vec<f64>,
    f: f64,
    evals: usize,
}

/// Minimize `objective` from `x0`; NaN values count as `+inf`.
fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut objective: F, x0: Vec<f64>, steps: &[f64], budget: usize) -> Outcome {
    let dim = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex = Vec::with_capacity(dim + 1);
    let f0 = eval(&x0, &mut evals);
    simplex.push(Simplex { x: x0.clone(), f: f0 });
    for (i, step) in steps.iter().enumerate() {
        let mut x = x0.clone();
        x[i] += step;
        let f = eval(&x, &mut evals);
        simplex.push(Simplex { x, f });
    }
    loop {
        simplex.sort_by(cmp_vertex);
        let best = &simplex[0].x;
        let diameter = simplex[1..]
            .iter()
            .map(|v| v.x.iter().zip(best).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        if diameter < DIAMETER_TOL || evals >= budget {
            break;
        }
        let mut centroid = vec![0.0; dim];
        for v in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(&v.x) {
                *c += x / dim as f64;
            }
        }
        let along = |t: f64, toward: &[f64]| -> Vec<f64> {
            centroid.iter().zip(toward).map(|(c, w)| c + t * (w - c)).collect()
        };
        let worst = simplex[dim].x.clone();
        let f_worst = simplex[dim].f;
        let f_best = simplex[0].f;
        let f_second = simplex[dim - 1].f;

        let xr = along(-REFLECT, &worst);
        let fr = eval(&xr, &mut evals);
        if fr < f_best {
            let xe = along(-EXPAND, &worst);
            let fe = eval(&xe, &mut evals);
            simplex[dim] = if fe < fr { Simplex { x: xe, f: fe } } else { Simplex { x: xr, f: fr } };
            continue;
        }
        if fr < f_second {
            simplex[dim] = Simplex { x: xr, f: fr };
            continue;
        }
        let (xc, fc, accept) = if fr < f_worst {
            let xc = along(-REFLECT * CONTRACT, &worst);
            let fc = eval(&xc, &mut evals);
            (xc, fc, fc <= fr)
        } else {
            let xc = along(CONTRACT, &worst);
            let fc = eval(&xc, &mut evals);
            (xc, fc, fc < f_worst)
        };
        if accept {
            simplex[dim] = Simplex { x: xc, f: fc };
            continue;
        }
        let anchor = simplex[0].x.clone();
        for v in simplex[1..].iter_mut() {
            v.x = anchor.iter().zip(&v.x).map(|(a, x)| a + SHRINK * (x - a)).collect();
            v.f = eval(&v.x, &mut evals);
        }
    }
    simplex.sort_by(cmp_vertex);
    let top = simplex.swap_remove(0);
    Outcome {
        x: top.x,
        f: top.f,
        evals,
    }
}

fn initial_point(rng: &mut ChaCha8Rng, degree: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![rng.gen_range(0.0..=1.0), rng.gen_range(0.0..TAU)];
    let mut steps = vec![RHO_STEP, ANGLE_STEP];
    for _ in 0..degree {
        let z = sample_in_disk(rng, SAMPLE_ZERO_RADIUS);
        x.extend([z.re, z.im]);
        steps.extend([ZERO_STEP, ZERO_STEP]);
    }
    (x, steps)
}

fn run_start(problem: &SearchProblem, k: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(problem.seed);
    rng.set_stream(k as u64);
    let degree = k % (problem.degree + 1);
    let (x0, steps) = initial_point(&mut rng, degree);
    let objective = |x: &[f64]| match evaluate(problem, &decode(x)) {
        Ok(r) if r.margin.is_finite() => r.margin,
        _ => f64::INFINITY,
    };
    let mut out = nelder_mead(objective, x0, &steps, problem.budget);
    out.x = clamp_params(&out.x);
    out
}

/// Multi-start search for the candidate that pushes `lhs` hardest against its
/// bound. Deterministic for a fixed problem: starts run in parallel and are
/// merged by smallest margin, ties broken by parameter vector then start index.
pub fn sharpness_probe(problem: &SearchProblem) -> Result<SearchResult> {
    problem.validate()?;
    let outcomes: Vec<Outcome> = (0..problem.starts.max(1))
        .into_par_iter()
        .map(|k| run_start(problem, k))
        .collect();
    let evals = outcomes.iter().map(|o| o.evals).sum();
    let best = outcomes
        .into_iter()
        .min_by(|a, b| a.f.total_cmp(&b.f).then_with(|| cmp_params(&a.x, &b.x)))
        .expect("at least one start");
    let generator = decode(&best.x);
    let report = evaluate(problem, &generator)?;
    let member = is_certified_member(problem, &generator)?;
    Ok(SearchResult {
        ineq: problem.ineq,
        p: problem.p,
        n: problem.n,
        best_lhs: report.lhs,
        rhs: report.rhs,
        gap: report.margin,
        converged: report.margin < 1e-3 * report.rhs.abs().max(1.0),
        params: best.x,
        generator,
        evals,
        validity: report.validity,
        member,
    })
}

/// One probe per `p`, all other settings taken from `template`.
pub fn range_sweep(template: &SearchProblem, p_grid: &[f64]) -> Result<Vec<SearchResult>> {
    p_grid
        .iter()
        .map(|&p| {
            let mut problem = template.clone();
            problem.p = p;
            sharpness_probe(&problem)
        })
        .collect()
}

pub const SWEEP_COLUMNS: [&str; 8] = ["p", "n", "lhs", "rhs", "margin", "validity", "evals", "converged"];

pub fn write_sweep_csv<W: Write>(rows: &[SearchResult], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_COLUMNS)?;
    for r in rows {
        w.write_record([
            format_number(r.p),
            r.n.map(|n| n.to_string()).unwrap_or_default(),
            format_number(r.best_lhs),
            format_number(r.rhs),
            format_number(r.gap),
            r.validity.to_string(),
            r.evals.to_string(),
            r.converged.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionStats {
    pub p: f64,
    pub n: usize,
    pub center: f64,
    pub radius: f64,
    /// Largest `|A_n - center|` over the samples.
    pub max_distance: f64,
    /// Convex hull area of the samples over the disk area.
    pub coverage: f64,
    pub points: Vec<Complex64>,
}

/// `A_n` for `samples` random generators (seeded, sequential draws, so a
/// smaller sample is a prefix of a larger one).
pub fn region_sample(p: f64, n: usize, samples: usize, seed: u64) -> Result<RegionStats> {
    check_pole(p)?;
    if n < 2 {
        return Err(Error::IndexTooSmall {
            what: "region_sample",
            n,
            min: 2,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let generators: Vec<SchurGenerator> = (0..samples).map(|_| SchurGenerator::sample(&mut rng)).collect();
    let points = generators
        .iter()
        .map(|g| Ok(concave_taylor(p, g, n)?.coeff(n)))
        .collect::<Result<Vec<_>>>()?;
    Ok(region_stats(p, n, points))
}

/// Statistics for an arbitrary cloud of `A_n` values.
pub fn region_stats(p: f64, n: usize, points: Vec<Complex64>) -> RegionStats {
    let (center, radius) = theorem_a_disk(n, p);
    let max_distance = points.iter().map(|a| (a - center).norm()).fold(0.0, f64::max);
    let coverage = hull_area(&points) / (std::f64::consts::PI * radius * radius);
    RegionStats {
        p,
        n,
        center,
        radius,
        max_distance,
        coverage,
        points,
    }
}

/// Area of the convex hull (Andrew's monotone chain).
pub fn hull_area(points: &[Complex64]) -> f64 {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|z| (z.re, z.im)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return 0.0;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &q in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    let m = hull.len();
    (0..m)
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % m]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum::<f64>()
        .abs()
        / 2.0
}

/// `A_n` of the constant-generator members `e^{i theta}` for `count` evenly
/// spaced angles.
pub fn boundary_trace(p: f64, n: usize, count: usize) -> Result<Vec<Complex64>> {
    (0..count)
        .map(|k| {
            let f = crate::families::extremal_ftheta(p, TAU * k as f64 / count as f64, n)?;
            Ok(taylor_coeffs(&f, n)?.get(n as isize).unwrap_or_default())
        })
        .collect()
}
