//! Members of the concave class `Co(p)` and the meromorphically starlike class
//! `Sigma^s(p, w0)`, built from Schur generators.
//!
//! Concave members use
//! `f(z) = (z - (p/(1+p^2)) (1 + omega(z)) z^2) / ((1 - z/p)(1 - zp))`,
//! starlike members use
//! `f(z) = w0 + p w0 (1 + z omega(z))^2 / ((z - p)(1 - zp))` with
//! `omega(0) = -(1/w0 + p + 1/p) / 2`.
//!
//! Membership is checked on a polar grid through the real parts of
//! `phi(z, f) = -(1+p^2) + 2pz - (z-p)(1-pz) f''(z)/f'(z)` and
//! `psi(z, f) = -(z-p)(1-pz) f'(z) / (f(z) - w0)`. Both fields extend
//! analytically across the pole with value `1 - p^2`; inside a small puncture
//! around `p` they are evaluated from the Laurent expansion.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::schur::{sample_in_disk, SchurGenerator};
use crate::series::{
    check_pole, concave_denominator_inverse, expand_rational, laurent_from_numerator, DenominatorKind,
    LaurentExpansion, TruncatedSeries,
};
use crate::tolerance::{MEMBERSHIP_TOL, SCHUR_SLACK};

const DISK_SLACK: f64 = 1e-10;
/// `|omega(0)|` this close to 1 marks a boundary center.
const BOUNDARY_TOL: f64 = 1e-12;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Concave { p: f64 },
    Starlike { p: f64, w0: Complex64 },
}

impl Family {
    pub fn p(&self) -> f64 {
        match *self {
            Self::Concave { p } | Self::Starlike { p, .. } => p,
        }
    }

    pub fn w0(&self) -> Option<Complex64> {
        match *self {
            Self::Concave { .. } => None,
            Self::Starlike { w0, .. } => Some(w0),
        }
    }

    pub fn is_concave(&self) -> bool {
        matches!(self, Self::Concave { .. })
    }
}

/// An admissible omitted point `w0` for `Sigma^s(p, w0)`:
/// `|w0 + p(1+p^2)/(1-p^2)^2| <= 2p^2/(1-p^2)^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarlikeCenter {
    w0: Complex64,
    p: f64,
}

impl StarlikeCenter {
    pub fn new(w0: Complex64, p: f64) -> Result<Self> {
        check_pole(p)?;
        if w0.norm() == 0.0 {
            return Err(Error::ZeroCenter);
        }
        let (distance, radius) = Self::disk_values(w0, p);
        if !(distance <= radius + DISK_SLACK) {
            return Err(Error::InadmissibleCenter { w0, distance, radius });
        }
        Ok(Self { w0, p })
    }

    /// `(|w0 + p(1+p^2)/(1-p^2)^2|, 2p^2/(1-p^2)^2)`.
    pub fn disk_values(w0: Complex64, p: f64) -> (f64, f64) {
        let q = (1.0 - p * p).powi(2);
        ((w0 + p * (1.0 + p * p) / q).norm(), 2.0 * p * p / q)
    }

    /// `w0 = -p/(1+p)^2`, the point of smallest modulus.
    pub fn lower(p: f64) -> Result<Self> {
        Self::new(c(-p / (1.0 + p).powi(2)), p)
    }

    /// `w0 = -p/(1-p)^2`, the point of largest modulus.
    pub fn upper(p: f64) -> Result<Self> {
        Self::new(c(-p / (1.0 - p).powi(2)), p)
    }

    /// `w0 = -p/(1+p^2)`, for which `omega(0) = 0`.
    pub fn counter(p: f64) -> Result<Self> {
        Self::new(c(-p / (1.0 + p * p)), p)
    }

    pub fn w0(&self) -> Complex64 {
        self.w0
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// The forced generator value `omega(0) = -(1/w0 + p + 1/p)/2`, radially
    /// clamped onto the closed disk to absorb rounding on the boundary.
    pub fn pinned_value(&self) -> Complex64 {
        let a = pinned_value(self.w0, self.p);
        if a.norm() > 1.0 {
            a / a.norm()
        } else {
            a
        }
    }
}

/// `-(1/w0 + p + 1/p)/2` without clamping.
pub fn pinned_value(w0: Complex64, p: f64) -> Complex64 {
    -(w0.inv() + p + 1.0 / p) * 0.5
}

/// `w0` whose pinned value is `a`, inverting `a = -(1/w0 + p + 1/p)/2`.
pub fn center_from_pinned(a: Complex64, p: f64) -> Complex64 {
    -1.0 / (2.0 * a + p + 1.0 / p)
}

/// Polar evaluation grid for the membership fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub radii: usize,
    pub angles: usize,
    /// Puncture radius around the pole as a fraction of `1 - p`.
    pub puncture: f64,
    pub max_radius: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            radii: 48,
            angles: 96,
            puncture: 0.02,
            max_radius: 0.995,
        }
    }
}

impl GridSpec {
    /// Grid points followed by the pole itself.
    pub fn points(&self, p: f64) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(self.radii * self.angles + 1);
        for i in 1..=self.radii {
            let r = self.max_radius * i as f64 / self.radii as f64;
            for j in 0..self.angles {
                pts.push(Complex64::from_polar(r, TAU * j as f64 / self.angles as f64));
            }
        }
        pts.push(c(p));
        pts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "z", rename_all = "snake_case")]
pub enum MembershipFailure {
    /// `f'` vanishes, so `f` is not locally univalent there.
    VanishingDerivative(Complex64),
    /// `f(z) = w0`.
    SingularDenominator(Complex64),
    NonFinite(Complex64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub min_re: f64,
    pub argmin: Complex64,
    pub points: usize,
    pub member: bool,
    pub failure: Option<MembershipFailure>,
}

#[derive(Debug, Clone, PartialEq)]
enum Source {
    Concave(SchurGenerator),
    Starlike(SchurGenerator),
    Rational { numer: Vec<Complex64>, kind: DenominatorKind },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MemberFunction {
    family: Family,
    generator: Option<SchurGenerator>,
    generator_valid: bool,
    source: Source,
    laurent: LaurentExpansion,
    taylor: TruncatedSeries,
    membership: MembershipReport,
}

impl MemberFunction {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn p(&self) -> f64 {
        self.family.p()
    }

    /// The Schur generator, when the member was built from one.
    pub fn generator(&self) -> Option<&SchurGenerator> {
        self.generator.as_ref()
    }

    /// Expansion about the pole, valid on `|z - p| < 1 - p`.
    pub fn laurent(&self) -> &LaurentExpansion {
        &self.laurent
    }

    /// Expansion about 0, valid on `|z| < p`.
    pub fn taylor(&self) -> &TruncatedSeries {
        &self.taylor
    }

    pub fn membership(&self) -> &MembershipReport {
        &self.membership
    }

    /// Grid check passed and the generator (if any) is Schur class.
    pub fn is_member(&self) -> bool {
        self.generator_valid && self.membership.member
    }

    /// Closed-form value at `z != p`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let p = self.p();
        match &self.source {
            Source::Concave(omega) => {
                let k = p / (1.0 + p * p);
                (z - (1.0 + omega.value(z)) * z * z * k) / DenominatorKind::Concave.eval(z, p)
            }
            Source::Starlike(omega) => {
                let w0 = self.family.w0().unwrap_or_default();
                let t = 1.0 + z * omega.value(z);
                w0 + w0 * p * t * t / DenominatorKind::Starlike.eval(z, p)
            }
            Source::Rational { numer, kind } => {
                let top = numer.iter().rev().fold(c(0.0), |acc, b| acc * z + b);
                top / kind.eval(z, p)
            }
        }
    }

    /// Local expansion of `f - shift` about `z0` (away from the pole).
    fn jet(&self, z0: Complex64, order: usize, shift: Complex64) -> Result<TruncatedSeries> {
        let p = self.p();
        let z = TruncatedSeries::variable(z0, order);
        match &self.source {
            Source::Concave(omega) => {
                let numer = concave_numerator(&z, &omega.expand(z0, order)?, p)?;
                let den = TruncatedSeries::from_polynomial(&DenominatorKind::Concave.polynomial(p), z0, order);
                Ok(numer.try_div(&den)?.shift(-shift))
            }
            Source::Starlike(omega) => {
                let w0 = self.family.w0().unwrap_or_default();
                let numer = starlike_numerator(&z, &omega.expand(z0, order)?, p, w0)?;
                let den = TruncatedSeries::from_polynomial(&DenominatorKind::Starlike.polynomial(p), z0, order);
                // f - w0 is formed without cancelling against w0
                Ok(numer.try_div(&den)?.shift(w0 - shift))
            }
            Source::Rational { numer, kind } => {
                let top = TruncatedSeries::from_polynomial(numer, z0, order);
                let den = TruncatedSeries::from_polynomial(&kind.polynomial(p), z0, order);
                Ok(top.try_div(&den)?.shift(-shift))
            }
        }
    }

    fn in_puncture(&self, z: Complex64, grid: &GridSpec) -> bool {
        let p = self.p();
        (z - p).norm() < grid.puncture * (1.0 - p)
    }

    /// `phi(z, f)` at one point.
    pub fn phi(&self, z: Complex64, grid: &GridSpec) -> std::result::Result<Complex64, MembershipFailure> {
        let p = self.p();
        let frame = -(1.0 + p * p) + 2.0 * p * z;
        if self.in_puncture(z, grid) {
            let (a, t1, t2) = self.laurent_parts(z);
            let w = z - p;
            let den = -a + w * w * t1;
            if den.norm() == 0.0 {
                return Err(MembershipFailure::VanishingDerivative(z));
            }
            let ratio = (2.0 * a + w * w * w * t2) / den;
            return finite(frame - (1.0 - p * z) * ratio, z);
        }
        let jet = self
            .jet(z, 2, c(0.0))
            .map_err(|_| MembershipFailure::NonFinite(z))?;
        let d1 = jet.coeff(1);
        if !(d1.norm() > 1e-300) {
            return Err(MembershipFailure::VanishingDerivative(z));
        }
        let d2 = 2.0 * jet.coeff(2);
        finite(frame - (z - p) * (1.0 - p * z) * d2 / d1, z)
    }

    /// `psi(z, f)` relative to the member's own `w0`.
    pub fn psi(&self, z: Complex64, grid: &GridSpec) -> std::result::Result<Complex64, MembershipFailure> {
        let p = self.p();
        let w0 = self.family.w0().unwrap_or_default();
        if let Source::Starlike(SchurGenerator::Constant { value: a }) = &self.source {
            return constant_psi(*a, p, z);
        }
        if self.in_puncture(z, grid) {
            let (a, t1, _) = self.laurent_parts(z);
            let w = z - p;
            let t0 = self.laurent.tail().eval(z);
            let den = a + w * (t0 - w0);
            if den.norm() == 0.0 {
                return Err(MembershipFailure::SingularDenominator(z));
            }
            return finite(-(1.0 - p * z) * (-a + w * w * t1) / den, z);
        }
        let jet = self.jet(z, 1, w0).map_err(|_| MembershipFailure::NonFinite(z))?;
        let h = jet.coeff(0);
        if !(h.norm() > 1e-300) {
            return Err(MembershipFailure::SingularDenominator(z));
        }
        finite(-(z - p) * (1.0 - p * z) * jet.coeff(1) / h, z)
    }

    /// `(a_{-1}, T'(z), T''(z))` where `T` is the Laurent tail.
    fn laurent_parts(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let tail = self.laurent.tail();
        let d1 = tail.derivative().ok();
        let d2 = d1.as_ref().and_then(|d| d.derivative().ok());
        (
            self.laurent.principal(),
            d1.map(|d| d.eval(z)).unwrap_or_default(),
            d2.map(|d| d.eval(z)).unwrap_or_default(),
        )
    }
}

/// For `omega == a`, `psi = (alpha - beta z) / (1 + a z)` with
/// `alpha = (1 + ap)^2 + p^2 (1 - a^2)` and `beta = (a + p)(1 + ap) + p (1 - a^2)`,
/// written so that no coefficient cancels when `a = -1`.
fn constant_psi(a: Complex64, p: f64, z: Complex64) -> std::result::Result<Complex64, MembershipFailure> {
    let one_ap = 1.0 + a * p;
    let defect = 1.0 - a * a;
    let alpha = one_ap * one_ap + defect * (p * p);
    let beta = (a + p) * one_ap + defect * p;
    let den = 1.0 + a * z;
    if den.norm() == 0.0 {
        return Err(MembershipFailure::SingularDenominator(z));
    }
    finite((alpha - beta * z) / den, z)
}

fn finite(v: Complex64, z: Complex64) -> std::result::Result<Complex64, MembershipFailure> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(MembershipFailure::NonFinite(z))
    }
}

/// `z - (p/(1+p^2)) (1 + omega) z^2` as a series.
fn concave_numerator(z: &TruncatedSeries, omega: &TruncatedSeries, p: f64) -> Result<TruncatedSeries> {
    let k = p / (1.0 + p * p);
    let quad = z.try_mul(z)?.try_mul(&omega.shift(c(1.0)))?;
    z.try_sub(&quad.scale(c(k)))
}

/// `p w0 (1 + z omega)^2` as a series.
fn starlike_numerator(z: &TruncatedSeries, omega: &TruncatedSeries, p: f64, w0: Complex64) -> Result<TruncatedSeries> {
    let t = z.try_mul(omega)?.shift(c(1.0));
    Ok(t.try_mul(&t)?.scale(w0 * p))
}

/// Laurent expansion about `p` of a concave member, tail order `order`.
pub fn concave_laurent(p: f64, omega: &SchurGenerator, order: usize) -> Result<LaurentExpansion> {
    check_pole(p)?;
    let center = c(p);
    let z = TruncatedSeries::variable(center, order + 1);
    let numer = concave_numerator(&z, &omega.expand(center, order + 1)?, p)?;
    laurent_from_numerator(&numer, p, DenominatorKind::Concave)
}

/// Taylor expansion about 0 of a concave member.
pub fn concave_taylor(p: f64, omega: &SchurGenerator, order: usize) -> Result<TruncatedSeries> {
    check_pole(p)?;
    let z = TruncatedSeries::variable(c(0.0), order);
    let numer = concave_numerator(&z, &omega.expand(c(0.0), order)?, p)?;
    numer.try_mul(&concave_denominator_inverse(p, order))
}

/// Laurent expansion about `p` of a starlike member with full generator `omega`.
pub fn starlike_laurent(p: f64, w0: Complex64, omega: &SchurGenerator, order: usize) -> Result<LaurentExpansion> {
    check_pole(p)?;
    let center = c(p);
    let z = TruncatedSeries::variable(center, order + 1);
    let numer = starlike_numerator(&z, &omega.expand(center, order + 1)?, p, w0)?;
    Ok(laurent_from_numerator(&numer, p, DenominatorKind::Starlike)?.with_tail_shift(w0))
}

/// Taylor expansion about 0 of a starlike member:
/// `w0 - w0 (1 + z omega)^2 / ((1 - z/p)(1 - zp))`.
pub fn starlike_taylor(p: f64, w0: Complex64, omega: &SchurGenerator, order: usize) -> Result<TruncatedSeries> {
    check_pole(p)?;
    let z = TruncatedSeries::variable(c(0.0), order);
    let sq = starlike_numerator(&z, &omega.expand(c(0.0), order)?, p, w0)?.scale(c(-1.0 / p));
    Ok(sq.try_mul(&concave_denominator_inverse(p, order))?.shift(w0))
}

fn rational_taylor(numer: &[Complex64], kind: DenominatorKind, p: f64, order: usize) -> Result<TruncatedSeries> {
    let top = TruncatedSeries::from_polynomial(numer, c(0.0), order);
    let scale = match kind {
        DenominatorKind::Concave => 1.0,
        DenominatorKind::Starlike => -1.0 / p,
    };
    top.scale(c(scale)).try_mul(&concave_denominator_inverse(p, order))
}

fn assemble(
    family: Family,
    generator: Option<SchurGenerator>,
    source: Source,
    laurent: LaurentExpansion,
    taylor: TruncatedSeries,
    grid: &GridSpec,
) -> MemberFunction {
    let generator_valid = generator.as_ref().map_or(true, |g| g.validate().is_ok());
    let mut f = MemberFunction {
        family,
        generator,
        generator_valid,
        source,
        laurent,
        taylor,
        membership: MembershipReport {
            min_re: f64::NAN,
            argmin: c(0.0),
            points: 0,
            member: false,
            failure: None,
        },
    };
    f.membership = scan(&f, grid, field_of(family));
    f
}

fn field_of(family: Family) -> Field {
    match family {
        Family::Concave { .. } => MemberFunction::phi,
        Family::Starlike { .. } => MemberFunction::psi,
    }
}

/// Like [`assemble`], but `None` when the outer-ring screen already fails.
fn assemble_screened(
    family: Family,
    omega: SchurGenerator,
    source: Source,
    laurent: LaurentExpansion,
    taylor: TruncatedSeries,
    grid: &GridSpec,
) -> Option<MemberFunction> {
    let mut f = MemberFunction {
        family,
        generator_valid: omega.validate().is_ok(),
        generator: Some(omega),
        source,
        laurent,
        taylor,
        membership: MembershipReport {
            min_re: f64::NAN,
            argmin: c(0.0),
            points: 0,
            member: false,
            failure: None,
        },
    };
    let field = field_of(family);
    if !f.generator_valid || fails_screen(&f, grid, field) {
        return None;
    }
    f.membership = scan(&f, grid, field);
    f.is_member().then_some(f)
}

/// Draws random generators until one gives a concave member; `None` after
/// `max_tries` draws.
pub fn sample_concave_member<R: Rng + ?Sized>(
    p: f64,
    order: usize,
    grid: &GridSpec,
    rng: &mut R,
    max_tries: usize,
) -> Result<Option<MemberFunction>> {
    check_pole(p)?;
    for _ in 0..max_tries {
        let omega = SchurGenerator::sample(rng);
        let laurent = concave_laurent(p, &omega, order)?;
        let taylor = concave_taylor(p, &omega, order)?;
        let source = Source::Concave(omega.clone());
        if let Some(f) = assemble_screened(Family::Concave { p }, omega, source, laurent, taylor, grid) {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// Draws an admissible `w0` (pinned value uniform in the closed disk) and an
/// inner generator until they give a starlike member; `None` after
/// `max_tries` draws.
pub fn sample_starlike_member<R: Rng + ?Sized>(
    p: f64,
    order: usize,
    grid: &GridSpec,
    rng: &mut R,
    max_tries: usize,
) -> Result<Option<MemberFunction>> {
    check_pole(p)?;
    for _ in 0..max_tries {
        let a = sample_in_disk(rng, 1.0);
        let w0 = center_from_pinned(a, p);
        let omega = SchurGenerator::Pinned {
            a,
            inner: Box::new(SchurGenerator::sample(rng)),
        };
        let laurent = starlike_laurent(p, w0, &omega, order)?;
        let taylor = starlike_taylor(p, w0, &omega, order)?;
        let source = Source::Starlike(omega.clone());
        if let Some(f) = assemble_screened(Family::Starlike { p, w0 }, omega, source, laurent, taylor, grid) {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

type Field = fn(&MemberFunction, Complex64, &GridSpec) -> std::result::Result<Complex64, MembershipFailure>;

/// Minimum of the field's real part over the grid. The reduction keys on
/// (value, grid index) so parallel evaluation is deterministic.
/// Outer rings checked before a full scan when sampling.
const SCREEN_RINGS: usize = 2;

/// True when some point on the outer rings already fails. These points are a
/// subset of the full grid, so a failure here is a failure of the full scan.
fn fails_screen(f: &MemberFunction, grid: &GridSpec, field: Field) -> bool {
    let pts = grid.points(f.p());
    let ring_start = pts.len().saturating_sub(1 + SCREEN_RINGS * grid.angles);
    pts[ring_start..pts.len() - 1]
        .iter()
        .any(|&z| field(f, z, grid).map_or(true, |v| !(v.re > MEMBERSHIP_TOL)))
}

fn scan(f: &MemberFunction, grid: &GridSpec, field: Field) -> MembershipReport {
    let pts = grid.points(f.p());
    let outcome = pts
        .par_iter()
        .enumerate()
        .map(|(i, &z)| (i, field(f, z, grid).map(|v| v.re)))
        .reduce_with(|x, y| match (&x.1, &y.1) {
            (Err(_), Err(_)) => if x.0 <= y.0 { x } else { y },
            (Err(_), Ok(_)) => x,
            (Ok(_), Err(_)) => y,
            (Ok(a), Ok(b)) => {
                if a < b || (a == b && x.0 <= y.0) {
                    x
                } else {
                    y
                }
            }
        });
    match outcome {
        Some((i, Ok(v))) => MembershipReport {
            min_re: v,
            argmin: pts[i],
            points: pts.len(),
            member: v > MEMBERSHIP_TOL,
            failure: None,
        },
        Some((i, Err(e))) => MembershipReport {
            min_re: f64::NEG_INFINITY,
            argmin: pts[i],
            points: pts.len(),
            member: false,
            failure: Some(e),
        },
        None => MembershipReport {
            min_re: f64::NAN,
            argmin: c(0.0),
            points: 0,
            member: false,
            failure: None,
        },
    }
}

pub fn build_concave(p: f64, omega: SchurGenerator, order: usize) -> Result<MemberFunction> {
    build_concave_on(p, omega, order, &GridSpec::default())
}

/// Concave member from a generator. A generator outside the Schur class, or
/// a failed grid check, yields a member flagged as non-member.
pub fn build_concave_on(p: f64, omega: SchurGenerator, order: usize, grid: &GridSpec) -> Result<MemberFunction> {
    check_pole(p)?;
    let laurent = concave_laurent(p, &omega, order)?;
    let taylor = concave_taylor(p, &omega, order)?;
    Ok(assemble(
        Family::Concave { p },
        Some(omega.clone()),
        Source::Concave(omega),
        laurent,
        taylor,
        grid,
    ))
}

pub fn build_starlike(p: f64, w0: Complex64, inner: SchurGenerator, order: usize) -> Result<MemberFunction> {
    build_starlike_on(p, w0, inner, order, &GridSpec::default())
}

/// Starlike member with generator `pinned(a, inner)`, `a` forced by `w0`.
pub fn build_starlike_on(
    p: f64,
    w0: Complex64,
    inner: SchurGenerator,
    order: usize,
    grid: &GridSpec,
) -> Result<MemberFunction> {
    let center = StarlikeCenter::new(w0, p)?;
    let omega = SchurGenerator::Pinned {
        a: center.pinned_value(),
        inner: Box::new(inner),
    };
    let laurent = starlike_laurent(p, w0, &omega, order)?;
    let taylor = starlike_taylor(p, w0, &omega, order)?;
    Ok(assemble(
        Family::Starlike { p, w0 },
        Some(omega.clone()),
        Source::Starlike(omega),
        laurent,
        taylor,
        grid,
    ))
}

/// Extremal concave member for the constant generator `e^{i theta}`:
/// `(z - (p/(1+p^2))(1 + e^{i theta}) z^2) / ((1 - z/p)(1 - zp))`.
pub fn extremal_ftheta(p: f64, theta: f64, order: usize) -> Result<MemberFunction> {
    extremal_ftheta_on(p, theta, order, &GridSpec::default())
}

pub fn extremal_ftheta_on(p: f64, theta: f64, order: usize, grid: &GridSpec) -> Result<MemberFunction> {
    check_pole(p)?;
    let e = Complex64::from_polar(1.0, theta);
    let numer = vec![c(0.0), c(1.0), -(1.0 + e) * (p / (1.0 + p * p))];
    rational_member(
        Family::Concave { p },
        Some(SchurGenerator::unimodular(theta)),
        numer,
        DenominatorKind::Concave,
        order,
        grid,
    )
}

/// `g(z) = -zp / ((z - p)(1 - pz))` tagged with the given family.
pub fn closed_form_g(family: Family, order: usize) -> Result<MemberFunction> {
    closed_form_g_on(family, order, &GridSpec::default())
}

///
/// For a starlike tag with `|omega(0)| = 1` (the two boundary centers), `g`
/// coincides with the member for the constant generator `omega(0)`, and its
/// fields are evaluated through that representation: there `g - w0` has a
/// double zero at `z = omega(0)^{-1}` on the circle, which the closed form
/// would lose to cancellation.
pub fn closed_form_g_on(family: Family, order: usize, grid: &GridSpec) -> Result<MemberFunction> {
    let p = family.p();
    check_pole(p)?;
    let numer = vec![c(0.0), c(-p)];
    match family {
        Family::Concave { .. } => rational_member(
            family,
            Some(SchurGenerator::unimodular(std::f64::consts::PI)),
            numer,
            DenominatorKind::Starlike,
            order,
            grid,
        ),
        Family::Starlike { w0, .. } => {
            let a = StarlikeCenter::new(w0, p)?.pinned_value();
            if (1.0 - a.norm()).abs() > BOUNDARY_TOL {
                return rational_member(family, None, numer, DenominatorKind::Starlike, order, grid);
            }
            let omega = SchurGenerator::Constant { value: a / a.norm() };
            let laurent = expand_rational(&numer, p, DenominatorKind::Starlike, order)?;
            let taylor = rational_taylor(&numer, DenominatorKind::Starlike, p, order)?;
            Ok(assemble(family, Some(omega.clone()), Source::Starlike(omega), laurent, taylor, grid))
        }
    }
}

fn rational_member(
    family: Family,
    generator: Option<SchurGenerator>,
    numer: Vec<Complex64>,
    kind: DenominatorKind,
    order: usize,
    grid: &GridSpec,
) -> Result<MemberFunction> {
    let p = family.p();
    let laurent = expand_rational(&numer, p, kind, order)?;
    let taylor = rational_taylor(&numer, kind, p, order)?;
    Ok(assemble(family, generator, Source::Rational { numer, kind }, laurent, taylor, grid))
}

pub fn verify_concave(f: &MemberFunction, grid: &GridSpec) -> Result<MembershipReport> {
    if !f.family.is_concave() {
        return Err(Error::WrongFamily { expected: "concave" });
    }
    Ok(scan(f, grid, MemberFunction::phi))
}

pub fn verify_starlike(f: &MemberFunction, grid: &GridSpec) -> Result<MembershipReport> {
    if f.family.is_concave() {
        return Err(Error::WrongFamily { expected: "starlike" });
    }
    Ok(scan(f, grid, MemberFunction::psi))
}

/// `omega(0) + (1/w0 + p + 1/p)/2` for a starlike member built from a generator.
pub fn pinned_residual(f: &MemberFunction) -> Option<Complex64> {
    let w0 = f.family.w0()?;
    let omega = f.generator.as_ref()?;
    Some(omega.value(c(0.0)) - pinned_value(w0, f.p()))
}

/// `|omega(0)| <= 1` up to the Schur slack.
pub fn is_admissible(w0: Complex64, p: f64) -> bool {
    w0.norm() > 0.0 && pinned_value(w0, p).norm() <= 1.0 + SCHUR_SLACK
}
