//! Schur-class generators: holomorphic maps of the unit disk into its closure.
//!
//! Three shapes are supported: unimodular-or-smaller constants, scaled finite
//! Blaschke products, and a value-pinned composite `z -> mu_a(z * inner(z))`
//! where `mu_a(w) = (a + w) / (1 + conj(a) w)`, which hits `omega(0) = a`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{InequalityId, InequalityReport, Validity};
use crate::series::{check_pole, TruncatedSeries};
use crate::tolerance::SCHUR_SLACK;

const BOUNDARY_SAMPLES: usize = 64;
const BOUNDARY_RADIUS: f64 = 0.999;

/// Radius bound for sampled Blaschke zeros.
pub const SAMPLE_ZERO_RADIUS: f64 = 0.95;
/// Sampled Blaschke degrees are uniform in `0..=SAMPLE_MAX_DEGREE`.
pub const SAMPLE_MAX_DEGREE: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum SchurGenerator {
    Constant {
        value: Complex64,
    },
    /// `scale * factor * prod (z - a_k) / (1 - conj(a_k) z)`
    Blaschke {
        zeros: Vec<Complex64>,
        factor: Complex64,
        scale: f64,
    },
    Pinned {
        a: Complex64,
        inner: Box<SchurGenerator>,
    },
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl SchurGenerator {
    pub fn constant(value: Complex64) -> Result<Self> {
        let g = Self::Constant { value };
        g.validate()?;
        Ok(g)
    }

    /// `omega == e^{i theta}`.
    pub fn unimodular(theta: f64) -> Self {
        Self::Constant {
            value: Complex64::from_polar(1.0, theta),
        }
    }

    /// `omega(z) = z`.
    pub fn identity() -> Self {
        Self::Blaschke {
            zeros: vec![Complex64::new(0.0, 0.0)],
            factor: one(),
            scale: 1.0,
        }
    }

    pub fn blaschke(zeros: Vec<Complex64>, factor: Complex64, scale: f64) -> Result<Self> {
        let g = Self::Blaschke { zeros, factor, scale };
        g.validate()?;
        Ok(g)
    }

    pub fn pinned(a: Complex64, inner: SchurGenerator) -> Result<Self> {
        let g = Self::Pinned {
            a,
            inner: Box::new(inner),
        };
        g.validate()?;
        Ok(g)
    }

    /// Checks the parameter constraints and then `|omega| <= 1` on a circle of
    /// radius 0.999.
    pub fn validate(&self) -> Result<()> {
        self.validate_parameters()?;
        for k in 0..BOUNDARY_SAMPLES {
            let z = Complex64::from_polar(BOUNDARY_RADIUS, TAU * k as f64 / BOUNDARY_SAMPLES as f64);
            let v = self.value(z);
            if !(v.norm() <= 1.0 + SCHUR_SLACK) {
                return Err(Error::InvalidGenerator(format!(
                    "|omega({z})| = {} exceeds 1",
                    v.norm()
                )));
            }
        }
        Ok(())
    }

    fn validate_parameters(&self) -> Result<()> {
        match self {
            Self::Constant { value } => {
                if !(value.norm() <= 1.0 + SCHUR_SLACK) {
                    return Err(Error::InvalidGenerator(format!("constant {value} has modulus above 1")));
                }
            }
            Self::Blaschke { zeros, factor, scale } => {
                if let Some(a) = zeros.iter().find(|a| !(a.norm() < 1.0)) {
                    return Err(Error::InvalidGenerator(format!("zero {a} is not inside the unit disk")));
                }
                if !((factor.norm() - 1.0).abs() <= SCHUR_SLACK) {
                    return Err(Error::InvalidGenerator(format!("factor {factor} is not unimodular")));
                }
                if !(0.0..=1.0).contains(scale) {
                    return Err(Error::InvalidGenerator(format!("scale {scale} is outside [0, 1]")));
                }
            }
            Self::Pinned { a, inner } => {
                if !(a.norm() <= 1.0 + SCHUR_SLACK) {
                    return Err(Error::InvalidGenerator(format!("pinned value {a} has modulus above 1")));
                }
                inner.validate_parameters()?;
            }
        }
        Ok(())
    }

    /// `|a| = 1` collapses the pinned composite to the constant `a`.
    fn pinned_is_degenerate(a: Complex64) -> bool {
        (a.norm() - 1.0).abs() <= SCHUR_SLACK
    }

    /// Value at `z` with no domain check.
    pub fn value(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Constant { value } => *value,
            Self::Blaschke { zeros, factor, scale } => zeros
                .iter()
                .fold(factor * *scale, |acc, a| acc * (z - a) / (one() - a.conj() * z)),
            Self::Pinned { a, inner } => {
                if Self::pinned_is_degenerate(*a) {
                    return *a;
                }
                let s = z * inner.value(z);
                (a + s) / (one() + a.conj() * s)
            }
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() < 1.0) {
            return Err(Error::OutsideDisk(z));
        }
        Ok(self.value(z))
    }

    /// Taylor expansion about an arbitrary `center` in the open disk.
    pub fn expand(&self, center: Complex64, order: usize) -> Result<TruncatedSeries> {
        if !(center.norm() < 1.0) {
            return Err(Error::OutsideDisk(center));
        }
        match self {
            Self::Constant { value } => Ok(TruncatedSeries::constant(center, *value, order)),
            Self::Blaschke { zeros, factor, scale } => {
                let z = TruncatedSeries::variable(center, order);
                let mut acc = TruncatedSeries::constant(center, factor * *scale, order);
                for a in zeros {
                    let num = z.shift(-a);
                    let den = z.scale(-a.conj()).shift(one());
                    acc = acc.try_mul(&num.try_div(&den)?)?;
                }
                Ok(acc)
            }
            Self::Pinned { a, inner } => {
                if Self::pinned_is_degenerate(*a) {
                    return Ok(TruncatedSeries::constant(center, *a, order));
                }
                let s = TruncatedSeries::variable(center, order).try_mul(&inner.expand(center, order)?)?;
                let num = s.shift(*a);
                let den = s.scale(a.conj()).shift(one());
                num.try_div(&den)
            }
        }
    }

    /// Coefficients `c_0..c_N` of `omega(z) = sum c_n (z - p)^n`.
    pub fn taylor_about_p(&self, p: f64, order: usize) -> Result<SchurExpansion> {
        check_pole(p)?;
        let series = self.expand(Complex64::new(p, 0.0), order)?;
        Ok(SchurExpansion {
            p,
            coeffs: series.into_coeffs(),
        })
    }

    /// Random generator: Blaschke degree uniform in `0..=4`, zeros uniform in
    /// the disk of radius 0.95, scale uniform in `[0, 1]`, factor uniform on
    /// the circle.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let degree = rng.gen_range(0..=SAMPLE_MAX_DEGREE);
        let zeros = (0..degree)
            .map(|_| sample_in_disk(rng, SAMPLE_ZERO_RADIUS))
            .collect();
        let scale = rng.gen_range(0.0..=1.0);
        let factor = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
        Self::Blaschke { zeros, factor, scale }
    }
}

/// Uniform sample from the closed disk `|z| <= radius`.
pub fn sample_in_disk<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.gen_range(0.0f64..=1.0).sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..TAU))
}

/// Taylor coefficients of a generator about `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurExpansion {
    pub p: f64,
    pub coeffs: Vec<Complex64>,
}

impl SchurExpansion {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn c(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }
}

/// `|c_1| <= (1 - |c_0|^2) / (1 - p^2)`.
pub fn schwarz_pick_check(e: &SchurExpansion) -> Result<InequalityReport> {
    if e.order() < 1 {
        return Err(Error::DegenerateOrder);
    }
    let p = e.p;
    let lhs = e.c(1).norm();
    let rhs = (1.0 - e.c(0).norm_sqr()) / (1.0 - p * p);
    Ok(InequalityReport::new(InequalityId::SchwarzPick, lhs, rhs, p, Some(1), Validity::InRange))
}

/// `(1 - p)^n (1 + p) |c_n| <= 1 - |c_0|^2` for `n >= 1`.
pub fn ruscheweyh_check(e: &SchurExpansion, n: usize) -> Result<InequalityReport> {
    if n < 1 {
        return Err(Error::IndexTooSmall {
            what: "ruscheweyh_check",
            n,
            min: 1,
        });
    }
    if n > e.order() {
        return Err(Error::OrderExceeded {
            requested: n,
            available: e.order(),
        });
    }
    let p = e.p;
    let lhs = (1.0 - p).powi(n as i32) * (1.0 + p) * e.c(n).norm();
    let rhs = 1.0 - e.c(0).norm_sqr();
    Ok(InequalityReport::new(InequalityId::Ruscheweyh, lhs, rhs, p, Some(n), Validity::InRange))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_basic_variants() {
        let e = Complex64::from_polar(1.0, 2.2);
        let k = SchurGenerator::constant(e).unwrap();
        assert_eq!(k.eval(c(0.3, -0.4)).unwrap(), e);

        let a = c(0.2, 0.5);
        let pinned = SchurGenerator::pinned(a, SchurGenerator::constant(c(0.0, 0.0)).unwrap()).unwrap();
        assert_eq!(pinned.eval(c(0.0, 0.0)).unwrap(), a);

        let id = SchurGenerator::identity();
        let z = c(0.31, -0.2);
        assert!((id.eval(z).unwrap() - z).norm() < 1e-16);
    }

    #[test]
    fn eval_rejects_points_off_the_disk() {
        let id = SchurGenerator::identity();
        assert_eq!(id.eval(c(1.0, 0.0)), Err(Error::OutsideDisk(c(1.0, 0.0))));
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(SchurGenerator::constant(c(1.1, 0.0)).is_err());
        assert!(SchurGenerator::blaschke(vec![c(1.0, 0.0)], one(), 1.0).is_err());
        assert!(SchurGenerator::blaschke(vec![], one(), 1.5).is_err());
        assert!(SchurGenerator::blaschke(vec![], c(0.5, 0.0), 1.0).is_err());
        assert!(SchurGenerator::pinned(c(0.0, 1.2), SchurGenerator::identity()).is_err());
    }

    #[test]
    fn pinned_on_the_circle_is_constant() {
        let a = Complex64::from_polar(1.0, 0.9);
        let g = SchurGenerator::pinned(a, SchurGenerator::identity()).unwrap();
        assert_eq!(g.eval(c(0.5, 0.1)).unwrap(), a);
        let e = g.taylor_about_p(0.4, 5).unwrap();
        assert_eq!(e.c(0), a);
        assert!(e.coeffs[1..].iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn taylor_of_simple_generators() {
        let p = 0.37;
        let e = Complex64::from_polar(1.0, 1.3);
        let k = SchurGenerator::unimodular(1.3).taylor_about_p(p, 6).unwrap();
        assert!((k.c(0) - e).norm() < 1e-16);
        assert!(k.coeffs[1..].iter().all(|x| x.norm() == 0.0));

        let id = SchurGenerator::identity().taylor_about_p(p, 6).unwrap();
        assert!((id.c(0) - c(p, 0.0)).norm() < 1e-16);
        assert!((id.c(1) - one()).norm() < 1e-16);
        assert!(id.coeffs[2..].iter().all(|x| x.norm() < 1e-16));

        let a = c(-0.3, 0.25);
        let flat = SchurGenerator::pinned(a, SchurGenerator::constant(c(0.0, 0.0)).unwrap()).unwrap();
        let t = flat.taylor_about_p(p, 6).unwrap();
        assert!((t.c(0) - a).norm() < 1e-16);
        assert!(t.coeffs[1..].iter().all(|x| x.norm() < 1e-16));
    }

    #[test]
    fn schwarz_pick_equality_for_identity_and_slack_for_constants() {
        let p = 0.3;
        let id = SchurGenerator::identity().taylor_about_p(p, 4).unwrap();
        let r = schwarz_pick_check(&id).unwrap();
        assert!(r.sharp, "{r:?}");
        let k = SchurGenerator::constant(c(0.3, 0.1)).unwrap().taylor_about_p(p, 4).unwrap();
        let r = schwarz_pick_check(&k).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.margin > 0.0);
    }

    #[test]
    fn ruscheweyh_equality_cases() {
        let p = 0.45;
        let k = SchurGenerator::unimodular(0.4).taylor_about_p(p, 4).unwrap();
        let r = ruscheweyh_check(&k, 2).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.rhs.abs() < 1e-15 && r.sharp);

        let id = SchurGenerator::identity().taylor_about_p(p, 4).unwrap();
        let r = ruscheweyh_check(&id, 1).unwrap();
        assert!((r.lhs - (1.0 - p * p)).abs() < 1e-15);
        assert!(r.sharp);

        assert!(ruscheweyh_check(&id, 0).is_err());
        assert!(ruscheweyh_check(&id, 5).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let g = SchurGenerator::pinned(
            c(0.1, -0.2),
            SchurGenerator::blaschke(vec![c(0.3, 0.3)], Complex64::from_polar(1.0, 0.5), 0.7).unwrap(),
        )
        .unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert!(text.contains("\"variant\":\"pinned\""));
        let back: SchurGenerator = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn random_generators_respect_both_coefficient_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let g = SchurGenerator::sample(&mut rng);
            let e = g.taylor_about_p(0.3, 8).unwrap();
            assert!(schwarz_pick_check(&e).unwrap().margin >= -1e-10);
            for n in 1..=8 {
                assert!(ruscheweyh_check(&e, n).unwrap().margin >= -1e-10);
            }
        }
    }
}
