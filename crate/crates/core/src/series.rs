//! Truncated power series and Laurent expansions with complex coefficients.
//!
//! A [`TruncatedSeries`] stores `c_0, ..., c_N` for `sum c_k (z - center)^k`.
//! Binary operations require equal centers and never extrapolate: the result
//! carries the smaller of the two operand orders.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::DIVISION_GUARD;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    center: Complex64,
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    pub fn new(center: Complex64, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptySeries);
        }
        Ok(Self { center, coeffs })
    }

    /// Series from real coefficients; convenient in tests and closed forms.
    pub fn from_real(center: f64, coeffs: &[f64]) -> Result<Self> {
        Self::new(
            Complex64::new(center, 0.0),
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        )
    }

    pub fn constant(center: Complex64, value: Complex64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = value;
        Self { center, coeffs }
    }

    pub fn zero(center: Complex64, order: usize) -> Self {
        Self::constant(center, Complex64::new(0.0, 0.0), order)
    }

    /// The independent variable `z = center + w`.
    pub fn variable(center: Complex64, order: usize) -> Self {
        let mut s = Self::constant(center, center, order);
        if order >= 1 {
            s.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        s
    }

    /// Recenter a polynomial `sum b_k z^k` at `center` by binomial expansion.
    pub fn from_polynomial(poly: &[Complex64], center: Complex64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        for (k, &b) in poly.iter().enumerate() {
            // b z^k = b sum_j C(k, j) center^{k-j} w^j
            let mut binom = 1.0;
            for j in 0..=k.min(order) {
                coeffs[j] += b * binom * center.powu((k - j) as u32);
                binom = binom * (k - j) as f64 / (j + 1) as f64;
            }
        }
        Self { center, coeffs }
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `(z - center)^k`, zero beyond the stored order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order()) + 1;
        Self {
            center: self.center,
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    fn check_center(&self, other: &Self) -> Result<()> {
        if self.center != other.center {
            return Err(Error::CenterMismatch(self.center, other.center));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_center(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            center: self.center,
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            center: self.center,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Adds `value` to the constant coefficient.
    pub fn shift(&self, value: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += value;
        out
    }

    /// Cauchy product truncated to the smaller operand order.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_center(other)?;
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|k| (0..=k).map(|j| self.coeffs[j] * other.coeffs[k - j]).sum())
            .collect();
        Ok(Self {
            center: self.center,
            coeffs,
        })
    }

    /// Quotient `c` with `other * c = self` through the smaller operand order.
    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_center(other)?;
        let lead = other.coeffs[0];
        if lead.norm() <= DIVISION_GUARD {
            return Err(Error::DivisionSingularity(lead.norm()));
        }
        let order = self.order().min(other.order());
        let inv_lead = lead.inv();
        let mut coeffs: Vec<Complex64> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let acc: Complex64 = (1..=k).map(|j| other.coeffs[j] * coeffs[k - j]).sum();
            coeffs.push((self.coeffs[k] - acc) * inv_lead);
        }
        Ok(Self {
            center: self.center,
            coeffs,
        })
    }

    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::DegenerateOrder);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, c)| c * (k + 1) as f64)
            .collect();
        Ok(Self {
            center: self.center,
            coeffs,
        })
    }

    /// Horner evaluation of the truncated sum at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = z - self.center;
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + c)
    }
}

/// Which pole-factored denominator a rational function carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenominatorKind {
    /// `(1 - z/p)(1 - zp)`
    Concave,
    /// `(z - p)(1 - zp)`
    Starlike,
}

impl DenominatorKind {
    /// Value of the denominator at `z`.
    pub fn eval(self, z: Complex64, p: f64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Self::Concave => (one - z / p) * (one - z * p),
            Self::Starlike => (z - p) * (one - z * p),
        }
    }

    /// Coefficients of the denominator as a polynomial in `z`.
    pub fn polynomial(self, p: f64) -> [Complex64; 3] {
        let c = |x: f64| Complex64::new(x, 0.0);
        match self {
            Self::Concave => [c(1.0), c(-(p + 1.0 / p)), c(1.0)],
            Self::Starlike => [c(-p), c(1.0 + p * p), c(-p)],
        }
    }

    /// Writing the denominator as `w * (1 - p^2 - p w) / s` with `w = z - p`,
    /// this returns `s`.
    fn pole_factor(self, p: f64) -> f64 {
        match self {
            Self::Concave => -p,
            Self::Starlike => 1.0,
        }
    }
}

/// `sum_{n >= -1} a_n (z - pole)^n`, valid on `|z - pole| < 1 - pole`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentExpansion {
    pole: f64,
    principal: Complex64,
    tail: TruncatedSeries,
}

impl LaurentExpansion {
    pub fn new(pole: f64, principal: Complex64, tail: TruncatedSeries) -> Result<Self> {
        check_pole(pole)?;
        let c = Complex64::new(pole, 0.0);
        if tail.center() != c {
            return Err(Error::CenterMismatch(tail.center(), c));
        }
        Ok(Self {
            pole,
            principal,
            tail,
        })
    }

    pub fn pole(&self) -> f64 {
        self.pole
    }

    /// The residue `a_{-1}`.
    pub fn principal(&self) -> Complex64 {
        self.principal
    }

    /// Regular part `a_0 + a_1 w + ...`.
    pub fn tail(&self) -> &TruncatedSeries {
        &self.tail
    }

    pub fn order(&self) -> usize {
        self.tail.order()
    }

    pub fn validity_radius(&self) -> f64 {
        1.0 - self.pole
    }

    /// `a_n` for `n >= -1`; zero past the stored order.
    pub fn coeff(&self, n: isize) -> Complex64 {
        match n {
            -1 => self.principal,
            n if n >= 0 => self.tail.coeff(n as usize),
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.principal / (z - self.pole) + self.tail.eval(z)
    }

    pub(crate) fn with_tail_shift(mut self, value: Complex64) -> Self {
        self.tail = self.tail.shift(value);
        self
    }
}

pub(crate) fn check_pole(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::PoleOutOfRange(p))
    }
}

/// Laurent expansion of `numer / denominator` about `p`, where `numer` is
/// already expanded about `p`. The tail order is one less than the numerator
/// order.
pub fn laurent_from_numerator(
    numer: &TruncatedSeries,
    p: f64,
    kind: DenominatorKind,
) -> Result<LaurentExpansion> {
    check_pole(p)?;
    let center = Complex64::new(p, 0.0);
    if numer.center() != center {
        return Err(Error::CenterMismatch(numer.center(), center));
    }
    if numer.order() == 0 {
        return Err(Error::DegenerateOrder);
    }
    // numer / D = s * numer / (w (1 - p^2 - p w)) = Q(w) / w
    let mut regular = TruncatedSeries::zero(center, numer.order());
    regular.coeffs[0] = Complex64::new(1.0 - p * p, 0.0);
    regular.coeffs[1] = Complex64::new(-p, 0.0);
    let q = numer.scale(Complex64::new(kind.pole_factor(p), 0.0)).try_div(&regular)?;
    let mut coeffs = q.into_coeffs();
    let principal = coeffs.remove(0);
    LaurentExpansion::new(p, principal, TruncatedSeries::new(center, coeffs)?)
}

/// Laurent expansion about `p` of a polynomial (in `z`) over one of the two
/// pole-factored denominators, with tail order `order`.
pub fn expand_rational(
    numer_coeffs: &[Complex64],
    p: f64,
    kind: DenominatorKind,
    order: usize,
) -> Result<LaurentExpansion> {
    check_pole(p)?;
    let numer = TruncatedSeries::from_polynomial(numer_coeffs, Complex64::new(p, 0.0), order + 1);
    laurent_from_numerator(&numer, p, kind)
}

/// Taylor coefficients about 0 of `1 / ((1 - z/p)(1 - zp))` by partial fractions:
/// `(p^{-n} - p^{n+2}) / (1 - p^2)`.
pub fn concave_denominator_inverse(p: f64, order: usize) -> TruncatedSeries {
    let coeffs = (0..=order as i32)
        .map(|n| Complex64::new((p.powi(-n) - p.powi(n + 2)) / (1.0 - p * p), 0.0))
        .collect();
    TruncatedSeries {
        center: Complex64::new(0.0, 0.0),
        coeffs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() <= tol, "{a} vs {b}");
    }

    #[test]
    fn add_cancels_and_keeps_min_order() {
        let a = TruncatedSeries::from_real(0.0, &[1.0, 1.0]).unwrap();
        let b = TruncatedSeries::from_real(0.0, &[1.0, -1.0, 5.0]).unwrap();
        let s = a.try_add(&b).unwrap();
        assert_eq!(s.order(), 1);
        assert_eq!(s.coeffs(), &[c(2.0, 0.0), c(0.0, 0.0)]);
        let zero = TruncatedSeries::zero(c(0.0, 0.0), 4);
        assert_eq!(a.try_add(&zero).unwrap(), a);
    }

    #[test]
    fn center_mismatch_is_rejected() {
        let a = TruncatedSeries::from_real(0.0, &[1.0]).unwrap();
        let b = TruncatedSeries::from_real(0.5, &[1.0]).unwrap();
        assert!(matches!(a.try_add(&b), Err(Error::CenterMismatch(..))));
        assert!(matches!(a.try_mul(&b), Err(Error::CenterMismatch(..))));
        assert!(matches!(a.try_div(&b), Err(Error::CenterMismatch(..))));
    }

    #[test]
    fn mul_difference_of_squares() {
        let a = TruncatedSeries::from_real(0.0, &[1.0, 1.0, 0.0]).unwrap();
        let b = TruncatedSeries::from_real(0.0, &[1.0, -1.0, 0.0]).unwrap();
        let prod = a.try_mul(&b).unwrap();
        assert_eq!(prod.coeffs(), &[c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
    }

    #[test]
    fn unimodular_constant_squared() {
        let theta = 0.7_f64;
        let e = Complex64::from_polar(1.0, theta);
        let s = TruncatedSeries::constant(c(0.0, 0.0), e, 3);
        let sq = s.try_mul(&s).unwrap();
        assert_close(sq.coeff(0), Complex64::from_polar(1.0, 2.0 * theta), 1e-15);
        assert!(sq.coeffs()[1..].iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn identity_squared_about_p() {
        let p = 0.3;
        let z = TruncatedSeries::variable(c(p, 0.0), 4);
        let sq = z.try_mul(&z).unwrap();
        assert_close(sq.coeff(0), c(p * p, 0.0), 1e-16);
        assert_close(sq.coeff(1), c(2.0 * p, 0.0), 1e-16);
        assert_close(sq.coeff(2), c(1.0, 0.0), 1e-16);
    }

    #[test]
    fn geometric_series_division() {
        let one = TruncatedSeries::constant(c(0.0, 0.0), c(1.0, 0.0), 6);
        let d = TruncatedSeries::from_real(0.0, &[1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let q = one.try_div(&d).unwrap();
        assert!(q.coeffs().iter().all(|x| (x - c(1.0, 0.0)).norm() < 1e-15));

        let a = TruncatedSeries::new(c(0.0, 0.0), vec![c(2.0, 1.0), c(0.5, -3.0), c(1.0, 1.0)]).unwrap();
        let unit = a.try_div(&a).unwrap();
        assert_close(unit.coeff(0), c(1.0, 0.0), 1e-15);
        assert_close(unit.coeff(1), c(0.0, 0.0), 1e-15);
        assert_close(unit.coeff(2), c(0.0, 0.0), 1e-15);
    }

    #[test]
    fn division_factor_matches_geometric_oracle() {
        for &p in &[0.1, 0.4, 0.8] {
            let r = p / (1.0 - p * p);
            let one = TruncatedSeries::constant(c(p, 0.0), c(1.0, 0.0), 12);
            let d = TruncatedSeries::from_real(p, &[1.0, -r]).unwrap();
            // pad the denominator so the quotient keeps order 12
            let d = TruncatedSeries::new(
                d.center(),
                d.coeffs().iter().copied().chain(std::iter::repeat(c(0.0, 0.0)).take(11)).collect(),
            )
            .unwrap();
            let q = one.try_div(&d).unwrap();
            for k in 0..=12 {
                let oracle = r.powi(k as i32);
                assert!((q.coeff(k).re - oracle).abs() <= 1e-14 * oracle.max(1.0));
            }
        }
    }

    #[test]
    fn division_guard_reports_modulus() {
        let a = TruncatedSeries::from_real(0.0, &[1.0, 1.0]).unwrap();
        let b = TruncatedSeries::from_real(0.0, &[1e-15, 1.0]).unwrap();
        match a.try_div(&b) {
            Err(Error::DivisionSingularity(m)) => assert!((m - 1e-15).abs() < 1e-30),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn derivative_rules() {
        let a = TruncatedSeries::from_real(0.0, &[1.0, 1.0, 1.0]).unwrap();
        let d = a.derivative().unwrap();
        assert_eq!(d.coeffs(), &[c(1.0, 0.0), c(2.0, 0.0)]);
        let k = TruncatedSeries::from_real(0.0, &[3.0, 0.0]).unwrap();
        assert_eq!(k.derivative().unwrap().coeffs(), &[c(0.0, 0.0)]);
        let bare = TruncatedSeries::from_real(0.0, &[3.0]).unwrap();
        assert_eq!(bare.derivative(), Err(Error::DegenerateOrder));
    }

    #[test]
    fn derivative_of_g_tail_matches_finite_difference() {
        // g(z) = -zp / ((z - p)(1 - pz)); a_1(g) against a central difference
        // of the regular part g(z) - a_{-1}/(z - p).
        let p = 0.35;
        let lau = expand_rational(&[c(0.0, 0.0), c(-p, 0.0)], p, DenominatorKind::Starlike, 24)
            .unwrap();
        let am1 = lau.principal();
        let regular = |z: Complex64| {
            let g = -z * p / ((z - p) * (1.0 - z * p));
            g - am1 / (z - p)
        };
        let h = 1e-6 * (1.0 - p);
        let fd = (regular(c(p + h, 0.0)) - regular(c(p - h, 0.0))) / (2.0 * h);
        let d = lau.tail().derivative().unwrap();
        // cancellation against the pole costs ~eps |g| / h
        assert_close(d.eval(c(p, 0.0)), fd, 1e-4 * fd.norm().max(1.0));
        assert_close(d.coeff(0), lau.coeff(1), 1e-15);
    }

    #[test]
    fn recentering_is_exact() {
        let poly = [c(1.0, 0.0), c(-2.0, 0.5), c(3.0, 0.0)];
        let center = c(0.4, 0.0);
        let s = TruncatedSeries::from_polynomial(&poly, center, 5);
        for z in [c(0.1, 0.2), c(-0.3, 0.0), c(0.7, -0.1)] {
            let direct = poly[0] + poly[1] * z + poly[2] * z * z;
            assert_close(s.eval(z), direct, 1e-14);
        }
        assert_eq!(s.coeff(3), c(0.0, 0.0));
    }

    #[test]
    fn residue_of_g() {
        for &p in &[0.1, 0.5, 0.9] {
            let lau = expand_rational(&[c(0.0, 0.0), c(-p, 0.0)], p, DenominatorKind::Starlike, 8)
                .unwrap();
            assert_close(lau.principal(), c(-p * p / (1.0 - p * p), 0.0), 1e-15);
            // geometric oracle: -p/(1-p^2) (p/w + 1) sum (r w)^k, r = p/(1-p^2)
            let r = p / (1.0 - p * p);
            for k in 0..=8 {
                let oracle = -p / (1.0 - p * p) * (p * r.powi(k + 1) + r.powi(k));
                let got = lau.coeff(k as isize).re;
                assert!((got - oracle).abs() <= 1e-13 * oracle.abs().max(1.0), "k={k}");
            }
            let expected = -p / (1.0 - p * p).powi(2);
            assert!((lau.coeff(0).re - expected).abs() < 1e-14 * expected.abs().max(1.0));
        }
    }

    #[test]
    fn residue_of_ftheta() {
        let p = 0.45;
        for &theta in &[0.0, 1.0, std::f64::consts::PI, 4.0] {
            let e = Complex64::from_polar(1.0, theta);
            let k = p / (1.0 + p * p);
            let numer = [c(0.0, 0.0), c(1.0, 0.0), -(c(1.0, 0.0) + e) * k];
            let lau = expand_rational(&numer, p, DenominatorKind::Concave, 4).unwrap();
            let p4 = p.powi(4);
            let expected = -(c(1.0, 0.0) - e * p * p) * p * p / (1.0 - p4);
            assert_close(lau.principal(), expected, 1e-14);
        }
    }

    #[test]
    fn rejects_bad_pole() {
        assert_eq!(
            expand_rational(&[c(1.0, 0.0)], 1.0, DenominatorKind::Concave, 3).unwrap_err(),
            Error::PoleOutOfRange(1.0)
        );
        assert!(expand_rational(&[c(1.0, 0.0)], 0.0, DenominatorKind::Starlike, 3).is_err());
    }

    #[test]
    fn denominator_inverse_partial_fractions() {
        let p = 0.6;
        let inv = concave_denominator_inverse(p, 20);
        let z = c(0.1, 0.05);
        let direct = DenominatorKind::Concave.eval(z, p).inv();
        assert_close(inv.eval(z), direct, 1e-13);
    }
}
