//! Checkers for Laurent and Taylor coefficient bounds on `Co(p)` and `Sigma^s(p, w0)`.
//!
//! Every checker returns an [`InequalityReport`]; a `p` outside the stated
//! validity interval is flagged, never rejected, so range sweeps can record
//! whatever margin they find.

use num_complex::Complex64;
use serde::Serialize;

use crate::coefficients::{laurent_coeffs, taylor_coeffs, CoefficientKind, CoefficientVector};
use crate::error::{Error, Result};
use crate::families::MemberFunction;
use crate::report::{InequalityId, InequalityReport, Validity};
use crate::series::check_pole;
use crate::tolerance::{GOLDEN, SQRT3_MINUS_ONE};

const GOLDEN_LABEL: &str = "(sqrt5 - 1)/2";

fn golden_validity(p: f64) -> Validity {
    Validity::up_to(p, GOLDEN, GOLDEN_LABEL)
}

fn nonzero(w0: Complex64) -> Result<()> {
    if w0.norm() == 0.0 {
        Err(Error::ZeroCenter)
    } else {
        Ok(())
    }
}

/// Center and radius of the disk containing `A_n`:
/// center `(1 - p^{2n+2}) / (p^{n-1}(1 - p^4))`,
/// radius `p^2 (1 - p^{2n-2}) / (p^{n-1}(1 - p^4))`.
///
/// The radius is the one attained by the constant-generator members; the
/// variant with `p^{2n+2}` in the radius is a valid but non-sharp bound.
pub fn theorem_a_disk(n: usize, p: f64) -> (f64, f64) {
    let n = n as i32;
    let denom = p.powi(n - 1) * (1.0 - p.powi(4));
    let center = (1.0 - p.powi(2 * n + 2)) / denom;
    let radius = p * p * (1.0 - p.powi(2 * n - 2)) / denom;
    (center, radius)
}

/// `|A_n - center| <= radius` for `n >= 2`.
pub fn check_theorem_a(a: &CoefficientVector, n: usize, p: f64) -> Result<InequalityReport> {
    check_pole(p)?;
    a.expect_kind(CoefficientKind::TaylorA)?;
    if n < 2 {
        return Err(Error::IndexTooSmall {
            what: "theorem_a",
            n,
            min: 2,
        });
    }
    let an = a.require(n as isize)?;
    let (center, radius) = theorem_a_disk(n, p);
    Ok(InequalityReport::new(
        InequalityId::TheoremA,
        (an - center).norm(),
        radius,
        p,
        Some(n),
        Validity::InRange,
    ))
}

/// `|a_{-1} + p^2/(1-p^4)| <= p^4/(1-p^4)`.
pub fn check_wirths_am1(am1: Complex64, p: f64) -> Result<InequalityReport> {
    check_pole(p)?;
    let p4 = p.powi(4);
    let lhs = (am1 + p * p / (1.0 - p4)).norm();
    Ok(InequalityReport::new(
        InequalityId::WirthsAm1,
        lhs,
        p4 / (1.0 - p4),
        p,
        None,
        Validity::InRange,
    ))
}

/// `|(1-p^2) a_0 / p + (1-p^2+p^4)/(1-p^4)| <= p^2 (2-p^2)/(1-p^4)`, valid
/// for `p <= sqrt3 - 1`.
pub fn check_bpw_a0(a0: Complex64, p: f64) -> Result<InequalityReport> {
    check_pole(p)?;
    let p2 = p * p;
    let p4 = p2 * p2;
    let lhs = (a0 * ((1.0 - p2) / p) + (1.0 - p2 + p4) / (1.0 - p4)).norm();
    let rhs = p2 * (2.0 - p2) / (1.0 - p4);
    Ok(InequalityReport::new(
        InequalityId::BpwA0,
        lhs,
        rhs,
        p,
        None,
        Validity::up_to(p, SQRT3_MINUS_ONE, "sqrt3 - 1"),
    ))
}

/// `|a_{-1} - ((1-p^2)/p) a_0| <= 1`, valid for `p <= (sqrt5 - 1)/2`.
pub fn check_thm1(am1: Complex64, a0: Complex64, p: f64) -> Result<InequalityReport> {
    check_pole(p)?;
    let lhs = (am1 - a0 * ((1.0 - p * p) / p)).norm();
    Ok(InequalityReport::new(InequalityId::Thm1, lhs, 1.0, p, None, golden_validity(p)))
}

/// For `n >= 3`:
/// `|a_{n-2} - (1-p^2) a_{n-1} / p|
///   <= p / ((1-p^4)(1-p)^{n-1}) * [1 - ((1-p^4)/p^4)^2 |a_{-1} + p^2/(1-p^4)|^2]`.
pub fn check_thm2(a: &CoefficientVector, n: usize, p: f64) -> Result<InequalityReport> {
    check_pole(p)?;
    a.expect_kind(CoefficientKind::LaurentA)?;
    if n < 3 {
        return Err(Error::IndexTooSmall {
            what: "thm2",
            n,
            min: 3,
        });
    }
    let n_i = n as isize;
    let am1 = a.require(-1)?;
    let lo = a.require(n_i - 2)?;
    let hi = a.require(n_i - 1)?;
    let p4 = p.powi(4);
    let lhs = (lo - hi * ((1.0 - p * p) / p)).norm();
    let scaled = ((1.0 - p4) / p4) * (am1 + p * p / (1.0 - p4)).norm();
    let rhs = p / ((1.0 - p4) * (1.0 - p).powi(n as i32 - 1)) * (1.0 - scaled * scaled);
    Ok(InequalityReport::new(InequalityId::Thm2, lhs, rhs, p, Some(n), Validity::InRange))
}

/// The admissible-`w0` disk `|w0 + p(1+p^2)/(1-p^2)^2| <= 2p^2/(1-p^2)^2`
/// together with `p/(1+p)^2 <= |w0| <= p/(1-p)^2`.
pub fn check_w0_disk(w0: Complex64, p: f64) -> Result<Vec<InequalityReport>> {
    check_pole(p)?;
    nonzero(w0)?;
    let q = (1.0 - p * p).powi(2);
    let disk = InequalityReport::new(
        InequalityId::W0Disk,
        (w0 + p * (1.0 + p * p) / q).norm(),
        2.0 * p * p / q,
        p,
        None,
        Validity::InRange,
    );
    let lower = InequalityReport::new(
        InequalityId::W0ModulusLower,
        w0.norm(),
        p / (1.0 + p).powi(2),
        p,
        None,
        Validity::InRange,
    );
    let upper = InequalityReport::new(
        InequalityId::W0ModulusUpper,
        w0.norm(),
        p / (1.0 - p).powi(2),
        p,
        None,
        Validity::InRange,
    );
    Ok(vec![disk, lower, upper])
}

/// `K = (s + 2p^2) / (2 + s)` with `s = |p/w0 + p^2 + 1|`; `p K` bounds `p |omega(p)|`
/// through Schwarz-Pick.
pub fn k_factor(w0: Complex64, p: f64) -> f64 {
    let s = (p / w0 + p * p + 1.0).norm();
    (s + 2.0 * p * p) / (2.0 + s)
}

/// `K <= p`, equivalent to `|omega(0)| <= 1`.
pub fn check_k_bound(w0: Complex64, p: f64) -> Result<InequalityReport> {
    check_pole(p)?;
    nonzero(w0)?;
    Ok(InequalityReport::new(InequalityId::KBound, k_factor(w0, p), p, p, None, Validity::InRange))
}

/// `|a_{-1} - p w0/(1-p^2)| <= (p|w0|/(1-p^2)) K (K + 2)`, followed by the
/// weakened form with `K` replaced by `p`.
pub fn check_thm6_i(am1: Complex64, w0: Complex64, p: f64) -> Result<Vec<InequalityReport>> {
    check_pole(p)?;
    nonzero(w0)?;
    let scale = p * w0.norm() / (1.0 - p * p);
    let lhs = (am1 - w0 * (p / (1.0 - p * p))).norm();
    let k = k_factor(w0, p);
    Ok(vec![
        InequalityReport::new(InequalityId::Thm6I, lhs, scale * k * (k + 2.0), p, None, Validity::InRange),
        InequalityReport::new(InequalityId::Thm6IWeak, lhs, scale * p * (p + 2.0), p, None, Validity::InRange),
    ])
}

/// `|a_0 - (1-p^2+p^4) w0 / (1-p^2)^2| <= p (2 + 2p - p^3) |w0| / (1-p^2)^2`,
/// valid for `p <= (sqrt5 - 1)/2`.
pub fn check_thm6_ii(a0: Complex64, w0: Complex64, p: f64) -> Result<InequalityReport> {
    check_pole(p)?;
    nonzero(w0)?;
    let q = (1.0 - p * p).powi(2);
    let lhs = (a0 - w0 * ((1.0 - p * p + p.powi(4)) / q)).norm();
    let rhs = p * (2.0 + 2.0 * p - p.powi(3)) * w0.norm() / q;
    Ok(InequalityReport::new(InequalityId::Thm6Ii, lhs, rhs, p, None, golden_validity(p)))
}

/// `|a_{-1}| <= p(1+p)|w0|/(1-p)` and, for `p <= (sqrt5 - 1)/2`,
/// `|a_0| <= |w0|/(1-p)^2`.
pub fn check_derived_bounds(am1: Complex64, a0: Complex64, w0: Complex64, p: f64) -> Result<Vec<InequalityReport>> {
    check_pole(p)?;
    nonzero(w0)?;
    Ok(vec![
        InequalityReport::new(
            InequalityId::DerivedAm1,
            am1.norm(),
            p * (1.0 + p) * w0.norm() / (1.0 - p),
            p,
            None,
            Validity::InRange,
        ),
        InequalityReport::new(
            InequalityId::DerivedA0,
            a0.norm(),
            w0.norm() / (1.0 - p).powi(2),
            p,
            None,
            golden_validity(p),
        ),
    ])
}

/// Lower bound `|a_{-1}| >= p(1-p)|w0|/(1+p)`; margin is `lhs - rhs`.
pub fn check_thm7_lower(am1: Complex64, w0: Complex64, p: f64) -> Result<InequalityReport> {
    check_pole(p)?;
    nonzero(w0)?;
    Ok(InequalityReport::new(
        InequalityId::Thm7Lower,
        am1.norm(),
        p * (1.0 - p) * w0.norm() / (1.0 + p),
        p,
        None,
        Validity::InRange,
    ))
}

/// The historical disk `|a_{-1}| <= p(1-p)|w0|/(1+p)`, which is false in
/// general (the correct statement is the reversed inequality, see
/// [`check_thm7_lower`]). Kept only to reproduce the counterexample
/// `g(z) = -zp/((z-p)(1-pz))` with `w0 = -p/(1+p^2)`.
#[deprecated(note = "incorrect bound; use check_thm7_lower")]
pub fn check_livingston_original(am1: Complex64, w0: Complex64, p: f64) -> Result<InequalityReport> {
    check_pole(p)?;
    nonzero(w0)?;
    Ok(InequalityReport::new(
        InequalityId::LivingstonOriginal,
        am1.norm(),
        p * (1.0 - p) * w0.norm() / (1.0 + p),
        p,
        None,
        Validity::InRange,
    ))
}

/// Result of maximizing a scalar polynomial over `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarMax {
    /// Interior critical point (local maximum on the positive axis).
    pub x_m: f64,
    /// Maximizer over `[0, 1]`, i.e. `min(x_m, 1)`.
    pub argmax: f64,
    pub max_value: f64,
}

/// `R_p(x) = p(1 - x^2) + 2(1 - p^2) x`.
pub fn rp(p: f64, x: f64) -> f64 {
    p * (1.0 - x * x) + 2.0 * (1.0 - p * p) * x
}

/// `Q_p(x) = 2p + 2x + 2p^2 x - 2p^2 x^3 - p^3 x^2`.
pub fn qp(p: f64, x: f64) -> f64 {
    2.0 * p + 2.0 * x + 2.0 * p * p * x - 2.0 * p * p * x.powi(3) - p.powi(3) * x * x
}

/// `R_p` peaks at `(1 - p^2)/p`; it increases on `[0, x_m]`.
pub fn rp_max(p: f64) -> Result<ScalarMax> {
    check_pole(p)?;
    let x_m = (1.0 - p * p) / p;
    let argmax = x_m.min(1.0);
    Ok(ScalarMax {
        x_m,
        argmax,
        max_value: rp(p, argmax),
    })
}

/// `Q_p` peaks at `(-p^2 + sqrt(p^4 + 12(1 + p^2))) / (6p)`; it increases on
/// `[0, x_m]`.
pub fn qp_max(p: f64) -> Result<ScalarMax> {
    check_pole(p)?;
    let x_m = (-p * p + (p.powi(4) + 12.0 * (1.0 + p * p)).sqrt()) / (6.0 * p);
    let argmax = x_m.min(1.0);
    Ok(ScalarMax {
        x_m,
        argmax,
        max_value: qp(p, argmax),
    })
}

/// Every applicable check for a concave member: Theorem A disks for
/// `n = 2..=a_max`, the `a_{-1}` and `a_0` regions, the `a_{-1}, a_0`
/// combination, and the tail relation for `n = 3..=tail_max`.
pub fn concave_reports(f: &MemberFunction, a_max: usize, tail_max: usize) -> Result<Vec<InequalityReport>> {
    if !f.family().is_concave() {
        return Err(Error::WrongFamily { expected: "concave" });
    }
    let p = f.p();
    let big_a = taylor_coeffs(f, a_max)?;
    let small_a = laurent_coeffs(f, tail_max.saturating_sub(1).max(0))?;
    let am1 = f.laurent().coeff(-1);
    let a0 = f.laurent().coeff(0);
    let mut out = Vec::new();
    for n in 2..=a_max {
        out.push(check_theorem_a(&big_a, n, p)?);
    }
    out.push(check_wirths_am1(am1, p)?);
    out.push(check_bpw_a0(a0, p)?);
    out.push(check_thm1(am1, a0, p)?);
    for n in 3..=tail_max {
        out.push(check_thm2(&small_a, n, p)?);
    }
    Ok(out)
}

/// Every applicable check for a starlike member (the historical disk only
/// when `include_deprecated`).
pub fn starlike_reports(f: &MemberFunction, include_deprecated: bool) -> Result<Vec<InequalityReport>> {
    let w0 = f.family().w0().ok_or(Error::WrongFamily { expected: "starlike" })?;
    let p = f.p();
    let am1 = f.laurent().coeff(-1);
    let a0 = f.laurent().coeff(0);
    let mut out = check_w0_disk(w0, p)?;
    out.push(check_k_bound(w0, p)?);
    out.extend(check_thm6_i(am1, w0, p)?);
    out.push(check_thm6_ii(a0, w0, p)?);
    out.extend(check_derived_bounds(am1, a0, w0, p)?);
    out.push(check_thm7_lower(am1, w0, p)?);
    if include_deprecated {
        #[allow(deprecated)]
        out.push(check_livingston_original(am1, w0, p)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{closed_form_g, extremal_ftheta, Family, StarlikeCenter};
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn theorem_a_disk_at_half() {
        let (center, radius) = theorem_a_disk(2, 0.5);
        assert!((center - 2.1).abs() < 1e-15);
        assert!((radius - 0.4).abs() < 1e-15);
    }

    #[test]
    fn theorem_a_rejects_small_n_and_wrong_kind() {
        let f = extremal_ftheta(0.5, 0.0, 4).unwrap();
        let big_a = taylor_coeffs(&f, 4).unwrap();
        assert!(check_theorem_a(&big_a, 1, 0.5).is_err());
        let small_a = laurent_coeffs(&f, 4).unwrap();
        assert!(matches!(
            check_theorem_a(&small_a, 2, 0.5),
            Err(Error::WrongCoefficientKind { .. })
        ));
        assert!(check_thm2(&small_a, 2, 0.5).is_err());
    }

    #[test]
    fn ftheta_is_sharp_for_the_disk_bounds() {
        for &p in &[0.2, 0.5, 0.7] {
            for &theta in &[0.0, 1.0, PI, 4.0] {
                let f = extremal_ftheta(p, theta, 12).unwrap();
                let reports = concave_reports(&f, 10, 8).unwrap();
                for r in &reports {
                    match r.id {
                        InequalityId::TheoremA | InequalityId::WirthsAm1 | InequalityId::BpwA0 => {
                            assert!(r.sharp, "{r:?}")
                        }
                        InequalityId::Thm2 => {
                            assert!(r.lhs < 1e-10 && r.rhs.abs() < 1e-10, "{r:?}")
                        }
                        _ => {}
                    }
                }
            }
        }
    }

    #[test]
    fn g_is_sharp_for_thm1_and_wirths() {
        let p = 0.5;
        let g = closed_form_g(Family::Concave { p }, 6).unwrap();
        let am1 = g.laurent().coeff(-1);
        let a0 = g.laurent().coeff(0);
        let r = check_thm1(am1, a0, p).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12 && r.sharp);
        let w = check_wirths_am1(am1, p).unwrap();
        assert!((w.lhs - 1.0 / 15.0).abs() < 1e-12 && w.sharp);
    }

    #[test]
    fn bpw_range_flag() {
        let r = check_bpw_a0(c(0.0), 0.8).unwrap();
        assert!(!r.validity.is_in_range());
        assert!(r.lhs.is_finite());
    }

    #[test]
    fn w0_disk_boundary_and_center() {
        let p = 0.35_f64;
        for w0 in [c(-p / (1.0 + p).powi(2)), c(-p / (1.0 - p).powi(2))] {
            let r = check_w0_disk(w0, p).unwrap();
            assert!(r[0].margin.abs() < 1e-12, "{:?}", r[0]);
        }
        let r = check_w0_disk(c(-p / (1.0 + p).powi(2)), p).unwrap();
        assert!(r[1].margin.abs() < 1e-15);
        let r = check_w0_disk(c(-p / (1.0 - p).powi(2)), p).unwrap();
        assert!(r[2].margin.abs() < 1e-15);
        let q = (1.0 - p * p).powi(2);
        let r = check_w0_disk(c(-p * (1.0 + p * p) / q), p).unwrap();
        assert!((r[0].margin - 2.0 * p * p / q).abs() < 1e-15);
        assert!(check_w0_disk(c(0.0), p).is_err());
    }

    #[test]
    fn starlike_sharpness_of_g() {
        for &p in &[0.2, 0.4, 0.6] {
            let lower = StarlikeCenter::lower(p).unwrap().w0();
            let g = closed_form_g(Family::Starlike { p, w0: lower }, 6).unwrap();
            let am1 = g.laurent().coeff(-1);
            let a0 = g.laurent().coeff(0);
            let i = check_thm6_i(am1, lower, p).unwrap();
            assert!(i[0].sharp && i[1].sharp, "{i:?}");
            assert!(check_thm6_ii(a0, lower, p).unwrap().sharp);
            let d = check_derived_bounds(am1, a0, lower, p).unwrap();
            assert!(d[0].sharp && d[1].sharp, "{d:?}");
            assert!(check_k_bound(lower, p).unwrap().sharp);

            let upper = StarlikeCenter::upper(p).unwrap().w0();
            assert!(check_thm7_lower(am1, upper, p).unwrap().sharp);
        }
    }

    #[test]
    #[allow(deprecated)]
    fn historical_disk_fails_on_counterexample() {
        for k in 1..=9 {
            let p = k as f64 / 10.0;
            let w0 = c(-p / (1.0 + p * p));
            let am1 = c(-p * p / (1.0 - p * p));
            let r = check_livingston_original(am1, w0, p).unwrap();
            assert!(r.margin < 0.0 && r.is_violation(), "{r:?}");
            assert!(check_thm7_lower(am1, w0, p).unwrap().holds());
        }
    }

    #[test]
    fn scalar_maximizers_closed_forms() {
        let r = rp_max(0.5).unwrap();
        assert!((r.x_m - 1.5).abs() < 1e-15 && (r.max_value - 1.5).abs() < 1e-15);
        let r = rp_max(GOLDEN).unwrap();
        assert!((r.x_m - 1.0).abs() < 1e-12);
        let r = rp_max(0.8).unwrap();
        assert!((r.x_m - 0.45).abs() < 1e-15);
        assert!(r.max_value > rp(0.8, 1.0));

        let q = qp_max(0.5).unwrap();
        let expected = (-0.25 + (0.0625f64 + 15.0).sqrt()) / 3.0;
        assert!((q.x_m - expected).abs() < 1e-15 && q.x_m > 1.2103 && q.x_m < 1.2104);
        assert!((q.max_value - 2.875).abs() < 1e-15);
        assert!(qp_max(GOLDEN).unwrap().x_m >= 1.0);
    }
}
