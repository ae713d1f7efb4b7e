//! Numerical thresholds shared across the crate.

/// Guard on the leading coefficient modulus in series division.
pub const DIVISION_GUARD: f64 = 1e-14;

/// Default truncation order for expansions.
pub const DEFAULT_ORDER: usize = 32;

/// Slack allowed on `|omega| <= 1` for Schur-class generators.
pub const SCHUR_SLACK: f64 = 1e-12;

/// Re-minima of the membership fields above this count as positive.
pub const MEMBERSHIP_TOL: f64 = -1e-8;

/// Margins above this count as satisfied.
pub const MARGIN_TOL: f64 = -1e-8;

/// Relative (and absolute floor) tolerance for the sharpness flag.
pub const SHARP_TOL: f64 = 1e-9;

/// (sqrt5 - 1)/2, upper end of the validity interval of the a_{-1}/a_0 combination bounds.
pub const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Upper end of the validity interval for the a0 region: sqrt3 - 1.
pub const SQRT3_MINUS_ONE: f64 = 0.732_050_807_568_877_3;

/// Sharpness test used by every report.
pub fn is_sharp(margin: f64, rhs: f64) -> bool {
    margin.abs() <= SHARP_TOL.max(SHARP_TOL * rhs.abs())
}
