//! Structured inequality reports and their CSV / JSON renderings.
//!
//! JSON field names: `id`, `lhs`, `rhs`, `margin`, `p`, `n`, `validity`, `sharp`.
//! CSV columns use the same names in the same order.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::tolerance::{is_sharp, MARGIN_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum InequalityId {
    #[serde(rename = "schwarz_pick")]
    SchwarzPick,
    #[serde(rename = "ruscheweyh")]
    Ruscheweyh,
    #[serde(rename = "theorem_a")]
    TheoremA,
    #[serde(rename = "wirths_am1")]
    WirthsAm1,
    #[serde(rename = "bpw_a0")]
    BpwA0,
    #[serde(rename = "thm1")]
    Thm1,
    #[serde(rename = "thm2")]
    Thm2,
    #[serde(rename = "w0_disk")]
    W0Disk,
    #[serde(rename = "w0_modulus_lower")]
    W0ModulusLower,
    #[serde(rename = "w0_modulus_upper")]
    W0ModulusUpper,
    #[serde(rename = "k_bound")]
    KBound,
    #[serde(rename = "thm6_i")]
    Thm6I,
    #[serde(rename = "thm6_i_weak")]
    Thm6IWeak,
    #[serde(rename = "thm6_ii")]
    Thm6Ii,
    #[serde(rename = "derived_am1")]
    DerivedAm1,
    #[serde(rename = "derived_a0")]
    DerivedA0,
    #[serde(rename = "thm7_lower")]
    Thm7Lower,
    #[serde(rename = "livingston_original")]
    LivingstonOriginal,
}

/// Whether the checked quantity must stay below or above its bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// `lhs <= rhs`, margin `rhs - lhs`.
    Upper,
    /// `lhs >= rhs`, margin `lhs - rhs`.
    Lower,
}

impl InequalityId {
    pub const ALL: [InequalityId; 18] = [
        Self::SchwarzPick,
        Self::Ruscheweyh,
        Self::TheoremA,
        Self::WirthsAm1,
        Self::BpwA0,
        Self::Thm1,
        Self::Thm2,
        Self::W0Disk,
        Self::W0ModulusLower,
        Self::W0ModulusUpper,
        Self::KBound,
        Self::Thm6I,
        Self::Thm6IWeak,
        Self::Thm6Ii,
        Self::DerivedAm1,
        Self::DerivedA0,
        Self::Thm7Lower,
        Self::LivingstonOriginal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::SchwarzPick => "schwarz_pick",
            Self::Ruscheweyh => "ruscheweyh",
            Self::TheoremA => "theorem_a",
            Self::WirthsAm1 => "wirths_am1",
            Self::BpwA0 => "bpw_a0",
            Self::Thm1 => "thm1",
            Self::Thm2 => "thm2",
            Self::W0Disk => "w0_disk",
            Self::W0ModulusLower => "w0_modulus_lower",
            Self::W0ModulusUpper => "w0_modulus_upper",
            Self::KBound => "k_bound",
            Self::Thm6I => "thm6_i",
            Self::Thm6IWeak => "thm6_i_weak",
            Self::Thm6Ii => "thm6_ii",
            Self::DerivedAm1 => "derived_am1",
            Self::DerivedA0 => "derived_a0",
            Self::Thm7Lower => "thm7_lower",
            Self::LivingstonOriginal => "livingston_original",
        }
    }

    pub fn bound(self) -> Bound {
        match self {
            Self::W0ModulusLower | Self::Thm7Lower => Bound::Lower,
            _ => Bound::Upper,
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InequalityId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| *c != '_' && *c != '-')
            .collect::<String>()
            .to_ascii_lowercase();
        let id = match key.as_str() {
            "schwarzpick" => Self::SchwarzPick,
            "ruscheweyh" => Self::Ruscheweyh,
            "theorema" => Self::TheoremA,
            "wirths" | "wirthsam1" => Self::WirthsAm1,
            "bpw" | "bpwa0" => Self::BpwA0,
            "thm1" => Self::Thm1,
            "thm2" => Self::Thm2,
            "w0disk" => Self::W0Disk,
            "w0moduluslower" => Self::W0ModulusLower,
            "w0modulusupper" => Self::W0ModulusUpper,
            "kbound" => Self::KBound,
            "thm6i" => Self::Thm6I,
            "thm6iweak" => Self::Thm6IWeak,
            "thm6ii" => Self::Thm6Ii,
            "derivedam1" => Self::DerivedAm1,
            "deriveda0" => Self::DerivedA0,
            "thm7" | "thm7lower" => Self::Thm7Lower,
            "livingston" | "livingstonoriginal" => Self::LivingstonOriginal,
            _ => return Err(format!("unknown inequality id `{s}`")),
        };
        Ok(id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    InRange,
    OutOfRange(String),
}

impl Validity {
    /// In range iff `p <= limit`; otherwise names the interval.
    pub fn up_to(p: f64, limit: f64, label: &str) -> Self {
        if p <= limit {
            Self::InRange
        } else {
            Self::OutOfRange(format!("p = {p} exceeds {label}"))
        }
    }

    pub fn is_in_range(&self) -> bool {
        matches!(self, Self::InRange)
    }
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InRange => f.write_str("in-range"),
            Self::OutOfRange(reason) => write!(f, "out-of-range: {reason}"),
        }
    }
}

impl Serialize for Validity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub id: InequalityId,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub p: f64,
    pub n: Option<usize>,
    pub validity: Validity,
    pub sharp: bool,
}

impl InequalityReport {
    pub fn new(id: InequalityId, lhs: f64, rhs: f64, p: f64, n: Option<usize>, validity: Validity) -> Self {
        let margin = match id.bound() {
            Bound::Upper => rhs - lhs,
            Bound::Lower => lhs - rhs,
        };
        Self {
            id,
            lhs,
            rhs,
            margin,
            p,
            n,
            validity,
            sharp: is_sharp(margin, rhs),
        }
    }

    pub fn holds(&self) -> bool {
        self.margin >= MARGIN_TOL
    }

    /// A failed inequality inside its stated validity range.
    pub fn is_violation(&self) -> bool {
        self.validity.is_in_range() && !self.holds()
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

pub const REPORT_COLUMNS: [&str; 8] = ["id", "lhs", "rhs", "margin", "p", "n", "validity", "sharp"];

pub fn write_reports_csv<W: Write>(reports: &[InequalityReport], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_COLUMNS)?;
    for r in reports {
        w.write_record([
            r.id.as_str().to_string(),
            format_number(r.lhs),
            format_number(r.rhs),
            format_number(r.margin),
            format_number(r.p),
            r.n.map(|n| n.to_string()).unwrap_or_default(),
            r.validity.to_string(),
            r.sharp.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_sets_margin_sign() {
        let up = InequalityReport::new(InequalityId::Thm1, 0.5, 1.0, 0.3, None, Validity::InRange);
        assert_eq!(up.margin, 0.5);
        let low = InequalityReport::new(InequalityId::Thm7Lower, 0.5, 1.0, 0.3, None, Validity::InRange);
        assert_eq!(low.margin, -0.5);
        assert!(low.is_violation());
    }

    #[test]
    fn sharp_flag_relative_and_absolute() {
        let r = InequalityReport::new(InequalityId::TheoremA, 1e6 - 1e-4, 1e6, 0.1, Some(2), Validity::InRange);
        assert!(r.sharp);
        let r = InequalityReport::new(InequalityId::Thm2, 5e-10, 0.0, 0.1, Some(3), Validity::InRange);
        assert!(r.sharp);
        let r = InequalityReport::new(InequalityId::Thm2, 5e-9, 0.0, 0.1, Some(3), Validity::InRange);
        assert!(!r.sharp);
    }

    #[test]
    fn ids_round_trip_through_parser() {
        for id in InequalityId::ALL {
            assert_eq!(id.as_str().parse::<InequalityId>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.as_str()));
        }
        assert_eq!("theoremA".parse::<InequalityId>().unwrap(), InequalityId::TheoremA);
        assert!("nope".parse::<InequalityId>().is_err());
    }

    #[test]
    fn out_of_range_is_not_a_violation() {
        let r = InequalityReport::new(
            InequalityId::Thm1,
            2.0,
            1.0,
            0.8,
            None,
            Validity::up_to(0.8, crate::tolerance::GOLDEN, "(sqrt5-1)/2"),
        );
        assert!(!r.holds());
        assert!(!r.is_violation());
        assert!(r.validity.to_string().starts_with("out-of-range"));
    }

    #[test]
    fn csv_and_json_carry_identical_numbers() {
        let r = InequalityReport::new(InequalityId::WirthsAm1, 0.1 + 0.2, 1.0 / 3.0, 0.5, None, Validity::InRange);
        let mut buf = Vec::new();
        write_reports_csv(std::slice::from_ref(&r), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        let json: serde_json::Value = serde_json::to_value(&r).unwrap();
        for (col, key) in [(1, "lhs"), (2, "rhs"), (3, "margin"), (4, "p")] {
            let from_csv: f64 = row[col].parse().unwrap();
            assert_eq!(from_csv, json[key].as_f64().unwrap());
        }
        assert_eq!(json["validity"], "in-range");
        assert_eq!(json["id"], "wirths_am1");
    }
}
