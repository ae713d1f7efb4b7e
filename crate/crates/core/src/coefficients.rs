//! The three coefficient systems: Taylor `A_n` about 0, Laurent `a_n` about
//! the pole, and generator coefficients `c_n` about the pole.
//!
//! Each [`CoefficientVector`] carries its starting index, and callers read
//! entries through [`CoefficientVector::get`] by mathematical index.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::MemberFunction;
use crate::report::format_number;
use crate::schur::SchurExpansion;
use crate::series::check_pole;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientKind {
    /// `A_n`, starting at `n = 1`.
    TaylorA,
    /// `a_n`, starting at `n = -1`.
    LaurentA,
    /// `c_n`, starting at `n = 0`.
    SchurC,
}

impl CoefficientKind {
    pub fn start(self) -> isize {
        match self {
            Self::TaylorA => 1,
            Self::LaurentA => -1,
            Self::SchurC => 0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::TaylorA => "taylor_A",
            Self::LaurentA => "laurent_a",
            Self::SchurC => "schur_c",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    kind: CoefficientKind,
    p: f64,
    values: Vec<Complex64>,
}

impl CoefficientVector {
    pub fn new(kind: CoefficientKind, p: f64, values: Vec<Complex64>) -> Self {
        Self { kind, p, values }
    }

    pub fn kind(&self) -> CoefficientKind {
        self.kind
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn start(&self) -> isize {
        self.kind.start()
    }

    /// Largest stored index.
    pub fn last(&self) -> isize {
        self.start() + self.values.len() as isize - 1
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Coefficient with mathematical index `n`.
    pub fn get(&self, n: isize) -> Option<Complex64> {
        let i = n - self.start();
        if i < 0 {
            return None;
        }
        self.values.get(i as usize).copied()
    }

    pub(crate) fn require(&self, n: isize) -> Result<Complex64> {
        self.get(n).ok_or(Error::OrderExceeded {
            requested: n.max(0) as usize,
            available: self.last().max(0) as usize,
        })
    }

    pub(crate) fn expect_kind(&self, kind: CoefficientKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::WrongCoefficientKind {
                expected: kind.as_str(),
                found: self.kind.as_str(),
            });
        }
        Ok(())
    }

    /// `(n, value)` pairs in index order.
    pub fn iter(&self) -> impl Iterator<Item = (isize, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.start() + i as isize, *v))
    }
}

/// `(a_{-1}, a_0, ..., a_N)`.
pub fn laurent_coeffs(f: &MemberFunction, n: usize) -> Result<CoefficientVector> {
    let lau = f.laurent();
    if n > lau.order() {
        return Err(Error::OrderExceeded {
            requested: n,
            available: lau.order(),
        });
    }
    let values = (-1..=n as isize).map(|k| lau.coeff(k)).collect();
    Ok(CoefficientVector::new(CoefficientKind::LaurentA, f.p(), values))
}

/// `(A_1, ..., A_N)`.
pub fn taylor_coeffs(f: &MemberFunction, n: usize) -> Result<CoefficientVector> {
    let t = f.taylor();
    if n > t.order() {
        return Err(Error::OrderExceeded {
            requested: n,
            available: t.order(),
        });
    }
    let values = (1..=n).map(|k| t.coeff(k)).collect();
    Ok(CoefficientVector::new(CoefficientKind::TaylorA, f.p(), values))
}

pub fn schur_coeffs(e: &SchurExpansion) -> CoefficientVector {
    CoefficientVector::new(CoefficientKind::SchurC, e.p, e.coeffs.clone())
}

/// Generator value at the pole implied by a concave member's residue:
/// `c_0 = (1 - p^4) a_{-1} / p^4 + 1/p^2`.
pub fn c0_from_am1(am1: Complex64, p: f64) -> Result<Complex64> {
    check_pole(p)?;
    let p2 = p * p;
    let p4 = p2 * p2;
    Ok(am1 * ((1.0 - p4) / p4) + 1.0 / p2)
}

pub const COEFFICIENT_COLUMNS: [&str; 5] = ["kind", "n", "re", "im", "modulus"];

/// One row per index: `kind, n, re, im, modulus`.
pub fn write_coefficients_csv<W: Write>(vectors: &[&CoefficientVector], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COEFFICIENT_COLUMNS)?;
    for v in vectors {
        for (n, c) in v.iter() {
            w.write_record([
                v.kind.as_str().to_string(),
                n.to_string(),
                format_number(c.re),
                format_number(c.im),
                format_number(c.norm()),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
