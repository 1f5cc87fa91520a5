//! Weight vectors, their normalization and inclines, and the real-number
//! carrier used for thresholds and shifts.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::numeric::HighPrec;
use crate::surd::{Surd, SurdParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightsError {
    #[error("at least one weight is required")]
    Empty,
    #[error("weight {index} is not positive: {value}")]
    NonPositive { index: usize, value: String },
    #[error("cannot parse weight {index}: {source}")]
    Parse { index: usize, source: SurdParseError },
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
}

/// Named weight vectors with linearly independent surd entries.
pub const PRESETS: &[(&str, &str)] = &[
    ("sqrt2", "1,sqrt2"),
    ("golden", "1,phi"),
    ("sqrt2-sqrt3", "1,sqrt2,sqrt3"),
    ("sqrt235", "sqrt2,sqrt3,sqrt5"),
    ("sqrt2-sqrt3-sqrt5", "1,sqrt2,sqrt3,sqrt5"),
];

/// A real number that is either exact (a surd) or a floating approximation.
#[derive(Clone, PartialEq)]
pub enum Real {
    Exact(Surd),
    Numeric(HighPrec),
}

impl Real {
    pub fn to_high_prec(&self, bits: usize) -> HighPrec {
        match self {
            Real::Exact(s) => s.to_high_prec(bits),
            Real::Numeric(h) => h.with_precision(bits),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(s) => s.to_f64(),
            Real::Numeric(h) => h.to_f64(),
        }
    }

    pub fn as_exact(&self) -> Option<&Surd> {
        match self {
            Real::Exact(s) => Some(s),
            Real::Numeric(_) => None,
        }
    }

    /// The exact value, treating a float as the dyadic rational it stores.
    pub fn to_surd(&self) -> Surd {
        match self {
            Real::Exact(s) => s.clone(),
            Real::Numeric(h) => Surd::from_rational(h.to_rational()),
        }
    }

    pub fn signum(&self) -> Ordering {
        match self {
            Real::Exact(s) => s.signum(),
            Real::Numeric(h) => h.signum(),
        }
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(s) => write!(f, "{s}"),
            Real::Numeric(h) => write!(f, "{h}"),
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl From<Surd> for Real {
    fn from(s: Surd) -> Self {
        Real::Exact(s)
    }
}

impl From<HighPrec> for Real {
    fn from(h: HighPrec) -> Self {
        Real::Numeric(h)
    }
}

impl From<i64> for Real {
    fn from(n: i64) -> Self {
        Real::Exact(Surd::from_integer(n))
    }
}

impl From<BigRational> for Real {
    fn from(q: BigRational) -> Self {
        Real::Exact(Surd::from_rational(q))
    }
}

/// An `f64` is taken at its exact binary value.
impl From<f64> for Real {
    fn from(x: f64) -> Self {
        match Surd::from_f64(x) {
            Some(s) => Real::Exact(s),
            None => Real::Numeric(HighPrec::from_f64(x, 64)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Exact(Vec<Surd>),
    Numeric(Vec<HighPrec>),
}

/// A weight vector `w` with positive entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights {
    repr: Repr,
}

impl Weights {
    pub fn exact(w: Vec<Surd>) -> Result<Self, WeightsError> {
        if w.is_empty() {
            return Err(WeightsError::Empty);
        }
        for (index, wj) in w.iter().enumerate() {
            if !wj.is_positive() {
                return Err(WeightsError::NonPositive { index, value: wj.to_string() });
            }
        }
        Ok(Weights { repr: Repr::Exact(w) })
    }

    /// Weights known only approximately. Equality with a threshold is then
    /// undecidable; counts fail with a boundary ambiguity instead of guessing.
    pub fn numeric(w: Vec<HighPrec>) -> Result<Self, WeightsError> {
        if w.is_empty() {
            return Err(WeightsError::Empty);
        }
        for (index, wj) in w.iter().enumerate() {
            if wj.signum() != Ordering::Greater {
                return Err(WeightsError::NonPositive { index, value: wj.to_string() });
            }
        }
        Ok(Weights { repr: Repr::Numeric(w) })
    }

    /// Comma-separated surd expressions such as `"1, sqrt2, (1+sqrt5)/2"`.
    pub fn parse(s: &str) -> Result<Self, WeightsError> {
        let w = s
            .split(',')
            .enumerate()
            .map(|(index, part)| part.trim().parse::<Surd>().map_err(|source| WeightsError::Parse { index, source }))
            .collect::<Result<Vec<_>, _>>()?;
        Weights::exact(w)
    }

    pub fn preset(name: &str) -> Result<Self, WeightsError> {
        PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, spec)| Weights::parse(spec).expect("preset parses"))
            .ok_or_else(|| WeightsError::UnknownPreset(name.to_string()))
    }

    pub fn dim(&self) -> usize {
        match &self.repr {
            Repr::Exact(w) => w.len(),
            Repr::Numeric(w) => w.len(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact(_))
    }

    pub fn surds(&self) -> Option<&[Surd]> {
        match &self.repr {
            Repr::Exact(w) => Some(w),
            Repr::Numeric(_) => None,
        }
    }

    pub fn numeric_values(&self) -> Option<&[HighPrec]> {
        match &self.repr {
            Repr::Exact(_) => None,
            Repr::Numeric(w) => Some(w),
        }
    }

    pub fn get(&self, j: usize) -> Real {
        match &self.repr {
            Repr::Exact(w) => Real::Exact(w[j].clone()),
            Repr::Numeric(w) => Real::Numeric(w[j].clone()),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        (0..self.dim()).map(|j| self.get(j).to_f64()).collect()
    }

    pub fn to_high_prec(&self, bits: usize) -> Vec<HighPrec> {
        (0..self.dim()).map(|j| self.get(j).to_high_prec(bits)).collect()
    }

    /// `w / |w|`.
    pub fn normalized(&self, bits: usize) -> Vec<HighPrec> {
        let w = self.to_high_prec(bits + 32);
        let mut norm2 = HighPrec::zero(bits + 32);
        for wj in &w {
            norm2 = &norm2 + &(wj * wj);
        }
        let norm = norm2.sqrt();
        w.iter().map(|wj| (wj / &norm).with_precision(bits)).collect()
    }

    /// `c * w` for a positive exact scalar.
    pub fn scaled(&self, c: &Surd) -> Result<Self, WeightsError> {
        match &self.repr {
            Repr::Exact(w) => Weights::exact(w.iter().map(|wj| wj * c).collect()),
            Repr::Numeric(w) => {
                let ch = c.to_high_prec(w[0].precision_bits());
                Weights::numeric(w.iter().map(|wj| wj * &ch).collect())
            }
        }
    }

    /// Incline `theta_{j,l} = w_l / w_j`.
    pub fn incline(&self, j: usize, l: usize) -> Real {
        match &self.repr {
            Repr::Exact(w) => Real::Exact(&w[l] / &w[j]),
            Repr::Numeric(w) => Real::Numeric(&w[l] / &w[j]),
        }
    }

    /// Row `j` of the incline matrix without its diagonal entry.
    pub fn incline_row(&self, j: usize) -> Vec<Real> {
        (0..self.dim()).filter(|&l| l != j).map(|l| self.incline(j, l)).collect()
    }

    /// True when some incline is rational (decidable only for exact weights).
    pub fn has_rational_incline(&self) -> Option<bool> {
        let w = self.surds()?;
        for j in 0..w.len() {
            for l in 0..w.len() {
                if j != l && (&w[l] / &w[j]).is_rational() {
                    return Some(true);
                }
            }
        }
        Some(false)
    }

    /// `sum_j w_j`.
    pub fn sum(&self) -> Real {
        match &self.repr {
            Repr::Exact(w) => Real::Exact(w.iter().fold(Surd::zero(), |acc, wj| &acc + wj)),
            Repr::Numeric(w) => {
                let bits = w.iter().map(|x| x.precision_bits()).max().unwrap_or(64);
                Real::Numeric(w.iter().fold(HighPrec::zero(bits), |acc, wj| &acc + wj))
            }
        }
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.dim()).map(|j| self.get(j).to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        for (name, _) in PRESETS {
            let w = Weights::preset(name).unwrap();
            assert_eq!(w.has_rational_incline(), Some(false), "{name}");
        }
        assert!(Weights::preset("nope").is_err());
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(matches!(Weights::parse("1,-sqrt2"), Err(WeightsError::NonPositive { index: 1, .. })));
        assert!(matches!(Weights::parse("1,sqrt("), Err(WeightsError::Parse { index: 1, .. })));
        assert!(Weights::exact(vec![]).is_err());
    }

    #[test]
    fn inclines_are_reciprocal() {
        let w = Weights::preset("sqrt2-sqrt3").unwrap();
        for j in 0..3 {
            for l in 0..3 {
                let p = &w.incline(j, l).to_surd() * &w.incline(l, j).to_surd();
                assert_eq!(p, Surd::one());
            }
        }
        assert_eq!(w.incline(0, 1).to_surd(), Surd::sqrt(2));
    }

    #[test]
    fn normalization_has_unit_norm() {
        let w = Weights::parse("1,sqrt2,sqrt3").unwrap();
        let n = w.normalized(128);
        let s: f64 = n.iter().map(|x| x.to_f64() * x.to_f64()).sum();
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rational_incline_detected() {
        let w = Weights::parse("2, 3").unwrap();
        assert_eq!(w.has_rational_incline(), Some(true));
    }
}
