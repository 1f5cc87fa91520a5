//! Continued fractions, distance to the nearest integer and multiplicative
//! approximability profiles of incline rows.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::numeric::HighPrec;
use crate::surd::Surd;
use crate::weights::{Real, Weights};

const TWO_POW_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiophantineError {
    #[error("precision exhausted after {obtained} of {requested} partial quotients")]
    PrecisionExhausted { requested: usize, obtained: usize },
    #[error("expected a positive value")]
    NonPositive,
    #[error("scan bound {0} is below the minimum of 100")]
    ScanTooShort(usize),
    #[error("only {0} envelope samples; at least 5 are needed")]
    InsufficientData(usize),
    #[error("the input is rational")]
    Rational,
}

/// Partial quotients `a_0, a_1, ...` with convergents `p_j / q_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub a: Vec<BigInt>,
    pub p: Vec<BigInt>,
    pub q: Vec<BigInt>,
    /// True when the expansion ended because the value is rational.
    pub terminated: bool,
}

impl ContinuedFraction {
    pub fn from_quotients(a: Vec<BigInt>, terminated: bool) -> Self {
        let (mut p, mut q) = (Vec::with_capacity(a.len()), Vec::with_capacity(a.len()));
        let (mut p1, mut p2) = (BigInt::one(), BigInt::zero());
        let (mut q1, mut q2) = (BigInt::zero(), BigInt::one());
        for aj in &a {
            let pj = aj * &p1 + &p2;
            let qj = aj * &q1 + &q2;
            p2 = std::mem::replace(&mut p1, pj.clone());
            q2 = std::mem::replace(&mut q1, qj.clone());
            p.push(pj);
            q.push(qj);
        }
        ContinuedFraction { a, p, q, terminated }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn convergent(&self, j: usize) -> BigRational {
        BigRational::new(self.p[j].clone(), self.q[j].clone())
    }

    /// `p_j q_{j-1} - p_{j-1} q_j = (-1)^{j-1}` for every `j >= 1`.
    pub fn determinants_hold(&self) -> bool {
        (1..self.len()).all(|j| {
            let det = &self.p[j] * &self.q[j - 1] - &self.p[j - 1] * &self.q[j];
            let expected = if j % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            det == expected
        })
    }
}

fn cf_surd(x: &Surd, n_terms: usize) -> ContinuedFraction {
    let mut a = Vec::with_capacity(n_terms);
    let mut x = x.clone();
    let mut terminated = false;
    while a.len() < n_terms {
        let aj = x.floor();
        let rest = &x - &Surd::from_bigint(aj.clone());
        a.push(aj);
        if rest.is_zero() {
            terminated = true;
            break;
        }
        x = rest.inverse().expect("non-zero remainder");
    }
    ContinuedFraction::from_quotients(a, terminated)
}

fn cf_rational(mut x: BigRational, n_terms: usize) -> (Vec<BigInt>, bool) {
    let mut a = Vec::with_capacity(n_terms);
    while a.len() < n_terms {
        let aj = x.floor().to_integer();
        let rest = &x - BigRational::from_integer(aj.clone());
        a.push(aj);
        if rest.is_zero() {
            return (a, true);
        }
        x = rest.recip();
    }
    (a, false)
}

/// Expands both ends of the uncertainty interval of `x` and keeps the common
/// prefix: every real in the interval shares those partial quotients.
fn cf_high_prec(x: &HighPrec, n_terms: usize) -> Result<ContinuedFraction, DiophantineError> {
    let r = x.to_rational();
    let bits = x.precision_bits() as i32;
    let delta = HighPrec::from_f64(x.abs().to_f64() * 2f64.powi(1 - bits), 64).to_rational();
    let (lo, lo_end) = cf_rational(&r - &delta, n_terms + 1);
    let (hi, hi_end) = cf_rational(&r + &delta, n_terms + 1);
    let mut common = Vec::new();
    for (i, (l, h)) in lo.iter().zip(hi.iter()).enumerate() {
        // a terminating endpoint's last quotient is not shared by its neighbours
        let last_lo = lo_end && i + 1 == lo.len();
        let last_hi = hi_end && i + 1 == hi.len();
        if l != h || last_lo || last_hi {
            break;
        }
        common.push(l.clone());
    }
    if common.len() < n_terms {
        return Err(DiophantineError::PrecisionExhausted { requested: n_terms, obtained: common.len() });
    }
    common.truncate(n_terms);
    Ok(ContinuedFraction::from_quotients(common, false))
}

/// First `n_terms` partial quotients of `x > 0`. Surds are expanded exactly;
/// floats only as far as their precision certifies.
pub fn continued_fraction(x: &Real, n_terms: usize) -> Result<ContinuedFraction, DiophantineError> {
    if x.signum() != Ordering::Greater {
        return Err(DiophantineError::NonPositive);
    }
    match x {
        Real::Exact(s) => Ok(cf_surd(s, n_terms)),
        Real::Numeric(h) => cf_high_prec(h, n_terms),
    }
}

/// `<x>`, the distance from `x` to the nearest integer.
pub fn nearest_int_dist(x: f64) -> f64 {
    let f = x - x.floor();
    f.min(1.0 - f)
}

/// `<x>` for an exact or high-precision real.
pub fn nearest_int_dist_real(x: &Real) -> f64 {
    MultiplierArith::new(x).dist(1)
}

/// `<theta m>` for integer `m`, via an exact rational residue or a 128-bit
/// fixed-point fraction (whose error grows only like `m 2^-128`).
#[derive(Debug, Clone)]
pub struct MultiplierArith {
    fixed: u128,
    rational: Option<(u128, u128)>,
    degenerate: bool,
}

impl MultiplierArith {
    pub fn new(theta: &Real) -> Self {
        let exact_rational = match theta {
            Real::Exact(s) => s.as_rational(),
            Real::Numeric(_) => None,
        };
        let fixed = match theta {
            Real::Exact(s) => s.fixed_fraction(),
            Real::Numeric(h) => {
                let r = h.to_rational();
                let f = &r - BigRational::from_integer(r.floor().to_integer());
                (f * BigRational::from_integer(BigInt::one() << 128usize))
                    .floor()
                    .to_integer()
                    .to_u128()
                    .unwrap_or(0)
            }
        };
        let rational = exact_rational.as_ref().and_then(|q| {
            let den = q.denom().to_u128()?;
            if den >= 1u128 << 64 {
                return None;
            }
            let num = q.numer().mod_floor(q.denom()).to_u128()?;
            Some((num, den))
        });
        MultiplierArith { fixed, rational, degenerate: exact_rational.is_some() }
    }

    /// True when `theta` is rational, so `<theta m>` vanishes for some `m`.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn dist(&self, m: u64) -> f64 {
        if let Some((num, den)) = self.rational {
            let r = num * (m as u128 % den) % den;
            return r.min(den - r) as f64 / den as f64;
        }
        let f = self.fixed.wrapping_mul(m as u128);
        f.min(f.wrapping_neg()) as f64 / TWO_POW_128
    }

    /// `{theta m}` in `[0, 1)`.
    pub fn frac(&self, m: u64) -> f64 {
        if let Some((num, den)) = self.rational {
            return (num * (m as u128 % den) % den) as f64 / den as f64;
        }
        self.fixed.wrapping_mul(m as u128) as f64 / TWO_POW_128
    }
}

/// Minimum of `m^{1+kappa} prod_l <theta_l m>` over `1 <= m <= M`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxMin {
    pub value: f64,
    pub argmin: u64,
    /// Some `theta_l` is rational, so the infimum is zero.
    pub degenerate: bool,
}

/// `v(m) = m prod_l <theta_l m>` for `m = 1..=M` with its running minimum.
#[derive(Debug, Clone)]
pub struct ApproximabilityProfile {
    pub theta: Vec<f64>,
    pub m_max: u64,
    pub values: Vec<f64>,
    pub running_min: Vec<f64>,
    /// Record-setting `m` (strict new running minima).
    pub records: Vec<u64>,
    pub degenerate: bool,
}

impl ApproximabilityProfile {
    pub fn scan(theta: &[Real], m_max: u64) -> Self {
        let ariths: Vec<MultiplierArith> = theta.iter().map(MultiplierArith::new).collect();
        let mut values = Vec::with_capacity(m_max as usize);
        let mut running_min = Vec::with_capacity(m_max as usize);
        let mut records = Vec::new();
        let mut best = f64::INFINITY;
        for m in 1..=m_max {
            let v = ariths.iter().fold(m as f64, |acc, a| acc * a.dist(m));
            if v < best {
                best = v;
                records.push(m);
            }
            values.push(v);
            running_min.push(best);
        }
        ApproximabilityProfile {
            theta: theta.iter().map(Real::to_f64).collect(),
            m_max,
            values,
            running_min,
            records,
            degenerate: ariths.iter().any(MultiplierArith::is_degenerate),
        }
    }

    pub fn value(&self, m: u64) -> f64 {
        self.values[(m - 1) as usize]
    }

    pub fn min_with_kappa(&self, kappa: f64) -> ApproxMin {
        let mut best = (f64::INFINITY, 0u64);
        for (i, v) in self.values.iter().enumerate() {
            let m = (i + 1) as u64;
            let x = if kappa == 0.0 { *v } else { v * (m as f64).powf(kappa) };
            if x < best.0 {
                best = (x, m);
            }
        }
        ApproxMin { value: best.0, argmin: best.1, degenerate: self.degenerate }
    }

    /// Fits the slope of `-log(running min)` against `log m`, sampling the
    /// running minimum at `m = 1, 2, 4, ...`.
    pub fn kappa_estimate(&self) -> Result<KappaEstimate, DiophantineError> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut m = 1u64;
        let mut zero = false;
        while m <= self.m_max {
            let v = self.running_min[(m - 1) as usize];
            if v <= 0.0 {
                zero = true;
                break;
            }
            xs.push((m as f64).ln());
            ys.push(-v.ln());
            m *= 2;
        }
        if zero {
            return Ok(KappaEstimate { kappa_hat: f64::INFINITY, slope: f64::INFINITY, samples: xs.len(), degenerate: true });
        }
        if xs.len() < 5 {
            return Err(DiophantineError::InsufficientData(xs.len()));
        }
        let slope = least_squares_slope(&xs, &ys);
        Ok(KappaEstimate { kappa_hat: slope.max(0.0), slope, samples: xs.len(), degenerate: self.degenerate })
    }
}

/// Fitted exponent of the lower envelope of `m prod <theta_l m>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaEstimate {
    /// Slope clipped at zero; infinite for rational input.
    pub kappa_hat: f64,
    pub slope: f64,
    pub samples: usize,
    pub degenerate: bool,
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

pub fn mult_approx_min(theta: &[Real], m_max: u64, kappa: f64) -> ApproxMin {
    ApproximabilityProfile::scan(theta, m_max).min_with_kappa(kappa)
}

/// `theta_{j,l} = w_l / w_j`, diagonal one.
pub fn incline_matrix(w: &Weights) -> Vec<Vec<Real>> {
    (0..w.dim()).map(|j| (0..w.dim()).map(|l| w.incline(j, l)).collect()).collect()
}

/// One approximability minimum per row of the incline matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct InclineProfile {
    pub rows: Vec<ApproxMin>,
    /// Minimum over the rows.
    pub overall: f64,
    pub degenerate: bool,
}

pub fn incline_profile(w: &Weights, m_max: u64, kappa: f64) -> InclineProfile {
    let rows: Vec<ApproxMin> = (0..w.dim()).map(|j| mult_approx_min(&w.incline_row(j), m_max, kappa)).collect();
    let overall = rows.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    let degenerate = rows.iter().any(|r| r.degenerate);
    InclineProfile { rows, overall, degenerate }
}

pub fn estimate_kappa(theta: &[Real], m_max: u64) -> Result<KappaEstimate, DiophantineError> {
    if m_max < 100 {
        return Err(DiophantineError::ScanTooShort(m_max as usize));
    }
    ApproximabilityProfile::scan(theta, m_max).kappa_estimate()
}

/// `n = ceil(c ln t)`, with values within `1e-9` of an integer taken as that
/// integer.
pub fn log_term_count(t: f64, c: f64) -> usize {
    let x = c * t.ln();
    let r = x.round();
    let n = if (x - r).abs() < 1e-9 { r } else { x.ceil() };
    n.max(0.0) as usize
}

/// `sum_{j=1}^{n} a_j` with `n = ceil(c ln t)`.
pub fn hl_partial_quotient_bound(theta: &Real, t: f64, c: f64) -> Result<BigInt, DiophantineError> {
    if let Real::Exact(s) = theta {
        if s.is_rational() {
            return Err(DiophantineError::Rational);
        }
    }
    let n = log_term_count(t, c);
    let cf = continued_fraction(theta, n + 1)?;
    Ok(cf.a.iter().skip(1).take(n).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(s: &str) -> Real {
        Real::Exact(s.parse().unwrap())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn classical_expansions() {
        let cf = continued_fraction(&ex("sqrt2"), 8).unwrap();
        assert_eq!(cf.a, ints(&[1, 2, 2, 2, 2, 2, 2, 2]));
        assert!(cf.determinants_hold());
        let cf = continued_fraction(&ex("phi"), 6).unwrap();
        assert_eq!(cf.a, ints(&[1; 6]));
        let cf = continued_fraction(&ex("sqrt3"), 5).unwrap();
        assert_eq!(cf.a, ints(&[1, 1, 2, 1, 2]));
        let cf = continued_fraction(&ex("43/19"), 10).unwrap();
        assert_eq!(cf.a, ints(&[2, 3, 1, 4]));
        assert!(cf.terminated);
        assert_eq!(cf.convergent(3), BigRational::new(43.into(), 19.into()));
    }

    #[test]
    fn pi_at_two_precisions() {
        let a = continued_fraction(&Real::Numeric(HighPrec::pi(256)), 10).unwrap();
        let b = continued_fraction(&Real::Numeric(HighPrec::pi(512)), 10).unwrap();
        assert_eq!(a.a, b.a);
        assert_eq!(a.a[..5], ints(&[3, 7, 15, 1, 292])[..]);
    }

    #[test]
    fn precision_exhaustion() {
        let x = Real::Numeric(HighPrec::from_u64(2, 64).sqrt());
        assert!(matches!(
            continued_fraction(&x, 200),
            Err(DiophantineError::PrecisionExhausted { requested: 200, .. })
        ));
    }

    #[test]
    fn distances() {
        assert_eq!(nearest_int_dist(5.0), 0.0);
        assert_eq!(nearest_int_dist(0.5), 0.5);
        assert!((nearest_int_dist_real(&ex("3*sqrt2")) - 0.242_640_687_119_285_1).abs() < 1e-15);
        assert!((nearest_int_dist(-0.3) - nearest_int_dist(0.3)).abs() < 1e-15);
    }

    #[test]
    fn rational_is_degenerate() {
        let r = mult_approx_min(&[ex("1/2")], 4, 0.0);
        assert_eq!(r.value, 0.0);
        assert_eq!(r.argmin, 2);
        assert!(r.degenerate);
        let k = estimate_kappa(&[ex("1/2")], 100).unwrap();
        assert!(k.kappa_hat.is_infinite() && k.degenerate);
    }

    #[test]
    fn golden_minimum() {
        let r = mult_approx_min(&[ex("phi")], 100, 0.0);
        assert_eq!(r.argmin, 1);
        assert!((r.value - 0.381_966_011_250_105_1).abs() < 1e-12);
    }

    #[test]
    fn partial_quotient_bound() {
        let t = 10f64.exp();
        assert_eq!(hl_partial_quotient_bound(&ex("phi"), t, 1.0).unwrap(), BigInt::from(10));
        assert_eq!(hl_partial_quotient_bound(&ex("sqrt2"), t, 1.0).unwrap(), BigInt::from(20));
        assert!(hl_partial_quotient_bound(&ex("3/2"), t, 1.0).is_err());
    }
}
