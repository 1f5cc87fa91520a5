//! Exact lattice-point counts in right-angled simplices, their leading terms
//! and errors.
//!
//! Counts are computed by dimension reduction: the outer loops run over the
//! largest weights and the innermost coordinate is a single floor. Every
//! floor is estimated in `f64` with an error bound and settled exactly (surd
//! arithmetic) only when the estimate lands near an integer, so strict and
//! non-strict inequalities are always told apart correctly.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::bernoulli::{BernoulliEngine, BernoulliError};
use crate::numeric::{HighPrec, Scalar, DEFAULT_PRECISION_BITS};
use crate::surd::{sign_of_integer_combination, Surd};
use crate::weights::{Real, Weights};

/// Largest number of distinct radicands the exact kernel supports.
pub const MAX_BASIS: usize = 8;

const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CountError {
    #[error("cannot decide which side of the boundary a lattice point lies on (margin {margin:e}, uncertainty {uncertainty:e})")]
    BoundaryAmbiguity { margin: f64, uncertainty: f64 },
    #[error("operation needs exact weights: {0}")]
    UnsupportedRepresentation(&'static str),
    #[error("more than {MAX_BASIS} distinct radicands")]
    BasisTooLarge,
    #[error("integer overflow in the exact kernel")]
    Overflow,
    #[error("expected {expected} shift coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("threshold must be positive")]
    NonPositiveThreshold,
    #[error(transparent)]
    Bernoulli(#[from] BernoulliError),
}

/// Accumulator arithmetic used by the enumeration.
trait Kernel {
    type Acc: Clone;
    fn dim(&self) -> usize;
    /// `acc - n * w_j`.
    fn sub_mul(&self, acc: &Self::Acc, n: u64, j: usize) -> Result<Self::Acc, CountError>;
    /// Approximate value and an absolute error bound.
    fn approx(&self, acc: &Self::Acc) -> (f64, f64);
    fn weight_approx(&self, j: usize) -> (f64, f64);
    /// Certain sign of `acc`.
    fn sign(&self, acc: &Self::Acc) -> Result<Ordering, CountError>;
}

fn sign_fast<K: Kernel>(k: &K, acc: &K::Acc) -> Result<Ordering, CountError> {
    let (v, e) = k.approx(acc);
    if v > e {
        Ok(Ordering::Greater)
    } else if v < -e {
        Ok(Ordering::Less)
    } else {
        k.sign(acc)
    }
}

/// `(floor(acc / w_j), acc == floor * w_j)` for `acc >= 0`.
fn floor_div<K: Kernel>(k: &K, acc: &K::Acc, j: usize) -> Result<(u64, bool), CountError> {
    let (v, ev) = k.approx(acc);
    let (w, ew) = k.weight_approx(j);
    let q = v / w;
    let eq = (ev + q.abs() * ew) / w + 4.0 * EPS * q.abs() + f64::MIN_POSITIVE;
    let fl = q.floor();
    if fl >= 0.0 && q - fl > eq && fl + 1.0 - q > eq && fl < 9.0e15 {
        return Ok((fl as u64, false));
    }
    let mut m = q.round().max(0.0) as u64;
    loop {
        let r = k.sub_mul(acc, m, j)?;
        match k.sign(&r)? {
            Ordering::Less => m -= 1,
            Ordering::Equal => return Ok((m, true)),
            Ordering::Greater => {
                let r1 = k.sub_mul(&r, 1, j)?;
                match k.sign(&r1)? {
                    Ordering::Less => return Ok((m, false)),
                    Ordering::Equal => return Ok((m + 1, true)),
                    Ordering::Greater => m += 1,
                }
            }
        }
    }
}

/// `(#{x >= 0 : w.x < acc}, #{x >= 0 : w.x <= acc})`.
fn count_nonneg<K: Kernel>(k: &K, acc: &K::Acc) -> Result<(u64, u64), CountError> {
    match sign_fast(k, acc)? {
        Ordering::Less => Ok((0, 0)),
        Ordering::Equal => Ok((0, 1)),
        Ordering::Greater => count_rec(k, acc, k.dim()),
    }
}

fn count_rec<K: Kernel>(k: &K, acc: &K::Acc, level: usize) -> Result<(u64, u64), CountError> {
    if level == 1 {
        let (n, exact) = floor_div(k, acc, 0)?;
        return Ok((if exact { n } else { n + 1 }, n + 1));
    }
    let j = level - 1;
    let (n, _) = floor_div(k, acc, j)?;
    let mut cur = acc.clone();
    let (mut strict, mut nonstrict) = (0u64, 0u64);
    for x in 0..=n {
        if x > 0 {
            cur = k.sub_mul(&cur, 1, j)?;
        }
        let (s, ns) = count_rec(k, &cur, level - 1)?;
        strict += s;
        nonstrict += ns;
    }
    Ok((strict, nonstrict))
}

/// Integer coordinates over a radicand basis, common denominator cleared.
#[derive(Clone, Copy)]
struct Coords([i128; MAX_BASIS]);

struct SurdKernel {
    basis: Vec<u64>,
    roots: Vec<f64>,
    weights: Vec<Coords>,
    weight_approx: Vec<(f64, f64)>,
}

impl SurdKernel {
    /// Kernel for the given (already sorted) weights; returns it together with
    /// the coordinates of `acc`.
    fn new(weights: &[Surd], acc: &Surd) -> Result<(Self, Coords), CountError> {
        let mut basis: Vec<u64> = weights.iter().chain(std::iter::once(acc)).flat_map(|s| s.radicands()).collect();
        basis.sort_unstable();
        basis.dedup();
        if basis.is_empty() {
            basis.push(1);
        }
        if basis.len() > MAX_BASIS {
            return Err(CountError::BasisTooLarge);
        }
        let mut lcm = BigInt::one();
        for s in weights.iter().chain(std::iter::once(acc)) {
            lcm = lcm.lcm(&s.denominator_lcm());
        }
        let to_coords = |s: &Surd| -> Result<Coords, CountError> {
            let mut c = [0i128; MAX_BASIS];
            for (r, v) in s.integer_coefficients(&lcm) {
                let i = basis.binary_search(&r).expect("radicand in basis");
                c[i] = v.to_i128().ok_or(CountError::Overflow)?;
            }
            Ok(Coords(c))
        };
        let wc = weights.iter().map(to_coords).collect::<Result<Vec<_>, _>>()?;
        let ac = to_coords(acc)?;
        let roots: Vec<f64> = basis.iter().map(|&r| (r as f64).sqrt()).collect();
        let mut kernel = SurdKernel { basis, roots, weights: wc, weight_approx: Vec::new() };
        kernel.weight_approx = kernel.weights.iter().map(|w| kernel.approx(w)).collect();
        Ok((kernel, ac))
    }
}

impl Kernel for SurdKernel {
    type Acc = Coords;

    fn dim(&self) -> usize {
        self.weights.len()
    }

    fn sub_mul(&self, acc: &Coords, n: u64, j: usize) -> Result<Coords, CountError> {
        let mut out = *acc;
        let w = &self.weights[j].0;
        let n = n as i128;
        for i in 0..self.basis.len() {
            let p = w[i].checked_mul(n).ok_or(CountError::Overflow)?;
            out.0[i] = out.0[i].checked_sub(p).ok_or(CountError::Overflow)?;
        }
        Ok(out)
    }

    fn approx(&self, acc: &Coords) -> (f64, f64) {
        let mut v = 0.0;
        let mut mag = 0.0;
        for i in 0..self.basis.len() {
            let t = acc.0[i] as f64 * self.roots[i];
            v += t;
            mag += t.abs();
        }
        (v, 4.0 * (self.basis.len() as f64 + 4.0) * EPS * mag)
    }

    fn weight_approx(&self, j: usize) -> (f64, f64) {
        self.weight_approx[j]
    }

    fn sign(&self, acc: &Coords) -> Result<Ordering, CountError> {
        if self.basis.len() == 1 && self.basis[0] == 1 {
            return Ok(acc.0[0].cmp(&0));
        }
        let (v, e) = self.approx(acc);
        if v > e {
            return Ok(Ordering::Greater);
        }
        if v < -e {
            return Ok(Ordering::Less);
        }
        let coeffs: Vec<(u64, BigInt)> = self
            .basis
            .iter()
            .zip(acc.0.iter())
            .filter(|(_, c)| **c != 0)
            .map(|(r, c)| (*r, BigInt::from(*c)))
            .collect();
        Ok(sign_of_integer_combination(&coeffs))
    }
}

/// Floating accumulator with a propagated uncertainty.
#[derive(Clone)]
struct FloatAcc {
    value: HighPrec,
    uncertainty: f64,
}

struct FloatKernel {
    weights: Vec<HighPrec>,
    uncertainty: Vec<f64>,
    bits: usize,
}

impl FloatKernel {
    fn new(weights: &[HighPrec], acc: &Real) -> (Self, FloatAcc) {
        let bits = weights.iter().map(|w| w.precision_bits()).min().unwrap_or(DEFAULT_PRECISION_BITS);
        let work = bits + 64;
        let unc = |x: &HighPrec, b: usize| x.abs().to_f64() * 2f64.powi(1 - b as i32);
        let uncertainty = weights.iter().map(|w| unc(w, w.precision_bits())).collect();
        let (value, acc_unc) = match acc {
            Real::Exact(s) => {
                let v = s.to_high_prec(work);
                let u = unc(&v, work);
                (v, u)
            }
            Real::Numeric(h) => (h.with_precision(work), unc(h, h.precision_bits())),
        };
        let weights = weights.iter().map(|w| w.with_precision(work)).collect();
        (FloatKernel { weights, uncertainty, bits: work }, FloatAcc { value, uncertainty: acc_unc })
    }
}

impl Kernel for FloatKernel {
    type Acc = FloatAcc;

    fn dim(&self) -> usize {
        self.weights.len()
    }

    fn sub_mul(&self, acc: &FloatAcc, n: u64, j: usize) -> Result<FloatAcc, CountError> {
        let nh = HighPrec::from_u64(n, self.bits);
        let value = &acc.value - &(&nh * &self.weights[j]);
        let rounding = value.abs().to_f64() * 2f64.powi(2 - self.bits as i32);
        Ok(FloatAcc { value, uncertainty: acc.uncertainty + n as f64 * self.uncertainty[j] + rounding })
    }

    fn approx(&self, acc: &FloatAcc) -> (f64, f64) {
        let v = acc.value.to_f64();
        (v, acc.uncertainty + 2.0 * EPS * v.abs())
    }

    fn weight_approx(&self, j: usize) -> (f64, f64) {
        let v = self.weights[j].to_f64();
        (v, self.uncertainty[j] + 2.0 * EPS * v)
    }

    fn sign(&self, acc: &FloatAcc) -> Result<Ordering, CountError> {
        let v = acc.value.to_f64();
        if v.abs() > acc.uncertainty {
            Ok(if v > 0.0 { Ordering::Greater } else { Ordering::Less })
        } else {
            Err(CountError::BoundaryAmbiguity { margin: v, uncertainty: acc.uncertainty })
        }
    }
}

/// Which simplex a count refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Simplex {
    /// `x_j > 0`, `w.x < t`.
    Open,
    /// `x_j >= 0`, `w.x <= t`.
    Closed,
}

/// Exact count, leading term and one-sided errors at a single threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct CountReport {
    pub simplex: Simplex,
    pub t: Real,
    pub exact_count: u64,
    /// Count at `t - 0` and `t + 0`.
    pub count_left: u64,
    pub count_right: u64,
    pub leading: HighPrec,
    pub error_left: HighPrec,
    pub error_right: HighPrec,
    /// `max(|error_left|, |error_right|)`.
    pub rrr: HighPrec,
    /// Lattice points of the region's closure lying on `w.x = t`.
    pub tau: u64,
}

/// Outcome of checking the invariance identities at one threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub holds: bool,
    pub open_count: u64,
    pub tau: u64,
    pub closed_count_shifted: u64,
    pub shifted_counts: Vec<u64>,
    /// First failing identity with the index of the offending shift, if any.
    pub violation: Option<(usize, String)>,
    /// `|RRR^-(t) - RRR^+(t - w.e_1)|`, zero up to rounding.
    pub rrr_gap: f64,
}

/// Counting engine for a fixed weight vector.
#[derive(Debug, Clone)]
pub struct SimplexCounter {
    weights: Weights,
    sorted: Vec<usize>,
    bits: usize,
    /// `B*_n(w)` for `n <= d`.
    star: Vec<HighPrec>,
    /// `d! * prod w_j`.
    norm: HighPrec,
    engine: BernoulliEngine,
}

impl SimplexCounter {
    pub fn new(weights: Weights) -> Self {
        Self::with_precision(weights, DEFAULT_PRECISION_BITS)
    }

    pub fn with_precision(weights: Weights, bits: usize) -> Self {
        let d = weights.dim();
        let engine = BernoulliEngine::new(d.max(2));
        let wf = weights.to_f64();
        let mut sorted: Vec<usize> = (0..d).collect();
        sorted.sort_by(|&a, &b| wf[a].partial_cmp(&wf[b]).expect("finite weights"));
        let w = weights.to_high_prec(bits + 32);
        let star = engine.star_numbers(d, &w).expect("capacity covers d");
        let mut norm = HighPrec::from_u64((1..=d as u64).product(), bits + 32);
        for wj in &w {
            norm = &norm * wj;
        }
        SimplexCounter { weights, sorted, bits, star, norm, engine }
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn precision_bits(&self) -> usize {
        self.bits
    }

    pub fn dim(&self) -> usize {
        self.weights.dim()
    }

    /// `(#{x >= 0 : w.x < acc}, #{x >= 0 : w.x <= acc})`.
    fn count_pair(&self, acc: &Real) -> Result<(u64, u64), CountError> {
        match (self.weights.surds(), self.weights.numeric_values()) {
            (Some(w), _) => {
                let sorted: Vec<Surd> = self.sorted.iter().map(|&j| w[j].clone()).collect();
                let (kernel, a) = SurdKernel::new(&sorted, &acc.to_surd())?;
                count_nonneg(&kernel, &a)
            }
            (None, Some(w)) => {
                let sorted: Vec<HighPrec> = self.sorted.iter().map(|&j| w[j].clone()).collect();
                let (kernel, a) = FloatKernel::new(&sorted, acc);
                count_nonneg(&kernel, &a)
            }
            _ => unreachable!("weights are exact or numeric"),
        }
    }

    fn minus(&self, t: &Real, s: &Real) -> Real {
        match (t, s) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a - b),
            _ => {
                let bits = self.bits + 64;
                Real::Numeric(&t.to_high_prec(bits) - &s.to_high_prec(bits))
            }
        }
    }

    /// `N^-(t; w) = #{x : x_j >= 1, w.x < t}`.
    pub fn count_open(&self, t: &Real) -> Result<u64, CountError> {
        Ok(self.count_pair(&self.minus(t, &self.weights.sum()))?.0)
    }

    /// `N^+(t; w) = #{x : x_j >= 0, w.x <= t}`.
    pub fn count_closed(&self, t: &Real) -> Result<u64, CountError> {
        Ok(self.count_pair(t)?.1)
    }

    /// `N(t; w, u) = #{x : x_j > u_j, w.x < t + w.u}`; depends on `u` only
    /// through its fractional parts.
    pub fn count_shifted(&self, t: &Real, u: &[Real]) -> Result<u64, CountError> {
        let acc = self.shifted_acc(t, u)?;
        Ok(self.count_pair(&acc)?.0)
    }

    /// `t - sum_j w_j (1 - {u_j})`: with `x_j = floor(u_j) + 1 + y_j` the
    /// shifted count becomes a count over `y >= 0`.
    fn shifted_acc(&self, t: &Real, u: &[Real]) -> Result<Real, CountError> {
        let d = self.dim();
        if u.len() != d {
            return Err(CountError::DimensionMismatch { expected: d, got: u.len() });
        }
        let exact = self.weights.is_exact() && u.iter().all(|x| x.as_exact().is_some()) && t.as_exact().is_some();
        if exact {
            let w = self.weights.surds().expect("exact");
            let mut acc = t.to_surd();
            for (wj, uj) in w.iter().zip(u) {
                let one_minus = &Surd::one() - &uj.to_surd().fract();
                acc = &acc - &(wj * &one_minus);
            }
            Ok(Real::Exact(acc))
        } else {
            let bits = self.bits + 64;
            let w = self.weights.to_high_prec(bits);
            let one = HighPrec::one(bits);
            let mut acc = t.to_high_prec(bits);
            for (wj, uj) in w.iter().zip(u) {
                let f = uj.to_high_prec(bits).fract();
                acc = &acc - &(wj * &(&one - &f));
            }
            Ok(Real::Numeric(acc))
        }
    }

    /// `tau(t) = #{x : x_j >= 1, w.x = t}`; needs exact weights.
    pub fn tau(&self, t: &Real) -> Result<u64, CountError> {
        if !self.weights.is_exact() {
            return Err(CountError::UnsupportedRepresentation("boundary equality is undecidable for numeric weights"));
        }
        let (s, ns) = self.count_pair(&self.minus(t, &self.weights.sum()))?;
        Ok(ns - s)
    }

    /// `B*_d(x; w) / (d! prod w)`.
    fn leading_at(&self, x: &HighPrec) -> HighPrec {
        let d = self.dim();
        let mut acc = self.star[0].clone();
        for n in 1..=d {
            let b = HighPrec::from_bigint(&binomial(d, n), self.bits + 32);
            acc = &(&acc * x) + &(&b * &self.star[n]);
        }
        (&acc / &self.norm).with_precision(self.bits)
    }

    fn half_sum(&self) -> HighPrec {
        let bits = self.bits + 32;
        let s = self.weights.sum().to_high_prec(bits);
        &s / &HighPrec::from_u64(2, bits)
    }

    /// `L^-(t) = B*_d(t - w.e_{1/2}; w) / (d! prod w)`.
    pub fn leading_open(&self, t: &Real) -> HighPrec {
        let x = &t.to_high_prec(self.bits + 32) - &self.half_sum();
        self.leading_at(&x)
    }

    /// `L^+(t) = B*_d(t + w.e_{1/2}; w) / (d! prod w)`.
    pub fn leading_closed(&self, t: &Real) -> HighPrec {
        let x = &t.to_high_prec(self.bits + 32) + &self.half_sum();
        self.leading_at(&x)
    }

    /// `B*_d(t + w.((u)); w) / (d! prod w)` with `((x)) = {x} - 1/2`.
    pub fn leading_shifted(&self, t: &Real, u: &[Real]) -> Result<HighPrec, CountError> {
        let d = self.dim();
        if u.len() != d {
            return Err(CountError::DimensionMismatch { expected: d, got: u.len() });
        }
        let bits = self.bits + 32;
        let w = self.weights.to_high_prec(bits);
        let uh: Vec<HighPrec> = u
            .iter()
            .map(|x| match x {
                Real::Exact(s) => s.fract().to_high_prec(bits),
                Real::Numeric(h) => h.with_precision(bits).fract(),
            })
            .collect();
        let v = self.engine.periodized_bernoulli(d, &t.to_high_prec(bits), &w, &uh)?;
        Ok((&v / &self.norm).with_precision(self.bits))
    }

    /// Leading term as a function of a floating threshold.
    pub fn leading_f64(&self, simplex: Simplex, t: f64) -> f64 {
        let t = Real::Numeric(HighPrec::from_f64(t, self.bits));
        match simplex {
            Simplex::Open => self.leading_open(&t).to_f64(),
            Simplex::Closed => self.leading_closed(&t).to_f64(),
        }
    }

    /// Count, leading term and both one-sided errors at `t`.
    pub fn error_report(&self, t: &Real, simplex: Simplex) -> Result<CountReport, CountError> {
        if t.signum() != Ordering::Greater {
            return Err(CountError::NonPositiveThreshold);
        }
        let (acc, leading) = match simplex {
            Simplex::Open => (self.minus(t, &self.weights.sum()), self.leading_open(t)),
            Simplex::Closed => (t.clone(), self.leading_closed(t)),
        };
        let (left, right) = self.count_pair(&acc)?;
        let exact_count = match simplex {
            Simplex::Open => left,
            Simplex::Closed => right,
        };
        let to_hp = |n: u64| HighPrec::from_u64(n, self.bits);
        let error_left = &to_hp(left) - &leading;
        let error_right = &to_hp(right) - &leading;
        let rrr = error_left.abs().max(error_right.abs());
        Ok(CountReport {
            simplex,
            t: t.clone(),
            exact_count,
            count_left: left,
            count_right: right,
            leading,
            error_left,
            error_right,
            rrr,
            tau: right - left,
        })
    }

    /// Checks `N^-(t) = N(t - w.{u}; w, {u}) = N^+(t - w.e_1) - tau(t)` for
    /// every shift, and `RRR^-(t) = RRR^+(t - w.e_1)`.
    pub fn invariance_check(&self, t: &Real, shifts: &[Vec<Real>]) -> Result<InvarianceReport, CountError> {
        let open = self.error_report(t, Simplex::Open)?;
        let tau = open.tau;
        let t_shift = self.minus(t, &self.weights.sum());
        let (closed_count_shifted, rrr_gap) = if t_shift.signum() == Ordering::Greater {
            let closed = self.error_report(&t_shift, Simplex::Closed)?;
            (closed.exact_count, (&open.rrr - &closed.rrr).abs().to_f64())
        } else {
            (self.count_pair(&t_shift)?.1, 0.0)
        };
        let mut violation = None;
        if closed_count_shifted.checked_sub(tau) != Some(open.exact_count) {
            violation = Some((
                usize::MAX,
                format!("N^-(t) = {} but N^+(t - w.e_1) - tau(t) = {} - {}", open.exact_count, closed_count_shifted, tau),
            ));
        }
        let mut shifted_counts = Vec::with_capacity(shifts.len());
        for (i, u) in shifts.iter().enumerate() {
            let frac: Vec<Real> = u
                .iter()
                .map(|x| match x {
                    Real::Exact(s) => Real::Exact(s.fract()),
                    Real::Numeric(h) => Real::Numeric(h.fract()),
                })
                .collect();
            let w_dot = self.dot(&frac);
            let n = self.count_shifted(&self.minus(t, &w_dot), &frac)?;
            if n != open.exact_count && violation.is_none() {
                violation = Some((i, format!("N^-(t) = {} but N(t - w.{{u}}; w, {{u}}) = {}", open.exact_count, n)));
            }
            shifted_counts.push(n);
        }
        Ok(InvarianceReport {
            holds: violation.is_none(),
            open_count: open.exact_count,
            tau,
            closed_count_shifted,
            shifted_counts,
            violation,
            rrr_gap,
        })
    }

    fn dot(&self, u: &[Real]) -> Real {
        if let (Some(w), true) = (self.weights.surds(), u.iter().all(|x| x.as_exact().is_some())) {
            let mut acc = Surd::zero();
            for (wj, uj) in w.iter().zip(u) {
                acc = &acc + &(wj * uj.as_exact().expect("exact"));
            }
            Real::Exact(acc)
        } else {
            let bits = self.bits + 64;
            let w = self.weights.to_high_prec(bits);
            let mut acc = HighPrec::zero(bits);
            for (wj, uj) in w.iter().zip(u) {
                acc = &acc + &(wj * &uj.to_high_prec(bits));
            }
            Real::Numeric(acc)
        }
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Membership in `U(delta)`: every coordinate at distance at least `delta`
/// from the integers.
pub fn in_shift_cube(u: &[f64], delta: f64) -> bool {
    u.iter().all(|&x| {
        let f = x - x.floor();
        f.min(1.0 - f) >= delta
    })
}

/// Naive enumeration of `#{x >= 0 : w.x < acc}` and `#{x >= 0 : w.x <= acc}`
/// with exact surd comparisons at every point. Only for small inputs.
pub fn naive_count(weights: &[Surd], acc: &Surd) -> (u64, u64) {
    fn rec(w: &[Surd], acc: &Surd, out: &mut (u64, u64)) {
        match w.split_first() {
            None => match acc.signum() {
                Ordering::Greater => {
                    out.0 += 1;
                    out.1 += 1;
                }
                Ordering::Equal => out.1 += 1,
                Ordering::Less => {}
            },
            Some((w0, rest)) => {
                let mut a = acc.clone();
                while a.signum() != Ordering::Less {
                    rec(rest, &a, out);
                    a = &a - w0;
                }
            }
        }
    }
    let mut out = (0, 0);
    rec(weights, acc, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> SimplexCounter {
        SimplexCounter::new(Weights::parse(s).unwrap())
    }

    fn r(s: &str) -> Real {
        Real::Exact(s.parse().unwrap())
    }

    #[test]
    fn small_counts() {
        let c = w("1,1");
        assert_eq!(c.count_open(&r("2")).unwrap(), 0);
        assert_eq!(c.count_closed(&r("2")).unwrap(), 6);
        assert_eq!(c.count_closed(&r("0")).unwrap(), 1);
        let c = w("1,sqrt2");
        assert_eq!(c.count_open(&r("3")).unwrap(), 1);
        assert_eq!(c.count_open(&r("5")).unwrap(), 5);
    }

    #[test]
    fn matches_naive() {
        let c = w("1,sqrt2,sqrt3");
        let ws: Vec<Surd> = c.weights().surds().unwrap().to_vec();
        for t in ["7", "9.5", "1+sqrt2+sqrt3", "2+2*sqrt2+sqrt3", "12"] {
            let t = r(t);
            let (s, ns) = naive_count(&ws, &t.to_surd());
            assert_eq!(c.count_closed(&t).unwrap(), ns);
            let (s_acc, _) = c.count_pair(&t).unwrap();
            assert_eq!(s_acc, s);
        }
    }

    #[test]
    fn tau_on_constructed_jump() {
        let c = w("1,sqrt2");
        let t = r("3+2*sqrt2");
        assert_eq!(c.tau(&t).unwrap(), 1);
        let c = w("1,1");
        assert_eq!(c.tau(&r("1/2")).unwrap(), 0);
        assert_eq!(c.tau(&r("4")).unwrap(), 3);
    }

    #[test]
    fn numeric_weights_agree_away_from_boundary() {
        let exact = w("1,sqrt2");
        let numeric = SimplexCounter::new(Weights::numeric(exact.weights().to_high_prec(128)).unwrap());
        for t in [3.3, 17.9, 40.01] {
            let t = Real::from(t);
            assert_eq!(exact.count_open(&t).unwrap(), numeric.count_open(&t).unwrap());
        }
        assert!(matches!(numeric.tau(&r("3")), Err(CountError::UnsupportedRepresentation(_))));
    }

    #[test]
    fn numeric_weights_detect_ambiguity() {
        let numeric = SimplexCounter::new(Weights::numeric(vec![HighPrec::one(128), HighPrec::from_u64(2, 128).sqrt()]).unwrap());
        let t = Real::Exact(r("1+sqrt2").to_surd() + Surd::from_integer(2));
        assert!(matches!(numeric.count_open(&t), Err(CountError::BoundaryAmbiguity { .. })));
    }

    #[test]
    fn leading_terms_d2() {
        let c = w("1,1");
        let l = c.leading_open(&r("10")).to_f64();
        assert!((l - (81.0 - 2.0 / 12.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn shifted_counts() {
        let c = w("1,sqrt2");
        let t = r("11");
        let zero = vec![Real::from(0i64), Real::from(0i64)];
        assert_eq!(c.count_shifted(&t, &zero).unwrap(), c.count_open(&t).unwrap());
        let u = vec![r("3/10"), r("-7/10")];
        let v = vec![r("13/10"), r("23/10")];
        assert_eq!(c.count_shifted(&t, &u).unwrap(), c.count_shifted(&t, &v).unwrap());
        let leading_half = c.leading_shifted(&t, &[r("1/2"), r("1/2")]).unwrap();
        let star = c.leading_at(&t.to_high_prec(160));
        assert!((leading_half.to_f64() - star.to_f64()).abs() < 1e-12);
        let l0 = c.leading_shifted(&t, &zero).unwrap();
        assert!((l0.to_f64() - c.leading_open(&t).to_f64()).abs() < 1e-12);
    }

    #[test]
    fn report_limits() {
        let c = w("1,sqrt2");
        let t = r("3+2*sqrt2");
        let rep = c.error_report(&t, Simplex::Open).unwrap();
        assert_eq!(rep.count_right - rep.count_left, 1);
        assert_eq!(rep.tau, 1);
        let rrr = rep.rrr.to_f64();
        assert!(1.0 <= 2.0 * rrr);
    }

    #[test]
    fn invariance() {
        let c = w("1,sqrt2");
        let shifts = vec![vec![r("1/2"), r("1/2")], vec![r("3/7"), r("-5/11")]];
        let rep = c.invariance_check(&r("10"), &shifts).unwrap();
        assert!(rep.holds, "{:?}", rep.violation);
        assert!(rep.rrr_gap < 1e-20);
    }

    #[test]
    fn cube_membership() {
        assert!(in_shift_cube(&[0.5, 1.4], 0.1));
        assert!(!in_shift_cube(&[0.05, 0.5], 0.1));
    }
}
