//! The smoothing bump, its Fourier transform, the sine-product lattice sums
//! `S_2(theta_j, T)`, Spencer sums and the balanced error bound.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use thiserror::Error;

use crate::diophantine::{ApproximabilityProfile, MultiplierArith};
use crate::quadrature::{integrate, QuadratureError};
use crate::weights::{Real, Weights};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeSumError {
    #[error("sin(pi theta m) vanishes at m = {m} for incline {theta}")]
    ZeroSine { m: u64, theta: f64 },
    #[error("smoothing scale must be at least 1, got {0}")]
    BadScale(f64),
    #[error("threshold must be positive, got {0}")]
    BadThreshold(f64),
    #[error("kappa must be non-negative, got {0}")]
    BadKappa(f64),
    #[error("c_kappa must be positive, got {0}")]
    BadConstant(f64),
    #[error("an incline row needs at least one entry")]
    EmptyRow,
    #[error("{terms} terms exceed the limit of {limit}")]
    TooManyTerms { terms: u64, limit: u64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Upper limit on the number of summed terms in one call.
pub const MAX_TERMS: u64 = 1 << 32;

const QUAD_TOL: f64 = 1e-15;
const GRID_STEP: f64 = 1.0 / 128.0;
/// Terms with `m/T` beyond this are dropped from sums and covered by the
/// tail bound instead.
const Y_MAX: f64 = 128.0;
const DECAY_POWER: i32 = 6;
const TRAPEZOID_NODES: usize = 2048;

fn raw_bump(x: f64) -> f64 {
    let s = 1.0 - 4.0 * x * x;
    if s <= 0.0 {
        0.0
    } else {
        (-1.0 / s).exp()
    }
}

/// `|omega~(y)| <= c_a (1 + |y|)^-a`, checked on the cached grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayCertificate {
    pub a: i32,
    pub c_a: f64,
}

impl DecayCertificate {
    pub fn bound(&self, y: f64) -> f64 {
        self.c_a * (1.0 + y.abs()).powi(-self.a)
    }
}

/// The normalized bump `c exp(-1/(1-4x^2))` on `(-1/2, 1/2)` with a cached
/// table of its Fourier transform.
#[derive(Debug, Clone)]
pub struct SmoothingKernel {
    c: f64,
    values: Vec<f64>,
    derivs: Vec<f64>,
    decay: DecayCertificate,
}

impl SmoothingKernel {
    pub fn new() -> Result<Self, LatticeSumError> {
        let mass = 2.0 * integrate(raw_bump, 0.0, 0.5, QUAD_TOL)?;
        let c = 1.0 / mass;
        let n = (Y_MAX / GRID_STEP).round() as usize;
        // The trapezoid rule is spectrally accurate for a flat-ended bump:
        // its error is the aliased transform at distance TRAPEZOID_NODES.
        let h = 1.0 / TRAPEZOID_NODES as f64;
        let nodes: Vec<(f64, f64)> = (1..TRAPEZOID_NODES / 2)
            .map(|k| {
                let x = k as f64 * h;
                (x, 2.0 * c * h * raw_bump(x))
            })
            .collect();
        let centre = c * h * raw_bump(0.0);
        let mut values = Vec::with_capacity(n + 1);
        let mut derivs = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let k = 2.0 * PI * i as f64 * GRID_STEP;
            let (mut v, mut dv) = (centre, 0.0);
            for &(x, wx) in &nodes {
                let (sn, cs) = (k * x).sin_cos();
                v += wx * cs;
                dv -= wx * 2.0 * PI * x * sn;
            }
            values.push(v);
            derivs.push(dv);
        }
        let c_a = values
            .iter()
            .enumerate()
            .map(|(i, v)| v.abs() * (1.0 + i as f64 * GRID_STEP).powi(DECAY_POWER))
            .fold(0.0, f64::max);
        Ok(SmoothingKernel { c, values, derivs, decay: DecayCertificate { a: DECAY_POWER, c_a } })
    }

    /// The shared kernel, built on first use.
    pub fn global() -> &'static SmoothingKernel {
        static KERNEL: OnceLock<SmoothingKernel> = OnceLock::new();
        KERNEL.get_or_init(|| SmoothingKernel::new().expect("bump transform quadrature converges"))
    }

    pub fn normalization(&self) -> f64 {
        self.c
    }

    pub fn decay(&self) -> DecayCertificate {
        self.decay
    }

    /// Largest argument kept in lattice sums.
    pub fn y_max(&self) -> f64 {
        Y_MAX
    }

    pub fn bump(&self, x: f64) -> f64 {
        self.c * raw_bump(x)
    }

    /// Interpolated `omega~(y)`; zero beyond the table.
    pub fn ft(&self, y: f64) -> f64 {
        let y = y.abs();
        if y >= Y_MAX {
            return 0.0;
        }
        let s = y / GRID_STEP;
        let i = s.floor() as usize;
        let u = s - i as f64;
        let (f0, f1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.derivs[i] * GRID_STEP, self.derivs[i + 1] * GRID_STEP);
        let u2 = u * u;
        let u3 = u2 * u;
        (2.0 * u3 - 3.0 * u2 + 1.0) * f0 + (u3 - 2.0 * u2 + u) * d0 + (-2.0 * u3 + 3.0 * u2) * f1 + (u3 - u2) * d1
    }

    /// `omega~(y)` by direct quadrature.
    pub fn ft_direct(&self, y: f64) -> Result<f64, LatticeSumError> {
        ft_direct(self.c, y)
    }
}

fn ft_direct(c: f64, y: f64) -> Result<f64, LatticeSumError> {
    let k = 2.0 * PI * y;
    Ok(2.0 * c * integrate(|x| raw_bump(x) * (k * x).cos(), 0.0, 0.5, QUAD_TOL)?)
}

/// `omega(x)` for the shared kernel.
pub fn bump(x: f64) -> f64 {
    SmoothingKernel::global().bump(x)
}

/// `omega~(y) = int omega(x) e^{-2 i pi y x} dx` (real and even).
pub fn bump_ft(y: f64) -> f64 {
    SmoothingKernel::global().ft(y)
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Lower envelope `m^{1+kappa} prod_l <theta_l m> >= c_kappa` used to bound
/// the tail of a lattice sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub kappa: f64,
    pub c_kappa: f64,
}

impl Envelope {
    /// Fitted from a scan over `m <= m_max`; empirical, not certified.
    pub fn from_scan(theta: &[Real], m_max: u64) -> Self {
        let profile = ApproximabilityProfile::scan(theta, m_max.max(128));
        let kappa = profile.kappa_estimate().map(|k| k.kappa_hat).unwrap_or(0.0);
        let kappa = if kappa.is_finite() { kappa } else { 0.0 };
        let c_kappa = profile.min_with_kappa(kappa).value;
        Envelope { kappa, c_kappa }
    }
}

const ENVELOPE_SCAN: u64 = 1 << 16;

/// One truncated lattice sum with a bound on what was left out.
#[derive(Debug, Clone, PartialEq)]
pub struct S2Row {
    pub theta: Vec<f64>,
    pub value: f64,
    /// Bound on the omitted terms `m > terms`.
    pub tail: f64,
    /// Nominal truncation.
    pub m: u64,
    /// Terms actually summed (the transform vanishes numerically beyond).
    pub terms: u64,
    pub envelope: Envelope,
}

fn check_scale(t_scale: f64) -> Result<(), LatticeSumError> {
    if !(t_scale >= 1.0 && t_scale.is_finite()) {
        return Err(LatticeSumError::BadScale(t_scale));
    }
    Ok(())
}

/// Default truncation `floor(T)^3`.
pub fn default_truncation(t_scale: f64) -> u64 {
    let f = t_scale.floor();
    (f * f * f).min(u64::MAX as f64) as u64
}

fn sine_product(ariths: &[MultiplierArith], theta: &[f64], m: u64) -> Result<f64, LatticeSumError> {
    let mut p = 1.0;
    for (a, th) in ariths.iter().zip(theta) {
        let d = a.dist(m);
        if d == 0.0 {
            return Err(LatticeSumError::ZeroSine { m, theta: *th });
        }
        p *= (PI * d).sin();
    }
    Ok(p)
}

/// `(1/(2^{d-1} pi)) sum_{m=1}^{M} |omega~(m/T)| / (m prod_l |sin(pi theta_l m)|)`
/// over a row of `d-1` inclines; `M` defaults to `floor(T)^3`.
pub fn s2_row(theta: &[Real], t_scale: f64, m: Option<u64>) -> Result<S2Row, LatticeSumError> {
    s2_row_with(theta, t_scale, m, None)
}

pub fn s2_row_with(
    theta: &[Real],
    t_scale: f64,
    m: Option<u64>,
    envelope: Option<Envelope>,
) -> Result<S2Row, LatticeSumError> {
    if theta.is_empty() {
        return Err(LatticeSumError::EmptyRow);
    }
    check_scale(t_scale)?;
    let kernel = SmoothingKernel::global();
    let m_nominal = m.unwrap_or_else(|| default_truncation(t_scale));
    let cutoff = (kernel.y_max() * t_scale).ceil();
    let terms = if cutoff < m_nominal as f64 { cutoff as u64 } else { m_nominal };
    if terms > MAX_TERMS {
        return Err(LatticeSumError::TooManyTerms { terms, limit: MAX_TERMS });
    }
    let ariths: Vec<MultiplierArith> = theta.iter().map(MultiplierArith::new).collect();
    let theta_f: Vec<f64> = theta.iter().map(Real::to_f64).collect();
    let mut acc = Neumaier::default();
    for k in 1..=terms {
        let s = sine_product(&ariths, &theta_f, k)?;
        acc.add(kernel.ft(k as f64 / t_scale).abs() / (k as f64 * s));
    }
    let prefactor = 1.0 / (2f64.powi(theta.len() as i32) * PI);
    let envelope = envelope.unwrap_or_else(|| Envelope::from_scan(theta, terms.clamp(1, ENVELOPE_SCAN)));
    let tail = tail_bound(theta.len(), t_scale, terms, envelope, kernel.decay());
    Ok(S2Row { theta: theta_f, value: prefactor * acc.value(), tail, m: m_nominal, terms, envelope })
}

/// Bound on `sum_{m > start}` of the lattice-sum terms, from the decay
/// certificate and `1/prod|sin(pi x_l)| <= m^{1+kappa} / (2^{d-1} c_kappa)`.
fn tail_bound(rows: usize, t_scale: f64, start: u64, env: Envelope, decay: DecayCertificate) -> f64 {
    let a = decay.a as f64;
    let excess = a - env.kappa - 1.0;
    if excess <= 0.0 || env.c_kappa <= 0.0 {
        return f64::INFINITY;
    }
    let two_pow = 2f64.powi(rows as i32);
    let prefactor = 1.0 / (two_pow * PI);
    let start = (start.max(1)) as f64;
    // sum_{m > s} m^{kappa - a} <= s^{kappa + 1 - a} / (a - kappa - 1)
    prefactor * decay.c_a * t_scale.powf(a) / (two_pow * env.c_kappa) * start.powf(-excess) / excess
}

/// Per-row lattice sums over the incline matrix plus optional Spencer sums.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSumReport {
    pub t_scale: f64,
    pub m: u64,
    pub rows: Vec<S2Row>,
    pub total: f64,
    pub tail: f64,
    pub spencer: Vec<SpencerEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpencerEntry {
    pub row: usize,
    pub k: u64,
    pub value: f64,
}

impl LatticeSumReport {
    /// Appends Spencer sums for each row of `w` and each `K`.
    pub fn add_spencer(&mut self, w: &Weights, ks: &[u64]) -> Result<(), LatticeSumError> {
        for j in 0..w.dim() {
            let row = w.incline_row(j);
            for (k, value) in spencer_sums(&row, ks)? {
                self.spencer.push(SpencerEntry { row: j, k, value });
            }
        }
        Ok(())
    }
}

/// `S_2(Theta, T) = sum_j S_2(theta_j, T)`.
pub fn s2_total(w: &Weights, t_scale: f64, m: Option<u64>) -> Result<LatticeSumReport, LatticeSumError> {
    check_scale(t_scale)?;
    if w.dim() < 2 {
        return Err(LatticeSumError::EmptyRow);
    }
    let rows = (0..w.dim()).map(|j| s2_row(&w.incline_row(j), t_scale, m)).collect::<Result<Vec<_>, _>>()?;
    let total = rows.iter().map(|r| r.value).sum();
    let tail = rows.iter().map(|r| r.tail).sum();
    Ok(LatticeSumReport {
        t_scale,
        m: m.unwrap_or_else(|| default_truncation(t_scale)),
        rows,
        total,
        tail,
        spencer: Vec::new(),
    })
}

/// `sum_{m=1}^{K} 1 / (m prod_l |sin(pi theta_l m)|)`.
pub fn spencer_sum(theta: &[Real], k: u64) -> Result<f64, LatticeSumError> {
    Ok(spencer_sums(theta, &[k])?[0].1)
}

/// Spencer sums at several `K` from one pass.
pub fn spencer_sums(theta: &[Real], ks: &[u64]) -> Result<Vec<(u64, f64)>, LatticeSumError> {
    if theta.is_empty() {
        return Err(LatticeSumError::EmptyRow);
    }
    let k_max = ks.iter().copied().max().unwrap_or(0);
    if k_max > MAX_TERMS {
        return Err(LatticeSumError::TooManyTerms { terms: k_max, limit: MAX_TERMS });
    }
    let mut sorted: Vec<u64> = ks.to_vec();
    sorted.sort_unstable();
    let ariths: Vec<MultiplierArith> = theta.iter().map(MultiplierArith::new).collect();
    let theta_f: Vec<f64> = theta.iter().map(Real::to_f64).collect();
    let mut acc = Neumaier::default();
    let mut at = Vec::with_capacity(sorted.len());
    let mut next = sorted.iter().peekable();
    while next.peek() == Some(&&0) {
        at.push((0, 0.0));
        next.next();
    }
    for m in 1..=k_max {
        acc.add(1.0 / (m as f64 * sine_product(&ariths, &theta_f, m)?));
        while next.peek() == Some(&&m) {
            at.push((m, acc.value()));
            next.next();
        }
    }
    Ok(ks.iter().map(|k| *at.iter().find(|(kk, _)| kk == k).expect("every K visited")).collect())
}

/// Sampled surrogate `S(u, theta_j, T)`, truncated to `0 < |m_j| <= M`. The
/// inner sums over `m_l` run over every `m_l` with `|m_l| / T` inside the
/// cached transform table.
pub fn s_surrogate(theta: &[Real], t_scale: f64, m: u64, u: &[f64]) -> Result<Complex64, LatticeSumError> {
    if theta.is_empty() {
        return Err(LatticeSumError::EmptyRow);
    }
    check_scale(t_scale)?;
    assert_eq!(u.len(), theta.len() + 1, "u has one more entry than the incline row");
    let kernel = SmoothingKernel::global();
    let ariths: Vec<MultiplierArith> = theta.iter().map(MultiplierArith::new).collect();
    let theta_f: Vec<f64> = theta.iter().map(Real::to_f64).collect();
    let inner: Vec<InnerSeries> = u[1..].iter().map(|&ul| InnerSeries::new(kernel, t_scale, ul)).collect();
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    let mut total = Complex64::new(0.0, 0.0);
    for k in 1..=m {
        let wt = kernel.ft(k as f64 / t_scale);
        if wt == 0.0 {
            continue;
        }
        for (l, a) in ariths.iter().enumerate() {
            if a.dist(k) == 0.0 {
                return Err(LatticeSumError::ZeroSine { m: k, theta: theta_f[l] });
            }
        }
        for sign in [1i64, -1] {
            let mj = sign * k as i64;
            let mut term = (i2pi * mj as f64 * u[0]).exp() * wt / mj as f64;
            for (l, series) in inner.iter().enumerate() {
                term *= series.eval(theta_f[l] * mj as f64);
            }
            total += term;
        }
    }
    Ok(total / i2pi)
}

/// `a -> sum_m e(mu) omega~(m/T) / (2 i pi (a - m))` with the coefficients
/// precomputed.
struct InnerSeries {
    coeffs: Vec<(f64, Complex64)>,
}

impl InnerSeries {
    fn new(kernel: &SmoothingKernel, t_scale: f64, u: f64) -> Self {
        let reach = (kernel.y_max() * t_scale).ceil() as i64;
        let coeffs = (-reach..=reach)
            .filter_map(|m| {
                let wt = kernel.ft(m as f64 / t_scale);
                (wt != 0.0).then(|| (m as f64, Complex64::from_polar(wt, 2.0 * PI * (m as f64 * u).fract())))
            })
            .collect();
        InnerSeries { coeffs }
    }

    fn eval(&self, a: f64) -> Complex64 {
        let s: Complex64 = self.coeffs.iter().map(|(m, c)| c / (a - m)).sum();
        s / Complex64::new(0.0, 2.0 * PI)
    }
}

/// Heuristic error bound at the balanced scale `T = t^{(d-1)/(1+kappa)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBound {
    pub t: f64,
    pub t_scale: f64,
    pub m: u64,
    pub s2: f64,
    pub tail: f64,
    /// `T^-1 t^{d-1}`, before multiplying by the slack constant.
    pub smoothing: f64,
    pub slack: f64,
    /// `s2 + tail + slack * smoothing`; heuristic, the O-constants are unknown.
    pub total: f64,
}

pub fn balanced_scale(t: f64, d: usize, kappa: f64) -> f64 {
    t.powf((d as f64 - 1.0) / (1.0 + kappa))
}

pub fn error_bound(t: f64, w: &Weights, kappa: f64, c_kappa: f64, slack: f64) -> Result<ErrorBound, LatticeSumError> {
    if !(t > 0.0) {
        return Err(LatticeSumError::BadThreshold(t));
    }
    if !(kappa >= 0.0) {
        return Err(LatticeSumError::BadKappa(kappa));
    }
    if !(c_kappa > 0.0) {
        return Err(LatticeSumError::BadConstant(c_kappa));
    }
    let d = w.dim();
    let t_scale = balanced_scale(t, d, kappa).max(1.0);
    let envelope = Envelope { kappa, c_kappa };
    let mut s2 = 0.0;
    let mut tail = 0.0;
    let mut m = 0;
    for j in 0..d {
        let row = s2_row_with(&w.incline_row(j), t_scale, None, Some(envelope))?;
        s2 += row.value;
        tail += row.tail;
        m = row.m;
    }
    let smoothing = t.powi(d as i32 - 1) / t_scale;
    Ok(ErrorBound { t, t_scale, m, s2, tail, smoothing, slack, total: s2 + tail + slack * smoothing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::HighPrec;
    use crate::surd::Surd;

    fn phi() -> Vec<Real> {
        vec![Real::Exact(Surd::golden())]
    }

    #[test]
    fn bump_is_normalized_even_and_supported() {
        let k = SmoothingKernel::global();
        let mass = integrate(|x| k.bump(x), -0.5, 0.5, 1e-14).unwrap();
        assert!((mass - 1.0).abs() < 1e-10);
        assert_eq!(bump(0.5), 0.0);
        assert_eq!(bump(-0.5), 0.0);
        assert_eq!(bump(0.7), 0.0);
        for x in [0.01, 0.2, 0.37, 0.49] {
            assert_eq!(bump(x), bump(-x));
            assert!(bump(x) > 0.0);
        }
    }

    #[test]
    fn transform_values() {
        let k = SmoothingKernel::global();
        assert!((bump_ft(0.0) - 1.0).abs() < 1e-12);
        assert_eq!(bump_ft(3.3), bump_ft(-3.3));
        let f1 = k.ft_direct(1.0).unwrap();
        let f30 = k.ft_direct(30.0).unwrap();
        assert!(f30.abs() <= 1e-4 * f1.abs(), "{f30} {f1}");
    }

    #[test]
    fn interpolation_matches_direct_quadrature() {
        let k = SmoothingKernel::global();
        for y in [0.0, 0.0031, 0.5, 1.2345, 2.71, 7.77, 13.1, 29.9, 64.0, 101.7] {
            let a = k.ft(y);
            let b = k.ft_direct(y).unwrap();
            assert!((a - b).abs() < 1e-10, "{y}: {a} vs {b}");
        }
    }

    #[test]
    fn decay_certificate_covers_table() {
        let k = SmoothingKernel::global();
        let c = k.decay();
        assert!(c.a >= 4);
        for y in [0.0, 1.0, 5.0, 17.5, 40.0, 63.0, 127.0] {
            assert!(k.ft(y).abs() <= c.bound(y) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn empty_sum_is_zero() {
        let r = s2_row(&phi(), 10.0, Some(0)).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn s2_matches_high_precision_oracle() {
        let k = SmoothingKernel::global();
        let t_scale = 10.0;
        let r = s2_row(&phi(), t_scale, Some(1000)).unwrap();
        let bits = 128;
        let pi = HighPrec::pi(bits);
        let golden = Surd::golden();
        let mut oracle = 0.0;
        for m in 1..=1000i64 {
            let x = golden.scale_int(m).fract().to_high_prec(bits);
            let s = (&x * &pi).sin().abs().to_f64();
            oracle += k.ft_direct(m as f64 / t_scale).unwrap().abs() / (m as f64 * s);
        }
        oracle /= 2.0 * PI;
        assert!(((r.value - oracle) / oracle).abs() < 1e-8, "{} {}", r.value, oracle);
    }

    #[test]
    fn s2_monotone_in_truncation() {
        let mut last = 0.0;
        for m in [1, 10, 100, 1000, 5000] {
            let v = s2_row(&phi(), 20.0, Some(m)).unwrap().value;
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn total_sums_rows_and_is_scale_invariant() {
        let w = Weights::preset("golden").unwrap();
        let r = s2_total(&w, 12.0, None).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!((r.rows[1].theta[0] * r.rows[0].theta[0] - 1.0).abs() < 1e-15);
        assert_eq!(r.total, r.rows.iter().map(|x| x.value).sum::<f64>());
        let scaled = w.scaled(&Surd::sqrt(7)).unwrap();
        let r2 = s2_total(&scaled, 12.0, None).unwrap();
        assert!((r.total - r2.total).abs() < 1e-12 * r.total);
    }

    #[test]
    fn three_dimensional_sum_is_finite() {
        let w = Weights::preset("sqrt2-sqrt3").unwrap();
        let r = s2_total(&w, 50.0, None).unwrap();
        assert!(r.total.is_finite() && r.total > 0.0);
        assert!(r.tail.is_finite() && r.tail >= 0.0);
        assert_eq!(r.m, 125_000);
    }

    #[test]
    fn zero_sine_detected() {
        let theta = vec![Real::Exact(Surd::from_ratio(3, 7))];
        assert!(matches!(spencer_sum(&theta, 10), Err(LatticeSumError::ZeroSine { m: 7, .. })));
        assert!(spencer_sum(&theta, 6).is_ok());
        assert!(matches!(s2_row(&theta, 5.0, None), Err(LatticeSumError::ZeroSine { m: 7, .. })));
    }

    #[test]
    fn spencer_values() {
        let s1 = spencer_sum(&phi(), 1).unwrap();
        assert!((s1 - 1.072_93).abs() < 1e-5, "{s1}");
        let ks = [1, 10, 100, 1000, 10_000, 100_000];
        let all = spencer_sums(&phi(), &ks).unwrap();
        for pair in all.windows(2) {
            assert!(pair[1].1 >= pair[0].1);
        }
        for (k, v) in &all[2..] {
            let l = (*k as f64).ln();
            assert!(v / (l * l) < 2.0, "{k}: {v}");
        }
        assert_eq!(spencer_sum(&phi(), 1000).unwrap(), all[3].1);
    }

    #[test]
    fn surrogate_below_s2() {
        let theta = vec![Real::Exact(Surd::sqrt(2))];
        let t_scale = 6.0;
        let s2 = s2_row(&theta, t_scale, Some(200)).unwrap();
        for u in [[0.1, 0.7], [0.5, 0.5], [0.93, 0.02]] {
            let s = s_surrogate(&theta, t_scale, 200, &u).unwrap();
            assert!(s.norm() <= s2.value * (1.0 + 1e-9), "{} > {}", s.norm(), s2.value);
        }
    }

    // sum_m e(mu) omega~(m/T) / (2 i pi (a - m)) = (1/(2i sin pi a)) int e^{2i pi a ({x} - 1/2)} omega_T(x - u) dx
    fn inner_sum_closed_form(a: f64, t_scale: f64, u: f64) -> Complex64 {
        let k = SmoothingKernel::global();
        let f = |s: f64| {
            let x = u + s / t_scale;
            Complex64::from_polar(k.bump(s), 2.0 * PI * a * (x - x.floor() - 0.5))
        };
        let s_jump = ((u + 0.5 / t_scale).floor() - u) * t_scale;
        let integral = if s_jump > -0.5 && s_jump < 0.5 {
            crate::quadrature::integrate_complex(f, -0.5, s_jump, 1e-13).unwrap()
                + crate::quadrature::integrate_complex(f, s_jump, 0.5, 1e-13).unwrap()
        } else {
            crate::quadrature::integrate_complex(f, -0.5, 0.5, 1e-13).unwrap()
        };
        integral / Complex64::new(0.0, 2.0 * (PI * a).sin())
    }

    #[test]
    fn inner_series_matches_sawtooth_identity() {
        let k = SmoothingKernel::global();
        for (a, t_scale, u) in [(0.3, 3.0, 0.1), (7.41, 5.0, 0.77), (-12.9, 8.0, 0.5), (2.5, 1.0, 0.999)] {
            let direct = InnerSeries::new(k, t_scale, u).eval(a);
            let closed = inner_sum_closed_form(a, t_scale, u);
            assert!((direct - closed).norm() < 1e-9, "{a}: {direct} vs {closed}");
        }
    }

    #[test]
    fn balanced_scale_arithmetic() {
        let w = Weights::preset("golden").unwrap();
        let b = error_bound(1000.0, &w, 0.01, 0.3, 1.0).unwrap();
        assert!((b.t_scale - 1000f64.powf(1.0 / 1.01)).abs() < 1e-9);
        assert!((b.total - (b.s2 + b.tail + b.smoothing)).abs() < 1e-12 * b.total);
        let far = error_bound(1000.0, &w, 1e9, 0.3, 1.0).unwrap();
        assert!((far.t_scale - 1.0).abs() < 1e-6);
        assert!(far.smoothing > 100.0 * far.s2);
    }
}
