//! Fourier transform of the standard simplex and the Fourier coefficients of
//! the shifted lattice count and of periodized multiple Bernoulli
//! polynomials.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::combinatorics::{positive_compositions, FactorialTable};
use crate::quadrature::{integrate_complex, QuadratureError};

/// Relative gap below which a point is reported as near-diagonal.
pub const NEAR_DIAGONAL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FourierError {
    #[error("coordinates {0} and {1} coincide: the point is diagonal")]
    Diagonal(usize, usize),
    #[error("the point has no non-zero coordinate")]
    EmptySupport,
    #[error("dimension {0} is outside the supported range")]
    Dimension(usize),
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("power {n} is below the support size {support}")]
    PowerTooSmall { n: usize, support: usize },
    #[error("a coordinate is zero")]
    ZeroCoordinate,
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// A transform value with a flag for points close to a diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FtValue {
    pub value: Complex64,
    pub near_diagonal: bool,
}

fn two_i_pi() -> Complex64 {
    Complex64::new(0.0, 2.0 * PI)
}

fn cis(x: f64) -> Complex64 {
    // e^{2 i pi x}, reduced mod 1 first to keep the phase accurate
    let f = x - x.round();
    Complex64::from_polar(1.0, 2.0 * PI * f)
}

fn support(y: &[f64]) -> Vec<usize> {
    (0..y.len()).filter(|&j| y[j] != 0.0).collect()
}

/// Rejects exact diagonals; flags near ones.
fn diagonal_check(y: &[f64], j_set: &[usize]) -> Result<bool, FourierError> {
    let scale = j_set.iter().map(|&j| y[j].abs()).fold(0.0, f64::max);
    let mut near = false;
    for (a, &j) in j_set.iter().enumerate() {
        for &l in &j_set[a + 1..] {
            let gap = (y[j] - y[l]).abs();
            if gap == 0.0 {
                return Err(FourierError::Diagonal(j, l));
            }
            if gap < NEAR_DIAGONAL * scale {
                near = true;
            }
        }
    }
    Ok(near)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `int_Delta e^{2 i pi y.x} dx` by nested adaptive quadrature, peeling off
/// one coordinate at a time:
/// `X_d(y) = int_0^1 e^{2 i pi y_d s} (1-s)^{d-1} X_{d-1}((1-s) y') ds`.
pub fn simplex_ft_quadrature(y: &[f64], tol: f64) -> Result<Complex64, FourierError> {
    let d = y.len();
    if d == 0 || d > 4 {
        return Err(FourierError::Dimension(d));
    }
    nested(y, tol / d as f64)
}

fn nested(y: &[f64], tol: f64) -> Result<Complex64, FourierError> {
    let d = y.len();
    if d == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let (last, rest) = y.split_last().expect("d >= 1");
    let failure = std::cell::RefCell::new(None);
    let f = |s: f64| {
        let scaled: Vec<f64> = rest.iter().map(|v| v * (1.0 - s)).collect();
        match nested(&scaled, tol / 2.0) {
            Ok(inner) => cis(last * s) * (1.0 - s).powi(d as i32 - 1) * inner,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    // panels about one oscillation wide, so each converges without splitting
    let freq = last.abs() + rest.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let panels = freq.ceil() as usize + 1;
    let mut v = Complex64::new(0.0, 0.0);
    for k in 0..panels {
        let (a, b) = (k as f64 / panels as f64, (k + 1) as f64 / panels as f64);
        v += integrate_complex(&f, a, b, tol / (2.0 * panels as f64))?;
    }
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Transform of the `|J|`-dimensional simplex at a point with all coordinates
/// non-zero and distinct:
/// `(1/2 i pi)^{|J|} sum_j (e^{2 i pi y_j} - 1) / (y_j prod_{l != j} (y_j - y_l))`.
pub fn simplex_ft_generic(y: &[f64]) -> Result<FtValue, FourierError> {
    if y.is_empty() {
        return Err(FourierError::EmptySupport);
    }
    if y.iter().any(|v| *v == 0.0) {
        return Err(FourierError::ZeroCoordinate);
    }
    let all: Vec<usize> = (0..y.len()).collect();
    let near = diagonal_check(y, &all)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..y.len() {
        let mut den = y[j];
        for l in 0..y.len() {
            if l != j {
                den *= y[j] - y[l];
            }
        }
        sum += (cis(y[j]) - 1.0) / den;
    }
    Ok(FtValue { value: sum / two_i_pi().powi(y.len() as i32), near_diagonal: near })
}

/// `int_0^1 t^{k} e^{2 i pi y (1-t)} dt * (-1/k!)` in closed form:
/// `-sum_{l=0}^{k} 1/((k-l)! (2 i pi y)^{l+1}) + e^{2 i pi y} / (2 i pi y)^{k+1}`.
fn liouville_factor(y: f64, k: usize) -> Complex64 {
    let z = two_i_pi() * y;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zp = z;
    for l in 0..=k {
        acc -= 1.0 / (factorial(k - l) * zp);
        zp *= z;
    }
    acc + cis(y) / z.powi(k as i32 + 1)
}

/// `X(y)` for any `y` whose non-zero coordinates are distinct: `1/d!` at the
/// origin, otherwise the transform over the support pattern `J` combined
/// with Liouville's formula on the complementary coordinates.
pub fn simplex_ft_closed(y: &[f64]) -> Result<FtValue, FourierError> {
    let d = y.len();
    if d == 0 {
        return Err(FourierError::Dimension(0));
    }
    let j_set = support(y);
    if j_set.is_empty() {
        return Ok(FtValue { value: Complex64::new(1.0 / factorial(d), 0.0), near_diagonal: false });
    }
    let near = diagonal_check(y, &j_set)?;
    let k = d - j_set.len();
    let mut sum = Complex64::new(0.0, 0.0);
    for &j in &j_set {
        let mut den = 1.0;
        for &l in &j_set {
            if l != j {
                den *= y[j] - y[l];
            }
        }
        sum += liouville_factor(y[j], k) / den;
    }
    Ok(FtValue { value: sum / two_i_pi().powi(j_set.len() as i32 - 1), near_diagonal: near })
}

/// The two parts `X_1`, `X_2` of `X(y)` at a non-diagonal point with
/// non-empty support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposed {
    pub x1: Complex64,
    pub x2: Complex64,
    pub near_diagonal: bool,
}

impl Decomposed {
    pub fn total(&self) -> Complex64 {
        self.x1 + self.x2
    }
}

/// `sum_{n in Z^J_{>0}, |n|_1 = n} prod_j z_j^{n_j}`.
fn composition_power_sum(z: &[Complex64], n: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for comp in positive_compositions(n, z.len()) {
        let mut term = Complex64::new(1.0, 0.0);
        for (zj, &nj) in z.iter().zip(&comp) {
            term *= zj.powi(nj as i32);
        }
        acc += term;
    }
    acc
}

pub fn simplex_ft_decomposed(y: &[f64]) -> Result<Decomposed, FourierError> {
    let d = y.len();
    let j_set = support(y);
    if j_set.is_empty() {
        return Err(FourierError::EmptySupport);
    }
    let near = diagonal_check(y, &j_set)?;
    let inv: Vec<Complex64> = j_set.iter().map(|&j| Complex64::new(1.0 / y[j], 0.0)).collect();
    let sign = if j_set.len() % 2 == 0 { 1.0 } else { -1.0 };
    let mut x1 = Complex64::new(0.0, 0.0);
    for n in j_set.len()..=d {
        x1 += composition_power_sum(&inv, n) / (two_i_pi().powi(n as i32) * factorial(d - n));
    }
    x1 *= sign;
    let mut x2 = Complex64::new(0.0, 0.0);
    for &j in &j_set {
        let mut den = y[j];
        for l in 0..d {
            if l != j {
                den *= y[j] - y[l];
            }
        }
        x2 += cis(y[j]) / den;
    }
    x2 /= two_i_pi().powi(d as i32);
    Ok(Decomposed { x1, x2, near_diagonal: near })
}

/// Exact sides of the symmetrization identity
/// `sum_j 1/(y_j^{n-|J|+1} prod_{k != j}(y_j - y_k)) = (-1)^{|J|-1} sum_{|n|_1 = n} prod y_j^{-n_j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactIdentity {
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl ExactIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn check_exact_nondiagonal(y: &[BigRational]) -> Result<(), FourierError> {
    for j in 0..y.len() {
        for l in j + 1..y.len() {
            if y[j] == y[l] {
                return Err(FourierError::Diagonal(j, l));
            }
        }
    }
    Ok(())
}

pub fn symmetrization_identity(y: &[BigRational], n: usize) -> Result<ExactIdentity, FourierError> {
    let size = y.len();
    if size == 0 {
        return Err(FourierError::EmptySupport);
    }
    if n < size {
        return Err(FourierError::PowerTooSmall { n, support: size });
    }
    if y.iter().any(Zero::is_zero) {
        return Err(FourierError::ZeroCoordinate);
    }
    check_exact_nondiagonal(y)?;
    let mut lhs = BigRational::zero();
    for j in 0..size {
        let mut den = num_traits::pow(y[j].clone(), n - size + 1);
        for k in 0..size {
            if k != j {
                den *= &y[j] - &y[k];
            }
        }
        lhs += den.recip();
    }
    let mut rhs = BigRational::zero();
    for comp in positive_compositions(n, size) {
        let mut term = BigRational::one();
        for (yj, &nj) in y.iter().zip(&comp) {
            term /= num_traits::pow(yj.clone(), nj);
        }
        rhs += term;
    }
    if size % 2 == 0 {
        rhs = -rhs;
    }
    Ok(ExactIdentity { lhs, rhs })
}

/// `1/prod_k (z - y_k) = sum_j 1/(z - y_j) * 1/prod_{k != j}(y_j - y_k)`.
pub fn partial_fraction_check(z: &BigRational, y: &[BigRational]) -> Result<ExactIdentity, FourierError> {
    if y.is_empty() {
        return Err(FourierError::EmptySupport);
    }
    check_exact_nondiagonal(y)?;
    if let Some(j) = y.iter().position(|v| v == z) {
        return Err(FourierError::Diagonal(j, y.len()));
    }
    let lhs = y.iter().fold(BigRational::one(), |acc, yk| acc * (z - yk)).recip();
    let mut rhs = BigRational::zero();
    for j in 0..y.len() {
        let mut den = z - &y[j];
        for k in 0..y.len() {
            if k != j {
                den *= &y[j] - &y[k];
            }
        }
        rhs += den.recip();
    }
    Ok(ExactIdentity { lhs, rhs })
}

/// The partial fraction identity evaluated at the node `z = y_n` (the last
/// coordinate): `1/prod_{k<n}(y_n - y_k) = -sum_{j<n} 1/prod_{k != j}(y_j - y_k)`.
pub fn partial_fraction_at_node(y: &[BigRational]) -> Result<ExactIdentity, FourierError> {
    if y.len() < 2 {
        return Err(FourierError::Dimension(y.len()));
    }
    check_exact_nondiagonal(y)?;
    let (yn, rest) = y.split_last().expect("len >= 2");
    let lhs = rest.iter().fold(BigRational::one(), |acc, yk| acc * (yn - yk)).recip();
    let mut rhs = BigRational::zero();
    for j in 0..rest.len() {
        let mut den = BigRational::one();
        for k in 0..y.len() {
            if k != j {
                den *= &y[j] - &y[k];
            }
        }
        rhs -= den.recip();
    }
    Ok(ExactIdentity { lhs, rhs })
}

fn check_dims(m: &[i64], w: &[f64]) -> Result<(), FourierError> {
    if m.len() != w.len() {
        return Err(FourierError::DimensionMismatch { expected: w.len(), got: m.len() });
    }
    if w.is_empty() {
        return Err(FourierError::Dimension(0));
    }
    Ok(())
}

/// `N_m(t; w) = (t^d / prod w) X(m_1 t / w_1, ..., m_d t / w_d)`.
pub fn fourier_coefficient_n(m: &[i64], t: f64, w: &[f64]) -> Result<FtValue, FourierError> {
    check_dims(m, w)?;
    let y: Vec<f64> = m.iter().zip(w).map(|(&mj, wj)| mj as f64 * t / wj).collect();
    let x = simplex_ft_closed(&y)?;
    let scale = t.powi(w.len() as i32) / w.iter().product::<f64>();
    Ok(FtValue { value: x.value * scale, near_diagonal: x.near_diagonal })
}

/// `b_{n,m}(w, J) = (-1)^{|J|} n! (1/2 i pi)^n sum_{|n|_1 = n} prod_{j in J} (w_j/m_j)^{n_j}`.
pub fn b_nm(n: usize, m: &[i64], w: &[f64], j_set: &[usize]) -> Complex64 {
    let ratios: Vec<Complex64> = j_set.iter().map(|&j| Complex64::new(w[j] / m[j] as f64, 0.0)).collect();
    let sign = if j_set.len() % 2 == 0 { 1.0 } else { -1.0 };
    composition_power_sum(&ratios, n) * sign * factorial(n) / two_i_pi().powi(n as i32)
}

/// `b_{k,m}(t; w) = [m = 0] t^k + sum_{n=|J|}^{k} b_{n,m}(w, J) C(k, n) t^{k-n}`
/// with `J = supp(m)` (empty when `|J| > k`).
pub fn bernoulli_fourier_coeff(k: usize, m: &[i64], t: f64, w: &[f64]) -> Result<Complex64, FourierError> {
    check_dims(m, w)?;
    let j_set: Vec<usize> = (0..m.len()).filter(|&j| m[j] != 0).collect();
    if j_set.is_empty() {
        return Ok(Complex64::new(t.powi(k as i32), 0.0));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    if j_set.len() <= k {
        let fact = FactorialTable::new(k);
        for n in j_set.len()..=k {
            let c = fact.binomial(k, n).to_f64().unwrap_or(f64::INFINITY);
            acc += b_nm(n, m, w, &j_set) * c * t.powi((k - n) as i32);
        }
    }
    Ok(acc)
}

/// `Q_m / (d! prod w)` and `R_m`, whose sum is `N_m(t; w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSplit {
    pub q: Complex64,
    pub q_scaled: Complex64,
    pub r: Complex64,
}

impl CoefficientSplit {
    pub fn total(&self) -> Complex64 {
        self.q_scaled + self.r
    }
}

pub fn fourier_coefficient_decomposed(m: &[i64], t: f64, w: &[f64]) -> Result<CoefficientSplit, FourierError> {
    check_dims(m, w)?;
    let d = w.len();
    let q = bernoulli_fourier_coeff(d, m, t, w)?;
    let norm = factorial(d) * w.iter().product::<f64>();
    let mut r = Complex64::new(0.0, 0.0);
    for j in 0..d {
        if m[j] == 0 {
            continue;
        }
        let mut den = m[j] as f64;
        for l in 0..d {
            if l != j {
                let gap = w[l] / w[j] * m[j] as f64 - m[l] as f64;
                if gap == 0.0 {
                    return Err(FourierError::Diagonal(j, l));
                }
                den *= gap;
            }
        }
        r += cis(m[j] as f64 * t / w[j]) / den;
    }
    r /= two_i_pi().powi(d as i32);
    Ok(CoefficientSplit { q, q_scaled: q / norm, r })
}

/// Summation kernel for partial Fourier sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummationKernel {
    Dirichlet,
    Fejer,
}

/// `sum_{|m|_inf <= M} K(m) N_m(t; w) e^{2 i pi m.u}`, real part.
pub fn partial_fourier_sum(t: f64, w: &[f64], u: &[f64], order: i64, kernel: SummationKernel) -> Result<f64, FourierError> {
    let d = w.len();
    if u.len() != d {
        return Err(FourierError::DimensionMismatch { expected: d, got: u.len() });
    }
    let mut m = vec![-order; d];
    let mut acc = Complex64::new(0.0, 0.0);
    loop {
        let weight: f64 = match kernel {
            SummationKernel::Dirichlet => 1.0,
            SummationKernel::Fejer => m.iter().map(|&mj| 1.0 - mj.abs() as f64 / (order + 1) as f64).product(),
        };
        let phase: f64 = m.iter().zip(u).map(|(&mj, uj)| mj as f64 * uj).sum();
        acc += fourier_coefficient_n(&m, t, w)?.value * cis(phase) * weight;
        // odometer increment
        let mut i = 0;
        loop {
            if i == d {
                return Ok(acc.re);
            }
            if m[i] < order {
                m[i] += 1;
                break;
            }
            m[i] = -order;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * a.norm().max(b.norm()).max(1e-300)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn origin_is_volume() {
        for d in 1..=3 {
            let v = simplex_ft_quadrature(&vec![0.0; d], 1e-11).unwrap();
            assert!((v.re - 1.0 / factorial(d)).abs() < 1e-10);
            assert_eq!(simplex_ft_closed(&vec![0.0; d]).unwrap().value.re, 1.0 / factorial(d));
        }
    }

    #[test]
    fn one_dimensional() {
        let y = 2.7;
        let expected = (cis(y) - 1.0) / (two_i_pi() * y);
        assert!(close(simplex_ft_quadrature(&[y], 1e-12).unwrap(), expected, 1e-10));
        assert!(close(simplex_ft_closed(&[y]).unwrap().value, expected, 1e-14));
        assert!(close(simplex_ft_generic(&[y]).unwrap().value, expected, 1e-14));
    }

    #[test]
    fn two_dimensional_against_quadrature() {
        let y = [1.3, -0.7];
        let a = simplex_ft_closed(&y).unwrap().value;
        let b = simplex_ft_quadrature(&y, 1e-11).unwrap();
        assert!((a - b).norm() < 1e-8);
        let dec = simplex_ft_decomposed(&y).unwrap();
        assert!(close(dec.total(), a, 1e-12));
        // J = [d]: X1 = (-1/2 i pi)^d / prod y
        let x1 = (-1.0 / two_i_pi()).powi(2) / (y[0] * y[1]);
        assert!(close(dec.x1, x1, 1e-14));
    }

    #[test]
    fn partial_support() {
        let y = [0.0, 1.7, 0.0];
        let a = simplex_ft_closed(&y).unwrap().value;
        let b = simplex_ft_quadrature(&y, 1e-11).unwrap();
        assert!((a - b).norm() < 1e-9);
        assert!(close(simplex_ft_decomposed(&y).unwrap().total(), a, 1e-12));
    }

    #[test]
    fn diagonal_rejected_and_flagged() {
        assert!(matches!(simplex_ft_closed(&[1.0, 1.0]), Err(FourierError::Diagonal(0, 1))));
        assert!(simplex_ft_closed(&[1.0, 1.0 + 1e-9]).unwrap().near_diagonal);
    }

    #[test]
    fn symmetrization_examples() {
        let r = symmetrization_identity(&[q(1, 1), q(2, 1)], 2).unwrap();
        assert_eq!(r.lhs, q(-1, 2));
        assert!(r.holds());
        let r = symmetrization_identity(&[q(3, 7)], 4).unwrap();
        assert_eq!(r.lhs, num_traits::pow(q(7, 3), 4));
        assert!(r.holds());
    }

    #[test]
    fn partial_fraction_examples() {
        let r = partial_fraction_check(&q(2, 1), &[q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(r.lhs, q(1, 2));
        assert!(r.holds());
        assert!(partial_fraction_check(&q(5, 3), &[q(1, 7)]).unwrap().holds());
        assert!(partial_fraction_at_node(&[q(1, 2), q(-3, 5), q(7, 4)]).unwrap().holds());
    }

    #[test]
    fn coefficient_at_zero() {
        let w = [1.0, 2f64.sqrt()];
        let n0 = fourier_coefficient_n(&[0, 0], 3.0, &w).unwrap().value;
        assert!((n0.re - 9.0 / (2.0 * w[1])).abs() < 1e-14);
        let split = fourier_coefficient_decomposed(&[0, 0], 3.0, &w).unwrap();
        assert_eq!(split.q.re, 9.0);
        assert_eq!(split.r, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn one_dimensional_coefficient() {
        let (t, w, m) = (2.3, 1.7, 3);
        let direct = crate::quadrature::integrate_complex(|x| cis(m as f64 * x), 0.0, t / w, 1e-13).unwrap();
        let v = fourier_coefficient_n(&[m], t, &[w]).unwrap().value;
        assert!(close(v, direct, 1e-11));
        let split = fourier_coefficient_decomposed(&[m], t, &[w]).unwrap();
        assert!(close(split.total(), v, 1e-12));
    }

    #[test]
    fn sawtooth_coefficient() {
        // b_{1,m} for d = 1 is the coefficient of w((u)): -w / (2 i pi m)
        let (w, m) = (1.6, -2);
        let b = bernoulli_fourier_coeff(1, &[m], 5.0, &[w]).unwrap();
        assert!(close(b, -w / (two_i_pi() * m as f64), 1e-14));
        // support larger than k leaves nothing
        assert_eq!(bernoulli_fourier_coeff(1, &[1, 2], 5.0, &[1.0, 1.5]).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn hermitian() {
        let w = [1.0, 2f64.sqrt(), 3f64.sqrt()];
        let a = fourier_coefficient_n(&[1, -2, 3], 4.1, &w).unwrap().value;
        let b = fourier_coefficient_n(&[-1, 2, -3], 4.1, &w).unwrap().value;
        assert!(close(a, b.conj(), 1e-13));
    }
}
