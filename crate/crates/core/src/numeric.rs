//! Configurable-precision real numbers.
//!
//! [`HighPrec`] wraps an `astro_float::BigFloat` together with the working
//! precision in bits. Binary operations run at the larger precision of the two
//! operands, so constants lifted through [`HighPrec::lift`] inherit the
//! precision of the value they are combined with.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Default working precision in significant bits.
pub const DEFAULT_PRECISION_BITS: usize = 128;
/// Lowest precision accepted by [`HighPrec`].
pub const MIN_PRECISION_BITS: usize = 64;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// A real number carried at `precision_bits` significant bits.
#[derive(Clone)]
pub struct HighPrec {
    value: BigFloat,
    bits: usize,
}

impl HighPrec {
    fn wrap(value: BigFloat, bits: usize) -> Self {
        debug_assert!(!value.is_nan(), "NaN produced in HighPrec arithmetic");
        HighPrec { value, bits }
    }

    fn clamp_bits(bits: usize) -> usize {
        bits.max(MIN_PRECISION_BITS)
    }

    pub fn zero(bits: usize) -> Self {
        Self::from_i64(0, bits)
    }

    pub fn one(bits: usize) -> Self {
        Self::from_i64(1, bits)
    }

    pub fn from_i64(x: i64, bits: usize) -> Self {
        let bits = Self::clamp_bits(bits);
        Self::wrap(BigFloat::from_i64(x, bits), bits)
    }

    pub fn from_u64(x: u64, bits: usize) -> Self {
        let bits = Self::clamp_bits(bits);
        Self::wrap(BigFloat::from_u64(x, bits), bits)
    }

    /// Exact conversion of an `f64` (every finite double is a dyadic rational).
    pub fn from_f64(x: f64, bits: usize) -> Self {
        let bits = Self::clamp_bits(bits);
        Self::wrap(BigFloat::from_f64(x, bits.max(64)), bits)
    }

    pub fn from_bigint(n: &BigInt, bits: usize) -> Self {
        let bits = Self::clamp_bits(bits);
        if n.is_zero() {
            return Self::zero(bits);
        }
        let (sign, words) = n.to_u64_digits();
        let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
        let exact = BigFloat::from_words(&words, s, (64 * words.len()) as i32);
        // round to the working precision
        let v = exact.add(&BigFloat::from_i64(0, bits), bits, RM);
        Self::wrap(v, bits)
    }

    pub fn from_rational(r: &BigRational, bits: usize) -> Self {
        let bits = Self::clamp_bits(bits);
        let guard = bits + 64;
        let n = Self::from_bigint(r.numer(), guard);
        let d = Self::from_bigint(r.denom(), guard);
        Self::wrap(n.value.div(&d.value, bits, RM), bits)
    }

    /// A rational constant at the precision of `self`.
    pub fn lift(&self, r: &BigRational) -> Self {
        Self::from_rational(r, self.bits)
    }

    pub fn precision_bits(&self) -> usize {
        self.bits
    }

    /// Same value re-rounded to `bits`.
    pub fn with_precision(&self, bits: usize) -> Self {
        let bits = Self::clamp_bits(bits);
        let v = self.value.add(&BigFloat::from_i64(0, bits), bits, RM);
        Self::wrap(v, bits)
    }

    pub fn pi(bits: usize) -> Self {
        let bits = Self::clamp_bits(bits);
        let v = with_consts(|cc| cc.pi(bits, RM));
        Self::wrap(v, bits)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.value.sqrt(self.bits, RM), self.bits)
    }

    pub fn exp(&self) -> Self {
        let v = with_consts(|cc| self.value.exp(self.bits, RM, cc));
        Self::wrap(v, self.bits)
    }

    pub fn ln(&self) -> Self {
        let v = with_consts(|cc| self.value.ln(self.bits, RM, cc));
        Self::wrap(v, self.bits)
    }

    pub fn sin(&self) -> Self {
        let v = with_consts(|cc| self.value.sin(self.bits, RM, cc));
        Self::wrap(v, self.bits)
    }

    pub fn cos(&self) -> Self {
        let v = with_consts(|cc| self.value.cos(self.bits, RM, cc));
        Self::wrap(v, self.bits)
    }

    pub fn powi(&self, n: usize) -> Self {
        if n == 0 {
            return Self::one(self.bits);
        }
        Self::wrap(self.value.powi(n, self.bits, RM), self.bits)
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.bits)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        if self.value.is_zero() {
            Ordering::Equal
        } else if self.value.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Mantissa as an integer `m` and binary exponent `e` with value `m * 2^e`.
    fn integer_parts(&self) -> Option<(BigInt, i64)> {
        if self.value.is_zero() {
            return Some((BigInt::zero(), 0));
        }
        let (words, _n, sign, e, _) = self.value.as_raw_parts()?;
        let mut m = BigInt::from_slice(
            BigSign::Plus,
            &words
                .iter()
                .flat_map(|w| [(*w & 0xffff_ffff) as u32, (*w >> 32) as u32])
                .collect::<Vec<_>>(),
        );
        if sign == Sign::Neg {
            m = -m;
        }
        Some((m, e as i64 - 64 * words.len() as i64))
    }

    /// Exact dyadic rational equal to the stored value.
    pub fn to_rational(&self) -> BigRational {
        let (m, e) = self.integer_parts().expect("finite value");
        if e >= 0 {
            BigRational::from_integer(m << e as usize)
        } else {
            BigRational::new(m, BigInt::one() << (-e) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.value.is_zero() {
            return 0.0;
        }
        let Some((words, _n, sign, e, _)) = self.value.as_raw_parts() else {
            return if self.value.is_inf_pos() {
                f64::INFINITY
            } else if self.value.is_inf_neg() {
                f64::NEG_INFINITY
            } else {
                f64::NAN
            };
        };
        let len = words.len();
        let hi = words[len - 1] as u128;
        let lo = if len >= 2 { words[len - 2] as u128 } else { 0 };
        let top = (hi << 64) | lo;
        let mag = ldexp(top as f64, e as i64 - 128);
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        let r = self.to_rational();
        r.floor().to_integer()
    }

    /// Relative spacing of the working precision, `2^(1 - bits)`.
    pub fn epsilon(&self) -> f64 {
        2f64.powi(1 - self.bits as i32)
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.floor().to_i64()
    }

    /// Decimal rendering through `f64`, 17 significant digits.
    pub fn to_sci_string(&self) -> String {
        format_sig17(self.to_f64())
    }
}

/// Render `x` with 17 significant digits in scientific notation.
pub fn format_sig17(x: f64) -> String {
    format!("{:.16e}", x)
}

impl fmt::Debug for HighPrec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HighPrec({:.17e}, {} bits)", self.to_f64(), self.bits)
    }
}

impl fmt::Display for HighPrec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl PartialEq for HighPrec {
    fn eq(&self, other: &Self) -> bool {
        self.value.cmp(&other.value) == Some(0)
    }
}

impl PartialOrd for HighPrec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl<'a> $trait<&'a HighPrec> for &'a HighPrec {
            type Output = HighPrec;
            fn $method(self, rhs: &'a HighPrec) -> HighPrec {
                let bits = self.bits.max(rhs.bits);
                HighPrec::wrap(self.value.$inner(&rhs.value, bits, RM), bits)
            }
        }
        impl $trait<HighPrec> for HighPrec {
            type Output = HighPrec;
            fn $method(self, rhs: HighPrec) -> HighPrec {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a HighPrec> for HighPrec {
            type Output = HighPrec;
            fn $method(self, rhs: &'a HighPrec) -> HighPrec {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl Neg for HighPrec {
    type Output = HighPrec;
    fn neg(self) -> HighPrec {
        HighPrec::wrap(self.value.neg(), self.bits)
    }
}

impl Neg for &HighPrec {
    type Output = HighPrec;
    fn neg(self) -> HighPrec {
        HighPrec::wrap(self.value.clone().neg(), self.bits)
    }
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// Arithmetic shared by the exact rational path and the numeric path of the
/// Bernoulli machinery.
pub trait Scalar: Clone + fmt::Debug {
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn div_ref(&self, other: &Self) -> Self;
    /// A rational constant in the same representation (and precision) as `self`.
    fn lift(&self, r: &BigRational) -> Self;
    fn pow_u(&self, n: usize) -> Self {
        let mut acc = self.lift(&BigRational::one());
        for _ in 0..n {
            acc = acc.mul_ref(self);
        }
        acc
    }
    fn is_exact_zero(&self) -> bool;
    /// `self - floor(self)`.
    fn fract(&self) -> Self;
}

impl Scalar for BigRational {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn div_ref(&self, other: &Self) -> Self {
        self / other
    }
    fn lift(&self, r: &BigRational) -> Self {
        r.clone()
    }
    fn pow_u(&self, n: usize) -> Self {
        num_traits::pow(self.clone(), n)
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn fract(&self) -> Self {
        self - self.floor()
    }
}

impl Scalar for HighPrec {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn div_ref(&self, other: &Self) -> Self {
        self / other
    }
    fn lift(&self, r: &BigRational) -> Self {
        HighPrec::lift(self, r)
    }
    fn pow_u(&self, n: usize) -> Self {
        self.powi(n)
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn fract(&self) -> Self {
        let f = HighPrec::from_bigint(&self.floor(), self.precision_bits() + 64);
        (self - &f).with_precision(self.precision_bits())
    }
}

/// Relative difference `|a - b| / max(|a|, |b|, floor)`.
pub fn rel_diff(a: &HighPrec, b: &HighPrec, floor: f64) -> f64 {
    let diff = (a - b).abs().to_f64();
    let scale = a.abs().to_f64().max(b.abs().to_f64()).max(floor);
    diff / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_roundtrip() {
        for x in [1.0, -2.5, 1e-300, 3.0e200, 0.1, std::f64::consts::PI] {
            let h = HighPrec::from_f64(x, 128);
            assert_eq!(h.to_f64(), x);
            let r = h.to_rational();
            assert_eq!(HighPrec::from_rational(&r, 128).to_f64(), x);
        }
    }

    #[test]
    fn sqrt2_squared() {
        let two = HighPrec::from_i64(2, 128);
        let s = two.sqrt();
        let back = &s * &s;
        assert!((back - two).abs().to_f64() < 1e-36);
    }

    #[test]
    fn rational_conversion_is_accurate() {
        let third = BigRational::new(1.into(), 3.into());
        let h = HighPrec::from_rational(&third, 200);
        let three = HighPrec::from_i64(3, 200);
        let err = (&h * &three - HighPrec::one(200)).abs().to_f64();
        assert!(err < 1e-58, "err = {err}");
    }

    #[test]
    fn floor_and_sign() {
        let x = HighPrec::from_f64(-2.5, 128);
        assert_eq!(x.floor(), BigInt::from(-3));
        assert_eq!(x.signum(), Ordering::Less);
        assert_eq!(HighPrec::zero(128).signum(), Ordering::Equal);
    }

    #[test]
    fn pi_matches_f64() {
        assert_eq!(HighPrec::pi(256).to_f64(), std::f64::consts::PI);
    }
}
