//! Exact arithmetic in multiquadratic fields `Q(sqrt n_1, ..., sqrt n_k)`.
//!
//! A [`Surd`] is a finite sum `sum_i q_i * sqrt(r_i)` with rational `q_i` and
//! distinct squarefree radicands `r_i` (the radicand `1` carries the rational
//! part). Square roots of distinct squarefree integers are linearly
//! independent over `Q`, so a surd is zero exactly when every coefficient is
//! zero; any non-zero surd has a definite sign that interval refinement
//! always finds. This is what lets the counting code tell `<` from `<=`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::numeric::HighPrec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurdParseError {
    #[error("unexpected end of input in {0:?}")]
    UnexpectedEnd(String),
    #[error("unexpected token {token:?} in {input:?}")]
    UnexpectedToken { token: String, input: String },
    #[error("division by zero in {0:?}")]
    DivisionByZero(String),
    #[error("square root of a negative number in {0:?}")]
    NegativeRadicand(String),
}

/// Splits `n` into `(s, r)` with `n = s^2 * r` and `r` squarefree.
pub fn squarefree_decompose(n: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 1);
    }
    let mut square = 1u64;
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        while rest % (p * p) == 0 {
            rest /= p * p;
            square *= p;
        }
        p += 1;
    }
    (square, rest)
}

fn largest_prime_factor(mut n: u64) -> u64 {
    let mut largest = 1;
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            largest = p;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        largest = n;
    }
    largest
}

/// Element of a multiquadratic number field with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    // radicand (squarefree) -> non-zero coefficient
    terms: BTreeMap<u64, BigRational>,
}

impl Surd {
    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn one() -> Self {
        Surd::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Surd::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Surd::from_rational(BigRational::from_integer(n))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut s = Surd::zero();
        s.add_term(1, q);
        s
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Surd::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// `sqrt(n)`, reduced to `s * sqrt(r)` with `r` squarefree.
    pub fn sqrt(n: u64) -> Self {
        let (s, r) = squarefree_decompose(n);
        let mut out = Surd::zero();
        out.add_term(r, BigRational::from_integer(s.into()));
        out
    }

    /// The golden ratio `(1 + sqrt 5) / 2`.
    pub fn golden() -> Self {
        (Surd::one() + Surd::sqrt(5)) * Surd::from_ratio(1, 2)
    }

    /// Exact value of a finite `f64`.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Surd::from_rational)
    }

    fn add_term(&mut self, radicand: u64, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(radicand).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&radicand);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(r, q)| (*r, q))
    }

    pub fn radicands(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.keys().copied()
    }

    pub fn coefficient(&self, radicand: u64) -> BigRational {
        self.terms.get(&radicand).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a rational number, when it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn is_integer(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_integer())
    }

    pub fn scale(&self, q: &BigRational) -> Surd {
        if q.is_zero() {
            return Surd::zero();
        }
        Surd { terms: self.terms.iter().map(|(r, c)| (*r, c * q)).collect() }
    }

    pub fn scale_int(&self, k: i64) -> Surd {
        self.scale(&BigRational::from_integer(k.into()))
    }

    /// Common denominator of all coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
    }

    /// Integer coefficients after multiplying by `scale` (which must clear all
    /// denominators).
    pub fn integer_coefficients(&self, scale: &BigInt) -> Vec<(u64, BigInt)> {
        self.terms
            .iter()
            .map(|(r, q)| {
                let v = q * BigRational::from_integer(scale.clone());
                debug_assert!(v.is_integer());
                (*r, v.to_integer())
            })
            .collect()
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let lcm = self.denominator_lcm();
        sign_of_integer_combination(&self.integer_coefficients(&lcm))
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn abs(&self) -> Surd {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Surd> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Surd::from_rational(q.recip()));
        }
        // x = beta + gamma*sqrt(p); x * (beta - gamma*sqrt(p)) = beta^2 - p*gamma^2
        // lies in the subfield without sqrt(p).
        let p = self.radicands().map(largest_prime_factor).max().unwrap_or(1);
        let mut beta = Surd::zero();
        let mut gamma = Surd::zero();
        for (r, q) in &self.terms {
            if r % p == 0 {
                gamma.add_term(r / p, q.clone());
            } else {
                beta.add_term(*r, q.clone());
            }
        }
        let root_p = Surd::sqrt(p);
        let conj = &beta - &(&gamma * &root_p);
        let norm = &(&beta * &beta) - &(&(&gamma * &gamma) * &Surd::from_integer(p as i64));
        let norm_inv = norm.inverse()?;
        Some(&conj * &norm_inv)
    }

    /// Largest integer not exceeding the value (exact).
    pub fn floor(&self) -> BigInt {
        if let Some(q) = self.as_rational() {
            return q.floor().to_integer();
        }
        let approx = self.to_high_prec(128);
        let mut k = approx.floor();
        while (self - &Surd::from_bigint(k.clone())).signum() == Ordering::Less {
            k -= 1;
        }
        while (self - &Surd::from_bigint(&k + 1)).signum() != Ordering::Less {
            k += 1;
        }
        k
    }

    pub fn ceil(&self) -> BigInt {
        -(-self.clone()).floor()
    }

    pub fn fract(&self) -> Surd {
        self - &Surd::from_bigint(self.floor())
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(r, q)| q.to_f64().unwrap_or(f64::NAN) * (*r as f64).sqrt())
            .sum()
    }

    pub fn to_high_prec(&self, bits: usize) -> HighPrec {
        let guard = bits + 32;
        let mut acc = HighPrec::zero(guard);
        for (r, q) in &self.terms {
            let c = HighPrec::from_rational(q, guard);
            let term = if *r == 1 { c } else { c * HighPrec::from_u64(*r, guard).sqrt() };
            acc = acc + term;
        }
        acc.with_precision(bits)
    }

    /// Fractional part `{x}` as a 128-bit binary fraction, `floor({x} * 2^128)`
    /// up to a few units in the last place.
    pub fn fixed_fraction(&self) -> u128 {
        const GUARD: usize = 64;
        const BITS: usize = 128 + GUARD;
        let mut acc = BigInt::zero();
        for (r, q) in &self.terms {
            let root = (BigInt::from(*r) << (2 * BITS)).sqrt();
            let num = q.numer() * root;
            acc += num.div_floor(q.denom());
        }
        let modulus = BigInt::one() << 128;
        let shifted = acc >> GUARD;
        let frac = shifted.mod_floor(&modulus);
        frac.to_u128().expect("reduced modulo 2^128")
    }

    pub fn pow(&self, n: u32) -> Surd {
        let mut acc = Surd::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

/// Sign of `sum c_i sqrt(r_i)` for integer `c_i` and distinct squarefree `r_i`.
pub fn sign_of_integer_combination(coeffs: &[(u64, BigInt)]) -> Ordering {
    let nonzero: Vec<&(u64, BigInt)> = coeffs.iter().filter(|(_, c)| !c.is_zero()).collect();
    if nonzero.is_empty() {
        return Ordering::Equal;
    }
    if nonzero.len() == 1 {
        return nonzero[0].1.sign_ordering();
    }
    // f64 fast path with a rigorous error bound
    let mut value = 0.0f64;
    let mut magnitude = 0.0f64;
    let mut finite = true;
    for (r, c) in &nonzero {
        let cf = c.to_f64().unwrap_or(f64::INFINITY);
        if !cf.is_finite() {
            finite = false;
            break;
        }
        let term = cf * (*r as f64).sqrt();
        value += term;
        magnitude += term.abs();
    }
    if finite {
        let bound = (nonzero.len() as f64 + 4.0) * f64::EPSILON * magnitude;
        if value.abs() > bound {
            return if value > 0.0 { Ordering::Greater } else { Ordering::Less };
        }
    }
    // interval refinement; terminates because the combination is non-zero
    let mut bits = 96usize;
    loop {
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (r, c) in &nonzero {
            if *r == 1 {
                let v = c.clone() << bits;
                lo += &v;
                hi += &v;
                continue;
            }
            let s = (BigInt::from(*r) << (2 * bits)).sqrt();
            let a = c * &s;
            let b = c * (&s + 1);
            if c.is_positive() {
                lo += a;
                hi += b;
            } else {
                lo += b;
                hi += a;
            }
        }
        if lo.is_positive() {
            return Ordering::Greater;
        }
        if hi.is_negative() {
            return Ordering::Less;
        }
        bits *= 2;
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl<'a> Add<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn add(self, rhs: &'a Surd) -> Surd {
        let mut out = self.clone();
        for (r, q) in &rhs.terms {
            out.add_term(*r, q.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn sub(self, rhs: &'a Surd) -> Surd {
        let mut out = self.clone();
        for (r, q) in &rhs.terms {
            out.add_term(*r, -q.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn mul(self, rhs: &'a Surd) -> Surd {
        let mut out = Surd::zero();
        for (a, p) in &self.terms {
            for (b, q) in &rhs.terms {
                let g = a.gcd(b);
                let radicand = (a / g).checked_mul(b / g).expect("radicand overflow");
                out.add_term(radicand, p * q * BigRational::from_integer(g.into()));
            }
        }
        out
    }
}

impl<'a> Div<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn div(self, rhs: &'a Surd) -> Surd {
        self * &rhs.inverse().expect("division by zero surd")
    }
}

macro_rules! owned_ops {
    ($trait:ident, $method:ident) => {
        impl $trait<Surd> for Surd {
            type Output = Surd;
            fn $method(self, rhs: Surd) -> Surd {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Surd> for Surd {
            type Output = Surd;
            fn $method(self, rhs: &'a Surd) -> Surd {
                (&self).$method(rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { terms: self.terms.into_iter().map(|(r, q)| (r, -q)).collect() }
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Surd({self})")
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (r, q)) in self.terms.iter().enumerate() {
            let neg = q.is_negative();
            if i > 0 {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            } else if neg {
                write!(f, "-")?;
            }
            let mag = q.abs();
            if *r == 1 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "sqrt({r})")?;
            } else {
                write!(f, "{mag}*sqrt({r})")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigRational),
    Sqrt,
    Phi,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Token>, SurdParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            '√' => {
                out.push(Token::Sqrt);
                i += 1;
            }
            'φ' => {
                out.push(Token::Phi);
                i += 1;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Token::Num(parse_decimal(&text).ok_or_else(|| {
                    SurdParseError::UnexpectedToken { token: text.clone(), input: input.into() }
                })?));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect::<String>().to_lowercase();
                match word.as_str() {
                    "sqrt" => out.push(Token::Sqrt),
                    "phi" => out.push(Token::Phi),
                    _ => {
                        return Err(SurdParseError::UnexpectedToken {
                            token: word,
                            input: input.into(),
                        })
                    }
                }
            }
            other => {
                return Err(SurdParseError::UnexpectedToken {
                    token: other.to_string(),
                    input: input.into(),
                })
            }
        }
    }
    Ok(out)
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let (int_part, frac_part) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    Some(BigRational::new(num, den))
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    input: &'a str,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn unexpected(&self, t: &Token) -> SurdParseError {
        SurdParseError::UnexpectedToken { token: format!("{t:?}"), input: self.input.into() }
    }

    fn expr(&mut self) -> Result<Surd, SurdParseError> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Token::Plus => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Token::Minus => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Surd, SurdParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc * self.unary()?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let d = self.unary()?;
                    let inv = d
                        .inverse()
                        .ok_or_else(|| SurdParseError::DivisionByZero(self.input.into()))?;
                    acc = acc * inv;
                }
                // implicit multiplication, e.g. "2sqrt3"
                Some(Token::Num(_)) | Some(Token::Sqrt) | Some(Token::Phi) | Some(Token::LParen) => {
                    acc = acc * self.unary()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Surd, SurdParseError> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Surd, SurdParseError> {
        match self.next() {
            Some(Token::Num(q)) => Ok(Surd::from_rational(q)),
            Some(Token::Phi) => Ok(Surd::golden()),
            Some(Token::Sqrt) => {
                let arg = match self.peek() {
                    Some(Token::LParen) => {
                        self.pos += 1;
                        let inner = self.expr()?;
                        match self.next() {
                            Some(Token::RParen) => inner,
                            Some(t) => return Err(self.unexpected(&t)),
                            None => return Err(SurdParseError::UnexpectedEnd(self.input.into())),
                        }
                    }
                    Some(Token::Num(_)) => self.atom()?,
                    Some(t) => return Err(self.unexpected(&t.clone())),
                    None => return Err(SurdParseError::UnexpectedEnd(self.input.into())),
                };
                sqrt_of_rational_surd(&arg, self.input)
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    Some(t) => Err(self.unexpected(&t)),
                    None => Err(SurdParseError::UnexpectedEnd(self.input.into())),
                }
            }
            Some(t) => Err(self.unexpected(&t)),
            None => Err(SurdParseError::UnexpectedEnd(self.input.into())),
        }
    }
}

fn sqrt_of_rational_surd(arg: &Surd, input: &str) -> Result<Surd, SurdParseError> {
    let q = arg.as_rational().ok_or_else(|| SurdParseError::UnexpectedToken {
        token: format!("sqrt({arg})"),
        input: input.into(),
    })?;
    if q.is_negative() {
        return Err(SurdParseError::NegativeRadicand(input.into()));
    }
    // sqrt(a/b) = sqrt(a*b)/b
    let prod = (q.numer() * q.denom()).to_u64().ok_or_else(|| SurdParseError::UnexpectedToken {
        token: q.to_string(),
        input: input.into(),
    })?;
    let den = BigRational::from_integer(q.denom().clone());
    Ok(Surd::sqrt(prod).scale(&den.recip()))
}

impl FromStr for Surd {
    type Err = SurdParseError;

    /// Parses expressions such as `1`, `3/2`, `sqrt2`, `2*sqrt(3)`, `(1+sqrt5)/2`
    /// or `phi`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens = tokenize(s)?;
        let mut p = Parser { tokens, pos: 0, input: s };
        let v = p.expr()?;
        if let Some(t) = p.peek() {
            return Err(p.unexpected(&t.clone()));
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(text: &str) -> Surd {
        text.parse().unwrap()
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_decompose(12), (2, 3));
        assert_eq!(squarefree_decompose(50), (5, 2));
        assert_eq!(squarefree_decompose(30), (1, 30));
        assert_eq!(Surd::sqrt(8), Surd::sqrt(2).scale_int(2));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(s("phi"), Surd::golden());
        assert_eq!(s("(1+sqrt5)/2"), Surd::golden());
        assert_eq!(s("2sqrt3"), Surd::sqrt(3).scale_int(2));
        assert_eq!(s("sqrt(1/2)"), Surd::sqrt(2).scale(&BigRational::new(1.into(), 2.into())));
        assert_eq!(s("0.25"), Surd::from_ratio(1, 4));
        assert!("sqrt(-2)".parse::<Surd>().is_err());
        assert!("1+".parse::<Surd>().is_err());
        assert!("foo".parse::<Surd>().is_err());
    }

    #[test]
    fn display_roundtrip() {
        for text in ["1+sqrt2", "-3/2*sqrt(7)+2", "phi", "sqrt2+sqrt3-sqrt6"] {
            let v = s(text);
            assert_eq!(v.to_string().parse::<Surd>().unwrap(), v);
        }
    }

    #[test]
    fn golden_identity() {
        let phi = Surd::golden();
        // phi^2 = phi + 1 and 1/phi = phi - 1
        assert_eq!(&phi * &phi, &phi + &Surd::one());
        assert_eq!(phi.inverse().unwrap(), &phi - &Surd::one());
    }

    #[test]
    fn multi_surd_inverse() {
        let x = s("1+sqrt2+sqrt3+sqrt5");
        let inv = x.inverse().unwrap();
        assert_eq!(&x * &inv, Surd::one());
    }

    #[test]
    fn exact_signs() {
        assert_eq!(s("sqrt2+sqrt3-sqrt(10)").signum(), Ordering::Less); // 3.146 < 3.162
        assert_eq!(s("sqrt2*sqrt3-sqrt6").signum(), Ordering::Equal);
        // near-cancellation: 99^2 = 2 * 70^2 + 1
        assert_eq!(s("99-70*sqrt2").signum(), Ordering::Greater);
        assert_eq!(s("70*sqrt2-99").signum(), Ordering::Less);
        // Pell pair at a size where f64 cannot separate
        let big = s("19601-13860*sqrt2");
        assert_eq!(big.signum(), Ordering::Greater);
        let a = s("665857 - 470832*sqrt2");
        assert_eq!(a.signum(), Ordering::Greater);
    }

    #[test]
    fn floors() {
        assert_eq!(s("3*sqrt2").floor(), BigInt::from(4));
        assert_eq!(s("-sqrt2").floor(), BigInt::from(-2));
        assert_eq!(s("7/2").floor(), BigInt::from(3));
        assert_eq!(s("7/2").ceil(), BigInt::from(4));
        assert_eq!(s("665857/470832 - sqrt2").floor(), BigInt::from(0));
    }

    #[test]
    fn fixed_fraction_of_sqrt2() {
        let f = Surd::sqrt(2).fixed_fraction();
        let approx = f as f64 / 2f64.powi(128);
        assert!((approx - (std::f64::consts::SQRT_2 - 1.0)).abs() < 3e-16);
        assert_eq!(Surd::from_ratio(1, 2).fixed_fraction(), 1u128 << 127);
        assert_eq!(Surd::from_ratio(-1, 4).fixed_fraction(), 3u128 << 126);
    }

    #[test]
    fn high_prec_value() {
        let v = s("sqrt2+sqrt3").to_high_prec(128);
        assert!((v.to_f64() - (2f64.sqrt() + 3f64.sqrt())).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn field_axioms(a in -20i64..20, b in -20i64..20, c in 1i64..20, r in prop::sample::select(vec![2u64, 3, 5, 6, 7])) {
            let x = Surd::from_integer(a) + Surd::sqrt(r).scale_int(b);
            let y = Surd::from_integer(c) + Surd::sqrt(3);
            prop_assert_eq!(&(&x * &y) / &y, x.clone());
            prop_assert_eq!((&x - &x).signum(), Ordering::Equal);
            let expected = (a as f64 + b as f64 * (r as f64).sqrt()).partial_cmp(&0.0).unwrap();
            prop_assert_eq!(x.signum(), expected);
        }
    }
}
