//! Classical Bernoulli numbers and polynomials, and the multiple
//! (Bernoulli-Noerlund) polynomials built from them.
//!
//! Every operation is generic over [`Scalar`], so the same code runs in exact
//! rational arithmetic and in [`HighPrec`](crate::HighPrec) floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::combinatorics::{weak_compositions, FactorialTable};
use crate::numeric::Scalar;

/// Default capacity of the Bernoulli table.
pub const DEFAULT_K_MAX: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BernoulliError {
    #[error("degree {k} exceeds the table capacity {k_max}")]
    Capacity { k: usize, k_max: usize },
    #[error("weights and shifts have different lengths ({weights} vs {shifts})")]
    DimensionMismatch { weights: usize, shifts: usize },
    #[error("at least one weight is required")]
    NoWeights,
}

/// Exact Bernoulli numbers `B_0, ..., B_{k_max}` read off the generating
/// function `s / (e^s - 1)`, so `B_1 = -1/2`.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    values: Vec<BigRational>,
}

impl BernoulliTable {
    pub fn new(k_max: usize) -> Self {
        // s/(e^s - 1) = 1 / sum_{n>=0} s^n/(n+1)!; invert the series, then
        // multiply the n-th coefficient by n!
        let fact = FactorialTable::new(k_max + 1);
        let a: Vec<BigRational> = (0..=k_max)
            .map(|j| BigRational::new(BigInt::one(), fact.get(j + 1).clone()))
            .collect();
        let mut c: Vec<BigRational> = Vec::with_capacity(k_max + 1);
        c.push(BigRational::one());
        for n in 1..=k_max {
            let mut acc = BigRational::zero();
            for j in 1..=n {
                acc -= &a[j] * &c[n - j];
            }
            c.push(acc);
        }
        let values = c
            .into_iter()
            .enumerate()
            .map(|(n, cn)| cn * BigRational::from_integer(fact.get(n).clone()))
            .collect();
        BernoulliTable { values }
    }

    pub fn k_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, k: usize) -> Result<&BigRational, BernoulliError> {
        self.values
            .get(k)
            .ok_or(BernoulliError::Capacity { k, k_max: self.k_max() })
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Checks `sum_{j=0}^{k} C(k+1, j) B_j = 0` for `1 <= k <= k_max`; returns the
    /// first failing `k`.
    pub fn check_recurrence(&self) -> Result<(), usize> {
        let k_max = self.k_max();
        let fact = FactorialTable::new(k_max + 1);
        for k in 1..=k_max {
            let mut acc = BigRational::zero();
            for j in 0..=k {
                acc += BigRational::from_integer(fact.binomial(k + 1, j)) * &self.values[j];
            }
            if !acc.is_zero() {
                return Err(k);
            }
        }
        Ok(())
    }
}

/// The arguments `(k, t, w, u)` of a multiple Bernoulli polynomial
/// `B_k(t; w, u)`. A missing shift means `u = 0`.
#[derive(Debug, Clone)]
pub struct MultiBernoulliQuery<S> {
    pub k: usize,
    pub t: S,
    pub w: Vec<S>,
    pub u: Option<Vec<S>>,
}

/// Bernoulli table plus factorials; immutable after construction.
#[derive(Debug, Clone)]
pub struct BernoulliEngine {
    table: BernoulliTable,
    fact: FactorialTable,
    half: Vec<BigRational>,
}

impl Default for BernoulliEngine {
    fn default() -> Self {
        Self::new(DEFAULT_K_MAX)
    }
}

impl BernoulliEngine {
    pub fn new(k_max: usize) -> Self {
        let table = BernoulliTable::new(k_max);
        let fact = FactorialTable::new(k_max);
        let half = (0..=k_max)
            .map(|k| {
                // B_k(1/2) = -(1 - 2^{1-k}) B_k
                let two_pow = if k == 0 {
                    BigRational::from_integer(BigInt::from(2))
                } else {
                    BigRational::new(BigInt::one(), BigInt::one() << (k - 1))
                };
                -(BigRational::one() - two_pow) * &table.values[k]
            })
            .collect();
        BernoulliEngine { table, fact, half }
    }

    pub fn k_max(&self) -> usize {
        self.table.k_max()
    }

    pub fn table(&self) -> &BernoulliTable {
        &self.table
    }

    fn check(&self, k: usize) -> Result<(), BernoulliError> {
        if k > self.k_max() {
            Err(BernoulliError::Capacity { k, k_max: self.k_max() })
        } else {
            Ok(())
        }
    }

    fn check_dims<S>(w: &[S], u: Option<&[S]>) -> Result<(), BernoulliError> {
        if w.is_empty() {
            return Err(BernoulliError::NoWeights);
        }
        if let Some(u) = u {
            if u.len() != w.len() {
                return Err(BernoulliError::DimensionMismatch { weights: w.len(), shifts: u.len() });
            }
        }
        Ok(())
    }

    fn factorial<S: Scalar>(&self, like: &S, n: usize) -> S {
        like.lift(&BigRational::from_integer(self.fact.get(n).clone()))
    }

    pub fn bernoulli_number(&self, k: usize) -> Result<BigRational, BernoulliError> {
        self.table.get(k).cloned()
    }

    /// `B_k(u) = sum_n C(k, n) B_n u^{k-n}`.
    pub fn bernoulli_poly<S: Scalar>(&self, k: usize, u: &S) -> Result<S, BernoulliError> {
        self.check(k)?;
        let mut acc = u.lift(&self.table.values[0]);
        for n in 1..=k {
            let c = BigRational::from_integer(self.fact.binomial(k, n)) * &self.table.values[n];
            acc = acc.mul_ref(u).add_ref(&u.lift(&c));
        }
        Ok(acc)
    }

    /// `B_k(1/2)` from the closed form `-(1 - 2^{1-k}) B_k`.
    pub fn bernoulli_poly_half(&self, k: usize) -> Result<BigRational, BernoulliError> {
        self.check(k)?;
        Ok(self.half[k].clone())
    }

    /// Coefficient tables `a[j][m] = B_m(u_j) w_j^m / m!` for `m <= n`.
    fn shifted_factors<S: Scalar>(&self, n: usize, w: &[S], u: Option<&[S]>) -> Result<Vec<Vec<S>>, BernoulliError> {
        let mut out = Vec::with_capacity(w.len());
        for (j, wj) in w.iter().enumerate() {
            let mut row = Vec::with_capacity(n + 1);
            let mut wpow = wj.lift(&BigRational::one());
            for m in 0..=n {
                let b = match u {
                    Some(u) => self.bernoulli_poly(m, &u[j])?,
                    None => wj.lift(&self.table.values[m]),
                };
                row.push(b.mul_ref(&wpow).div_ref(&self.factorial(wj, m)));
                wpow = wpow.mul_ref(wj);
            }
            out.push(row);
        }
        Ok(out)
    }

    fn composition_sum<S: Scalar>(&self, n: usize, factors: &[Vec<S>], like: &S) -> S {
        let mut total = like.lift(&BigRational::zero());
        for comp in weak_compositions(n, factors.len()) {
            let mut term = factors[0][comp[0]].clone();
            if term.is_exact_zero() {
                continue;
            }
            for (row, &nj) in factors.iter().zip(comp.iter()).skip(1) {
                term = term.mul_ref(&row[nj]);
            }
            total = total.add_ref(&term);
        }
        total
    }

    /// `B_n(w, u) = sum_{n_1+...+n_d=n} n!/(n_1!...n_d!) prod B_{n_j}(u_j) w_j^{n_j}`.
    pub fn multi_bernoulli_number<S: Scalar>(&self, n: usize, w: &[S], u: &[S]) -> Result<S, BernoulliError> {
        self.check(n)?;
        Self::check_dims(w, Some(u))?;
        let factors = self.shifted_factors(n, w, Some(u))?;
        let sum = self.composition_sum(n, &factors, &w[0]);
        Ok(sum.mul_ref(&self.factorial(&w[0], n)))
    }

    /// `B_0(w,u), ..., B_k(w,u)`; a missing shift means `u = 0`.
    pub fn multi_bernoulli_numbers<S: Scalar>(&self, k: usize, w: &[S], u: Option<&[S]>) -> Result<Vec<S>, BernoulliError> {
        self.check(k)?;
        Self::check_dims(w, u)?;
        let factors = self.shifted_factors(k, w, u)?;
        Ok((0..=k)
            .map(|n| self.composition_sum(n, &factors, &w[0]).mul_ref(&self.factorial(&w[0], n)))
            .collect())
    }

    /// `B_k(t; w, u) = sum_n C(k, n) B_n(w, u) t^{k-n}`.
    pub fn multi_bernoulli_poly<S: Scalar>(&self, q: &MultiBernoulliQuery<S>) -> Result<S, BernoulliError> {
        let coeffs = self.multi_bernoulli_numbers(q.k, &q.w, q.u.as_deref())?;
        Ok(self.binomial_horner(&coeffs, &q.t))
    }

    /// `sum_n C(k, n) c_n t^{k-n}` with `k = coeffs.len() - 1`.
    fn binomial_horner<S: Scalar>(&self, coeffs: &[S], t: &S) -> S {
        let k = coeffs.len() - 1;
        let mut acc = coeffs[0].clone();
        for (n, c) in coeffs.iter().enumerate().skip(1) {
            let b = t.lift(&BigRational::from_integer(self.fact.binomial(k, n)));
            acc = acc.mul_ref(t).add_ref(&b.mul_ref(c));
        }
        acc
    }

    /// `B*_0(w), ..., B*_k(w)`, the multiple Bernoulli numbers at `u = e_{1/2}`.
    /// Odd entries are exactly zero.
    pub fn star_numbers<S: Scalar>(&self, k: usize, w: &[S]) -> Result<Vec<S>, BernoulliError> {
        self.check(k)?;
        Self::check_dims::<S>(w, None)?;
        let half_k = k / 2;
        // a[j][m] = B_{2m}(1/2) w_j^{2m} / (2m)!
        let factors: Vec<Vec<S>> = w
            .iter()
            .map(|wj| {
                let w2 = wj.mul_ref(wj);
                let mut pow = wj.lift(&BigRational::one());
                (0..=half_k)
                    .map(|m| {
                        let v = wj.lift(&self.half[2 * m]).mul_ref(&pow).div_ref(&self.factorial(wj, 2 * m));
                        pow = pow.mul_ref(&w2);
                        v
                    })
                    .collect()
            })
            .collect();
        let zero = w[0].lift(&BigRational::zero());
        Ok((0..=k)
            .map(|n| {
                if n % 2 == 1 {
                    zero.clone()
                } else {
                    self.composition_sum(n / 2, &factors, &w[0]).mul_ref(&self.factorial(&w[0], n))
                }
            })
            .collect())
    }

    /// `B*_k(t; w) = sum_n k!/((2n)!(k-2n)!) B*_{2n}(w) t^{k-2n}`.
    pub fn multi_bernoulli_star_poly<S: Scalar>(&self, k: usize, t: &S, w: &[S]) -> Result<S, BernoulliError> {
        let coeffs = self.star_numbers(k, w)?;
        Ok(self.binomial_horner(&coeffs, t))
    }

    /// `B*_k(t + w.((u)); w)` with the sawtooth `((x)) = {x} - 1/2`.
    pub fn periodized_bernoulli<S: Scalar>(&self, k: usize, t: &S, w: &[S], u: &[S]) -> Result<S, BernoulliError> {
        Self::check_dims(w, Some(u))?;
        let half = t.lift(&BigRational::new(BigInt::one(), BigInt::from(2)));
        let mut arg = t.clone();
        for (wj, uj) in w.iter().zip(u) {
            arg = arg.add_ref(&wj.mul_ref(&uj.fract().sub_ref(&half)));
        }
        self.multi_bernoulli_star_poly(k, &arg, w)
    }

    /// Barnes zeta at a non-positive integer:
    /// `zeta(-k, t, w) = (-1)^d k! / (prod w_j (k+d)!) B_{k+d}(t; w)`.
    pub fn barnes_zeta_nonpos<S: Scalar>(&self, k: usize, t: &S, w: &[S]) -> Result<S, BernoulliError> {
        let d = w.len();
        let q = MultiBernoulliQuery { k: k + d, t: t.clone(), w: w.to_vec(), u: None };
        let b = self.multi_bernoulli_poly(&q)?;
        let mut denom = self.factorial(t, k + d);
        for wj in w {
            denom = denom.mul_ref(wj);
        }
        let mut v = b.mul_ref(&self.factorial(t, k)).div_ref(&denom);
        if d % 2 == 1 {
            v = t.lift(&BigRational::zero()).sub_ref(&v);
        }
        Ok(v)
    }
}
