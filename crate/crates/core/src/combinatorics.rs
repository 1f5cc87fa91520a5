//! Composition enumeration and factorial tables shared by the Bernoulli and
//! Fourier code.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Iterator over the compositions of `total` into `parts` ordered parts, each
/// at least `min_part`. With `min_part = 0` these are weak compositions.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Vec<usize>,
    min_part: usize,
    done: bool,
}

impl Compositions {
    pub fn new(total: usize, parts: usize, min_part: usize) -> Self {
        if parts == 0 {
            return Compositions { current: Vec::new(), min_part, done: total != 0 };
        }
        if total < parts * min_part {
            return Compositions { current: Vec::new(), min_part, done: true };
        }
        // first composition in lexicographic order: everything in the last slot
        let mut current = vec![min_part; parts];
        current[parts - 1] = total - (parts - 1) * min_part;
        Compositions { current, min_part, done: false }
    }
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let k = self.current.len();
        // advance: find the rightmost position i < k-1 that can grow by taking
        // one unit from the tail
        let mut advanced = false;
        if k >= 2 {
            let mut i = k - 1;
            while i > 0 {
                i -= 1;
                let tail: usize = self.current[i + 1..].iter().sum();
                let tail_min = (k - i - 1) * self.min_part;
                if tail > tail_min {
                    self.current[i] += 1;
                    let rest = tail - 1;
                    for v in self.current[i + 1..].iter_mut() {
                        *v = self.min_part;
                    }
                    self.current[k - 1] = rest - (k - i - 2) * self.min_part;
                    advanced = true;
                    break;
                }
            }
        }
        if !advanced {
            self.done = true;
        }
        Some(out)
    }
}

/// Weak compositions of `total` into `parts` parts.
pub fn weak_compositions(total: usize, parts: usize) -> Compositions {
    Compositions::new(total, parts, 0)
}

/// Compositions of `total` into `parts` positive parts.
pub fn positive_compositions(total: usize, parts: usize) -> Compositions {
    Compositions::new(total, parts, 1)
}

/// Exact factorials `0!, 1!, ..., n!`.
#[derive(Debug, Clone)]
pub struct FactorialTable {
    values: Vec<BigInt>,
}

impl FactorialTable {
    pub fn new(n: usize) -> Self {
        let mut values = Vec::with_capacity(n + 1);
        values.push(BigInt::one());
        for k in 1..=n {
            let next = &values[k - 1] * BigInt::from(k);
            values.push(next);
        }
        FactorialTable { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, k: usize) -> &BigInt {
        &self.values[k]
    }

    pub fn binomial(&self, n: usize, k: usize) -> BigInt {
        if k > n {
            return BigInt::from(0);
        }
        &self.values[n] / (&self.values[k] * &self.values[n - k])
    }

    /// `n! / (n_1! ... n_d!)` with `n = sum n_j`.
    pub fn multinomial(&self, parts: &[usize]) -> BigInt {
        let n: usize = parts.iter().sum();
        let denom = parts.iter().fold(BigInt::one(), |acc, &p| acc * &self.values[p]);
        &self.values[n] / denom
    }

    pub fn ratio(&self, num: usize, den: usize) -> BigRational {
        BigRational::new(self.values[num].clone(), self.values[den].clone())
    }
}
