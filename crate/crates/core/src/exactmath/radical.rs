//! Positive real radicals `r^(1/k)` with rational `r > 0`.

use alloc::format;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed};

use super::{ln_rational, q_int, Rational};
use crate::error::{Error, Result};

/// The positive real number `base^(1/index)`.
///
/// Kept in lowest terms: the index is as small as possible for the value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Radical {
    base: Rational,
    index: u32,
}

fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(k);
    if Pow::pow(&r, k) == *n {
        Some(r)
    } else {
        None
    }
}

impl Radical {
    pub fn new(base: Rational, index: u32) -> Result<Self> {
        if !base.is_positive() {
            return Err(Error::Domain(format!("radical base must be positive, got {base}")));
        }
        if index == 0 {
            return Err(Error::Domain("radical index must be at least 1".into()));
        }
        Ok(Self::normalized(base, index))
    }

    pub fn rational(x: Rational) -> Result<Self> {
        Self::new(x, 1)
    }

    pub fn one() -> Self {
        Self { base: Rational::one(), index: 1 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(q_int(n), 1).expect("positive integer")
    }

    fn normalized(mut base: Rational, mut index: u32) -> Self {
        if base.is_one() {
            return Self { base, index: 1 };
        }
        let mut j = 2;
        while j <= index {
            if index.is_multiple_of(j) {
                if let (Some(n), Some(d)) = (exact_root(base.numer(), j), exact_root(base.denom(), j)) {
                    base = Rational::new(n, d);
                    index /= j;
                    continue;
                }
            }
            j += 1;
        }
        Self { base, index }
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn is_rational(&self) -> bool {
        self.index == 1
    }

    /// The value as a rational when the index is 1.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.index == 1 {
            Some(&self.base)
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.base.is_one()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let l = self.index.lcm(&other.index);
        let a = Pow::pow(&self.base, l / self.index);
        let b = Pow::pow(&other.base, l / other.index);
        Self::normalized(a * b, l)
    }

    pub fn inv(&self) -> Self {
        Self { base: self.base.recip(), index: self.index }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn powi(&self, e: i32) -> Self {
        let p = Pow::pow(&self.base, e.unsigned_abs());
        let r = Self::normalized(p, self.index);
        if e < 0 {
            r.inv()
        } else {
            r
        }
    }

    /// `self^(1/k)`.
    pub fn root(&self, k: u32) -> Self {
        Self::normalized(self.base.clone(), self.index * k)
    }

    pub fn mul_rational(&self, q: &Rational) -> Result<Self> {
        Ok(self.mul(&Self::rational(q.clone())?))
    }

    pub fn to_f64(&self) -> f64 {
        if self.index == 1 {
            return super::to_f64(&self.base);
        }
        libm::exp(ln_rational(&self.base) / self.index as f64)
    }

    pub fn ln(&self) -> f64 {
        ln_rational(&self.base) / self.index as f64
    }

    /// Compares with a rational exactly.
    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        if !x.is_positive() {
            return Ordering::Greater;
        }
        self.base.cmp(&Pow::pow(x, self.index))
    }

    /// Product of a list of radicals.
    pub fn product<'a>(xs: impl IntoIterator<Item = &'a Radical>) -> Self {
        xs.into_iter().fold(Self::one(), |acc, x| acc.mul(x))
    }

    /// Human-readable form such as `8^(-1/4)` or `3/2`.
    pub fn describe(&self) -> String {
        if self.index == 1 {
            return format!("{}", self.base);
        }
        if self.base < Rational::one() && self.base.numer().is_one() {
            return format!("{}^(-1/{})", self.base.denom(), self.index);
        }
        format!("({})^(1/{})", self.base, self.index)
    }
}

impl PartialOrd for Radical {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Radical {
    fn cmp(&self, other: &Self) -> Ordering {
        let a = Pow::pow(&self.base, other.index);
        let b = Pow::pow(&other.base, self.index);
        a.cmp(&b)
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl Default for Radical {
    fn default() -> Self {
        Self::one()
    }
}
