//! Exact arithmetic: rationals, polynomials, root isolation, factorization,
//! matrices and real algebraic numbers.

pub mod factor;
pub mod field;
pub mod matrix;
mod modp;
pub mod poly;
pub mod radical;
pub mod real;
pub mod sturm;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use factor::factor_over_q;
pub use field::{ExactField, OrderedExactField, RationalField};
pub use matrix::QMatrix;
pub use poly::QPoly;
pub use radical::Radical;
pub use real::{sign_of, RealAlgebraic, RealRoot};
pub use sturm::{isolate_real_roots, refine};

/// Arbitrary precision rational number, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// `n / d` as a rational.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Nearest `f64`; saturates to infinity when out of range.
pub fn to_f64(x: &Rational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift = nb - db;
    if shift > 1100 {
        return if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    if shift < -1100 {
        return 0.0;
    }
    // Scale both parts down to a representable range before dividing.
    let s = (nb.max(db) - 900).max(0) as usize;
    let n = (x.numer() >> s).to_f64().unwrap_or(0.0);
    let d = (x.denom() >> s).to_f64().unwrap_or(1.0);
    if d == 0.0 {
        return if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    n / d
}

/// The exact binary value of a finite float.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Natural logarithm of a positive rational, usable far outside the `f64` range.
pub fn ln_rational(x: &Rational) -> f64 {
    fn ln_int(n: &BigInt) -> f64 {
        let bits = n.bits();
        if bits < 1000 {
            libm::log(n.to_f64().unwrap_or(f64::MAX))
        } else {
            let shift = bits - 60;
            libm::log((n >> shift as usize).to_f64().unwrap_or(1.0)) + shift as f64 * core::f64::consts::LN_2
        }
    }
    ln_int(x.numer()) - ln_int(x.denom())
}

/// Simplest rational (smallest denominator, then numerator) in `[lo, hi]`.
pub fn simplest_rational_in(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi, "empty interval");
    if !lo.is_positive() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_rational_in(&-hi.clone(), &-lo.clone());
    }
    let fl = lo.floor();
    if lo.is_integer() {
        return lo.clone();
    }
    if &(&fl + Rational::one()) <= hi {
        return fl + Rational::one();
    }
    // lo and hi share the integer part; recurse on the reciprocals of the fractional parts.
    let a = (hi - &fl).recip();
    let b = (lo - &fl).recip();
    fl + simplest_rational_in(&a, &b).recip()
}

/// A simple rational `r` with `x (1 - rel) <= r <= x`, for `x > 0`.
pub fn rational_below(x: f64, rel: f64) -> Option<Rational> {
    if !(x.is_finite() && x > 0.0) {
        return None;
    }
    let hi = from_f64(x)?;
    let lo = from_f64(x * (1.0 - rel))?;
    Some(simplest_rational_in(&lo, &hi))
}

/// Squarefree part of a nonzero integer (sign preserved), by trial division.
pub fn squarefree_part(n: &BigInt) -> BigInt {
    let neg = n.is_negative();
    let mut m = n.abs();
    let mut out = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &p;
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    out *= m;
    if neg {
        -out
    } else {
        out
    }
}

/// Integer square root if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}
