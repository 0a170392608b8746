//! Exact real algebraic numbers with decidable comparison.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::factor::factor_over_q;
use super::poly::sign_of_rational;
use super::sturm::{count_roots_closed, isolate_real_roots};
use super::{to_f64, QMatrix, QPoly, Radical, Rational};
use crate::algebra::number_field::FieldValue;

pub use super::sturm::RealRoot;

/// Degree above which derived minimal polynomials are kept squarefree rather than factored.
const FACTOR_LIMIT: usize = 24;

/// An exact real algebraic number.
///
/// Values living in a common embedded number field keep their coordinates so that
/// arithmetic between them stays in the field; everything else falls back to an
/// isolated root of a rational polynomial.
#[derive(Clone, Debug)]
pub enum RealAlgebraic {
    Rational(Rational),
    Radical(Radical),
    Field(FieldValue),
    Root(RealRoot),
}

/// Exact sign of `x` as -1, 0 or 1.
pub fn sign_of(x: &RealAlgebraic) -> i8 {
    x.sign()
}

impl RealAlgebraic {
    pub fn zero() -> Self {
        Self::Rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::Rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::Rational(Rational::from_integer(BigInt::from(n)))
    }

    /// Positive square root of a nonnegative rational.
    pub fn sqrt(x: &Rational) -> Self {
        if x.is_zero() {
            return Self::zero();
        }
        match Radical::new(x.clone(), 2) {
            Ok(r) => Self::from(r),
            Err(_) => panic!("square root of a negative rational"),
        }
    }

    /// Wraps a root, collapsing exact rational roots.
    pub fn from_root(r: RealRoot) -> Self {
        if r.is_exact() {
            Self::Rational(r.lo)
        } else if r.poly.deg() == 1 {
            Self::Rational(-r.poly.coeff(0) / r.poly.coeff(1))
        } else {
            Self::Root(r)
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Self::Rational(r) => Some(r.clone()),
            Self::Radical(r) => r.as_rational().cloned(),
            Self::Field(f) => f.as_rational(),
            Self::Root(r) if r.is_exact() => Some(r.lo.clone()),
            Self::Root(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == 0
    }

    pub fn sign(&self) -> i8 {
        match self {
            Self::Rational(r) => sign_of_rational(r),
            Self::Radical(_) => 1,
            Self::Field(f) => f.sign(),
            Self::Root(r) => match r.cmp_rational(&Rational::zero()) {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            },
        }
    }

    /// Isolated-root form: squarefree defining polynomial and isolating interval.
    pub fn to_root(&self) -> RealRoot {
        match self {
            Self::Rational(r) => RealRoot::rational(r.clone()),
            Self::Radical(r) => radical_root(r),
            Self::Field(f) => field_root(f),
            Self::Root(r) => r.clone(),
        }
    }

    /// Rational interval of width at most `eps` containing the value.
    pub fn enclosure(&self, eps: &Rational) -> (Rational, Rational) {
        if let Self::Field(f) = self {
            return f.field.field.enclosure(&f.coords, f.field.k, eps);
        }
        let mut r = self.to_root();
        r.refine_to(eps);
        (r.lo, r.hi)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Rational(r) => to_f64(r),
            Self::Radical(r) => r.to_f64(),
            Self::Field(f) => f.to_f64(),
            Self::Root(r) => r.to_f64(),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Self::Rational(r) => Self::Rational(-r.clone()),
            Self::Field(f) => Self::Field(FieldValue::new(f.field.clone(), f.field.field.neg(&f.coords))),
            _ => {
                let r = self.to_root();
                Self::from_root(RealRoot { poly: r.poly.reflect().monic(), lo: -r.hi, hi: -r.lo })
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Self::Rational(a), Self::Rational(b)) => Self::Rational(a + b),
            (Self::Rational(a), _) if a.is_zero() => other.clone(),
            (_, Self::Rational(b)) if b.is_zero() => self.clone(),
            (Self::Field(a), Self::Field(b)) if a.field.same_as(&b.field) => {
                Self::Field(FieldValue::new(a.field.clone(), a.field.field.add(&a.coords, &b.coords)))
            }
            (Self::Field(a), Self::Rational(b)) | (Self::Rational(b), Self::Field(a)) => {
                let k = &a.field.field;
                Self::Field(FieldValue::new(a.field.clone(), k.add(&a.coords, &k.from_rational(b))))
            }
            _ => combine(&self.to_root(), &other.to_root(), Op::Add),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Self::Rational(a), Self::Rational(b)) => Self::Rational(a * b),
            (Self::Rational(a), _) | (_, Self::Rational(a)) if a.is_zero() => Self::zero(),
            (Self::Rational(a), x) | (x, Self::Rational(a)) if a.is_one() => x.clone(),
            (Self::Radical(a), Self::Radical(b)) => Self::from(a.mul(b)),
            (Self::Radical(r), Self::Rational(a)) | (Self::Rational(a), Self::Radical(r)) => {
                let m = Self::from(r.mul_rational(&a.abs()).expect("nonzero"));
                if a.is_negative() {
                    m.neg()
                } else {
                    m
                }
            }
            (Self::Field(a), Self::Field(b)) if a.field.same_as(&b.field) => {
                Self::Field(FieldValue::new(a.field.clone(), a.field.field.mul(&a.coords, &b.coords)))
            }
            (Self::Field(a), Self::Rational(b)) | (Self::Rational(b), Self::Field(a)) => {
                Self::Field(FieldValue::new(a.field.clone(), a.field.field.scale(&a.coords, b)))
            }
            _ => combine(&self.to_root(), &other.to_root(), Op::Mul),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Self {
        match self {
            Self::Rational(r) => Self::Rational(r.recip()),
            Self::Radical(r) => Self::from(r.inv()),
            Self::Field(f) => Self::Field(FieldValue::new(f.field.clone(), f.field.field.inv(&f.coords))),
            Self::Root(_) => {
                assert!(self.sign() != 0, "inverse of zero");
                let mut r = self.to_root();
                while r.lo.is_negative() != r.hi.is_negative() || r.lo.is_zero() || r.hi.is_zero() {
                    r.bisect();
                }
                Self::from_root(RealRoot { poly: r.poly.reverse().monic(), lo: r.hi.recip(), hi: r.lo.recip() })
            }
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// Exact comparison.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Rational(a), Self::Rational(b)) => a.cmp(b),
            (Self::Radical(a), Self::Radical(b)) => a.cmp(b),
            (Self::Radical(a), Self::Rational(b)) => a.cmp_rational(b),
            (Self::Rational(a), Self::Radical(b)) => b.cmp_rational(a).reverse(),
            (Self::Field(_), Self::Rational(_)) | (Self::Rational(_), Self::Field(_)) => {
                ordering_of(self.sub(other).sign())
            }
            (Self::Field(a), Self::Field(b)) if a.field.same_as(&b.field) => ordering_of(self.sub(other).sign()),
            (Self::Field(a), Self::Radical(r)) => field_vs_radical(a, r),
            (Self::Radical(r), Self::Field(a)) => field_vs_radical(a, r).reverse(),
            _ => compare_roots(&self.to_root(), &other.to_root()),
        }
    }

    /// Short human-readable form.
    pub fn describe(&self) -> String {
        match self {
            Self::Rational(r) => format!("{r}"),
            Self::Radical(r) => r.describe(),
            Self::Field(f) => {
                let p = f.field.field.to_poly(&f.coords);
                if let Some(r) = f.as_rational() {
                    format!("{r}")
                } else {
                    format!("{} with x the root #{} of {}", p, f.field.k + 1, f.field.field.minpoly())
                }
            }
            Self::Root(r) => format!("root of {} in [{}, {}]", r.poly, r.lo, r.hi),
        }
    }
}

fn ordering_of(s: i8) -> Ordering {
    s.cmp(&0)
}

fn field_vs_radical(a: &FieldValue, r: &Radical) -> Ordering {
    if a.sign() <= 0 {
        return Ordering::Less;
    }
    let k = &a.field.field;
    let pw = k.pow(&a.coords, r.index());
    let diff = k.sub(&pw, &k.from_rational(r.base()));
    ordering_of(k.sign_at(&diff, a.field.k))
}

fn radical_root(r: &Radical) -> RealRoot {
    if let Some(q) = r.as_rational() {
        return RealRoot::rational(q.clone());
    }
    let k = r.index() as usize;
    let p = &QPoly::monomial(Rational::one(), k) - &QPoly::constant(r.base().clone());
    isolate_real_roots(&p).expect("nonzero").pop().expect("positive root exists")
}

fn field_root(f: &FieldValue) -> RealRoot {
    if let Some(q) = f.as_rational() {
        return RealRoot::rational(q);
    }
    let k = &f.field.field;
    let m = k.minpoly_of(&f.coords);
    let mut eps = Rational::new(BigInt::one(), BigInt::from(1u64 << 20));
    loop {
        let (lo, hi) = k.enclosure(&f.coords, f.field.k, &eps);
        if let Some(r) = isolate_in(&m, lo, hi) {
            return r;
        }
        eps /= Rational::from_integer(BigInt::from(1u64 << 16));
    }
}

/// Returns the root of squarefree `p` inside `[lo, hi]` when it is unique.
fn isolate_in(p: &QPoly, lo: Rational, hi: Rational) -> Option<RealRoot> {
    match count_roots_closed(p, &lo, &hi) {
        1 => {
            if p.sign_at(&lo) == 0 {
                return Some(RealRoot::rational(lo));
            }
            if p.sign_at(&hi) == 0 {
                return Some(RealRoot::rational(hi));
            }
            Some(RealRoot { poly: p.clone(), lo, hi })
        }
        _ => None,
    }
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Mul,
}

/// Sum or product of two isolated roots via the charpoly of a Kronecker combination.
fn combine(a: &RealRoot, b: &RealRoot, op: Op) -> RealAlgebraic {
    if a.is_exact() && b.is_exact() {
        return RealAlgebraic::Rational(match op {
            Op::Add => &a.lo + &b.lo,
            Op::Mul => &a.lo * &b.lo,
        });
    }
    let ca = QMatrix::companion(&a.poly);
    let cb = QMatrix::companion(&b.poly);
    let ia = QMatrix::identity(ca.nrows());
    let ib = QMatrix::identity(cb.nrows());
    let m = match op {
        Op::Add => &ca.kron(&ib) + &ia.kron(&cb),
        Op::Mul => ca.kron(&cb),
    };
    let mut poly = m.charpoly().squarefree_part();
    if poly.deg() <= FACTOR_LIMIT {
        let factors: Vec<QPoly> = factor_over_q(&poly).into_iter().map(|(f, _)| f).collect();
        let (mut ra, mut rb) = (a.clone(), b.clone());
        loop {
            let (lo, hi) = enclose(&ra, &rb, op);
            let hits: Vec<&QPoly> = factors.iter().filter(|f| count_roots_closed(f, &lo, &hi) > 0).collect();
            if hits.len() == 1 {
                poly = hits[0].clone();
                break;
            }
            refine_pair(&mut ra, &mut rb);
        }
    }
    let (mut ra, mut rb) = (a.clone(), b.clone());
    loop {
        let (lo, hi) = enclose(&ra, &rb, op);
        if let Some(r) = isolate_in(&poly, lo, hi) {
            return RealAlgebraic::from_root(r);
        }
        refine_pair(&mut ra, &mut rb);
    }
}

fn refine_pair(a: &mut RealRoot, b: &mut RealRoot) {
    for _ in 0..4 {
        a.bisect();
        b.bisect();
    }
}

fn enclose(a: &RealRoot, b: &RealRoot, op: Op) -> (Rational, Rational) {
    match op {
        Op::Add => (&a.lo + &b.lo, &a.hi + &b.hi),
        Op::Mul => {
            let p = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
            let lo = p.iter().min().unwrap().clone();
            let hi = p.iter().max().unwrap().clone();
            (lo, hi)
        }
    }
}

/// Compares two isolated roots exactly.
pub fn compare_roots(a: &RealRoot, b: &RealRoot) -> Ordering {
    if a.is_exact() {
        return b.cmp_rational(&a.lo).reverse();
    }
    if b.is_exact() {
        return a.cmp_rational(&b.lo);
    }
    let lo = if a.lo > b.lo { &a.lo } else { &b.lo };
    let hi = if a.hi < b.hi { &a.hi } else { &b.hi };
    if lo <= hi {
        let g = a.poly.gcd(&b.poly);
        // A common root inside the overlap is the unique root of each interval.
        if !g.is_constant() && count_roots_closed(&g, lo, hi) > 0 {
            return Ordering::Equal;
        }
    }
    let (mut ra, mut rb) = (a.clone(), b.clone());
    loop {
        if ra.hi < rb.lo {
            return Ordering::Less;
        }
        if rb.hi < ra.lo {
            return Ordering::Greater;
        }
        if ra.is_exact() || rb.is_exact() {
            return compare_roots(&ra, &rb);
        }
        ra.bisect();
        rb.bisect();
    }
}

impl From<Rational> for RealAlgebraic {
    fn from(r: Rational) -> Self {
        Self::Rational(r)
    }
}

impl From<Radical> for RealAlgebraic {
    fn from(r: Radical) -> Self {
        match r.as_rational() {
            Some(q) => Self::Rational(q.clone()),
            None => Self::Radical(r),
        }
    }
}

impl From<FieldValue> for RealAlgebraic {
    fn from(f: FieldValue) -> Self {
        Self::Field(f)
    }
}

impl PartialEq for RealAlgebraic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }
}

impl Eq for RealAlgebraic {}

impl PartialOrd for RealAlgebraic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RealAlgebraic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl fmt::Display for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::number_field::{EmbeddedField, NumberFieldR};
    use crate::exactmath::{q, q_int};
    use alloc::sync::Arc;
    use alloc::vec;

    fn sqrt2_field() -> EmbeddedField {
        let k = Arc::new(NumberFieldR::new(&QPoly::from_ints(&[-2, 0, 1])).unwrap());
        EmbeddedField::new(k, 1)
    }

    #[test]
    fn sqrt2_minus_three_halves_is_negative() {
        let s = RealAlgebraic::sqrt(&q_int(2));
        assert_eq!(sign_of(&s.sub(&RealAlgebraic::from(q(3, 2)))), -1);
        let f = RealAlgebraic::Field(FieldValue::new(sqrt2_field(), vec![q(-3, 2), q_int(1)]));
        assert_eq!(sign_of(&f), -1);
    }

    #[test]
    fn root_minus_itself_is_zero() {
        let r = isolate_real_roots(&QPoly::from_ints(&[-2, 0, 1])).unwrap().pop().unwrap();
        let x = RealAlgebraic::Root(r);
        assert_eq!(sign_of(&x.sub(&x)), 0);
    }

    #[test]
    fn nested_radical_identity() {
        // sqrt2 + sqrt3 against the root of x^4 - 10x^2 + 1 in [3, 3.2]
        let a = RealAlgebraic::sqrt(&q_int(2)).add(&RealAlgebraic::sqrt(&q_int(3)));
        let b =
            RealAlgebraic::Root(RealRoot { poly: QPoly::from_ints(&[1, 0, -10, 0, 1]), lo: q_int(3), hi: q(16, 5) });
        assert_eq!(sign_of(&a.sub(&b)), 0);
        assert_eq!(a.cmp_exact(&b), Ordering::Equal);
        assert_eq!(a.mul(&a), RealAlgebraic::from(q_int(5)).add(&RealAlgebraic::sqrt(&q_int(24))));
    }

    #[test]
    fn mixed_comparisons() {
        let s = RealAlgebraic::sqrt(&q_int(2));
        let f = RealAlgebraic::Field(FieldValue::new(sqrt2_field(), vec![q_int(0), q_int(1)]));
        assert_eq!(s.cmp_exact(&f), Ordering::Equal);
        let g =
            RealAlgebraic::Field(FieldValue::new(EmbeddedField::new(sqrt2_field().field, 0), vec![q_int(0), q_int(1)]));
        assert_eq!(g.cmp_exact(&s), Ordering::Less);
        assert_eq!(s.inv().mul(&s), RealAlgebraic::one());
        let c = RealAlgebraic::Radical(Radical::new(q_int(3), 3).unwrap());
        assert!(c > s);
        assert!(c.neg() < RealAlgebraic::zero());
        let r = c.neg().inv();
        assert!((r.to_f64() + 1.0 / 3f64.cbrt()).abs() < 1e-12);
    }
}
