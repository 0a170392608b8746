//! Totally real number fields in a power basis, their real embeddings and
//! exact signs of elements under an embedding.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::factor::is_irreducible;
use crate::exactmath::field::{ExactField, OrderedExactField};
use crate::exactmath::sturm::RealRoot;
use crate::exactmath::{isolate_real_roots, q_int, squarefree_part, to_f64, QMatrix, QPoly, Rational};

/// Width to which embeddings are refined once at construction.
const EMBEDDING_BITS: usize = 96;

/// A totally real number field `Q[x]/(m)` with its real embeddings in ascending order.
#[derive(Debug)]
pub struct NumberFieldR {
    minpoly: QPoly,
    embeddings: Vec<RealRoot>,
    approx: Vec<f64>,
    /// Coordinates of `x^d, ..., x^(2d-2)` reduced modulo the minimal polynomial.
    reduction: Vec<Vec<Rational>>,
}

impl PartialEq for NumberFieldR {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly
    }
}

impl Eq for NumberFieldR {}

impl NumberFieldR {
    /// Builds the field defined by `minpoly`, which must be irreducible with only real roots.
    pub fn new(minpoly: &QPoly) -> Result<Self> {
        if minpoly.is_constant() {
            return Err(Error::InvalidInput("minimal polynomial must be nonconstant".into()));
        }
        if !is_irreducible(minpoly) {
            return Err(Error::InvalidInput(format!("{minpoly} is not irreducible over Q")));
        }
        Self::new_unchecked(minpoly)
    }

    /// As [`NumberFieldR::new`] but trusts irreducibility.
    pub(crate) fn new_unchecked(minpoly: &QPoly) -> Result<Self> {
        let m = minpoly.monic();
        let d = m.deg();
        let mut roots = isolate_real_roots(&m)?;
        if roots.len() != d {
            return Err(Error::NotTotallyReal(format!("{m} has {} real roots but degree {d}", roots.len())));
        }
        let eps = Rational::new(One::one(), num_bigint::BigInt::one() << EMBEDDING_BITS);
        for r in roots.iter_mut() {
            r.refine_to(&eps);
        }
        let approx = roots.iter().map(RealRoot::to_f64).collect();
        let mut reduction = Vec::new();
        if d > 0 {
            // x^d = -(m_0 + ... + m_{d-1} x^{d-1})
            let mut cur: Vec<Rational> = (0..d).map(|i| -m.coeff(i)).collect();
            for _ in d..2 * d - 1 {
                reduction.push(cur.clone());
                // multiply by x
                let top = cur[d - 1].clone();
                let mut next = vec![Rational::zero(); d];
                for i in 1..d {
                    next[i] = cur[i - 1].clone();
                }
                for i in 0..d {
                    next[i] -= &top * m.coeff(i);
                }
                cur = next;
            }
        }
        Ok(Self { minpoly: m, embeddings: roots, approx, reduction })
    }

    /// The field of rationals, presented as `Q[x]/(x)`.
    pub fn rationals() -> Arc<Self> {
        Arc::new(Self::new_unchecked(&QPoly::x()).expect("x has one real root"))
    }

    pub fn minpoly(&self) -> &QPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }

    pub fn embedding(&self, k: usize) -> &RealRoot {
        &self.embeddings[k]
    }

    pub fn embeddings(&self) -> &[RealRoot] {
        &self.embeddings
    }

    pub fn embedding_f64(&self, k: usize) -> f64 {
        self.approx[k]
    }

    pub fn zero(&self) -> Vec<Rational> {
        vec![Rational::zero(); self.degree()]
    }

    pub fn one(&self) -> Vec<Rational> {
        self.from_rational(&Rational::one())
    }

    /// The power-basis generator `x`.
    pub fn gen(&self) -> Vec<Rational> {
        self.reduce(&QPoly::x())
    }

    pub fn from_rational(&self, x: &Rational) -> Vec<Rational> {
        let mut v = self.zero();
        v[0] = x.clone();
        v
    }

    pub fn from_poly(&self, p: &QPoly) -> Vec<Rational> {
        self.reduce(p)
    }

    pub fn to_poly(&self, a: &[Rational]) -> QPoly {
        QPoly::new(a.to_vec())
    }

    /// Reduces an arbitrary polynomial modulo the minimal polynomial.
    pub fn reduce(&self, p: &QPoly) -> Vec<Rational> {
        let r = p.rem(&self.minpoly);
        let mut v = r.into_coeffs();
        v.resize(self.degree(), Rational::zero());
        v
    }

    pub fn is_zero(&self, a: &[Rational]) -> bool {
        a.iter().all(Zero::is_zero)
    }

    /// The element as a rational, when it lies in `Q`.
    pub fn as_rational(&self, a: &[Rational]) -> Option<Rational> {
        if a.iter().skip(1).all(Zero::is_zero) {
            Some(a[0].clone())
        } else {
            None
        }
    }

    pub fn add(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn neg(&self, a: &[Rational]) -> Vec<Rational> {
        a.iter().map(|x| -x.clone()).collect()
    }

    pub fn scale(&self, a: &[Rational], c: &Rational) -> Vec<Rational> {
        a.iter().map(|x| x * c).collect()
    }

    pub fn mul(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let d = self.degree();
        if d == 1 {
            return vec![&a[0] * &b[0]];
        }
        let mut full = vec![Rational::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    full[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<Rational> = full[..d].to_vec();
        for (k, c) in full[d..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&self.reduction[k]) {
                *o += c * r;
            }
        }
        out
    }

    pub fn pow(&self, a: &[Rational], mut e: u32) -> Vec<Rational> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: &[Rational]) -> Vec<Rational> {
        let p = self.to_poly(a);
        let inv = p.inv_mod(&self.minpoly).expect("inverse of zero in a number field");
        self.reduce(&inv)
    }

    /// Matrix of multiplication by `a` on the power basis (column `j` is `a x^j`).
    pub fn mult_matrix(&self, a: &[Rational]) -> QMatrix {
        let d = self.degree();
        let mut m = QMatrix::zeros(d, d);
        let mut col = a.to_vec();
        let x = self.gen();
        for j in 0..d {
            for i in 0..d {
                m[(i, j)] = col[i].clone();
            }
            if j + 1 < d {
                col = self.mul(&col, &x);
            }
        }
        m
    }

    pub fn trace(&self, a: &[Rational]) -> Rational {
        let m = self.mult_matrix(a);
        (0..self.degree()).map(|i| m[(i, i)].clone()).sum()
    }

    pub fn norm(&self, a: &[Rational]) -> Rational {
        self.mult_matrix(a).det()
    }

    /// Characteristic polynomial of `a` (a power of its minimal polynomial).
    pub fn charpoly(&self, a: &[Rational]) -> QPoly {
        self.mult_matrix(a).charpoly()
    }

    /// Minimal polynomial of `a` over `Q`.
    pub fn minpoly_of(&self, a: &[Rational]) -> QPoly {
        self.charpoly(a).squarefree_part()
    }

    /// Floating value of `a` under embedding `k`, with an error bound.
    pub fn value_f64(&self, a: &[Rational], k: usize) -> (f64, f64) {
        let t = self.approx[k];
        let at = t.abs();
        // |t - root| after rounding the refined embedding
        let dt = at * f64::EPSILON + 1e-28;
        let mut val = 0.0;
        for c in a.iter().rev() {
            val = val * t + to_f64(c);
        }
        // sum |c_i| |t|^i and sum i |c_i| |t|^(i-1)
        let (mut mag, mut dmag, mut pw, mut dpw) = (0.0, 0.0, 1.0, 0.0);
        for (i, c) in a.iter().enumerate() {
            let cf = to_f64(c).abs();
            mag += cf * pw;
            dmag += cf * dpw;
            dpw = pw * (i + 1) as f64;
            pw *= at + dt;
        }
        let err = mag * 4.0 * (a.len() as f64 + 2.0) * f64::EPSILON + dmag * dt * 1.01;
        (val, err)
    }

    /// Exact sign of `a` under embedding `k`.
    pub fn sign_at(&self, a: &[Rational], k: usize) -> i8 {
        if self.is_zero(a) {
            return 0;
        }
        if let Some(r) = self.as_rational(a) {
            return if r.is_positive() { 1 } else { -1 };
        }
        let (v, err) = self.value_f64(a, k);
        if v.is_finite() && err.is_finite() && v.abs() > 2.0 * err {
            return if v > 0.0 { 1 } else { -1 };
        }
        let p = self.to_poly(a);
        let mut root = self.embeddings[k].clone();
        loop {
            let (lo, hi) = p.eval_interval(&root.lo, &root.hi);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            for _ in 0..8 {
                root.bisect();
            }
            if root.is_exact() {
                let s = p.sign_at(&root.lo);
                debug_assert!(s != 0);
                return s;
            }
        }
    }

    /// `a` under embedding `k` to full relative double precision, also when the
    /// power-basis coordinates are large and cancel.
    pub fn value_accurate(&self, a: &[Rational], k: usize) -> f64 {
        if self.is_zero(a) {
            return 0.0;
        }
        let (v, err) = self.value_f64(a, k);
        if v.is_finite() && err <= v.abs() * 4.0 * f64::EPSILON {
            return v;
        }
        let mut eps = crate::exactmath::from_f64(if err.is_finite() && err > 0.0 { err } else { 1.0 })
            .unwrap_or_else(|| q_int(1));
        loop {
            eps /= q_int(1 << 30);
            let (lo, hi) = self.enclosure(a, k, &eps);
            if lo.is_positive() == hi.is_positive() && !lo.is_zero() && !hi.is_zero() {
                let width = &hi - &lo;
                let small = if lo.is_positive() { lo.clone() } else { -hi.clone() };
                if width * q_int(1 << 52) <= small {
                    return to_f64(&((lo + hi) / q_int(2)));
                }
            }
        }
    }

    /// Rational enclosure of `a` under embedding `k` of width at most `eps`.
    pub fn enclosure(&self, a: &[Rational], k: usize, eps: &Rational) -> (Rational, Rational) {
        let p = self.to_poly(a);
        let mut root = self.embeddings[k].clone();
        loop {
            let (lo, hi) = p.eval_interval(&root.lo, &root.hi);
            if &(&hi - &lo) <= eps || root.is_exact() {
                return (lo, hi);
            }
            for _ in 0..4 {
                root.bisect();
            }
        }
    }

    /// Short description: `Q`, `Q(√D)` for quadratics, otherwise the defining polynomial.
    pub fn describe(&self) -> String {
        describe_minpoly(&self.minpoly)
    }
}

/// Canonical name of the field defined by an irreducible polynomial.
pub fn describe_minpoly(m: &QPoly) -> String {
    match m.deg() {
        1 => "Q".into(),
        2 => {
            let m = m.monic();
            let disc = m.coeff(1) * m.coeff(1) - m.coeff(0) * q_int(4);
            let n = disc.numer() * disc.denom();
            format!("Q(√{})", squarefree_part(&n))
        }
        _ => format!("Q[x]/({m})"),
    }
}

/// A number field together with a chosen real embedding: an ordered exact field.
#[derive(Clone, Debug)]
pub struct EmbeddedField {
    pub field: Arc<NumberFieldR>,
    pub k: usize,
}

impl EmbeddedField {
    pub fn new(field: Arc<NumberFieldR>, k: usize) -> Self {
        assert!(k < field.degree(), "embedding index out of range");
        Self { field, k }
    }

    pub fn rationals() -> Self {
        Self { field: NumberFieldR::rationals(), k: 0 }
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    /// Same field (by minimal polynomial) and same embedding.
    pub fn same_as(&self, other: &Self) -> bool {
        self.k == other.k && (Arc::ptr_eq(&self.field, &other.field) || self.field.minpoly() == other.field.minpoly())
    }

    pub fn root(&self) -> &RealRoot {
        self.field.embedding(self.k)
    }

    pub fn value_f64(&self, a: &[Rational]) -> f64 {
        self.field.value_f64(a, self.k).0
    }

    pub fn value_with_error(&self, a: &[Rational]) -> (f64, f64) {
        self.field.value_f64(a, self.k)
    }

    pub fn gen(&self) -> Vec<Rational> {
        self.field.gen()
    }

    pub fn pow(&self, a: &[Rational], e: u32) -> Vec<Rational> {
        self.field.pow(a, e)
    }

    pub fn describe(&self) -> String {
        if self.field.is_rationals() {
            return "Q".into();
        }
        format!("{} at root #{}", self.field.describe(), self.k + 1)
    }
}

impl ExactField for EmbeddedField {
    type Elem = Vec<Rational>;
    fn zero(&self) -> Vec<Rational> {
        self.field.zero()
    }
    fn one(&self) -> Vec<Rational> {
        self.field.one()
    }
    fn from_rational(&self, x: &Rational) -> Vec<Rational> {
        self.field.from_rational(x)
    }
    fn is_zero(&self, a: &Vec<Rational>) -> bool {
        self.field.is_zero(a)
    }
    fn add(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Vec<Rational> {
        self.field.add(a, b)
    }
    fn sub(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Vec<Rational> {
        self.field.sub(a, b)
    }
    fn mul(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Vec<Rational> {
        self.field.mul(a, b)
    }
    fn neg(&self, a: &Vec<Rational>) -> Vec<Rational> {
        self.field.neg(a)
    }
    fn inv(&self, a: &Vec<Rational>) -> Vec<Rational> {
        self.field.inv(a)
    }
}

impl OrderedExactField for EmbeddedField {
    fn sign(&self, a: &Vec<Rational>) -> i8 {
        self.field.sign_at(a, self.k)
    }
}

/// An element of an embedded field, viewed as a real number.
#[derive(Clone, Debug)]
pub struct FieldValue {
    pub field: EmbeddedField,
    pub coords: Vec<Rational>,
}

impl FieldValue {
    pub fn new(field: EmbeddedField, coords: Vec<Rational>) -> Self {
        debug_assert_eq!(coords.len(), field.degree());
        Self { field, coords }
    }

    pub fn sign(&self) -> i8 {
        self.field.sign(&self.coords)
    }

    pub fn to_f64(&self) -> f64 {
        self.field.value_f64(&self.coords)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.field.field.as_rational(&self.coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::q;

    #[test]
    fn quadratic_field_arithmetic() {
        let k = NumberFieldR::new(&QPoly::from_ints(&[-2, 0, 1])).unwrap();
        let s = k.gen();
        assert_eq!(k.mul(&s, &s), k.from_rational(&q_int(2)));
        let a = vec![q_int(1), q_int(1)];
        let ai = k.inv(&a);
        assert_eq!(k.mul(&a, &ai), k.one());
        assert_eq!(k.norm(&a), q_int(-1));
        assert_eq!(k.trace(&a), q_int(2));
        assert_eq!(k.sign_at(&s, 0), -1);
        assert_eq!(k.sign_at(&s, 1), 1);
        // 1.5 - sqrt2 > 0 in the positive embedding
        assert_eq!(k.sign_at(&[q(3, 2), q_int(-1)], 1), 1);
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert!(matches!(NumberFieldR::new(&QPoly::from_ints(&[1, 0, 1])), Err(Error::NotTotallyReal(_))));
        assert!(matches!(NumberFieldR::new(&QPoly::from_ints(&[6, 0, -5, 0, 1])), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn near_cancellation_sign() {
        // 99 - 70 sqrt2 is a tiny positive unit.
        let k = NumberFieldR::new(&QPoly::from_ints(&[-2, 0, 1])).unwrap();
        let a = vec![q_int(99), q_int(-70)];
        assert_eq!(k.sign_at(&a, 1), 1);
        let b = k.pow(&a, 6);
        assert_eq!(k.sign_at(&b, 1), 1);
        // (99 - 70 sqrt2)^6 = 1.6598747856848152...e-14
        let below = k.sub(
            &b,
            &k.from_rational(&Rational::new(16598747856848152i64.into(), num_bigint::BigInt::from(10).pow(30u32))),
        );
        assert_eq!(k.sign_at(&below, 1), 1);
        let above = k.sub(
            &b,
            &k.from_rational(&Rational::new(16598747856848153i64.into(), num_bigint::BigInt::from(10).pow(30u32))),
        );
        assert_eq!(k.sign_at(&above, 1), -1);
    }

    #[test]
    fn describes_quadratics() {
        assert_eq!(describe_minpoly(&QPoly::from_ints(&[-1, -2, 1])), "Q(√2)");
        assert_eq!(describe_minpoly(&QPoly::from_ints(&[-1, -1, 1])), "Q(√5)");
        assert_eq!(describe_minpoly(&QPoly::from_ints(&[3, 1])), "Q");
    }
}
