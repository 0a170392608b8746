//! Sturm sequences, real root isolation and bisection refinement.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed};

use super::poly::QPoly;
use super::{q_int, to_f64, Rational};
use crate::error::{Error, Result};

/// A single real root of a squarefree polynomial, isolated in a closed interval.
///
/// Either `lo == hi` and the root is that rational, or `lo < hi`, neither endpoint is a
/// root and the polynomial has exactly one root in `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealRoot {
    pub poly: QPoly,
    pub lo: Rational,
    pub hi: Rational,
}

impl RealRoot {
    pub fn rational(r: Rational) -> Self {
        Self { poly: QPoly::linear_root(&r), lo: r.clone(), hi: r }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / q_int(2)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_exact() {
            return to_f64(&self.lo);
        }
        let mut r = self.clone();
        let lo = to_f64(&r.lo).abs().max(to_f64(&r.hi).abs()).max(1.0);
        r.refine_to(&(super::from_f64(lo * 1e-17).unwrap_or_else(|| super::q(1, 1 << 50))));
        to_f64(&r.midpoint())
    }

    /// One bisection step.
    pub fn bisect(&mut self) {
        if self.is_exact() {
            return;
        }
        let mid = self.midpoint();
        let sm = self.poly.sign_at(&mid);
        if sm == 0 {
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        let slo = self.poly.sign_at(&self.lo);
        if slo == sm {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    /// Bisect until the interval width is at most `eps`.
    pub fn refine_to(&mut self, eps: &Rational) {
        while !self.is_exact() && &self.width() > eps {
            self.bisect();
        }
    }

    /// Is the root exactly the rational `x`?
    pub fn equals_rational(&self, x: &Rational) -> bool {
        x >= &self.lo && x <= &self.hi && self.poly.sign_at(x) == 0
    }

    /// Orders the root against a rational.
    pub fn cmp_rational(&self, x: &Rational) -> core::cmp::Ordering {
        use core::cmp::Ordering;
        if self.equals_rational(x) {
            return Ordering::Equal;
        }
        let mut r = self.clone();
        loop {
            if x < &r.lo {
                return Ordering::Greater;
            }
            if x > &r.hi {
                return Ordering::Less;
            }
            r.bisect();
        }
    }
}

/// Refines an isolated root to width at most `eps`.
///
/// When possible the result is snapped to a cell of the decimal grid with the
/// coarsest step `10^-k <= eps`, so that refined intervals read naturally.
pub fn refine(r: &RealRoot, eps: &Rational) -> Result<RealRoot> {
    if !eps.is_positive() {
        return Err(Error::InvalidInput("refinement width must be positive".into()));
    }
    let mut out = r.clone();
    let mut h = Rational::one();
    while &h > eps {
        h /= q_int(10);
    }
    while h <= eps / q_int(10) {
        h *= q_int(10);
    }
    out.refine_to(&(&h / q_int(2)));
    if out.is_exact() {
        return Ok(out);
    }
    let mut lo = (&out.lo / &h).floor() * &h;
    let mut hi = &lo + &h;
    if hi < out.hi {
        // The interval straddles exactly one grid point.
        match out.poly.sign_at(&hi) {
            0 => return Ok(RealRoot { poly: out.poly.clone(), lo: hi.clone(), hi }),
            s if s == out.poly.sign_at(&out.lo) => {
                lo = hi.clone();
                hi = &lo + &h;
            }
            _ => {}
        }
    }
    if out.poly.sign_at(&lo) != 0
        && out.poly.sign_at(&hi) != 0
        && SturmSequence::new(&out.poly).count_closed(&lo, &hi) == 1
    {
        out.lo = lo;
        out.hi = hi;
    }
    Ok(out)
}

/// Sturm sequence of a squarefree polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<QPoly>,
}

impl SturmSequence {
    pub fn new(p: &QPoly) -> Self {
        let mut seq = vec![p.clone(), p.derivative()];
        while !seq[seq.len() - 1].is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        if seq.last().is_some_and(QPoly::is_zero) {
            seq.pop();
        }
        Self { seq }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.seq {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct roots in the half-open interval `(a, b]`.
    pub fn count_half_open(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }

    /// Number of distinct roots in the closed interval `[a, b]`.
    pub fn count_closed(&self, a: &Rational, b: &Rational) -> usize {
        let at_a = usize::from(self.seq[0].sign_at(a) == 0);
        if a == b {
            return at_a;
        }
        self.count_half_open(a, b) + at_a
    }
}

/// Number of distinct real roots of `p` in `[a, b]`.
pub fn count_roots_closed(p: &QPoly, a: &Rational, b: &Rational) -> usize {
    if p.is_constant() {
        return 0;
    }
    SturmSequence::new(&p.squarefree_part()).count_closed(a, b)
}

/// Isolates every distinct real root of `p`, sorted ascending.
///
/// The returned roots carry the monic squarefree part of `p`.
pub fn isolate_real_roots(p: &QPoly) -> Result<Vec<RealRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let sf = p.squarefree_part();
    let sturm = SturmSequence::new(&sf);
    let b = sf.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let c = sturm.count_half_open(&lo, &hi);
        if c == 0 {
            continue;
        }
        let hi_root = sf.sign_at(&hi) == 0;
        if c == 1 && hi_root {
            out.push(RealRoot { poly: sf.clone(), lo: hi.clone(), hi });
            continue;
        }
        if c == 1 && !hi_root && sf.sign_at(&lo) != 0 {
            out.push(RealRoot { poly: sf.clone(), lo, hi });
            continue;
        }
        let mid = (&lo + &hi) / q_int(2);
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    // Neighbouring intervals may share an endpoint; shrink until strictly disjoint.
    for i in 1..out.len() {
        while out[i - 1].hi >= out[i].lo {
            let (left, right) = out.split_at_mut(i);
            left[i - 1].bisect();
            right[0].bisect();
        }
    }
    Ok(out)
}

/// Sign of `p` at the root `r`, exactly.
pub fn sign_at_root(p: &QPoly, r: &RealRoot) -> i8 {
    if p.is_zero() {
        return 0;
    }
    if r.is_exact() {
        return p.sign_at(&r.lo);
    }
    let g = p.gcd(&r.poly);
    if !g.is_constant() && g.sign_at(&r.lo) * g.sign_at(&r.hi) < 0 {
        return 0;
    }
    let mut rr = r.clone();
    loop {
        let (lo, hi) = p.eval_interval(&rr.lo, &rr.hi);
        if lo.is_positive() {
            return 1;
        }
        if hi.is_negative() {
            return -1;
        }
        rr.bisect();
        if rr.is_exact() {
            return p.sign_at(&rr.lo);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::q;

    #[test]
    fn sqrt_two_roots() {
        let roots = isolate_real_roots(&QPoly::from_ints(&[-2, 0, 1])).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0].to_f64() + core::f64::consts::SQRT_2).abs() < 1e-14);
        assert!((roots[1].to_f64() - core::f64::consts::SQRT_2).abs() < 1e-14);
        assert!(roots[0].hi < roots[1].lo);
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_real_roots(&QPoly::from_ints(&[1, 0, 1])).unwrap().is_empty());
        assert_eq!(isolate_real_roots(&QPoly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn totally_real_cubic() {
        let p = QPoly::from_ints(&[-1, -3, 0, 1]);
        let roots = isolate_real_roots(&p).unwrap();
        assert_eq!(roots.len(), 3);
        for w in roots.windows(2) {
            assert!(w[0].hi < w[1].lo);
        }
    }

    #[test]
    fn rational_roots_are_points() {
        let p = QPoly::from_ints(&[0, -1, 0, 1]);
        let roots = isolate_real_roots(&p).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().all(RealRoot::is_exact));
        assert_eq!(roots[1].lo, q(0, 1));
    }

    #[test]
    fn refinement() {
        let r = RealRoot { poly: QPoly::from_ints(&[-2, 0, 1]), lo: q(1, 1), hi: q(2, 1) };
        let r = refine(&r, &q(1, 100)).unwrap();
        assert!(r.lo >= q(141, 100) && r.hi <= q(142, 100));
        let r = RealRoot { poly: QPoly::from_ints(&[-3, 1]), lo: q(2, 1), hi: q(4, 1) };
        let r = refine(&r, &q(1, 7)).unwrap();
        assert_eq!((r.lo.clone(), r.hi.clone()), (q(3, 1), q(3, 1)));
        let r = RealRoot { poly: QPoly::from_ints(&[-5, 0, 1]), lo: q(2, 1), hi: q(3, 1) };
        let r = refine(&r, &q(1, 1_000_000)).unwrap();
        assert!(r.width() <= q(1, 1_000_000));
        assert!(r.lo <= q(2236068, 1_000_000) && r.hi >= q(2236067, 1_000_000));
    }

    #[test]
    fn sign_at_roots() {
        let roots = isolate_real_roots(&QPoly::from_ints(&[-2, 0, 1])).unwrap();
        let p = QPoly::from_ints(&[-3, 0, 2]);
        assert_eq!(sign_at_root(&p, &roots[1]), 1);
        assert_eq!(sign_at_root(&QPoly::from_ints(&[-4, 0, 0, 0, 1]), &roots[1]), 0);
    }
}
