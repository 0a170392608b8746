//! Planar lattices from real quadratic irrationals: periodic continued fractions,
//! badly approximable classes, the lattices `L(x) = Z + Z x` and spectrum scans.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{AlgebraElement, EtaleAlgebra};
use crate::error::{Error, Result};
use crate::exactmath::{exact_sqrt, squarefree_part, QPoly, Rational};
use crate::lattice::{construct_lattice, Lattice};
use crate::mordell::{kappa_oracle_2d, kappa_search, lambda_inf, Executor, KappaOptions, SerialExecutor};

/// `(p + q sqrt(d)) / r` with `d > 1` squarefree, `q != 0`, `r > 0` and `gcd(p, q, r) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticIrrational {
    p: BigInt,
    q: BigInt,
    d: BigInt,
    r: BigInt,
}

impl QuadraticIrrational {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, d: impl Into<BigInt>, r: impl Into<BigInt>) -> Result<Self> {
        let (mut p, mut q, d, mut r) = (p.into(), q.into(), d.into(), r.into());
        if r.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        if !d.is_positive() {
            return Err(Error::Domain(format!("radicand {d} must be positive")));
        }
        let core = squarefree_part(&d);
        let s = exact_sqrt(&(&d / &core)).expect("quotient by the squarefree part is a square");
        q *= s;
        if q.is_zero() || core.is_one() {
            return Err(Error::Domain("value is rational".into()));
        }
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        Ok(Self { p: p / &g, q: q / &g, d: core, r: r / &g })
    }

    /// `sqrt(d)`.
    pub fn sqrt(d: i64) -> Result<Self> {
        Self::new(0, 1, d, 1)
    }

    /// The golden ratio `(1 + sqrt 5) / 2`.
    pub fn golden() -> Self {
        Self::new(1, 1, 5, 2).expect("valid")
    }

    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.p, &self.q, &self.d, &self.r)
    }

    /// Squarefree radicand.
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    /// Discriminant of `Q(sqrt d)`: `d` when `d = 1 mod 4`, else `4d`.
    pub fn field_discriminant(&self) -> BigInt {
        if self.d.mod_floor(&BigInt::from(4)) == BigInt::one() {
            self.d.clone()
        } else {
            &self.d * 4
        }
    }

    pub fn to_f64(&self) -> f64 {
        let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
        (f(&self.p) + f(&self.q) * libm::sqrt(f(&self.d))) / f(&self.r)
    }

    /// Power-basis coordinates in `Q[X]/(X^2 - d)`.
    pub fn coords(&self) -> Vec<Rational> {
        vec![Rational::new(self.p.clone(), self.r.clone()), Rational::new(self.q.clone(), self.r.clone())]
    }
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = if self.q.is_one() {
            String::new()
        } else if self.q == -BigInt::one() {
            "-".into()
        } else {
            format!("{}", self.q)
        };
        let num = if self.p.is_zero() {
            format!("{q}√{}", self.d)
        } else {
            let sep = if self.q.is_negative() { "" } else { "+" };
            format!("{}{sep}{q}√{}", self.p, self.d)
        };
        if self.r.is_one() {
            write!(f, "{num}")
        } else if self.p.is_zero() {
            write!(f, "{num}/{}", self.r)
        } else {
            write!(f, "({num})/{}", self.r)
        }
    }
}

/// `[preperiod; (period)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFExpansion {
    pub preperiod: Vec<i64>,
    pub period: Vec<i64>,
}

impl CFExpansion {
    /// Digit `a_i`.
    pub fn digit(&self, i: usize) -> i64 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn digits(&self, count: usize) -> Vec<i64> {
        (0..count).map(|i| self.digit(i)).collect()
    }

    /// Convergents `p_k / q_k` for `k < count`.
    pub fn convergents(&self, count: usize) -> Vec<(BigInt, BigInt)> {
        let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
        let (mut p1, mut q1) = (BigInt::from(self.digit(0)), BigInt::one());
        let mut out = vec![(p1.clone(), q1.clone())];
        for i in 1..count {
            let a = BigInt::from(self.digit(i));
            let p2 = &a * &p1 + &p0;
            let q2 = &a * &q1 + &q0;
            (p0, q0, p1, q1) = (p1, q1, p2.clone(), q2.clone());
            out.push((p2, q2));
        }
        out.truncate(count);
        out
    }

    /// Largest `a_i` with `i >= 1`.
    pub fn max_digit(&self) -> i64 {
        self.preperiod.iter().skip(1).chain(&self.period).copied().max().unwrap_or(0)
    }
}

impl fmt::Display for CFExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[i64]| v.iter().map(|d| format!("{d}")).collect::<Vec<_>>().join(",");
        write!(f, "[{};({})]", j(&self.preperiod), j(&self.period))
    }
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Periodic expansion from the surd recurrence on `x = (P + sqrt d) / Q` with `Q | d - P^2`.
pub fn cf_expand(x: &QuadraticIrrational) -> CFExpansion {
    let (p, q, d0, r) = x.parts();
    let mut d = q * q * d0;
    let (mut pp, mut qq) = if q.is_positive() { (p.clone(), r.clone()) } else { (-p, -r) };
    if !(&d - &pp * &pp).mod_floor(&qq).is_zero() {
        let a = qq.abs();
        pp *= &a;
        d = d * &a * &a;
        qq *= a;
    }
    let s = d.sqrt();
    let mut seen: BTreeMap<(BigInt, BigInt), usize> = BTreeMap::new();
    let mut digits: Vec<i64> = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(pp.clone(), qq.clone())) {
            let period = digits.split_off(start);
            return CFExpansion { preperiod: digits, period };
        }
        seen.insert((pp.clone(), qq.clone()), digits.len());
        let a = if qq.is_positive() { floor_div(&(&pp + &s), &qq) } else { floor_div(&(&pp + &s + 1), &qq) };
        // only a_0 can be zero or negative
        digits.push(a.to_i64().unwrap_or(i64::MAX));
        let np = &a * &qq - &pp;
        let nq = (&d - &np * &np) / &qq;
        pp = np;
        qq = nq;
    }
}

/// Every `a_i` with `i >= 1` is at most `k`.
pub fn in_bad_k(x: &QuadraticIrrational, k: i64) -> bool {
    cf_expand(x).max_digit() <= k
}

/// `sqrt((3m - 2)(3m + 2)) / m`.
pub fn cusick_family(m: i64) -> Result<QuadraticIrrational> {
    if m <= 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    let m = BigInt::from(m);
    let rad = (&m * 3 - 2) * (&m * 3 + 2);
    QuadraticIrrational::new(0, 1, rad, m)
}

/// `L(x) = c {(y, y') : y in Z + Z x}` in `Q(sqrt d)`, unimodular.
pub fn quadratic_lattice(x: &QuadraticIrrational) -> Result<Lattice> {
    let d = x.radicand().to_i64().ok_or_else(|| Error::Unsupported("radicand exceeds 64 bits".into()))?;
    let b = EtaleAlgebra::from_minpolys(&[QPoly::from_ints(&[-d, 0, 1])])?;
    let one = AlgebraElement::new(vec![vec![Rational::one(), Rational::zero()]]);
    let xe = AlgebraElement::new(vec![x.coords()]);
    construct_lattice(&b, &[one, xe])
}

/// A member of a family of quadratic irrationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `cusick_family(m)` for `m` in the inclusive range.
    Cusick { from: i64, to: i64 },
    /// `sqrt(d)` for each `d`.
    Sqrt(Vec<i64>),
}

impl Family {
    /// `(parameter, x)` pairs; degenerate parameters come back as errors.
    pub fn members(&self) -> Vec<(i64, Result<QuadraticIrrational>)> {
        match self {
            Family::Cusick { from, to } => (*from..=*to).map(|m| (m, cusick_family(m))).collect(),
            Family::Sqrt(ds) => ds.iter().map(|&d| (d, QuadraticIrrational::sqrt(d))).collect(),
        }
    }
}

/// One scanned quadratic irrational.
#[derive(Clone, Debug)]
pub struct SpectrumPoint {
    pub param: i64,
    pub source: QuadraticIrrational,
    pub cf: CFExpansion,
    pub discriminant: BigInt,
    pub max_digit: i64,
    pub lambda: f64,
    pub kappa_oracle: f64,
    pub kappa_search: f64,
    pub certified: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub kappa: KappaOptions,
    pub oracle_radius: i64,
    pub lambda_radius: i64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { kappa: KappaOptions::default(), oracle_radius: 10, lambda_radius: 50 }
    }
}

/// Scan result: points sorted by discriminant (then parameter), and skipped parameters.
#[derive(Clone, Debug, Default)]
pub struct Scan {
    pub points: Vec<SpectrumPoint>,
    pub skipped: Vec<(i64, Error)>,
}

impl Scan {
    pub fn distinct_discriminants(&self) -> usize {
        let mut d: Vec<&BigInt> = self.points.iter().map(|p| &p.discriminant).collect();
        d.sort();
        d.dedup();
        d.len()
    }
}

fn scan_one(param: i64, x: QuadraticIrrational, opts: &ScanOptions) -> Result<SpectrumPoint> {
    let l = quadratic_lattice(&x)?;
    let est = kappa_search(&l, &opts.kappa, &SerialExecutor)?;
    let oracle = kappa_oracle_2d(&l, opts.oracle_radius)?;
    let lambda = lambda_inf(&l, opts.lambda_radius)?;
    let cf = cf_expand(&x);
    Ok(SpectrumPoint {
        param,
        discriminant: x.field_discriminant(),
        max_digit: cf.max_digit(),
        cf,
        source: x,
        lambda: lambda.value,
        kappa_oracle: oracle.kappa,
        kappa_search: est.kappa_lower,
        certified: est.certified,
    })
}

/// Builds `L(x)` for every member and records kappa (search and oracle), lambda and digits.
pub fn spectrum_scan<E: Executor>(family: &Family, opts: &ScanOptions, exec: &E) -> Scan {
    let members = family.members();
    let results = exec.map(members.len(), |k| {
        let (param, x) = &members[k];
        (*param, x.clone().and_then(|x| scan_one(*param, x, opts)))
    });
    let mut scan = Scan::default();
    for (param, r) in results {
        match r {
            Ok(p) => scan.points.push(p),
            Err(e) => scan.skipped.push((param, e)),
        }
    }
    scan.points.sort_by(|a, b| a.discriminant.cmp(&b.discriminant).then(a.param.cmp(&b.param)));
    scan
}

/// The word `a_0, a_{-1}, a_0, a_1, a_{-2}, ..., a_2, a_{-3}, ...` cut to `depth` symbols:
/// block `j` lists `a_{-j}, ..., a_j`.
///
/// `backward` holds `a_{-1}, a_{-2}, ...` and `forward` holds `a_0, a_1, ...`.
pub fn interleave_word<T: Clone>(backward: &[T], forward: &[T], depth: usize) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(depth);
    let mut j = 0usize;
    while out.len() < depth {
        for i in -(j as i64)..=(j as i64) {
            if out.len() == depth {
                break;
            }
            let t = if i < 0 {
                let k = (-i) as usize - 1;
                backward.get(k).ok_or(Error::Truncated { needed: k + 1, available: backward.len() })?
            } else {
                let k = i as usize;
                forward.get(k).ok_or(Error::Truncated { needed: k + 1, available: forward.len() })?
            };
            out.push(t.clone());
        }
        j += 1;
    }
    Ok(out)
}

/// The companion sequence: `k + 1` repeated, with `k` the largest digit of either input.
pub fn companion_digits(backward: &[i64], forward: &[i64], len: usize) -> Vec<i64> {
    let k = backward.iter().chain(forward).copied().max().unwrap_or(0);
    vec![k + 1; len]
}
