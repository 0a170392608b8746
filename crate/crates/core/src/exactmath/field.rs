//! Exact fields as explicit contexts, with generic Gaussian elimination and a
//! Bland-rule simplex for linear feasibility.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::Rational;

/// A field whose elements need a context (for example a modulus) to operate on.
pub trait ExactField {
    type Elem: Clone + core::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_rational(&self, x: &Rational) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `a` must be nonzero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }
}

/// An exact field with a total order compatible with the field operations.
pub trait OrderedExactField: ExactField {
    fn sign(&self, a: &Self::Elem) -> i8;
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RationalField;

impl ExactField for RationalField {
    type Elem = Rational;
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_rational(&self, x: &Rational) -> Rational {
        x.clone()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a.clone()
    }
    fn inv(&self, a: &Rational) -> Rational {
        a.recip()
    }
}

impl OrderedExactField for RationalField {
    fn sign(&self, a: &Rational) -> i8 {
        super::poly::sign_of_rational(a)
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: ExactField>(f: &F, rows: &mut [Vec<F::Elem>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(&rows[r][c]);
        for j in c..ncols {
            rows[r][j] = f.mul(&rows[r][j], &inv);
        }
        for i in 0..nrows {
            if i == r || f.is_zero(&rows[i][c]) {
                continue;
            }
            let factor = rows[i][c].clone();
            for j in c..ncols {
                let t = f.mul(&factor, &rows[r][j]);
                rows[i][j] = f.sub(&rows[i][j], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: ExactField>(f: &F, rows: &[Vec<F::Elem>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Basis of the right kernel `{x : A x = 0}` for `A` with `ncols` columns.
pub fn kernel<F: ExactField>(f: &F, rows: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let mut out = Vec::new();
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![f.zero(); ncols];
        v[free] = f.one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(&m[r][free]);
        }
        out.push(v);
    }
    out
}

/// Solves `A x = b`, returning one solution if the system is consistent.
pub fn solve<F: ExactField>(f: &F, rows: &[Vec<F::Elem>], b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<F::Elem>> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(f, &mut m);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![f.zero(); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = m[r][ncols].clone();
    }
    Some(x)
}

/// Determinant by Gaussian elimination with pivoting.
pub fn det<F: ExactField>(f: &F, rows: &[Vec<F::Elem>]) -> F::Elem {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut d = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !f.is_zero(&m[i][c])) else {
            return f.zero();
        };
        if p != c {
            m.swap(p, c);
            d = f.neg(&d);
        }
        d = f.mul(&d, &m[c][c]);
        let inv = f.inv(&m[c][c]);
        for i in c + 1..n {
            if f.is_zero(&m[i][c]) {
                continue;
            }
            let factor = f.mul(&m[i][c], &inv);
            for j in c..n {
                let t = f.mul(&factor, &m[c][j]);
                m[i][j] = f.sub(&m[i][j], &t);
            }
        }
    }
    d
}

/// Finds `x >= 0` with `A x = b` by phase one of the simplex method with Bland's rule,
/// or `None` if the system is infeasible.
pub fn feasible_point<F: OrderedExactField>(f: &F, a: &[Vec<F::Elem>], b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    // Tableau rows: [A | I | b] with b made nonnegative; artificial variables n..n+m.
    let width = n + m + 1;
    let mut t: Vec<Vec<F::Elem>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = f.sign(&b[i]) < 0;
        let mut row = Vec::with_capacity(width);
        for j in 0..n {
            row.push(if flip { f.neg(&a[i][j]) } else { a[i][j].clone() });
        }
        for k in 0..m {
            row.push(if k == i { f.one() } else { f.zero() });
        }
        row.push(if flip { f.neg(&b[i]) } else { b[i].clone() });
        t.push(row);
    }
    // Objective: minimise the sum of artificials, expressed in reduced costs.
    let mut obj = vec![f.zero(); width];
    for row in &t {
        for j in 0..n {
            obj[j] = f.sub(&obj[j], &row[j]);
        }
        obj[width - 1] = f.sub(&obj[width - 1], &row[width - 1]);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        // Bland: smallest index with negative reduced cost.
        let Some(enter) = (0..n + m).find(|&j| f.sign(&obj[j]) < 0) else {
            break;
        };
        let mut leave: Option<(usize, F::Elem)> = None;
        for i in 0..m {
            if f.sign(&t[i][enter]) > 0 {
                let ratio = f.div(&t[i][width - 1], &t[i][enter]);
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        let s = f.sign(&f.sub(&ratio, lr));
                        s < 0 || (s == 0 && basis[i] < basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // Phase one is bounded below by zero.
            break;
        };
        let inv = f.inv(&t[r][enter]);
        for j in 0..width {
            t[r][j] = f.mul(&t[r][j], &inv);
        }
        for i in 0..m {
            if i != r && !f.is_zero(&t[i][enter]) {
                let factor = t[i][enter].clone();
                for j in 0..width {
                    let v = f.mul(&factor, &t[r][j]);
                    t[i][j] = f.sub(&t[i][j], &v);
                }
            }
        }
        if !f.is_zero(&obj[enter]) {
            let factor = obj[enter].clone();
            for j in 0..width {
                let v = f.mul(&factor, &t[r][j]);
                obj[j] = f.sub(&obj[j], &v);
            }
        }
        basis[r] = enter;
    }
    if !f.is_zero(&obj[width - 1]) {
        return None;
    }
    let mut x = vec![f.zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

/// Is `0` in the convex hull of `points` (each a vector of length `d`)?
pub fn origin_in_hull<F: OrderedExactField>(f: &F, points: &[Vec<F::Elem>], d: usize) -> bool {
    if points.is_empty() {
        return false;
    }
    let m = points.len();
    let mut a = Vec::with_capacity(d + 1);
    for k in 0..d {
        a.push(points.iter().map(|p| p[k].clone()).collect::<Vec<_>>());
    }
    a.push(vec![f.one(); m]);
    let mut b = vec![f.zero(); d];
    b.push(f.one());
    feasible_point(f, &a, &b).is_some()
}

/// A linear functional `y` with `y . p >= 1` for every point, if one exists
/// (that is, if the origin is outside the convex hull).
pub fn separating_functional<F: OrderedExactField>(f: &F, points: &[Vec<F::Elem>], d: usize) -> Option<Vec<F::Elem>> {
    let m = points.len();
    // Variables: y+ (d), y- (d), slack s (m). Rows: p.(y+ - y-) - s = 1.
    let mut a = Vec::with_capacity(m);
    for (k, p) in points.iter().enumerate() {
        let mut row = Vec::with_capacity(2 * d + m);
        for j in 0..d {
            row.push(p[j].clone());
        }
        for j in 0..d {
            row.push(f.neg(&p[j]));
        }
        for s in 0..m {
            row.push(if s == k { f.neg(&f.one()) } else { f.zero() });
        }
        a.push(row);
    }
    let b = vec![f.one(); m];
    let x = feasible_point(f, &a, &b)?;
    Some((0..d).map(|j| f.sub(&x[j], &x[d + j])).collect())
}
