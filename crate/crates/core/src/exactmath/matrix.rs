//! Dense rational matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use super::field::{self, RationalField};
use super::poly::QPoly;
use super::Rational;

/// A dense `rows x cols` matrix of rationals in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| super::q_int(x)).collect()).collect())
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    /// Companion matrix of a monic polynomial: multiplication by `x` on the power basis.
    pub fn companion(p: &QPoly) -> Self {
        let p = p.monic();
        let d = p.deg();
        let mut m = Self::zeros(d, d);
        for i in 1..d {
            m[(i, i - 1)] = Rational::one();
        }
        for i in 0..d {
            m[(i, d - 1)] = -p.coeff(i);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Entries in row-major order.
    pub fn as_slice(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Rational::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += x * &self[(i, j)];
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        field::rank(&RationalField, &self.to_rows())
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut rows = self.to_rows();
        let piv = field::rref(&RationalField, &mut rows);
        (Self::from_rows_sized(rows, self.rows, self.cols), piv)
    }

    fn from_rows_sized(rows: Vec<Vec<Rational>>, r: usize, c: usize) -> Self {
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Basis of `{x : self x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        field::kernel(&RationalField, &self.to_rows(), self.cols)
    }

    /// Basis of `{y : y self = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<Rational>> {
        self.transpose().kernel()
    }

    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        field::solve(&RationalField, &self.to_rows(), b)
    }

    pub fn det(&self) -> Rational {
        assert!(self.is_square());
        field::det(&RationalField, &self.to_rows())
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        let piv = field::rref(&RationalField, &mut rows);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_rows(rows.into_iter().map(|r| r[n..].to_vec()).collect()))
    }

    /// Characteristic polynomial `det(x I - A)` via reduction to Hessenberg form.
    pub fn charpoly(&self) -> QPoly {
        assert!(self.is_square());
        let n = self.rows;
        let mut h = self.clone();
        // Similarity transform to upper Hessenberg form.
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h[(i, m - 1)].is_zero()) else {
                continue;
            };
            if i != m {
                for j in 0..n {
                    let t = h[(i, j)].clone();
                    h[(i, j)] = h[(m, j)].clone();
                    h[(m, j)] = t;
                }
                for j in 0..n {
                    let t = h[(j, i)].clone();
                    h[(j, i)] = h[(j, m)].clone();
                    h[(j, m)] = t;
                }
            }
            let piv = h[(m, m - 1)].clone();
            for i in m + 1..n {
                if h[(i, m - 1)].is_zero() {
                    continue;
                }
                let u = &h[(i, m - 1)] / &piv;
                for j in 0..n {
                    let t = &u * &h[(m, j)];
                    h[(i, j)] -= t;
                }
                for j in 0..n {
                    let t = &u * &h[(j, i)];
                    h[(j, m)] += t;
                }
            }
        }
        // Recurrence on leading principal submatrices.
        let mut p: Vec<QPoly> = vec![QPoly::one()];
        for m in 1..=n {
            let x_minus = QPoly::new(vec![-h[(m - 1, m - 1)].clone(), Rational::one()]);
            let mut pm = &x_minus * &p[m - 1];
            let mut t = Rational::one();
            for i in 1..m {
                t *= &h[(m - i, m - i - 1)];
                let c = &t * &h[(m - i - 1, m - 1)];
                if !c.is_zero() {
                    pm = &pm - &p[m - i - 1].scale(&c);
                }
            }
            p.push(pm);
        }
        p.pop().unwrap()
    }

    /// `p(self)` by Horner's rule.
    pub fn eval_poly(&self, p: &QPoly) -> Self {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc = Self::zeros(n, n);
        for c in p.coeffs().iter().rev() {
            acc = &acc * self;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        acc
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m[(i * other.rows + k, j * other.cols + l)] = a * &other[(k, l)];
                    }
                }
            }
        }
        m
    }

    /// Stacks matrices with equal column counts vertically.
    pub fn vstack(parts: &[Self]) -> Self {
        let cols = parts.first().map_or(0, |m| m.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for m in parts {
            assert_eq!(m.cols, cols);
            data.extend(m.data.iter().cloned());
            rows += m.rows;
        }
        Self { rows, cols, data }
    }
}

impl core::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut m = QMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        m.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        m
    }
}

impl<'a> Add<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::q_int;

    #[test]
    fn charpoly_matches_companion() {
        let p = QPoly::from_ints(&[-1, -3, 0, 1]);
        assert_eq!(QMatrix::companion(&p).charpoly(), p);
        let a = QMatrix::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let cp = a.charpoly();
        assert!(a.eval_poly(&cp).is_zero());
        assert_eq!(cp.coeff(0), -a.det());
    }

    #[test]
    fn charpoly_needs_pivoting() {
        let a = QMatrix::from_ints(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        let cp = a.charpoly();
        assert!(a.eval_poly(&cp).is_zero());
        assert_eq!(cp, QPoly::from_ints(&[1, -1, -1, 1]));
    }

    #[test]
    fn inverse_and_kernel() {
        let a = QMatrix::from_ints(&[&[2, 1], &[7, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, QMatrix::identity(2));
        let s = QMatrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert!(s.inverse().is_none());
        assert_eq!(s.kernel(), vec![vec![q_int(-2), q_int(1)]]);
    }
}
