//! Splitting a lattice along a partition of the coordinates.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Lattice;
use crate::error::{Error, Result};
use crate::exactmath::{QMatrix, Rational};

/// `Λ = (Λ ∩ R^S) ⊕ (Λ ∩ R^{S^c})`, with integer coefficient bases of both parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// Coordinates in `S`, 0-based.
    pub subset: Vec<usize>,
    /// Basis of `Λ ∩ R^S` as coefficient vectors.
    pub first: Vec<Vec<i64>>,
    /// Basis of `Λ ∩ R^{S^c}`.
    pub second: Vec<Vec<i64>>,
}

/// A Z-basis of `{c in Z^n : A c = 0}` for an integer matrix, by unimodular column operations.
pub fn integer_kernel(a: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut cur: Vec<Vec<BigInt>> = a.to_vec();
    // u[j] is column j of the transform
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut c = vec![BigInt::zero(); n];
            c[j] = BigInt::one();
            c
        })
        .collect();
    let mut p = 0;
    let col_op = |cur: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        for row in cur.iter_mut() {
            let t = &row[src] * q;
            row[dst] -= t;
        }
        let s = u[src].clone();
        for (x, y) in u[dst].iter_mut().zip(&s) {
            *x -= y * q;
        }
    };
    for r in 0..cur.len() {
        loop {
            let nz: Vec<usize> = (p..n).filter(|&j| !cur[r][j].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&j) = nz.first() {
                    for row in cur.iter_mut() {
                        row.swap(p, j);
                    }
                    u.swap(p, j);
                    p += 1;
                }
                break;
            }
            let m = *nz.iter().min_by_key(|&&j| cur[r][j].abs()).expect("nonempty");
            for &j in &nz {
                if j != m {
                    let q = cur[r][j].div_floor(&cur[r][m]);
                    col_op(&mut cur, &mut u, j, m, &q);
                }
            }
        }
    }
    u.split_off(p)
}

/// Rows of integer equations saying coordinate `i` of `M c` vanishes.
fn vanishing_equations(l: &Lattice, coords: &[usize]) -> Vec<Vec<BigInt>> {
    let n = l.n();
    let mut out = Vec::new();
    for &i in coords {
        let r = &l.rows()[i];
        for t in 0..r.field.degree() {
            let row: Vec<Rational> = (0..n).map(|j| r.entries[j][t].clone()).collect();
            let den = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> =
                row.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
            if ints.iter().any(|x| !x.is_zero()) {
                out.push(ints);
            }
        }
    }
    out
}

fn to_i64(v: &[Vec<BigInt>]) -> Result<Vec<Vec<i64>>> {
    v.iter()
        .map(|c| {
            c.iter()
                .map(|x| x.to_i64().ok_or_else(|| Error::Unsupported("sublattice basis overflows 64 bits".into())))
                .collect()
        })
        .collect()
}

/// Finds a coordinate subset `S` (containing the first coordinate) along which the lattice splits.
///
/// The intersections `Λ ∩ R^S` are computed as exact integer kernels, so a `None`
/// answer means no such split exists; `_search_radius` is kept for interface
/// compatibility and does not limit the search.
pub fn is_decomposable(l: &Lattice, _search_radius: u32) -> Result<Option<Decomposition>> {
    let n = l.n();
    if n > 12 {
        return Err(Error::Unsupported(format!("decomposability search supports n <= 12, got {n}")));
    }
    if n < 2 {
        return Ok(None);
    }
    // subsets containing 0 ordered by size, then lexicographically
    let mut subsets: Vec<Vec<usize>> = (0u32..(1 << (n - 1)))
        .map(|mask| {
            let mut s = vec![0];
            s.extend((1..n).filter(|&i| mask & (1 << (i - 1)) != 0));
            s
        })
        .filter(|s| s.len() < n)
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    for s in subsets {
        let comp: Vec<usize> = (0..n).filter(|i| !s.contains(i)).collect();
        let first = integer_kernel(&vanishing_equations(l, &comp), n);
        if first.len() != s.len() {
            continue;
        }
        let second = integer_kernel(&vanishing_equations(l, &s), n);
        if second.len() != comp.len() {
            continue;
        }
        let mut cols = first.clone();
        cols.extend(second.iter().cloned());
        let m = QMatrix::from_rows(
            cols.iter().map(|c| c.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect(),
        );
        if m.det().abs().is_one() {
            return Ok(Some(Decomposition { subset: s, first: to_i64(&first)?, second: to_i64(&second)? }));
        }
    }
    Ok(None)
}
