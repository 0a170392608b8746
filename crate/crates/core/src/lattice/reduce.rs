//! Floating-point lattice reduction and enumeration used to drive exact searches.
//!
//! Bases are column lists: `cols[j]` is the `j`-th generator.

use alloc::vec;
use alloc::vec::Vec;

/// Result of LLL: the reduced generators and the unimodular transform.
///
/// `basis[k] = sum_j transform[k][j] * original[j]`.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub basis: Vec<Vec<f64>>,
    pub transform: Vec<Vec<i128>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gram-Schmidt data: `mu[i][j]` for `j < i` and squared norms of the orthogonal vectors.
pub fn gram_schmidt(cols: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = cols.len();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    let mut norms = vec![0.0; n];
    for i in 0..n {
        let mut v = cols[i].clone();
        for j in 0..i {
            mu[i][j] = if norms[j] > 0.0 { dot(&cols[i], &star[j]) / norms[j] } else { 0.0 };
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= mu[i][j] * s;
            }
        }
        norms[i] = dot(&v, &v);
        star.push(v);
    }
    (mu, norms)
}

/// LLL reduction with parameter 0.99.
pub fn lll(cols: &[Vec<f64>]) -> Reduced {
    let n = cols.len();
    let mut b: Vec<Vec<f64>> = cols.to_vec();
    let mut t: Vec<Vec<i128>> = (0..n)
        .map(|k| {
            let mut r = vec![0i128; n];
            r[k] = 1;
            r
        })
        .collect();
    const DELTA: f64 = 0.99;
    const LIMIT: i128 = 1 << 100;
    let mut k = 1;
    let mut iterations = 0usize;
    while k < n && iterations < 100_000 {
        iterations += 1;
        let (mu, _) = gram_schmidt(&b);
        // size reduction of b_k
        for j in (0..k).rev() {
            let (mu, _) = if j + 1 == k { (mu.clone(), ()) } else { (gram_schmidt(&b).0, ()) };
            let q = libm::round(mu[k][j]);
            if q != 0.0 && q.is_finite() && q.abs() < 1e30 {
                let qi = q as i128;
                let (bj, tj) = (b[j].clone(), t[j].clone());
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
                let mut overflow = false;
                for (x, y) in t[k].iter_mut().zip(&tj) {
                    *x -= qi * y;
                    overflow |= x.abs() > LIMIT;
                }
                if overflow {
                    return finish(cols, t_fallback(n));
                }
            }
        }
        let (mu, norms) = gram_schmidt(&b);
        if norms[k] >= (DELTA - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            t.swap(k, k - 1);
            k = if k > 1 { k - 1 } else { 1 };
        }
    }
    finish(cols, t)
}

fn t_fallback(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|k| {
            let mut r = vec![0i128; n];
            r[k] = 1;
            r
        })
        .collect()
}

/// Recomputes the reduced basis from the transform to shed accumulated rounding.
fn finish(cols: &[Vec<f64>], t: Vec<Vec<i128>>) -> Reduced {
    let dim = cols.first().map_or(0, Vec::len);
    let basis = t
        .iter()
        .map(|row| {
            let mut v = vec![0.0; dim];
            for (c, col) in row.iter().zip(cols) {
                if *c != 0 {
                    let cf = *c as f64;
                    for (x, y) in v.iter_mut().zip(col) {
                        *x += cf * y;
                    }
                }
            }
            v
        })
        .collect();
    Reduced { basis, transform: t }
}

/// What an enumeration visitor asks for next.
pub enum Visit {
    Continue,
    /// Continue with a smaller squared radius.
    Shrink(f64),
    Stop,
}

/// Enumeration aborted after too many nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TooManyNodes;

/// Visits every nonzero integer `x` with `|sum x_j cols[j]|^2 <= r2` (Fincke-Pohst).
pub fn enumerate_ball(
    cols: &[Vec<f64>],
    r2: f64,
    max_nodes: usize,
    visit: &mut dyn FnMut(&[i64], &[f64]) -> Visit,
) -> Result<(), TooManyNodes> {
    let n = cols.len();
    if n == 0 {
        return Ok(());
    }
    let (mu, norms) = gram_schmidt(cols);
    let mut st = State { n, mu, norms, r2, x: vec![0; n], nodes: 0, max_nodes, stopped: false };
    st.recurse(n - 1, 0.0, cols, visit)
}

struct State {
    n: usize,
    mu: Vec<Vec<f64>>,
    norms: Vec<f64>,
    r2: f64,
    x: Vec<i64>,
    nodes: usize,
    max_nodes: usize,
    stopped: bool,
}

impl State {
    fn recurse(
        &mut self,
        i: usize,
        partial: f64,
        cols: &[Vec<f64>],
        visit: &mut dyn FnMut(&[i64], &[f64]) -> Visit,
    ) -> Result<(), TooManyNodes> {
        let c: f64 = -(i + 1..self.n).map(|j| self.mu[j][i] * self.x[j] as f64).sum::<f64>();
        let bi = self.norms[i].max(1e-300);
        let rem = self.r2 - partial;
        if rem < 0.0 {
            return Ok(());
        }
        let w = libm::sqrt(rem / bi);
        let lo = libm::ceil(c - w - 1e-9);
        let hi = libm::floor(c + w + 1e-9);
        if !(lo.is_finite() && hi.is_finite()) || hi - lo > 1e7 {
            return Err(TooManyNodes);
        }
        if lo > hi {
            return Ok(());
        }
        // outward from the centre, nearest side first
        let mid = libm::round(c).clamp(lo, hi);
        let first_up = c >= mid;
        let (mut up, mut down) = (mid, mid - 1.0);
        loop {
            let take_up = if up > hi {
                false
            } else if down < lo {
                true
            } else {
                let (du, dd) = (up - c, c - down);
                du < dd || (du == dd && first_up)
            };
            if up > hi && down < lo {
                break;
            }
            let v = if take_up {
                up += 1.0;
                up - 1.0
            } else {
                down -= 1.0;
                down + 1.0
            };
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(TooManyNodes);
            }
            let d = v - c;
            let p = partial + d * d * bi;
            if p <= self.r2 * (1.0 + 1e-12) + 1e-300 {
                self.x[i] = v as i64;
                if i == 0 {
                    if self.x.iter().any(|&t| t != 0) {
                        let dim = cols[0].len();
                        let mut img = vec![0.0; dim];
                        for (xj, col) in self.x.iter().zip(cols) {
                            if *xj != 0 {
                                for (a, b) in img.iter_mut().zip(col) {
                                    *a += *xj as f64 * b;
                                }
                            }
                        }
                        match visit(&self.x, &img) {
                            Visit::Continue => {}
                            Visit::Shrink(r) => self.r2 = self.r2.min(r),
                            Visit::Stop => {
                                self.stopped = true;
                            }
                        }
                    }
                } else {
                    self.recurse(i - 1, p, cols, visit)?;
                }
                if self.stopped {
                    self.x[i] = 0;
                    return Ok(());
                }
            }
        }
        self.x[i] = 0;
        Ok(())
    }
}

/// Shortest nonzero vector in the sup norm: `(norm, coefficients in the given basis)`.
pub fn min_sup_norm(cols: &[Vec<f64>]) -> Option<(f64, Vec<i64>)> {
    let red = lll(cols);
    let n = cols.len();
    let mut best = f64::INFINITY;
    let mut arg: Vec<i64> = vec![0; n];
    for (k, b) in red.basis.iter().enumerate() {
        let s = sup(b);
        if s < best {
            best = s;
            arg = red.transform[k].iter().map(|&v| v as i64).collect();
        }
    }
    if !best.is_finite() {
        return None;
    }
    let r2 = n as f64 * best * best * (1.0 + 1e-9);
    let mut best_x: Option<Vec<i64>> = None;
    let res = enumerate_ball(&red.basis, r2, 2_000_000, &mut |x, img| {
        let s = sup(img);
        if s < best * (1.0 - 1e-15) {
            best = s;
            best_x = Some(x.to_vec());
            Visit::Shrink(n as f64 * s * s * (1.0 + 1e-9))
        } else {
            Visit::Continue
        }
    });
    if res.is_err() {
        return None;
    }
    if let Some(x) = best_x {
        arg = to_original(&red.transform, &x)?;
    }
    Some((best, arg))
}

/// Coefficients in the original basis of `sum x_k reduced_k`.
pub fn to_original(transform: &[Vec<i128>], x: &[i64]) -> Option<Vec<i64>> {
    let n = transform.len();
    let mut c = vec![0i128; n];
    for (k, &xk) in x.iter().enumerate() {
        if xk != 0 {
            for j in 0..n {
                c[j] = c[j].checked_add(transform[k][j].checked_mul(xk as i128)?)?;
            }
        }
    }
    c.into_iter().map(|v| i64::try_from(v).ok()).collect()
}

pub fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
