//! Composita of embedded number fields.
//!
//! Given real embeddings `Q(a) -> R` and `Q(b) -> R`, the subfield of `R` generated by
//! both images is built as `Q(g)` with `g = a + t b` for a small integer `t` that makes
//! `g` primitive in the tensor algebra `Q(a) (x) Q(b)`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::number_field::{EmbeddedField, NumberFieldR};
use crate::error::{Error, Result};
use crate::exactmath::factor::factor_squarefree;
use crate::exactmath::sturm::RealRoot;
use crate::exactmath::{isolate_real_roots, q_int, QMatrix, QPoly, Rational};

/// A field containing the images of several embedded fields.
#[derive(Clone, Debug)]
pub struct Compositum {
    pub field: EmbeddedField,
    /// `images[i]` is the image of the generator of the `i`-th input field.
    pub images: Vec<Vec<Rational>>,
}

impl Compositum {
    /// Image of an element of input field `i` given in its power basis.
    pub fn map(&self, i: usize, coords: &[Rational]) -> Vec<Rational> {
        eval_at(&self.field.field, coords, &self.images[i])
    }
}

/// `sum c_t e^t` computed in `k`.
pub fn eval_at(k: &NumberFieldR, coeffs: &[Rational], e: &[Rational]) -> Vec<Rational> {
    let mut acc = k.zero();
    for c in coeffs.iter().rev() {
        acc = k.mul(&acc, e);
        acc[0] += c;
    }
    acc
}

/// Compositum of a list of embedded fields.
pub fn compositum(fields: &[EmbeddedField]) -> Result<Compositum> {
    let first = match fields.first() {
        Some(f) => f.clone(),
        None => EmbeddedField::rationals(),
    };
    let mut out = Compositum { images: vec![first.gen()], field: first };
    for f in fields.iter().skip(1) {
        let (k, pa, pb) = compositum2(&out.field, f)?;
        for im in out.images.iter_mut() {
            *im = eval_at(&k.field, im, &pa);
        }
        out.images.push(pb);
        out.field = k;
    }
    Ok(out)
}

/// Compositum of two embedded fields with the images of both generators.
pub fn compositum2(a: &EmbeddedField, b: &EmbeddedField) -> Result<(EmbeddedField, Vec<Rational>, Vec<Rational>)> {
    if a.same_as(b) {
        return Ok((a.clone(), a.gen(), a.gen()));
    }
    if b.degree() == 1 {
        let v = a.field.from_rational(&b.gen()[0]);
        return Ok((a.clone(), a.gen(), v));
    }
    if a.degree() == 1 {
        let v = b.field.from_rational(&a.gen()[0]);
        return Ok((b.clone(), v, b.gen()));
    }
    let ca = QMatrix::companion(a.field.minpoly());
    let cb = QMatrix::companion(b.field.minpoly());
    let (da, db) = (ca.nrows(), cb.nrows());
    let n = da * db;
    let xa = ca.kron(&QMatrix::identity(db));
    let yb = QMatrix::identity(da).kron(&cb);
    for t in weights() {
        let g = &xa + &yb.scale(&q_int(t));
        let chi = g.charpoly();
        if !chi.is_squarefree() {
            continue;
        }
        // g^s applied to the unit e_{0,0}
        let mut cols = Vec::with_capacity(n);
        let mut v = vec![Rational::zero(); n];
        v[0] = q_int(1);
        for _ in 0..n {
            cols.push(v.clone());
            v = g.mul_vec(&v);
        }
        let powers = QMatrix::from_rows(cols).transpose();
        let mut ex = vec![Rational::zero(); n];
        ex[db] = q_int(1);
        let mut ey = vec![Rational::zero(); n];
        ey[1] = q_int(1);
        let px = QPoly::new(powers.solve(&ex).ok_or_else(|| Error::InvalidState("compositum solve".into()))?);
        let py = QPoly::new(powers.solve(&ey).ok_or_else(|| Error::InvalidState("compositum solve".into()))?);
        let (f, k) = pick_factor(&chi, a.root(), b.root(), t)?;
        let field = Arc::new(NumberFieldR::new_unchecked(&f)?);
        let pa = field.reduce(&px);
        let pb = field.reduce(&py);
        return Ok((EmbeddedField::new(field, k), pa, pb));
    }
    Err(Error::InvalidState("no primitive element found for compositum".into()))
}

/// 1, 2, -1, 3, -2, 4, ...
fn weights() -> impl Iterator<Item = i64> {
    (1..200).map(|i| if i % 2 == 1 { (i + 1) / 2 } else { 1 - i / 2 })
}

/// The irreducible factor of `chi` vanishing at `a + t b`, and the index of that root.
fn pick_factor(chi: &QPoly, a: &RealRoot, b: &RealRoot, t: i64) -> Result<(QPoly, usize)> {
    let factors = factor_squarefree(chi);
    let mut roots: Vec<(usize, usize, RealRoot)> = Vec::new();
    for (fi, f) in factors.iter().enumerate() {
        for (k, r) in isolate_real_roots(f)?.into_iter().enumerate() {
            roots.push((fi, k, r));
        }
    }
    let (mut ra, mut rb) = (a.clone(), b.clone());
    let tq = q_int(t);
    loop {
        let (x, y) = (&ra.lo + &tq * &rb.lo, &ra.hi + &tq * &rb.hi);
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        let hits: Vec<&(usize, usize, RealRoot)> = roots.iter().filter(|(_, _, r)| r.lo <= hi && r.hi >= lo).collect();
        if hits.len() == 1 {
            let (fi, k, _) = hits[0];
            return Ok((factors[*fi].clone(), *k));
        }
        if hits.is_empty() {
            return Err(Error::InvalidState("compositum root selection failed".into()));
        }
        for (_, _, r) in roots.iter_mut() {
            r.bisect();
        }
        for _ in 0..2 {
            ra.bisect();
            rb.bisect();
        }
    }
}
