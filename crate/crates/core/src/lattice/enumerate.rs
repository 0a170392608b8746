//! Lattice points in symmetric boxes.
//!
//! Candidates come from a Fincke-Pohst walk over the ellipsoid `sum (x_i/a_i)^2 <= n`
//! that contains the box; every candidate is then placed against each face exactly.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::reduce::{enumerate_ball, lll, to_original, Reduced, Visit};
use super::{Lattice, LatticeRow};
use crate::algebra::EmbeddedField;
use crate::error::{Error, Result};
use crate::exactmath::{OrderedExactField, Radical, Rational, RealAlgebraic};

const MAX_NODES: usize = 20_000_000;

/// `[-a_1, a_1] x ... x [-a_n, a_n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricBox {
    half_widths: Vec<Radical>,
}

impl SymmetricBox {
    pub fn new(half_widths: Vec<Radical>) -> Result<Self> {
        if half_widths.is_empty() {
            return Err(Error::InvalidInput("box needs at least one half-width".into()));
        }
        Ok(Self { half_widths })
    }

    pub fn cube(n: usize, a: Radical) -> Self {
        Self { half_widths: alloc::vec![a; n] }
    }

    pub fn from_rationals(a: &[Rational]) -> Result<Self> {
        Self::new(a.iter().map(|x| Radical::rational(x.clone())).collect::<Result<_>>()?)
    }

    pub fn n(&self) -> usize {
        self.half_widths.len()
    }

    pub fn half_widths(&self) -> &[Radical] {
        &self.half_widths
    }

    /// `prod a_i`.
    pub fn product(&self) -> Radical {
        Radical::product(&self.half_widths)
    }

    /// `2^n prod a_i`.
    pub fn volume(&self) -> Radical {
        self.product().mul(&Radical::from_int(1i64 << self.n()))
    }

    pub fn approx(&self) -> Vec<f64> {
        self.half_widths.iter().map(Radical::to_f64).collect()
    }

    pub fn is_cube(&self) -> bool {
        self.half_widths.iter().all(|a| a == &self.half_widths[0])
    }

    /// The box `diag(s) B`.
    pub fn scaled(&self, s: &[Radical]) -> Self {
        Self { half_widths: self.half_widths.iter().zip(s).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn bounds(&self) -> Vec<CoordBound> {
        self.half_widths.iter().map(|a| CoordBound::radical(a.clone())).collect()
    }
}

/// A face position `|e| * radical`, with `e` an element of the row's field (`None` means 1).
#[derive(Clone, Debug)]
pub struct CoordBound {
    pub elem: Option<Vec<Rational>>,
    pub radical: Radical,
}

impl CoordBound {
    pub fn radical(r: Radical) -> Self {
        Self { elem: None, radical: r }
    }

    /// `|M c|_i` for a lattice point, as a bound on coordinate `i`.
    pub fn from_coordinate(l: &Lattice, i: usize, c: &[i64]) -> Self {
        let r = &l.rows()[i];
        Self { elem: Some(r.combination(c)), radical: r.scale.clone() }
    }

    pub fn approx(&self, field: &EmbeddedField) -> f64 {
        let e = self.elem.as_ref().map_or(1.0, |e| field.value_f64(e).abs());
        e * self.radical.to_f64()
    }

    pub fn value(&self, field: &EmbeddedField) -> RealAlgebraic {
        let r = RealAlgebraic::from(self.radical.clone());
        match &self.elem {
            None => r,
            Some(e) => {
                let v = if field.degree() == 1 {
                    RealAlgebraic::Rational(e[0].clone())
                } else {
                    RealAlgebraic::Field(crate::algebra::FieldValue::new(field.clone(), e.clone()))
                };
                v.abs().mul(&r)
            }
        }
    }
}

/// A lattice point: coefficients in the lattice basis and a floating image.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticePoint {
    pub coeffs: Vec<i64>,
    pub approx: Vec<f64>,
}

impl LatticePoint {
    pub fn image(&self, l: &Lattice) -> Vec<RealAlgebraic> {
        l.point(&self.coeffs)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LatticePointSet {
    pub points: Vec<LatticePoint>,
}

impl LatticePointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, coeffs: &[i64]) -> bool {
        self.points.iter().any(|p| p.coeffs == coeffs)
    }
}

/// A point of the closed box with the exact position of each coordinate against its face.
#[derive(Clone, Debug)]
pub struct BoxContact {
    pub point: LatticePoint,
    /// `cmp[i]` compares `|x_i|` with the `i`-th half-width.
    pub cmp: Vec<Ordering>,
}

impl BoxContact {
    pub fn is_interior(&self) -> bool {
        self.cmp.iter().all(|c| c.is_lt())
    }

    pub fn on_face(&self, i: usize) -> bool {
        self.cmp[i].is_eq()
    }
}

fn ordering(sign: i8) -> Ordering {
    sign.cmp(&0)
}

/// Compares `|scale * sigma(y)|` with a bound, exactly.
pub(crate) fn cmp_coordinate(row: &LatticeRow, y: &[Rational], bound: &CoordBound) -> Ordering {
    let k = &row.field;
    let f = &k.field;
    let abs = |v: &[Rational]| -> Vec<Rational> {
        if k.sign(&v.to_vec()) < 0 {
            f.neg(v)
        } else {
            v.to_vec()
        }
    };
    let ay = abs(y);
    let ae = match &bound.elem {
        Some(e) => abs(e),
        None => f.one(),
    };
    if f.is_zero(&ay) {
        return if f.is_zero(&ae) { Ordering::Equal } else { Ordering::Less };
    }
    // |y| rho against |e| with rho = scale / radical = base^(1/index)
    let rho = row.scale.div(&bound.radical);
    let (lhs, rhs) = if rho.index() == 1 {
        (f.scale(&ay, rho.base()), ae)
    } else {
        let d = rho.index();
        (f.scale(&f.pow(&ay, d), rho.base()), f.pow(&ae, d))
    };
    ordering(k.sign(&f.sub(&lhs, &rhs)))
}

/// Float-filtered placement of coordinate `i` of `M c`.
fn place(l: &Lattice, i: usize, c: &[i64], bound: &CoordBound, bound_f: f64) -> Ordering {
    let row = &l.approx()[i];
    let (mut v, mut mag) = (0.0, 0.0);
    for (m, &x) in row.iter().zip(c) {
        let t = m * x as f64;
        v += t;
        mag += t.abs();
    }
    let err = mag * 1e-12 + 1e-300;
    let (lo, hi) = (bound_f * (1.0 - 1e-12), bound_f * (1.0 + 1e-12));
    if v.is_finite() && bound_f.is_finite() && bound_f > 0.0 {
        if v.abs() + err < lo {
            return Ordering::Less;
        }
        if v.abs() - err > hi {
            return Ordering::Greater;
        }
    }
    let r = &l.rows()[i];
    cmp_coordinate(r, &r.combination(c), bound)
}

/// LLL on the box-scaled columns, with the reduced columns recomputed from exact
/// values until the transform settles. Float LLL alone builds the reduced vectors from
/// large cancelling combinations when the box is very unequal, and the enumeration
/// would then miss points.
fn accurate_reduction(l: &Lattice, bf: &[f64], cols: &[Vec<f64>]) -> Result<Reduced> {
    let n = cols.len();
    let overflow = || Error::Unsupported("lattice coefficients overflow 64 bits".into());
    let image = |t: &[i128]| -> Result<Vec<f64>> {
        let c: Vec<i64> =
            t.iter().map(|&v| i64::try_from(v)).collect::<core::result::Result<_, _>>().map_err(|_| overflow())?;
        Ok(l.rows()
            .iter()
            .enumerate()
            .map(|(i, r)| r.field.field.value_accurate(&r.combination(&c), r.field.k) * r.scale.to_f64() / bf[i])
            .collect())
    };
    let mut red = lll(cols);
    for _ in 0..8 {
        let basis = red.transform.iter().map(|t| image(t)).collect::<Result<Vec<_>>>()?;
        let again = lll(&basis);
        let settled = again
            .transform
            .iter()
            .enumerate()
            .all(|(k, t)| t.iter().enumerate().all(|(j, &v)| v == i128::from(k == j)));
        if settled {
            return Ok(Reduced { basis, transform: red.transform });
        }
        let mut transform = vec![vec![0i128; n]; n];
        for k in 0..n {
            for j in 0..n {
                let mut acc = 0i128;
                for m in 0..n {
                    acc = again.transform[k][m]
                        .checked_mul(red.transform[m][j])
                        .and_then(|x| acc.checked_add(x))
                        .ok_or_else(overflow)?;
                }
                transform[k][j] = acc;
            }
        }
        red = Reduced { basis: again.basis, transform };
    }
    let basis = red.transform.iter().map(|t| image(t)).collect::<Result<Vec<_>>>()?;
    Ok(Reduced { basis, transform: red.transform })
}

/// Walks every nonzero point of the closed box; the visitor returns `true` to stop.
fn scan(l: &Lattice, bounds: &[CoordBound], visit: &mut dyn FnMut(BoxContact) -> bool) -> Result<()> {
    let n = l.n();
    if bounds.len() != n {
        return Err(Error::InvalidInput(format!("box has {} half-widths, lattice dimension is {n}", bounds.len())));
    }
    let bf: Vec<f64> = bounds.iter().zip(l.rows()).map(|(b, r)| b.approx(&r.field)).collect();
    if bf.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
        return Err(Error::InvalidInput("box half-widths must be positive and finite".into()));
    }
    let cols: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| l.approx()[i][j] / bf[i]).collect()).collect();
    let red = accurate_reduction(l, &bf, &cols)?;
    let mut overflow = false;
    let r2 = n as f64 * (1.0 + 1e-9);
    let res = enumerate_ball(&red.basis, r2, MAX_NODES, &mut |x, img| {
        // cheap rejection on the scaled image before exact work
        if img.iter().any(|v| v.abs() > 1.0 + 1e-6) {
            return Visit::Continue;
        }
        let Some(c) = to_original(&red.transform, x) else {
            overflow = true;
            return Visit::Stop;
        };
        let mut cmp = Vec::with_capacity(n);
        for i in 0..n {
            let o = place(l, i, &c, &bounds[i], bf[i]);
            if o.is_gt() {
                return Visit::Continue;
            }
            cmp.push(o);
        }
        let approx = l.point_f64(&c);
        if visit(BoxContact { point: LatticePoint { coeffs: c, approx }, cmp }) {
            Visit::Stop
        } else {
            Visit::Continue
        }
    });
    if res.is_err() {
        return Err(Error::Unsupported("box enumeration exceeded its node budget".into()));
    }
    if overflow {
        return Err(Error::Unsupported("lattice coefficients overflow 64 bits".into()));
    }
    Ok(())
}

/// Every nonzero lattice point of the closed box, with exact face positions.
pub fn points_in_closed_box(l: &Lattice, bounds: &[CoordBound]) -> Result<Vec<BoxContact>> {
    let mut out = Vec::new();
    scan(l, bounds, &mut |c| {
        out.push(c);
        false
    })?;
    out.sort_by(|a, b| a.point.coeffs.cmp(&b.point.coeffs));
    Ok(out)
}

/// Some nonzero lattice point of the box (open or closed), if any.
pub fn find_point_in_box(l: &Lattice, bounds: &[CoordBound], open: bool) -> Result<Option<LatticePoint>> {
    let mut found = None;
    scan(l, bounds, &mut |c| {
        if !open || c.is_interior() {
            found = Some(c.point);
            true
        } else {
            false
        }
    })?;
    Ok(found)
}

/// The nonzero lattice points of the open or closed box, sorted by coefficients.
pub fn enumerate_in_box(l: &Lattice, b: &SymmetricBox, open: bool) -> Result<LatticePointSet> {
    let pts = points_in_closed_box(l, &b.bounds())?;
    Ok(LatticePointSet { points: pts.into_iter().filter(|c| !open || c.is_interior()).map(|c| c.point).collect() })
}
