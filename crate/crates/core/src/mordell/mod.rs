//! Admissible boxes, locking configurations and certified lower bounds for the
//! Mordell constant `kappa(L) = sup { vol(B) / 2^n covol(L) : B admissible }`.
//!
//! A box is admissible when its interior holds no nonzero lattice point.

mod oracle;
mod polish;
mod search;

pub use oracle::{gruber_consistency, kappa_oracle_2d, lambda_inf, GruberReport, LambdaEstimate, OracleResult};
pub use search::{kappa_search, Executor, KappaOptions, MordellEstimate, SearchRecord, SerialExecutor};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra::{compositum, EmbeddedField, Partition};
use crate::error::{Error, Result};
use crate::exactmath::field::{origin_in_hull, separating_functional};
use crate::exactmath::{from_f64, simplest_rational_in, to_f64, Radical, Rational};
use crate::lattice::reduce::min_sup_norm;
use crate::lattice::{find_point_in_box, points_in_closed_box, CoordBound, Lattice, LatticePoint, SymmetricBox};

/// True when the open box contains no nonzero lattice point.
pub fn is_admissible(l: &Lattice, b: &SymmetricBox) -> Result<bool> {
    is_admissible_bounds(l, &b.bounds())
}

/// As [`is_admissible`], for faces given as exact coordinate bounds.
pub fn is_admissible_bounds(l: &Lattice, bounds: &[CoordBound]) -> Result<bool> {
    Ok(find_point_in_box(l, bounds, true)?.is_none())
}

/// Exact bracket on the supremum of admissible cube half-widths.
#[derive(Clone, Debug, PartialEq)]
pub struct CubeBound {
    /// The open cube with this half-width is admissible.
    pub lower: Rational,
    /// The open cube with this half-width contains `blocking`.
    pub upper: Rational,
    /// A lattice point realizing the minimal sup-norm.
    pub blocking: Vec<i64>,
}

impl CubeBound {
    pub fn lower_f64(&self) -> f64 {
        to_f64(&self.lower)
    }
}

fn cube(n: usize, a: &Rational) -> Result<SymmetricBox> {
    Ok(SymmetricBox::cube(n, Radical::rational(a.clone())?))
}

/// Strictly inside the open cube of half-width `a`.
fn strictly_inside(l: &Lattice, c: &[i64], a: &Rational) -> Result<bool> {
    let b = CoordBound::radical(Radical::rational(a.clone())?);
    Ok((0..l.n()).all(|i| {
        let r = &l.rows()[i];
        crate::lattice::enumerate::cmp_coordinate(r, &r.combination(c), &b).is_lt()
    }))
}

/// The largest admissible cube, to within `precision` (absolute, on the half-width).
///
/// The sup equals the minimal sup-norm of a nonzero lattice vector; the float value
/// is only a starting guess and both ends of the returned bracket are checked exactly.
pub fn largest_admissible_cube(l: &Lattice, precision: f64) -> Result<CubeBound> {
    let n = l.n();
    let (g, c) =
        min_sup_norm(&l.columns_f64()).ok_or_else(|| Error::Unsupported("minimal sup-norm search failed".into()))?;
    let prec = from_f64(precision.max(1e-300)).ok_or_else(|| Error::InvalidInput("precision must be finite".into()))?;
    let gq = from_f64(g).ok_or_else(|| Error::Unsupported("non-finite sup-norm".into()))?;

    let mut rel = 1e-13;
    let upper = loop {
        let hi =
            simplest_rational_in(&(&gq * from_f64(1.0 + rel).unwrap()), &(&gq * from_f64(1.0 + 2.0 * rel).unwrap()));
        if strictly_inside(l, &c, &hi)? {
            break hi;
        }
        rel *= 100.0;
        if rel > 1.0 {
            return Err(Error::InvalidState("float sup-norm is far from exact".into()));
        }
    };
    let mut rel = 1e-13;
    let mut lower = simplest_rational_in(&(&gq * from_f64(1.0 - rel).unwrap()), &gq);
    while !is_admissible(l, &cube(n, &lower)?)? {
        rel *= 100.0;
        if rel >= 1.0 {
            lower = Rational::zero();
            break;
        }
        lower =
            simplest_rational_in(&(&gq * from_f64(1.0 - 2.0 * rel).unwrap()), &(&gq * from_f64(1.0 - rel).unwrap()));
    }
    let mut hi = upper.clone();
    if lower.is_zero() {
        lower = &hi / Rational::from_integer(2.into());
        while !is_admissible(l, &cube(n, &lower)?)? {
            hi = lower.clone();
            lower = &lower / Rational::from_integer(2.into());
        }
    }
    while &hi - &lower > prec {
        let w = &hi - &lower;
        let mid = simplest_rational_in(
            &(&lower + &w / Rational::from_integer(4.into())),
            &(&hi - &w / Rational::from_integer(4.into())),
        );
        if is_admissible(l, &cube(n, &mid)?)? {
            lower = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CubeBound { lower, upper: hi, blocking: c })
}

/// The unimodular diagonal `a` with `a B` a cube: `a_i = (prod b)^{1/n} / b_i`.
pub fn normalize_to_cube(b: &SymmetricBox) -> Vec<Radical> {
    let n = b.n() as u32;
    let side = b.product().root(n);
    b.half_widths().iter().map(|w| side.div(w)).collect()
}

/// Lattice points on the boundary of an admissible box.
#[derive(Clone, Debug, Default)]
pub struct LockingConfiguration {
    /// `faces[i]`: points in the relative interior of the face `x_i = +a_i`.
    pub faces: Vec<Vec<LatticePoint>>,
    /// Boundary points lying on two or more faces, up to sign.
    pub corners: Vec<LatticePoint>,
}

impl LockingConfiguration {
    pub fn unlocked(&self) -> Vec<usize> {
        (0..self.faces.len()).filter(|&i| self.faces[i].is_empty()).collect()
    }

    pub fn all_locked(&self) -> bool {
        self.faces.iter().all(|f| !f.is_empty())
    }
}

/// Boundary lattice points of an admissible box, sorted by face.
///
/// Points are taken up to sign, normalised so that the face coordinate is positive.
pub fn locking_points(l: &Lattice, bounds: &[CoordBound]) -> Result<LockingConfiguration> {
    let n = l.n();
    let contacts = points_in_closed_box(l, bounds)?;
    if let Some(p) = contacts.iter().find(|c| c.is_interior()) {
        return Err(Error::Precondition(format!("box is not admissible: {:?} is interior", p.point.coeffs)));
    }
    let mut out = LockingConfiguration { faces: vec![Vec::new(); n], corners: Vec::new() };
    for c in contacts {
        let on: Vec<usize> = (0..n).filter(|&i| c.on_face(i)).collect();
        let lead = on[0];
        if c.point.approx[lead] < 0.0 {
            continue;
        }
        if on.len() == 1 {
            out.faces[lead].push(c.point);
        } else {
            out.corners.push(c.point);
        }
    }
    Ok(out)
}

/// Result of the convex-hull test for one block `Q` and one face `i0` in it.
#[derive(Clone, Debug, PartialEq)]
pub struct HullCheck {
    pub block: Vec<usize>,
    pub face: usize,
    /// `0` lies in the hull of the projected locking points of the face.
    pub holds: bool,
    /// On failure, a functional on `R^{Q \ i0}` strictly positive on the projections;
    /// moving along `v -> v + t f(pi(v)) e_{i0}` enlarges the admissible box.
    pub functional: Option<Vec<f64>>,
}

/// Local-maximality certificate of a fully locked box with respect to a partition.
#[derive(Clone, Debug, PartialEq)]
pub struct LockingCertificate {
    pub checks: Vec<HullCheck>,
}

impl LockingCertificate {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn improving(&self) -> Option<&HullCheck> {
        self.checks.iter().find(|c| !c.holds)
    }
}

/// Checks `0 in conv { pi_{Q \ i0}(v) : v in L_{i0} }` for every block `Q` and `i0 in Q`.
///
/// Coordinates are compared in a compositum of the row fields; the positive row
/// scales do not change hull membership, so they are dropped there.
pub fn locking_certificate(l: &Lattice, bounds: &[CoordBound], p: &Partition) -> Result<LockingCertificate> {
    let n = l.n();
    if p.n() != n {
        return Err(Error::InvalidInput(format!("partition of {} points for a lattice of dimension {n}", p.n())));
    }
    let locks = locking_points(l, bounds)?;
    let unlocked = locks.unlocked();
    if !unlocked.is_empty() {
        let faces: Vec<usize> = unlocked.iter().map(|i| i + 1).collect();
        return Err(Error::Precondition(format!("faces {faces:?} carry no locking point; the box can grow")));
    }
    let mut checks = Vec::new();
    for block in p.blocks() {
        for &i0 in block {
            let rest: Vec<usize> = block.iter().copied().filter(|&j| j != i0).collect();
            if rest.is_empty() {
                checks.push(HullCheck { block: block.clone(), face: i0, holds: true, functional: None });
                continue;
            }
            let fields: Vec<EmbeddedField> = rest.iter().map(|&j| l.rows()[j].field.clone()).collect();
            let comp = compositum(&fields)?;
            let pts: Vec<Vec<Vec<Rational>>> = locks.faces[i0]
                .iter()
                .map(|v| {
                    rest.iter().enumerate().map(|(t, &j)| comp.map(t, &l.rows()[j].combination(&v.coeffs))).collect()
                })
                .collect();
            let k = &comp.field;
            if origin_in_hull(k, &pts, rest.len()) {
                checks.push(HullCheck { block: block.clone(), face: i0, holds: true, functional: None });
            } else {
                let y = separating_functional(k, &pts, rest.len()).ok_or_else(|| {
                    Error::InvalidState("no separating functional for a point set missing the origin".into())
                })?;
                // back to actual coordinates: f(x) = sum y_j x_j / s_j
                let f = y.iter().zip(&rest).map(|(yj, &j)| k.value_f64(yj) / l.rows()[j].scale.to_f64()).collect();
                checks.push(HullCheck { block: block.clone(), face: i0, holds: false, functional: Some(f) });
            }
        }
    }
    Ok(LockingCertificate { checks })
}
