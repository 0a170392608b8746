//! Independent checks: the planar pair oracle, `lambda_inf` and Gruber's dichotomy.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Signed;

use super::search::{kappa_search, Executor, KappaOptions, MordellEstimate};
use crate::error::{Error, Result};
use crate::exactmath::{Radical, Rational, RealAlgebraic};
use crate::lattice::{coefficient_ball, find_point_in_box, CoordBound, Lattice};

/// Best box found by the planar oracle.
#[derive(Clone, Debug)]
pub struct OracleResult {
    pub kappa: f64,
    /// Lattice point on the face `x_1 = a_1`.
    pub first: Vec<i64>,
    /// Lattice point on the face `x_2 = a_2`.
    pub second: Vec<i64>,
    /// The box `(|x_1(first)|, |x_2(second)|)`, as exact bounds.
    pub bounds: Vec<CoordBound>,
}

struct Pt {
    c: Vec<i64>,
    x: [f64; 2],
}

/// Planar `kappa` from pairs of lattice points.
///
/// For every `v` with coefficients in `[-radius, radius]^2` the face `x_1 = |v_1|` is
/// fixed and the second face is pushed out to the smallest `|x_2|` of a lattice point
/// with `|x_1| < |v_1|`. Each candidate box is checked exactly against the whole
/// lattice; a point found inside is added to the pool and the candidates recomputed.
/// The value never decreases as the radius grows.
pub fn kappa_oracle_2d(l: &Lattice, radius: i64) -> Result<OracleResult> {
    if l.n() != 2 {
        return Err(Error::Unsupported(format!("the pair oracle is planar, got dimension {}", l.n())));
    }
    if radius < 1 {
        return Err(Error::InvalidInput("radius must be at least 1".into()));
    }
    let covol = l.covolume().to_f64();
    let mk = |c: Vec<i64>| {
        let p = l.point_f64(&c);
        Pt { c, x: [p[0].abs(), p[1].abs()] }
    };
    let mut pool: Vec<Pt> = coefficient_ball(2, radius).map(mk).collect();
    let faces: Vec<usize> = (0..pool.len()).collect();
    let mut rejected: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    for _round in 0..10_000 {
        // candidate for each face point: (value, face index, partner index)
        let mut by_x1: Vec<usize> = (0..pool.len()).collect();
        by_x1.sort_by(|&a, &b| pool[a].x[0].partial_cmp(&pool[b].x[0]).unwrap());
        let mut cands: Vec<(f64, usize, usize)> = Vec::new();
        for &v in &faces {
            let a = pool[v].x[0];
            if a == 0.0 {
                continue;
            }
            let lim = a * (1.0 - 1e-12);
            let mut best: Option<usize> = None;
            for &u in &by_x1 {
                if pool[u].x[0] >= lim {
                    break;
                }
                if best.is_none_or(|b| pool[u].x[1] < pool[b].x[1]) {
                    best = Some(u);
                }
            }
            if let Some(u) = best {
                if pool[u].x[1] > 0.0 && !rejected.contains(&(pool[v].c.clone(), pool[u].c.clone())) {
                    cands.push((a * pool[u].x[1] / covol, v, u));
                }
            }
        }
        cands.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then_with(|| pool[a.1].c.cmp(&pool[b.1].c)));
        let Some(&(val, v, u)) = cands.first() else {
            return Err(Error::Unsupported("no candidate box within the radius".into()));
        };
        let bounds = [CoordBound::from_coordinate(l, 0, &pool[v].c), CoordBound::from_coordinate(l, 1, &pool[u].c)];
        match find_point_in_box(l, &bounds, true)? {
            None => {
                return Ok(OracleResult {
                    kappa: val,
                    first: pool[v].c.clone(),
                    second: pool[u].c.clone(),
                    bounds: bounds.to_vec(),
                });
            }
            Some(p) => {
                rejected.push((pool[v].c.clone(), pool[u].c.clone()));
                if !pool.iter().any(|q| q.c == p.coeffs) {
                    pool.push(mk(p.coeffs));
                }
            }
        }
    }
    Err(Error::Unsupported("pair oracle did not settle".into()))
}

/// `inf |prod x_i|` over nonzero lattice points, estimated on a coefficient ball.
#[derive(Clone, Debug)]
pub struct LambdaEstimate {
    pub value: f64,
    pub exact: Option<RealAlgebraic>,
    pub witness: Vec<i64>,
}

const MAX_BALL: u64 = 5_000_000;

/// Minimum of `|x_1 ... x_n|` over nonzero coefficient vectors with `|c|_inf <= radius`.
///
/// For a lattice built from a single number field the product is `prod s_i |N(beta)|`
/// and is computed exactly; otherwise the minimum is a float, exact only when it is 0.
pub fn lambda_inf(l: &Lattice, radius: i64) -> Result<LambdaEstimate> {
    let n = l.n();
    let side = (2 * radius + 1) as u64;
    if side.checked_pow(n as u32).is_none_or(|t| t > MAX_BALL) {
        return Err(Error::Unsupported(format!("coefficient ball of radius {radius} in dimension {n} is too large")));
    }
    let scale = Radical::product(l.rows().iter().map(|r| &r.scale));
    if let Some(o) = l.origin().filter(|o| o.algebra.is_field()) {
        let f = &o.algebra.components()[0];
        let mut best: Option<(Rational, Vec<i64>)> = None;
        for c in coefficient_ball(n, radius) {
            let mut beta = f.zero();
            for (cj, a) in c.iter().zip(&o.basis) {
                beta = f.add(&beta, &f.scale(&a.parts[0], &Rational::from_integer((*cj).into())));
            }
            let nm = f.norm(&beta).abs();
            if best.as_ref().is_none_or(|(b, _)| &nm < b) {
                best = Some((nm, c));
            }
        }
        let (m, witness) = best.ok_or_else(|| Error::InvalidInput("empty coefficient ball".into()))?;
        let exact = RealAlgebraic::from(scale).mul(&RealAlgebraic::Rational(m));
        return Ok(LambdaEstimate { value: exact.to_f64(), exact: Some(exact), witness });
    }
    let mut best = (f64::INFINITY, Vec::new());
    for c in coefficient_ball(n, radius) {
        let p = l.point_f64(&c);
        let v: f64 = p.iter().map(|x| x.abs()).product();
        if v < best.0 {
            best = (v, c);
        }
    }
    let (value, witness) = best;
    let zero = l.rows().iter().any(|r| r.field.field.is_zero(&r.combination(&witness)));
    if zero {
        return Ok(LambdaEstimate { value: 0.0, exact: Some(RealAlgebraic::zero()), witness });
    }
    Ok(LambdaEstimate { value, exact: None, witness })
}

/// Outcome of comparing `kappa` with `lambda` through Gruber's dichotomy:
/// `kappa(L) = 1` exactly when `lambda(L) = 0`.
#[derive(Clone, Debug)]
pub struct GruberReport {
    pub lambda: LambdaEstimate,
    pub lambda_doubled: LambdaEstimate,
    pub estimate: MordellEstimate,
    /// `Some(true)` consistent, `Some(false)` contradiction, `None` inconclusive.
    pub consistent: Option<bool>,
    pub note: String,
}

/// Runs `lambda_inf` at `radius` and `2 radius` and a kappa search, then checks the dichotomy.
pub fn gruber_consistency<E: Executor>(
    l: &Lattice,
    radius: i64,
    opts: &KappaOptions,
    exec: &E,
) -> Result<GruberReport> {
    let lambda = lambda_inf(l, radius)?;
    let lambda_doubled = lambda_inf(l, 2 * radius)?;
    let estimate = kappa_search(l, opts, exec)?;
    let k = estimate.kappa_lower.max(estimate.kappa_float);
    let zero = lambda.exact.as_ref().is_some_and(|x| x.is_zero());
    let (consistent, note) = if zero {
        if k >= 1.0 - 1e-9 {
            (Some(true), "lambda = 0 and kappa = 1".into())
        } else if estimate.diverging.is_some() {
            (Some(true), format!("lambda = 0; kappa approaches 1 along a diverging direction (reached {k:.9})"))
        } else {
            (Some(false), format!("lambda = 0 but the search stalled at kappa = {k:.9}"))
        }
    } else if lambda_doubled.value >= lambda.value * (1.0 - 1e-9) && lambda.value > 0.0 {
        if estimate.certified && estimate.kappa_lower < 1.0 && !(k >= 1.0 - 1e-9) {
            (Some(true), format!("lambda = {:.9} is stable and kappa = {k:.9} < 1", lambda.value))
        } else {
            (Some(false), format!("lambda = {:.9} is stable but kappa = {k:.9}", lambda.value))
        }
    } else {
        (
            None,
            format!(
                "lambda dropped from {:.3e} to {:.3e} when doubling the radius",
                lambda.value, lambda_doubled.value
            ),
        )
    };
    Ok(GruberReport { lambda, lambda_doubled, estimate, consistent, note })
}

/// Admissibility of the oracle box, rechecked.
#[cfg(test)]
fn oracle_box_is_admissible(l: &Lattice, r: &OracleResult) -> bool {
    super::is_admissible_bounds(l, &r.bounds).unwrap()
}
