//! Local search directly on box half-widths.
//!
//! The diagonal search only sees cubes of `a_t L`. Near a product of blocks its
//! objective is a minimum over the blocks and stays flat while one block improves.
//! Here a move shrinks one face and lets another grow as far as admissibility allows,
//! which is computed exactly in floating point by enumeration.

use alloc::vec::Vec;

use crate::lattice::reduce::{enumerate_ball, lll, Visit};

/// Relative margin for "strictly inside" in floating point.
const INSIDE: f64 = 1e-12;

/// Shrink amounts, as logarithms, for the global sweep: far enough to pass from one
/// locked box to the next even across a large partial quotient.
fn wide_steps() -> Vec<f64> {
    let mut h: Vec<f64> = (1..=40).map(|k| 0.1 * k as f64).collect();
    h.extend((1..=24).map(|k| 4.0 + 0.25 * k as f64));
    h
}

/// Shrink amounts for the local sweeps.
const FINE_STEPS: [f64; 9] = [1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 3e-3, 1e-2, 3e-2, 0.1];

/// Largest `a_i` keeping the box admissible, the other half-widths fixed.
///
/// Lattice points are bounded by Minkowski: a larger box than `covol / prod_{j != i} a_j`
/// in coordinate `i` always contains one. Coordinate `i` is rescaled to the best value
/// so far whenever that halves it, since thin boxes make the first scale very loose.
pub(super) fn grow(rows: &[Vec<f64>], covol: f64, a: &[f64], i: usize) -> Option<f64> {
    let n = rows.len();
    let rest: f64 = a.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| *x).product();
    if !(rest > 0.0) {
        return None;
    }
    let mut cap = covol / rest;
    loop {
        let scale: Vec<f64> = (0..n).map(|j| if j == i { cap } else { a[j] }).collect();
        let cols: Vec<Vec<f64>> = (0..n).map(|k| (0..n).map(|r| rows[r][k] / scale[r]).collect()).collect();
        let red = lll(&cols);
        let mut best = 1.0f64;
        let res = enumerate_ball(&red.basis, n as f64 * (1.0 + 1e-9), 200_000, &mut |_, img| {
            let inside = img.iter().enumerate().all(|(j, x)| j == i || x.abs() < 1.0 - INSIDE);
            if inside && img[i].abs() < best {
                best = img[i].abs();
                if best < 0.5 {
                    return Visit::Stop;
                }
            }
            Visit::Continue
        });
        res.ok()?;
        if best < 0.5 && best > 0.0 {
            cap *= best;
            continue;
        }
        return Some(best * cap);
    }
}

fn spread(a: &[f64]) -> f64 {
    let (lo, hi) = a.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), x| (lo.min(*x), hi.max(*x)));
    libm::log(hi / lo)
}

/// Rounding error of a log volume measured on box `a`: cancellation grows with the spread.
fn noise(a: &[f64]) -> f64 {
    64.0 * f64::EPSILON * libm::exp(spread(a)) + 1e-14
}

/// Makes every face maximal, in coordinate order.
fn saturate(rows: &[Vec<f64>], covol: f64, a: &mut [f64], evals: &mut usize) -> Option<()> {
    for i in 0..a.len() {
        a[i] = grow(rows, covol, a, i)?;
        *evals += 1;
    }
    Some(())
}

/// Exchange moves from an admissible box until none improves the volume or the
/// budget of enumerations runs out. Returns the box and the enumerations used.
///
/// Boxes whose widths spread over more than `max_spread` in logarithm are not visited.
pub(super) fn polish(
    rows: &[Vec<f64>],
    covol: f64,
    start: &[f64],
    cap: usize,
    max_spread: f64,
) -> Option<(Vec<f64>, usize)> {
    let n = rows.len();
    let mut evals = 0;
    let mut a = start.to_vec();
    saturate(rows, covol, &mut a, &mut evals)?;
    if n < 2 {
        return Some((a, evals));
    }
    let volume = |b: &[f64]| b.iter().map(|x| libm::log(*x)).sum::<f64>();
    let wide = wide_steps();
    let mut current = volume(&a);
    loop {
        let before = current;
        sweep(rows, covol, &mut a, &mut current, &wide, cap, max_spread, &mut evals)?;
        while sweep(rows, covol, &mut a, &mut current, &FINE_STEPS, cap, max_spread, &mut evals)? {}
        if current <= before + 1e-14 || evals >= cap {
            break;
        }
    }
    Some((a, evals))
}

/// One pass of exchanges over all ordered pairs of faces; `true` if the volume grew.
fn sweep(
    rows: &[Vec<f64>],
    covol: f64,
    a: &mut Vec<f64>,
    current: &mut f64,
    steps: &[f64],
    cap: usize,
    max_spread: f64,
    evals: &mut usize,
) -> Option<bool> {
    let n = a.len();
    let volume = |b: &[f64]| b.iter().map(|x| libm::log(*x)).sum::<f64>();
    let mut improved = false;
    for j in 0..n {
        for i in 0..n {
            if i == j || *evals >= cap {
                continue;
            }
            // the best shrink of face j for regrowing face i
            let mut best: Option<(f64, Vec<f64>)> = None;
            for h in steps {
                let mut b = a.clone();
                b[j] *= libm::exp(-h);
                *evals += 1;
                // very thin boxes can overflow the enumeration; skip them
                let Some(g) = grow(rows, covol, &b, i) else { continue };
                b[i] = g;
                // face j back to its own blocking point: the candidate is a locked pair
                *evals += 1;
                let Some(g) = grow(rows, covol, &b, j) else { continue };
                b[j] = g;
                if spread(&b) > max_spread {
                    continue;
                }
                let v = volume(&b);
                if v > best.as_ref().map_or(*current, |x| x.0) + noise(&b) {
                    best = Some((v, b));
                }
            }
            if let Some((_, mut b)) = best {
                if saturate(rows, covol, &mut b, evals).is_none() {
                    continue;
                }
                let v = volume(&b);
                if v > *current + noise(&b) {
                    *a = b;
                    *current = v;
                    improved = true;
                }
            }
        }
    }
    Some(improved && *evals < cap)
}
