//! Pattern search for `kappa` over the diagonal group.
//!
//! For `t` in `R^{n-1}` let `a_t = diag(e^{t_1}, ..., e^{t_{n-1}}, e^{-sum t})`. The largest
//! admissible cube of `a_t L` has half-width `g(t)` = minimal sup-norm, so the box with
//! half-widths `g(t) / a_t` is admissible for `L` and `kappa(L) >= g(t)^n / covol(L)`.
//! The search maximises that quantity in floating point from many starts, then shrinks
//! the winning box to rational half-widths and certifies it exactly.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::polish::polish;
use super::{is_admissible, normalize_to_cube};
use crate::error::{Error, Result};
use crate::exactmath::{from_f64, rational_below, simplest_rational_in, to_f64, Radical, Rational, RealAlgebraic};
use crate::lattice::reduce::min_sup_norm;
use crate::lattice::{Lattice, SymmetricBox};

/// Runs independent jobs; results come back in job order.
pub trait Executor: Sync {
    fn map<T: Send, F: Fn(usize) -> T + Sync>(&self, count: usize, f: F) -> Vec<T>;

    /// Polled by long searches; `true` ends them early with the best point so far.
    fn expired(&self) -> bool {
        false
    }
}

/// Runs every job on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct SerialExecutor;

impl Executor for SerialExecutor {
    fn map<T: Send, F: Fn(usize) -> T + Sync>(&self, count: usize, f: F) -> Vec<T> {
        (0..count).map(f).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct KappaOptions {
    /// Total number of objective evaluations across all starts.
    pub max_evaluations: usize,
    /// Random starts added to the `3^{n-1}` grid.
    pub random_starts: usize,
    pub seed: u64,
    /// The search stays in `[-t_bound, t_bound]^{n-1}`.
    pub t_bound: f64,
    /// Relative shrink applied before exact certification.
    pub shrink: f64,
}

impl Default for KappaOptions {
    fn default() -> Self {
        Self { max_evaluations: 20_000, random_starts: 8, seed: 0, t_bound: 12.0, shrink: 1e-12 }
    }
}

/// One start of the search.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchRecord {
    pub start: Vec<f64>,
    pub t: Vec<f64>,
    /// Half-widths of the best box found from this start.
    pub widths: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Outcome of [`kappa_search`].
#[derive(Clone, Debug)]
pub struct MordellEstimate {
    /// Certified lower bound `prod lattice_box / covol` (0 when nothing certified).
    pub kappa_lower: f64,
    /// The same bound as an exact number, when certified.
    pub kappa_exact: Option<RealAlgebraic>,
    /// Best floating value seen during the search.
    pub kappa_float: f64,
    /// Admissible box for `L` with rational half-widths.
    pub lattice_box: SymmetricBox,
    /// Unimodular diagonal `a` with `a * lattice_box` a cube.
    pub normalizer: Vec<Radical>,
    /// The cube `a * lattice_box`, admissible for `a L`.
    pub witness_box: SymmetricBox,
    pub certified: bool,
    /// Set when the best point sits on the search boundary: the supremum is
    /// approached along this direction of `t` and not attained inside.
    pub diverging: Option<Vec<f64>>,
    pub evaluations: usize,
    pub search_log: Vec<SearchRecord>,
}

fn weights(t: &[f64]) -> Vec<f64> {
    let mut w: Vec<f64> = t.iter().map(|x| libm::exp(*x)).collect();
    w.push(libm::exp(-t.iter().sum::<f64>()));
    w
}

/// `g(t)^n / covol` together with `g(t)`.
fn objective(rows: &[Vec<f64>], covol: f64, t: &[f64]) -> (f64, f64) {
    let n = rows.len();
    let w = weights(t);
    let cols: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| rows[i][j] * w[i]).collect()).collect();
    match min_sup_norm(&cols) {
        Some((g, _)) if g.is_finite() => (libm::pow(g, n as f64) / covol, g),
        _ => (0.0, 0.0),
    }
}

/// Local searches continued after the first sweep.
const FOLLOW_UP: usize = 3;
const STEP_TOL: f64 = 1e-11;
/// Leading float candidates that are certified exactly.
const CERTIFY: usize = 6;
/// Evaluations a start needs, per squared dimension, when sizing the random starts.
const START_COST: usize = 60;
const SCAN_RANGE: f64 = 8.0;
const SCAN_STEP: f64 = 0.1;

fn directions(d: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for k in 0..d {
        for s in [1.0, -1.0] {
            let mut v = vec![0.0; d];
            v[k] = s;
            out.push(v);
        }
    }
    for k in 0..d {
        for l in k + 1..d {
            for (s, r) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut v = vec![0.0; d];
                v[k] = s;
                v[l] = r;
                out.push(v);
            }
        }
    }
    out
}

/// State of one local search, resumable.
#[derive(Clone)]
struct Climb {
    t: Vec<f64>,
    value: f64,
    h: f64,
    evals: usize,
}

fn pattern_search(
    rows: &[Vec<f64>],
    covol: f64,
    from: Climb,
    opts: &KappaOptions,
    cap: usize,
    seed: u64,
    stop: &dyn Fn() -> bool,
) -> Climb {
    let d = from.t.len();
    let clamp = |v: f64| v.clamp(-opts.t_bound, opts.t_bound);
    let dirs = directions(d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let Climb { mut t, value: mut best, mut h, evals: used } = from;
    let cap = used + cap;
    let mut evals = used;
    while h > STEP_TOL && evals < cap && !stop() {
        let mut moved = false;
        let mut tries: Vec<Vec<f64>> = dirs.clone();
        if d > 1 {
            // random directions help along ridges that are not axis-aligned
            for _ in 0..2 * d {
                let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                tries.push(v);
            }
        }
        for dir in &tries {
            if evals >= cap {
                break;
            }
            let cand: Vec<f64> = t.iter().zip(dir).map(|(x, s)| clamp(x + h * s)).collect();
            if cand == t {
                continue;
            }
            let v = objective(rows, covol, &cand).0;
            evals += 1;
            if v > best {
                best = v;
                t = cand;
                moved = true;
                break;
            }
        }
        if moved {
            h = (h * 2.0).min(2.0);
        } else {
            h *= 0.5;
        }
    }
    Climb { t, value: best, h, evals }
}

/// Samples the objective along each scan direction over `[-SCAN_RANGE, SCAN_RANGE]`
/// and moves to the best sample. Unlike the pattern steps this crosses valleys, which
/// separate the peaks of one block while the others stay put.
fn line_scan(rows: &[Vec<f64>], covol: f64, mut c: Climb, opts: &KappaOptions, cap: usize) -> Climb {
    let d = c.t.len();
    let clamp = |v: f64| v.clamp(-opts.t_bound, opts.t_bound);
    let steps = (SCAN_RANGE / SCAN_STEP) as i64;
    let mut dirs: Vec<Vec<f64>> = (0..d).map(|k| (0..d).map(|j| f64::from(u8::from(j == k))).collect()).collect();
    for k in 0..d {
        for l in k + 1..d {
            for r in [1.0, -1.0] {
                let mut v = vec![0.0; d];
                v[k] = 1.0;
                v[l] = r;
                dirs.push(v);
            }
        }
    }
    for dir in &dirs {
        let mut best = None;
        for i in -steps..=steps {
            if i == 0 || c.evals >= cap {
                continue;
            }
            let x = i as f64 * SCAN_STEP;
            let cand: Vec<f64> = c.t.iter().zip(dir).map(|(t, s)| clamp(t + x * s)).collect();
            let v = objective(rows, covol, &cand).0;
            c.evals += 1;
            if v > best.as_ref().map_or(c.value, |b: &(f64, Vec<f64>)| b.0) {
                best = Some((v, cand));
            }
        }
        if let Some((v, t)) = best {
            c.value = v;
            c.t = t;
        }
    }
    c
}

/// Alternates line scans and pattern steps until the budget is spent or nothing moves.
fn refine(
    rows: &[Vec<f64>],
    covol: f64,
    mut c: Climb,
    opts: &KappaOptions,
    extra: usize,
    seed: u64,
    stop: &dyn Fn() -> bool,
) -> Climb {
    let cap = c.evals + extra;
    // the last third polishes the final peak
    let scan_cap = c.evals + extra - extra / 3;
    let d = c.t.len();
    let chunk = START_COST * (d + 1) * (d + 1);
    let mut round = 0;
    while c.evals < scan_cap && !stop() {
        let before = c.value;
        c = line_scan(rows, covol, c, opts, scan_cap);
        c.h = 0.5;
        let left = scan_cap.saturating_sub(c.evals);
        c = pattern_search(rows, covol, c, opts, left.min(chunk), seed.wrapping_add(round), stop);
        round += 1;
        if c.value <= before {
            break;
        }
    }
    let left = cap.saturating_sub(c.evals);
    c.h = 0.5;
    pattern_search(rows, covol, c, opts, left, seed.wrapping_add(round), stop)
}

fn grid_starts(d: usize) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p: Vec<f64>| {
                [0.0, -1.0, 1.0].into_iter().map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Half-widths `g(t) / a_t` of the cube found at `t`.
fn cube_widths(rows: &[Vec<f64>], covol: f64, t: &[f64]) -> Vec<f64> {
    let g = objective(rows, covol, t).1;
    weights(t).iter().map(|w| g / w).collect()
}

/// Certifies a float box after shrinking it to rational half-widths.
fn certify(l: &Lattice, widths: &[f64], shrink: f64) -> Result<Option<Vec<Rational>>> {
    if widths.iter().any(|x| !(*x > 0.0)) {
        return Ok(None);
    }
    // a nearby simple box, which may sit slightly above the float one
    let snapped: Option<Vec<Rational>> = widths
        .iter()
        .map(|x| Some(simplest_rational_in(&from_f64(x * (1.0 - shrink))?, &from_f64(x * (1.0 + shrink))?)))
        .collect();
    if let Some(a) = snapped {
        match is_admissible(l, &SymmetricBox::from_rationals(&a)?) {
            Ok(true) => return Ok(Some(a)),
            Ok(false) | Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let mut rel = shrink;
    while rel < 0.5 {
        let a: Option<Vec<Rational>> = widths.iter().map(|x| rational_below(*x, rel)).collect();
        if let Some(a) = a {
            match is_admissible(l, &SymmetricBox::from_rationals(&a)?) {
                Ok(true) => return Ok(Some(a)),
                Ok(false) => {}
                // too thin to enumerate: leave it to the next candidate
                Err(Error::Unsupported(_)) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
        rel *= 100.0;
    }
    Ok(None)
}

/// Searches the diagonal orbit for a large admissible box and certifies the best one.
///
/// The result depends only on the lattice and `opts`, not on the executor, unless the
/// executor reports its deadline as expired.
pub fn kappa_search<E: Executor>(l: &Lattice, opts: &KappaOptions, exec: &E) -> Result<MordellEstimate> {
    let n = l.n();
    if n < 1 {
        return Err(Error::InvalidInput("empty lattice".into()));
    }
    let rows: Vec<Vec<f64>> = l.approx().to_vec();
    let covol = l.covolume().to_f64();
    let d = n - 1;
    let mut starts = grid_starts(d);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    if d > 0 {
        // low dimensions can afford many starts; every other one samples a wide window,
        // where the peaks of quadratic-type lattices with a large unit sit
        let count = opts.random_starts.max(opts.max_evaluations / 2 / (START_COST * (d + 1) * (d + 1)));
        let wide = (opts.t_bound / 2.0).max(2.0);
        for k in 0..count {
            let r = if k % 2 == 0 { 2.0 } else { wide };
            starts.push((0..d).map(|_| rng.gen_range(-r..r)).collect());
        }
    }
    // half the budget spreads over the starts, the rest continues the best few
    let cap = (opts.max_evaluations / 2 / starts.len()).max(8);
    let seeds: Vec<u64> = (0..2 * starts.len()).map(|_| rng.gen()).collect();
    let stop = || exec.expired();
    let mut climbs: Vec<Climb> = exec.map(starts.len(), |k| {
        let init = Climb { t: starts[k].clone(), value: objective(&rows, covol, &starts[k]).0, h: 0.5, evals: 1 };
        pattern_search(&rows, covol, init, opts, cap, seeds[k], &stop)
    });
    let mut ranked: Vec<usize> = (0..climbs.len()).collect();
    ranked.sort_by(|&a, &b| climbs[b].value.partial_cmp(&climbs[a].value).unwrap().then(a.cmp(&b)));
    ranked.truncate(FOLLOW_UP.min(ranked.len()));
    let spent: usize = climbs.iter().map(|c| c.evals).sum();
    // the rest is shared by diagonal refinement and box exchanges
    let extra = opts.max_evaluations.saturating_sub(spent) / ranked.len().max(1) / 2;
    if extra > 0 {
        let more: Vec<Climb> = exec.map(ranked.len(), |i| {
            let k = ranked[i];
            refine(&rows, covol, climbs[k].clone(), opts, extra, seeds[starts.len() + k], &stop)
        });
        for (i, c) in more.into_iter().enumerate() {
            climbs[ranked[i]] = c;
        }
    }
    let mut log: Vec<SearchRecord> = climbs
        .into_iter()
        .zip(&starts)
        .map(|(c, s)| {
            let widths = cube_widths(&rows, covol, &c.t);
            SearchRecord { start: s.clone(), t: c.t, widths, value: c.value, evaluations: c.evals }
        })
        .collect();
    // float candidates: every diagonal cube, plus the polished boxes of the followed climbs
    let mut cands: Vec<(f64, Vec<f64>)> = log.iter().map(|r| (r.value, r.widths.clone())).collect();
    if extra > 0 && !stop() {
        let polished =
            exec.map(ranked.len(), |i| polish(&rows, covol, &log[ranked[i]].widths, extra, 2.0 * opts.t_bound));
        for (i, p) in polished.into_iter().enumerate() {
            if let Some((w, used)) = p {
                let r = &mut log[ranked[i]];
                r.evaluations += used;
                let v = w.iter().product::<f64>() / covol;
                if v > r.value {
                    r.value = v;
                    r.widths = w.clone();
                    cands.push((v, w));
                }
            }
        }
    }
    let evaluations = log.iter().map(|r| r.evaluations).sum();

    // best value first; near-ties broken by the lexicographically smallest box
    let top = cands.iter().map(|c| c.0).fold(0.0, f64::max);
    let near = |v: f64| v >= top * (1.0 - 1e-12);
    let mut order: Vec<usize> = (0..cands.len()).collect();
    order.sort_by(|&a, &b| {
        let (ta, tb) = (near(cands[a].0), near(cands[b].0));
        tb.cmp(&ta)
            .then_with(|| if ta { cands[a].1.partial_cmp(&cands[b].1).unwrap() } else { core::cmp::Ordering::Equal })
            .then_with(|| cands[b].0.partial_cmp(&cands[a].0).unwrap())
    });
    order.dedup_by(|a, b| cands[*a].1 == cands[*b].1);

    // float values of thin boxes can be off in the seventh digit, so the exact
    // products decide among the leading candidates
    let mut chosen: Option<(Rational, Vec<Rational>)> = None;
    for &k in order.iter().take(CERTIFY) {
        if let Some(a) = certify(l, &cands[k].1, opts.shrink)? {
            let prod: Rational = a.iter().product();
            if chosen.as_ref().is_none_or(|c| prod > c.0) {
                chosen = Some((prod, a));
            }
        }
    }
    let best_climb = (0..log.len()).max_by(|&a, &b| log[a].value.partial_cmp(&log[b].value).unwrap().then(b.cmp(&a)));
    let diverging = best_climb.and_then(|k| {
        let t = &log[k].t;
        t.iter()
            .any(|x| x.abs() >= opts.t_bound * (1.0 - 1e-9))
            .then(|| t.iter().map(|x| if x.abs() >= opts.t_bound * (1.0 - 1e-9) { x.signum() } else { 0.0 }).collect())
    });
    let Some((prod, a)) = chosen else {
        let unit = SymmetricBox::cube(n, Radical::one());
        return Ok(MordellEstimate {
            kappa_lower: 0.0,
            kappa_exact: None,
            kappa_float: top,
            lattice_box: unit.clone(),
            normalizer: vec![Radical::one(); n],
            witness_box: unit,
            certified: false,
            diverging,
            evaluations,
            search_log: log,
        });
    };
    let lattice_box = SymmetricBox::from_rationals(&a)?;
    let normalizer = normalize_to_cube(&lattice_box);
    let witness_box = lattice_box.scaled(&normalizer);
    let exact = RealAlgebraic::Rational(prod.clone()).div(l.covolume());
    let kappa_lower = to_f64(&prod) / covol;
    Ok(MordellEstimate {
        kappa_lower,
        kappa_exact: Some(exact),
        kappa_float: top,
        lattice_box,
        normalizer,
        witness_box,
        certified: true,
        diverging,
        evaluations,
        search_log: log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{q, q_int, QMatrix};
    use crate::lattice::tests::sqrt2_lattice;
    use crate::mordell::is_admissible;

    #[test]
    fn integer_lattice_reaches_one() {
        for n in 1..=5 {
            let l = Lattice::integer(n);
            let e = kappa_search(&l, &KappaOptions::default(), &SerialExecutor).unwrap();
            assert!(e.certified);
            assert_eq!(e.kappa_exact, Some(RealAlgebraic::one()));
            assert!(e.lattice_box.half_widths().iter().all(|a| a.is_one()));
        }
    }

    #[test]
    fn sqrt2_estimate_and_witness() {
        let l = sqrt2_lattice();
        let e = kappa_search(&l, &KappaOptions::default(), &SerialExecutor).unwrap();
        let exact = (1.0 + core::f64::consts::SQRT_2) / (2.0 * core::f64::consts::SQRT_2);
        assert!(e.certified);
        assert!((e.kappa_lower - exact).abs() < 1e-9, "{}", e.kappa_lower);
        assert!(e.kappa_lower <= exact);
        assert!(Radical::product(&e.normalizer).is_one());
        assert!(e.witness_box.is_cube());
        let moved = l.apply_diagonal(&e.normalizer).unwrap();
        assert!(is_admissible(&moved, &e.witness_box).unwrap());
    }

    #[test]
    fn sheared_plane() {
        let l =
            Lattice::from_rational_matrix(&QMatrix::from_rows(vec![vec![q_int(1), q(1, 3)], vec![q_int(0), q_int(1)]]))
                .unwrap();
        let e = kappa_search(&l, &KappaOptions::default(), &SerialExecutor).unwrap();
        assert!(e.certified && e.kappa_lower > 0.5 && e.kappa_lower <= 1.0);
    }

    #[test]
    fn same_answer_for_any_seed_of_the_executor_order() {
        struct Reversed;
        impl Executor for Reversed {
            fn map<T: Send, F: Fn(usize) -> T + Sync>(&self, count: usize, f: F) -> Vec<T> {
                let mut v: Vec<(usize, T)> = (0..count).rev().map(|k| (k, f(k))).collect();
                v.sort_by_key(|p| p.0);
                v.into_iter().map(|p| p.1).collect()
            }
        }
        let l = sqrt2_lattice();
        let a = kappa_search(&l, &KappaOptions::default(), &SerialExecutor).unwrap();
        let b = kappa_search(&l, &KappaOptions::default(), &Reversed).unwrap();
        assert_eq!(a.lattice_box, b.lattice_box);
        assert_eq!(a.search_log, b.search_log);
    }
}
