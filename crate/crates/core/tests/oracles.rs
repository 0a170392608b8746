//! Values computed here by independent means and compared with the library.

use mordell_core::algebra::wedderburn;
use mordell_core::exactmath::{factor_over_q, isolate_real_roots, q, refine, QMatrix, QPoly};
use mordell_core::lattice::Lattice;
use mordell_core::mordell::{kappa_search, lambda_inf, KappaOptions, SerialExecutor};
use mordell_core::spectrum2::{cf_expand, quadratic_lattice, QuadraticIrrational};

fn chebyshev(n: usize) -> QPoly {
    let (mut a, mut b) = (QPoly::one(), QPoly::x());
    for _ in 1..n {
        let next = &(&QPoly::x() * &b).scale(&q(2, 1)) - &a;
        a = b;
        b = next;
    }
    if n == 0 {
        a
    } else {
        b
    }
}

#[test]
fn chebyshev_roots_are_cosines() {
    for n in [3usize, 5, 8] {
        let mut expect: Vec<f64> =
            (1..=n).map(|k| ((2 * k - 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos()).collect();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut got: Vec<f64> = isolate_real_roots(&chebyshev(n))
            .unwrap()
            .iter()
            .map(|r| refine(r, &q(1, 1_000_000_000_000_000)).unwrap().to_f64())
            .collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got.len(), n);
        for (g, e) in got.iter().zip(&expect) {
            assert!((g - e).abs() < 1e-12, "T_{n}: {g} vs {e}");
        }
    }
}

fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|k| num_gcd(*k, n) == 1).count()
}

fn num_gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

#[test]
fn x_to_the_n_minus_one_splits_into_cyclotomics() {
    for n in [4usize, 6, 12, 15] {
        let mut c = vec![0i64; n + 1];
        c[0] = -1;
        c[n] = 1;
        let f = factor_over_q(&QPoly::from_ints(&c));
        let mut degrees: Vec<usize> = f
            .iter()
            .map(|(g, m)| {
                assert_eq!(*m, 1);
                g.deg()
            })
            .collect();
        degrees.sort();
        let mut expect: Vec<usize> = (1..=n).filter(|d| n % d == 0).map(euler_phi).collect();
        expect.sort();
        assert_eq!(degrees, expect, "x^{n} - 1");
    }
}

#[test]
fn wedderburn_splits_along_the_factorization() {
    // (x^2 - 2)(x^2 - 3)(x - 1)
    let f = &(&QPoly::from_ints(&[-2, 0, 1]) * &QPoly::from_ints(&[-3, 0, 1])) * &QPoly::from_ints(&[-1, 1]);
    let c = QMatrix::companion(&f);
    let mut basis = vec![QMatrix::identity(5)];
    for k in 1..5 {
        let next = &basis[k - 1] * &c;
        basis.push(next);
    }
    let w = wedderburn(&basis).unwrap();
    let mut d = w.degrees();
    d.sort();
    assert_eq!(d, vec![1, 2, 2]);
}

/// Partial quotients of `sqrt(n)` by the integer recurrence.
fn sqrt_cf(n: i64) -> (i64, Vec<i64>) {
    let a0 = (n as f64).sqrt().floor() as i64;
    let (mut m, mut d, mut a) = (0i64, 1i64, a0);
    let mut period = Vec::new();
    while a != 2 * a0 {
        m = d * a - m;
        d = (n - m * m) / d;
        a = (a0 + m) / d;
        period.push(a);
    }
    (a0, period)
}

#[test]
fn square_root_expansions() {
    for n in (2..=120).filter(|n| ((*n as f64).sqrt() as i64).pow(2) != *n) {
        let Ok(x) = QuadraticIrrational::sqrt(n) else { continue };
        let cf = cf_expand(&x);
        let (a0, period) = sqrt_cf(n);
        assert_eq!(cf.digit(0), a0, "sqrt {n}");
        // the expansion may start the period at a0 or after it; compare digits
        let digits = cf.digits(1 + 3 * period.len());
        let expect: Vec<i64> =
            std::iter::once(a0).chain(period.iter().cycle().copied().take(3 * period.len())).collect();
        assert_eq!(digits, expect, "sqrt {n}");
    }
}

/// Largest `a_1 a_2 / covol` over boxes blocked on both faces, from points of
/// coefficient size at most `radius`: a plain sweep over `|x_1|`. Boxes that could hold
/// a point outside the enumerated range are skipped.
fn planar_sweep(l: &Lattice, radius: i64) -> f64 {
    let m = l.approx();
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
    let covered = |a1: f64, a2: f64| inv.iter().all(|r| r[0].abs() * a1 + r[1].abs() * a2 <= radius as f64);
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for a in -radius..=radius {
        for b in -radius..=radius {
            if (a, b) != (0, 0) {
                let p = l.point_f64(&[a, b]);
                pts.push((p[0].abs(), p[1].abs()));
            }
        }
    }
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let covol = l.covolume().to_f64();
    let mut best = 0.0f64;
    let mut min2 = f64::INFINITY;
    let mut i = 0;
    while i < pts.len() {
        let a1 = pts[i].0;
        // points strictly inside in coordinate 1 bound coordinate 2
        if min2.is_finite() && a1 > 0.0 && covered(a1, min2) {
            best = best.max(a1 * min2 / covol);
        }
        while i < pts.len() && pts[i].0 == a1 {
            min2 = min2.min(pts[i].1);
            i += 1;
        }
    }
    best
}

fn quadratic(p: i64, s: i64, d: i64, r: i64) -> Lattice {
    quadratic_lattice(&QuadraticIrrational::new(p, s, d, r).unwrap()).unwrap()
}

#[test]
fn planar_constants_match_a_sweep() {
    let cases = [(0, 1, 2, 1), (1, 1, 5, 2), (0, 1, 3, 1), (0, 1, 5, 1), (0, 1, 7, 1), (1, 1, 3, 1), (2, 1, 13, 3)];
    for (p, s, d, r) in cases {
        let l = quadratic(p, s, d, r);
        let sweep = planar_sweep(&l, 60);
        let e = kappa_search(&l, &KappaOptions::default(), &SerialExecutor).unwrap();
        assert!(e.certified);
        assert!((e.kappa_lower - sweep).abs() < 1e-9, "({p}+{s}√{d})/{r}: search {} sweep {sweep}", e.kappa_lower);
    }
}

#[test]
fn closed_forms_for_sqrt2_and_golden() {
    let s2 = kappa_search(&quadratic(0, 1, 2, 1), &KappaOptions::default(), &SerialExecutor).unwrap();
    assert!((s2.kappa_lower - (1.0 + 2f64.sqrt()) / (2.0 * 2f64.sqrt())).abs() < 1e-12);
    let phi = kappa_search(&quadratic(1, 1, 5, 2), &KappaOptions::default(), &SerialExecutor).unwrap();
    assert!((phi.kappa_lower - (5.0 + 5f64.sqrt()) / 10.0).abs() < 1e-12);
}

#[test]
fn lambda_matches_a_direct_minimum() {
    for (p, s, d, r) in [(0, 1, 2, 1), (1, 1, 5, 2), (0, 1, 7, 1), (1, 2, 3, 1)] {
        let l = quadratic(p, s, d, r);
        let mut direct = f64::INFINITY;
        for a in -15i64..=15 {
            for b in -15i64..=15 {
                if (a, b) != (0, 0) {
                    let v = l.point_f64(&[a, b]);
                    direct = direct.min((v[0] * v[1]).abs());
                }
            }
        }
        let est = lambda_inf(&l, 15).unwrap();
        assert!((est.value - direct).abs() < 1e-12 * direct.max(1.0), "{} vs {direct}", est.value);
        assert!(est.exact.is_some());
    }
}

#[test]
fn integer_lattice_has_no_better_box() {
    for n in 2..=4 {
        let e = kappa_search(&Lattice::integer(n), &KappaOptions::default(), &SerialExecutor).unwrap();
        assert_eq!(e.kappa_lower, 1.0);
    }
}
