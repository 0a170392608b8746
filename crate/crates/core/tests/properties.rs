use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use mordell_core::algebra::{AlgebraElement, EtaleAlgebra, Partition};
use mordell_core::exactmath::{
    factor_over_q, isolate_real_roots, q, q_int, refine, QMatrix, QPoly, Radical, Rational, RealAlgebraic,
};
use mordell_core::lattice::{construct_lattice, direct_sum, enumerate_in_box, is_decomposable, Lattice, SymmetricBox};
use mordell_core::mordell::{is_admissible, kappa_oracle_2d, kappa_search, lambda_inf, KappaOptions, SerialExecutor};
use mordell_core::orbits::{associated_algebra, classify_orbit, OrbitKind};
use mordell_core::spectrum2::{cf_expand, interleave_word, quadratic_lattice, QuadraticIrrational};

/// Totally real algebras of dimension at most 4, by minimal polynomials.
const SHAPES: &[&[&[i64]]] = &[
    &[&[-2, 0, 1]],
    &[&[-1, -3, 0, 1]],
    &[&[0, 1], &[-5, 0, 1]],
    &[&[0, 1], &[0, 1], &[0, 1]],
    &[&[-2, 0, 1], &[-2, 0, 1]],
    &[&[-3, 0, 1], &[0, 1], &[0, 1]],
    &[&[1, 0, -4, 0, 1]],
];

fn shape(k: usize) -> EtaleAlgebra {
    let polys: Vec<QPoly> = SHAPES[k].iter().map(|p| QPoly::from_ints(p)).collect();
    EtaleAlgebra::from_minpolys(&polys).unwrap()
}

fn shape_dim(k: usize) -> usize {
    SHAPES[k].iter().map(|p| p.len() - 1).sum()
}

fn int_rows(m: &[Vec<i64>]) -> QMatrix {
    QMatrix::from_rows(m.iter().map(|r| r.iter().map(|&x| q_int(x)).collect()).collect())
}

fn element(b: &EtaleAlgebra, c: &[i64]) -> AlgebraElement {
    b.from_coords(&c.iter().map(|&x| q_int(x)).collect::<Vec<_>>()).unwrap()
}

fn algebra_lattice(k: usize, m: &[Vec<i64>]) -> Lattice {
    let b = shape(k);
    let basis: Vec<AlgebraElement> = m.iter().map(|r| element(&b, r)).collect();
    construct_lattice(&b, &basis).unwrap()
}

/// A shape index with a full-rank integer basis of its algebra.
fn shaped_basis() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (0..SHAPES.len())
        .prop_flat_map(|k| {
            let n = shape_dim(k);
            (Just(k), prop::collection::vec(prop::collection::vec(-3i64..=3, n), n))
        })
        .prop_filter("full rank", |(_, m)| int_rows(m).rank() == m.len())
}

fn partition_of(labels: &[usize]) -> Partition {
    Partition::from_labels(labels)
}

fn quadratic() -> impl Strategy<Value = QuadraticIrrational> {
    (-5i64..=5, prop_oneof![Just(-1i64), Just(1)], 2i64..=30)
        .prop_filter_map("square radicand", |(p, s, d)| QuadraticIrrational::new(p, s, d, 1).ok())
}

fn flat(m: &QMatrix) -> Vec<Rational> {
    m.as_slice().to_vec()
}

/// Is every matrix of `more` in the rational span of `basis`?
fn in_span(basis: &[QMatrix], more: &[QMatrix]) -> bool {
    let rows: Vec<Vec<Rational>> = basis.iter().map(flat).collect();
    let r = if rows.is_empty() { 0 } else { QMatrix::from_rows(rows.clone()).rank() };
    let mut all = rows;
    all.extend(more.iter().map(flat));
    QMatrix::from_rows(all).rank() == r
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_are_reduced(a in -1000i64..1000, b in 1i64..1000, k in 1i64..50) {
        let x = q(a * k, b * k);
        prop_assert_eq!(&x, &q(a, b));
        prop_assert!(x.numer().gcd(x.denom()) == BigInt::from(1) || a == 0);
        prop_assert!(*x.denom() > BigInt::from(0));
    }

    #[test]
    fn isolated_roots_enclose_zeros(c in prop::collection::vec(-6i64..=6, 2..7)) {
        let p = QPoly::from_ints(&c);
        prop_assume!(!p.is_constant());
        let eps = q(1, 1_000_000_000_000);
        for r in isolate_real_roots(&p).unwrap() {
            let r = refine(&r, &eps).unwrap();
            prop_assert!(r.width() <= eps);
            let (lo, hi) = p.eval_interval(&r.lo, &r.hi);
            prop_assert!(lo <= q_int(0) && hi >= q_int(0));
        }
    }

    #[test]
    fn factors_multiply_back(
        a in prop::collection::vec(-4i64..=4, 1..4),
        b in prop::collection::vec(-4i64..=4, 1..4),
        e in 1u32..3,
    ) {
        let (fa, fb) = (QPoly::from_ints(&a), QPoly::from_ints(&b));
        prop_assume!(!fa.is_zero() && !fb.is_zero());
        let p = &fa.pow(e) * &fb;
        let mut back = QPoly::constant(p.leading());
        for (f, m) in factor_over_q(&p) {
            back = &back * &f.pow(m as u32);
        }
        prop_assert_eq!(back, p);
    }

    #[test]
    fn real_algebraic_order_matches_floats(a in -50i64..50, b in 1i64..20, d in 2i64..40) {
        let x = RealAlgebraic::sqrt(&q_int(d));
        let y = RealAlgebraic::Rational(q(a, b));
        let (fx, fy) = ((d as f64).sqrt(), a as f64 / b as f64);
        prop_assume!((fx - fy).abs() > 1e-9);
        prop_assert_eq!(x.cmp_exact(&y), fx.partial_cmp(&fy).unwrap());
        prop_assert_eq!(x.sub(&y).sign(), if fx > fy { 1 } else { -1 });
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hom_values_are_multiplicative(
        k in 0..SHAPES.len(),
        a in prop::collection::vec(-4i64..=4, 4),
        c in prop::collection::vec(-4i64..=4, 4),
    ) {
        let b = shape(k);
        let n = b.dim();
        let (x, y) = (element(&b, &a[..n]), element(&b, &c[..n]));
        let (hx, hy, hxy) = (b.hom_values(&x), b.hom_values(&y), b.hom_values(&b.mul(&x, &y)));
        for i in 0..n {
            prop_assert_eq!(hxy[i].cmp_exact(&hx[i].mul(&hy[i])), Ordering::Equal);
        }
    }

    #[test]
    fn component_norms_are_rational_products(k in 0..SHAPES.len(), a in prop::collection::vec(-4i64..=4, 4)) {
        let b = shape(k);
        let x = element(&b, &a[..b.dim()]);
        let h = b.hom_values(&x);
        for comp in 0..b.component_count() {
            // the product over the embeddings of one component
            let mut prod = RealAlgebraic::one();
            for (i, t) in b.hom_table().iter().enumerate() {
                if t.0 == comp {
                    prod = prod.mul(&h[i]);
                }
            }
            let norm = b.component_norm(&x, comp);
            prop_assert_eq!(prod.as_rational(), Some(norm));
        }
    }

    #[test]
    fn constructed_lattices_are_unimodular((k, m) in shaped_basis()) {
        let l = algebra_lattice(k, &m);
        prop_assert_eq!(l.covolume().cmp_exact(&RealAlgebraic::one()), Ordering::Equal);
    }

    #[test]
    fn box_points_are_symmetric_and_monotone(
        (k, m) in shaped_basis(),
        w in prop::collection::vec(1i64..=8, 4),
        grow in 1i64..=4,
    ) {
        let l = algebra_lattice(k, &m);
        let n = l.n();
        let small: Vec<Rational> = w[..n].iter().map(|&x| q(x, 4)).collect();
        let large: Vec<Rational> = small.iter().map(|x| x * q(grow + 4, 4)).collect();
        let p = enumerate_in_box(&l, &SymmetricBox::from_rationals(&small).unwrap(), false).unwrap();
        let big = enumerate_in_box(&l, &SymmetricBox::from_rationals(&large).unwrap(), false).unwrap();
        for pt in &p.points {
            let neg: Vec<i64> = pt.coeffs.iter().map(|c| -c).collect();
            prop_assert!(p.contains(&neg));
            prop_assert!(big.contains(&pt.coeffs));
        }
    }

    #[test]
    fn single_field_vectors_have_no_zero_coordinate(
        k in prop::sample::select(vec![0usize, 1, 6]),
        c in prop::collection::vec(-5i64..=5, 4),
    ) {
        let n = shape_dim(k);
        let l = algebra_lattice(k, &(0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect::<Vec<_>>());
        prop_assume!(c[..n].iter().any(|&x| x != 0));
        for x in l.point(&c[..n]) {
            prop_assert_ne!(x.sign(), 0);
        }
    }

    #[test]
    fn direct_sums_decompose((k, m) in shaped_basis(), x in quadratic()) {
        prop_assume!(shape_dim(k) <= 3);
        let l1 = algebra_lattice(k, &m);
        let l2 = quadratic_lattice(&x).unwrap();
        let s = direct_sum(&l1, &l2).unwrap();
        let d = is_decomposable(&s, 2).unwrap();
        prop_assert!(d.is_some());
        let d = d.unwrap();
        prop_assert_eq!(d.first.len() + d.second.len(), s.n());
        // the split found is at least as fine as the given one
        let n1 = l1.n();
        let inside = d.subset.iter().all(|&i| i < n1) || d.subset.iter().all(|&i| i >= n1);
        prop_assert!(inside);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn associated_algebra_is_a_small_closed_algebra(
        (k, m) in shaped_basis(),
        labels in prop::collection::vec(0usize..4, 4),
        merge in prop::collection::vec(0usize..4, 4),
    ) {
        let l = algebra_lattice(k, &m);
        let n = l.n();
        let p = partition_of(&labels[..n]);
        let coarse = partition_of(&labels[..n].iter().map(|&x| merge[x]).collect::<Vec<_>>());
        prop_assert!(p.refines(&coarse));
        let a = associated_algebra(&l, &p).unwrap();
        prop_assert!(a.dim_q <= p.len());
        prop_assert_eq!(a.q_basis.len(), a.dim_q);
        for x in &a.q_basis {
            for y in &a.q_basis {
                prop_assert!(in_span(&a.q_basis, &[x * y]));
            }
        }
        let ac = associated_algebra(&l, &coarse).unwrap();
        prop_assert!(in_span(&a.q_basis, &ac.q_basis));
        let degrees: usize = a.decomposition.degrees().iter().sum();
        prop_assert_eq!(degrees, a.dim_q);
    }

    #[test]
    fn wedderburn_idempotents_split_the_unit((k, m) in shaped_basis(), labels in prop::collection::vec(0usize..4, 4)) {
        let l = algebra_lattice(k, &m);
        let p = partition_of(&labels[..l.n()]);
        let a = associated_algebra(&l, &p).unwrap();
        let e = a.decomposition.idempotent_matrices(&a.q_basis);
        let n = l.n();
        let mut sum = QMatrix::zeros(n, n);
        for (i, x) in e.iter().enumerate() {
            sum = &sum + x;
            for (j, y) in e.iter().enumerate() {
                let xy = x * y;
                if i == j {
                    prop_assert!(xy == *x);
                } else {
                    prop_assert!(xy.is_zero());
                }
            }
        }
        prop_assert!(sum == QMatrix::identity(n));
    }

    #[test]
    fn finite_volume_orbits_are_equiblock((k, m) in shaped_basis(), labels in prop::collection::vec(0usize..4, 4)) {
        let l = algebra_lattice(k, &m);
        let p = partition_of(&labels[..l.n()]);
        let c = classify_orbit(&l, &p).unwrap();
        if c.kind == OrbitKind::FiniteVolume {
            prop_assert!(p.is_equiblock());
        }
        // an algebra lattice has a closed orbit under the full diagonal group
        let c0 = classify_orbit(&l, &Partition::singletons(l.n())).unwrap();
        prop_assert!(c0.kind.is_closed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn estimates_carry_certificates(x in quadratic()) {
        let l = quadratic_lattice(&x).unwrap();
        let opts = KappaOptions { max_evaluations: 4000, ..KappaOptions::default() };
        let e = kappa_search(&l, &opts, &SerialExecutor).unwrap();
        prop_assert!(e.certified);
        prop_assert!(e.kappa_lower <= 1.0);
        prop_assert!(Radical::product(&e.normalizer).is_one());
        let moved = l.apply_diagonal(&e.normalizer).unwrap();
        prop_assert!(is_admissible(&moved, &e.witness_box).unwrap());
        prop_assert!(is_admissible(&l, &e.lattice_box).unwrap());
    }

    #[test]
    fn estimates_are_invariant_under_the_diagonal(x in quadratic(), a in 1i64..=9, b in 1i64..=9) {
        let l = quadratic_lattice(&x).unwrap();
        let r = Radical::rational(q(a, b)).unwrap();
        let moved = l.apply_diagonal(&[r.clone(), r.inv()]).unwrap();
        let opts = KappaOptions::default();
        let k0 = kappa_search(&l, &opts, &SerialExecutor).unwrap().kappa_lower;
        let k1 = kappa_search(&moved, &opts, &SerialExecutor).unwrap().kappa_lower;
        prop_assert!((k0 - k1).abs() <= 1e-6, "{} vs {}", k0, k1);
    }

    #[test]
    fn planar_oracle_grows_with_radius_and_matches_search(x in quadratic()) {
        let l = quadratic_lattice(&x).unwrap();
        let o: Vec<f64> = [5, 10, 20, 40].iter().map(|&r| kappa_oracle_2d(&l, r).unwrap().kappa).collect();
        for w in o.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        let e = kappa_search(&l, &KappaOptions::default(), &SerialExecutor).unwrap();
        prop_assert!((e.kappa_lower - o[3]).abs() <= 1e-6, "search {} oracle {}", e.kappa_lower, o[3]);
    }

    #[test]
    fn quadratic_lambda_is_positive_and_stable(x in quadratic()) {
        let l = quadratic_lattice(&x).unwrap();
        let a = lambda_inf(&l, 20).unwrap();
        let b = lambda_inf(&l, 40).unwrap();
        prop_assert!(a.value > 0.0);
        prop_assert_eq!(a.value, b.value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn convergents_approach_at_the_classical_rate(p in -20i64..=20, s in -5i64..=5, d in 2i64..=200, r in 1i64..=12) {
        let Ok(x) = QuadraticIrrational::new(p, s, d, r) else { return Ok(()) };
        let cf = cf_expand(&x);
        prop_assert!(!cf.period.is_empty());
        let (xp, xs, xd, xr) = x.parts();
        let value = RealAlgebraic::sqrt(&Rational::from_integer(xd.clone()))
            .mul(&RealAlgebraic::Rational(Rational::from_integer(xs.clone())))
            .add(&RealAlgebraic::Rational(Rational::from_integer(xp.clone())))
            .div(&RealAlgebraic::Rational(Rational::from_integer(xr.clone())));
        let conv = cf.convergents(12);
        let mut last: Option<RealAlgebraic> = None;
        for w in conv.windows(2) {
            let (h, k) = &w[0];
            let k1 = &w[1].1;
            let err = value.sub(&RealAlgebraic::Rational(Rational::new(h.clone(), k.clone()))).abs();
            let bound = RealAlgebraic::Rational(Rational::new(BigInt::from(1), k * k1));
            prop_assert_ne!(err.cmp_exact(&bound), Ordering::Greater);
            if let Some(prev) = &last {
                prop_assert_eq!(err.cmp_exact(prev), Ordering::Less);
            }
            last = Some(err);
        }
    }

    #[test]
    fn interleaving_lists_growing_windows(nb in 0usize..12, nf in 1usize..12, depth in 0usize..40) {
        let backward: Vec<i64> = (1..=nb as i64).map(|i| -i).collect();
        let forward: Vec<i64> = (0..nf as i64).collect();
        match interleave_word(&backward, &forward, depth) {
            Ok(w) => {
                prop_assert_eq!(w.len(), depth);
                for (t, &a) in w.iter().enumerate() {
                    // block j starts at j^2 and lists a_{-j}, ..., a_j
                    let j = (t as f64).sqrt() as i64;
                    let j = if (j + 1) * (j + 1) <= t as i64 { j + 1 } else { j };
                    prop_assert_eq!(a, t as i64 - j * j - j);
                }
            }
            Err(_) => {
                // the last block reached needs a_{-j} or a_j beyond the given digits
                let j = ((depth as f64).sqrt().ceil() as usize).saturating_sub(1);
                prop_assert!(j > nb || j >= nf);
            }
        }
    }
}
