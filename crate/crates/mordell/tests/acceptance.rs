//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::cmp::Ordering;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use mordell::exec::ThreadedExecutor;
use mordell_core::algebra::{
    algebra_partition, all_partitions, AlgebraElement, EtaleAlgebra, Partition, SubalgebraEmbedding,
};
use mordell_core::exactmath::{q, q_int, to_f64, QMatrix, QPoly, Radical, Rational, RealAlgebraic};
use mordell_core::lattice::{construct_lattice, direct_sum, Lattice, LatticeRow, SymmetricBox};
use mordell_core::mordell::{
    gruber_consistency, is_admissible, kappa_oracle_2d, kappa_search, lambda_inf, KappaOptions, SerialExecutor,
};
use mordell_core::orbits::{
    all_closed_orbits, kernel_lemma_check_with, subalgebra_roundtrip_check, tilde_partition, OrbitContext, OrbitKind,
};
use mordell_core::spectrum2::{cf_expand, interleave_word, quadratic_lattice, QuadraticIrrational};

type Outcome = Result<String, String>;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_mordell")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn poly(c: &[i64]) -> QPoly {
    QPoly::from_ints(c)
}

fn algebra(polys: &[&[i64]]) -> EtaleAlgebra {
    EtaleAlgebra::from_minpolys(&polys.iter().map(|p| poly(p)).collect::<Vec<_>>()).unwrap()
}

/// The lattice of `algebra` and the basis whose flattened coordinates are the rows of `m`.
fn lattice_of(b: &EtaleAlgebra, m: &[Vec<i64>]) -> Lattice {
    let basis: Vec<AlgebraElement> =
        m.iter().map(|r| b.from_coords(&r.iter().map(|&x| q_int(x)).collect::<Vec<_>>()).unwrap()).collect();
    construct_lattice(b, &basis).unwrap()
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// A random integer matrix with nonzero determinant.
fn random_basis(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    loop {
        let m: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let qm = QMatrix::from_rows(m.iter().map(|r| r.iter().map(|&x| q_int(x)).collect()).collect());
        if qm.rank() == n {
            return m;
        }
    }
}

/// A random rational lattice with covolume 1.
fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Lattice {
    loop {
        let m: Vec<Vec<Rational>> =
            (0..n).map(|_| (0..n).map(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect()).collect();
        let det = QMatrix::from_rows(m.clone()).det();
        if det == q_int(0) {
            continue;
        }
        let scale = Radical::new(q_int(1) / abs(&det), n as u32).unwrap();
        let rows = m.iter().map(|r| LatticeRow { scale: scale.clone(), ..LatticeRow::rational(r) }).collect();
        return Lattice::from_rows(rows, None, false).unwrap();
    }
}

/// The lattice of `Z + Z x` for a random real quadratic `x`.
fn random_quadratic(rng: &mut ChaCha8Rng) -> Lattice {
    loop {
        let (p, qq, d, r) =
            (rng.gen_range(-20..=20), rng.gen_range(-5..=5), rng.gen_range(2..=200), rng.gen_range(1..=12));
        if let Ok(x) = QuadraticIrrational::new(p, qq, d, r) {
            return quadratic_lattice(&x).unwrap();
        }
    }
}

fn abs(x: &Rational) -> Rational {
    if *x < q_int(0) {
        -x.clone()
    } else {
        x.clone()
    }
}

fn run_cli(args: &[&str], threads: &str) -> std::process::Output {
    Command::new(bin()).args(args).env("MORDELL_THREADS", threads).output().expect("running the binary")
}

/// `construct` then `classify --format json`, returning the parsed classification.
fn classify_via_cli(desc: &Path, dir: &Path) -> Result<Value, String> {
    let lat = dir.join(format!("{}.lattice.json", desc.file_stem().unwrap().to_string_lossy()));
    let out = run_cli(&["construct", "--input", desc.to_str().unwrap(), "--output", lat.to_str().unwrap()], "1");
    if !out.status.success() {
        return Err(format!("construct failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    let out = run_cli(&["classify", "--input", lat.to_str().unwrap(), "--format", "json"], "1");
    if !out.status.success() {
        return Err(format!("classify failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn rational_power_spec(n: usize, dir: &Path) -> PathBuf {
    let comps = vec![vec!["0", "1"]; n];
    let basis: Vec<Vec<Vec<String>>> =
        (0..n).map(|i| (0..n).map(|j| vec![if i == j { "1".into() } else { "0".into() }]).collect()).collect();
    let p = dir.join(format!("q{n}.json"));
    let v = serde_json::json!({ "algebra": { "components": comps }, "basis": basis });
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

fn criterion_1() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 2..=5 {
        let t = Instant::now();
        let e = kappa_search(&Lattice::integer(n), &KappaOptions::default(), &ThreadedExecutor::new(4))
            .map_err(|e| e.to_string())?;
        let secs = t.elapsed().as_secs_f64();
        let unit = e.witness_box.half_widths().iter().all(|a| a.is_one())
            && e.lattice_box.half_widths().iter().all(|a| a.is_one());
        let good = e.certified && (e.kappa_lower - 1.0).abs() <= 1e-9 && unit && secs < 10.0;
        ok &= good;
        notes.push(format!("n={n}: {} in {secs:.2}s", e.kappa_lower));
    }
    check(ok, notes.join(", "))
}

struct Corpus {
    n: usize,
    kappa: Vec<(f64, Option<RealAlgebraic>)>,
}

fn minkowski_corpus() -> Result<Vec<Corpus>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let opts = KappaOptions { max_evaluations: 4000, ..KappaOptions::default() };
    let mut out = Vec::new();
    for n in [2usize, 3] {
        let lattices: Vec<Lattice> = (0..100).map(|_| random_unimodular(&mut rng, n)).collect();
        let results: Vec<_> = std::thread::scope(|s| {
            let chunks: Vec<_> = lattices
                .chunks(25)
                .map(|c| {
                    s.spawn(move || {
                        c.iter()
                            .map(|l| kappa_search(l, &opts, &SerialExecutor).map(|e| (e.kappa_lower, e.kappa_exact)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            chunks.into_iter().flat_map(|h| h.join().unwrap()).collect()
        });
        let kappa = results.into_iter().collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
        out.push(Corpus { n, kappa });
    }
    Ok(out)
}

fn criterion_2(c: &[Corpus]) -> Outcome {
    let mut bad = 0;
    let mut count = 0;
    for corpus in c {
        for (_, exact) in &corpus.kappa {
            if let Some(k) = exact {
                count += 1;
                if k.cmp_exact(&RealAlgebraic::one()) == Ordering::Greater {
                    bad += 1;
                }
            }
        }
    }
    check(bad == 0 && count == 200, format!("{count} certified, {bad} above 1"))
}

fn criterion_3(c: &[Corpus]) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for corpus in c {
        let bound = (corpus.n as f64).powf(-(corpus.n as f64) / 2.0);
        let worst = corpus.kappa.iter().map(|k| k.0).fold(f64::INFINITY, f64::min);
        ok &= worst >= bound;
        notes.push(format!("n={}: min {worst:.6} vs {bound:.6}", corpus.n));
    }
    check(ok, notes.join(", "))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let opts = KappaOptions::default();
    let exec = ThreadedExecutor::new(4);
    let mut worst = f64::INFINITY;
    let mut split = true;
    // rational planar lattices all have kappa 1, so at least one part is quadratic
    for _ in 0..10 {
        let l1 = random_quadratic(&mut rng);
        let l2 = if rng.gen_bool(0.5) { random_quadratic(&mut rng) } else { random_unimodular(&mut rng, 2) };
        let k1 = kappa_search(&l1, &opts, &exec).map_err(|e| e.to_string())?.kappa_lower;
        let k2 = kappa_search(&l2, &opts, &exec).map_err(|e| e.to_string())?.kappa_lower;
        let sum = direct_sum(&l1, &l2).map_err(|e| e.to_string())?;
        let e = kappa_search(&sum, &opts, &exec).map_err(|e| e.to_string())?;
        let d = e.kappa_lower - k1 * k2;
        if d.abs() > worst.abs() || worst.is_infinite() {
            worst = d;
        }
        let a = e.lattice_box.half_widths();
        let b1 = SymmetricBox::new(a[..2].to_vec()).unwrap();
        let b2 = SymmetricBox::new(a[2..].to_vec()).unwrap();
        split &= e.certified && is_admissible(&l1, &b1).unwrap() && is_admissible(&l2, &b2).unwrap();
    }
    check(
        worst.abs() <= 5e-3 && split,
        format!("largest |kappa(sum) - k1*k2| = {:.3e}, boxes split: {split}", worst.abs()),
    )
}

struct Classified {
    kind: String,
    blocks: usize,
    dim: usize,
    algebra: String,
    equiblock: bool,
    partition: String,
}

fn rows(v: &Value) -> Vec<Classified> {
    v["partitions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| Classified {
            kind: r["kind"].as_str().unwrap().into(),
            blocks: r["blocks"].as_u64().unwrap() as usize,
            dim: r["dim"].as_u64().unwrap() as usize,
            algebra: r["algebra"].as_str().unwrap().into(),
            equiblock: r["equiblock"].as_bool().unwrap(),
            partition: r["partition"].as_str().unwrap().into(),
        })
        .collect()
}

fn criterion_5(dir: &Path, finite: &mut Vec<(String, bool)>) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in [3usize, 4] {
        let v = classify_via_cli(&rational_power_spec(n, dir), dir)?;
        let rs = rows(&v);
        let all_closed = rs.iter().all(|r| r.kind != OrbitKind::NotClosed.as_str());
        let finite_only_trivial = rs.iter().all(|r| (r.kind == OrbitKind::FiniteVolume.as_str()) == (r.blocks == 1));
        let dims = rs.iter().all(|r| r.dim == r.blocks);
        for r in rs.iter().filter(|r| r.kind == OrbitKind::FiniteVolume.as_str()) {
            finite.push((format!("Z^{n} {}", r.partition), r.equiblock));
        }
        ok &= all_closed && finite_only_trivial && dims && rs.len() == [5, 15][n - 3];
        notes.push(format!("Z^{n}: {} partitions", rs.len()));
    }
    check(ok, notes.join(", "))
}

fn criterion_6(dir: &Path, finite: &mut Vec<(String, bool)>) -> Outcome {
    let v = classify_via_cli(&data("qsqrt2_twice.json"), dir)?;
    let rs = rows(&v);
    let expected = [
        ("{{1},{2},{3},{4}}", 4, "Q(√2) ⊕ Q(√2)", OrbitKind::ClosedInfiniteVolume),
        ("{{1,2},{3,4}}", 2, "Q ⊕ Q", OrbitKind::ClosedInfiniteVolume),
        ("{{1,3},{2,4}}", 2, "Q(√2)", OrbitKind::FiniteVolume),
        ("{{1,2,3,4}}", 1, "Q", OrbitKind::FiniteVolume),
    ];
    let mut missing = Vec::new();
    for (p, dim, alg, kind) in expected {
        let hit = rs.iter().find(|r| r.partition == p);
        match hit {
            Some(r) if r.dim == dim && r.algebra == alg && r.kind == kind.as_str() => {}
            Some(r) => missing.push(format!("{p}: got dim {} {} {}", r.dim, r.algebra, r.kind)),
            None => missing.push(format!("{p}: absent")),
        }
    }
    for r in rs.iter().filter(|r| r.kind == OrbitKind::FiniteVolume.as_str()) {
        finite.push((format!("qsqrt2 {}", r.partition), r.equiblock));
    }
    let closed = rs.iter().filter(|r| r.kind != OrbitKind::NotClosed.as_str()).count();
    check(missing.is_empty(), format!("{closed} closed of {}; {}", rs.len(), missing.join("; ")))
}

/// Embedding of the computed `A(P)` into the origin algebra.
fn embedding_of(l: &Lattice, ctx: &OrbitContext, p: &Partition) -> Result<SubalgebraEmbedding, String> {
    let a = ctx.associated_algebra(p).map_err(|e| e.to_string())?;
    let s = QMatrix::from_rows(a.symbolic_basis.clone().ok_or("no symbolic basis")?);
    let t_inv = a.decomposition.to_components.inverse().ok_or("singular decomposition")?;
    let map = QMatrix::from_rows((0..t_inv.nrows()).map(|i| s.vec_mul(t_inv.row(i))).collect());
    let target = l.origin().unwrap().algebra.clone();
    SubalgebraEmbedding::new(a.decomposition.algebra.clone(), target, map).map_err(|e| e.to_string())
}

/// Subalgebra spanned by the component idempotents.
fn idempotent_embedding(b: &EtaleAlgebra) -> SubalgebraEmbedding {
    let r = b.component_count();
    let map = QMatrix::from_rows((0..r).map(|j| b.to_coords(&b.idempotent(j))).collect());
    SubalgebraEmbedding::new(EtaleAlgebra::rational_power(r), b.clone(), map).unwrap()
}

fn criterion_7(finite: &mut Vec<(String, bool)>) -> Outcome {
    let shapes: [&[&[i64]]; 20] = [
        &[&[0, 1], &[0, 1]],
        &[&[-2, 0, 1]],
        &[&[-1, -1, 1]],
        &[&[0, 1], &[0, 1], &[0, 1]],
        &[&[0, 1], &[-2, 0, 1]],
        &[&[1, -3, 0, 1]],
        &[&[-3, 0, 1], &[0, 1]],
        &[&[-2, 0, 1], &[-2, 0, 1]],
        &[&[-2, 0, 1], &[-3, 0, 1]],
        &[&[1, 0, -10, 0, 1]],
        &[&[2, 0, -4, 0, 1]],
        &[&[0, 1], &[0, 1], &[-5, 0, 1]],
        &[&[0, 1], &[1, -3, 0, 1]],
        &[&[-2, 0, 1], &[1, -3, 0, 1]],
        &[&[0, 1], &[0, 1], &[0, 1], &[0, 1], &[0, 1]],
        &[&[-2, 0, 1], &[-2, 0, 1], &[-2, 0, 1]],
        &[&[-5, 0, 1], &[1, -3, 0, 1], &[0, 1]],
        &[&[1, -3, 0, 1], &[1, -3, 0, 1]],
        &[&[-6, 0, 1], &[-1, -1, 1], &[0, 1], &[0, 1]],
        &[&[1, 0, -10, 0, 1], &[-2, 0, 1]],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut partitions = 0;
    let mut failures = Vec::new();
    for (k, shape) in shapes.iter().enumerate() {
        let b = algebra(shape);
        let l = lattice_of(&b, &random_basis(&mut rng, b.dim()));
        let n = l.n();
        let ctx = OrbitContext::new(&l).and_then(|c| c.with_all_pairs()).map_err(|e| e.to_string())?;
        let mut equal = Vec::new();
        for p in all_partitions(n) {
            partitions += 1;
            let c = ctx.classify(&p).map_err(|e| e.to_string())?;
            let dim = c.algebra.dim_q;
            if dim > p.len() {
                failures.push(format!("#{k} {p}: dim {dim} > {}", p.len()));
            }
            if c.kind == OrbitKind::FiniteVolume {
                finite.push((format!("#{k} {p}"), p.is_equiblock()));
            }
            if dim == p.len() {
                let emb = embedding_of(&l, &ctx, &p)?;
                if algebra_partition(&emb).map_err(|e| e.to_string())? != p {
                    failures.push(format!("#{k} {p}: equality but not the partition of A(P)"));
                }
                equal.push(p);
            }
        }
        let known = [
            SubalgebraEmbedding::scalars(b.clone()),
            SubalgebraEmbedding::new(b.clone(), b.clone(), QMatrix::identity(n)).unwrap(),
            idempotent_embedding(&b),
        ];
        for emb in &known {
            let pb = algebra_partition(emb).map_err(|e| e.to_string())?;
            if !equal.contains(&pb) {
                failures.push(format!("#{k} {pb}: algebra partition without equality"));
            }
        }
    }
    check(failures.is_empty(), format!("{} lattices, {partitions} partitions {}", shapes.len(), failures.join("; ")))
}

fn criterion_8(finite: &[(String, bool)]) -> Outcome {
    let bad: Vec<&String> = finite.iter().filter(|f| !f.1).map(|f| &f.0).collect();
    check(bad.is_empty(), format!("{} finite-volume orbits, not equiblock: {bad:?}", finite.len()))
}

fn criterion_9() -> Outcome {
    let t = Instant::now();
    let mut lattices: Vec<(String, Lattice)> =
        [[1i64, 0, -10, 0, 1], [2, 0, -4, 0, 1], [7, 0, -6, 0, 1], [5, 0, -5, 0, 1]]
            .iter()
            .map(|c| {
                let b = algebra(&[c]);
                (poly(c).to_string(), lattice_of(&b, &identity(4)))
            })
            .collect();
    lattices.push(("Q(√2)⊕Q(√2)".into(), lattice_of(&algebra(&[&[-2, 0, 1], &[-2, 0, 1]]), &identity(4))));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, l) in &lattices {
        let mut pairs = Vec::new();
        let mut closed = 0;
        for (p, c) in all_closed_orbits(l).map_err(|e| e.to_string())? {
            closed += 1;
            let tilde = tilde_partition(&p, &c.algebra).map_err(|e| e.to_string())?;
            let a = Arc::new(c.algebra);
            for b1 in p.blocks() {
                for b2 in p.blocks() {
                    if tilde.same_block(b1[0], b2[0]) {
                        pairs.push((p.clone(), a.clone(), b1.clone(), b2.clone()));
                    }
                }
            }
        }
        let mut passed = 0;
        for _ in 0..100 {
            let (p, a, q1, q2) = &pairs[rng.gen_range(0..pairs.len())];
            let k = rng.gen_range(1..=4);
            let mut vs: Vec<Vec<i64>> = (0..k).map(|_| (0..4).map(|_| rng.gen_range(-5..=5)).collect()).collect();
            if rng.gen_bool(0.3) {
                // a dependent vector
                let c: i64 = rng.gen_range(-2..=2);
                let w = vs[0].iter().map(|x| c * x).collect();
                vs.push(w);
            }
            match kernel_lemma_check_with(l, p, a, q1, q2, &vs) {
                Ok(true) => passed += 1,
                Ok(false) => ok = false,
                Err(e) => return Err(format!("{name}: {e}")),
            }
        }
        ok &= passed == 100;
        notes.push(format!("{name}: {passed}/100 over {} block pairs of {closed} closed orbits", pairs.len()));
    }
    let secs = t.elapsed().as_secs_f64();
    ok &= secs < 60.0;
    check(ok, format!("{} in {secs:.1}s", notes.join("; ")))
}

fn criterion_10() -> Outcome {
    let b = algebra(&[&[-2, 0, 1], &[-2, 0, 1]]);
    let l = lattice_of(&b, &identity(4));
    let qs2 = b.components()[0].clone();
    let subs = [
        ("Q", SubalgebraEmbedding::scalars(b.clone()), "{{1,2,3,4}}"),
        ("Q ⊕ Q", idempotent_embedding(&b), "{{1,2},{3,4}}"),
        (
            "Q(√2) diagonal",
            SubalgebraEmbedding::new(
                EtaleAlgebra::new(vec![qs2]),
                b.clone(),
                QMatrix::from_ints(&[&[1, 0, 1, 0], &[0, 1, 0, 1]]),
            )
            .unwrap(),
            "{{1,3},{2,4}}",
        ),
        (
            "Q(√2) ⊕ Q(√2)",
            SubalgebraEmbedding::new(b.clone(), b.clone(), QMatrix::identity(4)).unwrap(),
            "{{1},{2},{3},{4}}",
        ),
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, emb, expect) in subs {
        let p = algebra_partition(&emb).map_err(|e| e.to_string())?;
        let round = subalgebra_roundtrip_check(&l, &emb).map_err(|e| e.to_string())?;
        ok &= round && p.to_string() == expect;
        notes.push(format!("{name} -> {p}: {round}"));
    }
    check(ok, notes.join(", "))
}

fn criterion_11() -> Outcome {
    let l = quadratic_lattice(&QuadraticIrrational::sqrt(2).unwrap()).map_err(|e| e.to_string())?;
    let est = lambda_inf(&l, 50).map_err(|e| e.to_string())?;
    let target = 1.0 / (2.0 * 2f64.sqrt());
    let exact_target = RealAlgebraic::from(Radical::new(q(1, 8), 2).unwrap());
    let exact = est.exact.as_ref().map(|x| x.cmp_exact(&exact_target) == Ordering::Equal).unwrap_or(false);
    check(
        (est.value - target).abs() <= 1e-9 && exact,
        format!("lambda = {} (exact: {})", est.value, est.exact.as_ref().map(|x| x.describe()).unwrap_or_default()),
    )
}

fn planar_lattices() -> Vec<(&'static str, Lattice)> {
    [
        ("√2", QuadraticIrrational::sqrt(2).unwrap()),
        ("φ", QuadraticIrrational::golden()),
        ("√5", QuadraticIrrational::sqrt(5).unwrap()),
    ]
    .into_iter()
    .map(|(n, x)| (n, quadratic_lattice(&x).unwrap()))
    .collect()
}

fn criterion_12() -> Outcome {
    let exec = ThreadedExecutor::new(4);
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, l) in planar_lattices() {
        let s = kappa_search(&l, &KappaOptions::default(), &exec).map_err(|e| e.to_string())?;
        let o10 = kappa_oracle_2d(&l, 10).map_err(|e| e.to_string())?.kappa;
        let o20 = kappa_oracle_2d(&l, 20).map_err(|e| e.to_string())?.kappa;
        ok &= s.certified && (s.kappa_lower - o10).abs() <= 1e-6 && (o20 - o10).abs() <= 1e-9;
        ok &= s.kappa_lower <= 0.99 && o10 <= 0.99;
        notes.push(format!("{name}: search {:.12} oracle {o10:.12}/{o20:.12}", s.kappa_lower));
    }
    check(ok, notes.join(", "))
}

fn criterion_13() -> Outcome {
    let exec = ThreadedExecutor::new(4);
    let mut cases = vec![("Z^2", Lattice::integer(2))];
    cases.extend(planar_lattices());
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, l) in cases {
        let r = gruber_consistency(&l, 50, &KappaOptions::default(), &exec).map_err(|e| e.to_string())?;
        ok &= r.consistent == Some(true);
        notes.push(format!("{name}: {:?}", r.consistent));
    }
    check(ok, notes.join(", "))
}

fn criterion_14() -> Outcome {
    let s2 = cf_expand(&QuadraticIrrational::sqrt(2).unwrap()).to_string();
    let phi = cf_expand(&QuadraticIrrational::golden()).to_string();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut worst = 0f64;
    let mut periodic = true;
    for _ in 0..50 {
        let x = loop {
            let (p, qq, d, r) =
                (rng.gen_range(-20..=20), rng.gen_range(-5..=5), rng.gen_range(2..=200), rng.gen_range(1..=12));
            if let Ok(x) = QuadraticIrrational::new(p, qq, d, r) {
                break (x, (p as f64 + qq as f64 * (d as f64).sqrt()) / r as f64);
            }
        };
        let cf = cf_expand(&x.0);
        periodic &= !cf.period.is_empty();
        let (h, k) = cf.convergents(40).pop().unwrap();
        let v = to_f64(&Rational::new(h, k));
        worst = worst.max((v - x.1).abs() / x.1.abs().max(1.0));
    }
    check(
        s2 == "[1;(2)]" && phi == "[;(1)]" && periodic && worst <= 1e-12,
        format!("√2 = {s2}, φ = {phi}, worst reconstruction error {worst:.2e}"),
    )
}

fn criterion_15(dir: &Path) -> Outcome {
    let args = ["spectrum2", "--family", "cusick:1..20", "--seed", "0"];
    let a = run_cli(&args, "1");
    let b = run_cli(&args, "4");
    let c = run_cli(&args, "4");
    if !a.status.success() {
        return Err(format!("spectrum2 failed: {}", String::from_utf8_lossy(&a.stderr)));
    }
    std::fs::write(dir.join("cusick.csv"), &a.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(a.stdout.as_slice());
    let header = reader.headers().unwrap().clone();
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let recs: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    let mut discs: Vec<String> = recs.iter().map(|r| r[col("discriminant")].to_string()).collect();
    discs.sort();
    discs.dedup();
    let oracle_below = recs.iter().all(|r| r[col("kappa_oracle")].parse::<f64>().unwrap() < 1.0);
    let max_digits: Vec<&str> = recs.iter().map(|r| &r[col("max_digit")]).collect();
    let same = a.stdout == b.stdout && b.stdout == c.stdout;
    check(
        recs.len() == 20 && discs.len() >= 10 && oracle_below && same,
        format!(
            "{} rows, {} discriminants, oracle < 1: {oracle_below}, deterministic: {same}, max digits {}",
            recs.len(),
            discs.len(),
            max_digits.join(" ")
        ),
    )
}

fn criterion_16() -> Outcome {
    let backward: Vec<String> = (1..=5).map(|i| format!("a_{{−{i}}}")).collect();
    let forward: Vec<String> = (0..=5).map(|i| format!("a_{i}")).collect();
    let w = interleave_word(&backward, &forward, 9).map_err(|e| e.to_string())?.join(", ");
    let expected = "a_0, a_{−1}, a_0, a_1, a_{−2}, a_{−1}, a_0, a_1, a_2";
    check(w == expected, w)
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");

    let start = Instant::now();
    let mut finite = Vec::new();
    let corpus = minkowski_corpus();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 kappa(Z^n) = 1", criterion_1()),
        ("2 Minkowski bound", corpus.as_ref().map_err(|e| e.clone()).and_then(|c| criterion_2(c))),
        ("3 universal lower bound", corpus.as_ref().map_err(|e| e.clone()).and_then(|c| criterion_3(c))),
        ("4 product formula", criterion_4()),
        ("5 Z^n classification", criterion_5(dir.path(), &mut finite)),
        ("6 Q(√2)⊕Q(√2) classification", criterion_6(dir.path(), &mut finite)),
        ("7 dimension bound", criterion_7(&mut finite)),
        ("8 equiblock necessity", criterion_8(&finite)),
        ("9 kernel lemma", criterion_9()),
        ("10 subalgebra roundtrip", criterion_10()),
        ("11 lambda of Z[√2]", criterion_11()),
        ("12 planar oracle agreement", criterion_12()),
        ("13 Gruber consistency", criterion_13()),
        ("14 continued fractions", criterion_14()),
        ("15 Cusick scan", criterion_15(dir.path())),
        ("16 word interleaving", criterion_16()),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(m) => println!("PASS  {name}: {m}"),
            Err(m) => {
                failed += 1;
                println!("FAIL  {name}: {m}");
            }
        }
    }
    println!("{} of {} criteria pass ({:.1}s)", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
