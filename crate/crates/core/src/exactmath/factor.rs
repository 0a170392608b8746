//! Factorization over the rationals: squarefree decomposition, then
//! modular factorization, Hensel lifting and factor recombination.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modp::{Fp, PrimeField};
use super::poly::QPoly;
use super::Rational;

type ZPoly = Vec<BigInt>;

const PRIMES: [u64; 40] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109,
    113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
];

/// Factors `p` into monic irreducible factors over the rationals, with multiplicities.
///
/// The product of `f^m` over the output equals `p` up to its leading coefficient.
/// Constants yield an empty list. Factors are sorted by degree, then coefficients.
pub fn factor_over_q(p: &QPoly) -> Vec<(QPoly, usize)> {
    let mut out = Vec::new();
    for (f, m) in p.squarefree_decomposition() {
        for g in factor_squarefree(&f) {
            out.push((g, m));
        }
    }
    out.sort_by(|a, b| cmp_poly(&a.0, &b.0).then(a.1.cmp(&b.1)));
    out
}

/// Is `p` irreducible over the rationals (and nonconstant)?
pub fn is_irreducible(p: &QPoly) -> bool {
    if p.is_constant() {
        return false;
    }
    if !p.is_squarefree() {
        return false;
    }
    factor_squarefree(p).len() == 1
}

fn cmp_poly(a: &QPoly, b: &QPoly) -> core::cmp::Ordering {
    a.deg().cmp(&b.deg()).then_with(|| {
        for i in (0..=a.deg()).rev() {
            let c = a.coeff(i).cmp(&b.coeff(i));
            if c != core::cmp::Ordering::Equal {
                return c;
            }
        }
        core::cmp::Ordering::Equal
    })
}

/// Monic irreducible factors of a squarefree polynomial.
pub fn factor_squarefree(f: &QPoly) -> Vec<QPoly> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let mut f = f.monic();
    if f.coeff(0).is_zero() {
        out.push(QPoly::x());
        f = f.div_exact(&QPoly::x());
    }
    if f.deg() <= 1 {
        if f.deg() == 1 {
            out.push(f);
        }
        return out;
    }
    let g = f.primitive_integer();
    for h in zassenhaus(&g) {
        out.push(QPoly::from_bigints(&h).monic());
    }
    out
}

fn reduce_mod_p(g: &[BigInt], p: u64) -> Fp {
    let pb = BigInt::from(p);
    let v: Vec<u64> = g.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    let mut v = v;
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn zassenhaus(g: &ZPoly) -> Vec<ZPoly> {
    let n = g.len() - 1;
    let lc = g[n].clone();
    // Pick the prime with the fewest modular factors among a handful of good ones.
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for &p in PRIMES.iter() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = PrimeField::new(p);
        let gp = reduce_mod_p(g, p);
        if gp.len() != g.len() || !fp.is_squarefree(&gp) {
            continue;
        }
        let facs = fp.factor_squarefree(&fp.monic(&gp), 0x5eed);
        if facs.len() == 1 {
            return vec![g.clone()];
        }
        if best.as_ref().is_none_or(|b| facs.len() < b.1.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 6 {
            break;
        }
    }
    let (p, facs) = best.expect("no suitable prime for modular factorization");

    // Coefficient bound for any factor, times the leading coefficient.
    let norm2: BigInt = g.iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound = (BigInt::one() << n) * norm2 * lc.abs() * 2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk *= &pb;
        k += 1;
    }
    let lifted = hensel_lift(g, &facs, p, k);
    recombine(g.clone(), lifted, &pk)
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    v
}

fn zmod(a: &[BigInt], m: &BigInt) -> ZPoly {
    let mut v: ZPoly = a.iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn fp_to_z(a: &[u64]) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts `g = lc * prod(facs) mod p` to monic factors mod `p^k`.
fn hensel_lift(g: &ZPoly, facs: &[Fp], p: u64, k: u32) -> Vec<ZPoly> {
    let pk = BigInt::from(p).pow(k);
    if facs.len() == 1 {
        let inv = g.last().unwrap().modinv(&pk).expect("leading coefficient invertible");
        return vec![zmod(&g.iter().map(|c| c * &inv).collect::<Vec<_>>(), &pk)];
    }
    let fp = PrimeField::new(p);
    let half = facs.len() / 2;
    let a0 = facs[..half].iter().fold(vec![1u64], |acc, f| fp.mul(&acc, f));
    let lcp = reduce_mod_p(&[g.last().unwrap().clone()], p);
    let b0 = facs[half..].iter().fold(lcp, |acc, f| fp.mul(&acc, f));
    let (a, b) = lift_pair(g, &a0, &b0, &fp, k);
    let mut left = hensel_lift(&a, &facs[..half], p, k);
    let right = hensel_lift(&b, &facs[half..], p, k);
    left.extend(right);
    left
}

/// Linear Hensel lifting of `g = a b mod p` with `a` monic to a factorization mod `p^k`.
fn lift_pair(g: &ZPoly, a0: &Fp, b0: &Fp, fp: &PrimeField, k: u32) -> (ZPoly, ZPoly) {
    let p = BigInt::from(fp.p);
    let (_, _, t) = fp.xgcd(a0, b0);
    let mut a = fp_to_z(a0);
    let mut b = fp_to_z(b0);
    let mut m = p.clone();
    for _ in 1..k {
        let prod = zmul(&a, &b);
        let n = g.len().max(prod.len());
        let diff: ZPoly = (0..n)
            .map(|i| {
                let x = g.get(i).cloned().unwrap_or_default() - prod.get(i).cloned().unwrap_or_default();
                debug_assert!((&x % &m).is_zero());
                x / &m
            })
            .collect();
        let e = reduce_mod_p(&diff, fp.p);
        let ap = reduce_mod_p(&a, fp.p);
        let bp = reduce_mod_p(&b, fp.p);
        let da = fp.rem(&fp.mul(t.as_slice(), &e), &ap);
        let (db, r) = fp.div_rem(&fp.sub(&e, &fp.mul(&da, &bp)), &ap);
        debug_assert!(r.is_empty());
        let next = &m * &p;
        a = add_scaled(&a, &da, &m, &next);
        b = add_scaled(&b, &db, &m, &next);
        m = next;
    }
    (a, b)
}

fn add_scaled(a: &[BigInt], d: &[u64], m: &BigInt, modulus: &BigInt) -> ZPoly {
    let n = a.len().max(d.len());
    let v: ZPoly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + m * BigInt::from(d.get(i).copied().unwrap_or(0)))
        .collect();
    zmod(&v, modulus)
}

fn primitive(mut v: ZPoly) -> ZPoly {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    let mut c = BigInt::zero();
    for x in &v {
        c = c.gcd(x);
    }
    if v.last().is_some_and(|x| x.sign() == Sign::Minus) {
        c = -c;
    }
    if !c.is_zero() {
        for x in v.iter_mut() {
            *x = &*x / &c;
        }
    }
    v
}

fn to_qpoly(v: &[BigInt]) -> QPoly {
    QPoly::new(v.iter().cloned().map(Rational::from_integer).collect())
}

fn recombine(mut g: ZPoly, mut lifted: Vec<ZPoly>, pk: &BigInt) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = false;
        let r = lifted.len();
        let mut idx: Vec<usize> = (0..s).collect();
        'combos: loop {
            let lc = g.last().unwrap().clone();
            let mut cand = vec![lc];
            for &i in &idx {
                cand = zmul(&cand, &lifted[i]);
                cand = cand.iter().map(|c| c.mod_floor(pk)).collect();
            }
            let cand = primitive(cand.iter().map(|c| symmetric(c, pk)).collect());
            let const_ok = g[0].is_zero() || cand[0].is_zero() || (&g[0] % &cand[0]).is_zero();
            if const_ok {
                let (quo, rem) = to_qpoly(&g).div_rem(&to_qpoly(&cand));
                if rem.is_zero() {
                    out.push(cand);
                    g = primitive(quo.primitive_integer());
                    for &i in idx.iter().rev() {
                        lifted.remove(i);
                    }
                    found = true;
                    break 'combos;
                }
            }
            // Next combination of `s` indices out of `r`.
            let mut i = s;
            loop {
                if i == 0 {
                    break 'combos;
                }
                i -= 1;
                if idx[i] < r - s + i {
                    idx[i] += 1;
                    for j in i + 1..s {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
        if !found {
            s += 1;
        }
    }
    if g.len() > 1 {
        out.push(g);
    }
    out
}
