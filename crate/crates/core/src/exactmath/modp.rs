//! Polynomials over a small prime field and their factorization
//! (distinct degree plus Cantor-Zassenhaus splitting).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub(crate) type Fp = Vec<u64>;

#[derive(Clone, Copy, Debug)]
pub(crate) struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        debug_assert!(p > 2 && p < (1 << 31));
        Self { p }
    }

    fn mulm(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        let mut r = 1u64;
        let mut b = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mulm(r, b);
            }
            b = self.mulm(b, b);
            e >>= 1;
        }
        r
    }

    pub fn trim(&self, mut a: Fp) -> Fp {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    #[cfg(test)]
    pub fn add(&self, a: &[u64], b: &[u64]) -> Fp {
        let n = a.len().max(b.len());
        let v = (0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % self.p).collect();
        self.trim(v)
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Fp {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + self.p - b.get(i).copied().unwrap_or(0)) % self.p)
            .collect();
        self.trim(v)
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Fp {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut v = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                v[i + j] = (v[i + j] + x * y) % self.p;
            }
        }
        self.trim(v)
    }

    pub fn scale(&self, a: &[u64], c: u64) -> Fp {
        self.trim(a.iter().map(|&x| self.mulm(x, c)).collect())
    }

    pub fn monic(&self, a: &[u64]) -> Fp {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => self.scale(a, self.inv(lc)),
        }
    }

    pub fn div_rem(&self, a: &[u64], b: &[u64]) -> (Fp, Fp) {
        assert!(!b.is_empty(), "division by zero polynomial mod p");
        if a.len() < b.len() {
            return (Vec::new(), a.to_vec());
        }
        let db = b.len() - 1;
        let inv = self.inv(b[db]);
        let mut r = a.to_vec();
        let mut q = vec![0u64; a.len() - db];
        for k in (0..q.len()).rev() {
            let c = self.mulm(r[k + db], inv);
            if c == 0 {
                continue;
            }
            q[k] = c;
            for (j, &y) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + self.p - self.mulm(c, y)) % self.p;
            }
        }
        r.truncate(db);
        (self.trim(q), self.trim(r))
    }

    pub fn rem(&self, a: &[u64], b: &[u64]) -> Fp {
        self.div_rem(a, b).1
    }

    pub fn gcd(&self, a: &[u64], b: &[u64]) -> Fp {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        while !y.is_empty() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn xgcd(&self, a: &[u64], b: &[u64]) -> (Fp, Fp, Fp) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.div_rem(&r0, &r1);
            r0 = core::mem::replace(&mut r1, r);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            s0 = core::mem::replace(&mut s1, s);
            let t = self.sub(&t0, &self.mul(&q, &t1));
            t0 = core::mem::replace(&mut t1, t);
        }
        let inv = self.inv(*r0.last().expect("gcd of zero polynomials"));
        (self.scale(&r0, inv), self.scale(&s0, inv), self.scale(&t0, inv))
    }

    pub fn derivative(&self, a: &[u64]) -> Fp {
        self.trim(a.iter().enumerate().skip(1).map(|(i, &c)| self.mulm(c, i as u64 % self.p)).collect())
    }

    pub fn is_squarefree(&self, a: &[u64]) -> bool {
        self.gcd(a, &self.derivative(a)).len() == 1
    }

    pub fn pow_mod(&self, base: &[u64], e: &BigUint, m: &[u64]) -> Fp {
        let mut acc = vec![1u64];
        let b = self.rem(base, m);
        for i in (0..e.bits()).rev() {
            acc = self.rem(&self.mul(&acc, &acc), m);
            if e.bit(i) {
                acc = self.rem(&self.mul(&acc, &b), m);
            }
        }
        acc
    }

    /// Factors a monic squarefree polynomial into monic irreducibles.
    pub fn factor_squarefree(&self, f: &[u64], seed: u64) -> Vec<Fp> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ self.p);
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree(f) {
            self.equal_degree(&g, d, &mut rng, &mut out);
        }
        out.sort();
        out
    }

    fn distinct_degree(&self, f: &[u64]) -> Vec<(Fp, usize)> {
        let mut out = Vec::new();
        let mut rest = f.to_vec();
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let p = BigUint::from(self.p);
        let mut d = 0;
        while rest.len() > 1 {
            d += 1;
            if 2 * d > rest.len() - 1 {
                out.push((rest.clone(), rest.len() - 1));
                break;
            }
            h = self.pow_mod(&h, &p, &rest);
            let g = self.gcd(&self.sub(&h, &x), &rest);
            if g.len() > 1 {
                rest = self.div_rem(&rest, &g).0;
                h = self.rem(&h, &rest);
                out.push((g, d));
            }
        }
        out
    }

    fn equal_degree(&self, f: &[u64], d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Fp>) {
        let n = f.len() - 1;
        if n == d {
            out.push(f.to_vec());
            return;
        }
        let e = (BigUint::from(self.p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a: Fp = self.trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if a.len() < 2 {
                continue;
            }
            let b = self.sub(&self.pow_mod(&a, &e, f), &[1]);
            let g = self.gcd(&b, f);
            if g.len() > 1 && g.len() < f.len() {
                let h = self.div_rem(f, &g).0;
                self.equal_degree(&g, d, rng, out);
                self.equal_degree(&self.monic(&h), d, rng, out);
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_mod_seven() {
        let f = PrimeField::new(7);
        // (x - 1)(x - 2)(x^2 + 1) over F_7; x^2 + 1 is irreducible since 7 = 3 mod 4.
        let p = f.mul(&f.mul(&[6, 1], &[5, 1]), &[1, 0, 1]);
        let fs = f.factor_squarefree(&p, 1);
        assert_eq!(fs.len(), 3);
        let prod = fs.iter().fold(vec![1u64], |acc, g| f.mul(&acc, g));
        assert_eq!(prod, p);
    }

    #[test]
    fn xgcd_identity() {
        let f = PrimeField::new(11);
        let a = vec![3, 0, 1];
        let b = vec![1, 1];
        let (g, s, t) = f.xgcd(&a, &b);
        assert_eq!(f.add(&f.mul(&s, &a), &f.mul(&t, &b)), g);
        assert_eq!(g, vec![1]);
    }
}
