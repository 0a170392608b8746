//! Finite direct sums of totally real number fields and their real homomorphisms.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::compositum::{compositum, compositum2, Compositum};
use super::number_field::{EmbeddedField, FieldValue, NumberFieldR};
use super::partition::Partition;
use crate::error::{Error, Result};
use crate::exactmath::{to_f64, QMatrix, QPoly, Rational, RealAlgebraic};

/// `B = F_1 + ... + F_r` with an enumeration of its `n = sum d_j` real homomorphisms.
#[derive(Clone, Debug)]
pub struct EtaleAlgebra {
    components: Vec<Arc<NumberFieldR>>,
    hom_table: Vec<(usize, usize)>,
    offsets: Vec<usize>,
}

/// An element of an étale algebra: one power-basis coordinate vector per component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    pub parts: Vec<Vec<Rational>>,
}

impl EtaleAlgebra {
    /// Components in the given order, homomorphisms enumerated component by component
    /// with embeddings in ascending order.
    pub fn new(components: Vec<Arc<NumberFieldR>>) -> Self {
        let hom_table = components.iter().enumerate().flat_map(|(j, f)| (0..f.degree()).map(move |k| (j, k))).collect();
        Self::assemble(components, hom_table)
    }

    /// Components with an explicit homomorphism enumeration.
    pub fn with_hom_table(components: Vec<Arc<NumberFieldR>>, hom_table: Vec<(usize, usize)>) -> Result<Self> {
        let n: usize = components.iter().map(|f| f.degree()).sum();
        if hom_table.len() != n {
            return Err(Error::InvalidInput(format!("hom table has {} entries, expected {n}", hom_table.len())));
        }
        let mut seen: Vec<Vec<bool>> = components.iter().map(|f| vec![false; f.degree()]).collect();
        for &(j, k) in &hom_table {
            if j >= components.len() || k >= components[j].degree() || seen[j][k] {
                return Err(Error::InvalidInput(format!("hom table entry ({j}, {k}) is invalid or repeated")));
            }
            seen[j][k] = true;
        }
        Ok(Self::assemble(components, hom_table))
    }

    /// Builds the algebra from defining polynomials.
    pub fn from_minpolys(polys: &[QPoly]) -> Result<Self> {
        let mut comps = Vec::with_capacity(polys.len());
        for p in polys {
            comps.push(Arc::new(NumberFieldR::new(p)?));
        }
        Ok(Self::new(comps))
    }

    /// `Q^n`.
    pub fn rational_power(n: usize) -> Self {
        Self::new((0..n).map(|_| NumberFieldR::rationals()).collect())
    }

    fn assemble(components: Vec<Arc<NumberFieldR>>, hom_table: Vec<(usize, usize)>) -> Self {
        let mut offsets = Vec::with_capacity(components.len());
        let mut o = 0;
        for f in &components {
            offsets.push(o);
            o += f.degree();
        }
        Self { components, hom_table, offsets }
    }

    pub fn dim(&self) -> usize {
        self.hom_table.len()
    }

    pub fn components(&self) -> &[Arc<NumberFieldR>] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn hom_table(&self) -> &[(usize, usize)] {
        &self.hom_table
    }

    /// Offset of component `j` in flattened coordinates.
    pub fn offset(&self, j: usize) -> usize {
        self.offsets[j]
    }

    pub fn is_field(&self) -> bool {
        self.components.len() == 1
    }

    /// Homomorphism `i` as an embedded field (component plus embedding).
    pub fn embedded(&self, i: usize) -> EmbeddedField {
        let (j, k) = self.hom_table[i];
        EmbeddedField::new(self.components[j].clone(), k)
    }

    pub fn unit(&self) -> AlgebraElement {
        AlgebraElement { parts: self.components.iter().map(|f| f.one()).collect() }
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement { parts: self.components.iter().map(|f| f.zero()).collect() }
    }

    /// The idempotent `1_j`.
    pub fn idempotent(&self, j: usize) -> AlgebraElement {
        let mut e = self.zero();
        e.parts[j] = self.components[j].one();
        e
    }

    /// Element with the same rational value in every component.
    pub fn from_rational(&self, x: &Rational) -> AlgebraElement {
        AlgebraElement { parts: self.components.iter().map(|f| f.from_rational(x)).collect() }
    }

    /// Flattened rational coordinates.
    pub fn to_coords(&self, a: &AlgebraElement) -> Vec<Rational> {
        a.parts.iter().flatten().cloned().collect()
    }

    pub fn from_coords(&self, c: &[Rational]) -> Result<AlgebraElement> {
        if c.len() != self.dim() {
            return Err(Error::InvalidInput(format!("expected {} coordinates, got {}", self.dim(), c.len())));
        }
        Ok(AlgebraElement {
            parts: self
                .components
                .iter()
                .enumerate()
                .map(|(j, f)| c[self.offsets[j]..self.offsets[j] + f.degree()].to_vec())
                .collect(),
        })
    }

    /// Checks part lengths.
    pub fn check(&self, a: &AlgebraElement) -> Result<()> {
        if a.parts.len() != self.components.len()
            || a.parts.iter().zip(&self.components).any(|(p, f)| p.len() != f.degree())
        {
            return Err(Error::InvalidInput("algebra element does not match the algebra".into()));
        }
        Ok(())
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        self.zip(a, b, |f, x, y| f.add(x, y))
    }

    pub fn sub(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        self.zip(a, b, |f, x, y| f.sub(x, y))
    }

    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        self.zip(a, b, |f, x, y| f.mul(x, y))
    }

    pub fn scale(&self, a: &AlgebraElement, c: &Rational) -> AlgebraElement {
        AlgebraElement { parts: a.parts.iter().zip(&self.components).map(|(x, f)| f.scale(x, c)).collect() }
    }

    fn zip(
        &self,
        a: &AlgebraElement,
        b: &AlgebraElement,
        op: impl Fn(&NumberFieldR, &[Rational], &[Rational]) -> Vec<Rational>,
    ) -> AlgebraElement {
        AlgebraElement {
            parts: self.components.iter().enumerate().map(|(j, f)| op(f, &a.parts[j], &b.parts[j])).collect(),
        }
    }

    /// Matrix of multiplication by `a` on flattened coordinates.
    pub fn mult_matrix(&self, a: &AlgebraElement) -> QMatrix {
        let n = self.dim();
        let mut m = QMatrix::zeros(n, n);
        for (j, f) in self.components.iter().enumerate() {
            let mj = f.mult_matrix(&a.parts[j]);
            let o = self.offsets[j];
            for r in 0..f.degree() {
                for c in 0..f.degree() {
                    m[(o + r, o + c)] = mj[(r, c)].clone();
                }
            }
        }
        m
    }

    /// `sigma_i(a)` for every homomorphism, exactly.
    pub fn hom_values(&self, a: &AlgebraElement) -> Vec<RealAlgebraic> {
        (0..self.dim())
            .map(|i| {
                let (j, _) = self.hom_table[i];
                RealAlgebraic::Field(FieldValue::new(self.embedded(i), a.parts[j].clone()))
            })
            .collect()
    }

    pub fn hom_values_f64(&self, a: &AlgebraElement) -> Vec<f64> {
        self.hom_table.iter().map(|&(j, k)| self.components[j].value_f64(&a.parts[j], k).0).collect()
    }

    /// Exact sign of `sigma_i(a)`.
    pub fn hom_sign(&self, a: &AlgebraElement, i: usize) -> i8 {
        let (j, k) = self.hom_table[i];
        self.components[j].sign_at(&a.parts[j], k)
    }

    /// Norm of component `j`'s part.
    pub fn component_norm(&self, a: &AlgebraElement, j: usize) -> Rational {
        self.components[j].norm(&a.parts[j])
    }

    /// A rational matrix `C` with `C x = 0` iff `sigma_i(x) = sigma_j(x)` for flattened `x`.
    pub fn pair_constraint(&self, i: usize, j: usize) -> Result<QMatrix> {
        let n = self.dim();
        let (ci, ki) = self.hom_table[i];
        let (cj, kj) = self.hom_table[j];
        if i == j || (ci == cj && ki == kj) {
            return Ok(QMatrix::zeros(1, n));
        }
        let (k, pi, pj) = compositum2(&self.embedded(i), &self.embedded(j))?;
        let d = k.degree();
        let f = &k.field;
        let mut m = QMatrix::zeros(d, n);
        let mut add_powers = |comp: usize, img: &[Rational], sign: i64| {
            let mut pw = f.one();
            for t in 0..self.components[comp].degree() {
                for r in 0..d {
                    m[(r, self.offsets[comp] + t)] += &pw[r] * Rational::from_integer(sign.into());
                }
                pw = f.mul(&pw, img);
            }
        };
        add_powers(ci, &pi, 1);
        add_powers(cj, &pj, -1);
        Ok(m)
    }

    /// All pair constraints, indexed by `(i, j)` with `i < j`.
    pub fn pair_constraints(&self) -> Result<PairConstraints> {
        let n = self.dim();
        let mut table = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
        for i in 0..n {
            for j in i + 1..n {
                table.push(self.pair_constraint(i, j)?);
            }
        }
        Ok(PairConstraints { n, table })
    }

    /// The compositum of every embedding in the hom table.
    pub fn full_compositum(&self) -> Result<Compositum> {
        let fields: Vec<EmbeddedField> = (0..self.dim()).map(|i| self.embedded(i)).collect();
        compositum(&fields)
    }

    /// `Q(√2) ⊕ Q(√2)` style description.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.components.iter().map(|f| f.describe()).collect();
        if parts.is_empty() {
            return "0".into();
        }
        parts.join(" ⊕ ")
    }

    /// Floating homomorphism values of a flattened coordinate vector.
    pub fn hom_values_coords_f64(&self, c: &[Rational]) -> Vec<f64> {
        self.hom_table
            .iter()
            .map(|&(j, k)| {
                let o = self.offsets[j];
                self.components[j].value_f64(&c[o..o + self.components[j].degree()], k).0
            })
            .collect()
    }
}

/// Precomputed pair constraints of an algebra.
#[derive(Clone, Debug)]
pub struct PairConstraints {
    n: usize,
    table: Vec<QMatrix>,
}

impl PairConstraints {
    pub fn get(&self, i: usize, j: usize) -> &QMatrix {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        assert!(i != j && j < self.n);
        // row-major upper triangle
        let idx = i * (2 * self.n - i - 1) / 2 + (j - i - 1);
        &self.table[idx]
    }

    /// Partition of the homomorphisms by agreement on every vector in `vectors`.
    pub fn partition_of(&self, vectors: &[Vec<Rational>]) -> Partition {
        let mut labels: Vec<usize> = (0..self.n).collect();
        for i in 0..self.n {
            if labels[i] != i {
                continue;
            }
            for j in i + 1..self.n {
                if labels[j] == j && self.agree_on(i, j, vectors) {
                    labels[j] = i;
                }
            }
        }
        Partition::from_labels(&labels)
    }

    /// Do `sigma_i` and `sigma_j` agree on every flattened vector in `vectors`?
    pub fn agree_on(&self, i: usize, j: usize, vectors: &[Vec<Rational>]) -> bool {
        if i == j {
            return true;
        }
        let c = self.get(i, j);
        vectors.iter().all(|v| c.mul_vec(v).iter().all(Zero::is_zero))
    }
}

impl AlgebraElement {
    pub fn new(parts: Vec<Vec<Rational>>) -> Self {
        Self { parts }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().flatten().all(Zero::is_zero)
    }
}

/// Approximate value helper used by diagnostics.
pub fn coords_f64(c: &[Rational]) -> Vec<f64> {
    c.iter().map(to_f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{q_int, QPoly};

    fn qsqrt2_twice() -> EtaleAlgebra {
        let p = QPoly::from_ints(&[-2, 0, 1]);
        EtaleAlgebra::from_minpolys(&[p.clone(), p]).unwrap()
    }

    #[test]
    fn hom_values_examples() {
        let b = EtaleAlgebra::rational_power(2);
        let a = AlgebraElement::new(vec![vec![q_int(2)], vec![q_int(3)]]);
        let v = b.hom_values(&a);
        assert_eq!(v, vec![RealAlgebraic::from_int(2), RealAlgebraic::from_int(3)]);

        let k = EtaleAlgebra::from_minpolys(&[QPoly::from_ints(&[-2, 0, 1])]).unwrap();
        let s = AlgebraElement::new(vec![vec![q_int(0), q_int(1)]]);
        let v = k.hom_values(&s);
        let r2 = RealAlgebraic::sqrt(&q_int(2));
        assert_eq!(v, vec![r2.neg(), r2.clone()]);

        let b = qsqrt2_twice();
        let a = AlgebraElement::new(vec![vec![q_int(0), q_int(1)], vec![q_int(1), q_int(1)]]);
        let v = b.hom_values(&a);
        let one = RealAlgebraic::one();
        assert_eq!(v, vec![r2.neg(), r2.clone(), one.sub(&r2), one.add(&r2)]);
    }

    #[test]
    fn pair_constraints_detect_equal_restrictions() {
        let b = qsqrt2_twice();
        let pc = b.pair_constraints().unwrap();
        // diagonal Q(√2): (x, x)
        let diag = vec![q_int(0), q_int(1), q_int(0), q_int(1)];
        assert!(pc.agree_on(0, 2, std::slice::from_ref(&diag)));
        assert!(pc.agree_on(1, 3, std::slice::from_ref(&diag)));
        assert!(!pc.agree_on(0, 1, std::slice::from_ref(&diag)));
        assert!(!pc.agree_on(0, 3, &[diag]));
    }

    #[test]
    fn hom_values_multiplicative() {
        let b = qsqrt2_twice();
        let a = AlgebraElement::new(vec![vec![q_int(3), q_int(-1)], vec![q_int(1), q_int(2)]]);
        let c = AlgebraElement::new(vec![vec![q_int(-1), q_int(5)], vec![q_int(2), q_int(0)]]);
        let ac = b.hom_values(&b.mul(&a, &c));
        let (va, vc) = (b.hom_values(&a), b.hom_values(&c));
        for i in 0..4 {
            assert_eq!(ac[i], va[i].mul(&vc[i]));
        }
    }
}
