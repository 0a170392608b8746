//! Splitting a commutative semisimple algebra of rational matrices into number fields.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::etale::{AlgebraElement, EtaleAlgebra};
use super::number_field::NumberFieldR;
use crate::error::{Error, Result};
use crate::exactmath::factor::factor_squarefree;
use crate::exactmath::{q_int, QMatrix, QPoly, Rational};

/// `A = e_1 A + ... + e_r A` with `e_j A` isomorphic to the `j`-th component field.
#[derive(Clone, Debug)]
pub struct WedderburnDecomposition {
    /// The components, `Q[x]/(f_j)` with `x` the image of the generator.
    pub algebra: EtaleAlgebra,
    /// Primitive idempotents in input-basis coordinates.
    pub idempotents: Vec<Vec<Rational>>,
    /// The primitive element used for the split, in input-basis coordinates.
    pub generator: Vec<Rational>,
    /// Row `s` holds the flattened component coordinates of basis element `s`.
    pub to_components: QMatrix,
    /// The unit of the algebra in input-basis coordinates.
    pub unit: Vec<Rational>,
}

impl WedderburnDecomposition {
    pub fn is_field(&self) -> bool {
        self.algebra.is_field()
    }

    /// Degrees of the component fields.
    pub fn degrees(&self) -> Vec<usize> {
        self.algebra.components().iter().map(|f| f.degree()).collect()
    }

    /// Image of an element given in input-basis coordinates.
    pub fn to_etale(&self, coords: &[Rational]) -> AlgebraElement {
        let flat = self.to_components.vec_mul(coords);
        self.algebra.from_coords(&flat).expect("dimensions agree")
    }

    /// Idempotents as matrices, given the basis the decomposition was computed from.
    pub fn idempotent_matrices(&self, basis: &[QMatrix]) -> Vec<QMatrix> {
        self.idempotents.iter().map(|e| combine(basis, e)).collect()
    }
}

/// `sum c_s b_s`.
pub fn combine(basis: &[QMatrix], c: &[Rational]) -> QMatrix {
    let (r, k) = (basis[0].nrows(), basis[0].ncols());
    let mut m = QMatrix::zeros(r, k);
    for (b, x) in basis.iter().zip(c) {
        if !x.is_zero() {
            m = &m + &b.scale(x);
        }
    }
    m
}

/// Whether `decomp` has exactly one component.
pub fn is_field(decomp: &WedderburnDecomposition) -> bool {
    decomp.is_field()
}

/// Coordinates of matrices with respect to a linearly independent list.
pub(crate) struct SpanSolver {
    span: QMatrix,
}

impl SpanSolver {
    pub(crate) fn new(basis: &[QMatrix]) -> Self {
        let cols: Vec<Vec<Rational>> = basis.iter().map(|b| b.as_slice().to_vec()).collect();
        Self { span: QMatrix::from_rows(cols).transpose() }
    }

    pub(crate) fn rank(&self) -> usize {
        self.span.rank()
    }

    pub(crate) fn coords(&self, m: &QMatrix) -> Option<Vec<Rational>> {
        self.span.solve(m.as_slice())
    }
}

/// Decomposes the algebra spanned by `basis` (commuting rational square matrices).
pub fn wedderburn(basis: &[QMatrix]) -> Result<WedderburnDecomposition> {
    let m = basis.len();
    if m == 0 {
        return Err(Error::InvalidInput("empty basis".into()));
    }
    let n = basis[0].nrows();
    if basis.iter().any(|b| b.nrows() != n || b.ncols() != n) {
        return Err(Error::InvalidInput("basis matrices must be square of equal size".into()));
    }
    let solver = SpanSolver::new(basis);
    let r = solver.rank();
    if r != m {
        return Err(Error::RankDeficient { rank: r, expected: m });
    }
    // Regular representation: regular[s] has column u equal to coords(b_s b_u).
    let mut regular = vec![QMatrix::zeros(m, m); m];
    for s in 0..m {
        for u in s..m {
            let p = &basis[s] * &basis[u];
            if u != s && p != &basis[u] * &basis[s] {
                return Err(Error::NotAnAlgebra);
            }
            let c = solver.coords(&p).ok_or(Error::NotAnAlgebra)?;
            for (row, x) in c.into_iter().enumerate() {
                regular[s][(row, u)] = x.clone();
                regular[u][(row, s)] = x;
            }
        }
    }
    let unit = find_unit(&regular)?;
    for l in &regular {
        let p = l.charpoly().squarefree_part();
        if !l.eval_poly(&p).is_zero() {
            return Err(Error::NotSemisimple);
        }
    }
    let (generator, lc, chi) = primitive_element(&regular)?;
    let mut factors = factor_squarefree(&chi);
    factors.sort_by(|a, b| a.deg().cmp(&b.deg()).then_with(|| a.coeffs().cmp(b.coeffs())));

    let mut idempotents = Vec::with_capacity(factors.len());
    let mut fields = Vec::with_capacity(factors.len());
    for f in &factors {
        let cof = chi.div_exact(f);
        let inv = cof.rem(f).inv_mod(f).ok_or_else(|| Error::InvalidState("coprime factors".into()))?;
        let u = (&cof * &inv).rem(&chi);
        idempotents.push(lc.eval_poly(&u).mul_vec(&unit));
        fields.push(Arc::new(NumberFieldR::new_unchecked(f)?));
    }
    let algebra = EtaleAlgebra::new(fields);

    // basis element s restricted to component j, in the power basis of c e_j
    let mut to_components = QMatrix::zeros(m, m);
    let mut col0 = 0;
    for (j, e) in idempotents.iter().enumerate() {
        let d = factors[j].deg();
        let mut pw = Vec::with_capacity(d);
        let mut v = e.clone();
        for _ in 0..d {
            pw.push(v.clone());
            v = lc.mul_vec(&v);
        }
        let pmat = QMatrix::from_rows(pw).transpose();
        for (s, l) in regular.iter().enumerate() {
            let y = pmat.solve(&l.mul_vec(e)).ok_or_else(|| Error::InvalidState("component coordinates".into()))?;
            for (t, x) in y.into_iter().enumerate() {
                to_components[(s, col0 + t)] = x;
            }
        }
        col0 += d;
    }
    Ok(WedderburnDecomposition { algebra, idempotents, generator, to_components, unit })
}

fn find_unit(regular: &[QMatrix]) -> Result<Vec<Rational>> {
    let m = regular.len();
    // sum_s e_s regular[s] = I, one equation per matrix entry
    let mut rows = Vec::with_capacity(m * m);
    let mut rhs = Vec::with_capacity(m * m);
    for r in 0..m {
        for u in 0..m {
            rows.push(regular.iter().map(|l| l[(r, u)].clone()).collect::<Vec<_>>());
            rhs.push(if r == u { Rational::one() } else { Rational::zero() });
        }
    }
    QMatrix::from_rows(rows).solve(&rhs).ok_or(Error::NotSemisimple)
}

/// An element whose characteristic polynomial on the algebra is squarefree.
fn primitive_element(regular: &[QMatrix]) -> Result<(Vec<Rational>, QMatrix, QPoly)> {
    let m = regular.len();
    for k in 1..=400i64 {
        let mut w = Vec::with_capacity(m);
        let mut p = Rational::one();
        let base = q_int(if k % 2 == 0 { -(k / 2) - 1 } else { k / 2 + 2 });
        for _ in 0..m {
            w.push(p.clone());
            p *= &base;
        }
        // rotate so that early sweeps do not always weight the first element by one
        w.rotate_left((k as usize) % m);
        let lc = combine(regular, &w);
        let chi = lc.charpoly();
        if chi.is_squarefree() {
            return Ok((w, lc, chi));
        }
    }
    Err(Error::InvalidState("no primitive element found in weight sweep".into()))
}
