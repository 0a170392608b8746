//! Full-rank lattices in `R^n` with exact algebraic bases.
//!
//! Row `i` of the basis matrix is stored as a scale (a positive radical) times
//! elements of one embedded number field, so every coordinate of a lattice point is
//! `scale_i * sigma(y)` with `y` computed exactly in that field.

mod decompose;
pub(crate) mod enumerate;
pub mod reduce;

pub use decompose::{integer_kernel, is_decomposable, Decomposition};
pub use enumerate::{
    enumerate_in_box, find_point_in_box, points_in_closed_box, BoxContact, CoordBound, LatticePoint, LatticePointSet,
    SymmetricBox,
};

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::algebra::{compositum, AlgebraElement, EmbeddedField, EtaleAlgebra, FieldValue};
use crate::error::{Error, Result};
use crate::exactmath::field::det;
use crate::exactmath::{q_int, QMatrix, Radical, Rational, RealAlgebraic};

/// One coordinate row of a basis: `M[i][j] = scale * sigma(entries[j])`.
#[derive(Clone, Debug)]
pub struct LatticeRow {
    pub field: EmbeddedField,
    pub scale: Radical,
    pub entries: Vec<Vec<Rational>>,
}

impl LatticeRow {
    /// A row of rationals.
    pub fn rational(entries: &[Rational]) -> Self {
        Self {
            field: EmbeddedField::rationals(),
            scale: Radical::one(),
            entries: entries.iter().map(|x| vec![x.clone()]).collect(),
        }
    }

    /// `sum_j c_j entries[j]` in the row field.
    pub fn combination(&self, c: &[i64]) -> Vec<Rational> {
        let f = &self.field.field;
        let mut acc = f.zero();
        for (e, &cj) in self.entries.iter().zip(c) {
            if cj != 0 {
                acc = f.add(&acc, &f.scale(e, &q_int(cj)));
            }
        }
        acc
    }
}

/// The algebra data a lattice was built from: column `j` is `scale * v(basis[j])`.
#[derive(Clone, Debug)]
pub struct LatticeOrigin {
    pub algebra: EtaleAlgebra,
    pub basis: Vec<AlgebraElement>,
}

/// A lattice `M Z^n` with an exact basis matrix `M`.
#[derive(Clone, Debug)]
pub struct Lattice {
    rows: Vec<LatticeRow>,
    covolume: RealAlgebraic,
    origin: Option<LatticeOrigin>,
    numeric: bool,
    approx: Vec<Vec<f64>>,
}

fn approx_rows(rows: &[LatticeRow]) -> Vec<Vec<f64>> {
    rows.iter()
        .map(|r| {
            let s = r.scale.to_f64();
            r.entries.iter().map(|e| s * r.field.value_f64(e)).collect()
        })
        .collect()
}

impl Lattice {
    /// Builds a lattice from rows, computing the covolume exactly.
    pub fn from_rows(rows: Vec<LatticeRow>, origin: Option<LatticeOrigin>, numeric: bool) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidInput("lattice must have positive dimension".into()));
        }
        for r in &rows {
            if r.entries.len() != n {
                return Err(Error::InvalidInput(format!("basis row has {} entries, expected {n}", r.entries.len())));
            }
            if r.entries.iter().any(|e| e.len() != r.field.degree()) {
                return Err(Error::InvalidInput("entry length does not match its field degree".into()));
            }
        }
        let covolume = exact_covolume(&rows)?;
        Ok(Self::assemble(rows, covolume, origin, numeric))
    }

    fn assemble(rows: Vec<LatticeRow>, covolume: RealAlgebraic, origin: Option<LatticeOrigin>, numeric: bool) -> Self {
        let approx = approx_rows(&rows);
        Self { rows, covolume, origin, numeric, approx }
    }

    /// `Z^n`.
    pub fn integer(n: usize) -> Self {
        let rows =
            (0..n).map(|i| LatticeRow::rational(&(0..n).map(|j| q_int((i == j) as i64)).collect::<Vec<_>>())).collect();
        let origin = LatticeOrigin {
            algebra: EtaleAlgebra::rational_power(n),
            basis: (0..n)
                .map(|j| AlgebraElement::new((0..n).map(|i| vec![q_int((i == j) as i64)]).collect()))
                .collect(),
        };
        Self::assemble(rows, RealAlgebraic::one(), Some(origin), false)
    }

    /// Lattice generated by the columns of a rational matrix.
    pub fn from_rational_matrix(m: &QMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidInput("basis must be square".into()));
        }
        let rows = (0..m.nrows()).map(|i| LatticeRow::rational(m.row(i))).collect();
        Self::from_rows(rows, None, false)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[LatticeRow] {
        &self.rows
    }

    pub fn covolume(&self) -> &RealAlgebraic {
        &self.covolume
    }

    pub fn origin(&self) -> Option<&LatticeOrigin> {
        self.origin.as_ref()
    }

    /// Entries were given as floating-point numbers.
    pub fn is_numeric(&self) -> bool {
        self.numeric
    }

    pub fn is_unimodular(&self) -> bool {
        self.covolume.cmp_exact(&RealAlgebraic::one()).is_eq()
    }

    /// Row-major floating approximation of the basis matrix.
    pub fn approx(&self) -> &[Vec<f64>] {
        &self.approx
    }

    /// Floating generators (columns of the basis matrix).
    pub fn columns_f64(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        (0..n).map(|j| (0..n).map(|i| self.approx[i][j]).collect()).collect()
    }

    /// Exact basis entry `M[i][j]`.
    pub fn entry(&self, i: usize, j: usize) -> RealAlgebraic {
        let r = &self.rows[i];
        scaled(&r.field, r.entries[j].clone(), &r.scale)
    }

    pub fn basis_matrix(&self) -> Vec<Vec<RealAlgebraic>> {
        (0..self.n()).map(|i| (0..self.n()).map(|j| self.entry(i, j)).collect()).collect()
    }

    /// Exact coordinates of `M c`.
    pub fn point(&self, c: &[i64]) -> Vec<RealAlgebraic> {
        self.rows.iter().map(|r| scaled(&r.field, r.combination(c), &r.scale)).collect()
    }

    /// Floating coordinates of `M c`.
    pub fn point_f64(&self, c: &[i64]) -> Vec<f64> {
        self.approx.iter().map(|row| row.iter().zip(c).map(|(m, &x)| m * x as f64).sum()).collect()
    }

    /// The field shared by every row, if there is one.
    pub fn common_field(&self) -> Option<&EmbeddedField> {
        let f = &self.rows[0].field;
        self.rows.iter().all(|r| r.field.same_as(f)).then_some(f)
    }

    /// `diag(a) Λ`; the entries must multiply to exactly one.
    pub fn apply_diagonal(&self, a: &[Radical]) -> Result<Self> {
        if a.len() != self.n() {
            return Err(Error::Domain(format!("expected {} diagonal entries, got {}", self.n(), a.len())));
        }
        if !Radical::product(a).is_one() {
            return Err(Error::Domain("diagonal entries must multiply to 1".into()));
        }
        let rows = self.rows.iter().zip(a).map(|(r, ai)| LatticeRow { scale: r.scale.mul(ai), ..r.clone() }).collect();
        Ok(Self::assemble(rows, self.covolume.clone(), self.origin.clone(), self.numeric))
    }

    /// Lattice with coordinate `k` taken from coordinate `perm[k]` of this one.
    pub fn permute_coordinates(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || core::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidInput("not a permutation".into()));
        }
        let rows = perm.iter().map(|&p| self.rows[p].clone()).collect();
        let origin = match &self.origin {
            Some(o) => {
                let table = perm.iter().map(|&p| o.algebra.hom_table()[p]).collect();
                let algebra = EtaleAlgebra::with_hom_table(o.algebra.components().to_vec(), table)?;
                Some(LatticeOrigin { algebra, basis: o.basis.clone() })
            }
            None => None,
        };
        Ok(Self::assemble(rows, self.covolume.clone(), origin, self.numeric))
    }

    /// Short description of the representation.
    pub fn describe(&self) -> String {
        match (&self.origin, self.common_field()) {
            (Some(o), _) => format!("{}-dimensional lattice from {}", self.n(), o.algebra.describe()),
            (None, Some(f)) => format!("{}-dimensional lattice over {}", self.n(), f.describe()),
            _ => format!("{}-dimensional lattice", self.n()),
        }
    }
}

fn scaled(field: &EmbeddedField, y: Vec<Rational>, s: &Radical) -> RealAlgebraic {
    let v = if field.degree() == 1 {
        RealAlgebraic::Rational(y[0].clone())
    } else {
        RealAlgebraic::Field(FieldValue::new(field.clone(), y))
    };
    if s.is_one() {
        v
    } else {
        v.mul(&RealAlgebraic::from(s.clone()))
    }
}

/// `|det M|`, computed in a compositum of the row fields.
fn exact_covolume(rows: &[LatticeRow]) -> Result<RealAlgebraic> {
    let mut fields: Vec<EmbeddedField> = Vec::new();
    let mut which = Vec::with_capacity(rows.len());
    for r in rows {
        match fields.iter().position(|f| f.same_as(&r.field)) {
            Some(p) => which.push(p),
            None => {
                which.push(fields.len());
                fields.push(r.field.clone());
            }
        }
    }
    let comp = compositum(&fields)?;
    let k = &comp.field;
    let m: Vec<Vec<Vec<Rational>>> =
        rows.iter().zip(&which).map(|(r, &w)| r.entries.iter().map(|e| comp.map(w, e)).collect()).collect();
    let d = det(k, &m);
    if k.field.is_zero(&d) {
        let rank = crate::exactmath::field::rank(k, &m);
        return Err(Error::RankDeficient { rank, expected: rows.len() });
    }
    let scale = Radical::product(rows.iter().map(|r| &r.scale));
    let abs = if let Some(q) = k.field.as_rational(&d) {
        RealAlgebraic::Rational(q.abs())
    } else {
        let v = FieldValue::new(k.clone(), d);
        if v.sign() < 0 {
            RealAlgebraic::Field(FieldValue::new(k.clone(), k.field.neg(&v.coords)))
        } else {
            RealAlgebraic::Field(v)
        }
    };
    Ok(if scale.is_one() { abs } else { abs.mul(&RealAlgebraic::from(scale)) })
}

/// `Tr_B(a b)` summed over components.
fn trace_form(b: &EtaleAlgebra, x: &AlgebraElement, y: &AlgebraElement) -> Rational {
    let p = b.mul(x, y);
    b.components().iter().zip(&p.parts).map(|(f, part)| f.trace(part)).sum()
}

/// The unimodular lattice `c_L {v(alpha) : alpha in L}` for `L = Z alpha_1 + ... + Z alpha_n`.
pub fn construct_lattice(b: &EtaleAlgebra, l_basis: &[AlgebraElement]) -> Result<Lattice> {
    let n = b.dim();
    if l_basis.len() != n {
        return Err(Error::InvalidInput(format!("need {n} basis elements, got {}", l_basis.len())));
    }
    for a in l_basis {
        b.check(a)?;
    }
    let coords = QMatrix::from_rows(l_basis.iter().map(|a| b.to_coords(a)).collect());
    let rank = coords.rank();
    if rank < n {
        return Err(Error::RankDeficient { rank, expected: n });
    }
    let mut gram = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let t = trace_form(b, &l_basis[i], &l_basis[j]);
            gram[(i, j)] = t.clone();
            gram[(j, i)] = t;
        }
    }
    let disc = gram.det().abs();
    let scale = Radical::new(disc.recip(), 2 * n as u32)?;
    let rows = (0..n)
        .map(|i| {
            let (comp, _) = b.hom_table()[i];
            LatticeRow {
                field: b.embedded(i),
                scale: scale.clone(),
                entries: l_basis.iter().map(|a| a.parts[comp].clone()).collect(),
            }
        })
        .collect();
    let origin = LatticeOrigin { algebra: b.clone(), basis: l_basis.to_vec() };
    Ok(Lattice::assemble(rows, RealAlgebraic::one(), Some(origin), false))
}

/// Block-diagonal sum of two lattices.
pub fn direct_sum(l1: &Lattice, l2: &Lattice) -> Result<Lattice> {
    let (n1, n2) = (l1.n(), l2.n());
    let pad = |r: &LatticeRow, before: usize, after: usize| {
        let z = r.field.field.zero();
        let mut entries = vec![z.clone(); before];
        entries.extend(r.entries.iter().cloned());
        entries.extend(core::iter::repeat_n(z, after));
        LatticeRow { entries, ..r.clone() }
    };
    let mut rows: Vec<LatticeRow> = l1.rows.iter().map(|r| pad(r, 0, n2)).collect();
    rows.extend(l2.rows.iter().map(|r| pad(r, n1, 0)));
    let origin = match (&l1.origin, &l2.origin) {
        (Some(a), Some(b)) => Some(sum_origin(a, b)?),
        _ => None,
    };
    let covolume = l1.covolume.mul(&l2.covolume);
    Ok(Lattice::assemble(rows, covolume, origin, l1.numeric || l2.numeric))
}

fn sum_origin(a: &LatticeOrigin, b: &LatticeOrigin) -> Result<LatticeOrigin> {
    let mut comps = a.algebra.components().to_vec();
    let r1 = comps.len();
    comps.extend(b.algebra.components().iter().cloned());
    let mut table = a.algebra.hom_table().to_vec();
    table.extend(b.algebra.hom_table().iter().map(|&(j, k)| (j + r1, k)));
    let algebra = EtaleAlgebra::with_hom_table(comps, table)?;
    let zeros = |alg: &EtaleAlgebra| -> Vec<Vec<Rational>> { alg.zero().parts };
    let mut basis = Vec::with_capacity(a.basis.len() + b.basis.len());
    for x in &a.basis {
        let mut parts = x.parts.clone();
        parts.extend(zeros(&b.algebra));
        basis.push(AlgebraElement::new(parts));
    }
    for y in &b.basis {
        let mut parts = zeros(&a.algebra);
        parts.extend(y.parts.iter().cloned());
        basis.push(AlgebraElement::new(parts));
    }
    Ok(LatticeOrigin { algebra, basis })
}

/// Integer points of the coefficient cube `[-radius, radius]^n`, excluding zero.
pub fn coefficient_ball(n: usize, radius: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * radius + 1) as u64;
    let total = side.checked_pow(n as u32).unwrap_or(u64::MAX);
    (0..total).filter_map(move |mut idx| {
        let mut c = vec![0i64; n];
        for x in c.iter_mut() {
            *x = (idx % side) as i64 - radius;
            idx /= side;
        }
        c.iter().any(|&v| v != 0).then_some(c)
    })
}
