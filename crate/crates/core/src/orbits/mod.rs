//! Associated algebras of lattices and the orbit classes of block groups.
//!
//! For a partition `P` of the coordinates, `A(P)` is the set of rational diagonal
//! maps, constant on the blocks of `P`, that preserve the rational span of the lattice.
//! The orbit of the block group `H(P)` through the lattice is closed exactly when
//! `dim A(P) = |P|`, and then of finite volume exactly when `A(P)` is a field.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra::{
    all_partitions, compositum, wedderburn, AlgebraElement, EmbeddedField, EtaleAlgebra, FieldValue, Partition,
    SubalgebraEmbedding, WedderburnDecomposition,
};
use crate::error::{Error, Result};
use crate::exactmath::field::{kernel, rank, solve};
use crate::exactmath::{QMatrix, Rational, RealAlgebraic};
use crate::lattice::Lattice;

/// Largest dimension for which every partition is enumerated.
pub const MAX_ENUMERATION_DIM: usize = 10;

/// The block group `H(P)`: block-diagonal matrices with blocks supported on `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockGroupSpec {
    pub partition: Partition,
}

impl BlockGroupSpec {
    pub fn new(partition: Partition) -> Self {
        Self { partition }
    }

    /// Matrix positions `(s, t)` allowed to be nonzero in the Lie algebra.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let n = self.partition.n();
        (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).filter(|&(s, t)| self.partition.same_block(s, t)).collect()
    }

    pub fn is_equiblock(&self) -> bool {
        self.partition.is_equiblock()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrbitKind {
    NotClosed,
    ClosedInfiniteVolume,
    FiniteVolume,
}

impl OrbitKind {
    pub fn is_closed(self) -> bool {
        self != Self::NotClosed
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::NotClosed => "NOT_CLOSED",
            Self::ClosedInfiniteVolume => "CLOSED_INFINITE_VOLUME",
            Self::FiniteVolume => "FINITE_VOLUME",
        }
    }
}

impl core::fmt::Display for OrbitKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `A(P)` for one lattice and partition.
#[derive(Clone, Debug)]
pub struct AssociatedAlgebraResult {
    pub partition: Partition,
    /// Rational matrices `Q` with `diag(t) M = M Q`.
    pub q_basis: Vec<QMatrix>,
    /// The diagonal `t` of each basis element.
    pub diagonals: Vec<Vec<RealAlgebraic>>,
    pub dim_q: usize,
    pub decomposition: WedderburnDecomposition,
    pub is_field: bool,
    /// Coordinates grouped by equality of every element of the algebra.
    pub induced_partition: Partition,
    /// Index of the component of `decomposition` acting on each coordinate.
    pub coordinate_components: Vec<usize>,
    /// Flattened coordinates in the origin algebra, when computed symbolically.
    pub symbolic_basis: Option<Vec<Vec<Rational>>>,
}

impl AssociatedAlgebraResult {
    pub fn component_degrees(&self) -> Vec<usize> {
        self.decomposition.degrees()
    }

    /// `Q ⊕ Q(√2)` style description of the algebra.
    pub fn describe(&self) -> String {
        self.decomposition.algebra.describe()
    }
}

#[derive(Clone, Debug)]
pub struct OrbitClass {
    pub kind: OrbitKind,
    pub algebra: AssociatedAlgebraResult,
}

/// One row of a classification table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationEntry {
    pub partition: Partition,
    pub dim: usize,
    pub components: Vec<usize>,
    pub algebra: String,
    pub kind: OrbitKind,
}

impl From<&OrbitClass> for ClassificationEntry {
    fn from(c: &OrbitClass) -> Self {
        Self {
            partition: c.algebra.partition.clone(),
            dim: c.algebra.dim_q,
            components: c.algebra.component_degrees(),
            algebra: c.algebra.describe(),
            kind: c.kind,
        }
    }
}

enum Path {
    /// Computations inside the origin algebra `B`.
    Symbolic {
        algebra: EtaleAlgebra,
        /// Columns are the flattened coordinates of the L-basis.
        lm: QMatrix,
        lm_inv: QMatrix,
        pairs: BTreeMap<(usize, usize), QMatrix>,
    },
    /// A basis of `A(P_0)` found by linear algebra over a field holding all entries.
    Ambient { field: EmbeddedField, q_full: Vec<QMatrix>, diag_full: Vec<Vec<Vec<Rational>>> },
}

/// Per-lattice data shared by associated algebra computations.
pub struct OrbitContext {
    n: usize,
    path: Path,
}

fn unsupported_numeric() -> Error {
    Error::Unsupported("lattice entries are floating-point; associated algebras need exact algebraic entries".into())
}

impl OrbitContext {
    pub fn new(l: &Lattice) -> Result<Self> {
        if l.is_numeric() {
            return Err(unsupported_numeric());
        }
        let n = l.n();
        let path = match l.origin() {
            Some(o) => {
                let cols: Vec<Vec<Rational>> = o.basis.iter().map(|a| o.algebra.to_coords(a)).collect();
                let lm = QMatrix::from_rows(cols).transpose();
                let lm_inv = lm.inverse().ok_or(Error::RankDeficient { rank: lm.rank(), expected: n })?;
                Path::Symbolic { algebra: o.algebra.clone(), lm, lm_inv, pairs: BTreeMap::new() }
            }
            None => ambient(l)?,
        };
        Ok(Self { n, path })
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.path, Path::Symbolic { .. })
    }

    /// Computes every pair constraint up front.
    pub fn with_all_pairs(mut self) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = (0..self.n).flat_map(|i| (i + 1..self.n).map(move |j| (i, j))).collect();
        self.ensure_pairs(&pairs)?;
        Ok(self)
    }

    fn ensure_pairs(&mut self, needed: &[(usize, usize)]) -> Result<()> {
        if let Path::Symbolic { algebra, pairs, .. } = &mut self.path {
            for &(i, j) in needed {
                if let alloc::collections::btree_map::Entry::Vacant(e) = pairs.entry((i, j)) {
                    e.insert(algebra.pair_constraint(i, j)?);
                }
            }
        }
        Ok(())
    }

    fn check_partition(&self, p: &Partition) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::InvalidInput(format!(
                "partition of {} points for a lattice of dimension {}",
                p.n(),
                self.n
            )));
        }
        Ok(())
    }

    /// `A(P)`, computing any missing pair constraints.
    pub fn associated_algebra_mut(&mut self, p: &Partition) -> Result<AssociatedAlgebraResult> {
        self.check_partition(p)?;
        self.ensure_pairs(&block_pairs(p))?;
        self.associated_algebra(p)
    }

    /// `A(P)`; in the symbolic path all needed pair constraints must be present.
    pub fn associated_algebra(&self, p: &Partition) -> Result<AssociatedAlgebraResult> {
        self.check_partition(p)?;
        match &self.path {
            Path::Symbolic { algebra, lm, lm_inv, pairs } => {
                let mut rows: Vec<Vec<Rational>> = Vec::new();
                for key in block_pairs(p) {
                    let c =
                        pairs.get(&key).ok_or_else(|| Error::InvalidState("pair constraint not prepared".into()))?;
                    rows.extend(c.to_rows());
                }
                let ker = if rows.is_empty() { identity_rows(self.n) } else { QMatrix::from_rows(rows).kernel() };
                let elems: Vec<AlgebraElement> = ker.iter().map(|v| algebra.from_coords(v)).collect::<Result<_>>()?;
                let q_basis: Vec<QMatrix> = elems.iter().map(|b| &(lm_inv * &algebra.mult_matrix(b)) * lm).collect();
                let diagonals: Vec<Vec<RealAlgebraic>> = elems.iter().map(|b| algebra.hom_values(b)).collect();
                let decomposition = wedderburn(&q_basis)?;
                let coordinate_components = symbolic_components(algebra, &ker, &decomposition)?;
                let induced_partition = induced_symbolic(self, algebra, &ker)?;
                finish(p, q_basis, diagonals, decomposition, induced_partition, coordinate_components, Some(ker))
            }
            Path::Ambient { field, q_full, diag_full } => {
                // x with sum_s x_s (t^s_i - t^s_j) = 0 for i ~ j, expanded in the field's basis
                let f = &field.field;
                let m = q_full.len();
                let mut rows: Vec<Vec<Rational>> = Vec::new();
                for (i, j) in block_pairs(p) {
                    let diffs: Vec<Vec<Rational>> = (0..m).map(|s| f.sub(&diag_full[s][i], &diag_full[s][j])).collect();
                    for t in 0..f.degree() {
                        rows.push(diffs.iter().map(|d| d[t].clone()).collect());
                    }
                }
                let ker = if rows.is_empty() { identity_rows(m) } else { QMatrix::from_rows(rows).kernel() };
                let q_basis: Vec<QMatrix> =
                    ker.iter().map(|x| crate::algebra::wedderburn::combine(q_full, x)).collect();
                let diag_coords: Vec<Vec<Vec<Rational>>> = ker
                    .iter()
                    .map(|x| {
                        (0..self.n)
                            .map(|i| {
                                let mut acc = f.zero();
                                for (s, xs) in x.iter().enumerate() {
                                    if !xs.is_zero() {
                                        acc = f.add(&acc, &f.scale(&diag_full[s][i], xs));
                                    }
                                }
                                acc
                            })
                            .collect()
                    })
                    .collect();
                let diagonals =
                    diag_coords.iter().map(|d| d.iter().map(|c| field_real(field, c.clone())).collect()).collect();
                let decomposition = wedderburn(&q_basis)?;
                let coordinate_components = ambient_components(field, &diag_coords, &decomposition)?;
                let labels: Vec<usize> = (0..self.n)
                    .map(|i| (0..self.n).find(|&j| diag_coords.iter().all(|d| d[i] == d[j])).unwrap_or(i))
                    .collect();
                let induced_partition = Partition::from_labels(&labels);
                finish(p, q_basis, diagonals, decomposition, induced_partition, coordinate_components, None)
            }
        }
    }

    /// Classification of `H(P)` through the lattice.
    pub fn classify(&self, p: &Partition) -> Result<OrbitClass> {
        Ok(classify_result(p, self.associated_algebra(p)?))
    }
}

fn classify_result(p: &Partition, algebra: AssociatedAlgebraResult) -> OrbitClass {
    let kind = if algebra.dim_q < p.len() {
        OrbitKind::NotClosed
    } else if algebra.is_field {
        OrbitKind::FiniteVolume
    } else {
        OrbitKind::ClosedInfiniteVolume
    };
    OrbitClass { kind, algebra }
}

fn finish(
    p: &Partition,
    q_basis: Vec<QMatrix>,
    diagonals: Vec<Vec<RealAlgebraic>>,
    decomposition: WedderburnDecomposition,
    induced_partition: Partition,
    coordinate_components: Vec<usize>,
    symbolic_basis: Option<Vec<Vec<Rational>>>,
) -> Result<AssociatedAlgebraResult> {
    let dim_q = q_basis.len();
    if dim_q > p.len() {
        return Err(Error::InvalidState(format!("algebra of dimension {dim_q} exceeds {} blocks", p.len())));
    }
    Ok(AssociatedAlgebraResult {
        partition: p.clone(),
        is_field: decomposition.is_field(),
        q_basis,
        diagonals,
        dim_q,
        decomposition,
        induced_partition,
        coordinate_components,
        symbolic_basis,
    })
}

fn identity_rows(m: usize) -> Vec<Vec<Rational>> {
    (0..m).map(|i| (0..m).map(|j| Rational::from_integer((i == j).into())).collect()).collect()
}

/// `(first, other)` pairs that force a diagonal map to be constant on each block.
fn block_pairs(p: &Partition) -> Vec<(usize, usize)> {
    p.blocks().iter().flat_map(|b| b.iter().skip(1).map(move |&j| (b[0], j))).collect()
}

fn field_real(k: &EmbeddedField, c: Vec<Rational>) -> RealAlgebraic {
    if k.degree() == 1 {
        RealAlgebraic::Rational(c[0].clone())
    } else {
        RealAlgebraic::Field(FieldValue::new(k.clone(), c))
    }
}

/// Ambient path: the basis matrix in one field `K` (scales dropped; they commute with
/// diagonal maps), and the rational `Q` with `E Q E^-1` diagonal.
fn ambient(l: &Lattice) -> Result<Path> {
    let n = l.n();
    let mut fields: Vec<EmbeddedField> = Vec::new();
    let mut which = Vec::with_capacity(n);
    for r in l.rows() {
        match fields.iter().position(|f| f.same_as(&r.field)) {
            Some(p) => which.push(p),
            None => {
                which.push(fields.len());
                fields.push(r.field.clone());
            }
        }
    }
    let comp =
        compositum(&fields).map_err(|e| Error::Unsupported(format!("entries have no usable common field: {e}")))?;
    let k = comp.field.clone();
    let f = &k.field;
    let d = k.degree();
    let e: Vec<Vec<Vec<Rational>>> =
        l.rows().iter().zip(&which).map(|(r, &w)| r.entries.iter().map(|x| comp.map(w, x)).collect()).collect();
    // columns of E^-1 by solving E x = e_j
    let mut einv = vec![vec![f.zero(); n]; n];
    for j in 0..n {
        let mut rhs = vec![f.zero(); n];
        rhs[j] = f.one();
        let x = solve(&k, &e, &rhs).ok_or(Error::RankDeficient { rank: rank(&k, &e), expected: n })?;
        for i in 0..n {
            einv[i][j] = x[i].clone();
        }
    }
    // unknown Q_{kl} at index k*n + l; (E Q E^-1)_{ij} = sum Q_kl E_ik Einv_lj
    let coef = |i: usize, j: usize, kk: usize, ll: usize| f.mul(&e[i][kk], &einv[ll][j]);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let cs: Vec<Vec<Rational>> = (0..n * n).map(|u| coef(i, j, u / n, u % n)).collect();
            for t in 0..d {
                let row: Vec<Rational> = cs.iter().map(|c| c[t].clone()).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let ker =
        if rows.is_empty() { identity_rows(n * n) } else { kernel(&crate::exactmath::RationalField, &rows, n * n) };
    let q_full: Vec<QMatrix> =
        ker.iter().map(|v| QMatrix::from_rows((0..n).map(|kk| v[kk * n..(kk + 1) * n].to_vec()).collect())).collect();
    let diag_full: Vec<Vec<Vec<Rational>>> = ker
        .iter()
        .map(|v| {
            (0..n)
                .map(|i| {
                    let mut acc = f.zero();
                    for (u, x) in v.iter().enumerate() {
                        if !x.is_zero() {
                            acc = f.add(&acc, &f.scale(&coef(i, i, u / n, u % n), x));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Ok(Path::Ambient { field: k, q_full, diag_full })
}

fn induced_symbolic(ctx: &OrbitContext, algebra: &EtaleAlgebra, ker: &[Vec<Rational>]) -> Result<Partition> {
    let n = ctx.n;
    let pairs = match &ctx.path {
        Path::Symbolic { pairs, .. } => pairs,
        Path::Ambient { .. } => unreachable!(),
    };
    let mut labels: Vec<usize> = (0..n).collect();
    for i in 0..n {
        if labels[i] != i {
            continue;
        }
        for j in i + 1..n {
            if labels[j] != j {
                continue;
            }
            let agree = match pairs.get(&(i, j)) {
                Some(c) => ker.iter().all(|v| c.mul_vec(v).iter().all(Zero::is_zero)),
                None => {
                    let c = algebra.pair_constraint(i, j)?;
                    ker.iter().all(|v| c.mul_vec(v).iter().all(Zero::is_zero))
                }
            };
            if agree {
                labels[j] = i;
            }
        }
    }
    Ok(Partition::from_labels(&labels))
}

/// Component index per coordinate: where the diagonal of the component's idempotent is 1.
fn symbolic_components(
    algebra: &EtaleAlgebra,
    ker: &[Vec<Rational>],
    dec: &WedderburnDecomposition,
) -> Result<Vec<usize>> {
    let n = algebra.dim();
    let mut out = vec![usize::MAX; n];
    for (c, e) in dec.idempotents.iter().enumerate() {
        let mut flat = vec![Rational::zero(); n];
        for (x, v) in e.iter().zip(ker) {
            for (a, b) in flat.iter_mut().zip(v) {
                *a += x * b;
            }
        }
        let elem = algebra.from_coords(&flat)?;
        for (i, slot) in out.iter_mut().enumerate() {
            if algebra.hom_sign(&elem, i) != 0 {
                *slot = c;
            }
        }
    }
    if out.contains(&usize::MAX) {
        return Err(Error::InvalidState("coordinate outside every component".into()));
    }
    Ok(out)
}

fn ambient_components(
    k: &EmbeddedField,
    diag: &[Vec<Vec<Rational>>],
    dec: &WedderburnDecomposition,
) -> Result<Vec<usize>> {
    let f = &k.field;
    let n = diag.first().map_or(0, Vec::len);
    let mut out = vec![usize::MAX; n];
    for (c, e) in dec.idempotents.iter().enumerate() {
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc = f.zero();
            for (x, d) in e.iter().zip(diag) {
                acc = f.add(&acc, &f.scale(&d[i], x));
            }
            if !f.is_zero(&acc) {
                *slot = c;
            }
        }
    }
    if out.contains(&usize::MAX) {
        return Err(Error::InvalidState("coordinate outside every component".into()));
    }
    Ok(out)
}

/// `A(P)` for a lattice with exact entries.
pub fn associated_algebra(l: &Lattice, p: &Partition) -> Result<AssociatedAlgebraResult> {
    OrbitContext::new(l)?.associated_algebra_mut(p)
}

pub fn classify_orbit(l: &Lattice, p: &Partition) -> Result<OrbitClass> {
    let a = associated_algebra(l, p)?;
    Ok(classify_result(p, a))
}

/// Every partition whose block-group orbit through the lattice is closed.
pub fn all_closed_orbits(l: &Lattice) -> Result<Vec<(Partition, OrbitClass)>> {
    let n = l.n();
    if n > MAX_ENUMERATION_DIM {
        return Err(Error::Unsupported(format!("partition enumeration supports n <= {MAX_ENUMERATION_DIM}, got {n}")));
    }
    let ctx = OrbitContext::new(l)?.with_all_pairs()?;
    all_closed_orbits_with(&ctx, n)
}

pub fn all_closed_orbits_with(ctx: &OrbitContext, n: usize) -> Result<Vec<(Partition, OrbitClass)>> {
    let mut out = Vec::new();
    for p in all_partitions(n) {
        let c = ctx.classify(&p)?;
        if c.kind.is_closed() {
            out.push((p, c));
        }
    }
    out.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.blocks().cmp(b.0.blocks())));
    Ok(out)
}

/// The coarsening of `P` grouping blocks acted on by the same component of `A(P)`.
pub fn tilde_partition(p: &Partition, a: &AssociatedAlgebraResult) -> Result<Partition> {
    if a.dim_q < p.len() {
        return Err(Error::InvalidState("the orbit is not closed".into()));
    }
    if a.partition != *p {
        return Err(Error::InvalidInput("algebra was computed for another partition".into()));
    }
    Ok(Partition::from_labels(&a.coordinate_components))
}

/// Compares the ranks of the projections of lattice vectors to two blocks.
///
/// Vectors are coefficient vectors in the lattice basis. Both ranks are computed
/// exactly over a field containing the entries of the projected rows.
pub fn kernel_lemma_check(
    l: &Lattice,
    p: &Partition,
    q1: &[usize],
    q2: &[usize],
    vectors: &[Vec<i64>],
) -> Result<bool> {
    let a = associated_algebra(l, p)?;
    kernel_lemma_check_with(l, p, &a, q1, q2, vectors)
}

/// As [`kernel_lemma_check`], reusing an already computed `A(P)`.
pub fn kernel_lemma_check_with(
    l: &Lattice,
    p: &Partition,
    a: &AssociatedAlgebraResult,
    q1: &[usize],
    q2: &[usize],
    vectors: &[Vec<i64>],
) -> Result<bool> {
    let tilde = tilde_partition(p, a)?;
    for q in [q1, q2] {
        let mut s = q.to_vec();
        s.sort_unstable();
        if !p.blocks().contains(&s) {
            return Err(Error::Precondition(format!("{q:?} is not a block of the partition")));
        }
    }
    if !tilde.same_block(q1[0], q2[0]) {
        return Err(Error::Precondition("blocks lie in different components".into()));
    }
    if vectors.iter().any(|v| v.len() != l.n()) {
        return Err(Error::InvalidInput("vector length differs from the lattice dimension".into()));
    }
    Ok(projection_rank(l, q1, vectors)? == projection_rank(l, q2, vectors)?)
}

/// Rank of the matrix with rows `x_q` (`q` in the block) and one column per vector.
pub fn projection_rank(l: &Lattice, q: &[usize], vectors: &[Vec<i64>]) -> Result<usize> {
    let fields: Vec<EmbeddedField> = q.iter().map(|&i| l.rows()[i].field.clone()).collect();
    let comp = compositum(&fields)?;
    let rows: Vec<Vec<Vec<Rational>>> = q
        .iter()
        .enumerate()
        .map(|(t, &i)| vectors.iter().map(|v| comp.map(t, &l.rows()[i].combination(v))).collect())
        .collect();
    Ok(rank(&comp.field, &rows))
}

/// Checks `B = A(P_B)` for a subalgebra of the origin algebra of the lattice.
pub fn subalgebra_roundtrip_check(l: &Lattice, emb: &SubalgebraEmbedding) -> Result<bool> {
    let o = l.origin().ok_or_else(|| Error::Precondition("lattice has no symbolic origin".into()))?;
    let target = emb.target();
    if target.hom_table() != o.algebra.hom_table()
        || target.components().len() != o.algebra.components().len()
        || target.components().iter().zip(o.algebra.components()).any(|(a, b)| a.minpoly() != b.minpoly())
    {
        return Err(Error::Precondition("embedding target differs from the lattice algebra".into()));
    }
    let pb = emb.algebra_partition()?;
    let a = associated_algebra(l, &pb)?;
    let ker = a.symbolic_basis.ok_or_else(|| Error::InvalidState("expected the symbolic path".into()))?;
    let image = emb.image_basis();
    let r_img = QMatrix::from_rows(image.clone()).rank();
    let r_ker = ker.len();
    let mut both = image;
    both.extend(ker);
    Ok(r_img == r_ker && QMatrix::from_rows(both).rank() == r_img)
}
