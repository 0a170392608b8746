//! Unital embeddings between étale algebras and the partitions they induce.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use super::etale::{AlgebraElement, EtaleAlgebra, PairConstraints};
use super::partition::Partition;
use crate::error::{Error, Result};
use crate::exactmath::{QMatrix, Rational};

/// A unital injective algebra map `source -> target`.
///
/// Row `s` of `map` is the image of the `s`-th flattened power-basis vector of the
/// source, written in flattened target coordinates.
#[derive(Clone, Debug)]
pub struct SubalgebraEmbedding {
    source: EtaleAlgebra,
    target: EtaleAlgebra,
    map: QMatrix,
}

impl SubalgebraEmbedding {
    /// Validates unitality, injectivity and multiplicativity on all basis products.
    pub fn new(source: EtaleAlgebra, target: EtaleAlgebra, map: QMatrix) -> Result<Self> {
        let (m, n) = (source.dim(), target.dim());
        if map.nrows() != m || map.ncols() != n {
            return Err(Error::InvalidEmbedding(format!("map must be {m}x{n}")));
        }
        if map.rank() != m {
            return Err(Error::InvalidEmbedding("map is not injective".into()));
        }
        let emb = Self { source, target, map };
        let one_t = emb.target.to_coords(&emb.target.unit());
        if emb.apply_coords(&emb.source.to_coords(&emb.source.unit())) != one_t {
            return Err(Error::InvalidEmbedding("unit is not mapped to the unit".into()));
        }
        let basis: Vec<Vec<Rational>> = (0..m).map(|s| unit_vector(m, s)).collect();
        for s in 0..m {
            for u in s..m {
                let a = emb.source.from_coords(&basis[s])?;
                let b = emb.source.from_coords(&basis[u])?;
                let lhs = emb.apply(&emb.source.mul(&a, &b));
                let rhs = emb.target.mul(&emb.apply(&a), &emb.apply(&b));
                if lhs != rhs {
                    return Err(Error::InvalidEmbedding("map is not multiplicative".into()));
                }
            }
        }
        Ok(emb)
    }

    /// `Q -> target` sending 1 to the unit.
    pub fn scalars(target: EtaleAlgebra) -> Self {
        let one = target.to_coords(&target.unit());
        Self { source: EtaleAlgebra::rational_power(1), target, map: QMatrix::from_rows(alloc::vec![one]) }
    }

    pub fn source(&self) -> &EtaleAlgebra {
        &self.source
    }

    pub fn target(&self) -> &EtaleAlgebra {
        &self.target
    }

    pub fn map(&self) -> &QMatrix {
        &self.map
    }

    pub fn apply_coords(&self, c: &[Rational]) -> Vec<Rational> {
        self.map.vec_mul(c)
    }

    pub fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        let c = self.apply_coords(&self.source.to_coords(a));
        self.target.from_coords(&c).expect("dimensions agree")
    }

    /// Images of the source basis in flattened target coordinates.
    pub fn image_basis(&self) -> Vec<Vec<Rational>> {
        self.map.to_rows()
    }

    /// Homomorphisms of the target grouped by equal restriction to the image.
    pub fn algebra_partition(&self) -> Result<Partition> {
        let pc = self.target.pair_constraints()?;
        Ok(self.algebra_partition_with(&pc))
    }

    pub fn algebra_partition_with(&self, pc: &PairConstraints) -> Partition {
        pc.partition_of(&self.image_basis())
    }

    /// The image projects onto every component of the target.
    pub fn is_essential(&self) -> bool {
        let rows = self.image_basis();
        self.target.components().iter().enumerate().all(|(j, f)| {
            let o = self.target.offset(j);
            let proj: Vec<Vec<Rational>> = rows.iter().map(|r| r[o..o + f.degree()].to_vec()).collect();
            QMatrix::from_rows(proj).rank() == f.degree()
        })
    }

    /// Source and target have the same number of components.
    pub fn is_aligned(&self) -> bool {
        self.source.component_count() == self.target.component_count()
    }
}

/// Homomorphism partition induced by an embedding.
pub fn algebra_partition(emb: &SubalgebraEmbedding) -> Result<Partition> {
    emb.algebra_partition()
}

fn unit_vector(n: usize, i: usize) -> Vec<Rational> {
    let mut v = alloc::vec![Rational::zero(); n];
    v[i] = Rational::from_integer(1.into());
    v
}
