//! JSON files for algebras, lattice bases and lattices.
//!
//! Rationals are strings (`"3/4"`, `"-2"`); polynomials are coefficient lists from the
//! constant term up. A lattice is either exact rows over embedded fields, or a plain
//! `matrix` whose entries are rational strings or JSON numbers. Any JSON number
//! marks the lattice as numeric: it is stored exactly as the binary value of the float
//! but refused by the symbolic algorithms.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use mordell_core::algebra::{AlgebraElement, EmbeddedField, EtaleAlgebra, NumberFieldR};
use mordell_core::exactmath::{from_f64, QMatrix, QPoly, Radical, Rational};
use mordell_core::lattice::{construct_lattice, Lattice, LatticeOrigin, LatticeRow};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraInput {
    /// Minimal polynomial of each component field.
    pub components: Vec<Vec<String>>,
    /// `(component, embedding)` per coordinate; defaults to all embeddings in order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hom_table: Option<Vec<(usize, usize)>>,
}

/// Input of `construct`: an étale algebra and a basis of `L`, each element given as
/// one coordinate list per component.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConstructInput {
    pub algebra: AlgebraInput,
    pub basis: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FieldDesc {
    pub minpoly: Vec<String>,
    /// Index of the real root, in increasing order, starting at 0.
    pub embedding: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RadicalDesc {
    pub base: String,
    pub index: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RowDesc {
    /// `None` for rational rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<RadicalDesc>,
    /// `entries[j]`: power-basis coordinates of `M[i][j] / scale`.
    pub entries: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OriginDesc {
    pub algebra: AlgebraInput,
    pub basis: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LatticeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<RowDesc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<OriginDesc>,
    /// Written for reference; recomputed on reading.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covolume: Option<String>,
}

fn rat(s: &str) -> Result<Rational> {
    s.trim().parse::<Rational>().map_err(|_| anyhow!("not a rational number: {s:?}"))
}

fn rats(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| rat(s)).collect()
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Shares one field object per minimal polynomial.
#[derive(Default)]
struct Fields(HashMap<Vec<String>, Arc<NumberFieldR>>);

impl Fields {
    fn get(&mut self, minpoly: &[String]) -> Result<Arc<NumberFieldR>> {
        let key: Vec<String> = strs(&rats(minpoly)?);
        if let Some(f) = self.0.get(&key) {
            return Ok(f.clone());
        }
        let f = Arc::new(NumberFieldR::new(&QPoly::new(rats(minpoly)?))?);
        self.0.insert(key, f.clone());
        Ok(f)
    }
}

fn algebra(desc: &AlgebraInput, fields: &mut Fields) -> Result<EtaleAlgebra> {
    let comps = desc.components.iter().map(|p| fields.get(p)).collect::<Result<Vec<_>>>()?;
    Ok(match &desc.hom_table {
        Some(t) => EtaleAlgebra::with_hom_table(comps, t.clone())?,
        None => EtaleAlgebra::new(comps),
    })
}

fn element(b: &EtaleAlgebra, parts: &[Vec<String>]) -> Result<AlgebraElement> {
    if parts.len() != b.component_count() {
        bail!("element has {} parts, the algebra has {} components", parts.len(), b.component_count());
    }
    let parts = parts
        .iter()
        .zip(b.components())
        .map(|(p, f)| {
            let mut v = rats(p)?;
            if v.len() > f.degree() {
                bail!("element part has {} coordinates, field degree is {}", v.len(), f.degree());
            }
            v.resize(f.degree(), Rational::from_integer(0.into()));
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AlgebraElement::new(parts))
}

fn algebra_desc(b: &EtaleAlgebra) -> AlgebraInput {
    AlgebraInput {
        components: b.components().iter().map(|f| strs(f.minpoly().coeffs())).collect(),
        hom_table: Some(b.hom_table().to_vec()),
    }
}

/// Reads JSON from a file, reporting parse errors with line and column.
pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn parse_construct(desc: &ConstructInput) -> Result<(EtaleAlgebra, Vec<AlgebraElement>)> {
    let mut fields = Fields::default();
    let b = algebra(&desc.algebra, &mut fields)?;
    let basis = desc.basis.iter().map(|e| element(&b, e)).collect::<Result<Vec<_>>>()?;
    Ok((b, basis))
}

/// Builds the lattice of a `construct` input.
pub fn construct_from_input(desc: &ConstructInput) -> Result<Lattice> {
    let (b, basis) = parse_construct(desc)?;
    Ok(construct_lattice(&b, &basis)?)
}

pub fn lattice_from_file(f: &LatticeFile) -> Result<Lattice> {
    let mut fields = Fields::default();
    let origin = match &f.origin {
        Some(o) => {
            let b = algebra(&o.algebra, &mut fields)?;
            let basis = o.basis.iter().map(|e| element(&b, e)).collect::<Result<Vec<_>>>()?;
            Some(LatticeOrigin { algebra: b, basis })
        }
        None => None,
    };
    match (&f.rows, &f.matrix) {
        (Some(rows), None) => {
            let rows = rows
                .iter()
                .map(|r| {
                    let field = match &r.field {
                        None => EmbeddedField::rationals(),
                        Some(fs) => {
                            let k = fields.get(&fs.minpoly)?;
                            if fs.embedding >= k.degree() {
                                bail!("embedding {} out of range for a field of degree {}", fs.embedding, k.degree());
                            }
                            EmbeddedField::new(k, fs.embedding)
                        }
                    };
                    let scale = match &r.scale {
                        None => Radical::one(),
                        Some(s) => Radical::new(rat(&s.base)?, s.index)?,
                    };
                    let entries = r
                        .entries
                        .iter()
                        .map(|e| {
                            let mut v = rats(e)?;
                            if v.len() > field.degree() {
                                bail!("entry has {} coordinates, field degree is {}", v.len(), field.degree());
                            }
                            v.resize(field.degree(), Rational::from_integer(0.into()));
                            Ok(v)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(LatticeRow { field, scale, entries })
                })
                .collect::<Result<Vec<_>>>()?;
            let n = rows.len();
            if rows.iter().any(|r| r.entries.len() != n) {
                bail!("basis matrix is not square");
            }
            Ok(Lattice::from_rows(rows, origin, false)?)
        }
        (None, Some(m)) => {
            let mut numeric = false;
            let rows = m
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|v| match v {
                            Value::String(s) => rat(s),
                            Value::Number(x) => {
                                let x = x.as_f64().ok_or_else(|| anyhow!("bad number {x}"))?;
                                numeric = true;
                                from_f64(x).ok_or_else(|| anyhow!("non-finite entry"))
                            }
                            other => bail!("matrix entries are strings or numbers, got {other}"),
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let n = rows.len();
            if n == 0 || rows.iter().any(|r| r.len() != n) {
                bail!("basis matrix is not square");
            }
            let rows = rows.iter().map(|r| LatticeRow::rational(r)).collect();
            Ok(Lattice::from_rows(rows, origin, numeric)?)
        }
        (Some(_), Some(_)) => bail!("give either rows or matrix, not both"),
        (None, None) => bail!("lattice file needs rows or matrix"),
    }
}

pub fn lattice_to_file(l: &Lattice) -> LatticeFile {
    let rows = l
        .rows()
        .iter()
        .map(|r| RowDesc {
            field: (!r.field.field.is_rationals())
                .then(|| FieldDesc { minpoly: strs(r.field.field.minpoly().coeffs()), embedding: r.field.k }),
            scale: (!r.scale.is_one())
                .then(|| RadicalDesc { base: r.scale.base().to_string(), index: r.scale.index() }),
            entries: r.entries.iter().map(|e| strs(e)).collect(),
        })
        .collect();
    let origin = l.origin().map(|o| OriginDesc {
        algebra: algebra_desc(&o.algebra),
        basis: o.basis.iter().map(|e| e.parts.iter().map(|p| strs(p)).collect()).collect(),
    });
    LatticeFile { rows: Some(rows), matrix: None, origin, covolume: Some(l.covolume().describe()) }
}

/// Reads a lattice file.
pub fn read_lattice(path: &Path) -> Result<Lattice> {
    let f: LatticeFile = read_json(path)?;
    lattice_from_file(&f).with_context(|| format!("building the lattice in {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    std::fs::write(path, s).with_context(|| format!("writing {}", path.display()))
}

/// A rational matrix as a lattice file.
pub fn matrix_file(m: &QMatrix) -> LatticeFile {
    let n = m.nrows();
    LatticeFile {
        rows: None,
        matrix: Some(
            (0..n).map(|i| (0..m.ncols()).map(|j| Value::String(m.row(i)[j].to_string())).collect()).collect(),
        ),
        origin: None,
        covolume: None,
    }
}
