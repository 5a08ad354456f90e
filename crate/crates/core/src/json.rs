//! JSON exchange documents and their conversions.
//!
//! Points and semigroup elements are referred to by label; matrices are
//! `{"re": [[..]], "im": [[..]]}` with `im` optional.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::act::{GermGroupoid, PartialMap, SpaceAction};
use crate::error::{Error, Result};
use crate::fdalg::{AlgElement, BlockIso, FdAlgebra, Ideal, PartialIsoAction};
use crate::isg::{Elem, InverseSemigroup, PartialBijection, DEFAULT_CAP};
use crate::linalg::{C64, CMat};
use crate::topo::{set_of, FiniteSpace, PointSet};
use crate::xprod::iau::IauData;
use crate::xprod::CrossedElement;

/// Parses a document, reporting the position of malformed input.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

/// A semigroup as a Cayley table (`table`, or `mul` with optional `size`),
/// or as the closure of partial bijections of `points` points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default, alias = "mul", skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, alias = "inv", skip_serializing_if = "Option::is_none")]
    pub inverse: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<GeneratorDoc>>,
}

/// A partial bijection of `0..points`: the image of every point (`null`
/// where undefined), or `{"map": {"src": dst}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorDoc {
    Images(Vec<Option<usize>>),
    Map(SparseMapDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SparseMapDoc {
    pub map: BTreeMap<String, usize>,
}

impl GeneratorDoc {
    fn build(&self, points: usize) -> Result<PartialBijection> {
        let pairs: Vec<(usize, usize)> = match self {
            GeneratorDoc::Images(images) => {
                if images.len() != points {
                    return Err(Error::structural(format!("generator has {} entries for {points} points", images.len())));
                }
                images.iter().enumerate().filter_map(|(p, q)| q.map(|q| (p, q))).collect()
            }
            GeneratorDoc::Map(sparse) => sparse
                .map
                .iter()
                .map(|(p, &q)| p.parse().map(|p| (p, q)).map_err(|_| Error::structural(format!("point {p:?} is not an index"))))
                .collect::<Result<_>>()?,
        };
        PartialBijection::new(points, &pairs)
    }
}

/// Inverses read off the table: the `u` with `tut = t` and `utu = u`.
/// Missing or ambiguous inverses are left to validation to report.
pub fn derive_inverse(table: &[Vec<usize>]) -> Vec<usize> {
    let n = table.len();
    let mul = |a: usize, b: usize| table.get(a).and_then(|r| r.get(b)).copied().unwrap_or(usize::MAX);
    (0..n)
        .map(|t| {
            (0..n)
                .find(|&u| {
                    let tu = mul(t, u);
                    let ut = mul(u, t);
                    tu < n && ut < n && mul(tu, t) == t && mul(ut, u) == u
                })
                .unwrap_or(t)
        })
        .collect()
}

impl SemigroupDoc {
    pub fn build(&self, cap: usize) -> Result<InverseSemigroup> {
        match (self.checked_table()?, &self.generators) {
            (Some(table), None) => {
                let inverse = self.inverse.clone().unwrap_or_else(|| derive_inverse(table));
                InverseSemigroup::new(table.clone(), inverse, self.unit, self.zero, self.labels.clone())
            }
            (None, Some(generators)) => {
                let points = self.points.ok_or_else(|| Error::structural("generators need \"points\""))?;
                let maps = generators.iter().map(|g| g.build(points)).collect::<Result<Vec<_>>>()?;
                Ok(InverseSemigroup::from_partial_bijections(points, &maps, cap)?.0)
            }
            _ => Err(Error::structural("a semigroup needs exactly one of \"table\" and \"generators\"")),
        }
    }

    /// The Cayley table, checked against `size` when both are given.
    pub fn checked_table(&self) -> Result<Option<&Vec<Vec<usize>>>> {
        match (&self.table, self.size) {
            (Some(table), Some(n)) if table.len() != n => {
                Err(Error::structural(format!("table has {} rows but size is {n}", table.len())))
            }
            (None, Some(_)) => Err(Error::structural("\"size\" given without a table")),
            (table, _) => Ok(table.as_ref()),
        }
    }

    pub fn from_semigroup(s: &InverseSemigroup) -> Self {
        SemigroupDoc {
            size: None,
            table: Some(s.table()),
            inverse: Some(s.inverse_table().to_vec()),
            unit: s.unit(),
            zero: s.zero(),
            labels: Some(s.labels().to_vec()),
            points: None,
            generators: None,
        }
    }
}

/// A space on labelled points, topologised either by generating open sets
/// or by the full list of opens; with neither the space is discrete.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub points: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subbasis: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opens: Option<Vec<Vec<String>>>,
}

fn point_index(space: &FiniteSpace, label: &str) -> Result<usize> {
    space.find(label).ok_or_else(|| Error::structural(format!("unknown point {label:?}")))
}

fn labelled_set(labels: &[String], members: &[String]) -> Result<PointSet> {
    let idx = members
        .iter()
        .map(|m| labels.iter().position(|l| l == m).ok_or_else(|| Error::structural(format!("unknown point {m:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(set_of(labels.len(), idx))
}

impl SpaceDoc {
    pub fn build(&self) -> Result<FiniteSpace> {
        let sets = |sets: &[Vec<String>]| sets.iter().map(|s| labelled_set(&self.points, s)).collect::<Result<Vec<_>>>();
        match (&self.subbasis, &self.opens) {
            (None, None) => FiniteSpace::discrete(self.points.clone()),
            (Some(subbasis), None) => FiniteSpace::from_subbasis(self.points.clone(), &sets(subbasis)?),
            (None, Some(opens)) => FiniteSpace::from_opens(self.points.clone(), &sets(opens)?),
            (Some(_), Some(_)) => Err(Error::structural("a space takes at most one of \"subbasis\" and \"opens\"")),
        }
    }

    pub fn from_space(x: &FiniteSpace) -> Self {
        SpaceDoc {
            points: x.labels().to_vec(),
            subbasis: Some(
                (0..x.len())
                    .map(|p| x.minimal_neighbourhood(p).ones().map(|q| x.label(q).to_string()).collect())
                    .collect(),
            ),
            opens: None,
        }
    }
}

fn element_index(s: &InverseSemigroup, label: &str) -> Result<Elem> {
    s.find(label).ok_or_else(|| Error::structural(format!("unknown semigroup element {label:?}")))
}

/// An action by partial maps: `maps[t][x] = θ_t(x)`, optionally wrapped as
/// `{"domain": [..], "map": {..}}`; elements left out act with empty domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub semigroup: SemigroupDoc,
    pub space: SpaceDoc,
    pub maps: BTreeMap<String, MapDoc>,
    #[serde(default)]
    pub zero_preserving: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapDoc {
    Explicit(DomainMapDoc),
    Pairs(BTreeMap<String, String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainMapDoc {
    pub domain: Vec<String>,
    pub map: BTreeMap<String, String>,
}

impl MapDoc {
    fn pairs(&self) -> Result<&BTreeMap<String, String>> {
        match self {
            MapDoc::Pairs(map) => Ok(map),
            MapDoc::Explicit(d) => {
                let mut domain = d.domain.clone();
                domain.sort();
                domain.dedup();
                if domain.len() != d.domain.len() || !domain.iter().eq(d.map.keys()) {
                    return Err(Error::structural("\"domain\" must list exactly the keys of \"map\""));
                }
                Ok(&d.map)
            }
        }
    }
}

impl ActionDoc {
    pub fn build(&self, cap: usize) -> Result<SpaceAction> {
        let s = self.semigroup.build(cap)?;
        let x = self.space.build()?;
        let mut maps = vec![PartialMap::new(x.len(), &[])?; s.size()];
        for (t, map) in &self.maps {
            let t = element_index(&s, t)?;
            let pairs = map
                .pairs()?
                .iter()
                .map(|(a, b)| Ok((point_index(&x, a)?, point_index(&x, b)?)))
                .collect::<Result<Vec<_>>>()?;
            maps[t] = PartialMap::new(x.len(), &pairs)?;
        }
        SpaceAction::new(s, x, maps, self.zero_preserving)
    }

    pub fn from_action(a: &SpaceAction) -> Self {
        let s = a.semigroup();
        let x = a.space();
        let maps = s
            .elements()
            .map(|t| {
                let map = a.map(t).pairs().into_iter().map(|(p, q)| (x.label(p).to_string(), x.label(q).to_string())).collect();
                (s.label(t).to_string(), MapDoc::Pairs(map))
            })
            .collect();
        ActionDoc {
            semigroup: SemigroupDoc::from_semigroup(s),
            space: SpaceDoc::from_space(x),
            maps,
            zero_preserving: a.is_zero_preserving(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixDoc {
    pub fn build(&self) -> Result<CMat> {
        let rows = self.re.len();
        let cols = self.re.first().map_or(0, Vec::len);
        let shape_ok = |m: &Vec<Vec<f64>>| m.len() == rows && m.iter().all(|r| r.len() == cols);
        if !shape_ok(&self.re) || self.im.as_ref().is_some_and(|im| !shape_ok(im)) {
            return Err(Error::structural("matrix rows have unequal lengths"));
        }
        Ok(CMat::from_fn(rows, cols, |i, j| {
            C64::new(self.re[i][j], self.im.as_ref().map_or(0.0, |im| im[i][j]))
        }))
    }

    pub fn from_matrix(m: &CMat) -> Self {
        let part = |f: fn(&C64) -> f64| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect();
        let im: Vec<Vec<f64>> = part(|z| z.im);
        MatrixDoc {
            re: part(|z| z.re),
            im: im.iter().flatten().any(|&v| v != 0.0).then_some(im),
        }
    }
}

/// One block of a partial isomorphism: `block ↦ target` by `Ad(unitary)`
/// (identity when omitted).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub block: usize,
    pub target: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<MatrixDoc>,
}

fn build_iso(alg: &FdAlgebra, pieces: &[PieceDoc]) -> Result<BlockIso> {
    let pieces = pieces
        .iter()
        .map(|p| {
            if p.block >= alg.block_count() {
                return Err(Error::structural(format!("block {} out of range", p.block)));
            }
            let d = alg.block_size(p.block);
            let u = match &p.unitary {
                Some(m) => m.build()?,
                None => CMat::identity(d, d),
            };
            Ok((p.block, p.target, u))
        })
        .collect::<Result<Vec<_>>>()?;
    BlockIso::new(alg, pieces)
}

fn iso_doc(iso: &BlockIso) -> Vec<PieceDoc> {
    iso.source()
        .blocks()
        .map(|b| PieceDoc {
            block: b,
            target: iso.block_map(b).expect("block in source"),
            unitary: Some(MatrixDoc::from_matrix(iso.unitary(b).expect("block in source"))),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FdActionDoc {
    pub semigroup: SemigroupDoc,
    pub blocks: Vec<usize>,
    pub maps: BTreeMap<String, IsoDoc>,
}

/// A partial isomorphism as a list of pieces, or as source and target
/// blocks with a block map and the implementing unitaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IsoDoc {
    Explicit(BlockMapDoc),
    Pieces(Vec<PieceDoc>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockMapDoc {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub block_map: BTreeMap<String, usize>,
    #[serde(default)]
    pub unitaries: BTreeMap<String, MatrixDoc>,
}

impl IsoDoc {
    fn pieces(&self) -> Result<Vec<PieceDoc>> {
        let d = match self {
            IsoDoc::Pieces(pieces) => return Ok(pieces.clone()),
            IsoDoc::Explicit(d) => d,
        };
        let sorted = |v: &mut Vec<usize>| {
            v.sort_unstable();
            v.dedup();
        };
        let (mut source, mut target) = (d.source.clone(), d.target.clone());
        sorted(&mut source);
        sorted(&mut target);
        let index = |b: &String| b.parse::<usize>().map_err(|_| Error::structural(format!("block {b:?} is not an index")));
        let block_map = d.block_map.iter().map(|(b, &t)| Ok((index(b)?, t))).collect::<Result<BTreeMap<_, _>>>()?;
        let unitaries = d.unitaries.iter().map(|(b, u)| Ok((index(b)?, u))).collect::<Result<BTreeMap<_, _>>>()?;
        let mut images: Vec<usize> = block_map.values().copied().collect();
        sorted(&mut images);
        if !source.iter().eq(block_map.keys()) || target != images || images.len() != block_map.len() {
            return Err(Error::structural("\"source\" and \"target\" must be the domain and image of \"block_map\""));
        }
        if let Some(b) = unitaries.keys().find(|b| !block_map.contains_key(b)) {
            return Err(Error::structural(format!("unitary given for block {b} outside the source")));
        }
        Ok(block_map
            .iter()
            .map(|(&block, &target)| PieceDoc { block, target, unitary: unitaries.get(&block).map(|&u| u.clone()) })
            .collect())
    }
}

impl FdActionDoc {
    pub fn build(&self, cap: usize) -> Result<PartialIsoAction> {
        let s = self.semigroup.build(cap)?;
        let alg = FdAlgebra::new(self.blocks.clone())?;
        let mut maps = vec![BlockIso::identity_on(&alg, Ideal::ZERO); s.size()];
        for (t, iso) in &self.maps {
            maps[element_index(&s, t)?] = build_iso(&alg, &iso.pieces()?)?;
        }
        PartialIsoAction::new(s, alg, maps)
    }

    pub fn from_action(a: &PartialIsoAction) -> Self {
        let s = a.semigroup();
        FdActionDoc {
            semigroup: SemigroupDoc::from_semigroup(s),
            blocks: a.algebra().blocks().to_vec(),
            maps: s.elements().map(|t| (s.label(t).to_string(), IsoDoc::Pieces(iso_doc(a.map(t))))).collect(),
        }
    }
}

/// `Σ ξ_t δ_t`, each `ξ_t` given block by block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossedElementDoc {
    pub terms: BTreeMap<String, Vec<MatrixDoc>>,
}

impl CrossedElementDoc {
    pub fn build(&self, action: &PartialIsoAction) -> Result<CrossedElement> {
        let s = action.semigroup();
        let terms = self
            .terms
            .iter()
            .map(|(t, blocks)| {
                let blocks = blocks.iter().map(MatrixDoc::build).collect::<Result<Vec<_>>>()?;
                Ok((element_index(s, t)?, AlgElement::from_blocks(action.algebra(), blocks)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CrossedElement::from_terms(terms))
    }

    pub fn from_element(action: &PartialIsoAction, x: &CrossedElement) -> Self {
        let s = action.semigroup();
        CrossedElementDoc {
            terms: x
                .terms()
                .map(|(t, xi)| (s.label(t).to_string(), xi.blocks().iter().map(MatrixDoc::from_matrix).collect()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IauDoc {
    pub blocks: Vec<usize>,
    pub ideal: Vec<usize>,
    pub alpha: Vec<PieceDoc>,
    pub u: Vec<MatrixDoc>,
}

impl IauDoc {
    pub fn build(&self) -> Result<IauData> {
        let alg = FdAlgebra::new(self.blocks.clone())?;
        if let Some(&b) = self.ideal.iter().find(|&&b| b >= alg.block_count()) {
            return Err(Error::structural(format!("ideal block {b} out of range")));
        }
        let alpha = build_iso(&alg, &self.alpha)?;
        let u = AlgElement::from_blocks(&alg, self.u.iter().map(MatrixDoc::build).collect::<Result<Vec<_>>>()?)?;
        IauData::new(alg, Ideal::from_blocks(self.ideal.iter().copied()), alpha, u)
    }

    pub fn from_data(d: &IauData) -> Self {
        IauDoc {
            blocks: d.algebra().blocks().to_vec(),
            ideal: d.ideal().blocks().collect(),
            alpha: iso_doc(d.alpha()),
            u: d.u().blocks().iter().map(MatrixDoc::from_matrix).collect(),
        }
    }
}

/// Arrows by label, the composition as `[a, b, a·b]` triples, and the
/// topology as the minimal neighbourhood of each arrow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidDoc {
    pub arrows: Vec<String>,
    pub units: Vec<String>,
    pub source: BTreeMap<String, String>,
    pub range: BTreeMap<String, String>,
    pub inverse: BTreeMap<String, String>,
    pub composition: Vec<[String; 3]>,
    pub topology: BTreeMap<String, Vec<String>>,
    pub bisections: BTreeMap<String, Vec<String>>,
}

impl GroupoidDoc {
    pub fn from_groupoid(g: &GermGroupoid) -> Self {
        let n = g.len();
        let l = |a: usize| g.label(a).to_string();
        let x = g.action().space();
        let s = g.action().semigroup();
        let mut composition = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if let Some(ab) = g.compose(a, b) {
                    composition.push([l(a), l(b), l(ab)]);
                }
            }
        }
        GroupoidDoc {
            arrows: (0..n).map(l).collect(),
            units: g.units().ones().map(l).collect(),
            source: (0..n).map(|a| (l(a), x.label(g.source(a)).to_string())).collect(),
            range: (0..n).map(|a| (l(a), x.label(g.range(a)).to_string())).collect(),
            inverse: (0..n).map(|a| (l(a), l(g.inverse(a)))).collect(),
            composition,
            topology: (0..n).map(|a| (l(a), g.space().minimal_neighbourhood(a).ones().map(l).collect())).collect(),
            bisections: s.elements().map(|t| (s.label(t).to_string(), g.bisection(t).ones().map(l).collect())).collect(),
        }
    }
}

/// Size cap used when none is given.
pub const DEFAULT_SIZE_CAP: usize = DEFAULT_CAP;
