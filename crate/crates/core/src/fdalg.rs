//! Finite-dimensional C*-algebras `⊕ M_{d_i}`, their ideals, and actions of
//! inverse semigroups by partial *-isomorphisms between ideals.
//!
//! For such an action the fibre over `t` is `H_t = I_{t*t}` with
//! `⟨ξ, η⟩ = ξ*η`, `⟪ξ, η⟫ = α_t(ξη*)` and left action `a·ξ = α_t⁻¹(a)ξ`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::isg::{Elem, InverseSemigroup};
use crate::linalg::{self, c, CMat, C64};

/// `⊕ M_{d_i}` given by its block sizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FdAlgebra {
    blocks: Vec<usize>,
}

impl FdAlgebra {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::structural("an algebra needs at least one block"));
        }
        if blocks.len() > 64 {
            return Err(Error::structural("at most 64 blocks are supported"));
        }
        if blocks.contains(&0) {
            return Err(Error::structural("block sizes must be positive"));
        }
        Ok(FdAlgebra { blocks })
    }

    /// `C^n`.
    pub fn commutative(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_size(&self, b: usize) -> usize {
        self.blocks[b]
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|d| d * d).sum()
    }

    pub fn full_ideal(&self) -> Ideal {
        Ideal::from_blocks(0..self.block_count())
    }

    pub fn ideal_dim(&self, ideal: Ideal) -> usize {
        ideal.blocks().map(|b| self.blocks[b] * self.blocks[b]).sum()
    }

    /// Dimension of the defining representation `⊕ C^{d_i}`.
    pub fn rep_dim(&self) -> usize {
        self.blocks.iter().sum()
    }
}

/// An ideal of an [`FdAlgebra`], i.e. a set of blocks.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Ideal(u64);

impl Ideal {
    pub const ZERO: Ideal = Ideal(0);

    pub fn from_blocks(blocks: impl IntoIterator<Item = usize>) -> Self {
        Ideal(blocks.into_iter().fold(0, |acc, b| acc | (1 << b)))
    }

    pub fn contains(self, b: usize) -> bool {
        b < 64 && self.0 & (1 << b) != 0
    }

    pub fn blocks(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&b| self.contains(b))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Ideal) -> Ideal {
        Ideal(self.0 | other.0)
    }

    pub fn intersection(self, other: Ideal) -> Ideal {
        Ideal(self.0 & other.0)
    }

    pub fn difference(self, other: Ideal) -> Ideal {
        Ideal(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Ideal) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.blocks()).finish()
    }
}

impl Serialize for Ideal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.blocks())
    }
}

/// An element of an [`FdAlgebra`]: one square matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgElement {
    blocks: Vec<CMat>,
}

impl AlgElement {
    pub fn zero(alg: &FdAlgebra) -> Self {
        AlgElement {
            blocks: alg.blocks.iter().map(|&d| CMat::zeros(d, d)).collect(),
        }
    }

    pub fn identity(alg: &FdAlgebra) -> Self {
        Self::support_projection(alg, alg.full_ideal())
    }

    /// The central projection `[I]`.
    pub fn support_projection(alg: &FdAlgebra, ideal: Ideal) -> Self {
        AlgElement {
            blocks: alg
                .blocks
                .iter()
                .enumerate()
                .map(|(b, &d)| if ideal.contains(b) { CMat::identity(d, d) } else { CMat::zeros(d, d) })
                .collect(),
        }
    }

    pub fn from_blocks(alg: &FdAlgebra, blocks: Vec<CMat>) -> Result<Self> {
        if blocks.len() != alg.block_count() {
            return Err(Error::structural(format!(
                "{} matrices for {} blocks",
                blocks.len(),
                alg.block_count()
            )));
        }
        for (b, m) in blocks.iter().enumerate() {
            if m.shape() != (alg.blocks[b], alg.blocks[b]) {
                return Err(Error::structural(format!("block {b} has shape {:?}", m.shape())));
            }
            if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::structural(format!("block {b} has a non-finite entry")));
            }
        }
        Ok(AlgElement { blocks })
    }

    /// The matrix unit `e_{pq}` of block `b`.
    pub fn matrix_unit(alg: &FdAlgebra, b: usize, p: usize, q: usize) -> Self {
        let mut out = Self::zero(alg);
        out.blocks[b][(p, q)] = c(1.0);
        out
    }

    /// Standard Gaussian entries on the blocks of `ideal`, zero elsewhere.
    pub fn random(alg: &FdAlgebra, ideal: Ideal, rng: &mut impl Rng) -> Self {
        AlgElement {
            blocks: alg
                .blocks
                .iter()
                .enumerate()
                .map(|(b, &d)| if ideal.contains(b) { linalg::random_gaussian(rng, d, d) } else { CMat::zeros(d, d) })
                .collect(),
        }
    }

    pub fn block(&self, b: usize) -> &CMat {
        &self.blocks[b]
    }

    pub fn block_mut(&mut self, b: usize) -> &mut CMat {
        &mut self.blocks[b]
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn star(&self) -> Self {
        AlgElement {
            blocks: self.blocks.iter().map(|m| m.adjoint()).collect(),
        }
    }

    pub fn scale(&self, z: C64) -> Self {
        AlgElement {
            blocks: self.blocks.iter().map(|m| m * z).collect(),
        }
    }

    /// C*-norm: the largest blockwise operator norm.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(linalg::op_norm).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(linalg::max_abs).fold(0.0, f64::max)
    }

    pub fn is_close(&self, other: &AlgElement, tol: f64) -> bool {
        (self - other).max_abs() <= tol
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    /// Blocks carrying an entry above `tol`.
    pub fn support(&self, tol: f64) -> Ideal {
        Ideal::from_blocks((0..self.blocks.len()).filter(|&b| linalg::max_abs(&self.blocks[b]) > tol))
    }

    /// `ξ·[I]`.
    pub fn compress(&self, ideal: Ideal) -> Self {
        AlgElement {
            blocks: self
                .blocks
                .iter()
                .enumerate()
                .map(|(b, m)| if ideal.contains(b) { m.clone() } else { CMat::zeros(m.nrows(), m.ncols()) })
                .collect(),
        }
    }

    /// Trace pairing `Σ_b tr(D_b a_b)`.
    pub fn pair(&self, density: &[CMat]) -> C64 {
        self.blocks.iter().zip(density).map(|(a, d)| (d * a).trace()).sum()
    }
}

impl Add for &AlgElement {
    type Output = AlgElement;
    fn add(self, rhs: &AlgElement) -> AlgElement {
        AlgElement {
            blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &AlgElement {
    type Output = AlgElement;
    fn sub(self, rhs: &AlgElement) -> AlgElement {
        AlgElement {
            blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &AlgElement {
    type Output = AlgElement;
    fn mul(self, rhs: &AlgElement) -> AlgElement {
        AlgElement {
            blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a * b).collect(),
        }
    }
}

impl Neg for &AlgElement {
    type Output = AlgElement;
    fn neg(self) -> AlgElement {
        self.scale(c(-1.0))
    }
}

/// A *-isomorphism `I_{t*t} → I_{tt*}` given blockwise by `m ↦ u m u*`
/// into block `β(b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockIso {
    source: Ideal,
    block_map: Vec<Option<usize>>,
    unitaries: Vec<Option<CMat>>,
}

impl BlockIso {
    /// `pieces` lists `(b, β(b), u_b)` for each source block.
    pub fn new(alg: &FdAlgebra, pieces: Vec<(usize, usize, CMat)>) -> Result<Self> {
        let k = alg.block_count();
        let mut block_map = vec![None; k];
        let mut unitaries = vec![None; k];
        for (b, target, u) in pieces {
            if b >= k || target >= k {
                return Err(Error::structural(format!("block {b}->{target} out of range")));
            }
            if alg.blocks[b] != alg.blocks[target] {
                return Err(Error::structural(format!(
                    "block {b} of size {} cannot map to block {target} of size {}",
                    alg.blocks[b], alg.blocks[target]
                )));
            }
            if u.shape() != (alg.blocks[b], alg.blocks[b]) {
                return Err(Error::structural(format!("implementer for block {b} has shape {:?}", u.shape())));
            }
            if block_map[b].replace(target).is_some() {
                return Err(Error::structural(format!("block {b} is mapped twice")));
            }
            unitaries[b] = Some(linalg::normalize_phase(&u));
        }
        Ok(BlockIso {
            source: Ideal::from_blocks((0..k).filter(|&b| block_map[b].is_some())),
            block_map,
            unitaries,
        })
    }

    pub fn identity_on(alg: &FdAlgebra, ideal: Ideal) -> Self {
        let pieces = ideal.blocks().map(|b| (b, b, CMat::identity(alg.blocks[b], alg.blocks[b]))).collect();
        Self::new(alg, pieces).expect("identity pieces are well formed")
    }

    pub fn source(&self) -> Ideal {
        self.source
    }

    pub fn target(&self) -> Ideal {
        Ideal::from_blocks(self.block_map.iter().flatten().copied())
    }

    pub fn block_map(&self, b: usize) -> Option<usize> {
        self.block_map[b]
    }

    pub fn unitary(&self, b: usize) -> Option<&CMat> {
        self.unitaries[b].as_ref()
    }

    /// `α(ξ·[source])`.
    pub fn apply(&self, xi: &AlgElement) -> AlgElement {
        let mut out = AlgElement {
            blocks: xi.blocks.iter().map(|m| CMat::zeros(m.nrows(), m.ncols())).collect(),
        };
        for b in self.source.blocks() {
            let u = self.unitaries[b].as_ref().expect("source block has an implementer");
            out.blocks[self.block_map[b].expect("source block is mapped")] = u * &xi.blocks[b] * u.adjoint();
        }
        out
    }

    /// `α⁻¹(η·[target])`.
    pub fn apply_inverse(&self, eta: &AlgElement) -> AlgElement {
        let mut out = AlgElement {
            blocks: eta.blocks.iter().map(|m| CMat::zeros(m.nrows(), m.ncols())).collect(),
        };
        for b in self.source.blocks() {
            let u = self.unitaries[b].as_ref().expect("source block has an implementer");
            out.blocks[b] = u.adjoint() * &eta.blocks[self.block_map[b].expect("source block is mapped")] * u;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FdViolationKind {
    NotUnitary,
    NotInjective,
    UnitNotIdentity,
    IdempotentNotIdentity,
    InverseMismatch,
    CompositionDomain,
    CompositionMap,
    RestrictionMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FdViolation {
    pub kind: FdViolationKind,
    pub t: Elem,
    pub u: Option<Elem>,
    pub block: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FdActionReport {
    pub valid: bool,
    pub violations: Vec<FdViolation>,
}

/// An action of `S` on an [`FdAlgebra`] by partial *-isomorphisms.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialIsoAction {
    semigroup: InverseSemigroup,
    algebra: FdAlgebra,
    maps: Vec<BlockIso>,
    /// `I_{t,u}`, indexed `t * size + u`.
    meets: Vec<Ideal>,
}

impl PartialIsoAction {
    /// Assembles an action without validating it; a missing unit is adjoined
    /// and acts as the identity.
    pub fn new(semigroup: InverseSemigroup, algebra: FdAlgebra, mut maps: Vec<BlockIso>) -> Result<Self> {
        if maps.len() != semigroup.size() {
            return Err(Error::structural(format!(
                "{} maps for a semigroup of size {}",
                maps.len(),
                semigroup.size()
            )));
        }
        if maps.iter().any(|m| m.block_map.len() != algebra.block_count()) {
            return Err(Error::structural("a map is defined for a different algebra"));
        }
        let semigroup = match semigroup.unit() {
            Some(_) => semigroup,
            None => {
                maps.push(BlockIso::identity_on(&algebra, algebra.full_ideal()));
                semigroup.adjoin_unit()
            }
        };
        let n = semigroup.size();
        let mut meets = vec![Ideal::ZERO; n * n];
        for t in 0..n {
            for u in 0..n {
                meets[t * n + u] = semigroup
                    .lower_bounds(t, u)
                    .into_iter()
                    .fold(Ideal::ZERO, |acc, v| acc.union(maps[v].source));
            }
        }
        Ok(PartialIsoAction {
            semigroup,
            algebra,
            maps,
            meets,
        })
    }

    pub fn semigroup(&self) -> &InverseSemigroup {
        &self.semigroup
    }

    pub fn algebra(&self) -> &FdAlgebra {
        &self.algebra
    }

    pub fn map(&self, t: Elem) -> &BlockIso {
        &self.maps[t]
    }

    /// `I_{t*t}`, the domain of `α_t` and the space `H_t`.
    pub fn source(&self, t: Elem) -> Ideal {
        self.maps[t].source
    }

    /// `I_{tt*}`.
    pub fn target(&self, t: Elem) -> Ideal {
        self.maps[t].target()
    }

    pub fn alpha(&self, t: Elem, xi: &AlgElement) -> AlgElement {
        self.maps[t].apply(xi)
    }

    pub fn alpha_inverse(&self, t: Elem, eta: &AlgElement) -> AlgElement {
        self.maps[t].apply_inverse(eta)
    }

    /// `I_{t,u}`: the union of the source ideals of all `v ≤ t, u`.
    pub fn ideal_i_tu(&self, t: Elem, u: Elem) -> Ideal {
        self.meets[t * self.semigroup.size() + u]
    }

    /// `⟨ξ, η⟩ = ξ*η` in `H_t`.
    pub fn right_inner(&self, xi: &AlgElement, eta: &AlgElement) -> AlgElement {
        &xi.star() * eta
    }

    /// `⟪ξ, η⟫ = α_t(ξη*)` in `H_t`.
    pub fn left_inner(&self, t: Elem, xi: &AlgElement, eta: &AlgElement) -> AlgElement {
        self.alpha(t, &(xi * &eta.star()))
    }

    /// `a·ξ = α_t⁻¹(a)ξ` in `H_t`.
    pub fn left_action(&self, t: Elem, a: &AlgElement, xi: &AlgElement) -> AlgElement {
        &self.alpha_inverse(t, a) * xi
    }

    /// `μ_{t,u}(ξ ⊗ η) = α_u⁻¹(ξ·α_u(η)) ∈ H_{tu}`.
    pub fn mu(&self, _t: Elem, u: Elem, xi: &AlgElement, eta: &AlgElement) -> AlgElement {
        self.alpha_inverse(u, &(xi * &self.alpha(u, eta)))
    }

    pub fn in_fibre(&self, t: Elem, xi: &AlgElement, tol: f64) -> bool {
        xi.support(tol).is_subset(self.source(t))
    }

    /// `θ_{u,t}` on `H_t·I_{t,u}`. The inclusions of fibres over `v ≤ t` are
    /// literal here, so the map is the identity; each piece of `ξ` over a
    /// lower bound `v` is checked to be carried by `α_t`, `α_v` and `α_u`
    /// alike before `ξ` is returned.
    pub fn theta(&self, u: Elem, t: Elem, xi: &AlgElement, tol: f64) -> Result<AlgElement> {
        let meet = self.ideal_i_tu(t, u);
        if !xi.support(tol).is_subset(meet) {
            return Err(Error::precondition(format!(
                "element is not supported in I_{{{},{}}}",
                self.semigroup.label(t),
                self.semigroup.label(u)
            )));
        }
        let mut covered = Ideal::ZERO;
        let mut rebuilt = AlgElement::zero(&self.algebra);
        for v in self.semigroup.lower_bounds(t, u) {
            let fresh = self.source(v).difference(covered);
            covered = covered.union(fresh);
            if fresh.is_empty() {
                continue;
            }
            let piece = xi.compress(fresh);
            let via_v = self.alpha(v, &piece);
            if !via_v.is_close(&self.alpha(t, &piece), tol * 10.0) || !via_v.is_close(&self.alpha(u, &piece), tol * 10.0) {
                return Err(Error::internal(format!("theta: fibre inclusion over {v} is not compatible")));
            }
            rebuilt = &rebuilt + &piece;
        }
        if !rebuilt.is_close(xi, tol) {
            return Err(Error::internal("theta: lower-bound pieces do not reassemble the element"));
        }
        Ok(rebuilt)
    }

    /// `J_t(ξ*) = α_t(ξ)* ∈ H_{t*}`, checked against
    /// `μ_{t*,t}(J_t(ξ*) ⊗ η) = ⟨ξ, η⟩` on matrix units `η` of `H_t`.
    pub fn involution_j(&self, t: Elem, xi: &AlgElement, tol: f64) -> Result<AlgElement> {
        let xi = xi.compress(self.source(t));
        let j = self.alpha(t, &xi).star();
        let ts = self.semigroup.inv(t);
        for b in self.source(t).blocks() {
            let d = self.algebra.blocks[b];
            for p in 0..d {
                for q in 0..d {
                    let eta = AlgElement::matrix_unit(&self.algebra, b, p, q);
                    let lhs = self.mu(ts, t, &j, &eta);
                    let scale = xi.max_abs().max(1.0);
                    if !lhs.is_close(&self.right_inner(&xi, &eta), tol * scale) {
                        return Err(Error::internal(format!("J_{t} fails its defining identity on block {b}")));
                    }
                }
            }
        }
        Ok(j)
    }

    /// Exhaustive check of the action axioms at tolerance `tol`.
    pub fn validate(&self, tol: f64) -> FdActionReport {
        use FdViolationKind::*;
        let s = &self.semigroup;
        let mut found: Vec<FdViolation> = Vec::new();
        let mut record = |kind, t, u, block| {
            if !found.iter().any(|v: &FdViolation| v.kind == kind) {
                found.push(FdViolation { kind, t, u, block });
            }
        };
        let same = |a: Option<&CMat>, b: Option<&CMat>| match (a, b) {
            (Some(a), Some(b)) => linalg::phase_distance(a, b) <= tol,
            _ => false,
        };

        for t in s.elements() {
            let m = &self.maps[t];
            for b in m.source.blocks() {
                if !linalg::is_unitary(m.unitaries[b].as_ref().expect("mapped"), tol) {
                    record(NotUnitary, t, None, Some(b));
                }
            }
            if m.target().len() != m.source.len() {
                record(NotInjective, t, None, None);
            }
            if s.is_idempotent(t) {
                let bad = m.source.blocks().find(|&b| {
                    let d = self.algebra.blocks[b];
                    m.block_map[b] != Some(b) || !same(m.unitaries[b].as_ref(), Some(&CMat::identity(d, d)))
                });
                if let Some(b) = bad {
                    let kind = if Some(t) == s.unit() { UnitNotIdentity } else { IdempotentNotIdentity };
                    record(kind, t, None, Some(b));
                }
            }
        }
        if let Some(one) = s.unit() {
            if self.maps[one].source != self.algebra.full_ideal() {
                record(UnitNotIdentity, one, None, None);
            }
        }
        for t in s.elements() {
            let (m, mi) = (&self.maps[t], &self.maps[s.inv(t)]);
            if mi.source != m.target() {
                record(InverseMismatch, t, Some(s.inv(t)), None);
                continue;
            }
            for b in m.source.blocks() {
                let tb = m.block_map[b].expect("mapped");
                let back = mi.unitaries[tb].as_ref().map(|u| u.adjoint());
                if mi.block_map[tb] != Some(b) || !same(back.as_ref(), m.unitaries[b].as_ref()) {
                    record(InverseMismatch, t, Some(s.inv(t)), Some(b));
                }
            }
        }
        for t in s.elements() {
            for u in s.elements() {
                let (mt, mu, mtu) = (&self.maps[t], &self.maps[u], &self.maps[s.mul(t, u)]);
                let expected = Ideal::from_blocks(
                    mu.source
                        .blocks()
                        .filter(|&b| mt.source.contains(mu.block_map[b].expect("mapped"))),
                );
                if expected != mtu.source {
                    record(CompositionDomain, t, Some(u), expected.difference(mtu.source).union(mtu.source.difference(expected)).blocks().next());
                    continue;
                }
                for b in expected.blocks() {
                    let mid = mu.block_map[b].expect("mapped");
                    let composite = mt.unitaries[mid].as_ref().expect("mapped") * mu.unitaries[b].as_ref().expect("mapped");
                    if mtu.block_map[b] != mt.block_map[mid] || !same(mtu.unitaries[b].as_ref(), Some(&composite)) {
                        record(CompositionMap, t, Some(u), Some(b));
                    }
                }
            }
        }
        for v in s.elements() {
            for t in s.elements().filter(|&t| t != v && s.leq(v, t)) {
                let (mv, mt) = (&self.maps[v], &self.maps[t]);
                let bad = mv.source.blocks().find(|&b| {
                    !mt.source.contains(b) || mv.block_map[b] != mt.block_map[b] || !same(mv.unitaries[b].as_ref(), mt.unitaries[b].as_ref())
                });
                if !mv.source.is_subset(mt.source) || bad.is_some() {
                    record(RestrictionMismatch, v, Some(t), bad);
                }
            }
        }
        FdActionReport {
            valid: found.is_empty(),
            violations: found,
        }
    }

    pub fn ensure_valid(&self, tol: f64) -> Result<()> {
        match self.validate(tol).violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::precondition(format!("invalid fd action: {v:?}"))),
        }
    }
}

/// The complement of `i` inside `j`: fd ideals are always complemented.
pub fn complement_check(alg: &FdAlgebra, i: Ideal, j: Ideal) -> Result<Ideal> {
    if !i.is_subset(j) {
        return Err(Error::precondition(format!("{i:?} is not contained in {j:?}")));
    }
    let complement = j.difference(i);
    let sum = &AlgElement::support_projection(alg, i) + &AlgElement::support_projection(alg, complement);
    if sum != AlgElement::support_projection(alg, j) {
        return Err(Error::internal("support projections of a splitting do not add up"));
    }
    Ok(complement)
}
