//! The algebraic crossed product `A ⋊_alg S` of a partial-isomorphism
//! action: normal forms, the conditional expectation `E`, the module
//! `ℓ²(S, A)`, regular and induced representations.
//!
//! Elements are finite sums `Σ ξ_t δ_t` with `ξ_t ∈ H_t = I_{t*t}`. Because
//! the fibre inclusions are literal, `ξδ_t = ξδ_u` whenever `ξ` lies in
//! `I_{t,u}`. For each block `b`, "`b ∈ I_{t,u}`" is an equivalence relation
//! on the slots carrying `b`; the normal form moves every block to the
//! earliest slot of its class in a fixed total order on `S`.

pub mod iau;

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fdalg::{AlgElement, Ideal, PartialIsoAction};
use crate::isg::Elem;
use crate::linalg::{self, c, CMat, CVec, C64};
use crate::tol;

/// Total order on `S` used to pick normal-form slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotOrder {
    /// By element index.
    #[default]
    Index,
    /// Lexicographically by label, ties by index.
    Lex,
}

/// A finite formal sum `Σ ξ_t δ_t`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CrossedElement {
    terms: BTreeMap<Elem, AlgElement>,
}

impl CrossedElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `ξ δ_t`.
    pub fn single(t: Elem, xi: AlgElement) -> Self {
        let mut x = Self::zero();
        x.terms.insert(t, xi);
        x
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Elem, AlgElement)>) -> Self {
        let mut x = Self::zero();
        for (t, xi) in terms {
            x.add_term(t, xi);
        }
        x
    }

    pub fn add_term(&mut self, t: Elem, xi: AlgElement) {
        match self.terms.get_mut(&t) {
            Some(existing) => *existing = &*existing + &xi,
            None => {
                self.terms.insert(t, xi);
            }
        }
    }

    pub fn term(&self, t: Elem) -> Option<&AlgElement> {
        self.terms.get(&t)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Elem, &AlgElement)> {
        self.terms.iter().map(|(&t, xi)| (t, xi))
    }

    pub fn add(&self, other: &CrossedElement) -> CrossedElement {
        let mut out = self.clone();
        for (t, xi) in other.terms() {
            out.add_term(t, xi.clone());
        }
        out
    }

    pub fn sub(&self, other: &CrossedElement) -> CrossedElement {
        self.add(&other.scale(c(-1.0)))
    }

    pub fn scale(&self, z: C64) -> CrossedElement {
        CrossedElement {
            terms: self.terms.iter().map(|(&t, xi)| (t, xi.scale(z))).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(AlgElement::max_abs).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    /// Entrywise comparison of the given representatives.
    pub fn is_close(&self, other: &CrossedElement, tol: f64) -> bool {
        self.sub(other).is_zero(tol)
    }

    fn prune(mut self) -> Self {
        self.terms.retain(|_, xi| !xi.is_zero(0.0));
        self
    }
}

/// A matrix unit `e^b_{pq} δ_t` of the normal-form basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasisUnit {
    pub slot: Elem,
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

/// `A ⋊_alg S` for a validated action and a total order on `S`.
#[derive(Debug, Clone)]
pub struct CrossedProduct {
    action: PartialIsoAction,
    order: Vec<Elem>,
    /// `home[t][b]`: the earliest slot `u` with `b ∈ I_{u,t}`.
    home: Vec<Vec<Option<Elem>>>,
    basis: Vec<BasisUnit>,
    index: HashMap<BasisUnit, usize>,
}

impl CrossedProduct {
    pub fn new(action: PartialIsoAction, order: SlotOrder) -> Result<Self> {
        action.ensure_valid(tol::EXACT)?;
        let s = action.semigroup();
        let mut sequence: Vec<Elem> = s.elements().collect();
        if order == SlotOrder::Lex {
            sequence.sort_by(|&a, &b| s.label(a).cmp(s.label(b)).then(a.cmp(&b)));
        }
        let k = action.algebra().block_count();
        let home: Vec<Vec<Option<Elem>>> = s
            .elements()
            .map(|t| {
                (0..k)
                    .map(|b| {
                        action
                            .source(t)
                            .contains(b)
                            .then(|| *sequence.iter().find(|&&u| action.ideal_i_tu(u, t).contains(b)).expect("t itself qualifies"))
                    })
                    .collect()
            })
            .collect();
        let mut basis = Vec::new();
        for &t in &sequence {
            for b in action.source(t).blocks().filter(|&b| home[t][b] == Some(t)) {
                let d = action.algebra().block_size(b);
                for row in 0..d {
                    for col in 0..d {
                        basis.push(BasisUnit { slot: t, block: b, row, col });
                    }
                }
            }
        }
        let index = basis.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        Ok(CrossedProduct {
            action,
            order: sequence,
            home,
            basis,
            index,
        })
    }

    pub fn action(&self) -> &PartialIsoAction {
        &self.action
    }

    pub fn order(&self) -> &[Elem] {
        &self.order
    }

    /// `dim A ⋊_alg S`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisUnit] {
        &self.basis
    }

    pub fn unit_element(&self, u: BasisUnit) -> CrossedElement {
        CrossedElement::single(u.slot, AlgElement::matrix_unit(self.action.algebra(), u.block, u.row, u.col))
    }

    /// Checks that every `ξ_t` lies in `H_t`.
    pub fn check_element(&self, x: &CrossedElement) -> Result<()> {
        for (t, xi) in x.terms() {
            if t >= self.action.semigroup().size() {
                return Err(Error::structural(format!("no element with index {t}")));
            }
            if xi.blocks().len() != self.action.algebra().block_count() {
                return Err(Error::structural("coefficient has the wrong number of blocks"));
            }
            if !self.action.in_fibre(t, xi, 0.0) {
                return Err(Error::precondition(format!(
                    "coefficient of δ_{} is not supported in its source ideal",
                    self.action.semigroup().label(t)
                )));
            }
        }
        Ok(())
    }

    pub fn normal_form(&self, x: &CrossedElement) -> CrossedElement {
        let mut out = CrossedElement::zero();
        for (t, xi) in x.terms() {
            for b in self.action.source(t).blocks() {
                let part = xi.compress(Ideal::from_blocks([b]));
                out.add_term(self.home[t][b].expect("source block has a home"), part);
            }
        }
        out.prune()
    }

    /// `Σ μ_{t,u}(ξ_t ⊗ η_u) δ_{tu}` without normalising.
    pub fn multiply_raw(&self, x: &CrossedElement, y: &CrossedElement) -> CrossedElement {
        let s = self.action.semigroup();
        let mut out = CrossedElement::zero();
        for (t, xi) in x.terms() {
            for (u, eta) in y.terms() {
                out.add_term(s.mul(t, u), self.action.mu(t, u, xi, eta));
            }
        }
        out
    }

    pub fn multiply(&self, x: &CrossedElement, y: &CrossedElement) -> CrossedElement {
        self.normal_form(&self.multiply_raw(x, y))
    }

    /// `(ξδ_t)* = α_t(ξ)* δ_{t*}`.
    pub fn star_raw(&self, x: &CrossedElement) -> CrossedElement {
        let s = self.action.semigroup();
        CrossedElement::from_terms(x.terms().map(|(t, xi)| (s.inv(t), self.action.alpha(t, xi).star())))
    }

    pub fn star(&self, x: &CrossedElement) -> CrossedElement {
        self.normal_form(&self.star_raw(x))
    }

    /// `E(Σ ξ_t δ_t) = Σ ξ_t·[I_{1,t}]`, evaluated on the given representative.
    pub fn expectation(&self, x: &CrossedElement) -> AlgElement {
        let one = self.action.semigroup().unit().expect("actions carry a unit");
        let mut out = AlgElement::zero(self.action.algebra());
        for (t, xi) in x.terms() {
            out = &out + &xi.compress(self.action.ideal_i_tu(one, t));
        }
        out
    }

    /// `⟨x, y⟩ = E(x* y)`.
    pub fn inner_product(&self, x: &CrossedElement, y: &CrossedElement) -> AlgElement {
        self.expectation(&self.multiply_raw(&self.star_raw(x), y))
    }

    /// Spectrum of `E(x*x)` and agreement of its vanishing with that of the
    /// normal form.
    pub fn positivity_check(&self, x: &CrossedElement) -> Result<PositivityReport> {
        let e = self.inner_product(x, x);
        let scale = x.max_abs().max(1.0);
        let min_eigenvalue = e
            .blocks()
            .iter()
            .map(linalg::min_hermitian_eigenvalue)
            .fold(f64::INFINITY, f64::min);
        let expectation_zero = e.is_zero(tol::EXACT * scale * scale);
        let normal_form_zero = self.normal_form(x).is_zero(tol::EXACT * scale);
        if min_eigenvalue < -tol::SPECTRAL * scale * scale {
            return Err(Error::internal(format!("E(x*x) has eigenvalue {min_eigenvalue:e}")));
        }
        if expectation_zero != normal_form_zero {
            return Err(Error::internal(format!(
                "E(x*x) vanishing is {expectation_zero} but the normal form vanishing is {normal_form_zero}"
            )));
        }
        Ok(PositivityReport {
            min_eigenvalue,
            expectation_zero,
            normal_form_zero,
        })
    }

    /// Coordinates of the normal form in [`Self::basis`].
    pub fn coordinates(&self, x: &CrossedElement) -> CVec {
        let mut v = CVec::zeros(self.dim());
        for (t, xi) in self.normal_form(x).terms() {
            for b in self.action.source(t).blocks() {
                let m = xi.block(b);
                for row in 0..m.nrows() {
                    for col in 0..m.ncols() {
                        if let Some(&i) = self.index.get(&BasisUnit { slot: t, block: b, row, col }) {
                            v[i] += m[(row, col)];
                        }
                    }
                }
            }
        }
        v
    }

    pub fn from_coordinates(&self, v: &CVec) -> CrossedElement {
        let alg = self.action.algebra();
        let mut out = CrossedElement::zero();
        for (i, u) in self.basis.iter().enumerate() {
            if v[i] != c(0.0) {
                out.add_term(u.slot, AlgElement::matrix_unit(alg, u.block, u.row, u.col).scale(v[i]));
            }
        }
        out
    }

    /// Gaussian coefficients in every fibre.
    pub fn random_element(&self, rng: &mut impl Rng) -> CrossedElement {
        let alg = self.action.algebra();
        CrossedElement::from_terms(
            self.action
                .semigroup()
                .elements()
                .filter(|&t| !self.action.source(t).is_empty())
                .map(|t| (t, AlgElement::random(alg, self.action.source(t), rng))),
        )
    }

    /// Ranks of the relation spans against the free sum `⊕ H_t`.
    pub fn relation_report(&self) -> Result<RelationReport> {
        let s = self.action.semigroup();
        let alg = self.action.algebra();
        let mut free = Vec::new();
        for t in s.elements() {
            for b in self.action.source(t).blocks() {
                let d = alg.block_size(b);
                for row in 0..d {
                    for col in 0..d {
                        free.push(BasisUnit { slot: t, block: b, row, col });
                    }
                }
            }
        }
        let free_index: HashMap<BasisUnit, usize> = free.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let relation = |t: Elem, u: Elem, b: usize, row: usize, col: usize| {
            let mut v = CVec::zeros(free.len());
            v[free_index[&BasisUnit { slot: t, block: b, row, col }]] += c(1.0);
            v[free_index[&BasisUnit { slot: u, block: b, row, col }]] -= c(1.0);
            v
        };
        let mut full = Vec::new();
        let mut j_only = Vec::new();
        for t in s.elements() {
            for u in s.elements().filter(|&u| u > t) {
                for b in self.action.ideal_i_tu(t, u).blocks() {
                    let d = alg.block_size(b);
                    for row in 0..d {
                        for col in 0..d {
                            full.push(relation(t, u, b, row, col));
                        }
                    }
                }
            }
            for v in s.elements().filter(|&v| v != t && s.leq(v, t)) {
                for b in self.action.source(v).blocks() {
                    let d = alg.block_size(b);
                    for row in 0..d {
                        for col in 0..d {
                            j_only.push(relation(t, v, b, row, col));
                        }
                    }
                }
            }
        }
        // the normal form as a matrix from free coordinates
        let mut nf_matrix = CMat::zeros(self.dim(), free.len());
        for (j, u) in free.iter().enumerate() {
            let x = CrossedElement::single(u.slot, AlgElement::matrix_unit(alg, u.block, u.row, u.col));
            nf_matrix.set_column(j, &self.coordinates(&x));
        }
        let nf_rank = linalg::rank(&nf_matrix, tol::SPECTRAL);
        let relation_rank = linalg::rank(&linalg::columns(free.len(), &full), tol::SPECTRAL);
        let j_only_rank = linalg::rank(&linalg::columns(free.len(), &j_only), tol::SPECTRAL);
        let kills_relations = full.iter().all(|r| (&nf_matrix * r).camax() <= tol::EXACT);
        let report = RelationReport {
            free_dim: free.len(),
            normal_form_dim: self.dim(),
            relation_rank,
            j_only_rank,
        };
        if nf_rank != self.dim() || !kills_relations || relation_rank + self.dim() != free.len() {
            return Err(Error::internal(format!("normal form kernel differs from the relation span: {report:?}")));
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositivityReport {
    pub min_eigenvalue: f64,
    pub expectation_zero: bool,
    pub normal_form_zero: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub free_dim: usize,
    pub normal_form_dim: usize,
    pub relation_rank: usize,
    /// Rank of the span of `j_{t,v}(ξ)δ_t − ξδ_v` for `v ≤ t` alone.
    pub j_only_rank: usize,
}

/// A representation of `A ⋊_alg S`, one matrix per matrix unit `e^b_{pq}δ_t`
/// of every fibre.
#[derive(Debug, Clone)]
pub struct Representation {
    dim: usize,
    generators: BTreeMap<BasisUnit, CMat>,
}

impl Representation {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator(&self, u: BasisUnit) -> Option<&CMat> {
        self.generators.get(&u)
    }

    pub fn apply(&self, x: &CrossedElement) -> CMat {
        let mut out = CMat::zeros(self.dim, self.dim);
        for (t, xi) in x.terms() {
            for (b, m) in xi.blocks().iter().enumerate() {
                for row in 0..m.nrows() {
                    for col in 0..m.ncols() {
                        let z = m[(row, col)];
                        if z != c(0.0) {
                            if let Some(g) = self.generators.get(&BasisUnit { slot: t, block: b, row, col }) {
                                out += g * z;
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn direct_sum(parts: &[Representation]) -> Representation {
        let dim = parts.iter().map(|p| p.dim).sum();
        let mut generators = BTreeMap::new();
        if let Some(first) = parts.first() {
            for &key in first.generators.keys() {
                let blocks: Vec<CMat> = parts.iter().map(|p| p.generators[&key].clone()).collect();
                generators.insert(key, linalg::direct_sum(&blocks));
            }
        }
        Representation { dim, generators }
    }

    /// Rank of `x ↦ π(x)` on the normal-form basis.
    ///
    /// Images of a few random vectors give a lower bound; only if that bound
    /// is not already full is the rank of the vectorised matrices computed.
    pub fn image_rank(&self, cp: &CrossedProduct, seed: u64) -> usize {
        let d = cp.dim();
        if d == 0 || self.dim == 0 {
            return 0;
        }
        let images: Vec<CMat> = cp.basis().iter().map(|&u| self.apply(&cp.unit_element(u))).collect();
        let mut rng = linalg::seeded(seed);
        let probes = (d / self.dim + 2).min(self.dim);
        let vs: Vec<CVec> = (0..probes).map(|_| linalg::random_gaussian(&mut rng, self.dim, 1).column(0).into_owned()).collect();
        let mut probe = CMat::zeros(self.dim * probes, d);
        for (j, m) in images.iter().enumerate() {
            for (i, v) in vs.iter().enumerate() {
                probe.view_mut((i * self.dim, j), (self.dim, 1)).copy_from(&(m * v));
            }
        }
        let lower = linalg::rank(&probe, tol::SPECTRAL);
        if lower == d {
            return d;
        }
        linalg::span_dim(&images, tol::SPECTRAL)
    }

    pub fn kernel_rank(&self, cp: &CrossedProduct, seed: u64) -> usize {
        cp.dim() - self.image_rank(cp, seed)
    }

    /// Largest defects of R1–R3 and of compatibility with `θ` and `J`, on
    /// random fibre elements for every `t` and pair `(t, u)`.
    pub fn check_axioms(&self, cp: &CrossedProduct, seed: u64) -> RepCheck {
        let action = cp.action();
        let s = action.semigroup();
        let alg = action.algebra();
        let one = s.unit().expect("actions carry a unit");
        let mut rng = linalg::seeded(seed);
        let pi = |t: Elem, xi: &AlgElement| self.apply(&CrossedElement::single(t, xi.clone()));
        let rel = |a: &CMat, b: &CMat, scale: f64| linalg::max_abs(&(a - b)) / scale.max(1.0);
        let mut check = RepCheck::default();
        for t in s.elements() {
            let src = action.source(t);
            let (x1, x2) = (AlgElement::random(alg, src, &mut rng), AlgElement::random(alg, src, &mut rng));
            let scale = x1.norm() * x2.norm();
            let r1 = rel(&(pi(t, &x1).adjoint() * pi(t, &x2)), &pi(one, &action.right_inner(&x1, &x2)), scale);
            let r2 = rel(&(pi(t, &x1) * pi(t, &x2).adjoint()), &pi(one, &action.left_inner(t, &x1, &x2)), scale);
            let j = action.alpha(t, &x1).star();
            let jd = rel(&pi(s.inv(t), &j), &pi(t, &x1).adjoint(), x1.norm());
            check.r1 = check.r1.max(r1);
            check.r2 = check.r2.max(r2);
            check.involution = check.involution.max(jd);
            for u in s.elements() {
                let eta = AlgElement::random(alg, action.source(u), &mut rng);
                let r3 = rel(&(pi(t, &x1) * pi(u, &eta)), &pi(s.mul(t, u), &action.mu(t, u, &x1, &eta)), x1.norm() * eta.norm());
                check.r3 = check.r3.max(r3);
                let meet = action.ideal_i_tu(t, u);
                if !meet.is_empty() {
                    let zeta = AlgElement::random(alg, meet, &mut rng);
                    check.theta = check.theta.max(rel(&pi(u, &zeta), &pi(t, &zeta), zeta.norm()));
                }
            }
        }
        check
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct RepCheck {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub theta: f64,
    pub involution: f64,
}

impl RepCheck {
    pub fn max(&self) -> f64 {
        [self.r1, self.r2, self.r3, self.theta, self.involution].into_iter().fold(0.0, f64::max)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

/// `(normal-form unit, coordinate in C^{d_b})` spanning `ℓ²(S,A) ⊗ H`.
type ModuleVector = (usize, usize);

/// Orthonormalises the given module vectors under the `E`-inner product and
/// returns the left-multiplication representation on their span.
fn module_representation(cp: &CrossedProduct, vectors: &[ModuleVector]) -> Result<Representation> {
    let action = cp.action();
    let alg = action.algebra();
    let s = action.semigroup();
    let position: HashMap<ModuleVector, usize> = vectors.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = vectors.len();

    let mut units: Vec<usize> = vectors.iter().map(|&(u, _)| u).collect();
    units.sort_unstable();
    units.dedup();
    let mut inner: HashMap<(usize, usize), AlgElement> = HashMap::new();
    for &a in &units {
        for &b in &units {
            let ua = cp.basis()[a];
            let ub = cp.basis()[b];
            if ua.block == ub.block {
                inner.insert((a, b), cp.inner_product(&cp.unit_element(ua), &cp.unit_element(ub)));
            }
        }
    }
    let mut gram = CMat::zeros(n, n);
    for (i, &(a, k)) in vectors.iter().enumerate() {
        for (j, &(b, l)) in vectors.iter().enumerate() {
            if let Some(e) = inner.get(&(a, b)) {
                gram[(i, j)] = e.block(cp.basis()[a].block)[(k, l)];
            }
        }
    }
    let (values, vecs) = linalg::hermitian_eigen(&gram);
    if let Some(&bad) = values.iter().find(|&&l| l > tol::GRAM_NULL && l < tol::GRAM_KEEP) {
        return Err(Error::Conditioning { eigenvalue: bad });
    }
    let kept: Vec<usize> = (0..n).filter(|&i| values[i] >= tol::GRAM_KEEP).collect();
    let w = linalg::columns(n, &kept.iter().map(|&i| vecs.column(i).into_owned()).collect::<Vec<_>>());
    let sqrt = CMat::from_diagonal(&CVec::from_iterator(kept.len(), kept.iter().map(|&i| c(values[i].sqrt()))));
    let inv_sqrt = CMat::from_diagonal(&CVec::from_iterator(kept.len(), kept.iter().map(|&i| c(1.0 / values[i].sqrt()))));

    let mut generators = BTreeMap::new();
    for t in s.elements() {
        for b in action.source(t).blocks() {
            let d = alg.block_size(b);
            for row in 0..d {
                for col in 0..d {
                    let z = CrossedElement::single(t, AlgElement::matrix_unit(alg, b, row, col));
                    let mut left = CMat::zeros(n, n);
                    for (j, &(a, k)) in vectors.iter().enumerate() {
                        let image = cp.coordinates(&cp.multiply_raw(&z, &cp.unit_element(cp.basis()[a])));
                        for (m, &coef) in image.iter().enumerate() {
                            match position.get(&(m, k)) {
                                Some(&i) => left[(i, j)] += coef,
                                None if coef.norm() > tol::EXACT => return Err(Error::internal("module span is not invariant")),
                                None => {}
                            }
                        }
                    }
                    let matrix = &sqrt * w.adjoint() * left * &w * &inv_sqrt;
                    generators.insert(BasisUnit { slot: t, block: b, row, col }, matrix);
                }
            }
        }
    }
    Ok(Representation {
        dim: kept.len(),
        generators,
    })
}

/// The regular representation on `ℓ²(S, A) ⊗_ρ ⊕C^{d_b}`, spanned by all
/// `e^b_{pq}δ_t ⊗ f^b_k`.
pub fn regular_representation(cp: &CrossedProduct) -> Result<Representation> {
    let alg = cp.action().algebra();
    let vectors: Vec<ModuleVector> = cp
        .basis()
        .iter()
        .enumerate()
        .flat_map(|(i, u)| (0..alg.block_size(u.block)).map(move |k| (i, k)))
        .collect();
    let rep = module_representation(cp, &vectors)?;
    assert_representation(&rep, cp)?;
    Ok(rep)
}

/// Induction of `⊕_b m_b · (irreducible of block b)`, built from the
/// cyclic vectors `e^b_{p0}δ_t ⊗ f^b_0` for each block.
pub fn induce(cp: &CrossedProduct, multiplicities: &[usize]) -> Result<Representation> {
    let alg = cp.action().algebra();
    if multiplicities.len() != alg.block_count() {
        return Err(Error::structural(format!(
            "{} multiplicities for {} blocks",
            multiplicities.len(),
            alg.block_count()
        )));
    }
    let mut parts = Vec::new();
    for (b, &m) in multiplicities.iter().enumerate() {
        if m == 0 {
            continue;
        }
        let vectors: Vec<ModuleVector> = cp
            .basis()
            .iter()
            .enumerate()
            .filter(|(_, u)| u.block == b && u.col == 0)
            .map(|(i, _)| (i, 0))
            .collect();
        let irreducible = module_representation(cp, &vectors)?;
        parts.extend(std::iter::repeat_n(irreducible, m));
    }
    if parts.is_empty() {
        return Ok(Representation {
            dim: 0,
            generators: cp
                .action()
                .semigroup()
                .elements()
                .flat_map(|t| {
                    cp.action().source(t).blocks().flat_map(move |b| {
                        let d = alg.block_size(b);
                        (0..d).flat_map(move |row| (0..d).map(move |col| BasisUnit { slot: t, block: b, row, col }))
                    })
                })
                .map(|u| (u, CMat::zeros(0, 0)))
                .collect(),
        });
    }
    let rep = Representation::direct_sum(&parts);
    assert_representation(&rep, cp)?;
    Ok(rep)
}

fn assert_representation(rep: &Representation, cp: &CrossedProduct) -> Result<()> {
    let check = rep.check_axioms(cp, 0x5eed);
    if !check.holds(tol::SPECTRAL) {
        return Err(Error::internal(format!("constructed representation violates its axioms: {check:?}")));
    }
    Ok(())
}

/// `φ(E(x))` for `φ = Σ_b tr(D_b ·)`, cross-checked against the slotwise
/// restriction formula, which drops slots on whose `I_{1,t}` the functional
/// vanishes.
pub fn induced_functional(cp: &CrossedProduct, density: &[CMat], x: &CrossedElement) -> Result<C64> {
    let alg = cp.action().algebra();
    if density.len() != alg.block_count() || density.iter().enumerate().any(|(b, d)| d.shape() != (alg.block_size(b), alg.block_size(b))) {
        return Err(Error::structural("density matrices do not match the blocks"));
    }
    cp.check_element(x)?;
    let one = cp.action().semigroup().unit().expect("actions carry a unit");
    let via_expectation = cp.expectation(&cp.normal_form(x)).pair(density);
    let mut via_restriction = c(0.0);
    for (t, xi) in x.terms() {
        let meet = cp.action().ideal_i_tu(one, t);
        if meet.blocks().all(|b| linalg::max_abs(&density[b]) == 0.0) {
            continue;
        }
        via_restriction += xi.compress(meet).pair(density);
    }
    let scale = x.max_abs().max(1.0) * density.iter().map(linalg::max_abs).fold(1.0, f64::max);
    if (via_expectation - via_restriction).norm() > tol::EXACT * scale * 10.0 {
        return Err(Error::internal(format!(
            "induced functional: {via_expectation} via E but {via_restriction} via restriction"
        )));
    }
    Ok(via_expectation)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EFaithfulReport {
    pub faithful_on_algebra: bool,
    pub induced_faithful: bool,
    pub kernel_rank_on_algebra: usize,
    pub kernel_rank_induced: usize,
}

/// Whether `⊕π_i` is faithful on `A` (which equals `Ã` here), and whether
/// `⊕ Ind π_i` is faithful on `A ⋊_alg S`; the first must imply the second.
pub fn e_faithful_check(cp: &CrossedProduct, family: &[Vec<usize>]) -> Result<EFaithfulReport> {
    let alg = cp.action().algebra();
    let mut total = vec![0; alg.block_count()];
    for member in family {
        if member.len() != alg.block_count() {
            return Err(Error::structural("multiplicity vector does not match the blocks"));
        }
        for (acc, m) in total.iter_mut().zip(member) {
            *acc += m;
        }
    }
    let kernel_rank_on_algebra = (0..alg.block_count())
        .filter(|&b| total[b] == 0)
        .map(|b| alg.block_size(b).pow(2))
        .sum();
    let kernel_rank_induced = induce(cp, &total)?.kernel_rank(cp, 17);
    let report = EFaithfulReport {
        faithful_on_algebra: !family.is_empty() && kernel_rank_on_algebra == 0,
        induced_faithful: !family.is_empty() && kernel_rank_induced == 0,
        kernel_rank_on_algebra,
        kernel_rank_induced,
    };
    if report.faithful_on_algebra && !report.induced_faithful {
        return Err(Error::internal("a faithful family induced a non-faithful representation"));
    }
    Ok(report)
}

/// `(‖π(ξδ_t)‖, ‖ξ‖)`.
pub fn grading_norms(rep: &Representation, t: Elem, xi: &AlgElement) -> (f64, f64) {
    (linalg::op_norm(&rep.apply(&CrossedElement::single(t, xi.clone()))), xi.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdalg::{BlockIso, FdAlgebra};
    use crate::isg::InverseSemigroup;
    use crate::linalg::seeded;
    use proptest::prelude::*;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    /// Indices: 0 = "1", 1 = "-1", 2 = "0".
    fn zero_one_minus_one() -> InverseSemigroup {
        InverseSemigroup::new(
            vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 2]],
            vec![0, 1, 2],
            Some(0),
            Some(2),
            Some(labels(&["1", "-1", "0"])),
        )
        .unwrap()
    }

    fn z2() -> InverseSemigroup {
        InverseSemigroup::new(vec![vec![0, 1], vec![1, 0]], vec![0, 1], Some(0), None, Some(labels(&["1", "-1"])))
            .unwrap()
    }

    /// `A = C ⊕ C`, `±1` trivial, `0` the identity on the first block.
    fn sign_model() -> CrossedProduct {
        let alg = FdAlgebra::commutative(2).unwrap();
        let full = BlockIso::identity_on(&alg, alg.full_ideal());
        let first = BlockIso::identity_on(&alg, Ideal::from_blocks([0]));
        let a = PartialIsoAction::new(zero_one_minus_one(), alg, vec![full.clone(), full, first]).unwrap();
        CrossedProduct::new(a, SlotOrder::Index).unwrap()
    }

    /// `A = M_2 ⊕ C` with `-1` acting by `Ad(diag(1,-1)) ⊕ id` and `0` the identity on `C`.
    fn graded_model() -> CrossedProduct {
        let alg = FdAlgebra::new(vec![2, 1]).unwrap();
        let full = BlockIso::identity_on(&alg, alg.full_ideal());
        let d = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0), c(-1.0)]));
        let flip = BlockIso::new(&alg, vec![(0, 0, d), (1, 1, CMat::identity(1, 1))]).unwrap();
        let zero = BlockIso::identity_on(&alg, Ideal::from_blocks([1]));
        let a = PartialIsoAction::new(zero_one_minus_one(), alg, vec![full, flip, zero]).unwrap();
        CrossedProduct::new(a, SlotOrder::Index).unwrap()
    }

    fn trivial_z2(alg: FdAlgebra) -> CrossedProduct {
        let full = BlockIso::identity_on(&alg, alg.full_ideal());
        let a = PartialIsoAction::new(z2(), alg, vec![full.clone(), full]).unwrap();
        CrossedProduct::new(a, SlotOrder::Index).unwrap()
    }

    fn swap_z2() -> CrossedProduct {
        let alg = FdAlgebra::commutative(2).unwrap();
        let full = BlockIso::identity_on(&alg, alg.full_ideal());
        let swap = BlockIso::new(&alg, vec![(0, 1, CMat::identity(1, 1)), (1, 0, CMat::identity(1, 1))]).unwrap();
        let a = PartialIsoAction::new(z2(), alg, vec![full, swap]).unwrap();
        CrossedProduct::new(a, SlotOrder::Index).unwrap()
    }

    fn e(alg: &FdAlgebra, b: usize) -> AlgElement {
        AlgElement::matrix_unit(alg, b, 0, 0)
    }

    #[test]
    fn normal_form_examples() {
        let cp = sign_model();
        let alg = cp.action().algebra().clone();
        let xi = e(&alg, 0).scale(C64::new(0.5, 2.0));
        assert_eq!(cp.normal_form(&CrossedElement::single(2, xi.clone())), CrossedElement::single(0, xi.clone()));
        let rel = CrossedElement::single(0, xi.clone()).sub(&CrossedElement::single(1, xi.clone()));
        assert!(cp.normal_form(&rel).is_zero(0.0));
        let mut rng = seeded(1);
        let x = cp.normal_form(&cp.random_element(&mut rng));
        assert_eq!(cp.normal_form(&x), x);
        assert_eq!(cp.dim(), 3);
    }

    #[test]
    fn multiplication_examples() {
        let cp = sign_model();
        let alg = cp.action().algebra().clone();
        let mut rng = seeded(2);
        let (xi, eta) = (AlgElement::random(&alg, alg.full_ideal(), &mut rng), AlgElement::random(&alg, alg.full_ideal(), &mut rng));
        let prod = cp.multiply(&CrossedElement::single(1, xi.clone()), &CrossedElement::single(1, eta.clone()));
        assert!(prod.is_close(&cp.normal_form(&CrossedElement::single(0, &xi * &eta)), 1e-12));
        let prod = cp.multiply(&CrossedElement::single(0, xi.clone()), &CrossedElement::single(0, eta.clone()));
        assert!(prod.is_close(&CrossedElement::single(0, &xi * &eta), 1e-12));
    }

    #[test]
    fn expectation_examples() {
        let cp = sign_model();
        let alg = cp.action().algebra().clone();
        let mut rng = seeded(3);
        let xi = AlgElement::random(&alg, alg.full_ideal(), &mut rng);
        assert_eq!(cp.expectation(&CrossedElement::single(0, xi.clone())), xi);
        assert_eq!(cp.expectation(&CrossedElement::single(1, xi.clone())), xi.compress(Ideal::from_blocks([0])));
        let g = swap_z2();
        assert!(g.expectation(&CrossedElement::single(1, xi.clone())).is_zero(0.0));
    }

    #[test]
    fn relation_element_has_zero_length() {
        let cp = sign_model();
        let alg = cp.action().algebra().clone();
        let xi = e(&alg, 0);
        let rel = CrossedElement::single(0, xi.clone()).sub(&CrossedElement::single(1, xi));
        let r = cp.positivity_check(&rel).unwrap();
        assert!(r.expectation_zero && r.normal_form_zero);
        let r = cp.positivity_check(&CrossedElement::zero()).unwrap();
        assert!(r.expectation_zero);
    }

    #[test]
    fn relation_spans() {
        for cp in [sign_model(), graded_model(), swap_z2()] {
            let r = cp.relation_report().unwrap();
            assert_eq!(r.relation_rank + r.normal_form_dim, r.free_dim);
            assert_eq!(r.j_only_rank, r.relation_rank);
        }
    }

    #[test]
    fn regular_representation_examples() {
        let cp = trivial_z2(FdAlgebra::commutative(1).unwrap());
        let rep = regular_representation(&cp).unwrap();
        assert_eq!(rep.dim(), 2);
        assert_eq!(rep.image_rank(&cp, 1), 2);

        let cp = sign_model();
        let rep = regular_representation(&cp).unwrap();
        assert_eq!(rep.image_rank(&cp, 1), 3);
        assert_eq!(rep.kernel_rank(&cp, 1), 0);
    }

    #[test]
    fn induction_from_the_quotient_block() {
        let cp = sign_model();
        // the character on the second block kills I
        let rep = induce(&cp, &[0, 1]).unwrap();
        assert_eq!(rep.dim(), 2);
        assert_eq!(rep.image_rank(&cp, 1), 2);
        let alg = cp.action().algebra().clone();
        // δ_1 e_0 and the I-part vanish
        assert!(linalg::max_abs(&rep.apply(&CrossedElement::single(0, e(&alg, 0)))) < 1e-12);
    }

    #[test]
    fn regular_equals_induced_identity() {
        let mut rng = seeded(9);
        for cp in [sign_model(), graded_model(), swap_z2()] {
            let reg = regular_representation(&cp).unwrap();
            let ind = induce(&cp, &vec![1; cp.action().algebra().block_count()]).unwrap();
            assert_eq!(reg.dim(), ind.dim());
            for _ in 0..5 {
                let x = cp.random_element(&mut rng);
                let y = cp.random_element(&mut rng);
                let xy = cp.multiply(&x, &y);
                assert!((reg.apply(&xy).trace() - ind.apply(&xy).trace()).norm() < 1e-8);
                assert!((reg.apply(&x).trace() - ind.apply(&x).trace()).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn swap_fixture_non_faithful_character_induces_faithfully() {
        let cp = swap_z2();
        assert_eq!(cp.dim(), 4);
        let r = e_faithful_check(&cp, &[vec![1, 0]]).unwrap();
        assert!(!r.faithful_on_algebra);
        assert!(r.induced_faithful);
        let r = e_faithful_check(&cp, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(r.faithful_on_algebra && r.induced_faithful);
        let r = e_faithful_check(&cp, &[]).unwrap();
        assert!(!r.faithful_on_algebra && !r.induced_faithful);
    }

    #[test]
    fn induced_functional_examples() {
        let cp = sign_model();
        let alg = cp.action().algebra().clone();
        let state_first = vec![CMat::identity(1, 1), CMat::zeros(1, 1)];
        let state_second = vec![CMat::zeros(1, 1), CMat::identity(1, 1)];
        let xi = AlgElement::from_blocks(&alg, vec![CMat::from_element(1, 1, c(3.0)), CMat::from_element(1, 1, c(5.0))]).unwrap();
        let x = CrossedElement::single(1, xi.clone());
        assert!((induced_functional(&cp, &state_first, &x).unwrap() - c(3.0)).norm() < 1e-12);
        assert!(induced_functional(&cp, &state_second, &x).unwrap().norm() < 1e-12);
        let a = CrossedElement::single(0, xi);
        assert!((induced_functional(&cp, &state_second, &a).unwrap() - c(5.0)).norm() < 1e-12);
    }

    #[test]
    fn grading_is_isometric() {
        let mut rng = seeded(4);
        for cp in [sign_model(), graded_model(), swap_z2()] {
            let rep = regular_representation(&cp).unwrap();
            let alg = cp.action().algebra().clone();
            for t in cp.action().semigroup().elements() {
                let xi = AlgElement::random(&alg, cp.action().source(t), &mut rng);
                let (op, norm) = grading_norms(&rep, t, &xi);
                assert!((op - norm).abs() < 1e-8, "{op} vs {norm}");
            }
        }
    }

    #[test]
    fn lex_order_changes_slots_not_dimension() {
        let cp = sign_model();
        let lex = CrossedProduct::new(cp.action().clone(), SlotOrder::Lex).unwrap();
        // labels sort as "-1" < "0" < "1"
        assert_eq!(lex.order(), &[1, 2, 0]);
        assert_eq!(lex.dim(), cp.dim());
        let alg = cp.action().algebra().clone();
        let nf = lex.normal_form(&CrossedElement::single(0, e(&alg, 0)));
        assert_eq!(nf, CrossedElement::single(1, e(&alg, 0)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn algebraic_laws(seed in 0u64..100_000) {
            let mut rng = seeded(seed);
            for cp in [sign_model(), graded_model(), swap_z2()] {
                let alg = cp.action().algebra().clone();
                let (x, y, z) = (cp.random_element(&mut rng), cp.random_element(&mut rng), cp.random_element(&mut rng));
                let left = cp.multiply(&cp.multiply(&x, &y), &z);
                let right = cp.multiply(&x, &cp.multiply(&y, &z));
                prop_assert!(left.is_close(&right, 1e-9 * 100.0));
                prop_assert!(cp.star(&cp.star(&x)).is_close(&cp.normal_form(&x), 1e-12));
                let lhs = cp.star(&cp.multiply(&x, &y));
                let rhs = cp.multiply(&cp.star(&y), &cp.star(&x));
                prop_assert!(lhs.is_close(&rhs, 1e-9 * 100.0));
                // E is a bimodule map and commutes with the involution
                let a = AlgElement::random(&alg, alg.full_ideal(), &mut rng);
                let b = AlgElement::random(&alg, alg.full_ideal(), &mut rng);
                let one = cp.action().semigroup().unit().unwrap();
                let axb = cp.multiply(&cp.multiply(&CrossedElement::single(one, a.clone()), &x), &CrossedElement::single(one, b.clone()));
                let ex = cp.expectation(&x);
                prop_assert!(cp.expectation(&axb).is_close(&(&(&a * &ex) * &b), 1e-10 * 100.0));
                prop_assert!(cp.expectation(&cp.star(&x)).is_close(&ex.star(), 1e-10));
                prop_assert!(cp.expectation(&x).is_close(&cp.expectation(&cp.normal_form(&x)), 1e-10));
                let r = cp.positivity_check(&x).unwrap();
                prop_assert!(r.min_eigenvalue >= -1e-9);
                prop_assert!(!r.normal_form_zero);
            }
        }
    }
}
