//! Convolution algebras of finite discrete groupoids.
//!
//! Regular representations act on functions on source fibres `s⁻¹(x)`; the
//! range-fibre convention is its transpose. The Haar system is counting
//! measure, so the reduced, full and algebraic groupoid algebras coincide.
//!
//! Inner exactness holds for every finite groupoid, so the checks here can
//! only confirm exactness: no finite instance separates the two sides of the
//! restriction sequence.

use serde::Serialize;

use crate::act::{germ_groupoid, SpaceAction};
use crate::error::{Error, Result};
use crate::fdalg::{AlgElement, BlockIso, FdAlgebra, PartialIsoAction};
use crate::isg::Elem;
use crate::linalg::{self, c, CMat, CVec, SimpleBlock};
use crate::tol;
use crate::xprod::{CrossedElement, CrossedProduct, SlotOrder};

/// A finite groupoid given by its arrows; units are numbered `0..n_units`
/// and `unit_arrows[x]` is the identity arrow at `x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteGroupoid {
    labels: Vec<String>,
    unit_arrows: Vec<usize>,
    source: Vec<usize>,
    range: Vec<usize>,
    compose: Vec<Vec<Option<usize>>>,
    inverse: Vec<usize>,
    /// Labelled subsets of arrows, such as the bisections `G_t`.
    grading: Vec<(String, Vec<usize>)>,
}

impl FiniteGroupoid {
    /// Checks every groupoid law exhaustively.
    pub fn new(
        labels: Vec<String>,
        unit_arrows: Vec<usize>,
        source: Vec<usize>,
        range: Vec<usize>,
        compose: Vec<Vec<Option<usize>>>,
        inverse: Vec<usize>,
    ) -> Result<Self> {
        let n = labels.len();
        let units = unit_arrows.len();
        if source.len() != n || range.len() != n || inverse.len() != n || compose.len() != n || compose.iter().any(|r| r.len() != n) {
            return Err(Error::structural("groupoid tables do not match the number of arrows"));
        }
        let bad = |what: String| Err(Error::structural(format!("groupoid: {what}")));
        if source.iter().chain(&range).any(|&x| x >= units) || unit_arrows.iter().chain(&inverse).any(|&a| a >= n) {
            return bad("index out of range".into());
        }
        for (x, &e) in unit_arrows.iter().enumerate() {
            if source[e] != x || range[e] != x {
                return bad(format!("identity at unit {x} is not a loop there"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                match (compose[a][b], source[a] == range[b]) {
                    (Some(ab), true) => {
                        if ab >= n {
                            return bad("index out of range".into());
                        }
                        if source[ab] != source[b] || range[ab] != range[a] {
                            return bad(format!("source or range of {a}·{b}"));
                        }
                    }
                    (None, false) => {}
                    _ => return bad(format!("composability of ({a}, {b}) disagrees with source and range")),
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let Some(ab) = compose[a][b] else { continue };
                for cc in 0..n {
                    if let Some(bc) = compose[b][cc] {
                        if compose[ab][cc] != compose[a][bc] {
                            return bad(format!("associativity at ({a}, {b}, {cc})"));
                        }
                    }
                }
            }
            if compose[unit_arrows[range[a]]][a] != Some(a) || compose[a][unit_arrows[source[a]]] != Some(a) {
                return bad(format!("unit law at {a}"));
            }
            let ai = inverse[a];
            if compose[a][ai] != Some(unit_arrows[range[a]]) || compose[ai][a] != Some(unit_arrows[source[a]]) {
                return bad(format!("inverse law at {a}"));
            }
        }
        Ok(FiniteGroupoid {
            labels,
            unit_arrows,
            source,
            range,
            compose,
            inverse,
            grading: Vec::new(),
        })
    }

    /// A finite group from its Cayley table.
    pub fn group(table: &[Vec<usize>], identity: usize) -> Result<Self> {
        let n = table.len();
        if table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) || identity >= n {
            return Err(Error::structural("group table is not square"));
        }
        let inverse = (0..n)
            .map(|g| (0..n).find(|&h| table[g][h] == identity).ok_or_else(|| Error::structural(format!("{g} has no inverse"))))
            .collect::<Result<Vec<_>>>()?;
        FiniteGroupoid::new(
            (0..n).map(|g| g.to_string()).collect(),
            vec![identity],
            vec![0; n],
            vec![0; n],
            table.iter().map(|r| r.iter().map(|&v| Some(v)).collect()).collect(),
            inverse,
        )
    }

    /// The pair groupoid on `n` points; the arrow `(i, j)` goes from `j` to `i`.
    pub fn pair(n: usize) -> Result<Self> {
        let idx = |i: usize, j: usize| i * n + j;
        let mut compose = vec![vec![None; n * n]; n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    compose[idx(i, j)][idx(j, k)] = Some(idx(i, k));
                }
            }
        }
        FiniteGroupoid::new(
            (0..n * n).map(|a| format!("({},{})", a / n, a % n)).collect(),
            (0..n).map(|i| idx(i, i)).collect(),
            (0..n * n).map(|a| a % n).collect(),
            (0..n * n).map(|a| a / n).collect(),
            compose,
            (0..n * n).map(|a| idx(a % n, a / n)).collect(),
        )
    }

    pub fn units_only(n: usize) -> Result<Self> {
        let mut compose = vec![vec![None; n]; n];
        for (x, row) in compose.iter_mut().enumerate() {
            row[x] = Some(x);
        }
        FiniteGroupoid::new((0..n).map(|x| x.to_string()).collect(), (0..n).collect(), (0..n).collect(), (0..n).collect(), compose, (0..n).collect())
    }

    /// The transformation groupoid of an action on a discrete space, graded
    /// by the bisections `G_t`.
    pub fn from_discrete_action(action: &SpaceAction) -> Result<Self> {
        if !action.space().is_discrete() {
            return Err(Error::precondition("the space must be discrete: convolution of quasi-continuous sections is not supported"));
        }
        let g = germ_groupoid(action)?;
        let n = g.len();
        let s = action.semigroup();
        let mut out = FiniteGroupoid::new(
            (0..n).map(|a| g.label(a).to_string()).collect(),
            (0..action.space().len()).map(|x| g.unit_at(x)).collect(),
            (0..n).map(|a| g.source(a)).collect(),
            (0..n).map(|a| g.range(a)).collect(),
            (0..n).map(|a| (0..n).map(|b| g.compose(a, b)).collect()).collect(),
            (0..n).map(|a| g.inverse(a)).collect(),
        )?;
        out.grading = s.elements().map(|t| (s.label(t).to_string(), g.bisection(t).ones().collect())).collect();
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn unit_count(&self) -> usize {
        self.unit_arrows.len()
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn source(&self, a: usize) -> usize {
        self.source[a]
    }

    pub fn range(&self, a: usize) -> usize {
        self.range[a]
    }

    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        self.compose[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn unit_arrow(&self, x: usize) -> usize {
        self.unit_arrows[x]
    }

    pub fn grading(&self) -> &[(String, Vec<usize>)] {
        &self.grading
    }

    /// The arrows in the grading piece labelled `t`.
    pub fn graded(&self, t: &str) -> Option<&[usize]> {
        self.grading.iter().find(|(l, _)| l == t).map(|(_, a)| a.as_slice())
    }

    /// The source fibre `s⁻¹(x)`.
    pub fn source_fibre(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.source[a] == x).collect()
    }

    pub fn is_invariant(&self, units: &[usize]) -> bool {
        let inside = |x: usize| units.contains(&x);
        (0..self.len()).all(|a| inside(self.source[a]) == inside(self.range[a]))
    }

    /// `G_U` for an invariant set of units, with arrow indices into `self`.
    pub fn restrict(&self, units: &[usize]) -> Result<(FiniteGroupoid, Vec<usize>)> {
        if units.iter().any(|&x| x >= self.unit_count()) {
            return Err(Error::structural("unit out of range"));
        }
        if !self.is_invariant(units) {
            return Err(Error::precondition("the set of units is not invariant"));
        }
        let mut kept_units: Vec<usize> = units.to_vec();
        kept_units.sort_unstable();
        kept_units.dedup();
        let arrows: Vec<usize> = (0..self.len()).filter(|&a| kept_units.contains(&self.source[a])).collect();
        let arrow_pos = |a: usize| arrows.iter().position(|&b| b == a).expect("restricted arrow");
        let unit_pos = |x: usize| kept_units.iter().position(|&y| y == x).expect("restricted unit");
        let restricted = FiniteGroupoid::new(
            arrows.iter().map(|&a| self.labels[a].clone()).collect(),
            kept_units.iter().map(|&x| arrow_pos(self.unit_arrows[x])).collect(),
            arrows.iter().map(|&a| unit_pos(self.source[a])).collect(),
            arrows.iter().map(|&a| unit_pos(self.range[a])).collect(),
            arrows.iter().map(|&a| arrows.iter().map(|&b| self.compose[a][b].map(arrow_pos)).collect()).collect(),
            arrows.iter().map(|&a| arrow_pos(self.inverse[a])).collect(),
        )?;
        Ok((restricted, arrows))
    }

    /// `(f * g)(γ) = Σ_{αβ = γ} f(α) g(β)`.
    pub fn convolve(&self, f: &CVec, g: &CVec) -> CVec {
        let mut out = CVec::zeros(self.len());
        for a in 0..self.len() {
            if f[a] == c(0.0) {
                continue;
            }
            for b in 0..self.len() {
                if let Some(ab) = self.compose[a][b] {
                    out[ab] += f[a] * g[b];
                }
            }
        }
        out
    }

    /// `f*(γ) = conj f(γ⁻¹)`.
    pub fn star(&self, f: &CVec) -> CVec {
        CVec::from_iterator(self.len(), (0..self.len()).map(|a| f[self.inverse[a]].conj()))
    }

    pub fn point_mass(&self, a: usize) -> CVec {
        let mut v = CVec::zeros(self.len());
        v[a] = c(1.0);
        v
    }
}

/// `Λ_x`: convolution acting on functions on `s⁻¹(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularRepresentation {
    pub unit: usize,
    pub fibre: Vec<usize>,
    /// `Λ_x(δ_a)` for every arrow `a`.
    pub generators: Vec<CMat>,
}

impl RegularRepresentation {
    pub fn apply(&self, f: &CVec) -> CMat {
        let n = self.fibre.len();
        self.generators.iter().zip(f.iter()).fold(CMat::zeros(n, n), |acc, (m, &z)| acc + m * z)
    }
}

/// One regular representation per unit; their sum is asserted faithful.
pub fn regular_representations(g: &FiniteGroupoid) -> Result<Vec<RegularRepresentation>> {
    let reps: Vec<RegularRepresentation> = (0..g.unit_count())
        .map(|x| {
            let fibre = g.source_fibre(x);
            let generators = (0..g.len())
                .map(|a| {
                    let mut m = CMat::zeros(fibre.len(), fibre.len());
                    for (j, &b) in fibre.iter().enumerate() {
                        if let Some(ab) = g.compose(a, b) {
                            let i = fibre.iter().position(|&y| y == ab).expect("source fibre is closed under left translation");
                            m[(i, j)] = c(1.0);
                        }
                    }
                    m
                })
                .collect();
            RegularRepresentation { unit: x, fibre, generators }
        })
        .collect();
    let images = summed_images(&reps, g.len());
    if linalg::span_dim(&images, tol::SPECTRAL) != g.len() {
        return Err(Error::internal("the sum of the regular representations is not faithful"));
    }
    Ok(reps)
}

fn summed_images(reps: &[RegularRepresentation], arrows: usize) -> Vec<CMat> {
    (0..arrows)
        .map(|a| linalg::direct_sum(&reps.iter().map(|r| r.generators[a].clone()).collect::<Vec<_>>()))
        .collect()
}

/// Block structure of the convolution algebra, read off the faithful
/// representation `⊕ Λ_x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvolutionAlgebra {
    pub dim: usize,
    pub blocks: Vec<SimpleBlock>,
}

impl ConvolutionAlgebra {
    pub fn as_fd_algebra(&self) -> Result<FdAlgebra> {
        FdAlgebra::new(self.blocks.iter().map(|b| b.size).collect())
    }
}

pub fn convolution_algebra(g: &FiniteGroupoid, seed: u64) -> Result<ConvolutionAlgebra> {
    if g.is_empty() {
        return Ok(ConvolutionAlgebra { dim: 0, blocks: Vec::new() });
    }
    let reps = regular_representations(g)?;
    let images = summed_images(&reps, g.len());
    let mut blocks = linalg::wedderburn(&images, seed, tol::SPECTRAL)?;
    blocks.sort_by_key(|b| (b.size, b.multiplicity));
    let dim: usize = blocks.iter().map(|b| b.size * b.size).sum();
    if dim != g.len() {
        return Err(Error::internal(format!("summands have total dimension {dim} for {} arrows", g.len())));
    }
    Ok(ConvolutionAlgebra { dim, blocks })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InnerExactnessReport {
    pub dim_total: usize,
    pub dim_ideal: usize,
    pub dim_quotient: usize,
    pub kernel_dim: usize,
    pub exact: bool,
    pub note: &'static str,
}

/// Checks `0 → C*(G_U) → C*(G) → C*(G_F) → 0` for an invariant `U` with
/// complement `F`, by rank.
pub fn inner_exactness_check(g: &FiniteGroupoid, units: &[usize]) -> Result<InnerExactnessReport> {
    let (g_u, arrows_u) = g.restrict(units)?;
    let complement: Vec<usize> = (0..g.unit_count()).filter(|x| !units.contains(x)).collect();
    let (g_f, arrows_f) = g.restrict(&complement)?;
    let n = g.len();
    let restrict = |f: &CVec| CVec::from_iterator(arrows_f.len(), arrows_f.iter().map(|&a| f[a]));
    let include = |f: &CVec| {
        let mut out = CVec::zeros(n);
        for (i, &a) in arrows_u.iter().enumerate() {
            out[a] = f[i];
        }
        out
    };
    let close = |a: &CVec, b: &CVec| (a - b).iter().all(|z| z.norm() <= tol::EXACT);
    let fail = |what: &str| Err(Error::internal(format!("restriction sequence: {what}")));

    for a in 0..n {
        let fa = g.point_mass(a);
        if !close(&restrict(&g.star(&fa)), &g_f.star(&restrict(&fa))) {
            return fail("restriction does not preserve the involution");
        }
        for b in 0..n {
            let fb = g.point_mass(b);
            if !close(&restrict(&g.convolve(&fa, &fb)), &g_f.convolve(&restrict(&fa), &restrict(&fb))) {
                return fail("restriction is not multiplicative");
            }
        }
    }
    for i in 0..g_u.len() {
        let fi = g_u.point_mass(i);
        if !restrict(&include(&fi)).iter().all(|z| z.norm() == 0.0) {
            return fail("the ideal is not killed by restriction");
        }
        for j in 0..g_u.len() {
            let fj = g_u.point_mass(j);
            if !close(&include(&g_u.convolve(&fi, &fj)), &g.convolve(&include(&fi), &include(&fj))) {
                return fail("inclusion is not multiplicative");
            }
        }
    }
    let restriction = linalg::columns(arrows_f.len(), &(0..n).map(|a| restrict(&g.point_mass(a))).collect::<Vec<_>>());
    let inclusion = linalg::columns(n, &(0..g_u.len()).map(|i| include(&g_u.point_mass(i))).collect::<Vec<_>>());
    let restriction_rank = if n == 0 { 0 } else { linalg::rank(&restriction, tol::SPECTRAL) };
    let inclusion_rank = if g_u.is_empty() { 0 } else { linalg::rank(&inclusion, tol::SPECTRAL) };
    let kernel_dim = n - restriction_rank;
    let exact = inclusion_rank == g_u.len() && kernel_dim == g_u.len() && restriction_rank == g_f.len();
    if !exact {
        return fail("ranks do not match");
    }
    Ok(InnerExactnessReport {
        dim_total: n,
        dim_ideal: g_u.len(),
        dim_quotient: g_f.len(),
        kernel_dim,
        exact,
        note: "every finite groupoid is inner exact; only the exact side can be observed",
    })
}

/// The induced action on `C(X)`: `α_t` sends the point block `x ∈ D_{t*}`
/// to `θ_t(x)`.
pub fn function_algebra_action(action: &SpaceAction) -> Result<PartialIsoAction> {
    let points = action.space().len();
    let alg = FdAlgebra::commutative(points)?;
    let s = action.semigroup();
    let maps = s
        .elements()
        .map(|t| {
            let pieces = action
                .domain(t)
                .ones()
                .map(|x| (x, action.apply(t, x).expect("point in domain"), CMat::identity(1, 1)))
                .collect();
            BlockIso::new(&alg, pieces)
        })
        .collect::<Result<Vec<_>>>()?;
    PartialIsoAction::new(s.clone(), alg, maps)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IteratedIsoReport {
    pub iso: bool,
    pub dim: usize,
    pub crossed_dim: usize,
    pub arrows: usize,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub relations_killed: bool,
    pub bijective: bool,
    pub expectation_intertwined: bool,
    /// For group actions: both sides have dimension `|X|·|S|`.
    pub group_check: Option<bool>,
}

/// Compares `C(X) ⋊_alg S` with the convolution algebra of `X ⋊ S` through
/// `e_x δ_t ↦ δ_{[t, x]}`.
pub fn verify_iterated_iso(action: &SpaceAction) -> Result<IteratedIsoReport> {
    let g = FiniteGroupoid::from_discrete_action(action)?;
    let germs = germ_groupoid(action)?;
    let fd = function_algebra_action(action)?;
    let cp = CrossedProduct::new(fd, SlotOrder::Index)?;
    let fd = cp.action();
    let alg = fd.algebra();
    let s = fd.semigroup();
    let one = s.unit().expect("actions carry a unit");
    let n = g.len();

    let psi = |x: &CrossedElement| {
        let mut out = CVec::zeros(n);
        for (t, xi) in x.terms() {
            for p in fd.source(t).blocks() {
                let arrow = germs.germ(t, p).expect("germ at a domain point");
                out[arrow] += xi.block(p)[(0, 0)];
            }
        }
        out
    };
    let point = |p: usize| AlgElement::matrix_unit(alg, p, 0, 0);
    let single = |t: Elem, xi: AlgElement| CrossedElement::single(t, xi);
    let gap = |a: &CVec, b: &CVec| (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max);

    let (mut r1, mut r2, mut r3) = (0.0f64, 0.0f64, 0.0f64);
    for t in s.elements() {
        for p in fd.source(t).blocks() {
            let xi = point(p);
            let image = psi(&single(t, xi.clone()));
            for q in fd.source(t).blocks() {
                let eta = point(q);
                let other = psi(&single(t, eta.clone()));
                r1 = r1.max(gap(&g.convolve(&g.star(&image), &other), &psi(&single(one, fd.right_inner(&xi, &eta)))));
                r2 = r2.max(gap(&g.convolve(&image, &g.star(&other)), &psi(&single(one, fd.left_inner(t, &xi, &eta)))));
            }
            for u in s.elements() {
                for q in fd.source(u).blocks() {
                    let eta = point(q);
                    let lhs = g.convolve(&image, &psi(&single(u, eta.clone())));
                    r3 = r3.max(gap(&lhs, &psi(&single(s.mul(t, u), fd.mu(t, u, &xi, &eta)))));
                }
            }
        }
    }

    let mut relations_killed = true;
    for t in s.elements() {
        for u in s.elements() {
            for p in fd.ideal_i_tu(t, u).blocks() {
                let xi = point(p);
                let moved = fd.theta(u, t, &xi, tol::EXACT)?;
                let relation = single(t, xi).sub(&single(u, moved));
                relations_killed &= psi(&relation).iter().all(|z| z.norm() <= tol::EXACT);
            }
        }
    }

    let images: Vec<CVec> = cp.basis().iter().map(|&b| psi(&cp.unit_element(b))).collect();
    let rank = if n == 0 || images.is_empty() { 0 } else { linalg::rank(&linalg::columns(n, &images), tol::SPECTRAL) };
    let bijective = cp.dim() == n && rank == n;

    let expectation_intertwined = cp.basis().iter().zip(&images).all(|(&b, image)| {
        let e = cp.expectation(&cp.unit_element(b));
        (0..alg.block_count()).all(|x| (e.block(x)[(0, 0)] - image[g.unit_arrow(x)]).norm() <= tol::EXACT)
    });

    let is_group = s.elements().all(|t| s.mul(s.inv(t), t) == one);
    let group_check = is_group.then(|| {
        let expected = s.size() * alg.block_count();
        cp.dim() == expected && n == expected
    });

    let iso = r1.max(r2).max(r3) <= tol::SPECTRAL && relations_killed && bijective && expectation_intertwined && group_check != Some(false);
    Ok(IteratedIsoReport {
        iso,
        dim: n,
        crossed_dim: cp.dim(),
        arrows: n,
        r1,
        r2,
        r3,
        relations_killed,
        bijective,
        expectation_intertwined,
        group_check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::act::PartialMap;
    use crate::isg::InverseSemigroup;
    use crate::linalg::seeded;
    use crate::topo::{set_of, FiniteSpace};
    use proptest::prelude::*;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn z2() -> FiniteGroupoid {
        FiniteGroupoid::group(&[vec![0, 1], vec![1, 0]], 0).unwrap()
    }

    fn sizes(a: &ConvolutionAlgebra) -> Vec<usize> {
        a.blocks.iter().map(|b| b.size).collect()
    }

    fn zero_one_minus_one_on_two_points() -> SpaceAction {
        let s = crate::xprod::iau::zero_one_minus_one();
        let x = FiniteSpace::discrete(labels(&["a", "b"])).unwrap();
        let id = PartialMap::new(2, &[(0, 0), (1, 1)]).unwrap();
        let zero = PartialMap::new(2, &[(0, 0)]).unwrap();
        SpaceAction::new(s, x, vec![id.clone(), id, zero], false).unwrap()
    }

    #[test]
    fn small_convolution_algebras() {
        assert_eq!(sizes(&convolution_algebra(&z2(), 1).unwrap()), vec![1, 1]);
        assert_eq!(sizes(&convolution_algebra(&FiniteGroupoid::pair(2).unwrap(), 1).unwrap()), vec![2]);
        assert_eq!(sizes(&convolution_algebra(&FiniteGroupoid::units_only(2).unwrap(), 1).unwrap()), vec![1, 1]);
    }

    #[test]
    fn regular_representations_of_small_groupoids() {
        let reps = regular_representations(&z2()).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].fibre.len(), 2);
        let pair = regular_representations(&FiniteGroupoid::pair(2).unwrap()).unwrap();
        assert!(pair.iter().all(|r| r.fibre.len() == 2));
        let units = regular_representations(&FiniteGroupoid::units_only(3).unwrap()).unwrap();
        for r in &units {
            assert_eq!(r.apply(&CVec::from_vec(vec![c(2.0), c(3.0), c(5.0)]))[(0, 0)], c([2.0, 3.0, 5.0][r.unit]));
        }
    }

    #[test]
    fn broken_tables_are_rejected() {
        let mut compose = vec![vec![Some(0), Some(1)], vec![Some(1), Some(1)]];
        let r = FiniteGroupoid::new(labels(&["e", "g"]), vec![0], vec![0, 0], vec![0, 0], compose.clone(), vec![0, 1]);
        assert!(matches!(r, Err(Error::Structural(_))));
        compose[1][0] = None;
        assert!(FiniteGroupoid::new(labels(&["e", "g"]), vec![0], vec![0, 0], vec![0, 0], compose, vec![0, 1]).is_err());
    }

    #[test]
    fn transformation_groupoid_of_the_three_element_semigroup() {
        let g = FiniteGroupoid::from_discrete_action(&zero_one_minus_one_on_two_points()).unwrap();
        assert_eq!(g.len(), 3);
        let one: Vec<usize> = g.graded("1").unwrap().to_vec();
        let minus: Vec<usize> = g.graded("-1").unwrap().to_vec();
        let meet: Vec<usize> = one.iter().copied().filter(|a| minus.contains(a)).collect();
        assert_eq!(meet, vec![g.unit_arrow(0)]);
        let r = verify_iterated_iso(&zero_one_minus_one_on_two_points()).unwrap();
        assert!(r.iso, "{r:?}");
        assert_eq!(r.dim, 3);
    }

    #[test]
    fn trivial_z2_on_a_point() {
        let s = InverseSemigroup::new(vec![vec![0, 1], vec![1, 0]], vec![0, 1], Some(0), None, None).unwrap();
        let x = FiniteSpace::discrete(labels(&["p"])).unwrap();
        let id = PartialMap::new(1, &[(0, 0)]).unwrap();
        let action = SpaceAction::new(s, x, vec![id.clone(), id], false).unwrap();
        let g = FiniteGroupoid::from_discrete_action(&action).unwrap();
        assert_eq!(sizes(&convolution_algebra(&g, 3).unwrap()), vec![1, 1]);
        let r = verify_iterated_iso(&action).unwrap();
        assert!(r.iso);
        assert_eq!(r.group_check, Some(true));
        assert_eq!(r.dim, 2);
    }

    #[test]
    fn swap_action_gives_the_pair_groupoid_algebra() {
        let s = InverseSemigroup::new(vec![vec![0, 1], vec![1, 0]], vec![0, 1], Some(0), None, None).unwrap();
        let x = FiniteSpace::discrete(labels(&["a", "b"])).unwrap();
        let action = SpaceAction::new(
            s,
            x,
            vec![PartialMap::new(2, &[(0, 0), (1, 1)]).unwrap(), PartialMap::new(2, &[(0, 1), (1, 0)]).unwrap()],
            false,
        )
        .unwrap();
        let g = FiniteGroupoid::from_discrete_action(&action).unwrap();
        assert_eq!(sizes(&convolution_algebra(&g, 3).unwrap()), vec![2]);
        assert!(verify_iterated_iso(&action).unwrap().iso);
    }

    #[test]
    fn non_discrete_spaces_are_rejected() {
        let s = InverseSemigroup::new(vec![vec![0]], vec![0], Some(0), None, None).unwrap();
        let x = FiniteSpace::from_opens(labels(&["o", "c"]), &[set_of(2, []), set_of(2, [0]), set_of(2, [0, 1])]).unwrap();
        let id = PartialMap::new(2, &[(0, 0), (1, 1)]).unwrap();
        let action = SpaceAction::new(s, x, vec![id], false).unwrap();
        assert!(matches!(FiniteGroupoid::from_discrete_action(&action), Err(Error::Precondition(_))));
        assert!(matches!(verify_iterated_iso(&action), Err(Error::Precondition(_))));
    }

    #[test]
    fn restriction_sequences_are_exact() {
        let g = FiniteGroupoid::from_discrete_action(&zero_one_minus_one_on_two_points()).unwrap();
        for u in [vec![], vec![0], vec![1], vec![0, 1]] {
            let r = inner_exactness_check(&g, &u).unwrap();
            assert!(r.exact);
            assert_eq!(r.kernel_dim, r.dim_ideal);
        }
        let pair = FiniteGroupoid::pair(2).unwrap();
        assert!(matches!(inner_exactness_check(&pair, &[0]), Err(Error::Precondition(_))));
        assert_eq!(inner_exactness_check(&pair, &[0, 1]).unwrap().dim_quotient, 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn convolution_is_associative_and_star_involutive(seed in any::<u64>()) {
            let g = FiniteGroupoid::from_discrete_action(&zero_one_minus_one_on_two_points()).unwrap();
            let pair = FiniteGroupoid::pair(3).unwrap();
            let mut rng = seeded(seed);
            for h in [&g, &pair] {
                let f: Vec<CVec> = (0..3).map(|_| linalg::random_gaussian(&mut rng, h.len(), 1).column(0).into_owned()).collect();
                let left = h.convolve(&h.convolve(&f[0], &f[1]), &f[2]);
                let right = h.convolve(&f[0], &h.convolve(&f[1], &f[2]));
                prop_assert!((left - right).camax() <= 1e-10);
                prop_assert!((h.star(&h.star(&f[0])) - &f[0]).camax() <= 1e-10);
                let anti = h.star(&h.convolve(&f[0], &f[1])) - h.convolve(&h.star(&f[1]), &h.star(&f[0]));
                prop_assert!(anti.camax() <= 1e-10);
            }
        }
    }
}
