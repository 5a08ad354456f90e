//! Crossed products by `S = {1, -1, 0}` from triples `(I, α, u)`: an ideal
//! `I ⊴ A`, an automorphism `α` with `α² = id`, and a self-adjoint unitary
//! `u` of `I` with `α|_I = Ad(u)`.
//!
//! The fibres are `H_1 = H_{-1} = A` (left action through `α` on `H_{-1}`)
//! and `H_0 = I`, glued by `δ_0 c ≡ δ_1 c ≡ δ_{-1} uc`. Such data is not a
//! partial-isomorphism action unless `u` is central in `I`, so it is handled
//! here directly: once as the quotient of `A ⋊_α Z/2` by
//! `J = {δ_1 c − δ_{-1} uc}` in a faithful representation, and once as the
//! quotient of `⊕ H_t` by the gluing relations with its own multiplication.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fdalg::{AlgElement, BlockIso, FdAlgebra, Ideal, PartialIsoAction};
use crate::isg::InverseSemigroup;
use crate::linalg::{self, c, CMat, CVec, MatrixSpan};
use crate::tol;

use super::{regular_representation, CrossedProduct, SlotOrder};

/// A validated triple `(I, α, u)` on an [`FdAlgebra`].
#[derive(Debug, Clone, PartialEq)]
pub struct IauData {
    algebra: FdAlgebra,
    ideal: Ideal,
    alpha: BlockIso,
    u: AlgElement,
}

impl IauData {
    pub fn new(algebra: FdAlgebra, ideal: Ideal, alpha: BlockIso, u: AlgElement) -> Result<Self> {
        let fail = |what: &str| Err(Error::precondition(format!("(I, α, u) data: {what}")));
        if !ideal.is_subset(algebra.full_ideal()) {
            return fail("ideal has blocks outside the algebra");
        }
        if alpha.source() != algebra.full_ideal() {
            return fail("α must be defined on all of A");
        }
        if u.blocks().len() != algebra.block_count() {
            return Err(Error::structural("u has the wrong number of blocks"));
        }
        for b in algebra.full_ideal().blocks() {
            let w = alpha.unitary(b).expect("α is global");
            if !linalg::is_unitary(w, tol::EXACT) {
                return fail("α is not implemented by unitaries");
            }
        }
        let basis = matrix_units(&algebra, algebra.full_ideal());
        if basis.iter().any(|e| !alpha.apply(&alpha.apply(e)).is_close(e, tol::EXACT)) {
            return fail("α² ≠ id");
        }
        if ideal.blocks().any(|b| !ideal.contains(alpha.block_map(b).expect("α is global"))) {
            return fail("I is not α-invariant");
        }
        if !u.support(tol::EXACT).is_subset(ideal) {
            return fail("u does not lie in I");
        }
        if !u.is_close(&u.star(), tol::EXACT) || !(&u * &u).is_close(&AlgElement::support_projection(&algebra, ideal), tol::EXACT) {
            return fail("u is not a self-adjoint unitary of I");
        }
        let ad_u = |e: &AlgElement| &(&u * e) * &u;
        if matrix_units(&algebra, ideal).iter().any(|e| !alpha.apply(e).is_close(&ad_u(e), tol::EXACT)) {
            return fail("α|_I ≠ Ad(u)");
        }
        Ok(IauData { algebra, ideal, alpha, u })
    }

    /// `α = id`, `u = [I]`.
    pub fn trivial(algebra: FdAlgebra, ideal: Ideal) -> Result<Self> {
        let alpha = BlockIso::identity_on(&algebra, algebra.full_ideal());
        let u = AlgElement::support_projection(&algebra, ideal);
        Self::new(algebra, ideal, alpha, u)
    }

    /// Random data with at most three blocks of size at most `max_block`:
    /// `α` swaps some pairs of equal blocks and conjugates the others by
    /// self-adjoint unitaries; `I` is a set of fixed blocks and `u = ±w` there.
    pub fn random(rng: &mut impl Rng, max_block: usize) -> Result<Self> {
        let k = rng.random_range(1..=3);
        let sizes: Vec<usize> = (0..k).map(|_| rng.random_range(1..=max_block)).collect();
        let algebra = FdAlgebra::new(sizes.clone())?;
        let mut partner: Vec<Option<usize>> = vec![None; k];
        for b in 0..k {
            if partner[b].is_some() {
                continue;
            }
            if let Some(p) = (b + 1..k).find(|&p| partner[p].is_none() && sizes[p] == sizes[b]) {
                if rng.random_bool(0.5) {
                    partner[b] = Some(p);
                    partner[p] = Some(b);
                }
            }
        }
        let mut pieces = Vec::new();
        let mut fixed_w = vec![None; k];
        for b in 0..k {
            match partner[b] {
                Some(p) if p > b => {
                    let w = linalg::random_unitary(rng, sizes[b]);
                    pieces.push((b, p, w.clone()));
                    pieces.push((p, b, w.adjoint()));
                }
                Some(_) => {}
                None => {
                    let w = linalg::random_symmetry(rng, sizes[b]);
                    fixed_w[b] = Some(w.clone());
                    pieces.push((b, b, w));
                }
            }
        }
        let alpha = BlockIso::new(&algebra, pieces)?;
        let ideal = Ideal::from_blocks((0..k).filter(|&b| fixed_w[b].is_some() && rng.random_bool(0.5)));
        let mut u = AlgElement::zero(&algebra);
        for b in ideal.blocks() {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            *u.block_mut(b) = fixed_w[b].as_ref().expect("fixed block") * c(sign);
        }
        Self::new(algebra, ideal, alpha, u)
    }

    pub fn algebra(&self) -> &FdAlgebra {
        &self.algebra
    }

    pub fn ideal(&self) -> Ideal {
        self.ideal
    }

    pub fn alpha(&self) -> &BlockIso {
        &self.alpha
    }

    pub fn u(&self) -> &AlgElement {
        &self.u
    }

    pub fn is_trivial(&self) -> bool {
        let p = AlgElement::support_projection(&self.algebra, self.ideal);
        matrix_units(&self.algebra, self.algebra.full_ideal())
            .iter()
            .all(|e| self.alpha.apply(e).is_close(e, tol::EXACT))
            && self.u.is_close(&p, tol::EXACT)
    }

    /// The partial-isomorphism action `α_{±1} = id`, `α_0 = id_I`; only
    /// available in the trivial case.
    pub fn trivial_action(&self) -> Result<PartialIsoAction> {
        if !self.is_trivial() {
            return Err(Error::precondition("only trivial data defines a partial-isomorphism action"));
        }
        let full = BlockIso::identity_on(&self.algebra, self.algebra.full_ideal());
        let zero = BlockIso::identity_on(&self.algebra, self.ideal);
        PartialIsoAction::new(zero_one_minus_one(), self.algebra.clone(), vec![full.clone(), full, zero])
    }
}

/// `{1, -1, 0}` with indices 0, 1, 2.
pub fn zero_one_minus_one() -> InverseSemigroup {
    InverseSemigroup::new(
        vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 2]],
        vec![0, 1, 2],
        Some(0),
        Some(2),
        Some(vec!["1".into(), "-1".into(), "0".into()]),
    )
    .expect("valid table")
}

fn matrix_units(alg: &FdAlgebra, ideal: Ideal) -> Vec<AlgElement> {
    let mut out = Vec::new();
    for b in ideal.blocks() {
        let d = alg.block_size(b);
        for p in 0..d {
            for q in 0..d {
                out.push(AlgElement::matrix_unit(alg, b, p, q));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IauReport {
    /// `dim A ⋊_alg S` from the glued fibres.
    pub dim_crossed: usize,
    /// `dim A ⋊_α Z/2`.
    pub dim_z2: usize,
    pub dim_ideal: usize,
    pub dim_j: usize,
    pub dimension_law: bool,
    /// Structure constants of `(A ⋊_α Z/2)/J` match the glued model.
    pub quotient_iso: bool,
    /// Simple summand sizes of `(A ⋊_α Z/2)/J`.
    pub blocks: Vec<usize>,
    /// In the trivial case: the summands are those of `A ⊕ A/I`, also in the
    /// regular representation of the partial-isomorphism crossed product.
    pub trivial_case: Option<bool>,
}

impl IauReport {
    pub fn holds(&self) -> bool {
        self.dimension_law && self.quotient_iso && self.trivial_case != Some(false)
    }
}

/// Free coordinates `(a, b, c)` of `δ_1 a + δ_{-1} b + δ_0 c`.
#[derive(Debug, Clone)]
struct Triple {
    one: AlgElement,
    minus: AlgElement,
    zero: AlgElement,
}

struct Model<'a> {
    data: &'a IauData,
}

impl Model<'_> {
    fn alg(&self) -> &FdAlgebra {
        &self.data.algebra
    }

    fn zero_triple(&self) -> Triple {
        let z = AlgElement::zero(self.alg());
        Triple {
            one: z.clone(),
            minus: z.clone(),
            zero: z,
        }
    }

    /// Folds `δ_0` into `δ_1` and the `I`-part of `δ_{-1}` into `δ_1` via `u`.
    fn normal_form(&self, x: &Triple) -> Triple {
        let i = self.data.ideal;
        let b_in = x.minus.compress(i);
        Triple {
            one: &(&x.one + &x.zero) + &(&self.data.u * &b_in),
            minus: &x.minus - &b_in,
            zero: AlgElement::zero(self.alg()),
        }
    }

    fn multiply(&self, x: &Triple, y: &Triple) -> Triple {
        let al = |a: &AlgElement| self.data.alpha.apply(a);
        let u = &self.data.u;
        let one = &(&x.one * &y.one) + &(&al(&x.minus) * &y.minus);
        let minus = &(&al(&x.one) * &y.minus) + &(&x.minus * &y.one);
        let zero_terms = [
            &x.zero * &y.one,
            &x.one * &y.zero,
            &x.zero * &y.zero,
            &(u * &al(&x.zero)) * &y.minus,
            &(u * &x.minus) * &y.zero,
        ];
        let zero = zero_terms.iter().fold(AlgElement::zero(self.alg()), |acc, t| &acc + t);
        Triple { one, minus, zero }
    }

    /// Coordinates of a normal form: `δ_1` part, then the `δ_{-1}` part off `I`.
    fn coordinates(&self, x: &Triple) -> CVec {
        let nf = self.normal_form(x);
        let mut out = Vec::new();
        for e in matrix_units(self.alg(), self.alg().full_ideal()) {
            out.push(pairing(&e, &nf.one));
        }
        for e in matrix_units(self.alg(), self.alg().full_ideal().difference(self.data.ideal)) {
            out.push(pairing(&e, &nf.minus));
        }
        CVec::from_vec(out)
    }

    fn free_coordinates(&self, x: &Triple) -> CVec {
        let all = matrix_units(self.alg(), self.alg().full_ideal());
        let ideal = matrix_units(self.alg(), self.data.ideal);
        let v: Vec<_> = all
            .iter()
            .map(|e| pairing(e, &x.one))
            .chain(all.iter().map(|e| pairing(e, &x.minus)))
            .chain(ideal.iter().map(|e| pairing(e, &x.zero)))
            .collect();
        CVec::from_vec(v)
    }
}

/// Coefficient of the matrix unit `e` in `x`.
fn pairing(e: &AlgElement, x: &AlgElement) -> linalg::C64 {
    e.blocks().iter().zip(x.blocks()).map(|(m, n)| m.dotc(n)).sum()
}

/// Builds both descriptions of `A ⋊ S` and compares them.
pub fn crossed_01m1(data: &IauData, seed: u64) -> Result<IauReport> {
    let alg = &data.algebra;
    let n = alg.rep_dim();
    let dim_a = alg.dim();
    let dim_ideal = alg.ideal_dim(data.ideal);
    let rho = |a: &AlgElement| linalg::direct_sum(a.blocks());
    let swap = {
        let mut v = CMat::zeros(2 * n, 2 * n);
        v.view_mut((0, n), (n, n)).copy_from(&CMat::identity(n, n));
        v.view_mut((n, 0), (n, n)).copy_from(&CMat::identity(n, n));
        v
    };
    let pi_one = |a: &AlgElement| linalg::direct_sum(&[rho(a), rho(&data.alpha.apply(a))]);
    let pi_minus = |b: &AlgElement| &swap * pi_one(b);

    // A ⋊_α Z/2 in its covariant representation
    let units = matrix_units(alg, alg.full_ideal());
    let b_basis: Vec<CMat> = units.iter().map(&pi_one).chain(units.iter().map(&pi_minus)).collect();
    let dim_z2 = linalg::span_dim(&b_basis, tol::SPECTRAL);
    if dim_z2 != 2 * dim_a {
        return Err(Error::internal(format!("covariant representation has image {dim_z2}, not {}", 2 * dim_a)));
    }

    let ideal_units = matrix_units(alg, data.ideal);
    let j_basis: Vec<CMat> = ideal_units.iter().map(|e| pi_one(e) - pi_minus(&(&data.u * e))).collect();
    let dim_j = linalg::span_dim(&j_basis, tol::SPECTRAL);
    let mut j_span = MatrixSpan::new(2 * n, 2 * n, tol::SPECTRAL);
    for j in &j_basis {
        j_span.insert(j);
    }
    for g in &b_basis {
        for j in &j_basis {
            if !j_span.contains(&(g * j)) || !j_span.contains(&(j * g)) {
                return Err(Error::internal("J is not an ideal"));
            }
        }
    }
    let p_ideal = AlgElement::support_projection(alg, data.ideal);
    let p_j = (pi_one(&p_ideal) - pi_minus(&data.u)) * c(0.5);
    let is_projection = linalg::max_abs(&(&p_j * &p_j - &p_j)) <= tol::EXACT && linalg::max_abs(&(&p_j - p_j.adjoint())) <= tol::EXACT;
    let central = b_basis.iter().all(|g| linalg::max_abs(&(g * &p_j - &p_j * g)) <= tol::EXACT);
    let generates = linalg::span_dim(&b_basis.iter().map(|g| g * &p_j).collect::<Vec<_>>(), tol::SPECTRAL) == dim_j;
    if !(is_projection && central && generates && (dim_j == 0 || j_span.contains(&p_j))) {
        return Err(Error::internal("½(δ_1[I] − δ_{-1}u) is not the central support of J"));
    }
    let q = CMat::identity(2 * n, 2 * n) - &p_j;
    let quotient: Vec<CMat> = b_basis.iter().map(|g| &q * g).collect();
    let quotient_span = linalg::algebra_closure(&quotient, tol::SPECTRAL);
    let simple = linalg::wedderburn(&quotient_span, seed, tol::SPECTRAL)?;
    let mut blocks: Vec<usize> = simple.iter().map(|b| b.size).collect();
    blocks.sort_unstable();

    // the glued model
    let model = Model { data };
    let mut relations = Vec::new();
    let mut relation_triples = Vec::new();
    for e in &ideal_units {
        let mut r1 = model.zero_triple();
        r1.zero = e.clone();
        r1.one = -e;
        let mut r2 = model.zero_triple();
        r2.zero = e.clone();
        r2.minus = -&(&data.u * e);
        relations.push(model.free_coordinates(&r1));
        relations.push(model.free_coordinates(&r2));
        relation_triples.push(r1);
        relation_triples.push(r2);
    }
    let free_dim = 2 * dim_a + dim_ideal;
    let relation_rank = linalg::rank(&linalg::columns(free_dim, &relations), tol::SPECTRAL);
    let dim_crossed = free_dim - relation_rank;
    let nf_dim = dim_a + (dim_a - dim_ideal);

    let as_triple = |coords: &CVec| {
        let mut t = model.zero_triple();
        for (i, e) in units.iter().enumerate() {
            t.one = &t.one + &e.scale(coords[i]);
            t.minus = &t.minus + &e.scale(coords[dim_a + i]);
        }
        t
    };
    let b_elements: Vec<Triple> = units
        .iter()
        .map(|e| Triple { one: e.clone(), minus: AlgElement::zero(alg), zero: AlgElement::zero(alg) })
        .chain(units.iter().map(|e| Triple { one: AlgElement::zero(alg), minus: e.clone(), zero: AlgElement::zero(alg) }))
        .collect();
    // B-coordinates of a product, read off the faithful representation
    let b_matrix = linalg::columns(4 * n * n, &b_basis.iter().map(linalg::vectorize).collect::<Vec<_>>());
    let b_solver = b_matrix.clone().svd(true, true);
    let mut structure_ok = true;
    for (i, x) in b_elements.iter().enumerate() {
        for (j, y) in b_elements.iter().enumerate() {
            let product = &b_basis[i] * &b_basis[j];
            let coords = b_solver
                .solve(&linalg::vectorize(&product), tol::GRAM_NULL)
                .map_err(|e| Error::internal(format!("least squares failed: {e}")))?;
            let coords = CVec::from_iterator(coords.nrows(), coords.column(0).iter().copied());
            let lhs = model.coordinates(&as_triple(&coords));
            let rhs = model.coordinates(&model.multiply(x, y));
            if (lhs - rhs).camax() > tol::SPECTRAL {
                structure_ok = false;
            }
        }
    }
    // the model product respects the gluing relations
    let respects = relation_triples.iter().all(|r| {
        b_elements.iter().all(|y| {
            model.coordinates(&model.multiply(r, y)).iter().all(|z| z.norm() <= tol::EXACT)
                && model.coordinates(&model.multiply(y, r)).iter().all(|z| z.norm() <= tol::EXACT)
        })
    });
    // q kills exactly J
    let q_matrix = linalg::columns(nf_dim, &b_elements.iter().map(|x| model.coordinates(x)).collect::<Vec<_>>());
    let q_rank = linalg::rank(&q_matrix, tol::SPECTRAL);
    let kills_j = ideal_units.iter().all(|e| {
        let t = Triple {
            one: e.clone(),
            minus: -&(&data.u * e),
            zero: AlgElement::zero(alg),
        };
        model.coordinates(&t).iter().all(|z| z.norm() <= tol::EXACT)
    });
    let quotient_iso = structure_ok && respects && kills_j && q_rank == dim_z2 - dim_j && dim_crossed == nf_dim;

    let trivial_case = if data.is_trivial() {
        let mut expected: Vec<usize> = alg
            .blocks()
            .iter()
            .copied()
            .chain(alg.full_ideal().difference(data.ideal).blocks().map(|b| alg.block_size(b)))
            .collect();
        expected.sort_unstable();
        let cp = CrossedProduct::new(data.trivial_action()?, SlotOrder::Index)?;
        let rep = regular_representation(&cp)?;
        let images: Vec<CMat> = cp.basis().iter().map(|&u| rep.apply(&cp.unit_element(u))).collect();
        let mut regular_blocks: Vec<usize> = linalg::wedderburn(&images, seed, tol::SPECTRAL)?.iter().map(|b| b.size).collect();
        regular_blocks.sort_unstable();
        Some(blocks == expected && regular_blocks == expected && cp.dim() == dim_crossed)
    } else {
        None
    };

    Ok(IauReport {
        dim_crossed,
        dim_z2,
        dim_ideal,
        dim_j,
        dimension_law: dim_crossed == dim_z2 - dim_ideal && dim_j == dim_ideal,
        quotient_iso,
        blocks,
        trivial_case,
    })
}
