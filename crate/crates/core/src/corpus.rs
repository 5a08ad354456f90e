//! Named fixtures: semigroups, spaces, actions on spaces, actions on
//! finite-dimensional algebras and `(I, α, u)` data.
//!
//! Random fixtures are generated from fixed seeds, so every call returns the
//! same corpus.

use rand::Rng;

use crate::act::{universal_action, universal_action_with, PartialMap, SpaceAction};
use crate::error::{Error, Result};
use crate::fdalg::{BlockIso, FdAlgebra, Ideal, PartialIsoAction};
use crate::isg::{InverseSemigroup, PartialBijection, DEFAULT_CAP};
use crate::linalg::{self, c, seeded, CMat, CVec};
use crate::topo::{set_of, FiniteSpace, PointSet, SpectrumTopology};
use crate::xprod::iau::{zero_one_minus_one, IauData};

pub const SEMIGROUPS: &[&str] = &["trivial", "z2", "01m1", "z2_zero", "i2", "i3"];
pub const SPACES: &[&str] = &["point", "discrete2", "discrete3", "indiscrete2", "sierpinski", "chain3", "fork", "vee"];

/// The four semigroups of the E*-unitarity suite.
pub const E_STAR_SUITE: &[&str] = &["01m1", "z2_zero", "i2", "i3"];

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn unknown(kind: &str, name: &str) -> Error {
    Error::precondition(format!("no {kind} fixture named {name:?}"))
}

pub fn semigroup(name: &str) -> Result<InverseSemigroup> {
    match name {
        "trivial" => InverseSemigroup::new(vec![vec![0]], vec![0], Some(0), None, Some(labels(&["1"]))),
        "z2" => InverseSemigroup::new(vec![vec![0, 1], vec![1, 0]], vec![0, 1], Some(0), None, Some(labels(&["1", "g"]))),
        "01m1" => Ok(zero_one_minus_one()),
        "z2_zero" => semigroup("z2").map(|s| s.adjoin_zero()),
        "i2" => InverseSemigroup::symmetric_inverse_monoid(2).map(|(s, _)| s),
        "i3" => InverseSemigroup::symmetric_inverse_monoid(3).map(|(s, _)| s),
        _ => Err(unknown("semigroup", name)),
    }
}

pub fn space(name: &str) -> Result<FiniteSpace> {
    let from_opens = |points: &[&str], opens: &[&[usize]]| {
        let n = points.len();
        let mut all: Vec<PointSet> = vec![set_of(n, []), set_of(n, 0..n)];
        all.extend(opens.iter().map(|o| set_of(n, o.iter().copied())));
        FiniteSpace::from_opens(labels(points), &all)
    };
    match name {
        "point" => FiniteSpace::discrete(labels(&["p"])),
        "discrete2" => FiniteSpace::discrete(labels(&["a", "b"])),
        "discrete3" => FiniteSpace::discrete(labels(&["a", "b", "c"])),
        "indiscrete2" => FiniteSpace::indiscrete(labels(&["a", "b"])),
        "sierpinski" => from_opens(&["o", "c"], &[&[0]]),
        "chain3" => from_opens(&["a", "b", "c"], &[&[0], &[0, 1]]),
        // two open points with a common limit
        "fork" => from_opens(&["a", "b", "c"], &[&[0], &[1], &[0, 1]]),
        // one open point dense in two closed ones
        "vee" => from_opens(&["a", "b", "c"], &[&[2], &[0, 2], &[1, 2]]),
        _ => Err(unknown("space", name)),
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Homeomorphisms `σ` of `x` with `σ² = id`, identity first.
pub fn involutive_homeomorphisms(x: &FiniteSpace) -> Vec<Vec<usize>> {
    let n = x.len();
    permutations(n)
        .into_iter()
        .filter(|p| (0..n).all(|i| p[p[i]] == i))
        .filter(|p| {
            (0..n).all(|i| {
                let image = set_of(n, x.minimal_neighbourhood(i).ones().map(|j| p[j]));
                image == *x.minimal_neighbourhood(p[i])
            })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SpaceFixture {
    pub name: String,
    pub action: SpaceAction,
}

fn permutation_map(sigma: &[usize]) -> Result<PartialMap> {
    PartialMap::new(sigma.len(), &sigma.iter().enumerate().map(|(i, &j)| (i, j)).collect::<Vec<_>>())
}

fn describe(x: &FiniteSpace, sigma: &[usize]) -> String {
    let moved: Vec<String> = (0..sigma.len())
        .filter(|&i| sigma[i] > i)
        .map(|i| format!("{}{}", x.label(i), x.label(sigma[i])))
        .collect();
    if moved.is_empty() {
        "id".into()
    } else {
        moved.join("+")
    }
}

fn set_name(x: &FiniteSpace, s: &PointSet) -> String {
    if s.is_clear() {
        return "none".into();
    }
    s.ones().map(|i| x.label(i)).collect::<Vec<_>>().join("")
}

/// Every action of `trivial`, `z2` and `01m1` on every named space built from
/// an involutive homeomorphism `σ` and, for `01m1`, an open `D_0 ⊆ Fix(σ)`;
/// then the universal actions of the E*-suite in both topologies, and the
/// defining action of `I_2`.
pub fn space_actions() -> Result<Vec<SpaceFixture>> {
    let mut out = Vec::new();
    let trivial = semigroup("trivial")?;
    let z2 = semigroup("z2")?;
    let s01 = semigroup("01m1")?;
    for &space_name in SPACES {
        let x = space(space_name)?;
        let id = PartialMap::identity_on(&x.full());
        out.push(SpaceFixture {
            name: format!("trivial/{space_name}"),
            action: SpaceAction::new(trivial.clone(), x.clone(), vec![id.clone()], false)?,
        });
        for sigma in involutive_homeomorphisms(&x) {
            let s_map = permutation_map(&sigma)?;
            let tag = describe(&x, &sigma);
            out.push(SpaceFixture {
                name: format!("z2/{space_name}/{tag}"),
                action: SpaceAction::new(z2.clone(), x.clone(), vec![id.clone(), s_map.clone()], false)?,
            });
            for d0 in x.opens(DEFAULT_CAP)? {
                if d0.ones().any(|i| sigma[i] != i) {
                    continue;
                }
                let zero = PartialMap::identity_on(&d0);
                out.push(SpaceFixture {
                    name: format!("01m1/{space_name}/{tag}/d0={}", set_name(&x, &d0)),
                    action: SpaceAction::new(s01.clone(), x.clone(), vec![id.clone(), s_map.clone(), zero], d0.is_clear())?,
                });
            }
        }
    }
    for &name in E_STAR_SUITE {
        let s = semigroup(name)?;
        out.push(SpaceFixture {
            name: format!("universal/{name}"),
            action: universal_action(&s)?,
        });
        out.push(SpaceFixture {
            name: format!("universal-patch/{name}"),
            action: universal_action_with(&s, SpectrumTopology::Patch)?,
        });
    }
    out.push(SpaceFixture {
        name: "i2/defining".into(),
        action: i2_defining_action()?,
    });
    for f in &out {
        f.action.ensure_valid().map_err(|e| Error::internal(format!("fixture {}: {e}", f.name)))?;
    }
    Ok(out)
}

/// `I_2` acting on two discrete points by partial bijections.
pub fn i2_defining_action() -> Result<SpaceAction> {
    let (s, elems) = InverseSemigroup::symmetric_inverse_monoid(2)?;
    let x = FiniteSpace::discrete(labels(&["a", "b"]))?;
    let maps = elems
        .iter()
        .map(|e| PartialMap::new(2, &e.domain().into_iter().map(|p| (p, e.apply(p).expect("in domain"))).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    SpaceAction::new(s, x, maps, true)
}

/// `{1, -1, 0}` acting trivially on two discrete points with `D_0 = {a}`.
pub fn discrete_01m1() -> Result<SpaceAction> {
    space_action("01m1/discrete2/id/d0=a")
}

pub fn space_action(name: &str) -> Result<SpaceAction> {
    space_actions()?
        .into_iter()
        .find(|f| f.name == name)
        .map(|f| f.action)
        .ok_or_else(|| unknown("space action", name))
}

/// The actions on discrete spaces.
pub fn discrete_actions() -> Result<Vec<SpaceFixture>> {
    Ok(space_actions()?.into_iter().filter(|f| f.action.space().is_discrete()).collect())
}

#[derive(Debug, Clone)]
pub struct FdFixture {
    pub name: String,
    pub action: PartialIsoAction,
}

/// `α` on the blocks: a random involution pairing equal-sized blocks, the
/// other blocks conjugated by self-adjoint unitaries (or fixed outright when
/// listed in `rigid`).
fn random_involution(rng: &mut impl Rng, alg: &FdAlgebra, rigid: Ideal, twist: bool) -> Result<BlockIso> {
    let k = alg.block_count();
    let mut partner: Vec<Option<usize>> = vec![None; k];
    for b in 0..k {
        if partner[b].is_some() || rigid.contains(b) {
            continue;
        }
        if let Some(p) = (b + 1..k).find(|&p| partner[p].is_none() && !rigid.contains(p) && alg.block_size(p) == alg.block_size(b)) {
            if rng.random_bool(0.6) {
                partner[b] = Some(p);
                partner[p] = Some(b);
            }
        }
    }
    let mut pieces = Vec::new();
    for b in 0..k {
        let d = alg.block_size(b);
        match partner[b] {
            Some(p) if p > b => {
                let w = if twist { linalg::random_unitary(rng, d) } else { CMat::identity(d, d) };
                pieces.push((b, p, w.clone()));
                pieces.push((p, b, w.adjoint()));
            }
            Some(_) => {}
            None if twist && !rigid.contains(b) => pieces.push((b, b, linalg::random_symmetry(rng, d))),
            None => pieces.push((b, b, CMat::identity(d, d))),
        }
    }
    BlockIso::new(alg, pieces)
}

fn random_algebra(rng: &mut impl Rng, max_blocks: usize, max_size: usize) -> Result<FdAlgebra> {
    let k = rng.random_range(1..=max_blocks);
    FdAlgebra::new((0..k).map(|_| rng.random_range(1..=max_size)).collect())
}

fn z2_action(rng: &mut impl Rng) -> Result<PartialIsoAction> {
    let alg = random_algebra(rng, 3, 2)?;
    let twist = rng.random_bool(0.7);
    let sigma = random_involution(rng, &alg, Ideal::ZERO, twist)?;
    let id = BlockIso::identity_on(&alg, alg.full_ideal());
    PartialIsoAction::new(semigroup("z2")?, alg, vec![id, sigma])
}

fn zero_one_minus_one_action(rng: &mut impl Rng) -> Result<PartialIsoAction> {
    let alg = random_algebra(rng, 3, 2)?;
    let d0 = Ideal::from_blocks((0..alg.block_count()).filter(|_| rng.random_bool(0.5)));
    let twist = rng.random_bool(0.7);
    let sigma = random_involution(rng, &alg, d0, twist)?;
    let id = BlockIso::identity_on(&alg, alg.full_ideal());
    let zero = BlockIso::identity_on(&alg, d0);
    PartialIsoAction::new(zero_one_minus_one(), alg, vec![id, sigma, zero])
}

/// `I_2` moving two blocks of size `d` by a gauge `g_p`, plus `extra`
/// blocks on which every element acts as the identity.
fn i2_action(rng: &mut impl Rng) -> Result<PartialIsoAction> {
    let (s, elems) = InverseSemigroup::symmetric_inverse_monoid(2)?;
    let d = rng.random_range(1..=2);
    let extra: Vec<usize> = (0..rng.random_range(0..=1)).map(|_| rng.random_range(1..=2)).collect();
    let mut sizes = vec![d, d];
    sizes.extend(&extra);
    let alg = FdAlgebra::new(sizes)?;
    let gauge = [linalg::random_unitary(rng, d), linalg::random_unitary(rng, d)];
    let maps = elems
        .iter()
        .map(|e| {
            let mut pieces: Vec<(usize, usize, CMat)> = e
                .domain()
                .into_iter()
                .map(|p| {
                    let q = e.apply(p).expect("in domain");
                    (p, q, &gauge[q] * gauge[p].adjoint())
                })
                .collect();
            pieces.extend(extra.iter().enumerate().map(|(i, &m)| (2 + i, 2 + i, CMat::identity(m, m))));
            BlockIso::new(&alg, pieces)
        })
        .collect::<Result<Vec<_>>>()?;
    PartialIsoAction::new(s, alg, maps)
}

/// The seeded random fd actions; families cycle through `Z/2`, `{1,-1,0}`
/// and `I_2`.
pub fn random_fd_actions(count: usize) -> Result<Vec<FdFixture>> {
    (0..count)
        .map(|i| {
            let mut rng = seeded(0xfd00 + i as u64);
            let (family, action) = match i % 3 {
                0 => ("z2", z2_action(&mut rng)?),
                1 => ("01m1", zero_one_minus_one_action(&mut rng)?),
                _ => ("i2", i2_action(&mut rng)?),
            };
            action.ensure_valid(crate::tol::EXACT)?;
            Ok(FdFixture {
                name: format!("random-{i:02}/{family}"),
                action,
            })
        })
        .collect()
}

pub const RANDOM_FD_COUNT: usize = 20;

/// Hand-built fd actions; `block-swap` is the swap action of `Z/2` on `C²`.
pub fn named_fd_actions() -> Result<Vec<FdFixture>> {
    let c2 = FdAlgebra::commutative(2)?;
    let full = BlockIso::identity_on(&c2, c2.full_ideal());
    let swap = BlockIso::new(&c2, vec![(0, 1, CMat::identity(1, 1)), (1, 0, CMat::identity(1, 1))])?;
    let mg = FdAlgebra::new(vec![2, 1])?;
    let mg_full = BlockIso::identity_on(&mg, mg.full_ideal());
    let flip = BlockIso::new(
        &mg,
        vec![(0, 0, CMat::from_diagonal(&CVec::from_vec(vec![c(1.0), c(-1.0)]))), (1, 1, CMat::identity(1, 1))],
    )?;
    let fixtures = vec![
        (
            "sign",
            PartialIsoAction::new(zero_one_minus_one(), c2.clone(), vec![full.clone(), full.clone(), BlockIso::identity_on(&c2, Ideal::from_blocks([0]))])?,
        ),
        (
            "graded",
            PartialIsoAction::new(zero_one_minus_one(), mg.clone(), vec![mg_full, flip, BlockIso::identity_on(&mg, Ideal::from_blocks([1]))])?,
        ),
        ("trivial-z2", PartialIsoAction::new(semigroup("z2")?, c2.clone(), vec![full.clone(), full.clone()])?),
        ("block-swap", PartialIsoAction::new(semigroup("z2")?, c2.clone(), vec![full, swap])?),
        ("i2-defining", i2_defining_fd()?),
    ];
    fixtures
        .into_iter()
        .map(|(name, action)| {
            action.ensure_valid(crate::tol::EXACT)?;
            Ok(FdFixture { name: name.into(), action })
        })
        .collect()
}

fn i2_defining_fd() -> Result<PartialIsoAction> {
    let (s, elems) = InverseSemigroup::symmetric_inverse_monoid(2)?;
    let alg = FdAlgebra::commutative(2)?;
    let maps = elems
        .iter()
        .map(|e: &PartialBijection| {
            let pieces = e.domain().into_iter().map(|p| (p, e.apply(p).expect("in domain"), CMat::identity(1, 1))).collect();
            BlockIso::new(&alg, pieces)
        })
        .collect::<Result<Vec<_>>>()?;
    PartialIsoAction::new(s, alg, maps)
}

pub fn fd_actions() -> Result<Vec<FdFixture>> {
    let mut all = named_fd_actions()?;
    all.extend(random_fd_actions(RANDOM_FD_COUNT)?);
    Ok(all)
}

pub fn fd_action(name: &str) -> Result<PartialIsoAction> {
    fd_actions()?
        .into_iter()
        .find(|f| f.name == name)
        .map(|f| f.action)
        .ok_or_else(|| unknown("fd action", name))
}

#[derive(Debug, Clone)]
pub struct IauFixture {
    pub name: String,
    pub data: IauData,
}

/// `C²` with `I` the first block, `α = id`, `u = 1_I`.
pub fn iau_trivial_c2() -> Result<IauData> {
    IauData::trivial(FdAlgebra::commutative(2)?, Ideal::from_blocks([0]))
}

/// `M_2 ⊕ C`, `I = M_2`, `α = Ad(diag(1,-1)) ⊕ id`, `u = diag(1,-1)`.
pub fn iau_graded() -> Result<IauData> {
    let alg = FdAlgebra::new(vec![2, 1])?;
    let d = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0), c(-1.0)]));
    let alpha = BlockIso::new(&alg, vec![(0, 0, d.clone()), (1, 1, CMat::identity(1, 1))])?;
    let u = crate::fdalg::AlgElement::from_blocks(&alg, vec![d, CMat::zeros(1, 1)])?;
    IauData::new(alg, Ideal::from_blocks([0]), alpha, u)
}

pub const RANDOM_IAU_COUNT: usize = 10;

pub fn random_iau(count: usize) -> Result<Vec<IauFixture>> {
    (0..count)
        .map(|i| {
            let mut rng = seeded(0x1a0 + i as u64);
            Ok(IauFixture {
                name: format!("random-{i:02}"),
                data: IauData::random(&mut rng, 3)?,
            })
        })
        .collect()
}

pub fn iau_fixtures() -> Result<Vec<IauFixture>> {
    let mut all = vec![
        IauFixture { name: "trivial-c2".into(), data: iau_trivial_c2()? },
        IauFixture { name: "graded".into(), data: iau_graded()? },
    ];
    all.extend(random_iau(RANDOM_IAU_COUNT)?);
    Ok(all)
}

pub fn iau_fixture(name: &str) -> Result<IauData> {
    iau_fixtures()?
        .into_iter()
        .find(|f| f.name == name)
        .map(|f| f.data)
        .ok_or_else(|| unknown("(I, α, u)", name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::act::{criterion_d1t_closed, germ_groupoid, groupoid_is_hausdorff, units_closed};

    #[test]
    fn named_semigroups_and_spaces_build() {
        let sizes: Vec<usize> = SEMIGROUPS.iter().map(|n| semigroup(n).unwrap().size()).collect();
        assert_eq!(sizes, vec![1, 2, 3, 3, 7, 34]);
        for name in SPACES {
            space(name).unwrap();
        }
        assert!(semigroup("nope").is_err());
    }

    #[test]
    fn homeomorphism_counts() {
        let count = |n: &str| involutive_homeomorphisms(&space(n).unwrap()).len();
        assert_eq!(count("sierpinski"), 1);
        assert_eq!(count("discrete3"), 4);
        assert_eq!(count("fork"), 2);
        assert_eq!(count("chain3"), 1);
    }

    #[test]
    fn corpus_is_large_enough_and_covers_non_hausdorff_spaces() {
        let all = space_actions().unwrap();
        assert!(all.len() >= 30);
        for name in SPACES {
            let x = space(name).unwrap();
            if !x.is_hausdorff().unwrap() {
                assert!(all.iter().any(|f| f.name.contains(&format!("/{name}/"))), "{name}");
            }
        }
        assert!(discrete_actions().unwrap().len() >= 15);
        let names: std::collections::HashSet<_> = all.iter().map(|f| f.name.clone()).collect();
        assert_eq!(names.len(), all.len());
    }

    #[test]
    fn sample_actions_have_consistent_closedness() {
        for f in space_actions().unwrap().iter().step_by(5) {
            let g = germ_groupoid(&f.action).unwrap();
            let closed = units_closed(&g).unwrap();
            assert_eq!(closed, criterion_d1t_closed(&f.action).unwrap().holds, "{}", f.name);
            assert_eq!(groupoid_is_hausdorff(&g).unwrap(), closed && f.action.space().is_hausdorff().unwrap());
        }
    }

    #[test]
    fn fd_corpus_is_valid_and_deterministic() {
        let a = fd_actions().unwrap();
        let b = fd_actions().unwrap();
        assert_eq!(a.len(), 5 + RANDOM_FD_COUNT);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.action.algebra(), y.action.algebra());
            assert!(x.action.semigroup().size() <= 7);
        }
    }

    #[test]
    fn iau_fixtures_are_valid() {
        let all = iau_fixtures().unwrap();
        assert_eq!(all.len(), 2 + RANDOM_IAU_COUNT);
        assert!(all.iter().all(|f| f.data.algebra().blocks().iter().all(|&d| d <= 3)));
        assert!(iau_fixture("graded").is_ok());
    }
}
