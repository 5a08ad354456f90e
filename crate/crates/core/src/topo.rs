//! Finite topological spaces and spectra of finite semilattices.
//!
//! A topology on a finite set is determined by the minimal open
//! neighbourhood of each point, so that is what [`FiniteSpace`] stores; the
//! full family of opens can be enumerated on demand.

use std::collections::{BTreeSet, HashSet};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::isg::{Elem, InverseSemigroup};

/// A subset of the points of a space (or of any finite index set).
pub type PointSet = FixedBitSet;

/// Builds a set of capacity `n` from indices.
pub fn set_of(n: usize, members: impl IntoIterator<Item = usize>) -> PointSet {
    let mut s = FixedBitSet::with_capacity(n);
    for m in members {
        s.insert(m);
    }
    s
}

pub fn full_set(n: usize) -> PointSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

pub fn members(s: &PointSet) -> Vec<usize> {
    s.ones().collect()
}

fn union(a: &PointSet, b: &PointSet) -> PointSet {
    let mut u = a.clone();
    u.union_with(b);
    u
}

fn intersection(a: &PointSet, b: &PointSet) -> PointSet {
    let mut u = a.clone();
    u.intersect_with(b);
    u
}

fn complement(a: &PointSet) -> PointSet {
    let mut c = a.clone();
    c.toggle_range(..);
    c
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceViolation {
    MissingEmpty,
    MissingFull,
    UnionNotOpen { left: usize, right: usize },
    IntersectionNotOpen { left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpaceReport {
    pub valid: bool,
    pub violation: Option<SpaceViolation>,
}

/// Checks that a family of subsets of `points` points is a topology.
/// Pair indices in the report refer to positions in `opens`.
pub fn validate_space(points: usize, opens: &[PointSet]) -> SpaceReport {
    let family: HashSet<&PointSet> = opens.iter().collect();
    let violation = if !opens.iter().any(|o| o.is_clear()) {
        Some(SpaceViolation::MissingEmpty)
    } else if !family.contains(&full_set(points)) {
        Some(SpaceViolation::MissingFull)
    } else {
        let mut found = None;
        'scan: for i in 0..opens.len() {
            for j in i + 1..opens.len() {
                if !family.contains(&union(&opens[i], &opens[j])) {
                    found = Some(SpaceViolation::UnionNotOpen { left: i, right: j });
                    break 'scan;
                }
                if !family.contains(&intersection(&opens[i], &opens[j])) {
                    found = Some(SpaceViolation::IntersectionNotOpen { left: i, right: j });
                    break 'scan;
                }
            }
        }
        found
    };
    SpaceReport {
        valid: violation.is_none(),
        violation,
    }
}

/// A finite topological space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    labels: Vec<String>,
    /// Smallest open set containing each point.
    nbhd: Vec<PointSet>,
}

impl FiniteSpace {
    /// Builds a space from an explicit family of opens, which must be a topology.
    pub fn from_opens(labels: Vec<String>, opens: &[PointSet]) -> Result<Self> {
        let n = labels.len();
        check_labels(&labels)?;
        if let Some(o) = opens.iter().find(|o| o.len() != n) {
            return Err(Error::structural(format!("open set of width {} on {n} points", o.len())));
        }
        let report = validate_space(n, opens);
        if let Some(v) = report.violation {
            return Err(Error::structural(format!("not a topology: {v:?}")));
        }
        let nbhd = (0..n)
            .map(|x| {
                opens
                    .iter()
                    .filter(|o| o.contains(x))
                    .fold(full_set(n), |acc, o| intersection(&acc, o))
            })
            .collect();
        Ok(FiniteSpace { labels, nbhd })
    }

    /// The coarsest topology in which every given set is open.
    pub fn from_subbasis(labels: Vec<String>, sets: &[PointSet]) -> Result<Self> {
        let n = labels.len();
        check_labels(&labels)?;
        if let Some(o) = sets.iter().find(|o| o.len() != n) {
            return Err(Error::structural(format!("subbasic set of width {} on {n} points", o.len())));
        }
        let nbhd = (0..n)
            .map(|x| {
                sets.iter()
                    .filter(|s| s.contains(x))
                    .fold(full_set(n), |acc, s| intersection(&acc, s))
            })
            .collect();
        Ok(FiniteSpace { labels, nbhd })
    }

    pub fn discrete(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        let singletons: Vec<PointSet> = (0..n).map(|x| set_of(n, [x])).collect();
        Self::from_subbasis(labels, &singletons)
    }

    pub fn indiscrete(labels: Vec<String>) -> Result<Self> {
        Self::from_subbasis(labels, &[])
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn set(&self, members: impl IntoIterator<Item = usize>) -> PointSet {
        set_of(self.len(), members)
    }

    pub fn full(&self) -> PointSet {
        full_set(self.len())
    }

    pub fn empty_set(&self) -> PointSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn minimal_neighbourhood(&self, x: usize) -> &PointSet {
        &self.nbhd[x]
    }

    pub fn is_open(&self, set: &PointSet) -> bool {
        set.ones().all(|x| self.nbhd[x].is_subset(set))
    }

    /// Complement of the union of all opens disjoint from `set`.
    pub fn closure(&self, set: &PointSet) -> PointSet {
        let mut outside = self.empty_set();
        for x in 0..self.len() {
            if self.nbhd[x].is_disjoint(set) {
                outside.union_with(&self.nbhd[x]);
            }
        }
        complement(&outside)
    }

    pub fn is_closed(&self, set: &PointSet) -> bool {
        self.closure(set) == *set
    }

    /// Whether `a` is relatively closed in the open set `b`, i.e. `b \ a` is open.
    pub fn is_closed_in(&self, a: &PointSet, b: &PointSet) -> Result<bool> {
        if !self.is_open(b) {
            return Err(Error::precondition("relative closedness is only tested inside open sets"));
        }
        let mut rest = b.clone();
        rest.difference_with(a);
        Ok(self.is_open(&rest))
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.len()).all(|x| self.nbhd[x].count_ones(..) == 1)
    }

    /// Separation of distinct points by disjoint opens, checked against
    /// discreteness (the two coincide for finite spaces).
    pub fn is_hausdorff(&self) -> Result<bool> {
        let n = self.len();
        let separated = (0..n).all(|x| (x + 1..n).all(|y| self.nbhd[x].is_disjoint(&self.nbhd[y])));
        if separated != self.is_discrete() {
            return Err(Error::internal("finite space: Hausdorff and discrete disagree"));
        }
        Ok(separated)
    }

    /// Every open set, in increasing order, up to `cap` of them.
    pub fn opens(&self, cap: usize) -> Result<Vec<PointSet>> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut frontier = vec![self.empty_set()];
        seen.insert(Vec::new());
        while let Some(o) = frontier.pop() {
            for x in 0..self.len() {
                if o.contains(x) {
                    continue;
                }
                let bigger = union(&o, &self.nbhd[x]);
                if seen.insert(members(&bigger)) {
                    if seen.len() > cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    frontier.push(bigger);
                }
            }
        }
        Ok(seen.into_iter().map(|m| self.set(m)).collect())
    }

    /// Continuity of `f: self → other`, via minimal neighbourhoods.
    pub fn is_continuous(&self, f: &[usize], other: &FiniteSpace) -> bool {
        f.len() == self.len()
            && f.iter().all(|&y| y < other.len())
            && (0..self.len()).all(|x| self.nbhd[x].ones().all(|z| other.nbhd[f[x]].contains(f[z])))
    }
}

fn check_labels(labels: &[String]) -> Result<()> {
    let distinct: HashSet<&String> = labels.iter().collect();
    if distinct.len() != labels.len() {
        return Err(Error::structural("point labels must be distinct"));
    }
    Ok(())
}

/// A finite meet-semilattice with zero and top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semilattice {
    labels: Vec<String>,
    meet: Vec<usize>,
    zero: usize,
    one: usize,
    /// Originating semigroup elements, when built from idempotents.
    carrier: Vec<Elem>,
}

impl Semilattice {
    pub fn new(labels: Vec<String>, meet: Vec<Vec<usize>>, zero: usize, one: usize) -> Result<Self> {
        let k = labels.len();
        if meet.len() != k || meet.iter().any(|r| r.len() != k || r.iter().any(|&x| x >= k)) {
            return Err(Error::structural("meet table shape does not match the labels"));
        }
        if zero >= k || one >= k {
            return Err(Error::structural("zero or top out of range"));
        }
        let m = |a: usize, b: usize| meet[a][b];
        for a in 0..k {
            if m(a, a) != a || m(a, one) != a || m(a, zero) != zero {
                return Err(Error::structural(format!("meet law fails at {a}")));
            }
            for b in 0..k {
                if m(a, b) != m(b, a) {
                    return Err(Error::structural(format!("meet not commutative at ({a},{b})")));
                }
                for c in 0..k {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Error::structural(format!("meet not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(Semilattice {
            labels,
            meet: meet.into_iter().flatten().collect(),
            zero,
            one,
            carrier: (0..k).collect(),
        })
    }

    /// `E(S)` for a semigroup with unit and zero.
    pub fn of_idempotents(s: &InverseSemigroup) -> Result<Self> {
        let (Some(unit), Some(zero)) = (s.unit(), s.zero()) else {
            return Err(Error::precondition("the idempotent semilattice needs a unit and a zero"));
        };
        let idem = s.idempotents();
        let local = |e: Elem| idem.iter().position(|&f| f == e).expect("idempotents are closed under products");
        let meet = idem.iter().map(|&e| idem.iter().map(|&f| local(s.mul(e, f))).collect()).collect();
        let labels = idem.iter().map(|&e| s.label(e).to_string()).collect();
        let mut lattice = Semilattice::new(labels, meet, local(zero), local(unit))?;
        lattice.carrier = idem;
        Ok(lattice)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn meet(&self, e: usize, f: usize) -> usize {
        self.meet[e * self.len() + f]
    }

    pub fn leq(&self, e: usize, f: usize) -> bool {
        self.meet(e, f) == e
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn label(&self, e: usize) -> &str {
        &self.labels[e]
    }

    /// Semigroup element behind local index `e`.
    pub fn carrier(&self, e: usize) -> Elem {
        self.carrier[e]
    }

    /// Local index of a semigroup idempotent.
    pub fn local(&self, elem: Elem) -> Option<usize> {
        self.carrier.iter().position(|&c| c == elem)
    }

    fn down_set(&self, e: usize) -> PointSet {
        set_of(self.len(), (0..self.len()).filter(|&f| self.leq(f, e)))
    }

    /// Down-closed subsets containing zero, in increasing order.
    pub fn ideals(&self) -> Vec<PointSet> {
        let start = set_of(self.len(), [self.zero]);
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(members(&start));
        let mut frontier = vec![start];
        while let Some(i) = frontier.pop() {
            for e in 0..self.len() {
                if !i.contains(e) {
                    let bigger = union(&i, &self.down_set(e));
                    if seen.insert(members(&bigger)) {
                        frontier.push(bigger);
                    }
                }
            }
        }
        seen.into_iter().map(|m| set_of(self.len(), m)).collect()
    }
}

/// Which topology to put on the character set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumTopology {
    /// Generated by the sets `U_e`; not Hausdorff in general.
    Spectral,
    /// The patch topology, which is discrete on a finite character set.
    Patch,
}

/// The character space of a finite semilattice.
#[derive(Debug, Clone)]
pub struct SemilatticeSpectrum {
    lattice: Semilattice,
    /// Character `i` as the set `{e : φ_i(e) = 1}`.
    characters: Vec<PointSet>,
    /// The least element of each character's filter.
    generators: Vec<usize>,
    /// `U_e` for every local `e`.
    basis: Vec<PointSet>,
    space: FiniteSpace,
}

/// Enumerates the characters of `lattice` and topologises them.
///
/// Each character's filter is principal, generated by a nonzero element; the
/// generated candidates are checked multiplicative before use.
pub fn semilattice_spectrum(lattice: &Semilattice) -> Result<SemilatticeSpectrum> {
    let k = lattice.len();
    let mut characters = Vec::new();
    let mut generators = Vec::new();
    for e in (0..k).filter(|&e| e != lattice.zero()) {
        let filter = set_of(k, (0..k).filter(|&f| lattice.leq(e, f)));
        if !is_character(lattice, &filter) {
            return Err(Error::internal(format!("principal filter at {e} is not multiplicative")));
        }
        characters.push(filter);
        generators.push(e);
    }
    let n = characters.len();
    let basis: Vec<PointSet> = (0..k)
        .map(|e| set_of(n, (0..n).filter(|&i| characters[i].contains(e))))
        .collect();
    for e in 0..k {
        for f in 0..k {
            if intersection(&basis[e], &basis[f]) != basis[lattice.meet(e, f)] {
                return Err(Error::internal(format!("U_e ∩ U_f ≠ U_ef at ({e},{f})")));
            }
        }
    }
    let labels = generators.iter().map(|&e| format!("phi[{}]", lattice.label(e))).collect();
    let space = FiniteSpace::from_subbasis(labels, &basis)?;
    for (i, &e) in generators.iter().enumerate() {
        if *space.minimal_neighbourhood(i) != basis[e] {
            return Err(Error::internal("minimal neighbourhood of a character is not basic"));
        }
    }
    Ok(SemilatticeSpectrum {
        lattice: lattice.clone(),
        characters,
        generators,
        basis,
        space,
    })
}

/// `{0,1}`-valued, multiplicative, sends top to 1 and zero to 0.
pub fn is_character(lattice: &Semilattice, values: &PointSet) -> bool {
    let k = lattice.len();
    values.contains(lattice.one())
        && !values.contains(lattice.zero())
        && (0..k).all(|e| {
            (0..k).all(|f| values.contains(lattice.meet(e, f)) == (values.contains(e) && values.contains(f)))
        })
}

/// Ultracharacters and their closure in the spectral topology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ultracharacters {
    pub members: PointSet,
    pub closure: PointSet,
}

impl SemilatticeSpectrum {
    pub fn lattice(&self) -> &Semilattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn space_with(&self, topology: SpectrumTopology) -> Result<FiniteSpace> {
        match topology {
            SpectrumTopology::Spectral => Ok(self.space.clone()),
            SpectrumTopology::Patch => FiniteSpace::discrete(self.space.labels().to_vec()),
        }
    }

    /// `φ_i(e)`.
    pub fn value(&self, character: usize, e: usize) -> bool {
        self.characters[character].contains(e)
    }

    pub fn character(&self, i: usize) -> &PointSet {
        &self.characters[i]
    }

    /// Index of the character with the given value set, if it is one.
    pub fn find_character(&self, values: &PointSet) -> Option<usize> {
        self.characters.iter().position(|c| c == values)
    }

    pub fn generator(&self, character: usize) -> usize {
        self.generators[character]
    }

    /// `U_e = {φ : φ(e) = 1}`.
    pub fn basic_open(&self, e: usize) -> &PointSet {
        &self.basis[e]
    }

    /// Verifies that `V ↦ {e : U_e ⊆ V}` is a lattice isomorphism from the
    /// opens of the spectrum onto the ideals of the semilattice.
    pub fn ideal_open_bijection_check(&self, cap: usize) -> Result<bool> {
        let opens = self.space.opens(cap)?;
        let k = self.lattice.len();
        let to_ideal = |v: &PointSet| set_of(k, (0..k).filter(|&e| self.basis[e].is_subset(v)));
        let images: Vec<PointSet> = opens.iter().map(to_ideal).collect();
        let ideals: HashSet<PointSet> = self.lattice.ideals().into_iter().collect();
        let image_set: HashSet<&PointSet> = images.iter().collect();
        let bijective = image_set.len() == opens.len()
            && ideals.len() == opens.len()
            && images.iter().all(|i| ideals.contains(i));
        let lattice_map = (0..opens.len()).all(|a| {
            (0..opens.len()).all(|b| {
                to_ideal(&union(&opens[a], &opens[b])) == union(&images[a], &images[b])
                    && to_ideal(&intersection(&opens[a], &opens[b])) == intersection(&images[a], &images[b])
            })
        });
        Ok(bijective && lattice_map)
    }

    /// Characters whose filter is maximal among character filters.
    ///
    /// On a finite character set the patch topology is discrete, so the
    /// closure there must return the same set; this is asserted.
    pub fn ultracharacters(&self) -> Result<Ultracharacters> {
        let n = self.len();
        let maximal = set_of(
            n,
            (0..n).filter(|&i| {
                (0..n).all(|j| j == i || !self.characters[i].is_subset(&self.characters[j]))
            }),
        );
        let patch = self.space_with(SpectrumTopology::Patch)?;
        if patch.closure(&maximal) != maximal {
            return Err(Error::internal("tight spectrum differs from the ultracharacters"));
        }
        Ok(Ultracharacters {
            closure: self.space.closure(&maximal),
            members: maximal,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn sierpinski() -> FiniteSpace {
        let l = labels(&["a", "b"]);
        FiniteSpace::from_opens(l, &[set_of(2, []), set_of(2, [0]), set_of(2, [0, 1])]).unwrap()
    }

    /// Chain 0 < e < 1 as local indices 0, 1, 2.
    fn chain() -> Semilattice {
        Semilattice::new(
            labels(&["0", "e", "1"]),
            vec![vec![0, 0, 0], vec![0, 1, 1], vec![0, 1, 2]],
            0,
            2,
        )
        .unwrap()
    }

    /// {0, e, f, 1} with ef = 0.
    fn diamond() -> Semilattice {
        Semilattice::new(
            labels(&["0", "e", "f", "1"]),
            vec![vec![0, 0, 0, 0], vec![0, 1, 0, 1], vec![0, 0, 2, 2], vec![0, 1, 2, 3]],
            0,
            3,
        )
        .unwrap()
    }

    fn two_point() -> Semilattice {
        Semilattice::new(labels(&["0", "1"]), vec![vec![0, 0], vec![0, 1]], 0, 1).unwrap()
    }

    /// Every {0,1}-valued map, filtered by the character axioms.
    fn brute_force_characters(l: &Semilattice) -> BTreeSet<Vec<usize>> {
        let k = l.len();
        (0u32..1 << k)
            .map(|mask| set_of(k, (0..k).filter(|&e| mask & (1 << e) != 0)))
            .filter(|v| is_character(l, v))
            .map(|v| members(&v))
            .collect()
    }

    #[test]
    fn validate_space_examples() {
        assert!(validate_space(2, &[set_of(2, []), set_of(2, [0]), set_of(2, [0, 1])]).valid);
        let bad = validate_space(2, &[set_of(2, []), set_of(2, [0]), set_of(2, [1])]);
        assert!(!bad.valid);
        let r = validate_space(2, &[set_of(2, []), set_of(2, [0]), set_of(2, [1]), set_of(2, [0, 1])]);
        assert!(r.valid);
        let three = FiniteSpace::discrete(labels(&["x", "y", "z"])).unwrap();
        let opens = three.opens(100).unwrap();
        assert_eq!(opens.len(), 8);
        assert!(validate_space(3, &opens).valid);
    }

    #[test]
    fn missing_union_is_reported() {
        let r = validate_space(3, &[set_of(3, []), set_of(3, [0]), set_of(3, [1]), set_of(3, [0, 1, 2])]);
        assert_eq!(r.violation, Some(SpaceViolation::UnionNotOpen { left: 1, right: 2 }));
    }

    #[test]
    fn closure_examples() {
        let s = sierpinski();
        assert_eq!(s.closure(&set_of(2, [0])), set_of(2, [0, 1]));
        assert_eq!(s.closure(&set_of(2, [])), set_of(2, []));
        assert_eq!(s.closure(&set_of(2, [1])), set_of(2, [1]));
        assert!(!s.is_closed_in(&set_of(2, [0]), &set_of(2, [0, 1])).unwrap());
        assert!(s.is_closed_in(&set_of(2, [0]), &set_of(2, [1])).is_err());
    }

    #[test]
    fn hausdorff_examples() {
        assert!(!sierpinski().is_hausdorff().unwrap());
        assert!(FiniteSpace::discrete(labels(&["x", "y", "z"])).unwrap().is_hausdorff().unwrap());
        let spec = semilattice_spectrum(&chain()).unwrap();
        assert!(!spec.space().is_hausdorff().unwrap());
    }

    #[test]
    fn spectrum_of_chain_is_sierpinski() {
        let spec = semilattice_spectrum(&chain()).unwrap();
        assert_eq!(spec.len(), 2);
        let opens = spec.space().opens(100).unwrap();
        assert_eq!(opens.len(), 3);
        // φ_e is the open point
        let phi_e = spec.find_character(&set_of(3, [1, 2])).unwrap();
        assert_eq!(*spec.space().minimal_neighbourhood(phi_e), set_of(2, [phi_e]));
    }

    #[test]
    fn spectrum_of_two_point_lattice_is_a_point() {
        let spec = semilattice_spectrum(&two_point()).unwrap();
        assert_eq!(spec.len(), 1);
        assert!(spec.ideal_open_bijection_check(100).unwrap());
        assert_eq!(members(&spec.ultracharacters().unwrap().members), vec![0]);
    }

    #[test]
    fn spectrum_of_orthogonal_pair() {
        let l = diamond();
        let spec = semilattice_spectrum(&l).unwrap();
        assert_eq!(spec.len(), 3);
        let phi_e = spec.find_character(&set_of(4, [1, 3])).unwrap();
        let phi_f = spec.find_character(&set_of(4, [2, 3])).unwrap();
        let expected: BTreeSet<Vec<usize>> = [
            vec![],
            vec![phi_e],
            vec![phi_f],
            { let mut v = vec![phi_e, phi_f]; v.sort(); v },
            vec![0, 1, 2],
        ]
        .into_iter()
        .collect();
        let opens: BTreeSet<Vec<usize>> = spec.space().opens(100).unwrap().iter().map(members).collect();
        assert_eq!(opens, expected);
        assert!(spec.ideal_open_bijection_check(100).unwrap());
        let ultra = spec.ultracharacters().unwrap();
        assert_eq!(members(&ultra.members), { let mut v = vec![phi_e, phi_f]; v.sort(); v });
    }

    #[test]
    fn chain_ultracharacters_and_ideals() {
        let spec = semilattice_spectrum(&chain()).unwrap();
        assert!(spec.ideal_open_bijection_check(100).unwrap());
        let ultra = spec.ultracharacters().unwrap();
        let phi_e = spec.find_character(&set_of(3, [1, 2])).unwrap();
        assert_eq!(members(&ultra.members), vec![phi_e]);
        assert_eq!(ultra.closure.count_ones(..), 2);
        assert_eq!(spec.space().opens(100).unwrap().len(), chain().ideals().len());
    }

    #[test]
    fn spectrum_of_i3_idempotents() {
        let (s, _) = InverseSemigroup::symmetric_inverse_monoid(3).unwrap();
        let l = Semilattice::of_idempotents(&s).unwrap();
        let spec = semilattice_spectrum(&l).unwrap();
        assert_eq!(spec.len(), 7);
        let enumerated: BTreeSet<Vec<usize>> = (0..spec.len()).map(|i| members(spec.character(i))).collect();
        assert_eq!(enumerated, brute_force_characters(&l));
        assert!(spec.ideal_open_bijection_check(1000).unwrap());
        assert_eq!(spec.space().opens(1000).unwrap().len(), l.ideals().len());
    }

    #[test]
    fn patch_topology_is_discrete() {
        let spec = semilattice_spectrum(&diamond()).unwrap();
        let patch = spec.space_with(SpectrumTopology::Patch).unwrap();
        assert!(patch.is_discrete());
    }

    fn arb_space() -> impl Strategy<Value = FiniteSpace> {
        (1usize..=5).prop_flat_map(|n| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), n), 0..5).prop_map(move |raw| {
                let sets: Vec<PointSet> = raw
                    .iter()
                    .map(|bits| set_of(n, (0..n).filter(|&i| bits[i])))
                    .collect();
                let l = (0..n).map(|i| format!("p{i}")).collect();
                FiniteSpace::from_subbasis(l, &sets).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn enumerated_opens_form_a_topology(space in arb_space()) {
            let opens = space.opens(10_000).unwrap();
            prop_assert!(validate_space(space.len(), &opens).valid);
            let rebuilt = FiniteSpace::from_opens(space.labels().to_vec(), &opens).unwrap();
            prop_assert_eq!(&rebuilt, &space);
            for o in &opens {
                prop_assert!(space.is_open(o));
            }
        }

        #[test]
        fn closure_matches_definition(space in arb_space(), bits in proptest::collection::vec(any::<bool>(), 5)) {
            let n = space.len();
            let a = set_of(n, (0..n).filter(|&i| bits[i]));
            let opens = space.opens(10_000).unwrap();
            // complement of the union of opens disjoint from a
            let mut outside = space.empty_set();
            for o in opens.iter().filter(|o| o.is_disjoint(&a)) {
                outside.union_with(o);
            }
            prop_assert_eq!(space.closure(&a), complement(&outside));
            // closed sets are complements of opens
            prop_assert_eq!(space.is_closed(&a), space.is_open(&complement(&a)));
            prop_assert_eq!(space.is_hausdorff().unwrap(), space.is_discrete());
        }
    }
}
