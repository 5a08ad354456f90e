//! Actions of inverse semigroups on finite spaces by partial homeomorphisms,
//! the universal action on the spectrum of `E(S)`, and groupoids of germs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::isg::{Elem, InverseSemigroup};
use crate::topo::{members, semilattice_spectrum, set_of, FiniteSpace, PointSet, Semilattice, SpectrumTopology};

/// A partial map on the points of a space, defined exactly on `domain`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMap {
    domain: PointSet,
    image: Vec<Option<usize>>,
}

impl PartialMap {
    pub fn new(points: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut image = vec![None; points];
        for &(x, y) in pairs {
            if x >= points || y >= points {
                return Err(Error::structural(format!("pair {x}->{y} leaves the {points} points")));
            }
            if image[x].replace(y).is_some() {
                return Err(Error::structural(format!("point {x} is mapped twice")));
            }
        }
        let domain = set_of(points, (0..points).filter(|&x| image[x].is_some()));
        Ok(PartialMap { domain, image })
    }

    pub fn identity_on(domain: &PointSet) -> Self {
        let image = (0..domain.len()).map(|x| domain.contains(x).then_some(x)).collect();
        PartialMap {
            domain: domain.clone(),
            image,
        }
    }

    pub fn domain(&self) -> &PointSet {
        &self.domain
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.image.get(x).copied().flatten()
    }

    pub fn codomain(&self) -> PointSet {
        set_of(self.image.len(), self.image.iter().flatten().copied())
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.domain.ones().map(|x| (x, self.image[x].expect("defined on domain"))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionViolationKind {
    DomainNotOpen,
    CodomainNotOpen,
    NotInjective,
    NotHomeomorphism,
    UnitNotIdentity,
    ZeroNotEmpty,
    InverseMismatch,
    CompositionDomain,
    CompositionValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionViolation {
    pub kind: ActionViolationKind,
    pub t: Option<Elem>,
    pub u: Option<Elem>,
    pub x: Option<usize>,
}

/// First violation of each kind, in scan order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionReport {
    pub valid: bool,
    pub violations: Vec<ActionViolation>,
}

/// An action `t ↦ α_t : D_{t*} → D_t` of `S` on a finite space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceAction {
    semigroup: InverseSemigroup,
    space: FiniteSpace,
    maps: Vec<PartialMap>,
    zero_preserving: bool,
}

impl SpaceAction {
    /// Assembles an action without validating it. A semigroup lacking a unit
    /// gets one adjoined, acting as the identity.
    pub fn new(
        semigroup: InverseSemigroup,
        space: FiniteSpace,
        mut maps: Vec<PartialMap>,
        zero_preserving: bool,
    ) -> Result<Self> {
        if maps.len() != semigroup.size() {
            return Err(Error::structural(format!(
                "{} maps for a semigroup of size {}",
                maps.len(),
                semigroup.size()
            )));
        }
        if let Some((t, _)) = maps.iter().enumerate().find(|(_, m)| m.image.len() != space.len()) {
            return Err(Error::structural(format!("map {t} is not on the {} points", space.len())));
        }
        let semigroup = match semigroup.unit() {
            Some(_) => semigroup,
            None => {
                maps.push(PartialMap::identity_on(&space.full()));
                semigroup.adjoin_unit()
            }
        };
        Ok(SpaceAction {
            semigroup,
            space,
            maps,
            zero_preserving,
        })
    }

    pub fn semigroup(&self) -> &InverseSemigroup {
        &self.semigroup
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn map(&self, t: Elem) -> &PartialMap {
        &self.maps[t]
    }

    pub fn is_zero_preserving(&self) -> bool {
        self.zero_preserving
    }

    /// `D_{t*}`, where `α_t` is defined.
    pub fn domain(&self, t: Elem) -> &PointSet {
        &self.maps[t].domain
    }

    /// `D_t`, the image of `α_t`.
    pub fn codomain(&self, t: Elem) -> PointSet {
        self.maps[t].codomain()
    }

    pub fn apply(&self, t: Elem, x: usize) -> Option<usize> {
        self.maps[t].apply(x)
    }

    fn unit(&self) -> Elem {
        self.semigroup.unit().expect("actions always carry a unit")
    }

    /// Exhaustive check of the action axioms.
    pub fn validate(&self) -> ActionReport {
        use ActionViolationKind::*;
        let s = &self.semigroup;
        let x_space = &self.space;
        let mut found: Vec<ActionViolation> = Vec::new();
        let mut record = |kind, t, u, x| {
            if !found.iter().any(|v| v.kind == kind) {
                found.push(ActionViolation { kind, t, u, x });
            }
        };

        for t in s.elements() {
            let m = &self.maps[t];
            let dom = m.domain();
            let cod = m.codomain();
            if !x_space.is_open(dom) {
                record(DomainNotOpen, Some(t), None, dom.ones().find(|&x| !x_space.minimal_neighbourhood(x).is_subset(dom)));
            }
            if !x_space.is_open(&cod) {
                record(CodomainNotOpen, Some(t), None, None);
            }
            if cod.count_ones(..) != dom.count_ones(..) {
                let x = dom.ones().find(|&x| dom.ones().any(|z| z < x && m.apply(z) == m.apply(x)));
                record(NotInjective, Some(t), None, x);
            } else if x_space.is_open(dom) {
                let bad = dom.ones().find(|&x| {
                    let pushed = set_of(x_space.len(), x_space.minimal_neighbourhood(x).ones().filter_map(|z| m.apply(z)));
                    pushed != *x_space.minimal_neighbourhood(m.apply(x).expect("x in domain"))
                });
                if bad.is_some() {
                    record(NotHomeomorphism, Some(t), None, bad);
                }
            }
        }

        let one = self.unit();
        if let Some(x) = (0..x_space.len()).find(|&x| self.apply(one, x) != Some(x)) {
            record(UnitNotIdentity, Some(one), None, Some(x));
        }
        if let (true, Some(z)) = (self.zero_preserving, s.zero()) {
            if let Some(x) = self.domain(z).ones().next() {
                record(ZeroNotEmpty, Some(z), None, Some(x));
            }
        }
        for t in s.elements() {
            let ti = s.inv(t);
            let bad = (0..x_space.len()).find(|&x| match self.apply(t, x) {
                Some(y) => self.apply(ti, y) != Some(x),
                None => self.codomain(ti).contains(x) != self.domain(t).contains(x),
            });
            if bad.is_some() || *self.domain(ti) != self.codomain(t) {
                record(InverseMismatch, Some(t), None, bad);
            }
        }
        for t in s.elements() {
            for u in s.elements() {
                let tu = s.mul(t, u);
                for x in 0..x_space.len() {
                    let composite = self.apply(u, x).and_then(|y| self.apply(t, y));
                    let direct = self.apply(tu, x);
                    if composite.is_some() != direct.is_some() {
                        record(CompositionDomain, Some(t), Some(u), Some(x));
                    } else if composite != direct {
                        record(CompositionValue, Some(t), Some(u), Some(x));
                    }
                }
            }
        }
        ActionReport {
            valid: found.is_empty(),
            violations: found,
        }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate().violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::precondition(format!("invalid action: {v:?}"))),
        }
    }
}

/// The action of `S` on the spectrum of `E(S)` by `c_t(φ)(e) = φ(t* e t)`.
pub fn universal_action(s: &InverseSemigroup) -> Result<SpaceAction> {
    universal_action_with(s, SpectrumTopology::Spectral)
}

/// As [`universal_action`], on either the spectral or the (discrete) patch topology.
pub fn universal_action_with(s: &InverseSemigroup, topology: SpectrumTopology) -> Result<SpaceAction> {
    let lattice = Semilattice::of_idempotents(s)?;
    let spectrum = semilattice_spectrum(&lattice)?;
    let space = spectrum.space_with(topology)?;
    let k = lattice.len();
    let local = |e: Elem| lattice.local(e).expect("argument is idempotent");
    let mut maps = Vec::with_capacity(s.size());
    for t in s.elements() {
        let ti = s.inv(t);
        let src = local(s.source(t));
        let mut pairs = Vec::new();
        for phi in 0..spectrum.len() {
            if !spectrum.value(phi, src) {
                continue;
            }
            let values = set_of(
                k,
                (0..k).filter(|&e| spectrum.value(phi, local(s.product(&[ti, lattice.carrier(e), t]).expect("nonempty word")))),
            );
            let image = spectrum
                .find_character(&values)
                .ok_or_else(|| Error::internal(format!("c_{t} does not land in the spectrum")))?;
            pairs.push((phi, image));
        }
        maps.push(PartialMap::new(space.len(), &pairs)?);
    }
    let action = SpaceAction::new(s.clone(), space, maps, true)?;
    if let Some(v) = action.validate().violations.first() {
        return Err(Error::internal(format!("universal action fails {v:?}")));
    }
    Ok(action)
}

/// `x ↦ φ_x` with `φ_x(e) = [x ∈ D_e]`, the canonical map to the spectrum.
pub fn canonical_map_to_spectrum(action: &SpaceAction) -> Result<Vec<usize>> {
    if !action.is_zero_preserving() {
        return Err(Error::precondition("the canonical map needs a zero-preserving action"));
    }
    let s = action.semigroup();
    let lattice = Semilattice::of_idempotents(s)?;
    let spectrum = semilattice_spectrum(&lattice)?;
    let k = lattice.len();
    (0..action.space().len())
        .map(|x| {
            let values = set_of(k, (0..k).filter(|&e| action.domain(lattice.carrier(e)).contains(x)));
            spectrum
                .find_character(&values)
                .ok_or_else(|| Error::internal(format!("point {x} does not define a character")))
        })
        .collect()
}

/// The germ `[t, x]`, stored by its least representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Germ {
    pub element: Elem,
    pub point: usize,
}

/// The groupoid of germs of an action, with its arrow-space topology.
#[derive(Debug, Clone)]
pub struct GermGroupoid {
    action: SpaceAction,
    arrows: Vec<Germ>,
    /// Every element representing each arrow.
    classes: Vec<Vec<Elem>>,
    /// `(t, x) ↦ [t, x]`, indexed `t * points + x`.
    lookup: Vec<Option<usize>>,
    source: Vec<usize>,
    range: Vec<usize>,
    unit_arrow: Vec<usize>,
    units: PointSet,
    compose: Vec<Option<usize>>,
    inverse: Vec<usize>,
    bisections: Vec<PointSet>,
    space: FiniteSpace,
}

/// Builds the groupoid of germs of a valid action and checks the groupoid
/// laws and the bisection topology exhaustively.
pub fn germ_groupoid(action: &SpaceAction) -> Result<GermGroupoid> {
    action.ensure_valid()?;
    let s = action.semigroup();
    let n_points = action.space().len();

    let mut arrows = Vec::new();
    let mut classes = Vec::new();
    let mut lookup = vec![None; s.size() * n_points];
    for x in 0..n_points {
        let defined: Vec<Elem> = s.elements().filter(|&t| action.domain(t).contains(x)).collect();
        let mut parent: Vec<usize> = (0..defined.len()).collect();
        fn root(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for i in 0..defined.len() {
            for j in i + 1..defined.len() {
                let same = s
                    .lower_bounds(defined[i], defined[j])
                    .iter()
                    .any(|&v| action.domain(v).contains(x));
                if same {
                    let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut grouped: Vec<Vec<Elem>> = Vec::new();
        let mut roots: Vec<usize> = Vec::new();
        for i in 0..defined.len() {
            let r = root(&mut parent, i);
            match roots.iter().position(|&q| q == r) {
                Some(p) => grouped[p].push(defined[i]),
                None => {
                    roots.push(r);
                    grouped.push(vec![defined[i]]);
                }
            }
        }
        for class in grouped {
            let id = arrows.len();
            for &t in &class {
                lookup[t * n_points + x] = Some(id);
            }
            arrows.push(Germ { element: class[0], point: x });
            classes.push(class);
        }
    }

    let n = arrows.len();
    let at = |t: Elem, x: usize| lookup[t * n_points + x];
    let source: Vec<usize> = arrows.iter().map(|g| g.point).collect();
    let range: Vec<usize> = arrows
        .iter()
        .map(|g| action.apply(g.element, g.point).expect("germ point lies in the domain"))
        .collect();
    let one = s.unit().expect("actions carry a unit");
    let unit_arrow: Vec<usize> = (0..n_points).map(|x| at(one, x).expect("unit acts everywhere")).collect();
    let units = set_of(n, unit_arrow.iter().copied());
    let inverse: Vec<usize> = arrows
        .iter()
        .zip(&range)
        .map(|(g, &y)| at(s.inv(g.element), y).expect("inverse germ exists"))
        .collect();
    let mut compose = vec![None; n * n];
    for a in 0..n {
        for b in 0..n {
            if source[a] == range[b] {
                let tu = s.mul(arrows[a].element, arrows[b].element);
                compose[a * n + b] = Some(at(tu, source[b]).expect("composite germ exists"));
            }
        }
    }
    let bisections: Vec<PointSet> = s
        .elements()
        .map(|t| set_of(n, action.domain(t).ones().map(|x| at(t, x).expect("germ exists"))))
        .collect();
    let mut lifts = Vec::new();
    for t in s.elements() {
        for x in action.domain(t).ones() {
            let nb = action.space().minimal_neighbourhood(x);
            lifts.push(set_of(n, nb.ones().map(|y| at(t, y).expect("domain is open"))));
        }
    }
    let labels = arrows
        .iter()
        .map(|g| format!("[{},{}]", s.label(g.element), action.space().label(g.point)))
        .collect();
    let space = FiniteSpace::from_subbasis(labels, &lifts)?;

    let g = GermGroupoid {
        action: action.clone(),
        arrows,
        classes,
        lookup,
        source,
        range,
        unit_arrow,
        units,
        compose,
        inverse,
        bisections,
        space,
    };
    g.verify()?;
    Ok(g)
}

impl GermGroupoid {
    pub fn action(&self) -> &SpaceAction {
        &self.action
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn arrows(&self) -> &[Germ] {
        &self.arrows
    }

    pub fn class(&self, arrow: usize) -> &[Elem] {
        &self.classes[arrow]
    }

    /// The arrow `[t, x]`, if `x ∈ D_{t*}`.
    pub fn germ(&self, t: Elem, x: usize) -> Option<usize> {
        self.lookup[t * self.action.space().len() + x]
    }

    pub fn source(&self, a: usize) -> usize {
        self.source[a]
    }

    pub fn range(&self, a: usize) -> usize {
        self.range[a]
    }

    /// `a · b`, defined when `s(a) = r(b)`.
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        self.compose[a * self.len() + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn unit_at(&self, x: usize) -> usize {
        self.unit_arrow[x]
    }

    pub fn units(&self) -> &PointSet {
        &self.units
    }

    /// The bisection `U_t = {[t, x]}`.
    pub fn bisection(&self, t: Elem) -> &PointSet {
        &self.bisections[t]
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn label(&self, a: usize) -> &str {
        self.space.label(a)
    }

    fn verify(&self) -> Result<()> {
        let s = self.action.semigroup();
        let n = self.len();
        let fail = |what: String| Err(Error::internal(format!("germ groupoid: {what}")));
        for a in 0..n {
            for b in 0..n {
                let Some(ab) = self.compose(a, b) else { continue };
                for &t in &self.classes[a] {
                    for &u in &self.classes[b] {
                        if self.germ(s.mul(t, u), self.source[b]) != Some(ab) {
                            return fail(format!("product of {a} and {b} depends on representatives"));
                        }
                    }
                }
                if self.source[ab] != self.source[b] || self.range[ab] != self.range[a] {
                    return fail(format!("source/range of {a}·{b}"));
                }
                for c in 0..n {
                    if let (Some(bc), true) = (self.compose(b, c), self.source[b] == self.range[c]) {
                        if self.compose(ab, c) != self.compose(a, bc) {
                            return fail(format!("associativity at ({a},{b},{c})"));
                        }
                    }
                }
            }
            let (r, d) = (self.unit_arrow[self.range[a]], self.unit_arrow[self.source[a]]);
            if self.compose(r, a) != Some(a) || self.compose(a, d) != Some(a) {
                return fail(format!("unit law at {a}"));
            }
            let ai = self.inverse[a];
            if self.compose(a, ai) != Some(r) || self.compose(ai, a) != Some(d) {
                return fail(format!("inverse law at {a}"));
            }
        }
        let x_space = self.action.space();
        for t in s.elements() {
            let u_t = &self.bisections[t];
            if !self.space.is_open(u_t) {
                return fail(format!("bisection {t} is not open"));
            }
            for x in self.action.domain(t).ones() {
                let g = self.germ(t, x).expect("germ exists");
                let nb = self.space.minimal_neighbourhood(g);
                let projected = set_of(
                    x_space.len(),
                    self.action.domain(t).ones().filter(|&y| nb.contains(self.germ(t, y).expect("germ exists"))),
                );
                if !nb.is_subset(u_t) || projected != *x_space.minimal_neighbourhood(x) {
                    return fail(format!("bisection {t} is not homeomorphic to its domain at {x}"));
                }
            }
        }
        Ok(())
    }
}

/// One row of the closed-units criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct D1tRow {
    pub element: String,
    pub d1t: Vec<String>,
    pub codomain: Vec<String>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct D1tReport {
    pub holds: bool,
    pub rows: Vec<D1tRow>,
}

/// For each `t`, whether `D_{1,t} = ∪_{e ≤ 1,t} D_e` is relatively closed in `D_t`.
pub fn criterion_d1t_closed(action: &SpaceAction) -> Result<D1tReport> {
    action.ensure_valid()?;
    let s = action.semigroup();
    let x = action.space();
    let one = action.unit();
    let names = |set: &PointSet| members(set).into_iter().map(|p| x.label(p).to_string()).collect();
    let mut rows = Vec::with_capacity(s.size());
    for t in s.elements() {
        let mut d1t = x.empty_set();
        for e in s.lower_bounds(one, t) {
            d1t.union_with(action.domain(e));
        }
        let cod = action.codomain(t);
        let closed = x.is_closed_in(&d1t, &cod)?;
        rows.push(D1tRow {
            element: s.label(t).to_string(),
            d1t: names(&d1t),
            codomain: names(&cod),
            closed,
        });
    }
    Ok(D1tReport {
        holds: rows.iter().all(|r| r.closed),
        rows,
    })
}

/// Whether the unit space is closed in the arrow space; cross-checked
/// against [`criterion_d1t_closed`].
pub fn units_closed(g: &GermGroupoid) -> Result<bool> {
    let direct = g.space().is_closed(g.units());
    let criterion = criterion_d1t_closed(g.action())?.holds;
    if direct != criterion {
        return Err(Error::internal(format!(
            "closed units: arrow-space test gives {direct}, bisection criterion gives {criterion}"
        )));
    }
    Ok(direct)
}

/// Separation of arrows, cross-checked against "units closed and base Hausdorff".
pub fn groupoid_is_hausdorff(g: &GermGroupoid) -> Result<bool> {
    let direct = g.space().is_hausdorff()?;
    let via_units = units_closed(g)? && g.action().space().is_hausdorff()?;
    if direct != via_units {
        return Err(Error::internal(format!(
            "Hausdorff arrow space {direct} but closed units with Hausdorff base {via_units}"
        )));
    }
    Ok(direct)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InheritanceReport {
    pub x_units_closed: bool,
    pub y_units_closed: bool,
    pub implication_holds: bool,
}

/// For a continuous equivariant `f: X → Y`, closed units in `Y ⋊ S` must
/// force closed units in `X ⋊ S`.
pub fn check_equivariant_inheritance(f: &[usize], act_x: &SpaceAction, act_y: &SpaceAction) -> Result<InheritanceReport> {
    let s = act_x.semigroup();
    if s.table() != act_y.semigroup().table() {
        return Err(Error::precondition("both actions must be of the same semigroup"));
    }
    if !act_x.space().is_continuous(f, act_y.space()) {
        return Err(Error::precondition("the map is not continuous"));
    }
    for t in s.elements() {
        let pulled = set_of(f.len(), (0..f.len()).filter(|&x| act_y.domain(t).contains(f[x])));
        if pulled != *act_x.domain(t) {
            return Err(Error::precondition(format!("domains of {} do not correspond", s.label(t))));
        }
        for x in act_x.domain(t).ones() {
            let lhs = act_x.apply(t, x).map(|y| f[y]);
            if lhs != act_y.apply(t, f[x]) {
                return Err(Error::precondition(format!("map is not equivariant at ({}, {x})", s.label(t))));
            }
        }
    }
    let x_closed = units_closed(&germ_groupoid(act_x)?)?;
    let y_closed = units_closed(&germ_groupoid(act_y)?)?;
    if y_closed && !x_closed {
        return Err(Error::internal("closed units failed to pass to an equivariant preimage"));
    }
    Ok(InheritanceReport {
        x_units_closed: x_closed,
        y_units_closed: y_closed,
        implication_holds: true,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub e_star_unitary: bool,
    pub order_condition: bool,
    pub universal_units_closed: bool,
    pub witness: Option<(String, String)>,
    pub corpus_units_closed: Vec<bool>,
    /// First action whose units are not closed: `"universal"` or `"corpus[i]"`.
    pub non_closed_example: Option<String>,
    pub consistent: bool,
}

/// Evaluates the E*-unitarity equivalences on `s` and on a corpus of
/// zero-preserving actions of `s`.
pub fn e_unitary_cross_check(s: &InverseSemigroup, corpus: &[SpaceAction]) -> Result<CrossCheckReport> {
    if s.unit().is_none() || s.zero().is_none() {
        return Err(Error::precondition("the cross-check needs a unit and a zero"));
    }
    for (i, a) in corpus.iter().enumerate() {
        if !a.is_zero_preserving() {
            return Err(Error::precondition(format!("corpus action {i} is not flagged zero-preserving")));
        }
        if a.semigroup().table() != s.table() {
            return Err(Error::precondition(format!("corpus action {i} is of a different semigroup")));
        }
    }
    let star = s.is_e_star_unitary()?;
    let order = s.order_condition()?;
    let universal = units_closed(&germ_groupoid(&universal_action(s)?)?)?;
    let corpus_closed = corpus
        .iter()
        .map(|a| units_closed(&germ_groupoid(a)?))
        .collect::<Result<Vec<bool>>>()?;
    let non_closed_example = if !universal {
        Some("universal".to_string())
    } else {
        corpus_closed.iter().position(|c| !c).map(|i| format!("corpus[{i}]"))
    };
    let consistent = star.holds == order.holds
        && order.holds == universal
        && (!universal || corpus_closed.iter().all(|&c| c));
    Ok(CrossCheckReport {
        e_star_unitary: star.holds,
        order_condition: order.holds,
        universal_units_closed: universal,
        witness: star.witness.map(|(e, t)| (s.label(e).to_string(), s.label(t).to_string())),
        corpus_units_closed: corpus_closed,
        non_closed_example,
        consistent,
    })
}
