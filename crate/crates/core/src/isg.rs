//! Finite inverse semigroups presented by Cayley tables.
//!
//! Elements are dense indices `0..size`. The index order doubles as the fixed
//! total order on `S` used by normal forms elsewhere in the crate.

use std::collections::{HashMap, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};

/// Index of an element of an [`InverseSemigroup`].
pub type Elem = usize;

/// Default ceiling on the size of a closure of partial bijections.
pub const DEFAULT_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Associativity,
    InverseLaw,
    InverseUniqueness,
    InverseOfProduct,
    InverseInvolutive,
    IdempotentsCommute,
    UnitLaw,
    ZeroLaw,
}

/// One failed axiom together with the lexicographically first witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<Elem>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Outcome of a predicate that quantifies over pairs `(e, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<(Elem, Elem)>,
}

impl Verdict {
    fn from_witness(witness: Option<(Elem, Elem)>) -> Self {
        Verdict {
            holds: witness.is_none(),
            witness,
        }
    }
}

/// Checks every inverse-semigroup axiom and reports each failure once.
///
/// Out-of-range entries are a structural error, not an axiom failure.
pub fn validate(
    mul: &[Vec<Elem>],
    inv: &[Elem],
    unit: Option<Elem>,
    zero: Option<Elem>,
) -> Result<ValidationReport> {
    let n = mul.len();
    check_shape(mul, inv, unit, zero)?;
    let m = |a: Elem, b: Elem| mul[a][b];
    let mut violations = Vec::new();
    let mut push = |axiom, witness: Option<Vec<Elem>>| {
        if let Some(witness) = witness {
            violations.push(Violation { axiom, witness });
        }
    };

    push(
        Axiom::Associativity,
        triples(n).find(|&(a, b, c)| m(m(a, b), c) != m(a, m(b, c))).map(|(a, b, c)| vec![a, b, c]),
    );
    push(
        Axiom::InverseLaw,
        (0..n)
            .find(|&t| m(m(t, inv[t]), t) != t || m(m(inv[t], t), inv[t]) != inv[t])
            .map(|t| vec![t, inv[t]]),
    );
    push(
        Axiom::InverseUniqueness,
        pairs(n)
            .find(|&(t, u)| u != inv[t] && m(m(t, u), t) == t && m(m(u, t), u) == u)
            .map(|(t, u)| vec![t, u]),
    );
    push(
        Axiom::InverseOfProduct,
        pairs(n).find(|&(t, u)| inv[m(t, u)] != m(inv[u], inv[t])).map(|(t, u)| vec![t, u]),
    );
    push(Axiom::InverseInvolutive, (0..n).find(|&t| inv[inv[t]] != t).map(|t| vec![t]));
    let idem: Vec<Elem> = (0..n).filter(|&e| m(e, e) == e).collect();
    push(
        Axiom::IdempotentsCommute,
        idem.iter()
            .flat_map(|&e| idem.iter().map(move |&f| (e, f)))
            .find(|&(e, f)| m(e, f) != m(f, e))
            .map(|(e, f)| vec![e, f]),
    );
    if let Some(one) = unit {
        push(
            Axiom::UnitLaw,
            (0..n).find(|&t| m(one, t) != t || m(t, one) != t).map(|t| vec![one, t]),
        );
    }
    if let Some(z) = zero {
        push(
            Axiom::ZeroLaw,
            (0..n).find(|&t| m(z, t) != z || m(t, z) != z).map(|t| vec![z, t]),
        );
    }
    Ok(ValidationReport { violations })
}

fn check_shape(mul: &[Vec<Elem>], inv: &[Elem], unit: Option<Elem>, zero: Option<Elem>) -> Result<()> {
    let n = mul.len();
    if n == 0 {
        return Err(Error::structural("semigroup must have at least one element"));
    }
    if inv.len() != n {
        return Err(Error::structural(format!("inverse table has {} entries, expected {n}", inv.len())));
    }
    for (a, row) in mul.iter().enumerate() {
        if row.len() != n {
            return Err(Error::structural(format!("row {a} has {} entries, expected {n}", row.len())));
        }
        if let Some((b, &c)) = row.iter().enumerate().find(|(_, &c)| c >= n) {
            return Err(Error::structural(format!("product {a}*{b} = {c} is out of range")));
        }
    }
    if let Some((t, &i)) = inv.iter().enumerate().find(|(_, &i)| i >= n) {
        return Err(Error::structural(format!("inverse of {t} = {i} is out of range")));
    }
    for (name, idx) in [("unit", unit), ("zero", zero)] {
        if let Some(i) = idx.filter(|&i| i >= n) {
            return Err(Error::structural(format!("{name} index {i} is out of range")));
        }
    }
    Ok(())
}

fn pairs(n: usize) -> impl Iterator<Item = (Elem, Elem)> {
    (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
}

fn triples(n: usize) -> impl Iterator<Item = (Elem, Elem, Elem)> {
    pairs(n).flat_map(move |(a, b)| (0..n).map(move |c| (a, b, c)))
}

/// A validated finite inverse semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseSemigroup {
    size: usize,
    mul: Vec<Elem>,
    inv: Vec<Elem>,
    unit: Option<Elem>,
    zero: Option<Elem>,
    labels: Vec<String>,
    idempotent: FixedBitSet,
    /// Row `t` holds the set `{u : t ≤ u}`.
    above: Vec<FixedBitSet>,
}

impl InverseSemigroup {
    /// Builds and validates a semigroup; any failed axiom is a structural error.
    pub fn new(
        mul: Vec<Vec<Elem>>,
        inv: Vec<Elem>,
        unit: Option<Elem>,
        zero: Option<Elem>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let report = validate(&mul, &inv, unit, zero)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::structural(format!(
                "not an inverse semigroup: {:?} fails at {:?}",
                v.axiom, v.witness
            )));
        }
        Self::from_trusted(mul, inv, unit, zero, labels)
    }

    /// Skips the cubic axiom scan; used for tables that are valid by construction.
    fn from_trusted(
        mul: Vec<Vec<Elem>>,
        inv: Vec<Elem>,
        unit: Option<Elem>,
        zero: Option<Elem>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let size = mul.len();
        let labels = labels.unwrap_or_else(|| (0..size).map(|i| i.to_string()).collect());
        if labels.len() != size {
            return Err(Error::structural(format!("{} labels for {size} elements", labels.len())));
        }
        let distinct: HashSet<&String> = labels.iter().collect();
        if distinct.len() != size {
            return Err(Error::structural("element labels must be distinct"));
        }
        let flat: Vec<Elem> = mul.into_iter().flatten().collect();
        let mut idempotent = FixedBitSet::with_capacity(size);
        for e in 0..size {
            if flat[e * size + e] == e {
                idempotent.insert(e);
            }
        }
        let mut s = InverseSemigroup {
            size,
            mul: flat,
            inv,
            unit,
            zero,
            labels,
            idempotent,
            above: Vec::new(),
        };
        s.above = s.natural_order()?;
        Ok(s)
    }

    /// Computes `t ≤ u` both as `t = u t* t` and as `t = u e` for some
    /// idempotent `e`; the two must agree.
    fn natural_order(&self) -> Result<Vec<FixedBitSet>> {
        let idem: Vec<Elem> = self.idempotents();
        let mut above = vec![FixedBitSet::with_capacity(self.size); self.size];
        for t in 0..self.size {
            let tt = self.mul(self.inv(t), t);
            for u in 0..self.size {
                let by_projection = self.mul(u, tt) == t;
                let by_idempotent = idem.iter().any(|&e| self.mul(u, e) == t);
                if by_projection != by_idempotent {
                    return Err(Error::internal(format!(
                        "natural order characterisations disagree on ({t}, {u})"
                    )));
                }
                if by_projection {
                    above[t].insert(u);
                }
            }
        }
        Ok(above)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.size + b]
    }

    /// Product of a word, left to right.
    pub fn product(&self, word: &[Elem]) -> Option<Elem> {
        word.iter().copied().reduce(|acc, x| self.mul(acc, x))
    }

    #[inline]
    pub fn inv(&self, t: Elem) -> Elem {
        self.inv[t]
    }

    pub fn unit(&self) -> Option<Elem> {
        self.unit
    }

    pub fn zero(&self) -> Option<Elem> {
        self.zero
    }

    pub fn label(&self, t: Elem) -> &str {
        &self.labels[t]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Resolves an element by label, falling back to a decimal index.
    pub fn find(&self, key: &str) -> Option<Elem> {
        self.labels
            .iter()
            .position(|l| l == key)
            .or_else(|| key.parse::<usize>().ok().filter(|&i| i < self.size))
    }

    pub fn table(&self) -> Vec<Vec<Elem>> {
        self.mul.chunks(self.size).map(<[Elem]>::to_vec).collect()
    }

    pub fn inverse_table(&self) -> &[Elem] {
        &self.inv
    }

    pub fn is_idempotent(&self, e: Elem) -> bool {
        self.idempotent.contains(e)
    }

    pub fn idempotents(&self) -> Vec<Elem> {
        self.idempotent.ones().collect()
    }

    /// Source projection `t* t`.
    pub fn source(&self, t: Elem) -> Elem {
        self.mul(self.inv(t), t)
    }

    /// Range projection `t t*`.
    pub fn range(&self, t: Elem) -> Elem {
        self.mul(t, self.inv(t))
    }

    /// Natural partial order `t ≤ u`.
    pub fn leq(&self, t: Elem, u: Elem) -> bool {
        self.above[t].contains(u)
    }

    /// The meet set `{v : v ≤ t and v ≤ u}` in index order.
    pub fn lower_bounds(&self, t: Elem, u: Elem) -> Vec<Elem> {
        (0..self.size).filter(|&v| self.leq(v, t) && self.leq(v, u)).collect()
    }

    /// `S ⊔ {1}` with a fresh unit appended at the end.
    pub fn adjoin_unit(&self) -> InverseSemigroup {
        let one = self.size;
        let label = fresh_label(&self.labels, "1+");
        self.extend(label, |a, b| match (a == one, b == one) {
            (true, _) => b,
            (_, true) => a,
            _ => self.mul(a, b),
        }, Some(one), self.zero)
    }

    /// `S ⊔ {0}` with a fresh zero appended at the end.
    pub fn adjoin_zero(&self) -> InverseSemigroup {
        let z = self.size;
        let label = fresh_label(&self.labels, "0");
        self.extend(label, |a, b| if a == z || b == z { z } else { self.mul(a, b) }, self.unit, Some(z))
    }

    fn extend(
        &self,
        label: String,
        op: impl Fn(Elem, Elem) -> Elem,
        unit: Option<Elem>,
        zero: Option<Elem>,
    ) -> InverseSemigroup {
        let n = self.size + 1;
        let mul = (0..n).map(|a| (0..n).map(|b| op(a, b)).collect()).collect();
        let mut inv = self.inv.clone();
        inv.push(self.size);
        let mut labels = self.labels.clone();
        labels.push(label);
        Self::from_trusted(mul, inv, unit, zero, Some(labels))
            .expect("adjoining a unit or zero preserves the axioms")
    }

    /// Returns `self` if it has a unit, otherwise `self` with one adjoined.
    pub fn with_unit(&self) -> InverseSemigroup {
        match self.unit {
            Some(_) => self.clone(),
            None => self.adjoin_unit(),
        }
    }

    /// E*-unitarity: every nonzero idempotent below `t` forces `t` idempotent.
    ///
    /// The order-theoretic reformulation (`e ≤ 1, t` forces `e = 0` or
    /// `t ≤ 1`) is evaluated as well and must agree.
    pub fn is_e_star_unitary(&self) -> Result<Verdict> {
        let zero = self.require_zero()?;
        let witness = pairs(self.size).find(|&(e, t)| {
            e != zero && self.is_idempotent(e) && self.leq(e, t) && !self.is_idempotent(t)
        });
        let direct = Verdict::from_witness(witness);
        let via_order = self.order_condition()?;
        if direct.holds != via_order.holds {
            return Err(Error::internal(format!(
                "E*-unitarity characterisations disagree: idempotent form {} vs order form {}",
                direct.holds, via_order.holds
            )));
        }
        Ok(direct)
    }

    /// The condition "`e ≤ 1` and `e ≤ t` imply `e = 0` or `t ≤ 1`", read in
    /// `S` with a unit adjoined when necessary.
    pub fn order_condition(&self) -> Result<Verdict> {
        let zero = self.require_zero()?;
        let s = self.with_unit();
        let one = s.unit.expect("with_unit supplies a unit");
        let witness = pairs(self.size).find(|&(e, t)| {
            e != zero && s.leq(e, one) && s.leq(e, t) && !s.leq(t, one)
        });
        Ok(Verdict::from_witness(witness))
    }

    /// E-unitarity: every idempotent below `t` forces `t` idempotent.
    pub fn is_e_unitary(&self) -> Verdict {
        let witness = pairs(self.size)
            .find(|&(e, t)| self.is_idempotent(e) && self.leq(e, t) && !self.is_idempotent(t));
        Verdict::from_witness(witness)
    }

    fn require_zero(&self) -> Result<Elem> {
        self.zero
            .ok_or_else(|| Error::precondition("E*-unitarity needs a semigroup with zero"))
    }

    /// Closure of a set of partial bijections of `{0..points}`.
    ///
    /// Elements are ordered with the unit (if any) first, then by increasing
    /// domain size, then lexicographically by image vector with undefined
    /// points sorting last. An empty generator set yields `{empty map}`.
    pub fn from_partial_bijections(
        points: usize,
        generators: &[PartialBijection],
        cap: usize,
    ) -> Result<(InverseSemigroup, Vec<PartialBijection>)> {
        if let Some(g) = generators.iter().find(|g| g.points() != points) {
            return Err(Error::structural(format!(
                "generator {} acts on {} points, expected {points}",
                g.label(),
                g.points()
            )));
        }
        let mut seeds: Vec<PartialBijection> = generators.to_vec();
        seeds.extend(generators.iter().map(PartialBijection::inverse));
        if seeds.is_empty() {
            seeds.push(PartialBijection::empty(points));
        }
        let mut seen: HashSet<PartialBijection> = HashSet::new();
        let mut elems: Vec<PartialBijection> = Vec::new();
        for g in &seeds {
            if seen.insert(g.clone()) {
                elems.push(g.clone());
            }
        }
        let mut next = 0;
        while next < elems.len() {
            if elems.len() > cap {
                return Err(Error::CapExceeded { cap });
            }
            let x = elems[next].clone();
            for g in &seeds {
                let y = x.compose(g);
                if seen.insert(y.clone()) {
                    elems.push(y);
                }
            }
            next += 1;
        }
        if elems.len() > cap {
            return Err(Error::CapExceeded { cap });
        }

        let support: Vec<usize> = (0..points).filter(|&p| elems.iter().any(|e| e.apply(p).is_some())).collect();
        let identity = PartialBijection::partial_identity(points, &support);
        elems.sort_by_key(|e| (*e != identity, e.sort_key()));

        let index: HashMap<&PartialBijection, Elem> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mul: Vec<Vec<Elem>> = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&a.compose(b)]).collect())
            .collect();
        let inv: Vec<Elem> = elems.iter().map(|a| index[&a.inverse()]).collect();
        let unit = index.get(&identity).copied();
        let n = elems.len();
        let zero = (0..n).find(|&z| (0..n).all(|t| mul[z][t] == z && mul[t][z] == z));
        let labels = elems.iter().map(PartialBijection::label).collect();
        let s = Self::from_trusted(mul, inv, unit, zero, Some(labels))?;
        Ok((s, elems))
    }

    /// The symmetric inverse monoid `I_n` of all partial bijections of `n` points.
    pub fn symmetric_inverse_monoid(n: usize) -> Result<(InverseSemigroup, Vec<PartialBijection>)> {
        Self::from_partial_bijections(n, &PartialBijection::all(n), DEFAULT_CAP)
    }
}

fn fresh_label(existing: &[String], base: &str) -> String {
    let mut label = base.to_string();
    while existing.contains(&label) {
        label.push('\'');
    }
    label
}

/// Searches for a multiplication-preserving bijection `a → b`.
pub fn isomorphism(a: &InverseSemigroup, b: &InverseSemigroup) -> Option<Vec<Elem>> {
    if a.size() != b.size() || a.idempotents().len() != b.idempotents().len() {
        return None;
    }
    let n = a.size();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        a: &InverseSemigroup,
        b: &InverseSemigroup,
        k: usize,
        map: &mut Vec<Elem>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = a.size();
        if k == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] || a.is_idempotent(k) != b.is_idempotent(cand) {
                continue;
            }
            map[k] = cand;
            let consistent = (0..=k).all(|i| {
                [(i, k), (k, i)].iter().all(|&(x, y)| {
                    let p = a.mul(x, y);
                    p > k || map[p] == b.mul(map[x], map[y])
                })
            });
            if consistent {
                used[cand] = true;
                if extend(a, b, k + 1, map, used) {
                    return true;
                }
                used[cand] = false;
            }
        }
        map[k] = usize::MAX;
        false
    }
    if !extend(a, b, 0, &mut map, &mut used) {
        return None;
    }
    // Products landing on later indices were deferred; confirm them all.
    pairs(n)
        .all(|(x, y)| map[a.mul(x, y)] == b.mul(map[x], map[y]))
        .then_some(map)
}

/// An injective partial map on `{0..points}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialBijection {
    images: Vec<Option<usize>>,
}

impl PartialBijection {
    /// Builds a map from `(source, target)` pairs, rejecting non-injective data.
    pub fn new(points: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut images = vec![None; points];
        let mut hit = vec![false; points];
        for &(s, t) in pairs {
            if s >= points || t >= points {
                return Err(Error::structural(format!("pair {s}->{t} leaves the {points} points")));
            }
            if images[s].is_some() {
                return Err(Error::structural(format!("point {s} is mapped twice")));
            }
            if std::mem::replace(&mut hit[t], true) {
                return Err(Error::structural(format!("map is not injective at image {t}")));
            }
            images[s] = Some(t);
        }
        Ok(PartialBijection { images })
    }

    pub fn empty(points: usize) -> Self {
        PartialBijection { images: vec![None; points] }
    }

    pub fn identity(points: usize) -> Self {
        PartialBijection { images: (0..points).map(Some).collect() }
    }

    pub fn partial_identity(points: usize, domain: &[usize]) -> Self {
        let mut images = vec![None; points];
        for &p in domain {
            images[p] = Some(p);
        }
        PartialBijection { images }
    }

    /// Every partial bijection on `points` points.
    pub fn all(points: usize) -> Vec<PartialBijection> {
        let mut out = vec![PartialBijection::empty(points)];
        for p in 0..points {
            let mut grown = Vec::new();
            for f in &out {
                grown.push(f.clone());
                for q in 0..points {
                    if !f.images.contains(&Some(q)) {
                        let mut g = f.clone();
                        g.images[p] = Some(q);
                        grown.push(g);
                    }
                }
            }
            out = grown;
        }
        out
    }

    pub fn points(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, p: usize) -> Option<usize> {
        self.images.get(p).copied().flatten()
    }

    pub fn domain(&self) -> Vec<usize> {
        (0..self.points()).filter(|&p| self.images[p].is_some()).collect()
    }

    pub fn rank(&self) -> usize {
        self.images.iter().flatten().count()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &PartialBijection) -> PartialBijection {
        PartialBijection {
            images: other.images.iter().map(|&x| x.and_then(|y| self.apply(y))).collect(),
        }
    }

    pub fn inverse(&self) -> PartialBijection {
        let mut images = vec![None; self.points()];
        for (p, q) in self.images.iter().enumerate() {
            if let Some(q) = q {
                images[*q] = Some(p);
            }
        }
        PartialBijection { images }
    }

    /// `self` is a restriction of `other`.
    pub fn is_restriction_of(&self, other: &PartialBijection) -> bool {
        self.images
            .iter()
            .zip(&other.images)
            .all(|(a, b)| a.is_none() || a == b)
    }

    fn sort_key(&self) -> (usize, Vec<usize>) {
        let n = self.points();
        (self.rank(), self.images.iter().map(|x| x.unwrap_or(n)).collect())
    }

    /// One-based label such as `{1:1,2:3}`.
    pub fn label(&self) -> String {
        let body: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .filter_map(|(p, q)| q.map(|q| format!("{}:{}", p + 1, q + 1)))
            .collect();
        format!("{{{}}}", body.join(","))
    }
}

impl fmt::Display for PartialBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z2() -> InverseSemigroup {
        InverseSemigroup::new(vec![vec![0, 1], vec![1, 0]], vec![0, 1], Some(0), None, None).unwrap()
    }

    /// Indices: 0 = "1", 1 = "-1", 2 = "0".
    fn zero_one_minus_one() -> InverseSemigroup {
        InverseSemigroup::new(
            vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 2]],
            vec![0, 1, 2],
            Some(0),
            Some(2),
            Some(vec!["1".into(), "-1".into(), "0".into()]),
        )
        .unwrap()
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn factorial(k: usize) -> usize {
        (1..=k).product()
    }

    #[test]
    fn groups_and_zero_extension_are_valid() {
        let z2 = z2();
        assert!(validate(&z2.table(), z2.inverse_table(), Some(0), None).unwrap().is_valid());
        let s = zero_one_minus_one();
        assert!(validate(&s.table(), s.inverse_table(), Some(0), Some(2)).unwrap().is_valid());
    }

    #[test]
    fn left_zero_semigroup_has_noncommuting_idempotents() {
        let report = validate(&[vec![0, 0], vec![1, 1]], &[0, 1], None, None).unwrap();
        let axioms: Vec<Axiom> = report.violations.iter().map(|v| v.axiom).collect();
        assert!(axioms.contains(&Axiom::IdempotentsCommute));
        let w = report
            .violations
            .iter()
            .find(|v| v.axiom == Axiom::IdempotentsCommute)
            .unwrap();
        assert_eq!(w.witness, vec![0, 1]);
    }

    #[test]
    fn out_of_range_entries_are_structural() {
        let err = validate(&[vec![0, 2], vec![1, 0]], &[0, 1], None, None).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
        let err = validate(&[vec![0]], &[0], Some(3), None).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
    }

    #[test]
    fn idempotent_sets() {
        assert_eq!(zero_one_minus_one().idempotents(), vec![0, 2]);
        assert_eq!(z2().idempotents(), vec![0]);
        let (i2, maps) = InverseSemigroup::symmetric_inverse_monoid(2).unwrap();
        let idem = i2.idempotents();
        assert_eq!(idem.len(), 4);
        for e in idem {
            let m = &maps[e];
            assert!(m.domain().iter().all(|&p| m.apply(p) == Some(p)));
        }
    }

    #[test]
    fn order_examples() {
        let s = zero_one_minus_one();
        assert!(s.leq(2, 0));
        assert!(!s.leq(0, 1));
        for t in s.elements() {
            assert!(s.leq(t, t));
        }
        assert_eq!(s.lower_bounds(0, 1), vec![2]);
    }

    #[test]
    fn swap_and_identity_meet_only_in_the_empty_map() {
        let (i3, maps) = InverseSemigroup::symmetric_inverse_monoid(3).unwrap();
        let swap = PartialBijection::new(3, &[(0, 1), (1, 0)]).unwrap();
        let swap = maps.iter().position(|m| *m == swap).unwrap();
        let id = i3.unit().unwrap();
        let bounds = i3.lower_bounds(swap, id);
        assert_eq!(bounds.len(), 1);
        assert_eq!(maps[bounds[0]].rank(), 0);
    }

    #[test]
    fn closure_sizes_match_counting_formula() {
        for n in 0..=3 {
            let expected: usize = (0..=n).map(|k| binomial(n, k).pow(2) * factorial(k)).sum();
            let (s, _) = InverseSemigroup::symmetric_inverse_monoid(n).unwrap();
            assert_eq!(s.size(), expected, "I_{n}");
        }
        let (s, _) = InverseSemigroup::symmetric_inverse_monoid(2).unwrap();
        assert_eq!(s.size(), 7);
        let (s, _) = InverseSemigroup::symmetric_inverse_monoid(3).unwrap();
        assert_eq!(s.size(), 34);
    }

    #[test]
    fn closures_are_valid_and_ordered_unit_first() {
        let (s, maps) = InverseSemigroup::symmetric_inverse_monoid(3).unwrap();
        assert!(validate(&s.table(), s.inverse_table(), s.unit(), s.zero()).unwrap().is_valid());
        assert_eq!(s.unit(), Some(0));
        assert_eq!(maps[0], PartialBijection::identity(3));
        assert_eq!(maps[s.zero().unwrap()].rank(), 0);
    }

    #[test]
    fn empty_generating_set_gives_the_empty_map() {
        let (s, maps) = InverseSemigroup::from_partial_bijections(2, &[], DEFAULT_CAP).unwrap();
        assert_eq!(s.size(), 1);
        assert_eq!(maps[0], PartialBijection::empty(2));
    }

    #[test]
    fn closure_respects_the_cap() {
        let err = InverseSemigroup::from_partial_bijections(3, &PartialBijection::all(3), 10).unwrap_err();
        assert_eq!(err, Error::CapExceeded { cap: 10 });
    }

    #[test]
    fn adjoining_zero_to_z2_recovers_zero_one_minus_one() {
        let s = z2().adjoin_zero();
        assert_eq!(s.size(), 3);
        assert!(isomorphism(&s, &zero_one_minus_one()).is_some());
        assert!(isomorphism(&z2().adjoin_unit(), &zero_one_minus_one()).is_none());
    }

    #[test]
    fn adjoin_unit_above_existing_unit() {
        let s = zero_one_minus_one().adjoin_unit();
        assert_eq!(s.size(), 4);
        assert_eq!(s.idempotents().len(), 3);
        assert!(s.leq(0, 3));
        assert_ne!(s.unit(), Some(0));
        let t = z2().adjoin_zero().adjoin_unit();
        assert_eq!((t.size(), t.idempotents().len()), (4, 3));
    }

    #[test]
    fn e_star_unitarity_examples() {
        let v = zero_one_minus_one().is_e_star_unitary().unwrap();
        assert!(v.holds);
        // Z/3 with a zero adjoined.
        let z3 = InverseSemigroup::new(
            (0..3).map(|a| (0..3).map(|b| (a + b) % 3).collect()).collect(),
            vec![0, 2, 1],
            Some(0),
            None,
            None,
        )
        .unwrap();
        assert!(z3.adjoin_zero().is_e_star_unitary().unwrap().holds);
        assert!(z2().is_e_star_unitary().is_err());
    }

    /// Exhaustive scan over the maps themselves, independent of the table.
    fn first_e_star_witness_on_maps(maps: &[PartialBijection]) -> Option<(usize, usize)> {
        let idem = |m: &PartialBijection| m.compose(m) == *m;
        for (e, me) in maps.iter().enumerate() {
            for (t, mt) in maps.iter().enumerate() {
                if me.rank() > 0 && idem(me) && me.is_restriction_of(mt) && !idem(mt) {
                    return Some((e, t));
                }
            }
        }
        None
    }

    #[test]
    fn i3_fails_with_first_witness() {
        let (s, maps) = InverseSemigroup::symmetric_inverse_monoid(3).unwrap();
        let v = s.is_e_star_unitary().unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, first_e_star_witness_on_maps(&maps));
        let (e, t) = v.witness.unwrap();
        assert_eq!(maps[e], PartialBijection::partial_identity(3, &[0]));
        assert_eq!(maps[t], PartialBijection::new(3, &[(0, 0), (1, 2)]).unwrap());
        assert_eq!(s.label(t), "{1:1,2:3}");
    }

    fn arb_generators() -> impl Strategy<Value = (usize, Vec<PartialBijection>)> {
        (1usize..=3).prop_flat_map(|n| {
            let all = PartialBijection::all(n);
            let k = all.len();
            (Just(n), proptest::collection::vec(0..k, 0..4))
                .prop_map(move |(n, idx)| (n, idx.into_iter().map(|i| all[i].clone()).collect()))
        })
    }

    proptest! {
        #[test]
        fn generated_semigroups_satisfy_order_laws((n, gens) in arb_generators()) {
            let (s, maps) = InverseSemigroup::from_partial_bijections(n, &gens, DEFAULT_CAP).unwrap();
            prop_assert!(validate(&s.table(), s.inverse_table(), s.unit(), s.zero()).unwrap().is_valid());
            for t in s.elements() {
                for u in s.elements() {
                    // natural order on partial bijections is restriction
                    prop_assert_eq!(s.leq(t, u), maps[t].is_restriction_of(&maps[u]));
                    prop_assert_eq!(s.leq(t, u), s.lower_bounds(t, u).contains(&t));
                    prop_assert_eq!(s.lower_bounds(t, u), s.lower_bounds(u, t));
                    if s.leq(t, u) && s.leq(u, t) { prop_assert_eq!(t, u); }
                    for w in s.elements() {
                        if s.leq(t, u) && s.leq(u, w) { prop_assert!(s.leq(t, w)); }
                    }
                }
            }
        }

        #[test]
        fn e_unitary_iff_zero_extension_is_e_star_unitary((n, gens) in arb_generators()) {
            let (s, _) = InverseSemigroup::from_partial_bijections(n, &gens, DEFAULT_CAP).unwrap();
            let starred = s.adjoin_zero().is_e_star_unitary().unwrap();
            prop_assert_eq!(s.is_e_unitary().holds, starred.holds);
            if s.zero().is_some() {
                prop_assert_eq!(s.is_e_star_unitary().unwrap().holds, s.order_condition().unwrap().holds);
            }
        }
    }
}
