//! Strong semilattices of groups: validation, assembly into a Clifford
//! semigroup, decomposition back, direct products and the η-injectivity
//! proxy for inverse-limit preservation.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::semigroup::{
    bonding_maps, classify, pi_and_subgroups, validate_semigroup, AlgebraError, Element,
    FiniteSemigroup, IdempotentOrder,
};

/// A validated finite group: its table plus identity and inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    table: FiniteSemigroup,
    identity: Element,
    inverse: Vec<Element>,
}

impl GroupTable {
    pub fn new(table: FiniteSemigroup) -> Result<Self, AlgebraError> {
        let identity = table.group_identity().ok_or(AlgebraError::NotGroup)?;
        let inverse = table
            .elements()
            .map(|x| {
                table
                    .elements()
                    .find(|&y| table.mul(x, y) == identity)
                    .expect("group has inverses")
            })
            .collect();
        Ok(Self {
            table,
            identity,
            inverse,
        })
    }

    pub fn cyclic(n: usize) -> Self {
        let t = FiniteSemigroup::from_fn(n, |x, y| (x + y) % n).expect("cyclic group");
        Self::new(t).expect("cyclic group")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn mul(&self, x: Element, y: Element) -> Element {
        self.table.mul(x, y)
    }

    pub fn identity(&self) -> Element {
        self.identity
    }

    pub fn inverse(&self, x: Element) -> Element {
        self.inverse[x]
    }

    pub fn table(&self) -> &FiniteSemigroup {
        &self.table
    }

    pub fn label(&self, x: Element) -> &str {
        self.table.label(x)
    }

    pub fn element_by_label(&self, label: &str) -> Option<Element> {
        self.table.element_by_label(label)
    }

    pub fn is_homomorphism_to(&self, target: &GroupTable, map: &[Element]) -> bool {
        map.len() == self.order()
            && map.iter().all(|&y| y < target.order())
            && self.table.elements().all(|x| {
                self.table
                    .elements()
                    .all(|y| map[self.mul(x, y)] == target.mul(map[x], map[y]))
            })
    }
}

/// Unvalidated spec as read from a document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawSpec {
    pub semilattice: Vec<Vec<usize>>,
    pub semilattice_labels: Option<Vec<String>>,
    /// One table per element of the semilattice, in its index order.
    pub groups: Vec<RawGroup>,
    pub bonding: Vec<RawBonding>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawGroup {
    pub table: Vec<Vec<usize>>,
    pub labels: Option<Vec<String>>,
}

/// `map[i]` is the image of element `i` of `G_from` in `G_to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawBonding {
    pub from: usize,
    pub to: usize,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SpecViolation {
    NotSemilattice { detail: String },
    GroupCount { expected: usize, got: usize },
    NotGroup { e: usize, detail: String },
    /// Bonding supplied for a pair that is not `to ≤ from`.
    BondingNotOrdered { f: usize, e: usize },
    MissingBonding { f: usize, e: usize },
    DuplicateBonding { f: usize, e: usize },
    NotHomomorphism { f: usize, e: usize, detail: String },
    /// `e ≤ f ≤ g` with `φ_{g,e} ≠ φ_{f,e} ∘ φ_{g,f}`; `e = f = g` flags a non-identity diagonal.
    FunctorLawViolated { e: usize, f: usize, g: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid strong semilattice spec: {} violation(s), first {:?}", violations.len(), violations.first())]
pub struct SpecViolations {
    pub violations: Vec<SpecViolation>,
}

/// Semilattice, groups indexed by semilattice element, and the full bonding
/// family as lookup tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongSemilatticeSpec {
    semilattice: FiniteSemigroup,
    groups: Vec<GroupTable>,
    /// `(f, e)` with `e ≤ f`, including the diagonal.
    bonding: BTreeMap<(usize, usize), Vec<Element>>,
}

pub fn validate_spec(raw: &RawSpec) -> Result<StrongSemilatticeSpec, SpecViolations> {
    let mut violations = Vec::new();
    let semilattice = match validate_semigroup(&raw.semilattice) {
        Ok(s) => {
            let s = match &raw.semilattice_labels {
                Some(l) => s.with_labels(l.clone()),
                None => Ok(s),
            };
            match s {
                Ok(s) if s.is_semilattice() => Some(s),
                Ok(_) => {
                    violations.push(SpecViolation::NotSemilattice {
                        detail: "operation is not commutative and idempotent".into(),
                    });
                    None
                }
                Err(e) => {
                    violations.push(SpecViolation::NotSemilattice { detail: e.to_string() });
                    None
                }
            }
        }
        Err(e) => {
            violations.push(SpecViolation::NotSemilattice { detail: e.to_string() });
            None
        }
    };
    let Some(semilattice) = semilattice else {
        return Err(SpecViolations { violations });
    };
    let m = semilattice.order();
    if raw.groups.len() != m {
        violations.push(SpecViolation::GroupCount {
            expected: m,
            got: raw.groups.len(),
        });
        return Err(SpecViolations { violations });
    }
    let mut groups = Vec::with_capacity(m);
    for (e, g) in raw.groups.iter().enumerate() {
        let built = validate_semigroup(&g.table).and_then(|t| match &g.labels {
            Some(l) => t.with_labels(l.clone()),
            None => Ok(t),
        });
        match built.and_then(GroupTable::new) {
            Ok(g) => groups.push(Some(g)),
            Err(err) => {
                violations.push(SpecViolation::NotGroup { e, detail: err.to_string() });
                groups.push(None);
            }
        }
    }
    if groups.iter().any(Option::is_none) {
        return Err(SpecViolations { violations });
    }
    let groups: Vec<GroupTable> = groups.into_iter().map(Option::unwrap).collect();
    let le = |e: usize, f: usize| semilattice.mul(e, f) == e;

    let mut bonding: BTreeMap<(usize, usize), Vec<Element>> = BTreeMap::new();
    for b in &raw.bonding {
        let (f, e) = (b.from, b.to);
        if f >= m || e >= m || !le(e, f) {
            violations.push(SpecViolation::BondingNotOrdered { f, e });
            continue;
        }
        if bonding.contains_key(&(f, e)) {
            violations.push(SpecViolation::DuplicateBonding { f, e });
            continue;
        }
        if !groups[f].is_homomorphism_to(&groups[e], &b.map) {
            let detail = if b.map.len() != groups[f].order() {
                format!("map has {} entries, G_{f} has {}", b.map.len(), groups[f].order())
            } else if let Some(bad) = b.map.iter().find(|&&y| y >= groups[e].order()) {
                format!("image {bad} is not an element of G_{e}")
            } else {
                "products are not preserved".into()
            };
            violations.push(SpecViolation::NotHomomorphism { f, e, detail });
            continue;
        }
        bonding.insert((f, e), b.map.clone());
    }
    for f in 0..m {
        for e in 0..m {
            if !le(e, f) || bonding.contains_key(&(f, e)) {
                continue;
            }
            if e == f {
                bonding.insert((e, e), (0..groups[e].order()).collect());
            } else if !raw.bonding.iter().any(|b| b.from == f && b.to == e) {
                violations.push(SpecViolation::MissingBonding { f, e });
            }
        }
    }
    if !violations.is_empty() {
        return Err(SpecViolations { violations });
    }
    for e in 0..m {
        if bonding[&(e, e)].iter().enumerate().any(|(i, &y)| i != y) {
            violations.push(SpecViolation::FunctorLawViolated { e, f: e, g: e });
        }
    }
    for e in 0..m {
        for f in 0..m {
            for g in 0..m {
                if e == f && f == g || !(le(e, f) && le(f, g)) {
                    continue;
                }
                let direct = &bonding[&(g, e)];
                let upper = &bonding[&(g, f)];
                let lower = &bonding[&(f, e)];
                if (0..groups[g].order()).any(|x| direct[x] != lower[upper[x]]) {
                    violations.push(SpecViolation::FunctorLawViolated { e, f, g });
                }
            }
        }
    }
    if !violations.is_empty() {
        return Err(SpecViolations { violations });
    }
    Ok(StrongSemilatticeSpec {
        semilattice,
        groups,
        bonding,
    })
}

impl StrongSemilatticeSpec {
    /// Builds a spec from groups and the bonding maps on covering pairs (or
    /// any generating set of pairs); remaining maps are composed. The result
    /// is validated.
    pub fn from_parts(
        semilattice: FiniteSemigroup,
        groups: Vec<GroupTable>,
        generating: &[(usize, usize, Vec<Element>)],
    ) -> Result<Self, SpecViolations> {
        let m = semilattice.order();
        let le = |e: usize, f: usize| semilattice.mul(e, f) == e;
        let mut known: BTreeMap<(usize, usize), Vec<Element>> = BTreeMap::new();
        for e in 0..m {
            known.insert((e, e), (0..groups[e].order()).collect());
        }
        for (f, e, map) in generating {
            known.insert((*f, *e), map.clone());
        }
        // close under composition until stable
        loop {
            let mut added = false;
            let keys: Vec<(usize, usize)> = known.keys().copied().collect();
            for &(g, f) in &keys {
                for &(f2, e) in &keys {
                    if f2 != f || known.contains_key(&(g, e)) {
                        continue;
                    }
                    let upper = &known[&(g, f)];
                    let lower = &known[&(f, e)];
                    let comp: Vec<Element> = upper.iter().map(|&x| lower.get(x).copied().unwrap_or(usize::MAX)).collect();
                    known.insert((g, e), comp);
                    added = true;
                }
            }
            if !added {
                break;
            }
        }
        let raw = RawSpec {
            semilattice: semilattice.rows(),
            semilattice_labels: Some(semilattice.labels().to_vec()),
            groups: groups
                .iter()
                .map(|g| RawGroup {
                    table: g.table().rows(),
                    labels: Some(g.table().labels().to_vec()),
                })
                .collect(),
            bonding: known
                .into_iter()
                .filter(|&((f, e), _)| f != e && le(e, f))
                .map(|((from, to), map)| RawBonding { from, to, map })
                .collect(),
        };
        validate_spec(&raw)
    }

    pub fn to_raw(&self) -> RawSpec {
        RawSpec {
            semilattice: self.semilattice.rows(),
            semilattice_labels: Some(self.semilattice.labels().to_vec()),
            groups: self
                .groups
                .iter()
                .map(|g| RawGroup {
                    table: g.table().rows(),
                    labels: Some(g.table().labels().to_vec()),
                })
                .collect(),
            bonding: self
                .bonding
                .iter()
                .filter(|((f, e), _)| f != e)
                .map(|(&(from, to), map)| RawBonding {
                    from,
                    to,
                    map: map.clone(),
                })
                .collect(),
        }
    }

    pub fn semilattice(&self) -> &FiniteSemigroup {
        &self.semilattice
    }

    pub fn group(&self, e: usize) -> &GroupTable {
        &self.groups[e]
    }

    pub fn groups(&self) -> &[GroupTable] {
        &self.groups
    }

    pub fn idempotent_count(&self) -> usize {
        self.semilattice.order()
    }

    pub fn le(&self, e: usize, f: usize) -> bool {
        self.semilattice.mul(e, f) == e
    }

    pub fn meet(&self, e: usize, f: usize) -> usize {
        self.semilattice.mul(e, f)
    }

    /// `φ_{f,e}(x)`; panics unless `e ≤ f`.
    pub fn bond(&self, f: usize, e: usize, x: Element) -> Element {
        self.bonding[&(f, e)][x]
    }

    pub fn bonding_table(&self, f: usize, e: usize) -> Option<&[Element]> {
        self.bonding.get(&(f, e)).map(Vec::as_slice)
    }

    /// Offset of `G_e` inside the assembled carrier.
    pub fn offset(&self, e: usize) -> usize {
        self.groups[..e].iter().map(GroupTable::order).sum()
    }

    pub fn carrier_size(&self) -> usize {
        self.groups.iter().map(GroupTable::order).sum()
    }

    /// Carrier index of `(e, g)`.
    pub fn index_of(&self, e: usize, g: Element) -> usize {
        self.offset(e) + g
    }

    /// Inverse of [`index_of`](Self::index_of).
    pub fn locate(&self, x: usize) -> (usize, Element) {
        let mut rest = x;
        for (e, g) in self.groups.iter().enumerate() {
            if rest < g.order() {
                return (e, rest);
            }
            rest -= g.order();
        }
        panic!("carrier index {x} out of range")
    }

    pub fn point_label(&self, e: usize, g: Element) -> String {
        format!("{},{}", self.semilattice.label(e), self.groups[e].label(g))
    }

    /// Parses `"e,g"` labels as written by [`point_label`](Self::point_label).
    pub fn point_by_label(&self, label: &str) -> Option<(usize, Element)> {
        let (e, g) = label.split_once(',')?;
        let e = self.semilattice.element_by_label(e.trim())?;
        let g = self.groups[e].element_by_label(g.trim())?;
        Some((e, g))
    }
}

/// Assembles the Clifford semigroup on the disjoint union of the groups with
/// product `st = φ_{e,ef}(s) · φ_{f,ef}(t)` computed in `G_{ef}`.
pub fn assemble(spec: &StrongSemilatticeSpec) -> FiniteSemigroup {
    let n = spec.carrier_size();
    let locs: Vec<(usize, Element)> = (0..n).map(|x| spec.locate(x)).collect();
    let table: Vec<Vec<usize>> = locs
        .iter()
        .map(|&(e, s)| {
            locs.iter()
                .map(|&(f, t)| {
                    let k = spec.meet(e, f);
                    let prod = spec.group(k).mul(spec.bond(e, k, s), spec.bond(f, k, t));
                    spec.index_of(k, prod)
                })
                .collect()
        })
        .collect();
    let labels: Vec<String> = locs.iter().map(|&(e, g)| spec.point_label(e, g)).collect();
    validate_semigroup(&table)
        .and_then(|s| s.with_labels(labels))
        .expect("a valid strong semilattice assembles to a semigroup")
}

/// Reads the strong-semilattice data back off a Clifford semigroup: the
/// idempotents as the semilattice, the π-fibers as groups (identity first),
/// and multiplication by the lower idempotent as bonding.
pub fn decompose(s: &FiniteSemigroup) -> Result<StrongSemilatticeSpec, AlgebraError> {
    let class = classify(s);
    if !class.is_clifford {
        return Err(AlgebraError::NotClifford);
    }
    let inv = class.inverse_structure.expect("clifford semigroups are inverse");
    let pi = pi_and_subgroups(s, &inv)?;
    let report = bonding_maps(s, &pi)?;
    if !report.is_functorial() {
        return Err(AlgebraError::InternalInconsistency(
            "bonding maps of a Clifford semigroup are not functorial".into(),
        ));
    }
    let order = IdempotentOrder::compute(s);
    let idem = &order.idempotents;
    let semilattice = s.restrict(idem).ok_or(AlgebraError::NotSemilattice)?;
    // identity first inside each group, then carrier order
    let members: Vec<Vec<Element>> = idem
        .iter()
        .map(|&e| {
            let mut g = vec![e];
            g.extend(pi.fibers[&e].iter().copied().filter(|&x| x != e));
            g
        })
        .collect();
    let groups: Vec<GroupTable> = members
        .iter()
        .map(|m| GroupTable::new(s.restrict(m).expect("maximal subgroups are closed")))
        .collect::<Result<_, _>>()?;
    let mut bonding = Vec::new();
    for (fi, &f) in idem.iter().enumerate() {
        for (ei, &e) in idem.iter().enumerate() {
            if e == f || !order.le(e, f) {
                continue;
            }
            let map = members[fi]
                .iter()
                .map(|&x| {
                    let y = s.mul(e, x);
                    members[ei].iter().position(|&z| z == y).expect("ex lies in G_e")
                })
                .collect();
            bonding.push(RawBonding { from: fi, to: ei, map });
        }
    }
    let raw = RawSpec {
        semilattice: semilattice.rows(),
        semilattice_labels: Some(semilattice.labels().to_vec()),
        groups: groups
            .iter()
            .map(|g| RawGroup {
                table: g.table().rows(),
                labels: Some(g.table().labels().to_vec()),
            })
            .collect(),
        bonding,
    };
    validate_spec(&raw).map_err(|v| AlgebraError::InternalInconsistency(v.to_string()))
}

/// `E × G` with `(e,g)(f,h) = (ef, gh)`; element `(e, g)` has index `e·|G| + g`.
pub fn direct_product(e: &FiniteSemigroup, g: &FiniteSemigroup) -> Result<FiniteSemigroup, AlgebraError> {
    if !e.is_semilattice() {
        return Err(AlgebraError::NotSemilattice);
    }
    if !g.is_group() {
        return Err(AlgebraError::NotGroup);
    }
    let m = g.order();
    let s = FiniteSemigroup::from_fn(e.order() * m, |x, y| {
        e.mul(x / m, y / m) * m + g.mul(x % m, y % m)
    })?;
    let labels: Vec<String> = (0..e.order() * m)
        .map(|x| format!("{},{}", e.label(x / m), g.label(x % m)))
        .collect();
    s.with_labels(labels)
}

/// Spec of `E × G` with identity bonding maps.
pub fn product_spec(e: &FiniteSemigroup, g: &GroupTable) -> Result<StrongSemilatticeSpec, SpecViolations> {
    let groups = vec![g.clone(); e.order()];
    let gens: Vec<(usize, usize, Vec<Element>)> = (0..e.order())
        .flat_map(|f| (0..e.order()).map(move |x| (f, x)))
        .filter(|&(f, x)| f != x && e.mul(x, f) == x)
        .map(|(f, x)| (f, x, (0..g.order()).collect()))
        .collect();
    StrongSemilatticeSpec::from_parts(e.clone(), groups, &gens)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EtaError {
    #[error("the index set D is empty")]
    EmptyDirectedSet,
    #[error("element {d} of D is not below {e}")]
    NotBelow { d: usize, e: usize },
    #[error("idempotent {0} is out of range")]
    OutOfRange(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EtaReport {
    pub injective: bool,
    /// Two distinct elements of `G_e` with identical coordinates.
    pub collision: Option<(Element, Element)>,
}

/// Injectivity of `g ↦ (φ_{e,d}(g))_{d ∈ D}` on `G_e`.
pub fn eta_injectivity(spec: &StrongSemilatticeSpec, e: usize, d: &[usize]) -> Result<EtaReport, EtaError> {
    if d.is_empty() {
        return Err(EtaError::EmptyDirectedSet);
    }
    if e >= spec.idempotent_count() {
        return Err(EtaError::OutOfRange(e));
    }
    for &x in d {
        if x >= spec.idempotent_count() {
            return Err(EtaError::OutOfRange(x));
        }
        if !spec.le(x, e) {
            return Err(EtaError::NotBelow { d: x, e });
        }
    }
    let mut seen: BTreeMap<Vec<Element>, Element> = BTreeMap::new();
    for g in 0..spec.group(e).order() {
        let coords: Vec<Element> = d.iter().map(|&x| spec.bond(e, x, g)).collect();
        if let Some(&h) = seen.get(&coords) {
            return Ok(EtaReport {
                injective: false,
                collision: Some((h, g)),
            });
        }
        seen.insert(coords, g);
    }
    Ok(EtaReport {
        injective: true,
        collision: None,
    })
}
