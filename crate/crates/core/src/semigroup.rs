//! Finite semigroups given by a full Cayley table, and the structural
//! computations on them: inverses, idempotents, Clifford detection, the
//! idempotent map, maximal subgroups, bonding maps and Green's J-classes.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

/// Element of a finite carrier, always a dense index `0..n`.
pub type Element = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("empty carrier")]
    Empty,
    #[error("table is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("entry table[{row}][{col}] = {value} is out of range for order {n}")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        n: usize,
    },
    #[error("not associative: {} failing triples, first {:?}", witnesses.len(), witnesses.first())]
    NotAssociative { witnesses: Vec<(Element, Element, Element)> },
    #[error("label list has {got} entries, expected {n}")]
    LabelCount { got: usize, n: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("semigroup is not a Clifford semigroup")]
    NotClifford,
    #[error("semigroup is not a semilattice")]
    NotSemilattice,
    #[error("semigroup is not a group")]
    NotGroup,
    #[error("search budget of {budget} nodes exceeded")]
    SearchBudgetExceeded { budget: u64 },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

/// A validated finite semigroup: every entry is in range and the table is
/// associative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSemigroup {
    n: usize,
    table: Vec<Element>,
    labels: Vec<String>,
}

/// Validates a raw Cayley table. On failure of associativity the error
/// carries every failing triple `(x, y, z)` with `(xy)z != x(yz)`.
pub fn validate_semigroup(table: &[Vec<usize>]) -> Result<FiniteSemigroup, AlgebraError> {
    let n = table.len();
    if n == 0 {
        return Err(AlgebraError::Empty);
    }
    for (row, entries) in table.iter().enumerate() {
        if entries.len() != n {
            return Err(AlgebraError::NotSquare {
                row,
                len: entries.len(),
                n,
            });
        }
        for (col, &value) in entries.iter().enumerate() {
            if value >= n {
                return Err(AlgebraError::IndexOutOfRange { row, col, value, n });
            }
        }
    }
    let flat: Vec<Element> = table.iter().flatten().copied().collect();
    let mul = |x: usize, y: usize| flat[x * n + y];
    let mut witnesses = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let xy = mul(x, y);
            for z in 0..n {
                if mul(xy, z) != mul(x, mul(y, z)) {
                    witnesses.push((x, y, z));
                }
            }
        }
    }
    if !witnesses.is_empty() {
        return Err(AlgebraError::NotAssociative { witnesses });
    }
    Ok(FiniteSemigroup {
        n,
        table: flat,
        labels: (0..n).map(|i| i.to_string()).collect(),
    })
}

impl FiniteSemigroup {
    /// Builds a semigroup from a closure; the result is validated.
    pub fn from_fn(n: usize, f: impl Fn(Element, Element) -> Element) -> Result<Self, AlgebraError> {
        let table: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| f(x, y)).collect()).collect();
        validate_semigroup(&table)
    }

    pub fn with_labels<S: Into<String>>(
        mut self,
        labels: impl IntoIterator<Item = S>,
    ) -> Result<Self, AlgebraError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.n {
            return Err(AlgebraError::LabelCount {
                got: labels.len(),
                n: self.n,
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(AlgebraError::DuplicateLabel(l.clone()));
            }
        }
        self.labels = labels;
        Ok(self)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, x: Element, y: Element) -> Element {
        self.table[x * self.n + y]
    }

    pub fn label(&self, x: Element) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element_by_label(&self, label: &str) -> Option<Element> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.n
    }

    pub fn is_idempotent(&self, x: Element) -> bool {
        self.mul(x, x) == x
    }

    pub fn idempotents(&self) -> Vec<Element> {
        self.elements().filter(|&x| self.is_idempotent(x)).collect()
    }

    pub fn is_commutative(&self) -> bool {
        self.elements()
            .all(|x| self.elements().all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Commutative band.
    pub fn is_semilattice(&self) -> bool {
        self.elements().all(|x| self.is_idempotent(x)) && self.is_commutative()
    }

    /// Left identity and right inverses suffice on a finite associative table.
    pub fn group_identity(&self) -> Option<Element> {
        let idem = self.idempotents();
        if idem.len() != 1 {
            return None;
        }
        let e = idem[0];
        let is_identity = self
            .elements()
            .all(|x| self.mul(e, x) == x && self.mul(x, e) == x);
        let has_inverses = self
            .elements()
            .all(|x| self.elements().any(|y| self.mul(x, y) == e && self.mul(y, x) == e));
        (is_identity && has_inverses).then_some(e)
    }

    pub fn is_group(&self) -> bool {
        self.group_identity().is_some()
    }

    /// Restriction of the table to a subset closed under multiplication,
    /// reindexed by position in `subset`. Returns `None` if not closed.
    pub fn restrict(&self, subset: &[Element]) -> Option<FiniteSemigroup> {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &x) in subset.iter().enumerate() {
            pos[x] = i;
        }
        let mut table = Vec::with_capacity(subset.len());
        for &x in subset {
            let mut row = Vec::with_capacity(subset.len());
            for &y in subset {
                let p = pos[self.mul(x, y)];
                if p == usize::MAX {
                    return None;
                }
                row.push(p);
            }
            table.push(row);
        }
        let sub = validate_semigroup(&table).ok()?;
        sub.with_labels(subset.iter().map(|&x| self.labels[x].clone())).ok()
    }

    /// Multiplicative order data of `x`: (index, period) of the monogenic
    /// subsemigroup generated by `x`.
    pub fn index_period(&self, x: Element) -> (usize, usize) {
        let mut seen = vec![usize::MAX; self.n];
        let mut power = x;
        let mut k = 1;
        loop {
            if seen[power] != usize::MAX {
                let first = seen[power];
                return (first, k - first);
            }
            seen[power] = k;
            power = self.mul(power, x);
            k += 1;
        }
    }
}

/// The unique inverse of every element, together with `x⁰ = xx⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InverseStructure {
    pub inv: Vec<Element>,
    pub pi: Vec<Element>,
}

impl InverseStructure {
    /// Returns `Some` iff every element has exactly one inverse.
    pub fn compute(s: &FiniteSemigroup) -> Option<Self> {
        let mut inv = Vec::with_capacity(s.order());
        for x in s.elements() {
            let mut candidates = s
                .elements()
                .filter(|&y| s.mul(s.mul(x, y), x) == x && s.mul(s.mul(y, x), y) == y);
            let first = candidates.next()?;
            if candidates.next().is_some() {
                return None;
            }
            inv.push(first);
        }
        let pi = s.elements().map(|x| s.mul(x, inv[x])).collect();
        Some(Self { inv, pi })
    }

    /// Number of inverses of each element, for diagnostics.
    pub fn inverse_counts(s: &FiniteSemigroup) -> Vec<usize> {
        s.elements()
            .map(|x| {
                s.elements()
                    .filter(|&y| s.mul(s.mul(x, y), x) == x && s.mul(s.mul(y, x), y) == y)
                    .count()
            })
            .collect()
    }
}

/// Idempotents with the natural order `e ≤ f ⇔ ef = e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdempotentOrder {
    pub idempotents: Vec<Element>,
    /// `leq[i][j]` compares `idempotents[i]` with `idempotents[j]`.
    pub leq: Vec<Vec<bool>>,
}

impl IdempotentOrder {
    pub fn compute(s: &FiniteSemigroup) -> Self {
        let idempotents = s.idempotents();
        let leq = idempotents
            .iter()
            .map(|&e| idempotents.iter().map(|&f| s.mul(e, f) == e).collect())
            .collect();
        Self { idempotents, leq }
    }

    pub fn position(&self, e: Element) -> Option<usize> {
        self.idempotents.iter().position(|&x| x == e)
    }

    /// Order test on carrier elements; both must be idempotent.
    pub fn le(&self, e: Element, f: Element) -> bool {
        match (self.position(e), self.position(f)) {
            (Some(i), Some(j)) => self.leq[i][j],
            _ => false,
        }
    }

    pub fn is_partial_order(&self) -> bool {
        let m = self.idempotents.len();
        (0..m).all(|i| self.leq[i][i])
            && (0..m).all(|i| (0..m).all(|j| i == j || !(self.leq[i][j] && self.leq[j][i])))
            && (0..m).all(|i| {
                (0..m).all(|j| (0..m).all(|k| !(self.leq[i][j] && self.leq[j][k]) || self.leq[i][k]))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub is_inverse: bool,
    pub inverse_structure: Option<InverseStructure>,
    /// `xx⁻¹ = x⁻¹x` for every `x`.
    pub clifford_by_inverses: bool,
    /// Every idempotent commutes with every element.
    pub clifford_by_central_idempotents: bool,
    pub is_clifford: bool,
    pub is_group: bool,
    pub is_left_cancellative: bool,
    pub is_right_cancellative: bool,
    pub idempotents: Vec<Element>,
}

impl Classification {
    /// Both Clifford criteria agree; false would mean a bug here.
    pub fn criteria_agree(&self) -> bool {
        !self.is_inverse || self.clifford_by_inverses == self.clifford_by_central_idempotents
    }

    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        parts.push(if self.is_inverse { "inverse" } else { "not inverse" });
        if self.is_inverse {
            parts.push(if self.is_clifford { "clifford" } else { "not clifford" });
            parts.push(if self.is_group { "group" } else { "not group" });
        }
        parts.join(", ")
    }
}

pub fn classify(s: &FiniteSemigroup) -> Classification {
    let inverse_structure = InverseStructure::compute(s);
    let idempotents = s.idempotents();
    let is_inverse = inverse_structure.is_some();
    let clifford_by_inverses = inverse_structure.as_ref().is_some_and(|inv| {
        s.elements()
            .all(|x| s.mul(x, inv.inv[x]) == s.mul(inv.inv[x], x))
    });
    let clifford_by_central_idempotents = idempotents
        .iter()
        .all(|&e| s.elements().all(|x| s.mul(e, x) == s.mul(x, e)));
    let is_clifford = is_inverse && clifford_by_inverses && clifford_by_central_idempotents;
    debug_assert!(!is_inverse || clifford_by_inverses == clifford_by_central_idempotents);
    let is_group = is_inverse && idempotents.len() == 1;
    let n = s.order();
    let is_left_cancellative = (0..n).all(|z| {
        (0..n).all(|x| (0..n).all(|y| x == y || s.mul(z, x) != s.mul(z, y)))
    });
    let is_right_cancellative = (0..n).all(|z| {
        (0..n).all(|x| (0..n).all(|y| x == y || s.mul(x, z) != s.mul(y, z)))
    });
    Classification {
        is_inverse,
        inverse_structure,
        clifford_by_inverses,
        clifford_by_central_idempotents,
        is_clifford,
        is_group,
        is_left_cancellative,
        is_right_cancellative,
        idempotents,
    }
}

/// The idempotent map `π(x) = xx⁻¹` and its fibers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiMap {
    pub pi: Vec<Element>,
    /// Fiber over each idempotent, in carrier order.
    pub fibers: BTreeMap<Element, Vec<Element>>,
}

pub fn pi_and_subgroups(s: &FiniteSemigroup, inv: &InverseStructure) -> Result<PiMap, AlgebraError> {
    if !classify(s).is_clifford {
        return Err(AlgebraError::NotClifford);
    }
    let pi: Vec<Element> = s.elements().map(|x| s.mul(x, inv.inv[x])).collect();
    for x in s.elements() {
        for y in s.elements() {
            if pi[s.mul(x, y)] != s.mul(pi[x], pi[y]) {
                return Err(AlgebraError::InternalInconsistency(format!(
                    "pi is not a homomorphism at ({x}, {y})"
                )));
            }
        }
    }
    let mut fibers: BTreeMap<Element, Vec<Element>> = BTreeMap::new();
    for x in s.elements() {
        fibers.entry(pi[x]).or_default().push(x);
    }
    for (&e, fiber) in &fibers {
        if !s.is_idempotent(e) || !fiber.contains(&e) {
            return Err(AlgebraError::InternalInconsistency(format!(
                "fiber over {e} does not contain its idempotent"
            )));
        }
        let closed = fiber.iter().all(|&x| {
            fiber.iter().all(|&y| pi[s.mul(x, y)] == e) && pi[inv.inv[x]] == e
        });
        if !closed {
            return Err(AlgebraError::InternalInconsistency(format!(
                "fiber over {e} is not a subgroup"
            )));
        }
    }
    Ok(PiMap { pi, fibers })
}

/// Maximal subgroups plus the bonding maps `φ_{f,e}(x) = ex` for `e ≤ f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliffordDecomposition {
    pub groups: BTreeMap<Element, Vec<Element>>,
    /// Keyed by `(f, e)` with `e ≤ f`; entry `i` is the image of `groups[f][i]`.
    pub bonding: BTreeMap<(Element, Element), Vec<Element>>,
}

impl CliffordDecomposition {
    pub fn apply(&self, f: Element, e: Element, x: Element) -> Option<Element> {
        let pos = self.groups.get(&f)?.iter().position(|&y| y == x)?;
        self.bonding.get(&(f, e)).map(|m| m[pos])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BondingReport {
    pub decomposition: CliffordDecomposition,
    pub non_homomorphisms: Vec<(Element, Element)>,
    pub non_identity_diagonal: Vec<Element>,
    /// Chains `(e, f, g)` with `φ_{g,e} ≠ φ_{f,e} ∘ φ_{g,f}`.
    pub composition_failures: Vec<(Element, Element, Element)>,
}

impl BondingReport {
    pub fn is_functorial(&self) -> bool {
        self.non_homomorphisms.is_empty()
            && self.non_identity_diagonal.is_empty()
            && self.composition_failures.is_empty()
    }
}

pub fn bonding_maps(s: &FiniteSemigroup, pi: &PiMap) -> Result<BondingReport, AlgebraError> {
    if !classify(s).is_clifford {
        return Err(AlgebraError::NotClifford);
    }
    let order = IdempotentOrder::compute(s);
    let groups = pi.fibers.clone();
    let mut bonding = BTreeMap::new();
    for &f in groups.keys() {
        for &e in groups.keys() {
            if order.le(e, f) {
                let image: Vec<Element> = groups[&f].iter().map(|&x| s.mul(e, x)).collect();
                bonding.insert((f, e), image);
            }
        }
    }
    let decomposition = CliffordDecomposition { groups, bonding };
    let mut non_homomorphisms = Vec::new();
    let mut non_identity_diagonal = Vec::new();
    let mut composition_failures = Vec::new();
    for (&(f, e), image) in &decomposition.bonding {
        let gf = &decomposition.groups[&f];
        let ge = &decomposition.groups[&e];
        let lands = image.iter().all(|y| ge.contains(y));
        let hom = lands
            && gf.iter().enumerate().all(|(i, &x)| {
                gf.iter().enumerate().all(|(j, &y)| {
                    let xy = s.mul(x, y);
                    let k = gf.iter().position(|&z| z == xy);
                    k.is_some_and(|k| image[k] == s.mul(image[i], image[j]))
                })
            });
        if !hom {
            non_homomorphisms.push((f, e));
        }
        if f == e && image != gf {
            non_identity_diagonal.push(e);
        }
    }
    let idem: Vec<Element> = decomposition.groups.keys().copied().collect();
    for &e in &idem {
        for &f in &idem {
            for &g in &idem {
                if !(order.le(e, f) && order.le(f, g)) {
                    continue;
                }
                let ok = decomposition.groups[&g].iter().all(|&x| {
                    let via = decomposition
                        .apply(g, f, x)
                        .and_then(|y| decomposition.apply(f, e, y));
                    via == decomposition.apply(g, e, x)
                });
                if !ok {
                    composition_failures.push((e, f, g));
                }
            }
        }
    }
    Ok(BondingReport {
        decomposition,
        non_homomorphisms,
        non_identity_diagonal,
        composition_failures,
    })
}

/// Partition of the carrier by equality of principal two-sided ideals
/// `S¹xS¹`. Classes are listed by smallest member.
pub fn green_j_classes(s: &FiniteSemigroup) -> Vec<Vec<Element>> {
    let n = s.order();
    let ideals: Vec<Vec<bool>> = s
        .elements()
        .map(|x| {
            let mut ideal = vec![false; n];
            ideal[x] = true;
            for a in 0..n {
                ideal[s.mul(a, x)] = true;
                ideal[s.mul(x, a)] = true;
                let ax = s.mul(a, x);
                for b in 0..n {
                    ideal[s.mul(ax, b)] = true;
                }
            }
            ideal
        })
        .collect();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<Element>> = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let members: Vec<Element> = (x..n).filter(|&y| ideals[y] == ideals[x]).collect();
        for &y in &members {
            class_of[y] = id;
        }
        classes.push(members);
    }
    classes
}

/// Witness that a Clifford semigroup is trivial: isomorphisms `θ_e` from
/// every maximal subgroup onto the reference group `G_reference`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrivialWitness {
    pub reference: Element,
    /// `thetas[e][i]` is the image in `G_reference` of the `i`-th element of `G_e`.
    pub thetas: BTreeMap<Element, Vec<Element>>,
}

/// Searches for isomorphisms `θ_e : G_e → G_ref` with `φ_{f,e} = θ_e⁻¹θ_f`
/// for all `e ≤ f`. The reference is the first maximal subgroup of largest
/// order. Every solution satisfies `θ_f = θ_m ∘ φ_{f,m}` for the minimum
/// idempotent `m`, so the search enumerates the isomorphisms `G_m → G_ref`
/// exhaustively and derives the rest; `budget` bounds the enumeration.
pub fn is_trivial_clifford(
    s: &FiniteSemigroup,
    budget: u64,
) -> Result<Option<TrivialWitness>, AlgebraError> {
    let class = classify(s);
    if !class.is_clifford {
        return Err(AlgebraError::NotClifford);
    }
    let inv = class.inverse_structure.expect("clifford implies inverse");
    let pi = pi_and_subgroups(s, &inv)?;
    let report = bonding_maps(s, &pi)?;
    let dec = &report.decomposition;
    let order = IdempotentOrder::compute(s);
    let reference = *dec
        .groups
        .iter()
        .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(a.0)))
        .map(|(e, _)| e)
        .expect("nonempty");
    let minimum = crate::order::minimum(&s.restrict(&order.idempotents).expect("E(S) closed"))
        .map_err(|_| AlgebraError::InternalInconsistency("E(S) has no minimum".into()))?;
    let minimum = order.idempotents[minimum];
    if dec.groups.values().any(|g| g.len() != dec.groups[&reference].len()) {
        return Ok(None);
    }
    let g_min = s.restrict(&dec.groups[&minimum]).expect("subgroup");
    let g_ref = s.restrict(&dec.groups[&reference]).expect("subgroup");
    let isos = crate::iso::IsoSearch::new(&g_min, &g_ref)
        .with_budget(budget)
        .all()
        .map_err(|_| AlgebraError::SearchBudgetExceeded { budget })?;
    let mut spent = 0u64;
    for theta_min in isos {
        spent += 1;
        if spent > budget {
            return Err(AlgebraError::SearchBudgetExceeded { budget });
        }
        let mut thetas = BTreeMap::new();
        let mut ok = true;
        for (&f, gf) in &dec.groups {
            let theta_f: Vec<Element> = gf
                .iter()
                .map(|&x| {
                    let y = dec.apply(f, minimum, x).expect("minimum is below everything");
                    let pos = dec.groups[&minimum].iter().position(|&z| z == y).expect("in G_min");
                    theta_min[pos]
                })
                .collect();
            let mut sorted = theta_f.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != theta_f.len() {
                ok = false;
                break;
            }
            thetas.insert(f, theta_f);
        }
        if !ok {
            continue;
        }
        // φ_{f,e} = θ_e⁻¹ θ_f, i.e. θ_e ∘ φ_{f,e} = θ_f, for every e ≤ f.
        let consistent = dec.bonding.iter().all(|(&(f, e), image)| {
            image.iter().enumerate().all(|(i, &y)| {
                let pos = dec.groups[&e].iter().position(|&z| z == y).expect("in G_e");
                thetas[&e][pos] == thetas[&f][i]
            })
        });
        if consistent {
            return Ok(Some(TrivialWitness { reference, thetas }));
        }
    }
    Ok(None)
}
