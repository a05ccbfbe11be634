//! Finite topologies as explicit families of open sets (bitmasks), finite
//! topological semigroup models, and the Yeager/Bowman basic sets of a
//! strong semilattice of groups.

use serde::Serialize;
use thiserror::Error;

use crate::semigroup::{classify, green_j_classes, FiniteSemigroup, InverseStructure};
use crate::strong::StrongSemilatticeSpec;

/// Subset of a carrier of at most 64 points.
pub type Mask = u64;

pub const MAX_CARRIER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("carrier of {0} points exceeds the bitset limit of 64")]
    TooLarge(usize),
    #[error("open-set family is missing the empty set or the carrier")]
    MissingTrivialOpens,
    #[error("open-set family is not closed under {op}: {a:#x} and {b:#x}")]
    NotClosed { op: &'static str, a: Mask, b: Mask },
    #[error("open set {0:#x} has points outside the carrier")]
    OutOfCarrier(Mask),
    #[error("topology and semigroup carriers differ: {topology} vs {semigroup}")]
    CarrierMismatch { topology: usize, semigroup: usize },
    #[error("basis does not cover the carrier")]
    NotACover,
    #[error("semigroup is not a Clifford semigroup")]
    NotClifford,
    #[error("semigroup is not a semilattice")]
    NotSemilattice,
    #[error("model is not a topological semigroup")]
    NotContinuous,
    #[error("idempotent {0} is not in U")]
    EOutOfU(usize),
    #[error("U is empty")]
    EmptyU,
    #[error("V contains {0}, which is not an element of the group")]
    VOutOfGroup(usize),
    #[error("index {0} out of range")]
    OutOfRange(usize),
    #[error("open-subgroup equivalence conditions disagree: {0:?}")]
    InternalInconsistency(MpEquivalenceRecord),
}

pub fn full_mask(n: usize) -> Mask {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn mask_of(elements: &[usize]) -> Mask {
    elements.iter().fold(0, |m, &x| m | 1 << x)
}

pub fn members(mask: Mask) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

fn contains(mask: Mask, x: usize) -> bool {
    mask >> x & 1 == 1
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteTopology {
    n: usize,
    /// Sorted, deduplicated.
    opens: Vec<Mask>,
}

impl FiniteTopology {
    pub fn new(n: usize, opens: impl IntoIterator<Item = Mask>) -> Result<Self, TopologyError> {
        if n > MAX_CARRIER {
            return Err(TopologyError::TooLarge(n));
        }
        let full = full_mask(n);
        let mut opens: Vec<Mask> = opens.into_iter().collect();
        opens.sort_unstable();
        opens.dedup();
        if let Some(&bad) = opens.iter().find(|&&o| o & !full != 0) {
            return Err(TopologyError::OutOfCarrier(bad));
        }
        if opens.binary_search(&0).is_err() || opens.binary_search(&full).is_err() {
            return Err(TopologyError::MissingTrivialOpens);
        }
        for &a in &opens {
            for &b in &opens {
                if opens.binary_search(&(a | b)).is_err() {
                    return Err(TopologyError::NotClosed { op: "union", a, b });
                }
                if opens.binary_search(&(a & b)).is_err() {
                    return Err(TopologyError::NotClosed { op: "intersection", a, b });
                }
            }
        }
        Ok(Self { n, opens })
    }

    pub fn discrete(n: usize) -> Self {
        Self::new(n, 0..=full_mask(n)).expect("discrete topology")
    }

    pub fn indiscrete(n: usize) -> Self {
        Self::new(n, [0, full_mask(n)]).expect("indiscrete topology")
    }

    pub fn carrier_size(&self) -> usize {
        self.n
    }

    pub fn opens(&self) -> &[Mask] {
        &self.opens
    }

    pub fn is_open(&self, set: Mask) -> bool {
        self.opens.binary_search(&set).is_ok()
    }

    /// Smallest open set containing `x`.
    pub fn neighbourhood(&self, x: usize) -> Mask {
        self.opens
            .iter()
            .filter(|&&o| contains(o, x))
            .fold(full_mask(self.n), |acc, &o| acc & o)
    }

    /// Open sets of the subspace `sub`.
    pub fn subspace_opens(&self, sub: Mask) -> Vec<Mask> {
        let mut v: Vec<Mask> = self.opens.iter().map(|&o| o & sub).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// A subset of `X × X` (as a membership predicate) is open in the product
    /// topology iff it contains a rectangle of opens around each of its points.
    pub fn is_product_open(&self, set: impl Fn(usize, usize) -> bool) -> bool {
        let nbhd: Vec<Mask> = (0..self.n).map(|x| self.neighbourhood(x)).collect();
        (0..self.n).all(|x| {
            (0..self.n).all(|y| {
                !set(x, y)
                    || members(nbhd[x])
                        .iter()
                        .all(|&a| members(nbhd[y]).iter().all(|&b| set(a, b)))
            })
        })
    }

    pub fn is_hausdorff(&self) -> bool {
        (0..self.n).all(|x| {
            (0..self.n).all(|y| {
                x == y
                    || self.opens.iter().any(|&u| {
                        contains(u, x)
                            && self
                                .opens
                                .iter()
                                .any(|&v| contains(v, y) && u & v == 0)
                    })
            })
        })
    }
}

/// Every topology on an `n`-point carrier, via the bijection with preorders
/// (open sets are the up-closed sets). Exact counts: 1, 1, 4, 29, 355, 6942.
pub fn all_topologies(n: usize) -> Vec<FiniteTopology> {
    assert!(n <= 5, "enumeration of all topologies is limited to 5 points");
    let off_diag: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| x != y)
        .collect();
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << off_diag.len()) {
        let mut rel = vec![vec![false; n]; n];
        for (x, row) in rel.iter_mut().enumerate() {
            row[x] = true;
        }
        for (i, &(x, y)) in off_diag.iter().enumerate() {
            if bits >> i & 1 == 1 {
                rel[x][y] = true;
            }
        }
        let transitive = (0..n).all(|x| {
            (0..n).all(|y| (0..n).all(|z| !(rel[x][y] && rel[y][z]) || rel[x][z]))
        });
        if !transitive {
            continue;
        }
        let opens = (0..=full_mask(n)).filter(|&u| {
            (0..n).all(|x| !contains(u, x) || (0..n).all(|y| !rel[x][y] || contains(u, y)))
        });
        out.push(FiniteTopology::new(n, opens).expect("up-sets of a preorder form a topology"));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologicalSemigroupModel {
    pub semigroup: FiniteSemigroup,
    pub topology: FiniteTopology,
}

impl TopologicalSemigroupModel {
    pub fn new(semigroup: FiniteSemigroup, topology: FiniteTopology) -> Result<Self, TopologyError> {
        if semigroup.order() != topology.carrier_size() {
            return Err(TopologyError::CarrierMismatch {
                topology: topology.carrier_size(),
                semigroup: semigroup.order(),
            });
        }
        Ok(Self { semigroup, topology })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContinuityReport {
    pub multiplication_continuous: bool,
    /// Open set whose preimage under multiplication is not product-open.
    pub multiplication_witness: Option<Mask>,
    /// Present only for inverse semigroups.
    pub inversion_continuous: Option<bool>,
    pub inversion_witness: Option<Mask>,
}

impl ContinuityReport {
    pub fn continuous(&self) -> bool {
        self.multiplication_continuous && self.inversion_continuous.unwrap_or(true)
    }
}

pub fn continuity_check(model: &TopologicalSemigroupModel) -> ContinuityReport {
    let s = &model.semigroup;
    let t = &model.topology;
    let multiplication_witness = t
        .opens()
        .iter()
        .copied()
        .find(|&o| !t.is_product_open(|x, y| contains(o, s.mul(x, y))));
    let (inversion_continuous, inversion_witness) = match InverseStructure::compute(s) {
        Some(inv) => {
            let w = t.opens().iter().copied().find(|&o| {
                let pre = s.elements().filter(|&x| contains(o, inv.inv[x])).fold(0, |m, x| m | 1 << x);
                !t.is_open(pre)
            });
            (Some(w.is_none()), w)
        }
        None => (None, None),
    };
    ContinuityReport {
        multiplication_continuous: multiplication_witness.is_none(),
        multiplication_witness,
        inversion_continuous,
        inversion_witness,
    }
}

fn j_class_masks(s: &FiniteSemigroup) -> Vec<Mask> {
    let classes = green_j_classes(s);
    let mut of = vec![0; s.order()];
    for c in &classes {
        let m = mask_of(c);
        for &x in c {
            of[x] = m;
        }
    }
    of
}

/// For every open `O` and `x ∈ O` some open `U` has `x ∈ U ⊆ O ∩ J_x`.
pub fn mp_check(model: &TopologicalSemigroupModel) -> bool {
    let t = &model.topology;
    let j = j_class_masks(&model.semigroup);
    t.opens().iter().all(|&o| {
        members(o).into_iter().all(|x| {
            let target = o & j[x];
            t.opens().iter().any(|&u| contains(u, x) && u & !target == 0)
        })
    })
}

pub fn j_classes_open(model: &TopologicalSemigroupModel) -> bool {
    green_j_classes(&model.semigroup)
        .iter()
        .all(|c| model.topology.is_open(mask_of(c)))
}

/// Conditions (2)–(6) of the equivalence chain for topological Clifford
/// semigroups, each computed on its own terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MpEquivalenceRecord {
    pub mp_property: bool,
    pub j_classes_open: bool,
    pub subgroups_open: bool,
    pub idempotents_discrete: bool,
    pub disjoint_union_topology: bool,
}

impl MpEquivalenceRecord {
    pub fn all_equal(&self) -> bool {
        let v = [
            self.mp_property,
            self.j_classes_open,
            self.subgroups_open,
            self.idempotents_discrete,
            self.disjoint_union_topology,
        ];
        v.iter().all(|&b| b == v[0])
    }

    pub fn value(&self) -> bool {
        self.mp_property
    }
}

pub fn mp_equivalences(model: &TopologicalSemigroupModel) -> Result<MpEquivalenceRecord, TopologyError> {
    let s = &model.semigroup;
    let t = &model.topology;
    let class = classify(s);
    if !class.is_clifford {
        return Err(TopologyError::NotClifford);
    }
    if !continuity_check(model).continuous() {
        return Err(TopologyError::NotContinuous);
    }
    let inv = class.inverse_structure.expect("clifford");
    // maximal subgroups as fibers of x ↦ xx⁻¹
    let mut fibers: Vec<Mask> = Vec::new();
    for &e in &class.idempotents {
        fibers.push(
            s.elements()
                .filter(|&x| inv.pi[x] == e)
                .fold(0, |m, x| m | 1 << x),
        );
    }
    let subgroups_open = fibers.iter().all(|&g| t.is_open(g));
    let idem = mask_of(&class.idempotents);
    let sub = t.subspace_opens(idem);
    let idempotents_discrete = class.idempotents.iter().all(|&e| sub.contains(&(1 << e)));
    // opens of the sum topology: unions of one subspace-open piece per fiber
    let mut sum: Vec<Mask> = vec![0];
    for &g in &fibers {
        let pieces = t.subspace_opens(g);
        sum = sum
            .iter()
            .flat_map(|&acc| pieces.iter().map(move |&p| acc | p))
            .collect();
        sum.sort_unstable();
        sum.dedup();
    }
    let disjoint_union_topology = sum.as_slice() == t.opens();
    let record = MpEquivalenceRecord {
        mp_property: mp_check(model),
        j_classes_open: j_classes_open(model),
        subgroups_open,
        idempotents_discrete,
        disjoint_union_topology,
    };
    if record.all_equal() {
        Ok(record)
    } else {
        Err(TopologyError::InternalInconsistency(record))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrderGraphReport {
    /// `{(x, y) : x ≤ y}` is closed in the product topology.
    pub order_graph_closed: bool,
    pub hausdorff: bool,
}

pub fn order_graph_closed(model: &TopologicalSemigroupModel) -> Result<OrderGraphReport, TopologyError> {
    let s = &model.semigroup;
    if !s.is_semilattice() {
        return Err(TopologyError::NotSemilattice);
    }
    let closed = model.topology.is_product_open(|x, y| s.mul(x, y) != x);
    Ok(OrderGraphReport {
        order_graph_closed: closed,
        hausdorff: model.topology.is_hausdorff(),
    })
}

/// `W(U, (e, V)) = ⋃_{f ∈ U ∩ ↑e} φ_{f,e}⁻¹(V)` as carrier indices of the
/// assembled semigroup.
pub fn basic_set(
    spec: &StrongSemilatticeSpec,
    u: &[usize],
    e: usize,
    v: &[usize],
) -> Result<Vec<usize>, TopologyError> {
    check_idempotents(spec, u)?;
    if !u.contains(&e) {
        return Err(TopologyError::EOutOfU(e));
    }
    preimage_union(spec, u, e, v)
}

/// `W_B(U, V) = W(U, (inf U, V))`, with `inf U` the meet of `U`.
pub fn bowman_basic_set(spec: &StrongSemilatticeSpec, u: &[usize], v: &[usize]) -> Result<Vec<usize>, TopologyError> {
    check_idempotents(spec, u)?;
    let inf = crate::order::infimum(spec.semilattice(), u).ok_or(TopologyError::EmptyU)?;
    preimage_union(spec, u, inf, v)
}

fn check_idempotents(spec: &StrongSemilatticeSpec, u: &[usize]) -> Result<(), TopologyError> {
    match u.iter().find(|&&f| f >= spec.idempotent_count()) {
        Some(&bad) => Err(TopologyError::OutOfRange(bad)),
        None => Ok(()),
    }
}

fn preimage_union(spec: &StrongSemilatticeSpec, u: &[usize], e: usize, v: &[usize]) -> Result<Vec<usize>, TopologyError> {
    let ge = spec.group(e).order();
    if let Some(&bad) = v.iter().find(|&&g| g >= ge) {
        return Err(TopologyError::VOutOfGroup(bad));
    }
    let mut fs: Vec<usize> = u.iter().copied().filter(|&f| spec.le(e, f)).collect();
    fs.sort_unstable();
    fs.dedup();
    let mut out = Vec::new();
    for f in fs {
        for x in 0..spec.group(f).order() {
            if v.contains(&spec.bond(f, e, x)) {
                out.push(spec.index_of(f, x));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Topology generated by a family of sets: closure under finite
/// intersections, then under unions.
pub fn generate_topology(n: usize, basis: &[Mask]) -> Result<FiniteTopology, TopologyError> {
    if n > MAX_CARRIER {
        return Err(TopologyError::TooLarge(n));
    }
    let full = full_mask(n);
    if basis.iter().fold(0, |m, &b| m | b) != full {
        return Err(TopologyError::NotACover);
    }
    let mut inter: Vec<Mask> = basis.to_vec();
    inter.push(full);
    loop {
        inter.sort_unstable();
        inter.dedup();
        let mut next = inter.clone();
        for &a in &inter {
            for &b in &inter {
                next.push(a & b);
            }
        }
        next.sort_unstable();
        next.dedup();
        if next.len() == inter.len() {
            break;
        }
        inter = next;
    }
    // every open set is the union of the basic sets it contains
    let mut opens = vec![0, full];
    opens.extend(inter.iter().copied());
    loop {
        opens.sort_unstable();
        opens.dedup();
        let mut next = opens.clone();
        for &a in &opens {
            for &b in &inter {
                next.push(a | b);
            }
        }
        next.sort_unstable();
        next.dedup();
        if next.len() == opens.len() {
            break;
        }
        opens = next;
    }
    FiniteTopology::new(n, opens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strong::{assemble, product_spec, GroupTable, StrongSemilatticeSpec};

    fn chain(n: usize) -> FiniteSemigroup {
        FiniteSemigroup::from_fn(n, |x, y| x.min(y)).unwrap()
    }

    fn sierpinski() -> TopologicalSemigroupModel {
        TopologicalSemigroupModel::new(chain(2), FiniteTopology::new(2, [0, 0b10, 0b11]).unwrap()).unwrap()
    }

    fn product4() -> FiniteSemigroup {
        let e = chain(2);
        crate::strong::direct_product(&e, GroupTable::cyclic(2).table()).unwrap()
    }

    #[test]
    fn topology_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| all_topologies(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
    }

    #[test]
    fn topology_validation() {
        assert_eq!(
            FiniteTopology::new(2, [0, 1, 2, 3]).unwrap(),
            FiniteTopology::discrete(2)
        );
        assert_eq!(FiniteTopology::new(2, [1, 3]), Err(TopologyError::MissingTrivialOpens));
        assert!(matches!(
            FiniteTopology::new(3, [0, 1, 2, 7]),
            Err(TopologyError::NotClosed { op: "union", .. })
        ));
    }

    #[test]
    fn continuity_examples() {
        for s in [chain(3), product4(), GroupTable::cyclic(3).table().clone()] {
            let n = s.order();
            for t in [FiniteTopology::discrete(n), FiniteTopology::indiscrete(n)] {
                let model = TopologicalSemigroupModel::new(s.clone(), t).unwrap();
                assert!(continuity_check(&model).continuous());
            }
        }
        assert!(continuity_check(&sierpinski()).continuous());
        // {0,1}(min) with opens {∅,{0},all}: m⁻¹({0}) = {(0,0),(0,1),(1,0)} is open
        let m = TopologicalSemigroupModel::new(chain(2), FiniteTopology::new(2, [0, 1, 3]).unwrap()).unwrap();
        assert!(continuity_check(&m).continuous());
        // Z2 with opens {∅,{0},all}: m⁻¹({0}) ∋ (1,1), but N(1)×N(1) = all
        let z2 = TopologicalSemigroupModel::new(
            GroupTable::cyclic(2).table().clone(),
            FiniteTopology::new(2, [0, 1, 3]).unwrap(),
        )
        .unwrap();
        let rep = continuity_check(&z2);
        assert!(!rep.multiplication_continuous);
        assert_eq!(rep.multiplication_witness, Some(1));
    }

    #[test]
    fn mp_examples() {
        let s = product4();
        let discrete = TopologicalSemigroupModel::new(s.clone(), FiniteTopology::discrete(4)).unwrap();
        assert!(mp_check(&discrete));
        let indiscrete = TopologicalSemigroupModel::new(s, FiniteTopology::indiscrete(4)).unwrap();
        assert!(!mp_check(&indiscrete));
        let g = GroupTable::cyclic(3).table().clone();
        for t in all_topologies(3) {
            let m = TopologicalSemigroupModel::new(g.clone(), t).unwrap();
            assert!(mp_check(&m));
        }
    }

    #[test]
    fn mp_equivalence_examples() {
        let s = product4();
        let d = TopologicalSemigroupModel::new(s.clone(), FiniteTopology::discrete(4)).unwrap();
        assert!(mp_equivalences(&d).unwrap().value());
        let i = TopologicalSemigroupModel::new(s, FiniteTopology::indiscrete(4)).unwrap();
        let r = mp_equivalences(&i).unwrap();
        assert!(!r.value() && r.all_equal());
        let r = mp_equivalences(&sierpinski()).unwrap();
        assert!(!r.mp_property && !r.idempotents_discrete && !r.subgroups_open);
    }

    #[test]
    fn order_graph_examples() {
        let d = TopologicalSemigroupModel::new(chain(3), FiniteTopology::discrete(3)).unwrap();
        assert_eq!(
            order_graph_closed(&d).unwrap(),
            OrderGraphReport { order_graph_closed: true, hausdorff: true }
        );
        let i = TopologicalSemigroupModel::new(chain(3), FiniteTopology::indiscrete(3)).unwrap();
        assert_eq!(
            order_graph_closed(&i).unwrap(),
            OrderGraphReport { order_graph_closed: false, hausdorff: false }
        );
        assert_eq!(
            order_graph_closed(&sierpinski()).unwrap(),
            OrderGraphReport { order_graph_closed: false, hausdorff: false }
        );
    }

    #[test]
    fn basic_set_examples() {
        let z4 = StrongSemilatticeSpec::from_parts(
            chain(2),
            vec![GroupTable::cyclic(2), GroupTable::cyclic(4)],
            &[(1, 0, vec![0, 1, 0, 1])],
        )
        .unwrap();
        // U = {e}, V = G_e
        assert_eq!(basic_set(&z4, &[1], 1, &[0, 1, 2, 3]).unwrap(), vec![2, 3, 4, 5]);
        // kernel of mod 2 ({0, 2} in Z4 → carrier 2, 4) plus identity of Z2 (carrier 0)
        assert_eq!(basic_set(&z4, &[0, 1], 0, &[0]).unwrap(), vec![0, 2, 4]);
        let prod = product_spec(&chain(3), &GroupTable::cyclic(2)).unwrap();
        assert_eq!(basic_set(&prod, &[0, 1, 2], 0, &[1]).unwrap(), vec![1, 3, 5]);
        assert_eq!(basic_set(&prod, &[1, 2], 0, &[1]), Err(TopologyError::EOutOfU(0)));
        assert_eq!(basic_set(&prod, &[0], 0, &[2]), Err(TopologyError::VOutOfGroup(2)));
    }

    #[test]
    fn bowman_examples() {
        let prod = product_spec(&chain(3), &GroupTable::cyclic(2)).unwrap();
        assert_eq!(bowman_basic_set(&prod, &[0, 1, 2], &[0, 1]).unwrap(), (0..6).collect::<Vec<_>>());
        assert_eq!(bowman_basic_set(&prod, &[2], &[1]).unwrap(), basic_set(&prod, &[2], 2, &[1]).unwrap());
        assert_eq!(bowman_basic_set(&prod, &[], &[0]), Err(TopologyError::EmptyU));
    }

    #[test]
    fn generated_topologies() {
        let singletons: Vec<Mask> = (0..4).map(|i| 1 << i).collect();
        assert_eq!(generate_topology(4, &singletons).unwrap(), FiniteTopology::discrete(4));
        assert_eq!(generate_topology(3, &[0b111]).unwrap(), FiniteTopology::indiscrete(3));
        assert_eq!(generate_topology(3, &[0b011]), Err(TopologyError::NotACover));
        // all Bowman sets of an identity-bonding spec generate the discrete topology
        let spec = product_spec(&chain(2), &GroupTable::cyclic(2)).unwrap();
        let mut basis = Vec::new();
        for u in 1u64..4 {
            let us = members(u);
            for v in 0u64..4 {
                let set = bowman_basic_set(&spec, &us, &members(v)).unwrap();
                basis.push(mask_of(&set));
            }
        }
        let s = assemble(&spec);
        assert_eq!(generate_topology(s.order(), &basis).unwrap(), FiniteTopology::discrete(4));
    }
}
