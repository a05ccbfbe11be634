//! Clifford semigroups seen as families of groups over a metrized
//! semilattice: the input every explicit metric consumes.

use std::fmt::{self, Debug, Display};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::order::{FlatPoint, LazySemilatticeModel};
use crate::strong::{GroupTable, StrongSemilatticeSpec};

use super::MetricError;

/// An element `(e, g)` with `g ∈ G_e`, `g` indexed inside its group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point<I> {
    pub e: I,
    pub g: usize,
}

impl<I> Point<I> {
    pub fn new(e: I, g: usize) -> Self {
        Self { e, g }
    }
}

/// Semilattice with a metric `ρ ≤ 1`, groups over it, bonding maps and
/// per-group metrics `d_e ≤ 1`.
pub trait CliffordModel: Sync {
    type Idem: Clone + Ord + Debug + Display + Send + Sync;

    /// The enumerated (possibly truncated) carrier of idempotents.
    fn idempotents(&self) -> Vec<Self::Idem>;
    fn rho(&self, e: &Self::Idem, f: &Self::Idem) -> BigRational;
    fn le(&self, e: &Self::Idem, f: &Self::Idem) -> bool;
    fn meet(&self, e: &Self::Idem, f: &Self::Idem) -> Self::Idem;
    fn way_below(&self, b: &Self::Idem, e: &Self::Idem) -> bool;
    fn minimum(&self) -> Self::Idem;
    /// `ρ(e, E ∖ ↟b)`, `None` when the complement is empty.
    fn distance_outside_way_above(&self, b: &Self::Idem, e: &Self::Idem) -> Option<BigRational>;

    fn group_order(&self, e: &Self::Idem) -> usize;
    fn group_identity(&self, e: &Self::Idem) -> usize;
    fn group_label(&self, e: &Self::Idem, g: usize) -> String;
    fn group_element_by_label(&self, e: &Self::Idem, label: &str) -> Option<usize>;
    fn idempotent_by_label(&self, label: &str) -> Option<Self::Idem>;
    /// `φ_{f,e}(g)` for `e ≤ f`.
    fn bond(&self, f: &Self::Idem, e: &Self::Idem, g: usize) -> usize;
    /// `d_e(g, h)`.
    fn fiber_distance(&self, e: &Self::Idem, g: usize, h: usize) -> BigRational;

    /// All points over the enumerated idempotents.
    fn points(&self) -> Vec<Point<Self::Idem>> {
        self.idempotents()
            .into_iter()
            .flat_map(|e| (0..self.group_order(&e)).map(move |g| Point::new(e.clone(), g)))
            .collect()
    }

    fn point_label(&self, p: &Point<Self::Idem>) -> String {
        format!("{},{}", p.e, self.group_label(&p.e, p.g))
    }

    fn point_by_label(&self, label: &str) -> Option<Point<Self::Idem>> {
        let (e, g) = label.split_once(',')?;
        let e = self.idempotent_by_label(e.trim())?;
        let g = self.group_element_by_label(&e, g.trim())?;
        Some(Point::new(e, g))
    }
}

fn rational_metric_violation(d: &[Vec<BigRational>]) -> Option<String> {
    let n = d.len();
    if d.iter().any(|r| r.len() != n) {
        return Some(format!("matrix is not {n}×{n}"));
    }
    let one = BigRational::one();
    for i in 0..n {
        if !d[i][i].is_zero() {
            return Some(format!("d({i},{i}) ≠ 0"));
        }
        for j in 0..n {
            if d[i][j].is_negative() || d[i][j] > one {
                return Some(format!("d({i},{j}) = {} outside [0, 1]", d[i][j]));
            }
            if d[i][j] != d[j][i] {
                return Some(format!("d({i},{j}) ≠ d({j},{i})"));
            }
            if i != j && d[i][j].is_zero() {
                return Some(format!("d({i},{j}) = 0 for distinct points"));
            }
            for k in 0..n {
                if d[i][k] > &d[i][j] + &d[j][k] {
                    return Some(format!("triangle fails at ({i},{j},{k})"));
                }
            }
        }
    }
    None
}

/// 0/1 metric on `n` points.
pub fn discrete_metric(n: usize) -> Vec<Vec<BigRational>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::zero() } else { BigRational::one() })
                .collect()
        })
        .collect()
}

/// A finite strong semilattice of groups with explicit metrics.
#[derive(Debug, Clone)]
pub struct FiniteCliffordModel {
    spec: StrongSemilatticeSpec,
    rho: Vec<Vec<BigRational>>,
    fiber_metrics: Vec<Vec<Vec<BigRational>>>,
}

impl FiniteCliffordModel {
    /// `fiber_metrics = None` puts the 0/1 metric on every group.
    pub fn new(
        spec: StrongSemilatticeSpec,
        rho: Vec<Vec<BigRational>>,
        fiber_metrics: Option<Vec<Vec<Vec<BigRational>>>>,
    ) -> Result<Self, MetricError> {
        let m = spec.idempotent_count();
        if rho.len() != m {
            return Err(MetricError::InvalidData(format!(
                "rho has {} rows for {m} idempotents",
                rho.len()
            )));
        }
        if let Some(v) = rational_metric_violation(&rho) {
            return Err(MetricError::InvalidData(format!("rho: {v}")));
        }
        let fiber_metrics = fiber_metrics
            .unwrap_or_else(|| spec.groups().iter().map(|g| discrete_metric(g.order())).collect());
        if fiber_metrics.len() != m {
            return Err(MetricError::InvalidData("one group metric per idempotent expected".into()));
        }
        for (e, d) in fiber_metrics.iter().enumerate() {
            if d.len() != spec.group(e).order() {
                return Err(MetricError::InvalidData(format!("metric on G_{e} has wrong size")));
            }
            if let Some(v) = rational_metric_violation(d) {
                return Err(MetricError::InvalidData(format!("metric on G_{e}: {v}")));
            }
        }
        Ok(Self {
            spec,
            rho,
            fiber_metrics,
        })
    }

    /// Discrete `ρ` on the semilattice and 0/1 metrics on every group.
    pub fn discrete(spec: StrongSemilatticeSpec) -> Self {
        let rho = discrete_metric(spec.idempotent_count());
        Self::new(spec, rho, None).expect("discrete metrics are valid")
    }

    pub fn spec(&self) -> &StrongSemilatticeSpec {
        &self.spec
    }

    pub fn rho_matrix(&self) -> &[Vec<BigRational>] {
        &self.rho
    }

    pub fn fiber_metrics(&self) -> &[Vec<Vec<BigRational>>] {
        &self.fiber_metrics
    }
}

/// Idempotent of a finite model, shown by its label.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Idx {
    pub index: usize,
    label: String,
}

impl Idx {
    pub fn new(index: usize, label: impl Into<String>) -> Self {
        Self {
            index,
            label: label.into(),
        }
    }
}

impl Debug for Idx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

impl Display for Idx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

impl FiniteCliffordModel {
    pub fn idx(&self, e: usize) -> Idx {
        Idx::new(e, self.spec.semilattice().label(e))
    }
}

impl CliffordModel for FiniteCliffordModel {
    type Idem = Idx;

    fn idempotents(&self) -> Vec<Idx> {
        (0..self.spec.idempotent_count()).map(|e| self.idx(e)).collect()
    }

    fn rho(&self, e: &Idx, f: &Idx) -> BigRational {
        self.rho[e.index][f.index].clone()
    }

    fn le(&self, e: &Idx, f: &Idx) -> bool {
        self.spec.le(e.index, f.index)
    }

    fn meet(&self, e: &Idx, f: &Idx) -> Idx {
        self.idx(self.spec.meet(e.index, f.index))
    }

    /// On a finite semilattice `≪` is `≤`.
    fn way_below(&self, b: &Idx, e: &Idx) -> bool {
        self.spec.le(b.index, e.index)
    }

    fn minimum(&self) -> Idx {
        let s = self.spec.semilattice();
        self.idx(crate::order::minimum(s).expect("finite semilattices have a minimum"))
    }

    fn distance_outside_way_above(&self, b: &Idx, e: &Idx) -> Option<BigRational> {
        (0..self.spec.idempotent_count())
            .filter(|&x| !self.spec.le(b.index, x))
            .map(|x| self.rho[e.index][x].clone())
            .min()
    }

    fn group_order(&self, e: &Idx) -> usize {
        self.spec.group(e.index).order()
    }

    fn group_identity(&self, e: &Idx) -> usize {
        self.spec.group(e.index).identity()
    }

    fn group_label(&self, e: &Idx, g: usize) -> String {
        self.spec.group(e.index).label(g).to_string()
    }

    fn group_element_by_label(&self, e: &Idx, label: &str) -> Option<usize> {
        self.spec.group(e.index).element_by_label(label)
    }

    fn idempotent_by_label(&self, label: &str) -> Option<Idx> {
        self.spec.semilattice().element_by_label(label).map(|e| self.idx(e))
    }

    fn bond(&self, f: &Idx, e: &Idx, g: usize) -> usize {
        self.spec.bond(f.index, e.index, g)
    }

    fn fiber_distance(&self, e: &Idx, g: usize, h: usize) -> BigRational {
        self.fiber_metrics[e.index][g][h].clone()
    }
}

/// The flat semilattice `{0} ∪ {1/n}` with one group `G_top` over every
/// `1/n`, a group `G_0` over `0`, and a single bonding homomorphism
/// `G_top → G_0`. Group metrics are 0/1.
#[derive(Debug, Clone)]
pub struct FlatCliffordModel {
    lattice: LazySemilatticeModel,
    top: GroupTable,
    bottom: GroupTable,
    down: Vec<usize>,
}

impl FlatCliffordModel {
    pub fn new(
        lattice: LazySemilatticeModel,
        top: GroupTable,
        bottom: GroupTable,
        down: Vec<usize>,
    ) -> Result<Self, MetricError> {
        if !top.is_homomorphism_to(&bottom, &down) {
            return Err(MetricError::InvalidData(
                "bonding map is not a homomorphism G_top → G_0".into(),
            ));
        }
        Ok(Self {
            lattice,
            top,
            bottom,
            down,
        })
    }

    /// Same group everywhere, identity bonding.
    pub fn identity_bonding(lattice: LazySemilatticeModel, group: GroupTable) -> Self {
        let down = (0..group.order()).collect();
        Self::new(lattice, group.clone(), group, down).expect("identity is a homomorphism")
    }

    /// Trivial group over `0`; every bonding map collapses.
    pub fn collapsing(lattice: LazySemilatticeModel, group: GroupTable) -> Self {
        let down = vec![0; group.order()];
        Self::new(lattice, group, GroupTable::trivial(), down).expect("trivial map is a homomorphism")
    }

    pub fn lattice(&self) -> &LazySemilatticeModel {
        &self.lattice
    }

    pub fn top(&self) -> &GroupTable {
        &self.top
    }

    pub fn bottom(&self) -> &GroupTable {
        &self.bottom
    }

    pub fn down(&self) -> &[usize] {
        &self.down
    }

    fn group(&self, e: &FlatPoint) -> &GroupTable {
        match e {
            FlatPoint::Zero => &self.bottom,
            FlatPoint::Recip(_) => &self.top,
        }
    }
}

impl CliffordModel for FlatCliffordModel {
    type Idem = FlatPoint;

    fn idempotents(&self) -> Vec<FlatPoint> {
        self.lattice.points()
    }

    fn rho(&self, e: &FlatPoint, f: &FlatPoint) -> BigRational {
        self.lattice.rho(*e, *f)
    }

    fn le(&self, e: &FlatPoint, f: &FlatPoint) -> bool {
        self.lattice.leq(*e, *f)
    }

    fn meet(&self, e: &FlatPoint, f: &FlatPoint) -> FlatPoint {
        self.lattice.meet(*e, *f)
    }

    fn way_below(&self, b: &FlatPoint, e: &FlatPoint) -> bool {
        self.lattice.way_below(*b, *e)
    }

    fn minimum(&self) -> FlatPoint {
        self.lattice.minimum()
    }

    fn distance_outside_way_above(&self, b: &FlatPoint, e: &FlatPoint) -> Option<BigRational> {
        self.lattice.distance_outside_way_above(*b, *e)
    }

    fn group_order(&self, e: &FlatPoint) -> usize {
        self.group(e).order()
    }

    fn group_identity(&self, e: &FlatPoint) -> usize {
        self.group(e).identity()
    }

    fn group_label(&self, e: &FlatPoint, g: usize) -> String {
        self.group(e).label(g).to_string()
    }

    fn group_element_by_label(&self, e: &FlatPoint, label: &str) -> Option<usize> {
        self.group(e).element_by_label(label)
    }

    fn idempotent_by_label(&self, label: &str) -> Option<FlatPoint> {
        FlatPoint::parse(label)
    }

    fn bond(&self, f: &FlatPoint, e: &FlatPoint, g: usize) -> usize {
        match (f, e) {
            _ if f == e => g,
            (FlatPoint::Recip(_), FlatPoint::Zero) => self.down[g],
            _ => panic!("no bonding map from {f} to {e}"),
        }
    }

    fn fiber_distance(&self, _e: &FlatPoint, g: usize, h: usize) -> BigRational {
        if g == h {
            BigRational::zero()
        } else {
            BigRational::one()
        }
    }
}

/// Absolute value on rationals, spelled out for readability at call sites.
pub(crate) fn abs(x: BigRational) -> BigRational {
    x.abs()
}
