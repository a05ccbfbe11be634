//! Finite posets, the way-below relation, domain bases, Lawson basic sets
//! and the flat semilattice `{0} ∪ {1/n}`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::semigroup::FiniteSemigroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("relation is not reflexive at {0}")]
    NotReflexive(usize),
    #[error("relation is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("relation is not transitive at ({0}, {1}, {2})")]
    NotTransitive(usize, usize, usize),
    #[error("relation matrix is not {0}×{0}")]
    Shape(usize),
    #[error("poset has {n} elements; exhaustive enumeration is limited to {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("element {0} out of range")]
    OutOfRange(usize),
    #[error("not a semilattice")]
    NotSemilattice,
    #[error("flat model truncation must be at least 1")]
    EmptyModel,
}

/// A finite partial order as a dense relation matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinitePoset {
    n: usize,
    leq: Vec<Vec<bool>>,
    labels: Vec<String>,
}

impl FinitePoset {
    pub fn new(leq: Vec<Vec<bool>>) -> Result<Self, OrderError> {
        let n = leq.len();
        if leq.iter().any(|r| r.len() != n) {
            return Err(OrderError::Shape(n));
        }
        for x in 0..n {
            if !leq[x][x] {
                return Err(OrderError::NotReflexive(x));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if x != y && leq[x][y] && leq[y][x] {
                    return Err(OrderError::NotAntisymmetric(x, y));
                }
                for z in 0..n {
                    if leq[x][y] && leq[y][z] && !leq[x][z] {
                        return Err(OrderError::NotTransitive(x, y, z));
                    }
                }
            }
        }
        Ok(Self {
            n,
            leq,
            labels: (0..n).map(|i| i.to_string()).collect(),
        })
    }

    /// Reflexive-transitive closure of the given pairs `x ≤ y`, then validated.
    pub fn from_relations(n: usize, pairs: &[(usize, usize)]) -> Result<Self, OrderError> {
        let mut leq = vec![vec![false; n]; n];
        for (x, row) in leq.iter_mut().enumerate() {
            row[x] = true;
        }
        for &(x, y) in pairs {
            if x >= n {
                return Err(OrderError::OutOfRange(x));
            }
            if y >= n {
                return Err(OrderError::OutOfRange(y));
            }
            leq[x][y] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::new(leq)
    }

    /// Natural order `x ≤ y ⇔ xy = x` of a semilattice.
    pub fn from_semilattice(s: &FiniteSemigroup) -> Result<Self, OrderError> {
        if !s.is_semilattice() {
            return Err(OrderError::NotSemilattice);
        }
        let leq = s
            .elements()
            .map(|x| s.elements().map(|y| s.mul(x, y) == x).collect())
            .collect();
        let mut p = Self::new(leq)?;
        p.labels = s.labels().to_vec();
        Ok(p)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n, "label count");
        self.labels = labels;
        self
    }

    pub fn chain(n: usize) -> Self {
        Self::new((0..n).map(|x| (0..n).map(|y| x <= y).collect()).collect()).expect("chain")
    }

    pub fn antichain_with_bottom(atoms: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (1..=atoms).map(|a| (0, a)).collect();
        Self::from_relations(atoms + 1, &pairs).expect("antichain with bottom")
    }

    /// Subsets of a `k`-element set ordered by inclusion.
    pub fn boolean_lattice(k: usize) -> Self {
        let n = 1usize << k;
        Self::new((0..n).map(|x| (0..n).map(|y| x & y == x).collect()).collect()).expect("boolean lattice")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn relation(&self) -> &[Vec<bool>] {
        &self.leq
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Least upper bound of the members of `set`, if it exists.
    pub fn sup(&self, set: &[usize]) -> Option<usize> {
        let uppers: Vec<usize> = (0..self.n)
            .filter(|&u| set.iter().all(|&d| self.leq[d][u]))
            .collect();
        uppers
            .iter()
            .copied()
            .find(|&u| uppers.iter().all(|&v| self.leq[u][v]))
    }

    /// Every pair of `set` has an upper bound inside `set`; empty sets are
    /// not directed.
    pub fn is_up_directed(&self, set: &[usize]) -> bool {
        !set.is_empty()
            && set.iter().all(|&a| {
                set.iter()
                    .all(|&b| set.iter().any(|&c| self.leq[a][c] && self.leq[b][c]))
            })
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.n).find(|&x| (0..self.n).all(|y| self.leq[x][y]))
    }

    pub fn up_set(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&y| self.leq[x][y]).collect()
    }
}

pub const WAY_BELOW_ENUMERATION_LIMIT: usize = 12;

/// `x ≪ y` straight from the definition: every nonempty up-directed `D`
/// whose supremum exists and lies above `y` contains some `d ≥ x`.
/// Exponential in `|P|`.
pub fn way_below_by_definition(p: &FinitePoset, x: usize, y: usize) -> Result<bool, OrderError> {
    let n = p.len();
    if n > WAY_BELOW_ENUMERATION_LIMIT {
        return Err(OrderError::TooLarge {
            n,
            limit: WAY_BELOW_ENUMERATION_LIMIT,
        });
    }
    if x >= n {
        return Err(OrderError::OutOfRange(x));
    }
    if y >= n {
        return Err(OrderError::OutOfRange(y));
    }
    for mask in 1u32..(1u32 << n) {
        let d: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if !p.is_up_directed(&d) {
            continue;
        }
        let Some(s) = p.sup(&d) else { continue };
        if p.leq(y, s) && !d.iter().any(|&e| p.leq(x, e)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WayBelowRelation {
    pub rel: Vec<Vec<bool>>,
}

impl WayBelowRelation {
    pub fn way_below(&self, x: usize, y: usize) -> bool {
        self.rel[x][y]
    }

    /// `↟x = {y : x ≪ y}`.
    pub fn way_above(&self, x: usize) -> Vec<usize> {
        (0..self.rel.len()).filter(|&y| self.rel[x][y]).collect()
    }

    /// `x ≪ y ⇒ x ≤ y`, and a minimum is way below everything.
    pub fn satisfies_basic_laws(&self, p: &FinitePoset) -> bool {
        let n = p.len();
        let below_implies_le = (0..n).all(|x| (0..n).all(|y| !self.rel[x][y] || p.leq(x, y)));
        let bottom = p.minimum().is_none_or(|z| (0..n).all(|x| self.rel[z][x]));
        below_implies_le && bottom
    }
}

/// On a finite poset every directed set contains its supremum, so `≪`
/// coincides with `≤`.
pub fn way_below_all(p: &FinitePoset) -> WayBelowRelation {
    WayBelowRelation {
        rel: p.relation().to_vec(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisCheck {
    pub is_basis: bool,
    /// First `x` whose `B_x` fails to be directed with supremum `x`.
    pub witness: Option<usize>,
}

pub fn is_basis(p: &FinitePoset, basis: &[usize]) -> BasisCheck {
    let wb = way_below_all(p);
    for x in 0..p.len() {
        let bx: Vec<usize> = basis.iter().copied().filter(|&b| wb.way_below(b, x)).collect();
        if !p.is_up_directed(&bx) || p.sup(&bx) != Some(x) {
            return BasisCheck {
                is_basis: false,
                witness: Some(x),
            };
        }
    }
    BasisCheck {
        is_basis: true,
        witness: None,
    }
}

/// `(↟x) ∖ ⋃_{f ∈ F} ↑f`, sorted.
pub fn lawson_basic(p: &FinitePoset, wb: &WayBelowRelation, x: usize, f: &[usize]) -> Vec<usize> {
    wb.way_above(x)
        .into_iter()
        .filter(|&y| !f.iter().any(|&g| p.leq(g, y)))
        .collect()
}

/// Minimum of a finite semilattice as the product of all its elements,
/// checked against every element.
pub fn minimum(s: &FiniteSemigroup) -> Result<usize, OrderError> {
    if !s.is_semilattice() {
        return Err(OrderError::NotSemilattice);
    }
    let m = s.elements().fold(0, |acc, x| s.mul(acc, x));
    if s.elements().all(|x| s.mul(m, x) == m) {
        Ok(m)
    } else {
        Err(OrderError::NotSemilattice)
    }
}

/// Infimum of a nonempty subset as its meet-fold.
pub fn infimum(s: &FiniteSemigroup, subset: &[usize]) -> Option<usize> {
    let (&first, rest) = subset.split_first()?;
    Some(rest.iter().fold(first, |acc, &x| s.mul(acc, x)))
}

/// A point of the flat semilattice `{0} ∪ {1/n : n ≥ 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlatPoint {
    Zero,
    /// `1/n`, `n ≥ 1`.
    Recip(u64),
}

impl FlatPoint {
    pub fn value(self) -> BigRational {
        match self {
            FlatPoint::Zero => BigRational::zero(),
            FlatPoint::Recip(n) => BigRational::new(BigInt::one(), BigInt::from(n)),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s == "0" {
            return Some(FlatPoint::Zero);
        }
        if s == "1" {
            return Some(FlatPoint::Recip(1));
        }
        let n: u64 = s.strip_prefix("1/")?.parse().ok()?;
        (n >= 1).then_some(FlatPoint::Recip(n))
    }
}

impl fmt::Display for FlatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlatPoint::Zero => write!(f, "0"),
            FlatPoint::Recip(1) => write!(f, "1"),
            FlatPoint::Recip(n) => write!(f, "1/{n}"),
        }
    }
}

/// Carrier order of the model: `0, 1, 1/2, 1/3, …`.
impl Ord for FlatPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (FlatPoint::Zero, FlatPoint::Zero) => Ordering::Equal,
            (FlatPoint::Zero, _) => Ordering::Less,
            (_, FlatPoint::Zero) => Ordering::Greater,
            (FlatPoint::Recip(a), FlatPoint::Recip(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for FlatPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The flat semilattice `{0} ∪ {1/n}` with `xy = x` if `x = y` else `0`,
/// metric `|x − y|`, truncated to `n ≤ N` for enumeration. Every point
/// `1/n` remains evaluable beyond the truncation, and order-theoretic
/// questions are answered in the untruncated space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LazySemilatticeModel {
    truncation: u64,
}

pub fn flat_model(truncation: u64) -> Result<LazySemilatticeModel, OrderError> {
    if truncation == 0 {
        return Err(OrderError::EmptyModel);
    }
    Ok(LazySemilatticeModel { truncation })
}

impl LazySemilatticeModel {
    pub fn truncation(&self) -> u64 {
        self.truncation
    }

    /// `0, 1, 1/2, …, 1/N`.
    pub fn points(&self) -> Vec<FlatPoint> {
        std::iter::once(FlatPoint::Zero)
            .chain((1..=self.truncation).map(FlatPoint::Recip))
            .collect()
    }

    pub fn meet(&self, x: FlatPoint, y: FlatPoint) -> FlatPoint {
        if x == y {
            x
        } else {
            FlatPoint::Zero
        }
    }

    pub fn leq(&self, x: FlatPoint, y: FlatPoint) -> bool {
        self.meet(x, y) == x
    }

    pub fn rho(&self, x: FlatPoint, y: FlatPoint) -> BigRational {
        let d = x.value() - y.value();
        if d < BigRational::zero() {
            -d
        } else {
            d
        }
    }

    pub fn minimum(&self) -> FlatPoint {
        FlatPoint::Zero
    }

    /// `0 ≪ x` and `x ≪ x`, nothing else.
    pub fn way_below(&self, x: FlatPoint, y: FlatPoint) -> bool {
        x == FlatPoint::Zero || x == y
    }

    /// `↟x` restricted to the truncated carrier.
    pub fn way_above(&self, x: FlatPoint) -> Vec<FlatPoint> {
        self.points().into_iter().filter(|&y| self.way_below(x, y)).collect()
    }

    /// `ρ(e, E ∖ ↟b)` over the untruncated space; `None` when the
    /// complement is empty (`b = 0`).
    pub fn distance_outside_way_above(&self, b: FlatPoint, e: FlatPoint) -> Option<BigRational> {
        let FlatPoint::Recip(n) = b else {
            return None;
        };
        if e != b {
            return Some(BigRational::zero());
        }
        // nearest other point of {0} ∪ {1/m}: 1/(n+1) or 1/(n-1), or 0 and 1/2 for n = 1
        Some(if n == 1 {
            BigRational::new(BigInt::one(), BigInt::from(2))
        } else {
            BigRational::new(BigInt::one(), BigInt::from(n) * BigInt::from(n + 1))
        })
    }

    /// Truncated carrier as a finite semigroup, in `points()` order.
    pub fn to_semigroup(&self) -> FiniteSemigroup {
        let pts = self.points();
        FiniteSemigroup::from_fn(pts.len(), |x, y| {
            let m = self.meet(pts[x], pts[y]);
            pts.iter().position(|&p| p == m).expect("closed")
        })
        .and_then(|s| s.with_labels(pts.iter().map(ToString::to_string)))
        .expect("flat semilattice")
    }

    pub fn to_poset(&self) -> FinitePoset {
        FinitePoset::from_semilattice(&self.to_semigroup()).expect("semilattice")
    }
}
