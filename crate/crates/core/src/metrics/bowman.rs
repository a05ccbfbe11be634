//! The Bowman metric
//! `d((e,g),(f,h)) = ρ(e,f) + Σ_j 2^{-j} P_{b_j}((e,g),(f,h))`
//! over an enumerated basis of the idempotent semilattice.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::model::{abs, CliffordModel, Point};
use super::MetricError;

/// A value together with a radius containing the exact quantity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundedValue {
    #[serde(serialize_with = "super::ser_rational")]
    pub value: BigRational,
    #[serde(serialize_with = "super::ser_rational")]
    pub tail_bound: BigRational,
}

impl BoundedValue {
    pub fn exact(value: BigRational) -> Self {
        Self {
            value,
            tail_bound: BigRational::zero(),
        }
    }

    pub fn upper(&self) -> BigRational {
        &self.value + &self.tail_bound
    }

    pub fn lower(&self) -> BigRational {
        &self.value - &self.tail_bound
    }
}

impl std::fmt::Display for BoundedValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (tail {})", self.value, self.tail_bound)
    }
}

/// `2^{-k}`.
pub fn pow2_inv(k: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << k)
}

/// Model plus basis enumeration, base points and dense enumerations.
#[derive(Debug, Clone)]
pub struct BowmanMetricData<M: CliffordModel> {
    model: M,
    basis: Vec<M::Idem>,
    base_points: Vec<usize>,
    enumerations: Vec<Vec<usize>>,
    infinite_tail: bool,
}

/// Minimum first, then decreasing `|↟b|` within the enumerated carrier,
/// ties in carrier order.
pub fn default_basis<M: CliffordModel>(model: &M) -> Vec<M::Idem> {
    let min = model.minimum();
    let carrier = model.idempotents();
    let mut rest: Vec<(usize, usize, M::Idem)> = carrier
        .iter()
        .enumerate()
        .filter(|(_, b)| **b != min)
        .map(|(i, b)| (carrier.iter().filter(|x| model.way_below(b, x)).count(), i, b.clone()))
        .collect();
    rest.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    std::iter::once(min).chain(rest.into_iter().map(|(_, _, b)| b)).collect()
}

/// Checks that `B_x = {b ∈ B : b ≪ x}` is nonempty, up-directed and has
/// supremum `x` for every enumerated `x`.
pub fn check_basis<M: CliffordModel>(model: &M, basis: &[M::Idem]) -> Result<(), String> {
    let carrier = model.idempotents();
    for x in &carrier {
        let bx: Vec<&M::Idem> = basis.iter().filter(|b| model.way_below(b, x)).collect();
        if bx.is_empty() {
            return Err(format!("no basis element is way below {x}"));
        }
        for b in &bx {
            for c in &bx {
                if !bx.iter().any(|d| model.le(b, d) && model.le(c, d)) {
                    return Err(format!("B_{x} is not up-directed at {b}, {c}"));
                }
            }
        }
        let is_sup = carrier
            .iter()
            .filter(|u| bx.iter().all(|b| model.le(b, u)))
            .all(|u| model.le(x, u));
        if !is_sup {
            return Err(format!("sup B_{x} is not {x}"));
        }
    }
    Ok(())
}

impl<M: CliffordModel> BowmanMetricData<M> {
    /// Default basis, identities as base points, groups enumerated in index order.
    pub fn new(model: M) -> Result<Self, MetricError> {
        let basis = default_basis(&model);
        Self::with_basis(model, basis)
    }

    pub fn with_basis(model: M, basis: Vec<M::Idem>) -> Result<Self, MetricError> {
        if basis.first() != Some(&model.minimum()) {
            return Err(MetricError::NotABasis("the first basis element must be the minimum".into()));
        }
        for (i, b) in basis.iter().enumerate() {
            if basis[..i].contains(b) {
                return Err(MetricError::NotABasis(format!("{b} is listed twice")));
            }
        }
        check_basis(&model, &basis).map_err(MetricError::NotABasis)?;
        let base_points = basis.iter().map(|b| model.group_identity(b)).collect();
        let enumerations = basis.iter().map(|b| (0..model.group_order(b)).collect()).collect();
        Ok(Self {
            model,
            basis,
            base_points,
            enumerations,
            infinite_tail: false,
        })
    }

    /// Like [`Self::with_basis`] but skipping the basis axioms. Used to study
    /// pseudo-metrics built from too small a family.
    pub fn with_partial_basis(model: M, basis: Vec<M::Idem>) -> Result<Self, MetricError> {
        if basis.first() != Some(&model.minimum()) {
            return Err(MetricError::NotABasis("the first basis element must be the minimum".into()));
        }
        let base_points = basis.iter().map(|b| model.group_identity(b)).collect();
        let enumerations = basis.iter().map(|b| (0..model.group_order(b)).collect()).collect();
        Ok(Self {
            model,
            basis,
            base_points,
            enumerations,
            infinite_tail: false,
        })
    }

    /// Base point `c_b` per basis element.
    pub fn with_base_points(mut self, base_points: Vec<usize>) -> Result<Self, MetricError> {
        if base_points.len() != self.basis.len() {
            return Err(MetricError::InvalidData("one base point per basis element expected".into()));
        }
        for (b, &c) in self.basis.iter().zip(&base_points) {
            if c >= self.model.group_order(b) {
                return Err(MetricError::InvalidData(format!("base point {c} outside G_{b}")));
            }
        }
        self.base_points = base_points;
        Ok(self)
    }

    /// Enumeration `t_{b,1..m_b}` per basis element; each must list the group once.
    pub fn with_enumerations(mut self, enumerations: Vec<Vec<usize>>) -> Result<Self, MetricError> {
        if enumerations.len() != self.basis.len() {
            return Err(MetricError::InvalidData("one enumeration per basis element expected".into()));
        }
        for (b, t) in self.basis.iter().zip(&enumerations) {
            let mut sorted = t.clone();
            sorted.sort_unstable();
            if sorted != (0..self.model.group_order(b)).collect::<Vec<_>>() {
                return Err(MetricError::InvalidData(format!(
                    "enumeration of G_{b} must list every element once"
                )));
            }
        }
        self.enumerations = enumerations;
        Ok(self)
    }

    /// Declares the listed basis a truncation of an infinite one, so that
    /// every distance carries a nonzero tail bound.
    pub fn with_infinite_tail(mut self, infinite: bool) -> Self {
        self.infinite_tail = infinite;
        self
    }

    pub fn model(&self) -> &M {
        &self.model
    }

    pub fn basis(&self) -> &[M::Idem] {
        &self.basis
    }

    pub fn base_points(&self) -> &[usize] {
        &self.base_points
    }

    pub fn enumerations(&self) -> &[Vec<usize>] {
        &self.enumerations
    }

    pub fn has_infinite_tail(&self) -> bool {
        self.infinite_tail
    }

    fn basis_index(&self, b: &M::Idem) -> Result<usize, MetricError> {
        self.basis
            .iter()
            .position(|x| x == b)
            .ok_or_else(|| MetricError::UnknownPoint(format!("{b} is not a basis element")))
    }

    /// `a_b(e)`: 1 for the minimum, else `ρ(e, E ∖ ↟b)`.
    pub fn a_weight(&self, b: &M::Idem, e: &M::Idem) -> BigRational {
        if *b == self.basis[0] {
            return BigRational::one();
        }
        self.model
            .distance_outside_way_above(b, e)
            .unwrap_or_else(BigRational::one)
    }

    /// `φ_{e,b}(g)` when `b ≤ e`, the base point `c_b` otherwise.
    pub fn extended_bonding(&self, e: &M::Idem, b: &M::Idem, g: usize) -> Result<usize, MetricError> {
        let j = self.basis_index(b)?;
        Ok(if self.model.le(b, e) {
            self.model.bond(e, b, g)
        } else {
            self.base_points[j]
        })
    }

    pub fn p_term(&self, b: &M::Idem, p: &Point<M::Idem>, q: &Point<M::Idem>) -> Result<BigRational, MetricError> {
        let j = self.basis_index(b)?;
        Ok(self.p_term_at(j, p, q))
    }

    fn p_term_at(&self, j: usize, p: &Point<M::Idem>, q: &Point<M::Idem>) -> BigRational {
        let b = &self.basis[j];
        let ae = self.a_weight(b, &p.e);
        let af = self.a_weight(b, &q.e);
        let hat = |pt: &Point<M::Idem>| {
            if self.model.le(b, &pt.e) {
                self.model.bond(&pt.e, b, pt.g)
            } else {
                self.base_points[j]
            }
        };
        let (x, y) = (hat(p), hat(q));
        let mut total = abs(&ae - &af);
        for (k, &t) in self.enumerations[j].iter().enumerate() {
            let lhs = &ae * self.model.fiber_distance(b, x, t);
            let rhs = &af * self.model.fiber_distance(b, y, t);
            total += abs(lhs - rhs) * pow2_inv(k + 1);
        }
        total
    }

    /// Sum over the first `min(J, |B|)` basis elements with a rigorous tail radius.
    pub fn bowman_distance(
        &self,
        p: &Point<M::Idem>,
        q: &Point<M::Idem>,
        truncation: usize,
    ) -> Result<BoundedValue, MetricError> {
        if truncation == 0 {
            return Err(MetricError::TruncationZero);
        }
        let used = truncation.min(self.basis.len());
        let mut value = self.model.rho(&p.e, &q.e);
        if p == q {
            return Ok(BoundedValue::exact(value));
        }
        for j in 0..used {
            value += self.p_term_at(j, p, q) * pow2_inv(j + 1);
        }
        let tail_bound = if self.infinite_tail || truncation < self.basis.len() {
            // 0 ≤ P ≤ 2, so the omitted terms sum to at most 2 · 2^{-used}
            pow2_inv(used) * BigRational::from_integer(2.into())
        } else {
            BigRational::zero()
        };
        Ok(BoundedValue { value, tail_bound })
    }

    /// Full distance over the listed basis.
    pub fn distance(&self, p: &Point<M::Idem>, q: &Point<M::Idem>) -> BoundedValue {
        self.bowman_distance(p, q, self.basis.len().max(1)).expect("nonzero truncation")
    }

    /// Whether `g ↦ (φ_{e,b}(g))` over the basis elements `b ≪ e` is injective on `G_e`.
    pub fn eta_injective(&self, e: &M::Idem) -> bool {
        let below: Vec<&M::Idem> = self.basis.iter().filter(|b| self.model.way_below(b, e)).collect();
        let images: Vec<Vec<usize>> = (0..self.model.group_order(e))
            .map(|g| below.iter().map(|b| self.model.bond(e, b, g)).collect())
            .collect();
        let mut sorted = images.clone();
        sorted.sort();
        sorted.dedup();
        sorted.len() == images.len()
    }

    /// First basis element `b ≪ e` with `P_b > 0` between `(e,g)` and `(e,h)`.
    pub fn separation_witness(&self, e: &M::Idem, g: usize, h: usize) -> Option<(M::Idem, BigRational)> {
        let p = Point::new(e.clone(), g);
        let q = Point::new(e.clone(), h);
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, b)| self.model.way_below(b, e))
            .map(|(j, b)| (b.clone(), self.p_term_at(j, &p, &q)))
            .find(|(_, v)| !v.is_zero())
    }
}
