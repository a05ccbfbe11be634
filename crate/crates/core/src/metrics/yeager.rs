//! Metrics that compare points inside a common lower group, and the
//! disjoint-union metric.

use num_rational::BigRational;
use num_traits::One;

use super::model::{CliffordModel, Point};
use super::MetricError;

/// `ρ(e,f) + d_{ef}(φ_{e,ef}(s), φ_{f,ef}(t))`, defined only when every
/// bonding map is an isometry.
#[derive(Debug, Clone)]
pub struct YeagerMetric<M: CliffordModel> {
    model: M,
}

/// First pair `(s, t)` of `G_f` whose distance changes under `φ_{f,e}`.
pub fn isometry_check<M: CliffordModel>(model: &M) -> Result<(), MetricError> {
    let idem = model.idempotents();
    for f in &idem {
        for e in idem.iter().filter(|e| model.le(e, f) && *e != f) {
            let n = model.group_order(f);
            for s in 0..n {
                for t in 0..n {
                    let before = model.fiber_distance(f, s, t);
                    let after = model.fiber_distance(e, model.bond(f, e, s), model.bond(f, e, t));
                    if before != after {
                        return Err(MetricError::IsometryHypothesisViolated {
                            from: f.to_string(),
                            to: e.to_string(),
                            s: model.group_label(f, s),
                            t: model.group_label(f, t),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

impl<M: CliffordModel> YeagerMetric<M> {
    pub fn new(model: M) -> Result<Self, MetricError> {
        isometry_check(&model)?;
        Ok(Self { model })
    }

    pub fn model(&self) -> &M {
        &self.model
    }

    pub fn distance(&self, p: &Point<M::Idem>, q: &Point<M::Idem>) -> BigRational {
        let m = &self.model;
        let ef = m.meet(&p.e, &q.e);
        m.rho(&p.e, &q.e) + m.fiber_distance(&ef, m.bond(&p.e, &ef, p.g), m.bond(&q.e, &ef, q.g))
    }
}

/// `d_e(s,t)` when `e = f`, and 1 otherwise.
pub fn disjoint_union_distance<M: CliffordModel>(model: &M, p: &Point<M::Idem>, q: &Point<M::Idem>) -> BigRational {
    if p.e == q.e {
        model.fiber_distance(&p.e, p.g, q.g)
    } else {
        BigRational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::model::{FiniteCliffordModel, FlatCliffordModel};
    use crate::order::{flat_model, FlatPoint};
    use crate::semigroup::FiniteSemigroup;
    use crate::strong::{product_spec, GroupTable, StrongSemilatticeSpec};

    #[test]
    fn non_isometric_bonding_is_refused() {
        let e = FiniteSemigroup::from_fn(2, |x, y| x.min(y)).unwrap();
        let spec =
            StrongSemilatticeSpec::from_parts(e, vec![GroupTable::cyclic(2), GroupTable::cyclic(4)], &[(1, 0, vec![0, 1, 0, 1])])
                .unwrap();
        let err = YeagerMetric::new(FiniteCliffordModel::discrete(spec)).unwrap_err();
        assert!(matches!(err, MetricError::IsometryHypothesisViolated { .. }));
    }

    #[test]
    fn product_reduces_to_rho() {
        let e = FiniteSemigroup::from_fn(3, |x, y| x.min(y)).unwrap();
        let spec = product_spec(&e, &GroupTable::cyclic(3)).unwrap();
        let y = YeagerMetric::new(FiniteCliffordModel::discrete(spec)).unwrap();
        let m = y.model();
        for g in 0..3 {
            let p = Point::new(m.idx(2), g);
            let q = Point::new(m.idx(0), g);
            assert_eq!(y.distance(&p, &q), m.rho(&p.e, &q.e));
        }
        let p = Point::new(m.idx(1), 0);
        let q = Point::new(m.idx(1), 2);
        assert_eq!(y.distance(&p, &q), BigRational::one());
    }

    #[test]
    fn disjoint_union_cases() {
        let m = FlatCliffordModel::identity_bonding(flat_model(4).unwrap(), GroupTable::cyclic(2));
        let a = Point::new(FlatPoint::Recip(3), 0);
        let b = Point::new(FlatPoint::Recip(3), 1);
        let z = Point::new(FlatPoint::Zero, 0);
        assert_eq!(disjoint_union_distance(&m, &a, &b), BigRational::one());
        assert_eq!(disjoint_union_distance(&m, &a, &a), BigRational::from_integer(0.into()));
        assert_eq!(disjoint_union_distance(&m, &a, &z), BigRational::one());
    }
}
