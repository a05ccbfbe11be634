//! Explicit metrics on Clifford semigroups over metrized semilattices.

mod bowman;
mod model;
mod suite;
mod yeager;

pub use bowman::{check_basis, default_basis, pow2_inv, BoundedValue, BowmanMetricData};
pub use model::{discrete_metric, CliffordModel, FiniteCliffordModel, FlatCliffordModel, Idx, Point};
pub use suite::{
    convergence_probe, metric_axiom_suite, Axiom, AxiomReport, AxiomViolation, ConvergenceReport, ConvergenceRow,
    MetricScalar, ThresholdHit,
};
pub use yeager::{disjoint_union_distance, isometry_check, YeagerMetric};

use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("invalid metric data: {0}")]
    InvalidData(String),
    #[error("not a basis: {0}")]
    NotABasis(String),
    #[error("bonding map {from} → {to} is not an isometry: d({s},{t}) changes")]
    IsometryHypothesisViolated { from: String, to: String, s: String, t: String },
    #[error("unknown point: {0}")]
    UnknownPoint(String),
    #[error("truncation must be at least 1")]
    TruncationZero,
}

pub(crate) fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}
