//! Exhaustive metric-axiom checks and convergence probes.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

/// Scalars the axiom suite can compare up to a tolerance.
pub trait MetricScalar: Clone + PartialOrd + Send + Sync + std::fmt::Display {
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn abs(&self) -> Self;
}

impl MetricScalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

impl MetricScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    NonNegativity,
    Symmetry,
    Indiscernibles,
    Triangle,
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axiom::NonNegativity => "non-negativity",
            Axiom::Symmetry => "symmetry",
            Axiom::Indiscernibles => "identity of indiscernibles",
            Axiom::Triangle => "triangle inequality",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    /// Indices into the point list.
    pub points: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub points: usize,
    pub triples: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, axiom: Axiom) -> usize {
        self.violations.iter().filter(|v| v.axiom == axiom).count()
    }
}

/// Checks the four metric axioms on every pair and triple of `points`.
/// Comparisons allow slack `tolerance`; pass zero for exact scalars.
pub fn metric_axiom_suite<P, T, D>(points: &[P], distance: D, tolerance: T) -> AxiomReport
where
    P: Sync,
    T: MetricScalar,
    D: Fn(&P, &P) -> T + Sync,
{
    let n = points.len();
    let d: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| distance(&points[i], &points[j])).collect())
        .collect();
    let zero = T::zero();
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = &d[i][j];
            if *v < zero.sub(&tolerance) {
                violations.push(AxiomViolation {
                    axiom: Axiom::NonNegativity,
                    points: vec![i, j],
                    detail: format!("d = {v}"),
                });
            }
            if j > i && v.sub(&d[j][i]).abs() > tolerance {
                violations.push(AxiomViolation {
                    axiom: Axiom::Symmetry,
                    points: vec![i, j],
                    detail: format!("{v} vs {}", d[j][i]),
                });
            }
            let vanishes = v.abs() <= tolerance;
            if (i == j) != vanishes {
                violations.push(AxiomViolation {
                    axiom: Axiom::Indiscernibles,
                    points: vec![i, j],
                    detail: format!("d = {v}"),
                });
            }
        }
    }
    let mut triangle: Vec<AxiomViolation> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let d = &d;
            let tolerance = &tolerance;
            (0..n).flat_map(move |j| {
                (0..n).filter_map(move |k| {
                    let bound = d[i][j].add(&d[j][k]).add(tolerance);
                    (d[i][k] > bound).then(|| AxiomViolation {
                        axiom: Axiom::Triangle,
                        points: vec![i, j, k],
                        detail: format!("{} > {} + {}", d[i][k], d[i][j], d[j][k]),
                    })
                })
            })
        })
        .collect();
    violations.append(&mut triangle);
    AxiomReport {
        points: n,
        triples: n * n * n,
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub k: usize,
    #[serde(serialize_with = "super::ser_rational")]
    pub distance: BigRational,
    #[serde(serialize_with = "super::ser_rational")]
    pub tail_bound: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdHit {
    pub threshold: f64,
    /// Smallest `k0` with `d(x_k, limit) + tail < threshold` for all `k0 ≤ k ≤ K`.
    pub eventually_below_from: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub thresholds: Vec<ThresholdHit>,
    pub non_increasing: bool,
}

impl ConvergenceReport {
    /// `k`, distance as a fraction and a float, tail bound.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("k\tdistance\tdistance_f64\ttail_bound\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{:.12e}\t{}",
                r.k,
                r.distance,
                r.distance.to_f64().unwrap_or(f64::NAN),
                r.tail_bound
            );
        }
        out
    }
}

/// Evaluates `distance(x_k)` for `k = 1..=K`. The closure returns the value
/// and its tail bound.
pub fn convergence_probe<F>(distance_at: F, k_max: usize, thresholds: &[f64]) -> ConvergenceReport
where
    F: Fn(usize) -> (BigRational, BigRational) + Sync,
{
    let rows: Vec<ConvergenceRow> = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let (distance, tail_bound) = distance_at(k);
            ConvergenceRow {
                k,
                distance,
                tail_bound,
            }
        })
        .collect();
    let non_increasing = rows.windows(2).all(|w| w[1].distance <= w[0].distance);
    let thresholds = thresholds
        .iter()
        .map(|&t| {
            let below = |r: &ConvergenceRow| (&r.distance + &r.tail_bound).to_f64().is_some_and(|v| v < t);
            let tail_len = rows.iter().rev().take_while(|r| below(r)).count();
            ThresholdHit {
                threshold: t,
                eventually_below_from: (tail_len > 0).then(|| k_max - tail_len + 1),
            }
        })
        .collect();
    ConvergenceReport {
        rows,
        thresholds,
        non_increasing,
    }
}
