//! Chart models of multiplication near an idempotent: differentiability
//! probing, the operators `L`, `R`, `2P − I`, and fixed-point scans of the
//! squaring map `f(u) = μ(u, u)`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum C1Error {
    #[error("point of norm {norm} lies outside the chart ball of radius {radius}")]
    EvaluationOutsideDomain { norm: f64, radius: f64 },
    #[error("multiplication is not differentiable at the origin (mismatch {mismatch:.3e})")]
    NotDifferentiable { mismatch: f64 },
    #[error("invalid chart model: {0}")]
    InvalidModel(String),
    #[error("scan radius {scan} exceeds the model radius {model}")]
    RadiusTooLarge { scan: f64, model: f64 },
    #[error("grid of {0} seeds is too large")]
    GridTooLarge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    /// `u + v`.
    Additive,
    /// `u + v + u∘v`, coordinatewise product.
    Affine,
    /// `(min(e, f), s + t)` on the first coordinate and the rest.
    MinPlus,
    /// Chart of `E × G` at an isolated idempotent: the group chart alone.
    DiscreteProduct,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coeff: f64,
    /// Exponents of `(u_1..u_n, v_1..v_n)`.
    pub exponents: Vec<u32>,
}

/// Multivariate polynomial in `2n` variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial {
    pub terms: Vec<Term>,
}

impl Polynomial {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.exponents
                    .iter()
                    .zip(x)
                    .fold(t.coeff, |acc, (&k, &xi)| acc * xi.powi(k as i32))
            })
            .sum()
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exponents[var] > 0)
            .map(|t| {
                let mut exponents = t.exponents.clone();
                exponents[var] -= 1;
                Term {
                    coeff: t.coeff * t.exponents[var] as f64,
                    exponents,
                }
            })
            .collect();
        Polynomial { terms }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartMap {
    Builtin(Builtin),
    /// One polynomial per output coordinate.
    Polynomial(Vec<Polynomial>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartModel {
    pub dim: usize,
    pub radius: f64,
    pub map: ChartMap,
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

impl ChartModel {
    pub fn builtin(kind: Builtin, dim: usize, radius: f64) -> Result<Self, C1Error> {
        Self::new(dim, radius, ChartMap::Builtin(kind))
    }

    pub fn polynomial(dim: usize, radius: f64, coords: Vec<Polynomial>) -> Result<Self, C1Error> {
        Self::new(dim, radius, ChartMap::Polynomial(coords))
    }

    pub fn new(dim: usize, radius: f64, map: ChartMap) -> Result<Self, C1Error> {
        let m = Self { dim, radius, map };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), C1Error> {
        if self.dim == 0 {
            return Err(C1Error::InvalidModel("dimension must be positive".into()));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(C1Error::InvalidModel("radius must be positive".into()));
        }
        match &self.map {
            ChartMap::Builtin(Builtin::MinPlus) if self.dim < 2 => {
                return Err(C1Error::InvalidModel("min-plus needs dimension at least 2".into()))
            }
            ChartMap::Polynomial(coords) => {
                if coords.len() != self.dim {
                    return Err(C1Error::InvalidModel(format!(
                        "{} coordinate polynomials for dimension {}",
                        coords.len(),
                        self.dim
                    )));
                }
                for t in coords.iter().flat_map(|p| &p.terms) {
                    if t.exponents.len() != 2 * self.dim {
                        return Err(C1Error::InvalidModel(format!(
                            "term has {} exponents, expected {}",
                            t.exponents.len(),
                            2 * self.dim
                        )));
                    }
                    if !t.coeff.is_finite() {
                        return Err(C1Error::InvalidModel("non-finite coefficient".into()));
                    }
                }
            }
            _ => {}
        }
        let zero = vec![0.0; self.dim];
        let at_origin = self.mu(&zero, &zero)?;
        if norm(&at_origin) > 1e-12 {
            return Err(C1Error::InvalidModel("μ(0,0) ≠ 0".into()));
        }
        Ok(())
    }

    fn check_domain(&self, x: &[f64]) -> Result<(), C1Error> {
        let n = norm(x);
        if n > self.radius * (1.0 + 1e-12) || !n.is_finite() {
            return Err(C1Error::EvaluationOutsideDomain {
                norm: n,
                radius: self.radius,
            });
        }
        Ok(())
    }

    pub fn mu(&self, u: &[f64], v: &[f64]) -> Result<Vec<f64>, C1Error> {
        self.check_domain(u)?;
        self.check_domain(v)?;
        Ok(self.mu_unchecked(u, v))
    }

    fn mu_unchecked(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        match &self.map {
            ChartMap::Builtin(Builtin::Additive | Builtin::DiscreteProduct) => {
                u.iter().zip(v).map(|(a, b)| a + b).collect()
            }
            ChartMap::Builtin(Builtin::Affine) => u.iter().zip(v).map(|(a, b)| a + b + a * b).collect(),
            ChartMap::Builtin(Builtin::MinPlus) => std::iter::once(u[0].min(v[0]))
                .chain(u[1..].iter().zip(&v[1..]).map(|(a, b)| a + b))
                .collect(),
            ChartMap::Polynomial(coords) => {
                let x: Vec<f64> = u.iter().chain(v).copied().collect();
                coords.iter().map(|p| p.eval(&x)).collect()
            }
        }
    }

    /// `μ` on the concatenated vector `(u, v)`.
    fn mu_joint(&self, x: &[f64]) -> Result<Vec<f64>, C1Error> {
        self.mu(&x[..self.dim], &x[self.dim..])
    }

    /// Exact `n × 2n` Jacobian at `(u, v)` where the model is smooth.
    pub fn exact_jacobian(&self, u: &[f64], v: &[f64]) -> Option<DMatrix<f64>> {
        let n = self.dim;
        match &self.map {
            ChartMap::Builtin(Builtin::Additive | Builtin::DiscreteProduct) => {
                Some(DMatrix::from_fn(n, 2 * n, |i, j| if j % n == i { 1.0 } else { 0.0 }))
            }
            ChartMap::Builtin(Builtin::Affine) => Some(DMatrix::from_fn(n, 2 * n, |i, j| match j {
                j if j == i => 1.0 + v[i],
                j if j == n + i => 1.0 + u[i],
                _ => 0.0,
            })),
            ChartMap::Builtin(Builtin::MinPlus) => None,
            ChartMap::Polynomial(coords) => {
                let x: Vec<f64> = u.iter().chain(v).copied().collect();
                Some(DMatrix::from_fn(n, 2 * n, |i, j| coords[i].derivative(j).eval(&x)))
            }
        }
    }

    /// Richardson-extrapolated central-difference Jacobian at `(u, v)`.
    pub fn fd_jacobian(&self, u: &[f64], v: &[f64], h: f64) -> Result<DMatrix<f64>, C1Error> {
        let n = self.dim;
        let x: Vec<f64> = u.iter().chain(v).copied().collect();
        let mut jac = DMatrix::zeros(n, 2 * n);
        for j in 0..2 * n {
            let central = |step: f64| -> Result<Vec<f64>, C1Error> {
                let mut plus = x.clone();
                let mut minus = x.clone();
                plus[j] += step;
                minus[j] -= step;
                let a = self.mu_joint(&plus)?;
                let b = self.mu_joint(&minus)?;
                Ok(a.iter().zip(&b).map(|(p, m)| (p - m) / (2.0 * step)).collect())
            };
            let coarse = central(h)?;
            let fine = central(h / 2.0)?;
            for i in 0..n {
                jac[(i, j)] = (4.0 * fine[i] - coarse[i]) / 3.0;
            }
        }
        Ok(jac)
    }
}

/// Directions and steps for [`differentiability_probe`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    /// Directions in `ℝⁿ × ℝⁿ`; `None` means unit vectors plus all pairwise sums.
    pub directions: Option<Vec<Vec<f64>>>,
    /// Decreasing step sizes.
    pub steps: Vec<f64>,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            directions: None,
            steps: vec![1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeVerdict {
    pub differentiable: bool,
    /// Largest one-sided mismatch at the smallest step.
    pub worst_mismatch: f64,
    pub worst_direction: Vec<f64>,
    pub noise_floor: f64,
    /// Largest failure of `D(w₁ + w₂) = D(w₁) + D(w₂)`.
    pub linearity_defect: f64,
}

fn unit(dim: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    e[i] = 1.0;
    e
}

fn default_directions(n2: usize) -> (Vec<Vec<f64>>, Vec<(usize, usize, usize)>) {
    let mut dirs: Vec<Vec<f64>> = (0..n2).map(|i| unit(n2, i)).collect();
    let mut sums = Vec::new();
    for i in 0..n2 {
        for j in i + 1..n2 {
            let mut w = unit(n2, i);
            w[j] = 1.0;
            sums.push((i, j, dirs.len()));
            dirs.push(w);
        }
    }
    (dirs, sums)
}

/// Compares one-sided difference quotients of `μ` at the origin along each
/// direction, and checks that the central estimates are additive.
pub fn differentiability_probe(model: &ChartModel, config: &ProbeConfig) -> Result<ProbeVerdict, C1Error> {
    let n2 = 2 * model.dim;
    let (dirs, sums) = match &config.directions {
        Some(d) => {
            if d.iter().any(|w| w.len() != n2) {
                return Err(C1Error::InvalidModel(format!("directions must have length {n2}")));
            }
            (d.clone(), Vec::new())
        }
        None => default_directions(n2),
    };
    let steps = &config.steps;
    if steps.is_empty() || steps.windows(2).any(|w| w[1] >= w[0]) || steps[steps.len() - 1] <= 0.0 {
        return Err(C1Error::InvalidModel("steps must be positive and decreasing".into()));
    }
    let zero = vec![0.0; n2];
    let base = model.mu_joint(&zero)?;
    let t_max = steps[0];
    let t_min = steps[steps.len() - 1];
    let split = (t_max * t_min).sqrt();

    let mut worst = (0.0f64, Vec::new());
    let mut floor = 0.0f64;
    let mut central = Vec::with_capacity(dirs.len());
    for w in &dirs {
        let mut mismatches = Vec::with_capacity(steps.len());
        let mut last_central = Vec::new();
        let mut scale = 1.0f64;
        for &t in steps {
            let fwd: Vec<f64> = w.iter().map(|x| x * t).collect();
            let bwd: Vec<f64> = w.iter().map(|x| -x * t).collect();
            let a = model.mu_joint(&fwd)?;
            let b = model.mu_joint(&bwd)?;
            let qp: Vec<f64> = a.iter().zip(&base).map(|(x, y)| (x - y) / t).collect();
            let qm: Vec<f64> = b.iter().zip(&base).map(|(x, y)| (x - y) / -t).collect();
            let diff: Vec<f64> = qp.iter().zip(&qm).map(|(x, y)| x - y).collect();
            mismatches.push((t, norm(&diff)));
            scale = scale.max(norm(&a)).max(norm(&b));
            last_central = qp.iter().zip(&qm).map(|(x, y)| (x + y) / 2.0).collect();
        }
        // a smooth map has mismatch O(t): extrapolate the coarse steps down to t_min
        let trend = mismatches
            .iter()
            .filter(|(t, _)| *t >= split)
            .map(|(t, m)| m * t_min / t)
            .fold(0.0, f64::max);
        let roundoff = 64.0 * f64::EPSILON * (1.0 + scale) / t_min;
        floor = floor.max(trend + roundoff);
        let m_min = mismatches[mismatches.len() - 1].1;
        if m_min > worst.0 || worst.1.is_empty() {
            worst = (m_min, w.clone());
        }
        central.push(last_central);
    }
    let linearity_defect = sums
        .iter()
        .map(|&(i, j, k)| {
            let d: Vec<f64> = (0..model.dim)
                .map(|c| central[k][c] - central[i][c] - central[j][c])
                .collect();
            norm(&d)
        })
        .fold(0.0, f64::max);
    let threshold = 10.0 * floor;
    Ok(ProbeVerdict {
        differentiable: worst.0 <= threshold && linearity_defect <= threshold.max(1e-6),
        worst_mismatch: worst.0,
        worst_direction: worst.1,
        noise_floor: floor,
        linearity_defect,
    })
}

/// Step for the Richardson central differences of `L` and `R`.
pub const JACOBIAN_STEP: f64 = 1e-3;

/// `L = D₁μ(0,0)` and `R = D₂μ(0,0)`.
pub fn bilinear_parts(model: &ChartModel) -> Result<(DMatrix<f64>, DMatrix<f64>), C1Error> {
    let verdict = differentiability_probe(model, &ProbeConfig::default())?;
    if !verdict.differentiable {
        return Err(C1Error::NotDifferentiable {
            mismatch: verdict.worst_mismatch,
        });
    }
    Ok(split_jacobian(model, &model.fd_jacobian(&vec![0.0; model.dim], &vec![0.0; model.dim], JACOBIAN_STEP)?))
}

fn split_jacobian(model: &ChartModel, jac: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = model.dim;
    (jac.columns(0, n).into_owned(), jac.columns(n, n).into_owned())
}

/// Largest entrywise gap between finite-difference and exact Jacobians over
/// the origin and a fixed set of points in half the ball.
pub fn jacobian_agreement(model: &ChartModel, samples: usize) -> Option<f64> {
    let n = model.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut points = vec![(vec![0.0; n], vec![0.0; n])];
    let r = model.radius / (2.0 * (n as f64).sqrt());
    for _ in 0..samples {
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-r..r)).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-r..r)).collect();
        points.push((u, v));
    }
    let mut worst = 0.0f64;
    for (u, v) in &points {
        let exact = model.exact_jacobian(u, v)?;
        let fd = model.fd_jacobian(u, v, JACOBIAN_STEP.min(model.radius / 4.0)).ok()?;
        worst = worst.max((exact - fd).amax());
    }
    Some(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Prediction {
    /// `2P − I` invertible: the idempotent is isolated.
    Isolated,
    /// `2P − I` singular.
    NonIsolated,
    /// Differentiable, but `L ≠ R` or they are not projections.
    OutOfTheoremScope,
    /// Not differentiable at the origin: no operator is computed.
    NotApplicable,
}

impl std::fmt::Display for Prediction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Prediction::Isolated => "isolated idempotent",
            Prediction::NonIsolated => "non-isolated idempotent",
            Prediction::OutOfTheoremScope => "out of theorem scope",
            Prediction::NotApplicable => "not applicable",
        })
    }
}

pub const PROJECTION_TOLERANCE: f64 = 1e-8;
pub const INVOLUTION_TOLERANCE: f64 = 1e-6;
pub const SINGULAR_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Operators {
    pub l: Vec<Vec<f64>>,
    pub r: Vec<Vec<f64>>,
    pub l_projection_defect: f64,
    pub r_projection_defect: f64,
    /// `‖L − R‖`.
    pub centrality_defect: f64,
    /// `L + R − I`, which is `2P − I` for `P = (L + R)/2`.
    pub dh0: Vec<Vec<f64>>,
    pub involution_defect: f64,
    pub smallest_singular_value: f64,
    pub dh0_invertible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RigidityReport {
    pub probe: ProbeVerdict,
    /// `None` when the probe fails.
    pub operators: Option<Operators>,
    pub prediction: Prediction,
    pub scan: ScanResult,
}

impl RigidityReport {
    /// Whether the scan agrees with the prediction: a single fixed point
    /// exactly when the idempotent is predicted isolated.
    pub fn consistent(&self) -> bool {
        match (&self.operators, self.prediction) {
            (_, Prediction::NotApplicable) => true,
            (Some(op), _) => op.dh0_invertible == (self.scan.points.len() == 1),
            (None, _) => false,
        }
    }
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Spectral norm.
fn op_norm(m: &DMatrix<f64>) -> f64 {
    m.clone().svd(false, false).singular_values.max()
}

fn operators(l: &DMatrix<f64>, r: &DMatrix<f64>) -> Operators {
    let n = l.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let dh0 = l + r - &id;
    let sv = dh0.clone().svd(false, false).singular_values;
    let smallest = sv.min();
    Operators {
        l: to_rows(l),
        r: to_rows(r),
        l_projection_defect: op_norm(&(l * l - l)),
        r_projection_defect: op_norm(&(r * r - r)),
        centrality_defect: op_norm(&(l - r)),
        involution_defect: op_norm(&(&dh0 * &dh0 - &id)),
        smallest_singular_value: smallest,
        dh0_invertible: smallest > SINGULAR_TOLERANCE,
        dh0: to_rows(&dh0),
    }
}

/// Probe, operators, prediction and a fixed-point scan.
pub fn rigidity_report(model: &ChartModel, scan: &ScanConfig) -> Result<RigidityReport, C1Error> {
    let probe = differentiability_probe(model, &ProbeConfig::default())?;
    let scan = fixed_point_scan(model, scan)?;
    if !probe.differentiable {
        return Ok(RigidityReport {
            probe,
            operators: None,
            prediction: Prediction::NotApplicable,
            scan,
        });
    }
    let zero = vec![0.0; model.dim];
    let (l, r) = split_jacobian(model, &model.fd_jacobian(&zero, &zero, JACOBIAN_STEP)?);
    let ops = operators(&l, &r);
    let in_scope = ops.l_projection_defect <= PROJECTION_TOLERANCE
        && ops.r_projection_defect <= PROJECTION_TOLERANCE
        && ops.centrality_defect <= PROJECTION_TOLERANCE;
    if in_scope && ops.involution_defect > INVOLUTION_TOLERANCE {
        return Err(C1Error::InvalidModel(format!(
            "(2P − I)² = I fails by {:.3e} although P is a central projection",
            ops.involution_defect
        )));
    }
    let prediction = match (in_scope, ops.dh0_invertible) {
        (false, _) => Prediction::OutOfTheoremScope,
        (true, true) => Prediction::Isolated,
        (true, false) => Prediction::NonIsolated,
    };
    Ok(RigidityReport {
        probe,
        operators: Some(ops),
        prediction,
        scan,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanConfig {
    pub radius: f64,
    pub grid: f64,
    pub newton_iterations: usize,
}

impl ScanConfig {
    /// Radius `min(0.25, model radius / 2)`, grid 0.01, 30 iterations.
    pub fn for_model(model: &ChartModel) -> Self {
        Self {
            radius: (model.radius / 2.0).min(0.25),
            grid: 0.01,
            newton_iterations: 30,
        }
    }
}

pub const DEDUP_TOLERANCE: f64 = 1e-6;
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
pub const MAX_SEEDS: usize = 400_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub config: ScanConfig,
    pub seeds: usize,
    /// Seeds whose Newton run left the domain or stalled above the residual tolerance.
    pub diverged: usize,
    /// Distinct fixed points of `f` in the ball, lexicographically sorted.
    pub points: Vec<Vec<f64>>,
}

fn displacement(model: &ChartModel, u: &[f64]) -> Result<DVector<f64>, C1Error> {
    let f = model.mu(u, u)?;
    Ok(DVector::from_iterator(u.len(), f.iter().zip(u).map(|(a, b)| a - b)))
}

fn displacement_jacobian(model: &ChartModel, u: &[f64]) -> Result<DMatrix<f64>, C1Error> {
    let n = u.len();
    let h = 1e-6;
    let mut jac = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut p = u.to_vec();
        let mut m = u.to_vec();
        p[j] += h;
        m[j] -= h;
        let col = (displacement(model, &p)? - displacement(model, &m)?) / (2.0 * h);
        jac.set_column(j, &col);
    }
    Ok(jac)
}

/// Damped Newton with a pseudo-inverse step. Returns the limit if its
/// residual is below tolerance.
fn newton(model: &ChartModel, seed: &[f64], iterations: usize) -> Option<Vec<f64>> {
    let mut u = seed.to_vec();
    let mut h = displacement(model, &u).ok()?;
    for _ in 0..iterations {
        if h.norm() < 1e-14 {
            break;
        }
        let jac = displacement_jacobian(model, &u).ok()?;
        let step = jac.pseudo_inverse(1e-10).ok()? * &h;
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let cand: Vec<f64> = u.iter().zip(step.iter()).map(|(x, s)| x - alpha * s).collect();
            if let Ok(hc) = displacement(model, &cand) {
                if hc.norm() < h.norm() {
                    u = cand;
                    h = hc;
                    accepted = true;
                    break;
                }
            }
            alpha /= 2.0;
        }
        if !accepted {
            break;
        }
    }
    (h.norm() < RESIDUAL_TOLERANCE).then_some(u)
}

/// Seeds a grid in the ball, runs Newton on `H(u) = μ(u,u) − u` from each
/// seed, and collects the distinct fixed points inside the ball.
pub fn fixed_point_scan(model: &ChartModel, config: &ScanConfig) -> Result<ScanResult, C1Error> {
    if config.radius > model.radius {
        return Err(C1Error::RadiusTooLarge {
            scan: config.radius,
            model: model.radius,
        });
    }
    if !(config.grid > 0.0 && config.radius >= 0.0) {
        return Err(C1Error::InvalidModel("grid step must be positive".into()));
    }
    let n = model.dim;
    let k = (config.radius / config.grid + 1e-9).floor() as i64;
    let per_axis = (2 * k + 1) as usize;
    let total = per_axis.checked_pow(n as u32).filter(|&t| t <= MAX_SEEDS);
    let Some(total) = total else {
        return Err(C1Error::GridTooLarge(per_axis.saturating_pow(n as u32)));
    };
    let seeds: Vec<Vec<f64>> = (0..total)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let i = (idx % per_axis) as i64 - k;
                    idx /= per_axis;
                    i as f64 * config.grid
                })
                .collect::<Vec<f64>>()
        })
        .filter(|s| norm(s) <= config.radius + 1e-12)
        .collect();
    let outcomes: Vec<Option<Vec<f64>>> = seeds
        .par_iter()
        .map(|s| newton(model, s, config.newton_iterations).filter(|u| norm(u) <= config.radius + 1e-9))
        .collect();
    let diverged = outcomes.iter().filter(|o| o.is_none()).count();
    let mut points: Vec<Vec<f64>> = Vec::new();
    for u in outcomes.into_iter().flatten() {
        let dup = points
            .iter()
            .any(|p| p.iter().zip(&u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) < DEDUP_TOLERANCE);
        if !dup {
            points.push(u);
        }
    }
    for p in &mut points {
        for x in p.iter_mut() {
            // avoid "-0" in reports
            if x.abs() < 1e-15 {
                *x = 0.0;
            }
        }
    }
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    Ok(ScanResult {
        config: *config,
        seeds: seeds.len(),
        diverged,
        points,
    })
}

/// `x_i` as a polynomial in `vars` variables.
pub fn monomial(coeff: f64, vars: usize, powers: &[(usize, u32)]) -> Term {
    let mut exponents = vec![0; vars];
    for &(i, k) in powers {
        exponents[i] = k;
    }
    Term { coeff, exponents }
}

/// `u + v + u∘v` as explicit polynomials.
pub fn affine_polynomial(dim: usize, radius: f64) -> ChartModel {
    let coords = (0..dim)
        .map(|i| Polynomial {
            terms: vec![
                monomial(1.0, 2 * dim, &[(i, 1)]),
                monomial(1.0, 2 * dim, &[(dim + i, 1)]),
                monomial(1.0, 2 * dim, &[(i, 1), (dim + i, 1)]),
            ],
        })
        .collect();
    ChartModel::polynomial(dim, radius, coords).expect("valid polynomial model")
}

/// `μ(u, v) = Pu + Pv` for a diagonal 0/1 projection `P`.
pub fn projection_polynomial(diagonal: &[bool], radius: f64) -> ChartModel {
    let dim = diagonal.len();
    let coords = (0..dim)
        .map(|i| Polynomial {
            terms: if diagonal[i] {
                vec![
                    monomial(1.0, 2 * dim, &[(i, 1)]),
                    monomial(1.0, 2 * dim, &[(dim + i, 1)]),
                ]
            } else {
                Vec::new()
            },
        })
        .collect();
    ChartModel::polynomial(dim, radius, coords).expect("valid polynomial model")
}

/// `μ(u, v) = u`: a left-zero band, not a Clifford chart.
pub fn left_zero_polynomial(dim: usize, radius: f64) -> ChartModel {
    let coords = (0..dim)
        .map(|i| Polynomial {
            terms: vec![monomial(1.0, 2 * dim, &[(i, 1)])],
        })
        .collect();
    ChartModel::polynomial(dim, radius, coords).expect("valid polynomial model")
}
