//! Workbench documents: strict JSON with a `kind`, a `meta` block and a
//! kind-specific `body`. Exact rationals are written as `"p/q"` strings.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;
use thiserror::Error;

use crate::c1::ChartModel;
use crate::metrics::{BowmanMetricData, FiniteCliffordModel, FlatCliffordModel, MetricError};
use crate::order::{flat_model, FinitePoset, OrderError};
use crate::semigroup::{validate_semigroup, AlgebraError, FiniteSemigroup};
use crate::strong::{validate_spec, GroupTable, RawBonding, RawGroup, RawSpec, SpecViolations};
use crate::topology::{generate_topology, mask_of, TopologicalSemigroupModel, TopologyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("schema error at {path} (line {line}, column {column}): {message}")]
pub struct SchemaError {
    pub path: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Failure to turn a parsed body into a validated model.
#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Spec(#[from] SpecViolations),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Chart(#[from] crate::c1::C1Error),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("document is a {got}, expected {expected}")]
    WrongKind { expected: Kind, got: Kind },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Cayley,
    Spec,
    Poset,
    TopologyModel,
    MetricData,
    ChartModel,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Cayley => "cayley",
            Kind::Spec => "spec",
            Kind::Poset => "poset",
            Kind::TopologyModel => "topology-model",
            Kind::MetricData => "metric-data",
            Kind::ChartModel => "chart-model",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub name: String,
    #[serde(default)]
    pub description: String,
}

/// Exact rational read from and written as a string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rational(pub BigRational);

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BigRational::from_str(s.trim())
            .map(Rational)
            .map_err(|_| serde::de::Error::custom(format!("{s:?} is not a rational \"p/q\"")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CayleyBody {
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl CayleyBody {
    pub fn from_semigroup(s: &FiniteSemigroup) -> Self {
        Self {
            table: s.rows(),
            labels: Some(s.labels().to_vec()),
        }
    }

    pub fn build(&self) -> Result<FiniteSemigroup, BuildError> {
        let s = validate_semigroup(&self.table)?;
        Ok(match &self.labels {
            Some(l) => s.with_labels(l.clone())?,
            None => s,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BondingBody {
    pub from: usize,
    pub to: usize,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecBody {
    pub semilattice: CayleyBody,
    pub groups: Vec<CayleyBody>,
    pub bonding: Vec<BondingBody>,
}

impl SpecBody {
    pub fn from_raw(raw: &RawSpec) -> Self {
        Self {
            semilattice: CayleyBody {
                table: raw.semilattice.clone(),
                labels: raw.semilattice_labels.clone(),
            },
            groups: raw
                .groups
                .iter()
                .map(|g| CayleyBody {
                    table: g.table.clone(),
                    labels: g.labels.clone(),
                })
                .collect(),
            bonding: raw
                .bonding
                .iter()
                .map(|b| BondingBody {
                    from: b.from,
                    to: b.to,
                    map: b.map.clone(),
                })
                .collect(),
        }
    }

    pub fn to_raw(&self) -> RawSpec {
        RawSpec {
            semilattice: self.semilattice.table.clone(),
            semilattice_labels: self.semilattice.labels.clone(),
            groups: self
                .groups
                .iter()
                .map(|g| RawGroup {
                    table: g.table.clone(),
                    labels: g.labels.clone(),
                })
                .collect(),
            bonding: self
                .bonding
                .iter()
                .map(|b| RawBonding {
                    from: b.from,
                    to: b.to,
                    map: b.map.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetBody {
    pub n: usize,
    /// Pairs `[x, y]` meaning `x ≤ y`; closed reflexively and transitively.
    pub relations: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl PosetBody {
    pub fn build(&self) -> Result<FinitePoset, BuildError> {
        let p = FinitePoset::from_relations(self.n, &self.relations)?;
        Ok(match &self.labels {
            Some(l) if l.len() == self.n => p.with_labels(l.clone()),
            Some(l) => {
                return Err(BuildError::Algebra(AlgebraError::LabelCount {
                    got: l.len(),
                    n: self.n,
                }))
            }
            None => p,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyBody {
    pub semigroup: CayleyBody,
    /// Element lists generating the topology under finite intersections
    /// and unions; the empty set and the carrier are always open.
    pub opens: Vec<Vec<usize>>,
}

impl TopologyBody {
    pub fn build(&self) -> Result<TopologicalSemigroupModel, BuildError> {
        let s = self.semigroup.build()?;
        let n = s.order();
        if let Some(&x) = self.opens.iter().flatten().find(|&&x| x >= n) {
            return Err(TopologyError::OutOfRange(x).into());
        }
        let mut opens: Vec<u64> = self.opens.iter().map(|o| mask_of(o)).collect();
        opens.push(crate::topology::full_mask(n));
        let t = generate_topology(n, &opens)?;
        Ok(TopologicalSemigroupModel::new(s, t)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MetricBody {
    Finite {
        spec: SpecBody,
        rho: Vec<Vec<Rational>>,
        /// Per idempotent, a matrix over its group; 0/1 metrics when omitted.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group_metrics: Option<Vec<Vec<Vec<Rational>>>>,
        /// Idempotent labels in enumeration order; default order when omitted.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        basis: Option<Vec<String>>,
        /// Accept a basis that fails the basis axioms (pseudo-metric studies).
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        partial_basis: bool,
        /// Group-element label per basis element.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base_points: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        enumerations: Option<Vec<Vec<String>>>,
    },
    /// `{0} ∪ {1/n}` enumerated up to `truncation`, `G_top` over every `1/n`.
    Flat {
        truncation: u64,
        top: CayleyBody,
        bottom: CayleyBody,
        bonding: Vec<usize>,
    },
}

/// A Bowman metric over either kind of model.
#[derive(Debug, Clone)]
pub enum MetricInstance {
    Finite(BowmanMetricData<FiniteCliffordModel>),
    Flat(BowmanMetricData<FlatCliffordModel>),
}

fn rationals(m: &[Vec<Rational>]) -> Vec<Vec<BigRational>> {
    m.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect()
}

impl MetricBody {
    pub fn build(&self) -> Result<MetricInstance, BuildError> {
        match self {
            MetricBody::Finite {
                spec,
                rho,
                group_metrics,
                basis,
                partial_basis,
                base_points,
                enumerations,
            } => {
                let spec = validate_spec(&spec.to_raw())?;
                let gm = group_metrics.as_ref().map(|g| g.iter().map(|m| rationals(m)).collect());
                let model = FiniteCliffordModel::new(spec, rationals(rho), gm)?;
                let basis = match basis {
                    Some(labels) => Some(
                        labels
                            .iter()
                            .map(|l| {
                                model
                                    .spec()
                                    .semilattice()
                                    .element_by_label(l)
                                    .map(|e| model.idx(e))
                                    .ok_or_else(|| BuildError::UnknownLabel(l.clone()))
                            })
                            .collect::<Result<Vec<_>, _>>()?,
                    ),
                    None => None,
                };
                let mut data = match (basis, partial_basis) {
                    (Some(b), true) => BowmanMetricData::with_partial_basis(model, b)?,
                    (Some(b), false) => BowmanMetricData::with_basis(model, b)?,
                    (None, _) => BowmanMetricData::new(model)?,
                };
                let group_of = |data: &BowmanMetricData<FiniteCliffordModel>, j: usize| {
                    data.model().spec().group(data.basis()[j].index).clone()
                };
                if let Some(points) = base_points {
                    let idx = points
                        .iter()
                        .enumerate()
                        .map(|(j, l)| {
                            (j < data.basis().len())
                                .then(|| group_of(&data, j).element_by_label(l))
                                .flatten()
                                .ok_or_else(|| BuildError::UnknownLabel(l.clone()))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    data = data.with_base_points(idx)?;
                }
                if let Some(enums) = enumerations {
                    let idx = enums
                        .iter()
                        .enumerate()
                        .map(|(j, ls)| {
                            ls.iter()
                                .map(|l| {
                                    (j < data.basis().len())
                                        .then(|| group_of(&data, j).element_by_label(l))
                                        .flatten()
                                        .ok_or_else(|| BuildError::UnknownLabel(l.clone()))
                                })
                                .collect::<Result<Vec<_>, _>>()
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    data = data.with_enumerations(idx)?;
                }
                Ok(MetricInstance::Finite(data))
            }
            MetricBody::Flat {
                truncation,
                top,
                bottom,
                bonding,
            } => {
                let lattice = flat_model(*truncation)?;
                let top = GroupTable::new(top.build()?)?;
                let bottom = GroupTable::new(bottom.build()?)?;
                let model = FlatCliffordModel::new(lattice, top, bottom, bonding.clone())?;
                Ok(MetricInstance::Flat(BowmanMetricData::new(model)?.with_infinite_tail(true)))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Body {
    Cayley(CayleyBody),
    Spec(SpecBody),
    Poset(PosetBody),
    TopologyModel(TopologyBody),
    MetricData(MetricBody),
    ChartModel(ChartModel),
}

impl Body {
    pub fn kind(&self) -> Kind {
        match self {
            Body::Cayley(_) => Kind::Cayley,
            Body::Spec(_) => Kind::Spec,
            Body::Poset(_) => Kind::Poset,
            Body::TopologyModel(_) => Kind::TopologyModel,
            Body::MetricData(_) => Kind::MetricData,
            Body::ChartModel(_) => Kind::ChartModel,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkbenchDocument {
    pub meta: Meta,
    pub body: Body,
}

#[derive(Serialize)]
struct DocumentOut<'a> {
    kind: Kind,
    meta: &'a Meta,
    body: &'a Body,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentIn<'a> {
    kind: Kind,
    meta: Meta,
    #[serde(borrow)]
    body: &'a RawValue,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

fn parse_body<T: for<'de> Deserialize<'de>>(text: &str, body: &str) -> Result<T, SchemaError> {
    let offset = body.as_ptr() as usize - text.as_ptr() as usize;
    let (base_line, base_col) = line_col(text, offset);
    let mut de = serde_json::Deserializer::from_str(body);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = format!("body.{}", e.path());
        let inner = e.into_inner();
        let (line, column) = if inner.line() <= 1 {
            (base_line, base_col + inner.column().saturating_sub(1))
        } else {
            (base_line + inner.line() - 1, inner.column())
        };
        SchemaError {
            path: path.trim_end_matches(".?").trim_end_matches('.').to_string(),
            line,
            column,
            message: inner.to_string(),
        }
    })
}

/// Puts arrays of scalars on one line, so tables read as rows.
fn inline_scalar_arrays(pretty: &str) -> String {
    let lines: Vec<&str> = pretty.lines().collect();
    let mut out = Vec::with_capacity(lines.len());
    let mut i = 0;
    while i < lines.len() {
        let line = lines[i];
        if line.ends_with('[') {
            let items: Vec<&str> = lines[i + 1..]
                .iter()
                .map(|l| l.trim())
                .take_while(|l| !l.starts_with(']') && !l.ends_with('[') && !l.ends_with('{') && !l.starts_with('}'))
                .collect();
            let close = lines.get(i + 1 + items.len()).map(|l| l.trim());
            if let Some(close) = close.filter(|c| c.starts_with(']')) {
                let joined: Vec<&str> = items.iter().map(|l| l.trim_end_matches(',')).collect();
                out.push(format!("{line}{}{close}", joined.join(", ")));
                i += items.len() + 2;
                continue;
            }
        }
        out.push(line.to_string());
        i += 1;
    }
    out.join("\n")
}

impl WorkbenchDocument {
    pub fn new(name: impl Into<String>, description: impl Into<String>, body: Body) -> Self {
        Self {
            meta: Meta {
                name: name.into(),
                description: description.into(),
            },
            body,
        }
    }

    pub fn kind(&self) -> Kind {
        self.body.kind()
    }

    /// Strict parse: unknown fields, wrong types and malformed rationals are
    /// rejected with a field path and position.
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        let mut de = serde_json::Deserializer::from_str(text);
        let doc: DocumentIn = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            SchemaError {
                path,
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        })?;
        de.end().map_err(|e| SchemaError {
            path: ".".into(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let raw = doc.body.get();
        let body = match doc.kind {
            Kind::Cayley => Body::Cayley(parse_body(text, raw)?),
            Kind::Spec => Body::Spec(parse_body(text, raw)?),
            Kind::Poset => Body::Poset(parse_body(text, raw)?),
            Kind::TopologyModel => Body::TopologyModel(parse_body(text, raw)?),
            Kind::MetricData => Body::MetricData(parse_body(text, raw)?),
            Kind::ChartModel => Body::ChartModel(parse_body(text, raw)?),
        };
        Ok(Self { meta: doc.meta, body })
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let out = DocumentOut {
            kind: self.kind(),
            meta: &self.meta,
            body: &self.body,
        };
        let mut s = inline_scalar_arrays(&serde_json::to_string_pretty(&out).expect("documents serialize"));
        s.push('\n');
        s
    }

    fn wrong_kind(&self, expected: Kind) -> BuildError {
        BuildError::WrongKind {
            expected,
            got: self.kind(),
        }
    }

    pub fn semigroup(&self) -> Result<FiniteSemigroup, BuildError> {
        match &self.body {
            Body::Cayley(c) => c.build(),
            _ => Err(self.wrong_kind(Kind::Cayley)),
        }
    }

    pub fn raw_spec(&self) -> Result<RawSpec, BuildError> {
        match &self.body {
            Body::Spec(s) => Ok(s.to_raw()),
            _ => Err(self.wrong_kind(Kind::Spec)),
        }
    }

    pub fn poset(&self) -> Result<FinitePoset, BuildError> {
        match &self.body {
            Body::Poset(p) => p.build(),
            _ => Err(self.wrong_kind(Kind::Poset)),
        }
    }

    pub fn topology_model(&self) -> Result<TopologicalSemigroupModel, BuildError> {
        match &self.body {
            Body::TopologyModel(t) => t.build(),
            _ => Err(self.wrong_kind(Kind::TopologyModel)),
        }
    }

    pub fn metric(&self) -> Result<MetricInstance, BuildError> {
        match &self.body {
            Body::MetricData(m) => m.build(),
            _ => Err(self.wrong_kind(Kind::MetricData)),
        }
    }

    pub fn chart(&self) -> Result<ChartModel, BuildError> {
        match &self.body {
            Body::ChartModel(c) => {
                c.validate()?;
                Ok(c.clone())
            }
            _ => Err(self.wrong_kind(Kind::ChartModel)),
        }
    }
}
