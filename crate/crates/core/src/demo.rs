//! The full check suite over the built-in catalog, reported as a
//! deterministic pass/fail matrix.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::c1::{
    differentiability_probe, jacobian_agreement, rigidity_report, Builtin, ChartMap, ChartModel, Prediction,
    ProbeConfig, ScanConfig,
};
use crate::catalog;
use crate::document::MetricInstance;
use crate::iso::{iso_equivalent, DEFAULT_BUDGET};
use crate::metrics::{
    disjoint_union_distance, metric_axiom_suite, BowmanMetricData, CliffordModel, FlatCliffordModel, Point,
};
use crate::order::{way_below_all, way_below_by_definition, FinitePoset, FlatPoint};
use crate::semigroup::{bonding_maps, classify, green_j_classes, pi_and_subgroups, FiniteSemigroup};
use crate::strong::{assemble, decompose, StrongSemilatticeSpec};
use crate::topology::{
    all_topologies, continuity_check, j_classes_open, mp_check, mp_equivalences, order_graph_closed,
    TopologicalSemigroupModel,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DemoCheck {
    pub criterion: u8,
    pub name: String,
    pub instances: usize,
    pub failures: usize,
    pub detail: String,
}

impl DemoCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DemoReport {
    pub checks: Vec<DemoCheck>,
}

impl DemoReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(DemoCheck::passed)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("criterion\tcheck\tinstances\tfailures\tstatus\tdetail\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                c.criterion,
                c.name,
                c.instances,
                c.failures,
                if c.passed() { "PASS" } else { "FAIL" },
                c.detail
            );
        }
        out
    }

    pub fn to_human(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "[{}] {:<width$}  {:>6} checked  {}{}",
                c.criterion,
                c.name,
                c.instances,
                if c.passed() { "pass" } else { "FAIL" },
                if c.detail.is_empty() { String::new() } else { format!("  ({})", c.detail) },
            );
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        out
    }
}

struct Tally {
    criterion: u8,
    name: &'static str,
    instances: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn new(criterion: u8, name: &'static str) -> Self {
        Self {
            criterion,
            name,
            instances: 0,
            failures: 0,
            first: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn done(self, detail: impl Into<String>) -> DemoCheck {
        let detail = match self.first {
            Some(f) => format!("first failure: {f}"),
            None => detail.into(),
        };
        DemoCheck {
            criterion: self.criterion,
            name: self.name.to_string(),
            instances: self.instances,
            failures: self.failures,
            detail,
        }
    }
}

fn algebra_checks(out: &mut Vec<DemoCheck>) {
    let catalog = catalog::semigroups();
    let mut agree = Tally::new(1, "clifford-criteria-agree");
    let mut inv_law = Tally::new(1, "inverse-of-product");
    let mut groups = Tally::new(1, "group-iff-one-idempotent");
    let mut cancel = Tally::new(1, "cancellative-inverse-is-group");
    let mut bonding = Tally::new(1, "bonding-maps-functorial");
    let mut shape = Tally::new(1, "catalog-shape");
    let mut non_clifford_inverse = 0;
    for entry in &catalog {
        let s = &entry.semigroup;
        let c = classify(s);
        agree.check(c.criteria_agree(), || entry.name.to_string());
        if let Some(inv) = &c.inverse_structure {
            let ok = s
                .elements()
                .all(|x| s.elements().all(|y| inv.inv[s.mul(x, y)] == s.mul(inv.inv[y], inv.inv[x])));
            inv_law.check(ok, || entry.name.to_string());
            let one_idem = c.idempotents.len() == 1;
            let absorbs = s
                .elements()
                .all(|x| s.elements().all(|y| s.mul(s.mul(x, y), inv.inv[y]) == x));
            groups.check(c.is_group == one_idem && one_idem == absorbs, || entry.name.to_string());
            if c.is_left_cancellative || c.is_right_cancellative {
                cancel.check(c.is_group, || entry.name.to_string());
            }
            if c.is_clifford {
                let ok = pi_and_subgroups(s, inv)
                    .and_then(|pi| bonding_maps(s, &pi))
                    .is_ok_and(|r| r.is_functorial());
                bonding.check(ok, || entry.name.to_string());
            } else {
                non_clifford_inverse += 1;
            }
        }
    }
    let max_order = catalog.iter().map(|e| e.semigroup.order()).max().unwrap_or(0);
    shape.check(catalog.len() >= 15, || format!("{} semigroups", catalog.len()));
    shape.check(max_order <= 12, || format!("order {max_order}"));
    shape.check(non_clifford_inverse >= 1, || "no non-Clifford inverse semigroup".into());
    for spec in catalog::specs() {
        if spec.value.idempotent_count() >= 2 {
            let c = classify(&assemble(&spec.value));
            cancel.check(!c.is_left_cancellative && !c.is_right_cancellative, || spec.name.to_string());
        }
    }
    out.push(shape.done(format!("{} semigroups", catalog.len())));
    out.push(agree.done(""));
    out.push(inv_law.done(""));
    out.push(groups.done(""));
    out.push(cancel.done(""));
    out.push(bonding.done(""));
}

/// Carrier blocks of the groups of an assembled spec.
pub fn group_blocks(spec: &StrongSemilatticeSpec) -> Vec<Vec<usize>> {
    (0..spec.idempotent_count())
        .map(|e| (0..spec.group(e).order()).map(|g| spec.index_of(e, g)).collect())
        .collect()
}

fn round_trip_checks(out: &mut Vec<DemoCheck>) {
    let mut rt = Tally::new(2, "assemble-decompose-round-trip");
    let mut j = Tally::new(2, "j-classes-are-groups");
    for spec in catalog::specs() {
        let s = assemble(&spec.value);
        let ok = decompose(&s)
            .map(|d| assemble(&d))
            .ok()
            .and_then(|t| iso_equivalent(&s, &t, DEFAULT_BUDGET).ok().flatten())
            .is_some();
        rt.check(ok, || spec.name.to_string());
        let mut blocks = group_blocks(&spec.value);
        blocks.sort();
        let mut classes = green_j_classes(&s);
        classes.sort();
        j.check(blocks == classes, || spec.name.to_string());
    }
    out.push(rt.done(""));
    out.push(j.done(""));
}

/// `count` random posets with up to `max` points from a fixed seed.
pub fn random_posets(count: usize, max: usize, seed: u64) -> Vec<FinitePoset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max);
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
                .filter(|_| rng.gen_bool(0.35))
                .collect::<Vec<_>>();
            FinitePoset::from_relations(n, &pairs).expect("upper-triangular relations are acyclic")
        })
        .collect()
}

/// Chains, antichains with a bottom and boolean lattices of size at most 6.
pub fn structured_posets() -> Vec<FinitePoset> {
    let mut v: Vec<FinitePoset> = (1..=6).map(FinitePoset::chain).collect();
    v.extend((0..=5).map(FinitePoset::antichain_with_bottom));
    v.extend((0..=2).map(FinitePoset::boolean_lattice));
    v
}

fn way_below_checks(out: &mut Vec<DemoCheck>) {
    let mut eq = Tally::new(3, "way-below-matches-definition");
    let mut laws = Tally::new(3, "way-below-laws");
    let posets: Vec<FinitePoset> = structured_posets().into_iter().chain(random_posets(50, 6, 7)).collect();
    for (i, p) in posets.iter().enumerate() {
        let wb = way_below_all(p);
        let n = p.len();
        let same = (0..n).all(|x| {
            (0..n).all(|y| way_below_by_definition(p, x, y).is_ok_and(|d| d == wb.way_below(x, y)))
        });
        eq.check(same, || format!("poset #{i}"));
        laws.check(wb.satisfies_basic_laws(p), || format!("poset #{i}"));
    }
    out.push(eq.done(format!("{} posets", posets.len())));
    out.push(laws.done(""));
}

fn topology_checks(out: &mut Vec<DemoCheck>) {
    let mut chain5 = Tally::new(4, "open-subgroup-conditions-agree");
    let mut mp = Tally::new(4, "mp-iff-j-classes-open");
    let mut graph = Tally::new(4, "order-graph-closed-iff-hausdorff");
    let catalog = catalog::semigroups();
    let clifford: Vec<&FiniteSemigroup> = catalog
        .iter()
        .map(|e| &e.semigroup)
        .filter(|s| s.order() <= 4 && classify(s).is_clifford)
        .collect();
    let small: Vec<&FiniteSemigroup> = catalog.iter().map(|e| &e.semigroup).filter(|s| s.order() <= 4).collect();
    let topologies: Vec<Vec<_>> = (0..=4).map(all_topologies).collect();
    let mut continuous = 0;
    for s in &small {
        let is_clifford = clifford.iter().any(|c| std::ptr::eq(*c, *s));
        for t in &topologies[s.order()] {
            let model = TopologicalSemigroupModel::new((*s).clone(), t.clone()).expect("matching carriers");
            if !continuity_check(&model).continuous() {
                continue;
            }
            mp.check(mp_check(&model) == j_classes_open(&model), || format!("{:?}", t.opens()));
            if is_clifford {
                continuous += 1;
                chain5.check(mp_equivalences(&model).is_ok_and(|r| r.all_equal()), || {
                    format!("{:?}", t.opens())
                });
            }
            if s.is_semilattice() {
                let ok = order_graph_closed(&model).is_ok_and(|r| r.order_graph_closed == r.hausdorff);
                graph.check(ok, || format!("{:?}", t.opens()));
            }
        }
    }
    out.push(chain5.done(format!("{continuous} continuous Clifford models")));
    out.push(mp.done(""));
    out.push(graph.done(""));
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Axiom suite, bounds and Lipschitz checks for one metric instance.
fn bowman_instance_checks<M: CliffordModel>(
    data: &BowmanMetricData<M>,
    axioms: &mut Tally,
    bounds: &mut Tally,
    lipschitz: &mut Tally,
    name: &str,
) {
    let pts = data.model().points();
    let rep = metric_axiom_suite(&pts, |p, q| data.distance(p, q).value, BigRational::zero());
    axioms.check(rep.passed(), || format!("{name}: {:?}", rep.violations.first()));
    let three = r(3, 1);
    let two = r(2, 1);
    for p in &pts {
        for q in &pts {
            let d = data.distance(p, q).value;
            bounds.check(!d.is_negative() && d <= three, || format!("{name}: d = {d}"));
            let p_ok = data
                .basis()
                .iter()
                .all(|b| data.p_term(b, p, q).is_ok_and(|v| !v.is_negative() && v <= two));
            bounds.check(p_ok, || format!("{name}: P out of [0, 2]"));
        }
    }
    let idem = data.model().idempotents();
    for b in data.basis() {
        for e in &idem {
            for f in &idem {
                let gap = (data.a_weight(b, e) - data.a_weight(b, f)).abs();
                lipschitz.check(gap <= data.model().rho(e, f), || format!("{name}: a_{b}({e}) vs a_{b}({f})"));
            }
        }
    }
}

fn metric_checks(out: &mut Vec<DemoCheck>) {
    let mut reference = Tally::new(5, "two-chain-reference-values");
    let mut axioms = Tally::new(5, "bowman-metric-axioms");
    let mut bounds = Tally::new(5, "distance-and-term-bounds");
    let mut lipschitz = Tally::new(5, "weights-1-lipschitz");
    let mut alt = Tally::new(5, "alternative-base-points");
    let mut separation = Tally::new(6, "separation-witness-when-injective");
    let mut failure = Tally::new(6, "definiteness-fails-without-injectivity");
    let mut non_injective_seen = 0;
    for entry in catalog::metric_bodies() {
        if entry.name == "flat50-z2-id" {
            continue;
        }
        let instance = entry.value.build().expect("catalog metric builds");
        match &instance {
            MetricInstance::Finite(data) => {
                if entry.name == "twochain" {
                    let m = data.model();
                    let p = m.point_by_label("1,a").expect("point");
                    let q = m.point_by_label("1,b").expect("point");
                    let z = m.point_by_label("0,z").expect("point");
                    reference.check(data.distance(&p, &q).value == r(3, 16), || "d((1,a),(1,b))".into());
                    reference.check(data.distance(&p, &z).value == r(21, 16), || "d((1,a),(0,z))".into());
                }
                let complete = crate::metrics::check_basis(data.model(), data.basis()).is_ok();
                if complete {
                    bowman_instance_checks(data, &mut axioms, &mut bounds, &mut lipschitz, entry.name);
                    if entry.name == "twochain-alt-base" {
                        let pts = data.model().points();
                        let rep = metric_axiom_suite(&pts, |p, q| data.distance(p, q).value, BigRational::zero());
                        alt.check(rep.passed() && data.base_points()[1] != 0, || entry.name.to_string());
                    }
                }
                separation_checks(data, &mut separation, &mut failure, &mut non_injective_seen, entry.name);
            }
            MetricInstance::Flat(data) => {
                bowman_instance_checks(data, &mut axioms, &mut bounds, &mut lipschitz, entry.name);
                separation_checks(data, &mut separation, &mut failure, &mut non_injective_seen, entry.name);
            }
        }
    }
    failure.check(non_injective_seen >= 1, || "no non-injective instance in the catalog".into());
    out.push(reference.done("3/16 and 21/16"));
    out.push(axioms.done(""));
    out.push(bounds.done(""));
    out.push(lipschitz.done(""));
    out.push(alt.done(""));
    out.push(separation.done(""));
    out.push(failure.done(format!("{non_injective_seen} non-injective instance(s)")));
}

fn separation_checks<M: CliffordModel>(
    data: &BowmanMetricData<M>,
    separation: &mut Tally,
    failure: &mut Tally,
    non_injective_seen: &mut usize,
    name: &str,
) {
    let m = data.model();
    for e in m.idempotents() {
        let n = m.group_order(&e);
        let injective = data.eta_injective(&e);
        if !injective {
            *non_injective_seen += 1;
        }
        for g in 0..n {
            for h in 0..n {
                if g == h {
                    continue;
                }
                let p = Point::new(e.clone(), g);
                let q = Point::new(e.clone(), h);
                let d = data.distance(&p, &q).value;
                if injective {
                    let witness = data.separation_witness(&e, g, h);
                    separation.check(d.is_positive() && witness.is_some(), || format!("{name} at {e}"));
                } else {
                    // collisions of η give points at distance zero
                    let collide = data
                        .basis()
                        .iter()
                        .filter(|b| m.way_below(b, &e))
                        .all(|b| m.bond(&e, b, g) == m.bond(&e, b, h));
                    if collide {
                        failure.check(d.is_zero(), || format!("{name} at {e}"));
                    }
                }
            }
        }
    }
}

/// `1/k + 2^{2 − j(k)}`, where `j(k)` is the 1-based basis position of
/// `1/k`, or `|B| + 1` past the enumerated basis.
pub fn flat_convergence_bound(data: &BowmanMetricData<FlatCliffordModel>, k: u64) -> BigRational {
    let j = data
        .basis()
        .iter()
        .position(|b| *b == FlatPoint::Recip(k))
        .map_or(data.basis().len() + 1, |i| i + 1);
    r(1, k as i64) + r(4, 1) * crate::metrics::pow2_inv(j)
}

/// Distance from `(1/k, g)` to `(0, g)` on the flat model, as value and tail.
pub fn flat_convergence_distance(data: &BowmanMetricData<FlatCliffordModel>, k: u64, g: usize) -> (BigRational, BigRational) {
    let d = data.distance(&Point::new(FlatPoint::Recip(k), g), &Point::new(FlatPoint::Zero, g));
    (d.value, d.tail_bound)
}

fn convergence_checks(out: &mut Vec<DemoCheck>) {
    let mut bound = Tally::new(7, "bowman-distance-bound");
    let mut small = Tally::new(7, "bowman-below-1e-3-by-2000");
    let mut disjoint = Tally::new(7, "disjoint-union-constant-1");
    let body = catalog::metric_bodies()
        .into_iter()
        .find(|e| e.name == "flat50-z2-id")
        .expect("flat50 in catalog")
        .value;
    let MetricInstance::Flat(data) = body.build().expect("flat50 builds") else {
        unreachable!("flat50 is a flat model")
    };
    let j = data.basis().len();
    let g = 1;
    for k in 1..=2000u64 {
        let (v, t) = flat_convergence_distance(&data, k, g);
        let upper = &v + &t;
        bound.check(upper <= flat_convergence_bound(&data, k), || format!("k = {k}"));
        if k == 2000 {
            small.check(upper < r(1, 1000), || format!("upper bound {upper}"));
        }
        let du = disjoint_union_distance(
            data.model(),
            &Point::new(FlatPoint::Recip(k), g),
            &Point::new(FlatPoint::Zero, g),
        );
        disjoint.check(du.is_one(), || format!("k = {k}"));
    }
    out.push(bound.done(format!("k = 1..2000, J = {j}")));
    out.push(small.done(""));
    out.push(disjoint.done(""));
}

fn rigidity_checks(out: &mut Vec<DemoCheck>) {
    let mut isolated = Tally::new(8, "additive-affine-isolated");
    let mut minplus = Tally::new(8, "min-plus-not-c1-continuum");
    let mut jac = Tally::new(8, "polynomial-jacobians");
    let mut consistent = Tally::new(8, "prediction-matches-scan");
    for entry in catalog::charts() {
        let model = &entry.value;
        let scan = ScanConfig {
            radius: 0.25,
            grid: 0.01,
            newton_iterations: 30,
        };
        let report = rigidity_report(model, &scan);
        let Ok(report) = report else {
            consistent.check(false, || format!("{}: {}", entry.name, report.unwrap_err()));
            continue;
        };
        consistent.check(report.consistent(), || entry.name.to_string());
        match &model.map {
            ChartMap::Builtin(Builtin::Additive | Builtin::Affine) => {
                let ok = report.operators.as_ref().is_some_and(|o| o.smallest_singular_value >= 0.9)
                    && report.prediction == Prediction::Isolated
                    && report.scan.points.len() == 1;
                isolated.check(ok, || entry.name.to_string());
            }
            ChartMap::Builtin(Builtin::MinPlus) => {
                let probe = differentiability_probe(model, &ProbeConfig::default());
                let on_axis = report.scan.points.iter().filter(|p| p[1].abs() < 1e-9).count();
                let ok = probe.is_ok_and(|p| !p.differentiable && p.worst_mismatch >= 0.5)
                    && report.operators.is_none()
                    && on_axis >= 10;
                minplus.check(ok, || format!("{on_axis} fixed points on s = 0"));
            }
            ChartMap::Polynomial(_) => {
                let gap = jacobian_agreement(model, 8);
                jac.check(gap.is_some_and(|g| g <= 1e-6), || entry.name.to_string());
            }
            ChartMap::Builtin(Builtin::DiscreteProduct) => {}
        }
    }
    out.push(isolated.done(""));
    out.push(minplus.done(""));
    out.push(jac.done(""));
    out.push(consistent.done(""));
}

pub fn run() -> DemoReport {
    let mut checks = Vec::new();
    algebra_checks(&mut checks);
    round_trip_checks(&mut checks);
    way_below_checks(&mut checks);
    topology_checks(&mut checks);
    metric_checks(&mut checks);
    convergence_checks(&mut checks);
    rigidity_checks(&mut checks);
    DemoReport { checks }
}

/// Charts in the catalog that the probe accepts.
pub fn differentiable_charts() -> Vec<ChartModel> {
    catalog::charts()
        .into_iter()
        .map(|e| e.value)
        .filter(|m| differentiability_probe(m, &ProbeConfig::default()).is_ok_and(|p| p.differentiable))
        .collect()
}
