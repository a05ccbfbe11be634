//! Acceptance criteria 1–9. Each criterion is checked against oracles
//! written here from the definitions, independent of the library's own
//! checking code, and reports one PASS/FAIL line.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use clifford_core::c1::{differentiability_probe, rigidity_report, ChartMap, ChartModel, Polynomial, ProbeConfig, ScanConfig};
use clifford_core::catalog;
use clifford_core::demo;
use clifford_core::document::MetricInstance;
use clifford_core::metrics::{
    disjoint_union_distance, BowmanMetricData, CliffordModel, FiniteCliffordModel, FlatCliffordModel, Point,
};
use clifford_core::order::{way_below_all, way_below_by_definition, FinitePoset, FlatPoint};
use clifford_core::semigroup::{classify, green_j_classes, FiniteSemigroup};
use clifford_core::strong::{assemble, decompose};
use clifford_core::topology::{
    all_topologies, continuity_check, j_classes_open, mp_check, mp_equivalences, order_graph_closed, FiniteTopology,
    TopologicalSemigroupModel,
};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

type Q = BigRational;
type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn half_pow(k: usize) -> Q {
    (0..k).fold(Q::one(), |acc, _| acc / q(2, 1))
}

fn catalog_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

fn clifford(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_clifford"))
        .args(args)
        .current_dir(catalog_dir())
        .output()
        .expect("run clifford");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 output"))
}

// ---------------------------------------------------------------- algebra

/// Unique inverse of every element, or `None`.
fn inverses(s: &FiniteSemigroup) -> Option<Vec<usize>> {
    let n = s.order();
    (0..n)
        .map(|x| {
            let c: Vec<usize> = (0..n)
                .filter(|&y| s.mul(s.mul(x, y), x) == x && s.mul(s.mul(y, x), y) == y)
                .collect();
            (c.len() == 1).then(|| c[0])
        })
        .collect()
}

fn is_group(s: &FiniteSemigroup) -> bool {
    let n = s.order();
    let Some(e) = (0..n).find(|&e| (0..n).all(|x| s.mul(e, x) == x && s.mul(x, e) == x)) else {
        return false;
    };
    (0..n).all(|x| (0..n).any(|y| s.mul(x, y) == e && s.mul(y, x) == e))
}

fn idempotent_count(s: &FiniteSemigroup) -> usize {
    (0..s.order()).filter(|&x| s.mul(x, x) == x).count()
}

fn left_cancellative(s: &FiniteSemigroup) -> bool {
    let n = s.order();
    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| s.mul(a, b) != s.mul(a, c) || b == c)))
}

fn right_cancellative(s: &FiniteSemigroup) -> bool {
    let n = s.order();
    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| s.mul(b, a) != s.mul(c, a) || b == c)))
}

/// Two-sided principal ideal `S¹xS¹`.
fn ideal(s: &FiniteSemigroup, x: usize) -> BTreeSet<usize> {
    let n = s.order();
    let mut out = BTreeSet::from([x]);
    for a in 0..n {
        out.insert(s.mul(a, x));
        out.insert(s.mul(x, a));
        for b in 0..n {
            out.insert(s.mul(s.mul(a, x), b));
        }
    }
    out
}

fn j_partition(s: &FiniteSemigroup) -> BTreeSet<BTreeSet<usize>> {
    let ideals: Vec<_> = (0..s.order()).map(|x| ideal(s, x)).collect();
    (0..s.order())
        .map(|x| (0..s.order()).filter(|&y| ideals[y] == ideals[x]).collect())
        .collect()
}

/// Classes `{y : yy⁻¹ = xx⁻¹}`.
fn group_fibers(s: &FiniteSemigroup, inv: &[usize]) -> BTreeSet<BTreeSet<usize>> {
    let pi: Vec<usize> = (0..s.order()).map(|x| s.mul(x, inv[x])).collect();
    (0..s.order())
        .map(|x| (0..s.order()).filter(|&y| pi[y] == pi[x]).collect())
        .collect()
}

fn criterion_1() -> Outcome {
    let cat = catalog::semigroups();
    ensure!(cat.len() >= 15, "catalog has {} semigroups", cat.len());
    ensure!(cat.iter().all(|c| c.semigroup.order() <= 12), "catalog order above 12");
    let mut kinds = [false; 5];
    let mut cancellative_checked = 0;
    for c in &cat {
        let s = &c.semigroup;
        let n = s.order();
        let class = classify(s);
        let inv = inverses(s);
        ensure!(class.is_inverse == inv.is_some(), "{}: inverse flag", c.name);
        let commutative_idem = {
            let e: Vec<usize> = (0..n).filter(|&x| s.mul(x, x) == x).collect();
            e.iter().all(|&a| e.iter().all(|&b| s.mul(a, b) == s.mul(b, a)))
        };
        let semilattice = commutative_idem && idempotent_count(s) == n;
        kinds[0] |= is_group(s);
        kinds[1] |= semilattice;
        kinds[2] |= n >= 2 && (0..n).all(|x| (0..n).all(|y| s.mul(x, y) == x));
        ensure!(
            class.is_left_cancellative == left_cancellative(s) && class.is_right_cancellative == right_cancellative(s),
            "{}: cancellativity flags",
            c.name
        );
        let Some(inv) = inv else { continue };
        let by_inverses = (0..n).all(|x| s.mul(x, inv[x]) == s.mul(inv[x], x));
        let central = (0..n)
            .filter(|&e| s.mul(e, e) == e)
            .all(|e| (0..n).all(|x| s.mul(e, x) == s.mul(x, e)));
        ensure!(by_inverses == central, "{}: the two Clifford criteria differ in the oracle", c.name);
        ensure!(
            class.clifford_by_inverses == by_inverses
                && class.clifford_by_central_idempotents == central
                && class.is_clifford == by_inverses
                && class.criteria_agree(),
            "{}: Clifford criteria",
            c.name
        );
        kinds[3] |= !by_inverses;
        for x in 0..n {
            for y in 0..n {
                ensure!(inv[s.mul(x, y)] == s.mul(inv[y], inv[x]), "{}: (xy)⁻¹ ≠ y⁻¹x⁻¹", c.name);
            }
        }
        let one_idempotent = idempotent_count(s) == 1;
        let absorbs = (0..n).all(|x| (0..n).all(|y| s.mul(s.mul(x, y), inv[y]) == x));
        ensure!(
            is_group(s) == one_idempotent && one_idempotent == absorbs && class.is_group == is_group(s),
            "{}: group characterizations disagree",
            c.name
        );
        if left_cancellative(s) || right_cancellative(s) {
            cancellative_checked += 1;
            ensure!(is_group(s) && class.is_group, "{}: cancellative inverse semigroup is not a group", c.name);
        }
    }
    kinds[4] = catalog::specs()
        .iter()
        .any(|sp| cat.iter().any(|c| c.semigroup.rows() == assemble(&sp.value).rows()));
    ensure!(
        kinds.iter().all(|&k| k),
        "catalog lacks a group, semilattice, left-zero, non-Clifford inverse or assembled spec: {kinds:?}"
    );
    for sp in catalog::specs() {
        if sp.value.idempotent_count() >= 2 {
            let s = assemble(&sp.value);
            ensure!(!left_cancellative(&s) && !right_cancellative(&s), "{}: assembly is cancellative", sp.name);
        }
    }
    let (code, out) = clifford(&["classify", "z2.cayley"]);
    ensure!(code == 0 && out == "inverse, clifford, group\n", "classify z2.cayley printed {out:?}");
    Ok(format!("{} semigroups, {cancellative_checked} cancellative", cat.len()))
}

fn criterion_2() -> Outcome {
    let specs = catalog::specs();
    for sp in &specs {
        let spec = &sp.value;
        ensure!(spec.idempotent_count() <= 5, "{}: |E| > 5", sp.name);
        ensure!(spec.groups().iter().all(|g| g.order() <= 6), "{}: |G_e| > 6", sp.name);
        let s = assemble(spec);
        let back = decompose(&s).map_err(|e| format!("{}: {e}", sp.name))?;
        let t = assemble(&back);
        ensure!(t.order() == s.order(), "{}: order changes", sp.name);
        // every group element of the decomposition is labelled by its element of s
        let map: Vec<usize> = (0..t.order())
            .map(|x| {
                let (e, g) = back.locate(x);
                s.element_by_label(back.group(e).label(g)).expect("decomposition keeps labels")
            })
            .collect();
        ensure!(map.iter().collect::<BTreeSet<_>>().len() == s.order(), "{}: map is not a bijection", sp.name);
        for x in 0..t.order() {
            for y in 0..t.order() {
                ensure!(map[t.mul(x, y)] == s.mul(map[x], map[y]), "{}: map is not multiplicative", sp.name);
            }
        }
        let inv = inverses(&s).ok_or(format!("{}: assembly is not inverse", sp.name))?;
        let fibers = group_fibers(&s, &inv);
        ensure!(j_partition(&s) == fibers, "{}: oracle J-classes differ from the group fibers", sp.name);
        let lib: BTreeSet<BTreeSet<usize>> =
            green_j_classes(&s).into_iter().map(|c| c.into_iter().collect()).collect();
        ensure!(lib == fibers, "{}: computed J-classes differ from the group fibers", sp.name);
    }
    Ok(format!("{} specs", specs.len()))
}

// ------------------------------------------------------------------ order

fn sup(p: &FinitePoset, d: &[usize]) -> Option<usize> {
    let ub: Vec<usize> = (0..p.len()).filter(|&u| d.iter().all(|&x| p.leq(x, u))).collect();
    ub.iter().copied().find(|&u| ub.iter().all(|&v| p.leq(u, v)))
}

fn oracle_way_below(p: &FinitePoset) -> Vec<Vec<bool>> {
    let n = p.len();
    let directed: Vec<(Vec<usize>, usize)> = (1u32..(1 << n))
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|d| d.iter().all(|&a| d.iter().all(|&b| d.iter().any(|&c| p.leq(a, c) && p.leq(b, c)))))
        .filter_map(|d| sup(p, &d).map(|s| (d, s)))
        .collect();
    (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    directed
                        .iter()
                        .filter(|(_, s)| p.leq(y, *s))
                        .all(|(d, _)| d.iter().any(|&z| p.leq(x, z)))
                })
                .collect()
        })
        .collect()
}

fn criterion_3() -> Outcome {
    let mut posets: Vec<FinitePoset> = (1..=6).map(FinitePoset::chain).collect();
    posets.extend((0..=5).map(FinitePoset::antichain_with_bottom));
    posets.extend((0..=2).map(FinitePoset::boolean_lattice));
    let random = demo::random_posets(50, 6, 7);
    ensure!(random.len() == 50, "{} random posets", random.len());
    posets.extend(random);
    let mut pairs = 0;
    for (i, p) in posets.iter().enumerate() {
        ensure!(p.len() <= 6, "poset {i} has {} elements", p.len());
        let oracle = oracle_way_below(p);
        let wb = way_below_all(p);
        for x in 0..p.len() {
            for y in 0..p.len() {
                let by_def = way_below_by_definition(p, x, y).map_err(|e| e.to_string())?;
                ensure!(
                    wb.way_below(x, y) == oracle[x][y] && by_def == oracle[x][y],
                    "poset {i}: way-below disagrees at ({x}, {y})"
                );
                ensure!(!oracle[x][y] || p.leq(x, y), "poset {i}: {x} ≪ {y} without {x} ≤ {y}");
                pairs += 1;
            }
        }
        if let Some(z) = (0..p.len()).find(|&z| (0..p.len()).all(|x| p.leq(z, x))) {
            ensure!((0..p.len()).all(|x| wb.way_below(z, x)), "poset {i}: minimum is not way below everything");
        }
    }
    Ok(format!("{} posets, {pairs} pairs", posets.len()))
}

// --------------------------------------------------------------- topology

fn neighbourhoods(t: &FiniteTopology, n: usize) -> Vec<u64> {
    (0..n)
        .map(|x| t.opens().iter().filter(|&&u| u >> x & 1 == 1).fold(full(n), |a, &u| a & u))
        .collect()
}

fn full(n: usize) -> u64 {
    (1u64 << n) - 1
}

fn bit(m: u64, x: usize) -> bool {
    m >> x & 1 == 1
}

/// A set of pairs is open in `X × X` when it contains `N(x) × N(y)` around each of its points.
fn product_open(nb: &[u64], n: usize, member: impl Fn(usize, usize) -> bool) -> bool {
    (0..n).all(|x| {
        (0..n).all(|y| !member(x, y) || (0..n).all(|a| (0..n).all(|b| !bit(nb[x], a) || !bit(nb[y], b) || member(a, b))))
    })
}

struct TopologyOracle {
    continuous: bool,
    conditions: [bool; 5],
    mp: bool,
    j_open: bool,
}

fn topology_oracle(s: &FiniteSemigroup, t: &FiniteTopology) -> TopologyOracle {
    let n = s.order();
    let opens: BTreeSet<u64> = t.opens().iter().copied().collect();
    let nb = neighbourhoods(t, n);
    let mut continuous = opens
        .iter()
        .all(|&w| product_open(&nb, n, |x, y| bit(w, s.mul(x, y))));
    let inv = inverses(s);
    if let Some(inv) = &inv {
        continuous &= opens.iter().all(|&w| {
            let pre = (0..n).filter(|&x| bit(w, inv[x])).fold(0u64, |m, x| m | 1 << x);
            opens.contains(&pre)
        });
    }
    let mask = |set: &BTreeSet<usize>| set.iter().fold(0u64, |m, &x| m | 1 << x);
    let j: Vec<u64> = j_partition(s).iter().map(mask).collect();
    let j_of = |x: usize| *j.iter().find(|&&c| bit(c, x)).expect("partition");
    let mp = (0..n).all(|x| {
        opens
            .iter()
            .filter(|&&u| bit(u, x))
            .all(|&u| opens.iter().any(|&v| bit(v, x) && v & !(u & j_of(x)) == 0))
    });
    let j_open = j.iter().all(|c| opens.contains(c));
    let conditions = match &inv {
        Some(inv) => {
            let fibers: Vec<u64> = group_fibers(s, inv).iter().map(mask).collect();
            let idem = (0..n).filter(|&x| s.mul(x, x) == x).fold(0u64, |m, x| m | 1 << x);
            let subgroups_open = fibers.iter().all(|f| opens.contains(f));
            let discrete = (0..n)
                .filter(|&e| bit(idem, e))
                .all(|e| opens.iter().any(|&u| u & idem == 1 << e));
            let relative: Vec<BTreeSet<u64>> = fibers
                .iter()
                .map(|&f| opens.iter().map(|&u| u & f).collect())
                .collect();
            let disjoint_union: BTreeSet<u64> = (0..=full(n))
                .filter(|&u| fibers.iter().zip(&relative).all(|(&f, r)| r.contains(&(u & f))))
                .collect();
            [mp, j_open, subgroups_open, discrete, disjoint_union == opens]
        }
        None => [mp, j_open, false, false, false],
    };
    TopologyOracle {
        continuous,
        conditions,
        mp,
        j_open,
    }
}

fn criterion_4() -> Outcome {
    let known = [1usize, 4, 29, 355];
    let mut models = 0;
    let mut sweep = 0;
    let mut semilattice_models = 0;
    for n in 1..=4 {
        let tops = all_topologies(n);
        ensure!(tops.len() == known[n - 1], "{} topologies on {n} points", tops.len());
        for c in catalog::semigroups().iter().filter(|c| c.semigroup.order() == n) {
            let s = &c.semigroup;
            let clifford = inverses(s).is_some_and(|inv| (0..n).all(|x| s.mul(x, inv[x]) == s.mul(inv[x], x)));
            for t in &tops {
                let o = topology_oracle(s, t);
                let m = TopologicalSemigroupModel::new(s.clone(), t.clone()).map_err(|e| e.to_string())?;
                ensure!(continuity_check(&m).continuous() == o.continuous, "{}: continuity disagrees", c.name);
                if !o.continuous {
                    continue;
                }
                sweep += 1;
                ensure!(o.mp == o.j_open, "{}: MP ≠ open J-classes in the oracle", c.name);
                ensure!(mp_check(&m) == o.mp && j_classes_open(&m) == o.j_open, "{}: MP / J-open flags", c.name);
                if clifford {
                    models += 1;
                    ensure!(
                        o.conditions.iter().all(|&b| b == o.conditions[0]),
                        "{}: oracle conditions differ {:?}",
                        c.name,
                        o.conditions
                    );
                    let r = mp_equivalences(&m).map_err(|e| format!("{}: {e}", c.name))?;
                    let lib = [r.mp_property, r.j_classes_open, r.subgroups_open, r.idempotents_discrete, r.disjoint_union_topology];
                    ensure!(lib == o.conditions, "{}: computed conditions {lib:?} vs {:?}", c.name, o.conditions);
                }
                if s.is_semilattice() {
                    semilattice_models += 1;
                    let nb = neighbourhoods(t, n);
                    let closed = product_open(&nb, n, |x, y| s.mul(x, y) != x);
                    let hausdorff = t.opens().len() == 1 << n;
                    ensure!(closed == hausdorff, "{}: order graph closed ≠ Hausdorff", c.name);
                    let og = order_graph_closed(&m).map_err(|e| e.to_string())?;
                    ensure!(og.order_graph_closed == closed && og.hausdorff == hausdorff, "{}: order graph flags", c.name);
                }
            }
        }
    }
    ensure!(models > 0, "no continuous Clifford models");
    Ok(format!(
        "{models} continuous Clifford models, {sweep} continuous models, {semilattice_models} semilattice models"
    ))
}

// ----------------------------------------------------------------- metric

/// `ρ(e,f) + Σ_j 2^{-j} P_{b_j}` summed term by term.
struct Oracle<'a, I> {
    basis: Vec<I>,
    base: &'a [usize],
    enums: &'a [Vec<usize>],
    rho: Box<dyn Fn(&I, &I) -> Q + 'a>,
    le: Box<dyn Fn(&I, &I) -> bool + 'a>,
    way_below: Box<dyn Fn(&I, &I) -> bool + 'a>,
    a: Box<dyn Fn(&I, &I) -> Q + 'a>,
    bond: Box<dyn Fn(&I, &I, usize) -> usize + 'a>,
    fiber: Box<dyn Fn(&I, usize, usize) -> Q + 'a>,
}

impl<I> Oracle<'_, I> {
    fn p(&self, j: usize, (e, g): (&I, usize), (f, h): (&I, usize)) -> Q {
        let b = &self.basis[j];
        let (ae, af) = ((self.a)(b, e), (self.a)(b, f));
        let x = if (self.le)(b, e) { (self.bond)(e, b, g) } else { self.base[j] };
        let y = if (self.le)(b, f) { (self.bond)(f, b, h) } else { self.base[j] };
        let mut total = (&ae - &af).abs();
        for (k, &t) in self.enums[j].iter().enumerate() {
            total += (&ae * (self.fiber)(b, x, t) - &af * (self.fiber)(b, y, t)).abs() * half_pow(k + 1);
        }
        total
    }

    fn distance(&self, p: (&I, usize), q: (&I, usize)) -> Q {
        let mut d = (self.rho)(p.0, q.0);
        for j in 0..self.basis.len() {
            d += self.p(j, p, q) * half_pow(j + 1);
        }
        d
    }
}

fn finite_oracle(data: &BowmanMetricData<FiniteCliffordModel>) -> Oracle<'_, usize> {
    let model = data.model();
    let spec = model.spec();
    let lat = spec.semilattice();
    let n = spec.idempotent_count();
    let le = move |a: &usize, b: &usize| lat.mul(*a, *b) == *a;
    let minimum = (0..n).find(|&m| (0..n).all(|x| le(&m, &x))).expect("finite semilattice has a minimum");
    let rho = model.rho_matrix();
    let a = move |b: &usize, e: &usize| {
        if *b == minimum {
            return Q::one();
        }
        (0..n).filter(|f| !le(b, f)).map(|f| rho[*e][f].clone()).min().unwrap_or_else(Q::one)
    };
    Oracle {
        basis: data.basis().iter().map(|b| b.index).collect(),
        base: data.base_points(),
        enums: data.enumerations(),
        rho: Box::new(move |e: &usize, f: &usize| rho[*e][*f].clone()),
        le: Box::new(le),
        way_below: Box::new(le),
        a: Box::new(a),
        bond: Box::new(move |f, e, g| spec.bond(*f, *e, g)),
        fiber: Box::new(move |e, g, h| model.fiber_metrics()[*e][g][h].clone()),
    }
}

fn flat_oracle(data: &BowmanMetricData<FlatCliffordModel>) -> Oracle<'_, FlatPoint> {
    let model = data.model();
    let value = |x: &FlatPoint| match x {
        FlatPoint::Zero => Q::zero(),
        FlatPoint::Recip(n) => q(1, *n as i64),
    };
    let le = |a: &FlatPoint, b: &FlatPoint| *a == FlatPoint::Zero || a == b;
    Oracle {
        basis: data.basis().to_vec(),
        base: data.base_points(),
        enums: data.enumerations(),
        rho: Box::new(move |e, f| (value(e) - value(f)).abs()),
        le: Box::new(le),
        way_below: Box::new(le),
        a: Box::new(|b, e| match (b, e) {
            (FlatPoint::Zero, _) => Q::one(),
            (FlatPoint::Recip(1), FlatPoint::Recip(1)) => q(1, 2),
            (FlatPoint::Recip(n), FlatPoint::Recip(m)) if n == m => q(1, (n * (n + 1)) as i64),
            _ => Q::zero(),
        }),
        bond: Box::new(move |f, e, g| match (f, e) {
            (FlatPoint::Recip(_), FlatPoint::Zero) => model.down()[g],
            _ => g,
        }),
        fiber: Box::new(|_, g, h| if g == h { Q::zero() } else { Q::one() }),
    }
}

/// Exhaustive axioms, oracle agreement, `0 ≤ d ≤ 3` and 1-Lipschitz weights.
fn check_flat(name: &str, data: &BowmanMetricData<FlatCliffordModel>, oracle: &Oracle<'_, FlatPoint>) -> Result<usize, String> {
    let model = data.model();
    let pts = model.points();
    let n = pts.len();
    let mut d = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let v = data.distance(&pts[i], &pts[j]);
            ensure!(v.tail_bound.is_zero() || data.has_infinite_tail(), "{name}: unexpected tail");
            let want = oracle.distance((&pts[i].e, pts[i].g), (&pts[j].e, pts[j].g));
            ensure!(v.value == want, "{name}: d = {} but the oracle gives {want} at ({i}, {j})", v.value);
            ensure!(!v.value.is_negative() && v.value <= q(3, 1), "{name}: d = {} outside [0, 3]", v.value);
            d[i][j] = v.value;
        }
    }
    for i in 0..n {
        for j in 0..n {
            ensure!(d[i][j] == d[j][i], "{name}: asymmetric at ({i}, {j})");
            ensure!(d[i][j].is_zero() == (i == j), "{name}: indiscernibles fail at ({i}, {j})");
            for k in 0..n {
                ensure!(d[i][k] <= &d[i][j] + &d[j][k], "{name}: triangle fails at ({i}, {j}, {k})");
            }
        }
    }
    let idem = model.idempotents();
    for b in data.basis() {
        for e in &idem {
            let a = data.a_weight(b, e);
            ensure!(a == (oracle.a)(b, e), "{name}: weight a_{b}({e})");
            for f in &idem {
                let lip = (&a - data.a_weight(b, f)).abs() <= model.rho(e, f);
                ensure!(lip, "{name}: a_{b} is not 1-Lipschitz at {e}, {f}");
            }
        }
    }
    Ok(n * n)
}

fn metric(name: &str) -> MetricInstance {
    catalog::metric_bodies()
        .into_iter()
        .find(|e| e.name == name)
        .unwrap_or_else(|| panic!("{name} in the catalog"))
        .value
        .build()
        .expect("catalog metric builds")
}

fn criterion_5() -> Outcome {
    let MetricInstance::Finite(tc) = metric("twochain") else {
        return Err("twochain is not finite".into());
    };
    let o = finite_oracle(&tc);
    let m = tc.model();
    let pt = |s: &str| m.point_by_label(s).expect("point");
    let d1 = o.distance((&pt("1,a").e.index, pt("1,a").g), (&pt("1,b").e.index, pt("1,b").g));
    let d2 = o.distance((&pt("1,a").e.index, pt("1,a").g), (&pt("0,z").e.index, pt("0,z").g));
    ensure!(d1 == q(3, 16) && d2 == q(21, 16), "oracle reference values {d1}, {d2}");
    ensure!(tc.distance(&pt("1,a"), &pt("1,b")).value == d1, "d((1,a),(1,b)) ≠ 3/16");
    ensure!(tc.distance(&pt("1,a"), &pt("0,z")).value == d2, "d((1,a),(0,z)) ≠ 21/16");
    let mut pairs = check_finite(&tc, &o).map_err(|e| format!("twochain: {e}"))?;
    let mut models = 1;
    for n in [3, 5, 8] {
        for g in ["z2", "z3"] {
            for b in ["id", "collapse"] {
                let name = format!("flat{n}-{g}-{b}");
                let MetricInstance::Flat(data) = metric(&name) else {
                    return Err(format!("{name} is not flat"));
                };
                pairs += check_flat(&name, &data, &flat_oracle(&data))?;
                models += 1;
            }
        }
    }
    let (code, out) = clifford(&["metric-eval", "bowman", "twochain.metric", "--p", "1,a", "--q", "1,b"]);
    ensure!(code == 0 && out == "3/16 (tail 0)\n", "metric-eval printed {out:?}");
    Ok(format!("{models} models, {pairs} pairs, 3/16 and 21/16 match"))
}

/// `check_metric` for finite models, whose oracle is keyed by idempotent index.
fn check_finite(data: &BowmanMetricData<FiniteCliffordModel>, o: &Oracle<'_, usize>) -> Result<usize, String> {
    let model = data.model();
    let pts = model.points();
    let n = pts.len();
    let mut d = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let v = data.distance(&pts[i], &pts[j]);
            let want = o.distance((&pts[i].e.index, pts[i].g), (&pts[j].e.index, pts[j].g));
            ensure!(v.value == want && v.tail_bound.is_zero(), "d = {} but the oracle gives {want}", v.value);
            ensure!(!v.value.is_negative() && v.value <= q(3, 1), "d = {} outside [0, 3]", v.value);
            d[i][j] = v.value;
        }
    }
    for i in 0..n {
        for j in 0..n {
            ensure!(d[i][j] == d[j][i] && d[i][j].is_zero() == (i == j), "axiom fails at ({i}, {j})");
            for k in 0..n {
                ensure!(d[i][k] <= &d[i][j] + &d[j][k], "triangle fails at ({i}, {j}, {k})");
            }
        }
    }
    let idem = model.idempotents();
    for b in data.basis() {
        for e in &idem {
            let a = data.a_weight(b, e);
            ensure!(a == (o.a)(&b.index, &e.index), "weight a_{b}({e})");
            for f in &idem {
                ensure!((&a - data.a_weight(b, f)).abs() <= model.rho(e, f), "a_{b} is not 1-Lipschitz");
            }
        }
    }
    Ok(n * n)
}

/// Separation on η-injective idempotents; returns (pairs, non-injective idempotents).
fn separation<I: Clone>(
    name: &str,
    idem: &[I],
    groups: impl Fn(&I) -> usize,
    o: &Oracle<'_, I>,
    lib_distance: impl Fn(&I, usize, usize) -> Q,
    lib_injective: impl Fn(&I) -> bool,
    lib_witness: impl Fn(&I, usize, usize) -> Option<(usize, Q)>,
) -> Result<(usize, Vec<(I, usize, usize)>), String> {
    let mut pairs = 0;
    let mut collisions = Vec::new();
    for e in idem {
        let below: Vec<usize> = (0..o.basis.len()).filter(|&j| (o.way_below)(&o.basis[j], e)).collect();
        let image = |g: usize| below.iter().map(|&j| (o.bond)(e, &o.basis[j], g)).collect::<Vec<_>>();
        let n = groups(e);
        let collision = (0..n).flat_map(|g| (g + 1..n).map(move |h| (g, h))).find(|&(g, h)| image(g) == image(h));
        ensure!(lib_injective(e) == collision.is_none(), "{name}: η-injectivity disagrees");
        if let Some((g, h)) = collision {
            collisions.push((e.clone(), g, h));
            continue;
        }
        for g in 0..n {
            for h in g + 1..n {
                ensure!(lib_distance(e, g, h).is_positive(), "{name}: d = 0 on an injective fiber");
                let witness = below.iter().copied().find(|&j| o.p(j, (e, g), (e, h)).is_positive());
                ensure!(witness.is_some(), "{name}: no separating b ≪ e");
                let (j, v) = lib_witness(e, g, h).ok_or(format!("{name}: no witness computed"))?;
                ensure!(
                    below.contains(&j) && v == o.p(j, (e, g), (e, h)) && v.is_positive(),
                    "{name}: computed witness is wrong"
                );
                pairs += 1;
            }
        }
    }
    Ok((pairs, collisions))
}

fn criterion_6() -> Outcome {
    let mut pairs = 0;
    let mut instances = 0;
    let mut failing = Vec::new();
    for entry in catalog::metric_bodies() {
        let name = entry.name;
        match entry.value.build().map_err(|e| e.to_string())? {
            MetricInstance::Finite(data) => {
                let o = finite_oracle(&data);
                let m = data.model();
                let idx: Vec<usize> = (0..m.spec().idempotent_count()).collect();
                let pos = |b: &clifford_core::metrics::Idx| data.basis().iter().position(|x| x == b).expect("basis");
                let (p, coll) = separation(
                    name,
                    &idx,
                    |&e| m.spec().group(e).order(),
                    &o,
                    |&e, g, h| data.distance(&Point::new(m.idx(e), g), &Point::new(m.idx(e), h)).value,
                    |&e| data.eta_injective(&m.idx(e)),
                    |&e, g, h| data.separation_witness(&m.idx(e), g, h).map(|(b, v)| (pos(&b), v)),
                )?;
                pairs += p;
                for (e, g, h) in coll {
                    let d = data.distance(&Point::new(m.idx(e), g), &Point::new(m.idx(e), h)).value;
                    ensure!(d.is_zero(), "{name}: collision pair has d = {d}");
                    failing.push(name);
                }
            }
            MetricInstance::Flat(data) => {
                let o = flat_oracle(&data);
                let m = data.model();
                let pos = |b: &FlatPoint| data.basis().iter().position(|x| x == b).expect("basis");
                let (p, coll) = separation(
                    name,
                    &m.idempotents(),
                    |e| m.group_order(e),
                    &o,
                    |e, g, h| data.distance(&Point::new(*e, g), &Point::new(*e, h)).value,
                    |e| data.eta_injective(e),
                    |e, g, h| data.separation_witness(e, g, h).map(|(b, v)| (pos(&b), v)),
                )?;
                pairs += p;
                ensure!(coll.is_empty(), "{name}: flat model with non-injective η");
            }
        }
        instances += 1;
    }
    failing.dedup();
    ensure!(failing == ["twochain-bottom-only"], "non-injective instances: {failing:?}");
    let (code, out) = clifford(&["metric-suite", "bowman", "twochain-bottom-only.metric", "--format", "tsv"]);
    ensure!(
        code == 1 && out.lines().filter(|l| l.starts_with("identity of indiscernibles\t")).count() == 2,
        "metric-suite on the truncated basis: exit {code}, output {out:?}"
    );
    Ok(format!("{instances} instances, {pairs} separated pairs, definiteness fails on {}", failing[0]))
}

fn criterion_7() -> Outcome {
    let MetricInstance::Flat(data) = metric("flat50-z2-id") else {
        return Err("flat50 is not flat".into());
    };
    let m = data.model();
    ensure!(m.lattice().truncation() == 50, "truncation {}", m.lattice().truncation());
    ensure!(m.down().iter().enumerate().all(|(i, &x)| i == x), "bonding is not the identity");
    let basis = data.basis();
    let g = 1;
    let mut last = Q::zero();
    for k in 1..=2000u64 {
        let (p, z) = (Point::new(FlatPoint::Recip(k), g), Point::new(FlatPoint::Zero, g));
        let v = data.distance(&p, &z);
        // only b = 1/k contributes beyond ρ; its weight is nonzero at 1/k and zero at 0
        let pos = basis.iter().position(|b| *b == FlatPoint::Recip(k));
        let j = pos.map_or(basis.len() + 1, |i| i + 1);
        let want = match pos {
            None => q(1, k as i64),
            Some(i) => {
                let a = if k == 1 { q(1, 2) } else { q(1, (k * (k + 1)) as i64) };
                let enums = &data.enumerations()[i];
                let s: Q = enums
                    .iter()
                    .enumerate()
                    .map(|(t, &x)| if x == g { Q::zero() } else { half_pow(t + 1) })
                    .sum();
                q(1, k as i64) + half_pow(i + 1) * a * (Q::one() + s)
            }
        };
        ensure!(v.value == want, "k = {k}: d = {} but the oracle gives {want}", v.value);
        let bound = q(1, k as i64) + half_pow(j) * q(4, 1);
        ensure!(v.upper() <= bound, "k = {k}: {} + {} exceeds {bound}", v.value, v.tail_bound);
        ensure!(disjoint_union_distance(m, &p, &z) == Q::one(), "k = {k}: disjoint-union distance ≠ 1");
        last = v.upper();
    }
    ensure!(last < q(1, 1000), "d + tail = {last} at k = 2000");
    Ok(format!("k = 1..2000, d + tail at 2000 = {:.3e}", last.to_f64().unwrap_or(f64::NAN)))
}

// --------------------------------------------------------------------- C¹

fn chart(name: &str) -> ChartModel {
    catalog::charts()
        .into_iter()
        .find(|e| e.name == name)
        .unwrap_or_else(|| panic!("{name} in the catalog"))
        .value
}

/// Smallest singular value of a 2 × 2 matrix.
fn sigma_min(a: [[f64; 2]; 2]) -> f64 {
    let t = a.iter().flatten().map(|x| x * x).sum::<f64>();
    let det = (a[0][0] * a[1][1] - a[0][1] * a[1][0]).abs();
    ((t - (t * t - 4.0 * det * det).max(0.0).sqrt()) / 2.0).sqrt()
}

/// `D(μ(u,u) − u)` at 0 by central differences.
fn dh0(m: &ChartModel) -> [[f64; 2]; 2] {
    let h = 1e-4;
    let hmap = |u: &[f64]| -> Vec<f64> { m.mu(u, u).unwrap().iter().zip(u).map(|(a, b)| a - b).collect() };
    let mut out = [[0.0; 2]; 2];
    for j in 0..2 {
        let mut p = vec![0.0; 2];
        let mut n = vec![0.0; 2];
        p[j] = h;
        n[j] = -h;
        let (fp, fn_) = (hmap(&p), hmap(&n));
        for i in 0..2 {
            out[i][j] = (fp[i] - fn_[i]) / (2.0 * h);
        }
    }
    out
}

fn symbolic(p: &Polynomial, var: usize, x: &[f64]) -> f64 {
    p.terms
        .iter()
        .filter(|t| t.exponents[var] > 0)
        .map(|t| {
            let mut v = t.coeff * t.exponents[var] as f64;
            for (i, (&xi, &e)) in x.iter().zip(&t.exponents).enumerate() {
                let e = if i == var { e - 1 } else { e };
                v *= xi.powi(e as i32);
            }
            v
        })
        .sum()
}

fn criterion_8() -> Outcome {
    let scan = ScanConfig {
        radius: 0.25,
        grid: 0.01,
        newton_iterations: 30,
    };
    let residual = |m: &ChartModel, p: &[f64]| -> f64 {
        m.mu(p, p).unwrap().iter().zip(p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    };
    for name in ["additive", "affine"] {
        let m = chart(name);
        let s = sigma_min(dh0(&m));
        ensure!(s >= 0.9, "{name}: oracle σ_min = {s}");
        let r = rigidity_report(&m, &scan).map_err(|e| e.to_string())?;
        let op = r.operators.as_ref().ok_or(format!("{name}: probe failed"))?;
        ensure!(op.smallest_singular_value >= 0.9 && op.dh0_invertible, "{name}: σ_min = {}", op.smallest_singular_value);
        ensure!((op.smallest_singular_value - s).abs() < 1e-6, "{name}: σ_min differs from the oracle");
        ensure!(r.scan.points.len() == 1, "{name}: {} fixed points", r.scan.points.len());
        let p = &r.scan.points[0];
        ensure!(residual(&m, p) < 1e-9 && p.iter().all(|x| x.abs() < 1e-6), "{name}: fixed point {p:?}");
    }
    let m = chart("minplus");
    // one-sided difference quotients along the first coordinate of u = v
    let t = 1e-3;
    let quotient = |s: f64| {
        let u = [s * t, 0.0];
        m.mu(&u, &u).unwrap()[0] / (s * t)
    };
    let w = [0.6, 0.8];
    let dq = |s: f64| {
        let u = [s * t * w[0], s * t * w[1]];
        let v = [-s * t * w[0], s * t * w[1]];
        m.mu(&u, &v).unwrap()[0] / (s * t)
    };
    let oracle_mismatch = (quotient(1.0) - quotient(-1.0)).abs().max((dq(1.0) - dq(-1.0)).abs());
    ensure!(oracle_mismatch >= 0.5, "min-plus: oracle one-sided mismatch {oracle_mismatch}");
    let v = differentiability_probe(&m, &ProbeConfig::default()).map_err(|e| e.to_string())?;
    ensure!(!v.differentiable && v.worst_mismatch >= 0.5, "min-plus probe: {v:?}");
    let r = rigidity_report(&m, &scan).map_err(|e| e.to_string())?;
    let pts = &r.scan.points;
    ensure!(pts.len() >= 10, "min-plus: {} fixed points", pts.len());
    ensure!(
        pts.iter().all(|p| residual(&m, p) < 1e-9 && p[1..].iter().all(|x| x.abs() < 1e-9)),
        "min-plus: scan points off the line s = 0"
    );
    let (code, out) = clifford(&["c1-probe", "minplus.chart", "--scan", "0.5"]);
    ensure!(
        code == 0 && out.lines().next() == Some("NOT C¹ at idempotent; fixed-point continuum detected (≥10 points)"),
        "c1-probe printed {out:?}"
    );
    let mut worst: f64 = 0.0;
    let mut polys = 0;
    for e in catalog::charts() {
        let ChartMap::Polynomial(coords) = &e.value.map else { continue };
        polys += 1;
        let n = e.value.dim;
        for k in 0..20 {
            let x: Vec<f64> = (0..2 * n)
                .map(|i| 0.3 * e.value.radius / n as f64 * ((k * 7 + i * 3) as f64 * 0.37).sin())
                .collect();
            let jac = e.value.fd_jacobian(&x[..n], &x[n..], 1e-3).map_err(|e| e.to_string())?;
            for (i, p) in coords.iter().enumerate() {
                for j in 0..2 * n {
                    worst = worst.max((jac[(i, j)] - symbolic(p, j, &x)).abs());
                }
            }
        }
    }
    ensure!(polys >= 3 && worst <= 1e-6, "{polys} polynomial charts, worst Jacobian error {worst:e}");
    Ok(format!("{} min-plus fixed points, polynomial Jacobian error {worst:.1e}", pts.len()))
}

fn criterion_9() -> Outcome {
    let (c1, a) = clifford(&["demo", "--format", "tsv"]);
    let (c2, b) = clifford(&["demo", "--format", "tsv"]);
    ensure!(a == b, "demo output differs between runs");
    ensure!(c1 == 0 && c2 == 0, "demo exit codes {c1}, {c2}");
    ensure!(a.lines().skip(1).all(|l| l.split('\t').nth(4) == Some("PASS")), "demo matrix has failures");
    let reference = demo::run().to_tsv();
    ensure!(a == reference, "binary and library reports differ");
    Ok(format!("{} bytes, identical", a.len()))
}

fn main() {
    let criteria: [(u8, &str, u64, fn() -> Outcome); 9] = [
        (1, "algebra soundness", 5, criterion_1),
        (2, "assemble/decompose round trip", 30, criterion_2),
        (3, "way-below oracle equivalence", 30, criterion_3),
        (4, "open-subgroup equivalence chain", 60, criterion_4),
        (5, "bowman metric axioms", 60, criterion_5),
        (6, "separation and definiteness", 10, criterion_6),
        (7, "convergence dichotomy", 30, criterion_7),
        (8, "rigidity dichotomy", 60, criterion_8),
        (9, "determinism", 600, criterion_9),
    ];
    let mut failed = 0;
    for (n, name, limit, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(d) if elapsed > Duration::from_secs(limit) => Err(format!("{d}; took {elapsed:.1?}, limit {limit} s")),
            r => r,
        };
        match result {
            Ok(detail) => println!("criterion {n} ({name}): PASS  {detail}  [{:.2} s]", elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL  {why}  [{:.2} s]", elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
}
