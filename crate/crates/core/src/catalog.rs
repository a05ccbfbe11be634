//! Built-in examples: semigroups, strong semilattices of groups, posets,
//! metric data and chart models, each also available as a document.

use num_rational::BigRational;

use crate::c1::{affine_polynomial, left_zero_polynomial, projection_polynomial, Builtin, ChartModel};
use crate::document::{
    Body, CayleyBody, MetricBody, PosetBody, Rational, SpecBody, TopologyBody, WorkbenchDocument,
};
use crate::order::FinitePoset;
use crate::semigroup::FiniteSemigroup;
use crate::strong::{assemble, direct_product, GroupTable, StrongSemilatticeSpec};

#[derive(Debug, Clone)]
pub struct Entry<T> {
    pub name: &'static str,
    pub description: &'static str,
    pub value: T,
}

#[derive(Debug, Clone)]
pub struct CatalogSemigroup {
    pub name: &'static str,
    pub description: &'static str,
    pub semigroup: FiniteSemigroup,
}

fn table(n: usize, f: impl Fn(usize, usize) -> usize) -> FiniteSemigroup {
    FiniteSemigroup::from_fn(n, f).expect("catalog table is associative")
}

fn labelled(s: FiniteSemigroup, labels: &[&str]) -> FiniteSemigroup {
    s.with_labels(labels.iter().copied()).expect("catalog labels")
}

pub fn cyclic(n: usize) -> FiniteSemigroup {
    let s = table(n, |x, y| (x + y) % n);
    if n == 2 {
        labelled(s, &["e", "a"])
    } else {
        s
    }
}

pub fn klein() -> FiniteSemigroup {
    labelled(table(4, |x, y| x ^ y), &["e", "a", "b", "c"])
}

pub fn chain(n: usize) -> FiniteSemigroup {
    table(n, |x, y| x.min(y))
}

/// `0` below two incomparable atoms `a`, `b`.
pub fn flat3() -> FiniteSemigroup {
    labelled(table(3, |x, y| if x == y { x } else { 0 }), &["0", "a", "b"])
}

/// `{0,1}²` under coordinatewise meet.
pub fn boolean2() -> FiniteSemigroup {
    labelled(table(4, |x, y| x & y), &["0", "a", "b", "1"])
}

pub fn left_zero(n: usize) -> FiniteSemigroup {
    table(n, |x, _| x)
}

pub fn right_zero(n: usize) -> FiniteSemigroup {
    table(n, |_, y| y)
}

/// All products equal `0`.
pub fn null_semigroup(n: usize) -> FiniteSemigroup {
    table(n, |_, _| 0)
}

/// Permutations of three points in lexicographic order, composed left to right.
pub fn symmetric3() -> FiniteSemigroup {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).expect("permutation");
    labelled(
        table(6, |x, y| idx([perms[y][perms[x][0]], perms[y][perms[x][1]], perms[y][perms[x][2]]])),
        &["id", "(12)", "(01)", "(012)", "(021)", "(02)"],
    )
}

/// `Z2` with a zero adjoined.
pub fn z2_with_zero() -> FiniteSemigroup {
    labelled(
        table(3, |x, y| if x == 0 || y == 0 { 0 } else { 1 + ((x - 1) ^ (y - 1)) }),
        &["0", "e", "a"],
    )
}

/// The five-element Brandt semigroup `{0, e11, e12, e21, e22}`:
/// inverse but not Clifford.
pub fn brandt_b2() -> FiniteSemigroup {
    let units = [(0, 0), (0, 1), (1, 0), (1, 1)];
    labelled(
        table(5, |x, y| {
            if x == 0 || y == 0 {
                return 0;
            }
            let (i, j) = units[x - 1];
            let (k, l) = units[y - 1];
            if j == k {
                1 + units.iter().position(|&u| u == (i, l)).expect("unit")
            } else {
                0
            }
        }),
        &["0", "e11", "e12", "e21", "e22"],
    )
}

pub fn semigroups() -> Vec<CatalogSemigroup> {
    let mut out = vec![
        ("z1", "trivial group", cyclic(1)),
        ("z2", "cyclic group of order 2", cyclic(2)),
        ("z3", "cyclic group of order 3", cyclic(3)),
        ("z4", "cyclic group of order 4", cyclic(4)),
        ("z5", "cyclic group of order 5", cyclic(5)),
        ("z6", "cyclic group of order 6", cyclic(6)),
        ("klein", "Klein four-group", klein()),
        ("s3", "symmetric group on three points", symmetric3()),
        ("chain2", "two-element chain under min", chain(2)),
        ("chain3", "three-element chain under min", chain(3)),
        ("chain5", "five-element chain under min", chain(5)),
        ("flat3", "bottom below two atoms", flat3()),
        ("boolean2", "four-element boolean lattice under meet", boolean2()),
        ("left-zero3", "left-zero band of order 3", left_zero(3)),
        ("right-zero2", "right-zero band of order 2", right_zero(2)),
        ("null3", "null semigroup of order 3", null_semigroup(3)),
        ("z2-zero", "Z2 with a zero adjoined", z2_with_zero()),
        ("brandt-b2", "five-element Brandt semigroup", brandt_b2()),
        (
            "chain2xz2",
            "direct product of the two-chain and Z2",
            direct_product(&chain(2), &cyclic(2)).expect("product"),
        ),
        (
            "chain2xz3",
            "direct product of the two-chain and Z3",
            direct_product(&chain(2), &cyclic(3)).expect("product"),
        ),
    ];
    for s in specs() {
        if s.value.carrier_size() <= 12 {
            out.push((s.name, s.description, assemble(&s.value)));
        }
    }
    out.into_iter()
        .map(|(name, description, semigroup)| CatalogSemigroup {
            name,
            description,
            semigroup,
        })
        .collect()
}

fn group(s: FiniteSemigroup) -> GroupTable {
    GroupTable::new(s).expect("catalog group")
}

fn spec(e: FiniteSemigroup, groups: Vec<FiniteSemigroup>, maps: &[(usize, usize, Vec<usize>)]) -> StrongSemilatticeSpec {
    StrongSemilatticeSpec::from_parts(e, groups.into_iter().map(group).collect(), maps).expect("catalog spec")
}

fn z1(label: &str) -> FiniteSemigroup {
    labelled(cyclic(1), &[label])
}

fn z2ab() -> FiniteSemigroup {
    labelled(cyclic(2), &["a", "b"])
}

/// `E = {0 < 1}`, `G_1 = Z2 = {a, b}`, `G_0 = {z}`.
pub fn two_chain_spec() -> StrongSemilatticeSpec {
    spec(chain(2), vec![z1("z"), z2ab()], &[(1, 0, vec![0, 0])])
}

pub fn specs() -> Vec<Entry<StrongSemilatticeSpec>> {
    let sign = vec![0, 1, 1, 0, 0, 1];
    let list = vec![
        ("two-chain", "Z2 over a trivial group on a two-chain", two_chain_spec()),
        (
            "z4-to-z2",
            "Z4 above Z2, reduction mod 2",
            spec(chain(2), vec![cyclic(2), cyclic(4)], &[(1, 0, vec![0, 1, 0, 1])]),
        ),
        (
            "product-z3",
            "two-chain times Z3, identity bonding",
            spec(chain(2), vec![cyclic(3), cyclic(3)], &[(1, 0, vec![0, 1, 2])]),
        ),
        (
            "chain3-z6",
            "Z6 above Z3 above the trivial group",
            spec(
                chain(3),
                vec![cyclic(1), cyclic(3), cyclic(6)],
                &[(2, 1, vec![0, 1, 2, 0, 1, 2]), (1, 0, vec![0, 0, 0])],
            ),
        ),
        (
            "chain3-z2-constant",
            "three-chain times Z2",
            spec(chain(3), vec![cyclic(2); 3], &[(2, 1, vec![0, 1]), (1, 0, vec![0, 1])]),
        ),
        (
            "flat3-z3-z2",
            "Z3 and Z2 over two atoms, trivial group at the bottom",
            spec(
                flat3(),
                vec![z1("z"), cyclic(3), cyclic(2)],
                &[(1, 0, vec![0, 0, 0]), (2, 0, vec![0, 0])],
            ),
        ),
        (
            "boolean2-klein",
            "Klein group over the top of {0,1}² projecting onto Z2 factors",
            spec(
                boolean2(),
                vec![z1("z"), cyclic(2), cyclic(2), klein()],
                &[
                    (3, 1, vec![0, 1, 0, 1]),
                    (3, 2, vec![0, 0, 1, 1]),
                    (1, 0, vec![0, 0]),
                    (2, 0, vec![0, 0]),
                ],
            ),
        ),
        (
            "chain5-s3",
            "S3 on top of a five-chain, then its sign, then trivial groups",
            spec(
                chain(5),
                vec![cyclic(1), cyclic(1), cyclic(2), cyclic(2), symmetric3()],
                &[
                    (4, 3, sign),
                    (3, 2, vec![0, 1]),
                    (2, 1, vec![0, 0]),
                    (1, 0, vec![0]),
                ],
            ),
        ),
    ];
    list.into_iter()
        .map(|(name, description, value)| Entry {
            name,
            description,
            value,
        })
        .collect()
}

pub fn posets() -> Vec<Entry<FinitePoset>> {
    vec![
        Entry {
            name: "chain4",
            description: "four-element chain",
            value: FinitePoset::chain(4),
        },
        Entry {
            name: "antichain3-bottom",
            description: "three atoms above a bottom",
            value: FinitePoset::antichain_with_bottom(3),
        },
        Entry {
            name: "boolean3",
            description: "subsets of a three-element set",
            value: FinitePoset::boolean_lattice(3),
        },
    ]
}

fn r(n: i64, d: i64) -> Rational {
    Rational(BigRational::new(n.into(), d.into()))
}

fn discrete_rho(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { r(0, 1) } else { r(1, 1) }).collect())
        .collect()
}

fn flat_body(truncation: u64, top: FiniteSemigroup, collapse: bool) -> MetricBody {
    let n = top.order();
    let (bottom, bonding) = if collapse {
        (z1("z"), vec![0; n])
    } else {
        (top.clone(), (0..n).collect())
    };
    MetricBody::Flat {
        truncation,
        top: CayleyBody::from_semigroup(&top),
        bottom: CayleyBody::from_semigroup(&bottom),
        bonding,
    }
}

fn finite_body(s: &StrongSemilatticeSpec, rho: Vec<Vec<Rational>>) -> MetricBody {
    MetricBody::Finite {
        spec: SpecBody::from_raw(&s.to_raw()),
        rho,
        group_metrics: None,
        basis: None,
        partial_basis: false,
        base_points: None,
        enumerations: None,
    }
}

/// Metric data: the two-chain reference model, flat models with `Z2` and
/// `Z3` fibers under identity and collapsing bondings, and a truncated
/// basis too small to separate points.
pub fn metric_bodies() -> Vec<Entry<MetricBody>> {
    let mut out = vec![
        Entry {
            name: "twochain",
            description: "two-chain, Z2 over the trivial group, discrete metrics, basis (0, 1)",
            value: MetricBody::Finite {
                spec: SpecBody::from_raw(&two_chain_spec().to_raw()),
                rho: discrete_rho(2),
                group_metrics: None,
                basis: Some(vec!["0".into(), "1".into()]),
                partial_basis: false,
                base_points: None,
                enumerations: Some(vec![vec!["z".into()], vec!["a".into(), "b".into()]]),
            },
        },
        Entry {
            name: "twochain-alt-base",
            description: "two-chain reference model with base point b over the top",
            value: MetricBody::Finite {
                spec: SpecBody::from_raw(&two_chain_spec().to_raw()),
                rho: discrete_rho(2),
                group_metrics: None,
                basis: Some(vec!["0".into(), "1".into()]),
                partial_basis: false,
                base_points: Some(vec!["z".into(), "b".into()]),
                enumerations: None,
            },
        },
        Entry {
            name: "twochain-bottom-only",
            description: "two-chain with the basis cut down to the minimum",
            value: MetricBody::Finite {
                spec: SpecBody::from_raw(&two_chain_spec().to_raw()),
                rho: discrete_rho(2),
                group_metrics: None,
                basis: Some(vec!["0".into()]),
                partial_basis: true,
                base_points: None,
                enumerations: None,
            },
        },
    ];
    let specs = specs();
    let find = |name: &str| &specs.iter().find(|s| s.name == name).expect("catalog spec").value;
    // ρ(i, j) = |i − j| / 2 on the three-chain
    let rho3: Vec<Vec<Rational>> = (0..3i64)
        .map(|i| (0..3i64).map(|j| r((i - j).abs(), 2)).collect())
        .collect();
    out.push(Entry {
        name: "chain3-z6",
        description: "Z6 above Z3 above the trivial group, ρ = |i − j|/2",
        value: finite_body(find("chain3-z6"), rho3),
    });
    out.push(Entry {
        name: "boolean2-klein",
        description: "Klein group over {0,1}², discrete ρ",
        value: finite_body(find("boolean2-klein"), discrete_rho(4)),
    });
    out.push(Entry {
        name: "product-z3",
        description: "two-chain times Z3, isometric bonding",
        value: finite_body(find("product-z3"), discrete_rho(2)),
    });
    let flats: [(&'static str, &'static str, u64, usize, bool); 12] = [
        ("flat3-z2-id", "flat model N=3, Z2, identity bonding", 3, 2, false),
        ("flat3-z2-collapse", "flat model N=3, Z2 onto the trivial group", 3, 2, true),
        ("flat3-z3-id", "flat model N=3, Z3, identity bonding", 3, 3, false),
        ("flat3-z3-collapse", "flat model N=3, Z3 onto the trivial group", 3, 3, true),
        ("flat5-z2-id", "flat model N=5, Z2, identity bonding", 5, 2, false),
        ("flat5-z2-collapse", "flat model N=5, Z2 onto the trivial group", 5, 2, true),
        ("flat5-z3-id", "flat model N=5, Z3, identity bonding", 5, 3, false),
        ("flat5-z3-collapse", "flat model N=5, Z3 onto the trivial group", 5, 3, true),
        ("flat8-z2-id", "flat model N=8, Z2, identity bonding", 8, 2, false),
        ("flat8-z2-collapse", "flat model N=8, Z2 onto the trivial group", 8, 2, true),
        ("flat8-z3-id", "flat model N=8, Z3, identity bonding", 8, 3, false),
        ("flat8-z3-collapse", "flat model N=8, Z3 onto the trivial group", 8, 3, true),
    ];
    for (name, description, n, g, collapse) in flats {
        out.push(Entry {
            name,
            description,
            value: flat_body(n, cyclic(g), collapse),
        });
    }
    out.push(Entry {
        name: "flat50-z2-id",
        description: "flat model N=50, Z2, identity bonding",
        value: flat_body(50, cyclic(2), false),
    });
    out
}

pub fn charts() -> Vec<Entry<ChartModel>> {
    let b = |k, dim| ChartModel::builtin(k, dim, 1.0).expect("builtin chart");
    vec![
        Entry {
            name: "additive",
            description: "group chart u + v",
            value: b(Builtin::Additive, 2),
        },
        Entry {
            name: "affine",
            description: "u + v + u∘v",
            value: b(Builtin::Affine, 2),
        },
        Entry {
            name: "minplus",
            description: "(min(e, f), s + t)",
            value: b(Builtin::MinPlus, 2),
        },
        Entry {
            name: "discrete-product",
            description: "chart of E × G at an isolated idempotent",
            value: b(Builtin::DiscreteProduct, 2),
        },
        Entry {
            name: "affine-poly",
            description: "u + v + uv as a polynomial in one variable",
            value: affine_polynomial(1, 1.0),
        },
        Entry {
            name: "projection-poly",
            description: "Pu + Pv with P = diag(1, 0)",
            value: projection_polynomial(&[true, false], 1.0),
        },
        Entry {
            name: "left-zero-poly",
            description: "μ(u, v) = u",
            value: left_zero_polynomial(1, 1.0),
        },
    ]
}

/// Topology models shipped as examples.
pub fn topology_bodies() -> Vec<Entry<TopologyBody>> {
    let two = direct_product(&chain(2), &cyclic(2)).expect("product");
    vec![
        Entry {
            name: "chain2xz2-discrete",
            description: "two-chain times Z2 with the discrete topology",
            value: TopologyBody {
                semigroup: CayleyBody::from_semigroup(&two),
                opens: (0..4).map(|x| vec![x]).collect(),
            },
        },
        Entry {
            name: "chain2xz2-fibers",
            description: "two-chain times Z2, open sets generated by the group fibers",
            value: TopologyBody {
                semigroup: CayleyBody::from_semigroup(&two),
                opens: vec![vec![0, 1], vec![2, 3]],
            },
        },
        Entry {
            name: "chain2-sierpinski",
            description: "two-chain with the upper point open",
            value: TopologyBody {
                semigroup: CayleyBody::from_semigroup(&chain(2)),
                opens: vec![vec![1]],
            },
        },
    ]
}

fn poset_body(p: &FinitePoset) -> PosetBody {
    let n = p.len();
    let relations = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| x != y && p.leq(x, y))
        .collect();
    PosetBody {
        n,
        relations,
        labels: Some(p.labels().to_vec()),
    }
}

/// Every catalog item as a document, keyed by file name.
pub fn documents() -> Vec<(String, WorkbenchDocument)> {
    let mut out = Vec::new();
    for s in semigroups() {
        out.push((
            format!("{}.cayley", s.name),
            WorkbenchDocument::new(s.name, s.description, Body::Cayley(CayleyBody::from_semigroup(&s.semigroup))),
        ));
    }
    for s in specs() {
        out.push((
            format!("{}.spec", s.name),
            WorkbenchDocument::new(s.name, s.description, Body::Spec(SpecBody::from_raw(&s.value.to_raw()))),
        ));
    }
    for p in posets() {
        out.push((
            format!("{}.poset", p.name),
            WorkbenchDocument::new(p.name, p.description, Body::Poset(poset_body(&p.value))),
        ));
    }
    for t in topology_bodies() {
        out.push((
            format!("{}.topology", t.name),
            WorkbenchDocument::new(t.name, t.description, Body::TopologyModel(t.value)),
        ));
    }
    for m in metric_bodies() {
        out.push((
            format!("{}.metric", m.name),
            WorkbenchDocument::new(m.name, m.description, Body::MetricData(m.value)),
        ));
    }
    for c in charts() {
        out.push((
            format!("{}.chart", c.name),
            WorkbenchDocument::new(c.name, c.description, Body::ChartModel(c.value)),
        ));
    }
    out
}
