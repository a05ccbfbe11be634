//! Property tests over randomly generated strong semilattices of cyclic groups.

use std::collections::BTreeSet;

use clifford_core::document::{Body, SpecBody, WorkbenchDocument};
use clifford_core::iso::iso_equivalent;
use clifford_core::metrics::{
    isometry_check, metric_axiom_suite, BowmanMetricData, CliffordModel, FiniteCliffordModel, YeagerMetric,
};
use clifford_core::order::{infimum, minimum};
use clifford_core::semigroup::{
    classify, green_j_classes, is_trivial_clifford, FiniteSemigroup, IdempotentOrder, InverseStructure,
};
use clifford_core::strong::{assemble, decompose, eta_injectivity, product_spec, GroupTable, StrongSemilatticeSpec};
use clifford_core::topology::basic_set;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Meet-semilattice of subsets of {0,1,2} closed under intersection.
fn semilattice(mask: u8) -> FiniteSemigroup {
    let mut sets: BTreeSet<u8> = (0..8u8).filter(|s| mask >> s & 1 == 1).collect();
    sets.insert(7);
    loop {
        let more: BTreeSet<u8> = sets.iter().flat_map(|a| sets.iter().map(move |b| a & b)).collect();
        if more.len() == sets.len() {
            break;
        }
        sets = more;
    }
    let sets: Vec<u8> = sets.into_iter().collect();
    FiniteSemigroup::from_fn(sets.len(), |x, y| sets.iter().position(|&s| s == sets[x] & sets[y]).unwrap()).unwrap()
}

/// Cyclic groups `Z_{n_e}` with `n_e | n_f` for `e ≤ f`, bonded by reduction.
fn spec(mask: u8, orders: &[usize]) -> StrongSemilatticeSpec {
    let e = semilattice(mask);
    let m = e.order();
    let le = |a: usize, b: usize| e.mul(a, b) == a;
    let n: Vec<usize> = (0..m)
        .map(|a| (0..m).filter(|&f| le(a, f)).fold(0, |acc, f| gcd(acc, orders[f % orders.len()])))
        .collect();
    let groups = n.iter().map(|&k| GroupTable::cyclic(k)).collect();
    let gens: Vec<(usize, usize, Vec<usize>)> = (0..m)
        .flat_map(|f| (0..m).map(move |a| (f, a)))
        .filter(|&(f, a)| f != a && le(a, f))
        .map(|(f, a)| (f, a, (0..n[f]).map(|x| x % n[a]).collect()))
        .collect();
    StrongSemilatticeSpec::from_parts(e, groups, &gens).unwrap()
}

fn arb_spec() -> impl Strategy<Value = StrongSemilatticeSpec> {
    (any::<u8>(), proptest::collection::vec(prop::sample::select(vec![1usize, 2, 3, 4, 6]), 8))
        .prop_map(|(mask, orders)| spec(mask, &orders))
        .prop_filter("at most five idempotents", |s| s.idempotent_count() <= 5)
}

fn model(spec: StrongSemilatticeSpec) -> FiniteCliffordModel {
    let m = spec.idempotent_count();
    let rho = (0..m)
        .map(|i| (0..m).map(|j| BigRational::new((i.abs_diff(j) as i64).into(), (m as i64).into())).collect())
        .collect();
    FiniteCliffordModel::new(spec, rho, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn assembly_is_clifford(spec in arb_spec()) {
        let s = assemble(&spec);
        let c = classify(&s);
        prop_assert!(c.is_clifford && c.criteria_agree());
        let inv = InverseStructure::compute(&s).unwrap();
        for x in s.elements() {
            prop_assert_eq!(inv.pi[inv.inv[x]], inv.pi[x]);
            for y in s.elements() {
                prop_assert_eq!(inv.inv[s.mul(x, y)], s.mul(inv.inv[y], inv.inv[x]));
            }
        }
        let identities: Vec<usize> = (0..spec.idempotent_count())
            .map(|e| spec.index_of(e, spec.group(e).identity()))
            .collect();
        let mut sorted = identities.clone();
        sorted.sort_unstable();
        prop_assert_eq!(s.idempotents(), sorted);
        let order = IdempotentOrder::compute(&s);
        for e in 0..spec.idempotent_count() {
            for f in 0..spec.idempotent_count() {
                prop_assert_eq!(order.le(identities[e], identities[f]), spec.le(e, f));
            }
        }
    }

    #[test]
    fn round_trip_and_j_classes(spec in arb_spec()) {
        let s = assemble(&spec);
        prop_assert_eq!(assemble(&spec).rows(), s.rows());
        let back = assemble(&decompose(&s).unwrap());
        prop_assert!(iso_equivalent(&s, &back, 10_000_000).unwrap().is_some());
        let fibers: BTreeSet<Vec<usize>> = (0..spec.idempotent_count())
            .map(|e| (0..spec.group(e).order()).map(|g| spec.index_of(e, g)).collect())
            .collect();
        let j: BTreeSet<Vec<usize>> = green_j_classes(&s).into_iter().collect();
        prop_assert_eq!(j, fibers);
    }

    #[test]
    fn products_are_trivial(mask in any::<u8>(), n in 1usize..5) {
        let e = semilattice(mask);
        let s = assemble(&product_spec(&e, &GroupTable::cyclic(n)).unwrap());
        prop_assert!(is_trivial_clifford(&s, 1_000_000).unwrap().is_some());
    }

    #[test]
    fn infimum_is_meet_fold(mask in any::<u8>(), pick in any::<u8>()) {
        let e = semilattice(mask);
        let all: Vec<usize> = e.elements().collect();
        let product = all.iter().skip(1).fold(all[0], |acc, &x| e.mul(acc, x));
        prop_assert_eq!(minimum(&e).unwrap(), product);
        let subset: Vec<usize> = all.iter().copied().filter(|i| pick >> i & 1 == 1).collect();
        if let Some(inf) = infimum(&e, &subset) {
            let lower: Vec<usize> = all.iter().copied().filter(|&l| subset.iter().all(|&x| e.mul(l, x) == l)).collect();
            prop_assert!(lower.contains(&inf));
            prop_assert!(lower.iter().all(|&l| e.mul(l, inf) == l));
        } else {
            prop_assert!(subset.is_empty());
        }
    }

    #[test]
    fn eta_over_minimum_is_bonding_injectivity(spec in arb_spec()) {
        let m = minimum(spec.semilattice()).unwrap();
        for e in 0..spec.idempotent_count() {
            let images: BTreeSet<usize> = (0..spec.group(e).order()).map(|g| spec.bond(e, m, g)).collect();
            let r = eta_injectivity(&spec, e, &[m]).unwrap();
            prop_assert_eq!(r.injective, images.len() == spec.group(e).order());
        }
    }

    #[test]
    fn basic_sets_are_monotone(spec in arb_spec(), u in any::<u8>(), u_extra in any::<u8>(), v in any::<u8>(), v_extra in any::<u8>()) {
        let m = spec.idempotent_count();
        let e = minimum(spec.semilattice()).unwrap();
        let pick = |mask: u8, n: usize| -> Vec<usize> { (0..n).filter(|i| mask >> i & 1 == 1).collect() };
        let mut small_u = pick(u, m);
        small_u.push(e);
        let mut big_u = pick(u | u_extra, m);
        big_u.push(e);
        let g = spec.group(e).order();
        let (small_v, big_v) = (pick(v, g), pick(v | v_extra, g));
        let subset = |a: &[usize], b: &[usize]| a.iter().all(|x| b.contains(x));
        let base = basic_set(&spec, &small_u, e, &small_v).unwrap();
        prop_assert!(subset(&base, &basic_set(&spec, &small_u, e, &big_v).unwrap()));
        prop_assert!(subset(&base, &basic_set(&spec, &big_u, e, &small_v).unwrap()));
    }

    #[test]
    fn bowman_metric_properties(spec in arb_spec(), alt in any::<u8>()) {
        let data = BowmanMetricData::new(model(spec)).unwrap();
        let base: Vec<usize> = data
            .basis()
            .iter()
            .enumerate()
            .map(|(j, b)| (alt as usize >> j & 1) % data.model().group_order(b))
            .collect();
        let data = data.with_base_points(base).unwrap();
        let m = data.model();
        let pts = m.points();
        let report = metric_axiom_suite(&pts, |p, q| data.distance(p, q).value, BigRational::zero());
        prop_assert!(report.passed(), "{:?}", report.violations.first());
        let two = BigRational::from_integer(2.into());
        let three = BigRational::from_integer(3.into());
        let full = data.basis().len();
        for p in &pts {
            for q in &pts {
                let d = data.distance(p, q);
                prop_assert!(d.tail_bound.is_zero());
                prop_assert!(!d.value.is_negative() && d.value <= three);
                for b in data.basis() {
                    let t = data.p_term(b, p, q).unwrap();
                    prop_assert!(!t.is_negative() && t <= two);
                }
                for j in 1..=full + 1 {
                    let part = data.bowman_distance(p, q, j).unwrap();
                    if j >= full {
                        prop_assert_eq!(&part.value, &d.value);
                        prop_assert!(part.tail_bound.is_zero());
                    } else {
                        prop_assert!(part.value <= d.value && d.value <= part.upper());
                    }
                }
            }
        }
        let idem = m.idempotents();
        for b in data.basis() {
            for e in &idem {
                for f in &idem {
                    prop_assert!((data.a_weight(b, e) - data.a_weight(b, f)).abs() <= m.rho(e, f));
                }
            }
        }
        for e in &idem {
            if !data.eta_injective(e) {
                continue;
            }
            for g in 0..m.group_order(e) {
                for h in g + 1..m.group_order(e) {
                    let (b, v) = data.separation_witness(e, g, h).expect("witness");
                    prop_assert!(m.way_below(&b, e) && v.is_positive());
                }
            }
        }
    }

    #[test]
    fn yeager_triangle_on_isometric_models(spec in arb_spec()) {
        let m = model(spec);
        if isometry_check(&m).is_ok() {
            let y = YeagerMetric::new(m.clone()).unwrap();
            let pts = m.points();
            let report = metric_axiom_suite(&pts, |p, q| y.distance(p, q), BigRational::zero());
            prop_assert!(report.passed(), "{:?}", report.violations.first());
        }
    }

    #[test]
    fn spec_documents_round_trip(spec in arb_spec()) {
        let doc = WorkbenchDocument::new("random", "generated", Body::Spec(SpecBody::from_raw(&spec.to_raw())));
        let text = doc.to_json();
        let back = WorkbenchDocument::parse(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_json(), text);
        let s1 = assemble(&spec);
        let s2 = assemble(&clifford_core::strong::validate_spec(&back.raw_spec().unwrap()).unwrap());
        prop_assert_eq!(s1.rows(), s2.rows());
    }
}
