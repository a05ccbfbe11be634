use std::fmt::Write as _;

use anyhow::{anyhow, bail, Result};
use clap::ValueEnum;
use clifford_core::metrics::{
    disjoint_union_distance, metric_axiom_suite, AxiomReport, BowmanMetricData, CliffordModel, Point, YeagerMetric,
};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::json;

use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricKind {
    Bowman,
    Yeager,
    Disjoint,
}

fn point<M: CliffordModel>(model: &M, label: &str) -> Result<Point<M::Idem>> {
    model
        .point_by_label(label)
        .ok_or_else(|| anyhow!("unknown point {label:?}; expected \"idempotent,group element\""))
}

pub fn eval<M: CliffordModel + Clone>(
    data: &BowmanMetricData<M>,
    kind: MetricKind,
    p: &str,
    q: &str,
    truncation: Option<usize>,
) -> Result<Report> {
    let model = data.model();
    let (pp, qq) = (point(model, p)?, point(model, q)?);
    let rep = match kind {
        MetricKind::Bowman => {
            let v = match truncation {
                Some(j) => data.bowman_distance(&pp, &qq, j)?,
                None => data.distance(&pp, &qq),
            };
            Report::new(v.to_string(), &json!({"metric": "bowman", "p": p, "q": q, "value": v}))
                .tsv_pairs([("value", v.value.to_string()), ("tail_bound", v.tail_bound.to_string())])
        }
        MetricKind::Yeager => {
            let y = YeagerMetric::new(model.clone())?;
            let v = y.distance(&pp, &qq);
            Report::new(v.to_string(), &json!({"metric": "yeager", "p": p, "q": q, "value": v.to_string()}))
                .tsv_pairs([("value", v)])
        }
        MetricKind::Disjoint => {
            let v = disjoint_union_distance(model, &pp, &qq);
            Report::new(v.to_string(), &json!({"metric": "disjoint", "p": p, "q": q, "value": v.to_string()}))
                .tsv_pairs([("value", v)])
        }
    };
    Ok(rep)
}

struct Extra {
    out_of_range: usize,
    separated: usize,
    unseparated: Vec<String>,
    non_injective: Vec<String>,
}

pub fn suite<M: CliffordModel + Clone>(
    data: &BowmanMetricData<M>,
    kind: MetricKind,
    tolerance: Option<f64>,
) -> Result<Report> {
    let model = data.model();
    let points = model.points();
    let exact: Box<dyn Fn(&Point<M::Idem>, &Point<M::Idem>) -> BigRational + Sync + '_> = match kind {
        MetricKind::Bowman => Box::new(|p, q| data.distance(p, q).value),
        MetricKind::Yeager => {
            let y = YeagerMetric::new(model.clone())?;
            Box::new(move |p, q| y.distance(p, q))
        }
        MetricKind::Disjoint => Box::new(|p, q| disjoint_union_distance(model, p, q)),
    };
    let report: AxiomReport = match tolerance {
        None => metric_axiom_suite(&points, &exact, BigRational::zero()),
        Some(t) => {
            if !(t >= 0.0) {
                bail!("tolerance must be non-negative");
            }
            metric_axiom_suite(&points, |p, q| exact(p, q).to_f64().unwrap_or(f64::NAN), t)
        }
    };
    let extra = (kind == MetricKind::Bowman).then(|| bowman_extras(data, &points));

    let label = |i: usize| model.point_label(&points[i]);
    let mut human = format!(
        "{} metric over {} points, {} triples: {}\n",
        match kind {
            MetricKind::Bowman => "bowman",
            MetricKind::Yeager => "yeager",
            MetricKind::Disjoint => "disjoint-union",
        },
        report.points,
        report.triples,
        if report.passed() { "all axioms hold" } else { "VIOLATIONS" }
    );
    let mut tsv = String::from("axiom\tpoints\tdetail\n");
    for v in &report.violations {
        let pts: Vec<String> = v.points.iter().map(|&i| label(i)).collect();
        let _ = writeln!(human, "  {}: {} ({})", v.axiom, pts.join(" / "), v.detail);
        let _ = writeln!(tsv, "{}\t{}\t{}", v.axiom, pts.join(";"), v.detail);
    }
    let mut violations = !report.passed();
    if let Some(x) = &extra {
        let _ = writeln!(human, "bound 0 ≤ d ≤ 3: {} pair(s) outside", x.out_of_range);
        let _ = writeln!(
            human,
            "separation: {} pair(s) with a witness b ≪ e, {} without",
            x.separated,
            x.unseparated.len()
        );
        for u in &x.unseparated {
            let _ = writeln!(human, "  unseparated: {u}");
            let _ = writeln!(tsv, "separation\t{u}\tno witness");
        }
        for e in &x.non_injective {
            let _ = writeln!(human, "  η not injective at {e}");
        }
        violations |= x.out_of_range > 0 || !x.unseparated.is_empty();
    }
    let violations_json: Vec<_> = report
        .violations
        .iter()
        .map(|v| json!({"axiom": v.axiom, "points": v.points.iter().map(|&i| label(i)).collect::<Vec<_>>(), "detail": v.detail}))
        .collect();
    let structured = json!({
        "points": report.points,
        "triples": report.triples,
        "violations": violations_json,
        "out_of_range": extra.as_ref().map(|x| x.out_of_range),
        "separated_pairs": extra.as_ref().map(|x| x.separated),
        "unseparated_pairs": extra.as_ref().map(|x| x.unseparated.clone()),
        "eta_non_injective": extra.as_ref().map(|x| x.non_injective.clone()),
    });
    Ok(Report::new(human, &structured).tsv(tsv).violations(violations))
}

fn bowman_extras<M: CliffordModel>(data: &BowmanMetricData<M>, points: &[Point<M::Idem>]) -> Extra {
    let model = data.model();
    let three = BigRational::from_integer(3.into());
    let mut out_of_range = 0;
    for p in points {
        for q in points {
            let v = data.distance(p, q).value;
            if v < BigRational::zero() || v > three {
                out_of_range += 1;
            }
        }
    }
    let mut separated = 0;
    let mut unseparated = Vec::new();
    let mut non_injective = Vec::new();
    for e in model.idempotents() {
        if !data.eta_injective(&e) {
            non_injective.push(e.to_string());
            continue;
        }
        let n = model.group_order(&e);
        for g in 0..n {
            for h in g + 1..n {
                match data.separation_witness(&e, g, h) {
                    Some(_) => separated += 1,
                    None => unseparated.push(format!(
                        "{} / {}",
                        model.point_label(&Point::new(e.clone(), g)),
                        model.point_label(&Point::new(e.clone(), h))
                    )),
                }
            }
        }
    }
    Extra {
        out_of_range,
        separated,
        unseparated,
        non_injective,
    }
}
