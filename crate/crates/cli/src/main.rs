mod metric;
mod report;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use clifford_core::c1::{rigidity_report, ScanConfig};
use clifford_core::demo::{self, flat_convergence_distance};
use clifford_core::document::{Body, CayleyBody, MetricInstance, SpecBody, WorkbenchDocument};
use clifford_core::metrics::{convergence_probe, disjoint_union_distance, Point};
use clifford_core::order::{is_basis, way_below_all, way_below_by_definition, FinitePoset, FlatPoint};
use clifford_core::semigroup::{classify, green_j_classes, is_trivial_clifford, FiniteSemigroup};
use clifford_core::strong::{
    assemble, decompose, product_spec, validate_spec, GroupTable, StrongSemilatticeSpec,
};
use clifford_core::topology::{
    basic_set, bowman_basic_set, continuity_check, members, mp_equivalences, order_graph_closed,
};
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::json;

use metric::MetricKind;
use report::{join, table, Format, Report};

#[derive(Parser)]
#[command(name = "clifford", version, about = "Finite Clifford semigroup workbench")]
struct Cli {
    /// Report channel.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Float-mode comparison slack for metric-suite.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Step budget for isomorphism searches.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: u64,
    /// Number of basis terms summed by the bowman metric.
    #[arg(long, global = true)]
    truncation: Option<usize>,
    /// Fixed-point scan radius.
    #[arg(long, global = true)]
    scan: Option<f64>,
    /// Fixed-point scan grid spacing.
    #[arg(long, global = true)]
    grid: Option<f64>,
    /// Newton iterations per seed.
    #[arg(long, global = true)]
    newton: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a document and validate its model.
    Validate { file: PathBuf },
    /// Inverse / Clifford / group classification.
    Classify { file: PathBuf },
    /// Decompose a Clifford semigroup into a strong semilattice of groups.
    Decompose { file: PathBuf },
    /// Multiplication table of a strong semilattice of groups.
    Assemble { file: PathBuf },
    /// Direct product of a semilattice and a group.
    Product { semilattice: PathBuf, group: PathBuf },
    /// Green's J-classes.
    JClasses { file: PathBuf },
    /// Search for an isomorphism onto a product E × G.
    TrivialCheck { file: PathBuf },
    /// Way-below relation of a finite poset, checked against its definition.
    WayBelow { file: PathBuf },
    /// Whether a subset of a poset is a basis.
    BasisCheck {
        file: PathBuf,
        /// Comma-separated element labels.
        #[arg(long, value_delimiter = ',')]
        basis: Vec<String>,
    },
    /// Continuity and open-subgroup conditions of a topological model.
    TopoCheck { file: PathBuf },
    /// Basic open set W(U, (e, V)); without --e, the set W_B(U, V).
    BasicSet {
        file: PathBuf,
        /// Comma-separated idempotent labels.
        #[arg(long, value_delimiter = ',')]
        u: Vec<String>,
        #[arg(long)]
        e: Option<String>,
        /// Comma-separated group element labels.
        #[arg(long, value_delimiter = ',')]
        v: Vec<String>,
    },
    /// Distance between two points.
    MetricEval {
        #[arg(value_enum)]
        metric: MetricKind,
        file: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Exhaustive metric-axiom suite over every enumerated point.
    MetricSuite {
        #[arg(value_enum)]
        metric: MetricKind,
        file: PathBuf,
    },
    /// Distances from (1/k, g) to (0, g) on a flat model.
    Converge {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ConvergeMetric::Bowman)]
        metric: ConvergeMetric,
        /// Group element label; the identity by default.
        #[arg(long)]
        g: Option<String>,
        #[arg(long, default_value_t = 2000)]
        k: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.01,0.001")]
        thresholds: Vec<f64>,
    },
    /// Differentiability probe, rigidity operator and fixed-point scan.
    C1Probe { file: PathBuf },
    /// Run every acceptance check over the built-in catalog.
    Demo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConvergeMetric {
    Bowman,
    Disjoint,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rep) => {
            print!("{}", rep.render(cli.format));
            if rep.violations {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<WorkbenchDocument> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    WorkbenchDocument::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

/// A Cayley document, or a spec document assembled.
fn semigroup_of(doc: &WorkbenchDocument) -> Result<FiniteSemigroup> {
    match &doc.body {
        Body::Spec(_) => Ok(assemble(&spec_of(doc)?)),
        _ => Ok(doc.semigroup()?),
    }
}

/// A spec document, or the spec behind a finite metric document.
fn spec_of(doc: &WorkbenchDocument) -> Result<StrongSemilatticeSpec> {
    match &doc.body {
        Body::MetricData(_) => match doc.metric()? {
            MetricInstance::Finite(d) => Ok(d.model().spec().clone()),
            MetricInstance::Flat(_) => bail!("flat metric models have no finite spec"),
        },
        _ => Ok(validate_spec(&doc.raw_spec()?)?),
    }
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Validate { file } => validate(&load(file)?),
        Command::Classify { file } => classify_cmd(&semigroup_of(&load(file)?)?),
        Command::Decompose { file } => decompose_cmd(&load(file)?),
        Command::Assemble { file } => {
            let doc = load(file)?;
            let s = assemble(&spec_of(&doc)?);
            Ok(cayley_report(&doc.meta.name, &s))
        }
        Command::Product { semilattice, group } => {
            let e = load(semilattice)?.semigroup()?;
            let g = GroupTable::new(load(group)?.semigroup()?)?;
            let s = assemble(&product_spec(&e, &g)?);
            Ok(cayley_report("product", &s))
        }
        Command::JClasses { file } => j_classes(&semigroup_of(&load(file)?)?),
        Command::TrivialCheck { file } => trivial_check(&semigroup_of(&load(file)?)?, cli.budget),
        Command::WayBelow { file } => way_below(&load(file)?.poset()?),
        Command::BasisCheck { file, basis } => basis_check(&load(file)?.poset()?, basis),
        Command::TopoCheck { file } => topo_check(&load(file)?),
        Command::BasicSet { file, u, e, v } => basic_set_cmd(&spec_of(&load(file)?)?, u, e.as_deref(), v),
        Command::MetricEval { metric, file, p, q } => match load(file)?.metric()? {
            MetricInstance::Finite(d) => metric::eval(&d, *metric, p, q, cli.truncation),
            MetricInstance::Flat(d) => metric::eval(&d, *metric, p, q, cli.truncation),
        },
        Command::MetricSuite { metric, file } => match load(file)?.metric()? {
            MetricInstance::Finite(d) => metric::suite(&d, *metric, cli.tolerance),
            MetricInstance::Flat(d) => metric::suite(&d, *metric, cli.tolerance),
        },
        Command::Converge {
            file,
            metric,
            g,
            k,
            thresholds,
        } => converge(&load(file)?, *metric, g.as_deref(), *k, thresholds, cli.truncation),
        Command::C1Probe { file } => c1_probe(&load(file)?, cli),
        Command::Demo => {
            let r = demo::run();
            Ok(Report::new(r.to_human(), &r).tsv(r.to_tsv()).violations(!r.passed()))
        }
    }
}

fn validate(doc: &WorkbenchDocument) -> Result<Report> {
    let kind = doc.kind();
    let outcome: Result<String, String> = match &doc.body {
        Body::Cayley(_) => doc
            .semigroup()
            .map(|s| format!("semigroup of order {}", s.order()))
            .map_err(|e| e.to_string()),
        Body::Spec(_) => match validate_spec(&doc.raw_spec()?) {
            Ok(s) => Ok(format!(
                "strong semilattice of groups: {} idempotents, {} elements",
                s.idempotent_count(),
                s.carrier_size()
            )),
            Err(v) => Err(v.violations.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join("\n")),
        },
        Body::Poset(_) => doc.poset().map(|p| format!("poset of {} elements", p.len())).map_err(|e| e.to_string()),
        Body::TopologyModel(_) => doc
            .topology_model()
            .map(|m| {
                format!(
                    "model of order {} with {} open sets; {}",
                    m.semigroup.order(),
                    m.topology.opens().len(),
                    if continuity_check(&m).continuous() {
                        "continuous"
                    } else {
                        "not continuous"
                    }
                )
            })
            .map_err(|e| e.to_string()),
        Body::MetricData(_) => doc
            .metric()
            .map(|m| match m {
                MetricInstance::Finite(d) => format!("finite metric model, basis of {}", d.basis().len()),
                MetricInstance::Flat(d) => format!("flat metric model, basis of {}", d.basis().len()),
            })
            .map_err(|e| e.to_string()),
        Body::ChartModel(_) => doc
            .chart()
            .map(|c| format!("chart model of dimension {}", c.dim))
            .map_err(|e| e.to_string()),
    };
    let (ok, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    let human = if ok {
        format!("valid {kind}: {detail}")
    } else {
        format!("invalid {kind}:\n{detail}")
    };
    Ok(Report::new(human, &json!({"kind": kind, "valid": ok, "detail": detail}))
        .tsv_pairs([("kind", kind.to_string()), ("valid", ok.to_string()), ("detail", detail.replace('\n', "; "))])
        .violations(!ok))
}

fn classify_cmd(s: &FiniteSemigroup) -> Result<Report> {
    let c = classify(s);
    let idem = join(c.idempotents.iter().map(|&e| s.label(e)));
    let rows = [
        ("is_inverse", c.is_inverse.to_string()),
        ("is_clifford", c.is_clifford.to_string()),
        ("clifford_by_inverses", c.clifford_by_inverses.to_string()),
        ("clifford_by_central_idempotents", c.clifford_by_central_idempotents.to_string()),
        ("is_group", c.is_group.to_string()),
        ("is_left_cancellative", c.is_left_cancellative.to_string()),
        ("is_right_cancellative", c.is_right_cancellative.to_string()),
        ("idempotents", idem),
    ];
    Ok(Report::new(c.summary(), &c).tsv_pairs(rows).violations(!c.criteria_agree()))
}

fn cayley_report(name: &str, s: &FiniteSemigroup) -> Report {
    let doc = WorkbenchDocument::new(name, "", Body::Cayley(CayleyBody::from_semigroup(s)));
    let mut tsv = String::from("x\ty\txy\n");
    for x in s.elements() {
        for y in s.elements() {
            let _ = writeln!(tsv, "{}\t{}\t{}", s.label(x), s.label(y), s.label(s.mul(x, y)));
        }
    }
    Report::document(table(s.labels(), |i, j| s.mul(i, j)), &doc).tsv(tsv)
}

fn decompose_cmd(doc: &WorkbenchDocument) -> Result<Report> {
    let s = semigroup_of(doc)?;
    let spec = decompose(&s)?;
    let e = spec.semilattice();
    let mut human = format!("E = {{{}}}\n", join(e.labels()));
    let mut tsv = String::from("f\te\tmap\n");
    for i in e.elements() {
        let g = spec.group(i);
        let _ = writeln!(human, "G_{} = {{{}}}", e.label(i), join(g.table().labels()));
    }
    for f in e.elements() {
        for i in e.elements() {
            if i != f && spec.le(i, f) {
                let map: Vec<String> = (0..spec.group(f).order())
                    .map(|x| format!("{}→{}", spec.group(f).label(x), spec.group(i).label(spec.bond(f, i, x))))
                    .collect();
                let _ = writeln!(human, "φ[{} → {}]: {}", e.label(f), e.label(i), join(&map));
                let _ = writeln!(tsv, "{}\t{}\t{}", e.label(f), e.label(i), map.join(" "));
            }
        }
    }
    let out = WorkbenchDocument::new(&doc.meta.name, "", Body::Spec(SpecBody::from_raw(&spec.to_raw())));
    Ok(Report::document(human, &out).tsv(tsv))
}

fn j_classes(s: &FiniteSemigroup) -> Result<Report> {
    let classes = green_j_classes(s);
    let mut human = String::new();
    let mut tsv = String::from("class\telement\n");
    let mut structured = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        let labels: Vec<&str> = c.iter().map(|&x| s.label(x)).collect();
        let _ = writeln!(human, "{{{}}}", join(&labels));
        for l in &labels {
            let _ = writeln!(tsv, "{i}\t{l}");
        }
        structured.push(labels);
    }
    Ok(Report::new(human, &structured).tsv(tsv))
}

fn trivial_check(s: &FiniteSemigroup, budget: u64) -> Result<Report> {
    let rep = match is_trivial_clifford(s, budget)? {
        None => Report::new("not trivial", &json!({"trivial": false})).tsv_pairs([("trivial", "false")]),
        Some(w) => {
            let mut human = format!("trivial: every maximal subgroup maps onto G_{}\n", s.label(w.reference));
            let mut tsv = String::from("idempotent\telement\timage\n");
            let inv = classify(s).inverse_structure.expect("clifford");
            for (e, theta) in &w.thetas {
                let group: Vec<usize> = s.elements().filter(|&x| inv.pi[x] == *e).collect();
                let map: Vec<String> = group
                    .iter()
                    .zip(theta)
                    .map(|(&x, &y)| format!("{}→{}", s.label(x), s.label(y)))
                    .collect();
                let _ = writeln!(human, "θ_{}: {}", s.label(*e), join(&map));
                for (&x, &y) in group.iter().zip(theta) {
                    let _ = writeln!(tsv, "{}\t{}\t{}", s.label(*e), s.label(x), s.label(y));
                }
            }
            Report::new(human, &json!({"trivial": true, "witness": w})).tsv(tsv)
        }
    };
    Ok(rep)
}

fn poset_label(p: &FinitePoset, x: usize) -> String {
    p.labels().get(x).cloned().unwrap_or_else(|| x.to_string())
}

fn way_below(p: &FinitePoset) -> Result<Report> {
    let wb = way_below_all(p);
    let mut human = String::new();
    let mut tsv = String::from("x\ty\tway_below\tby_definition\n");
    let mut mismatches = Vec::new();
    for x in 0..p.len() {
        let above: Vec<String> = wb.way_above(x).into_iter().map(|y| poset_label(p, y)).collect();
        let _ = writeln!(human, "↟{} = {{{}}}", poset_label(p, x), join(&above));
        for y in 0..p.len() {
            let fast = wb.way_below(x, y);
            let slow = way_below_by_definition(p, x, y)?;
            if fast != slow {
                mismatches.push((poset_label(p, x), poset_label(p, y)));
            }
            let _ = writeln!(tsv, "{}\t{}\t{fast}\t{slow}", poset_label(p, x), poset_label(p, y));
        }
    }
    let laws = wb.satisfies_basic_laws(p);
    let _ = writeln!(
        human,
        "agrees with the definition on all pairs: {}; basic laws: {}",
        if mismatches.is_empty() { "yes" } else { "NO" },
        if laws { "hold" } else { "FAIL" }
    );
    let structured = json!({"relation": wb.rel, "mismatches": mismatches, "basic_laws": laws});
    Ok(Report::new(human, &structured)
        .tsv(tsv)
        .violations(!mismatches.is_empty() || !laws))
}

fn basis_check(p: &FinitePoset, labels: &[String]) -> Result<Report> {
    let basis = labels
        .iter()
        .map(|l| {
            p.element_by_label(l)
                .or_else(|| l.parse().ok().filter(|&i: &usize| i < p.len()))
                .ok_or_else(|| anyhow!("unknown poset element {l:?}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let c = is_basis(p, &basis);
    let human = match c.witness {
        None => "basis".to_string(),
        Some(x) => format!("not a basis: B_{} is not directed with supremum {}", poset_label(p, x), poset_label(p, x)),
    };
    Ok(Report::new(human, &c)
        .tsv_pairs([
            ("is_basis", c.is_basis.to_string()),
            ("witness", c.witness.map(|x| poset_label(p, x)).unwrap_or_default()),
        ])
        .violations(!c.is_basis))
}

fn topo_check(doc: &WorkbenchDocument) -> Result<Report> {
    let m = doc.topology_model()?;
    let s = &m.semigroup;
    let set = |mask| format!("{{{}}}", join(members(mask).into_iter().map(|x| s.label(x))));
    let cont = continuity_check(&m);
    let mut human = String::new();
    let mut rows: Vec<(String, String)> = vec![
        ("multiplication_continuous".into(), cont.multiplication_continuous.to_string()),
        (
            "inversion_continuous".into(),
            cont.inversion_continuous.map(|b| b.to_string()).unwrap_or_else(|| "n/a".into()),
        ),
    ];
    let _ = writeln!(
        human,
        "multiplication: {}",
        match cont.multiplication_witness {
            None => "continuous".to_string(),
            Some(w) => format!("not continuous (preimage of {} is not open)", set(w)),
        }
    );
    match (cont.inversion_continuous, cont.inversion_witness) {
        (None, _) => human.push_str("inversion: not an inverse semigroup\n"),
        (Some(true), _) => human.push_str("inversion: continuous\n"),
        (Some(false), w) => {
            let _ = writeln!(human, "inversion: not continuous (preimage of {} is not open)", w.map(set).unwrap_or_default());
        }
    }
    let mut structured = json!({"continuity": cont});
    let mut violations = !cont.continuous();
    if cont.continuous() && classify(s).is_clifford {
        match mp_equivalences(&m) {
            Ok(r) => {
                let _ = writeln!(
                    human,
                    "MP property: {}; J-classes open: {}; maximal subgroups open: {}; E(S) discrete: {}; disjoint-union topology: {}",
                    r.mp_property, r.j_classes_open, r.subgroups_open, r.idempotents_discrete, r.disjoint_union_topology
                );
                for (k, v) in [
                    ("mp_property", r.mp_property),
                    ("j_classes_open", r.j_classes_open),
                    ("subgroups_open", r.subgroups_open),
                    ("idempotents_discrete", r.idempotents_discrete),
                    ("disjoint_union_topology", r.disjoint_union_topology),
                ] {
                    rows.push((k.into(), v.to_string()));
                }
                structured["mp"] = json!(r);
            }
            Err(e) => {
                let _ = writeln!(human, "MP conditions disagree: {e}");
                violations = true;
            }
        }
    }
    if cont.continuous() && s.is_semilattice() {
        let og = order_graph_closed(&m)?;
        let _ = writeln!(human, "order graph closed: {}; hausdorff: {}", og.order_graph_closed, og.hausdorff);
        rows.push(("order_graph_closed".into(), og.order_graph_closed.to_string()));
        rows.push(("hausdorff".into(), og.hausdorff.to_string()));
        structured["order_graph"] = json!(og);
    }
    Ok(Report::new(human, &structured).tsv_pairs(rows).violations(violations))
}

fn basic_set_cmd(spec: &StrongSemilatticeSpec, u: &[String], e: Option<&str>, v: &[String]) -> Result<Report> {
    let lat = spec.semilattice();
    let idem = |l: &str| lat.element_by_label(l).ok_or_else(|| anyhow!("unknown idempotent {l:?}"));
    let u_idx = u.iter().map(|l| idem(l)).collect::<Result<Vec<_>>>()?;
    let base = match e {
        Some(l) => idem(l)?,
        None => clifford_core::order::infimum(lat, &u_idx).ok_or_else(|| anyhow!("U is empty"))?,
    };
    let g = spec.group(base);
    let v_idx = v
        .iter()
        .map(|l| g.element_by_label(l).ok_or_else(|| anyhow!("unknown element {l:?} of G_{}", lat.label(base))))
        .collect::<Result<Vec<_>>>()?;
    let set = match e {
        Some(_) => basic_set(spec, &u_idx, base, &v_idx)?,
        None => bowman_basic_set(spec, &u_idx, &v_idx)?,
    };
    let labels: Vec<String> = set
        .iter()
        .map(|&x| {
            let (f, h) = spec.locate(x);
            spec.point_label(f, h)
        })
        .collect();
    let tsv = labels.iter().fold(String::from("point\n"), |mut s, l| {
        let _ = writeln!(s, "{l}");
        s
    });
    Ok(Report::new(format!("{{{}}}", labels.join("; ")), &labels).tsv(tsv))
}

fn converge(
    doc: &WorkbenchDocument,
    metric: ConvergeMetric,
    g: Option<&str>,
    k: usize,
    thresholds: &[f64],
    truncation: Option<usize>,
) -> Result<Report> {
    let MetricInstance::Flat(data) = doc.metric()? else {
        bail!("converge needs a flat metric model");
    };
    if k == 0 {
        bail!("--k must be at least 1");
    }
    let model = data.model();
    let top = model.top();
    let g = match g {
        None => top.identity(),
        Some(l) => top.element_by_label(l).ok_or_else(|| anyhow!("unknown element {l:?}"))?,
    };
    let rep = convergence_probe(
        |k| {
            let p = Point::new(FlatPoint::Recip(k as u64), g);
            let q = Point::new(FlatPoint::Zero, g);
            match (metric, truncation) {
                (ConvergeMetric::Disjoint, _) => (disjoint_union_distance(model, &p, &q), BigRational::zero()),
                (ConvergeMetric::Bowman, None) => flat_convergence_distance(&data, k as u64, g),
                (ConvergeMetric::Bowman, Some(j)) => {
                    let v = data.bowman_distance(&p, &q, j.max(1)).expect("nonzero truncation");
                    (v.value, v.tail_bound)
                }
            }
        },
        k,
        thresholds,
    );
    let last = rep.rows.last().expect("k ≥ 1");
    let mut human = format!(
        "d((1/k,{g}),(0,{g})) for k = 1..{k}: {}\nat k = {k}: {} (tail {})\n",
        if rep.non_increasing { "non-increasing" } else { "not monotone" },
        last.distance,
        last.tail_bound,
        g = top.label(g),
    );
    for t in &rep.thresholds {
        let _ = writeln!(
            human,
            "below {} from k = {}",
            t.threshold,
            t.eventually_below_from.map(|k| k.to_string()).unwrap_or_else(|| "never".into())
        );
    }
    Ok(Report::new(human, &rep).tsv(rep.to_tsv()))
}

fn c1_probe(doc: &WorkbenchDocument, cli: &Cli) -> Result<Report> {
    let model = doc.chart()?;
    let mut scan = ScanConfig::for_model(&model);
    if let Some(r) = cli.scan {
        scan.radius = r;
    }
    if let Some(h) = cli.grid {
        scan.grid = h;
    }
    if let Some(n) = cli.newton {
        scan.newton_iterations = n;
    }
    let r = rigidity_report(&model, &scan)?;
    let n = r.scan.points.len();
    let mut human = if !r.probe.differentiable {
        if n >= 10 {
            "NOT C¹ at idempotent; fixed-point continuum detected (≥10 points)\n".to_string()
        } else {
            format!("NOT C¹ at idempotent; {n} fixed point(s) found\n")
        }
    } else {
        format!("C¹ at idempotent; prediction: {}; {n} fixed point(s) found\n", r.prediction)
    };
    let _ = writeln!(
        human,
        "worst one-sided mismatch {:.3e} (noise floor {:.3e}), linearity defect {:.3e}",
        r.probe.worst_mismatch, r.probe.noise_floor, r.probe.linearity_defect
    );
    if let Some(op) = &r.operators {
        let _ = writeln!(
            human,
            "smallest singular value of DH(0) {:.6}; ‖L − R‖ {:.3e}",
            op.smallest_singular_value, op.centrality_defect
        );
    }
    let _ = writeln!(
        human,
        "scan: radius {}, grid {}, {} Newton iterations, {} seeds, {} diverged",
        scan.radius, scan.grid, scan.newton_iterations, r.scan.seeds, r.scan.diverged
    );
    if !r.consistent() {
        human.push_str("scan disagrees with the prediction\n");
    }
    let mut tsv = String::from("key\tvalue\n");
    let mut row = |k: &str, v: String| {
        let _ = writeln!(tsv, "{k}\t{v}");
    };
    row("differentiable", r.probe.differentiable.to_string());
    row("worst_mismatch", format!("{:.12e}", r.probe.worst_mismatch));
    row("noise_floor", format!("{:.12e}", r.probe.noise_floor));
    row("prediction", r.prediction.to_string());
    if let Some(op) = &r.operators {
        row("smallest_singular_value", format!("{:.12e}", op.smallest_singular_value));
        row("dh0_invertible", op.dh0_invertible.to_string());
    }
    row("fixed_points", n.to_string());
    for p in &r.scan.points {
        row("fixed_point", p.iter().map(|x| format!("{x:.9}")).collect::<Vec<_>>().join(","));
    }
    Ok(Report::new(human, &r).tsv(tsv).violations(!r.consistent()))
}
