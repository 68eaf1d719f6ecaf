//! One function per subcommand. Each returns the text and JSON renderings
//! of its result and whether a checked inequality failed.

use serde_json::{json, Value};
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use permatch::counting::{
    count_derangements, count_perfect_matchings, count_perfect_matchings_general,
    count_permutations, permutations_by_fixed_points, Permutation,
};
use permatch::exact::ExactRatio;
use permatch::graph::{
    construct as build, isolated_matching_graph, parse_graph, serialize_graph, serialize_graph_json,
    AnyGraph, BipartiteGraph, Construction, UndirectedGraph,
};
use permatch::injection::{apply_injection, cycle_decomposition, invert_injection};
use permatch::random::{expected_counts_dgnm, inclusion_probability_f, mc_dp_ratio, ModelSpec};
use permatch::verify::{
    check_blowup_formulas, check_corollary, check_injection, check_subpermanent, check_theorem1,
    check_theorem2, check_theorem3, check_theorem6, scan as run_scan, Family, RecordFormat,
    ScanConfig, TheoremReport, DECIMAL_DIGITS,
};
use permatch::{Error, Result};

use crate::{FamilyArg, Kind, Model, Theorem, What};

pub struct Output {
    pub text: String,
    pub json: Value,
    pub violated: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Self { text, json, violated: false }
    }
}

fn with_path(path: &Path, e: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

/// Every failure to turn the file into a graph is a file error, including
/// well-formed lines that name a bad vertex.
fn read_graph(path: &Path) -> Result<AnyGraph> {
    let text = fs::read_to_string(path).map_err(|e| with_path(path, e))?;
    parse_graph(&text).map_err(|e| match e {
        Error::Io(_) | Error::Syntax { .. } | Error::Json(_) => e,
        other => with_path(path, std::io::Error::new(std::io::ErrorKind::InvalidData, other.to_string())),
    })
}

fn symmetric(g: &AnyGraph) -> Option<UndirectedGraph> {
    match g {
        AnyGraph::Undirected(u) => Some(u.clone()),
        AnyGraph::Directed(d) => UndirectedGraph::from_digraph(d.clone()).ok(),
        AnyGraph::Bipartite(b) => b.to_undirected().ok(),
    }
}

fn bipartite(g: &AnyGraph) -> Result<BipartiteGraph> {
    match g {
        AnyGraph::Bipartite(b) => Ok(b.clone()),
        other => symmetric(other)
            .and_then(|u| u.bipartition())
            .ok_or_else(|| bad("this check needs a bipartite graph")),
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadParams(msg.into())
}

fn exact(r: &ExactRatio) -> String {
    format!("{r} ({})", r.to_decimal(DECIMAL_DIGITS))
}

/// Accepts a decimal such as `0.5` or a fraction such as `1/2`.
pub fn parse_probability(s: &str) -> std::result::Result<f64, String> {
    let q = if s.contains('/') {
        s.parse::<ExactRatio>()?.to_f64()
    } else {
        s.parse::<f64>().map_err(|e| e.to_string())?
    };
    if (0.0..=1.0).contains(&q) {
        Ok(q)
    } else {
        Err(format!("{s} is not a probability"))
    }
}

fn matchings(g: &AnyGraph) -> Result<permatch::BigCount> {
    match g {
        AnyGraph::Bipartite(b) => count_perfect_matchings(b),
        other => count_perfect_matchings_general(
            &symmetric(other).ok_or_else(|| bad("perfect matchings need an undirected or bipartite graph"))?,
        ),
    }
}

pub fn count(input: &Path, what: What) -> Result<Output> {
    let g = read_graph(input)?;
    let d = g.as_digraph()?;
    Ok(match what {
        What::Derangements | What::Permutations | What::Matchings => {
            let (name, value) = match what {
                What::Derangements => ("derangements", count_derangements(&d)?),
                What::Permutations => ("permutations", count_permutations(&d)?),
                _ => ("matchings", matchings(&g)?),
            };
            Output::ok(format!("{value}\n"), json!({ "what": name, "value": value.to_string() }))
        }
        What::Ratio => {
            let (dc, pc) = (count_derangements(&d)?, count_permutations(&d)?);
            let r = ExactRatio::new(dc.clone(), pc.clone());
            Output::ok(
                format!("{}\n", exact(&r)),
                json!({
                    "what": "ratio",
                    "derangements": dc.to_string(),
                    "permutations": pc.to_string(),
                    "ratio": r.to_string(),
                    "decimal": r.to_decimal(DECIMAL_DIGITS),
                }),
            )
        }
        What::FixedPoints => {
            let counts = permutations_by_fixed_points(&d)?;
            let mut text = String::new();
            for (m, c) in counts.iter().enumerate() {
                writeln!(text, "{m} {c}").unwrap();
            }
            let counts: Vec<String> = counts.iter().map(ToString::to_string).collect();
            Output::ok(text, json!({ "what": "fixed-points", "counts": counts }))
        }
    })
}

fn need(value: Option<usize>, flag: &str, kind: &str) -> Result<usize> {
    value.ok_or_else(|| bad(format!("--kind {kind} needs --{flag}")))
}

pub fn construct(kind: Kind, n: Option<usize>, k: Option<usize>, l: Option<usize>, out: &Path) -> Result<Output> {
    let (c, name) = match kind {
        Kind::Cycle => (Construction::Cycle { n: need(n, "n", "cycle")? }, "cycle"),
        Kind::Complete => (Construction::Complete { n: need(n, "n", "complete")? }, "complete"),
        Kind::CompleteBipartite => (
            Construction::CompleteBipartite { n: need(n, "n", "complete-bipartite")? },
            "complete-bipartite",
        ),
        Kind::Blowup => (
            Construction::Blowup { k: need(k, "k", "blowup")?, l: need(l, "l", "blowup")? },
            "blowup",
        ),
        Kind::Thm2h => (Construction::MatchingGadget { n: need(n, "n", "thm2h")? }, "thm2h"),
    };
    let g = build(c)?;
    let body = if out.extension().is_some_and(|e| e == "json") {
        serialize_graph_json(&g) + "\n"
    } else {
        serialize_graph(&g)
    };
    fs::write(out, body).map_err(|e| with_path(out, e))?;
    let digraph = g.as_digraph()?;
    let mut text = format!(
        "wrote {} ({}, {} vertices, {} arcs)\n",
        out.display(),
        g.kind(),
        digraph.n(),
        digraph.arc_count()
    );
    let mut value = json!({
        "kind": name,
        "out": out.display().to_string(),
        "type": g.kind(),
        "vertices": digraph.n(),
        "arcs": digraph.arc_count(),
    });
    if let Construction::MatchingGadget { n } = c {
        let (_, m0) = isolated_matching_graph(n)?;
        let edges: Vec<[usize; 2]> = m0.edges().map(|(a, b)| [a, b]).collect();
        let listed: Vec<String> = edges.iter().map(|[a, b]| format!("{a}-{b}")).collect();
        writeln!(text, "isolated matching: {}", listed.join(" ")).unwrap();
        value["isolated_matching"] = json!(edges);
    }
    Ok(Output::ok(text, value))
}

pub fn inject(input: &Path, vertex: usize, perm: &str, invert: bool) -> Result<Output> {
    let g = read_graph(input)?.as_digraph()?;
    let p: Permutation = perm
        .parse()
        .map_err(|e| bad(format!("--perm: {e}")))?;
    let result = if invert {
        invert_injection(&g, &p, vertex)?
    } else {
        apply_injection(&g, &p, vertex)?
    };
    let dec = cycle_decomposition(&g, &result)?;
    let text = format!("{result}\n");
    Ok(Output::ok(
        text,
        json!({
            "direction": if invert { "inverse" } else { "forward" },
            "vertex": vertex,
            "input": p.to_string(),
            "output": result.to_string(),
            "cycles": dec.cycles,
            "fixed_points": dec.fixed,
        }),
    ))
}

fn reports_output(theorem: &str, reports: Vec<TheoremReport>) -> Output {
    let violated = reports.iter().any(|r| !r.holds);
    let mut text = String::new();
    if reports.is_empty() {
        text.push_str("nothing to check (no perfect matchings)\n");
    }
    for r in &reports {
        if reports.len() == 1 {
            writeln!(text, "{}: {}", r.verdict(), r.detail).unwrap();
        } else {
            writeln!(text, "{}: {} [{}]", r.verdict(), r.detail, r.instance).unwrap();
        }
    }
    let json = json!({
        "theorem": theorem,
        "holds": !violated,
        "reports": reports,
    });
    Output { text, json, violated }
}

pub fn verify(theorem: Theorem, input: Option<&Path>, k: Option<usize>, l: Option<usize>) -> Result<Output> {
    if let Theorem::Blowup = theorem {
        let (k, l) = match (k, l) {
            (Some(k), Some(l)) => (k, l),
            _ => return Err(bad("--theorem blowup needs --k and --l")),
        };
        return Ok(reports_output("blowup", vec![check_blowup_formulas(k, l)?]));
    }
    let path = input.ok_or_else(|| bad("--input is required for this check"))?;
    let g = read_graph(path)?;
    let (name, reports) = match theorem {
        Theorem::One => ("1", check_theorem1(&bipartite(&g)?)?),
        Theorem::Two => {
            let u = symmetric(&g).ok_or_else(|| bad("this check needs an undirected graph"))?;
            ("2", check_theorem2(&u)?)
        }
        Theorem::Three => ("3", vec![check_theorem3(&g.as_digraph()?)?]),
        Theorem::Six => ("6", vec![check_theorem6(&bipartite(&g)?)?]),
        Theorem::Injection => ("injection", vec![check_injection(&g.as_digraph()?)?]),
        Theorem::Corollary => ("corollary", vec![check_corollary(&g.as_digraph()?)?]),
        Theorem::Subpermanent => {
            let m = match &g {
                AnyGraph::Bipartite(b) => b.biadjacency(),
                other => other.as_digraph()?.adjacency_matrix(),
            };
            ("subpermanent", check_subpermanent(&m)?)
        }
        Theorem::Blowup => unreachable!("handled above"),
    };
    Ok(reports_output(name, reports))
}

pub fn scan(family: FamilyArg, n: usize, samples: Option<usize>, seed: u64, out: &Path) -> Result<Output> {
    let family = match family {
        FamilyArg::Digraphs => Family::Digraphs,
        FamilyArg::Bipartite => Family::Bipartite,
        FamilyArg::SampledUndirected => Family::SampledUndirected,
    };
    let format = if out.extension().is_some_and(|e| e == "jsonl") {
        RecordFormat::JsonLines
    } else {
        RecordFormat::Csv
    };
    let file = BufWriter::new(File::create(out).map_err(|e| with_path(out, e))?);
    let summary = run_scan(&ScanConfig { family, n, samples, seed }, format, file)?;
    let mut text = format!(
        "{} graphs ({}), max ratio {} ({}) at {} [{} graphs]\ncounterexamples: {}\n",
        summary.graphs,
        if summary.exhaustive { "exhaustive" } else { "sampled" },
        summary.max_ratio,
        summary.max_ratio_float,
        summary.argmax,
        summary.argmax_count,
        summary.counterexamples,
    );
    if let Some(r) = &summary.reference {
        writeln!(
            text,
            "reference {} ratio {} ({}): exceeded by {} graphs",
            r.graph, r.ratio, r.ratio_float, summary.reference_exceedances
        )
        .unwrap();
    }
    for w in &summary.witnesses {
        writeln!(text, "violated {}: {} [{}]", w.theorem, w.detail, w.instance).unwrap();
    }
    Ok(Output {
        text,
        violated: summary.counterexamples > 0,
        json: serde_json::to_value(&summary)?,
    })
}

pub fn mc(model: Model, n: usize, q: f64, samples: usize, seed: u64) -> Result<Output> {
    let model_spec = match model {
        Model::Graph => ModelSpec::Graph { n, q },
        Model::Digraph => ModelSpec::Digraph { n, q },
    };
    let s = mc_dp_ratio(&model_spec, samples, seed)?;
    let text = format!(
        "mean {:.12} stddev {:.12} over {} samples; e^(-1/q) = {:.12}\n",
        s.mean, s.stddev, s.samples, s.target
    );
    Ok(Output::ok(text, serde_json::to_value(&s)?))
}

pub fn expect(n: usize, m: usize) -> Result<Output> {
    let f = inclusion_probability_f(n, m, n)?;
    let (ex, ey) = expected_counts_dgnm(n, m)?;
    let text = format!("f(n) = {}\nE[X] = {}\nE[Y] = {}\n", exact(&f), exact(&ex), exact(&ey));
    let pair = |r: &ExactRatio| json!({ "exact": r.to_string(), "decimal": r.to_decimal(DECIMAL_DIGITS) });
    Ok(Output::ok(
        text,
        json!({ "n": n, "m": m, "f": pair(&f), "ex": pair(&ex), "ey": pair(&ey) }),
    ))
}
