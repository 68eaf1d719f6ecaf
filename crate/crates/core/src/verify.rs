//! Executable checks of the counting inequalities, and scans that apply
//! them to whole families of small graphs.
//!
//! A checker never fails because an inequality is violated; it returns a
//! report with `holds = false` and a witness. Errors are reserved for
//! inputs outside a checker's size range.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use crate::counting::{
    all_intersection_tallies,
    bipartite_intersection_tally, bipartite_permutation_sum, count_derangements,
    count_perfect_matchings, count_permutations, dp_ratio,
    enumerate_bipartite_matchings, enumerate_perfect_matchings_general, enumerate_permutations,
    inverse_factorial_power_sum, matching_intersection_tally, IntersectionTally,
};
use crate::error::{too_large, Error, Result};
use crate::exact::{binomial, factorial, ExactRatio};
use crate::graph::{
    bipartitions_over_matching, blowup, complete_bipartite, complete_graph, BipartiteGraph,
    BipartiteMatching, Digraph, PerfectMatching, UndirectedGraph,
};
use crate::injection::{apply_injection, choose_special_vertex, hamilton_census, invert_injection};
use crate::permanent::{subpermanent_sides, IntMatrix};
use crate::random::{draw, stream, ModelSpec, MAX_MC_VERTICES};

pub const MAX_THEOREM1_PART: usize = 6;
pub const MAX_THEOREM2_VERTICES: usize = 12;
pub const MAX_THEOREM3_VERTICES: usize = 24;
pub const MAX_THEOREM6_PART: usize = 6;
pub const MAX_INJECTION_VERTICES: usize = 7;
pub const MAX_BLOWUP_VERTICES: usize = 30;
pub const MAX_BLOWUP_ENUMERATION: usize = 12;
pub const DECIMAL_DIGITS: usize = 12;

/// Outcome of one checker on one instance. `witness` is set exactly when
/// `holds` is false.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub instance: String,
    pub holds: bool,
    pub equality: bool,
    pub detail: String,
    pub witness: Option<String>,
}

impl TheoremReport {
    fn new(theorem: &str, instance: String, holds: bool, equality: bool, detail: String) -> Self {
        Self {
            theorem: theorem.into(),
            instance,
            holds,
            equality,
            witness: (!holds).then(|| detail.clone()),
            detail,
        }
    }

    pub fn verdict(&self) -> &'static str {
        match (self.holds, self.equality) {
            (false, _) => "violated",
            (true, true) => "holds (equality)",
            (true, false) => "holds (strict)",
        }
    }
}

fn describe(g: &Digraph) -> String {
    format!("digraph n={} arcs={} [{}]", g.n(), g.arc_count(), g.adjacency_hex())
}

fn describe_bipartite(b: &BipartiteGraph) -> String {
    let rows: Vec<String> = b.rows().iter().map(|r| format!("{r:x}")).collect();
    format!("bipartite {}+{} [{}]", b.left(), b.right(), rows.join(":"))
}

fn matching_label(edges: impl Iterator<Item = (usize, usize)>) -> String {
    let parts: Vec<String> = edges.map(|(a, b)| format!("{a}-{b}")).collect();
    format!("matching {{{}}}", parts.join(","))
}

/// Every perfect matching `M` meets at least half of all perfect matchings:
/// `hits ≥ misses`. The permanent-based tally is cross-checked against
/// pairwise enumeration.
pub fn check_theorem1(b: &BipartiteGraph) -> Result<Vec<TheoremReport>> {
    too_large("Theorem 1 part size", b.left().max(b.right()), MAX_THEOREM1_PART)?;
    if !b.is_balanced() {
        return Ok(Vec::new());
    }
    let all = enumerate_bipartite_matchings(b)?;
    all.iter()
        .map(|m| {
            let tally = bipartite_intersection_tally(b, m)?;
            let misses = all.iter().filter(|x| !x.intersects(m)).count();
            let consistent = tally.misses == misses.into() && tally.total() == all.len().into();
            let mut detail = format!("hits = {}, misses = {}", tally.hits, tally.misses);
            if !consistent {
                write!(detail, "; enumeration finds {misses} misses of {}", all.len()).unwrap();
            }
            let label = matching_label(m.right_of().iter().copied().enumerate());
            Ok(TheoremReport::new(
                "1",
                format!("{} {label}", describe_bipartite(b)),
                consistent && tally.hits >= tally.misses,
                tally.hits == tally.misses,
                detail,
            ))
        })
        .collect()
}

/// The matchings of `g` disjoint from `m`, found through the bipartitions
/// that separate `m`, as mate vectors.
fn disjoint_via_bipartitions(
    g: &UndirectedGraph,
    m: &PerfectMatching,
) -> Result<(Vec<IntersectionTally>, HashSet<Vec<usize>>)> {
    let parts = bipartitions_over_matching(g, m)?;
    let half = g.n() / 2;
    let diagonal = BipartiteMatching::new((0..half).collect())?;
    let mut tallies = Vec::with_capacity(parts.len());
    let mut covered = HashSet::new();
    for p in &parts {
        tallies.push(bipartite_intersection_tally(&p.cross, &diagonal)?);
        for x in enumerate_bipartite_matchings(&p.cross)? {
            if x.intersects(&diagonal) {
                continue;
            }
            let mut mate = vec![0; g.n()];
            for (i, &j) in x.right_of().iter().enumerate() {
                mate[p.left[i]] = p.right[j];
                mate[p.right[j]] = p.left[i];
            }
            covered.insert(mate);
        }
    }
    Ok((tallies, covered))
}

/// Every perfect matching `M` of a graph on `2n` vertices meets at least a
/// `1/(2^(n-1) + 1)` fraction: `misses ≤ 2^(n-1)·hits`. Also checks the
/// chain `misses ≤ Σ b_i ≤ Σ a_i ≤ 2^(n-1)·hits` over the bipartitions
/// separating `M`, where `a_i`, `b_i` are hits and misses in bipartition
/// `i`, and that every disjoint matching is separated by some bipartition.
pub fn check_theorem2(g: &UndirectedGraph) -> Result<Vec<TheoremReport>> {
    too_large("Theorem 2 vertex count", g.n(), MAX_THEOREM2_VERTICES)?;
    if g.n() == 0 || g.n() % 2 == 1 {
        return Ok(Vec::new());
    }
    let half = g.n() / 2;
    let scale = BigUint::one() << (half - 1);
    enumerate_perfect_matchings_general(g)?
        .iter()
        .map(|m| {
            let tally = matching_intersection_tally(g, m)?;
            let bound = &scale * &tally.hits;
            let (parts, covered) = disjoint_via_bipartitions(g, m)?;
            let sum_a: BigUint = parts.iter().map(|t| &t.hits).sum();
            let sum_b: BigUint = parts.iter().map(|t| &t.misses).sum();
            let mut detail = format!(
                "hits = {}, misses = {}, 2^{} * hits = {bound}",
                tally.hits,
                tally.misses,
                half - 1
            );
            let mut ok = tally.misses <= bound;
            if let Some(i) = parts.iter().position(|t| t.hits < t.misses) {
                ok = false;
                write!(detail, "; bipartition {i} has more misses than hits").unwrap();
            }
            if !(tally.misses <= sum_b && sum_b <= sum_a && sum_a <= bound) {
                ok = false;
                write!(detail, "; chain broken with sum a = {sum_a}, sum b = {sum_b}").unwrap();
            }
            if BigUint::from(covered.len()) != tally.misses {
                ok = false;
                write!(detail, "; bipartitions separate {} disjoint matchings", covered.len()).unwrap();
            }
            Ok(TheoremReport::new(
                "2",
                format!("{} {}", describe(g.digraph()), matching_label(m.edges())),
                ok,
                tally.misses == bound,
                detail,
            ))
        })
        .collect()
}

/// `2d ≤ p`, with equality exactly for directed cycles.
pub fn check_theorem3(g: &Digraph) -> Result<TheoremReport> {
    too_large("Theorem 3 vertex count", g.n(), MAX_THEOREM3_VERTICES)?;
    let d = count_derangements(g)?;
    let p = count_permutations(g)?;
    Ok(theorem3_report(g, &d, &p))
}

fn theorem3_report(g: &Digraph, d: &BigUint, p: &BigUint) -> TheoremReport {
    let twice = d * 2u32;
    let equality = twice == *p;
    let cycle = g.is_directed_cycle();
    let mut detail = format!("d = {d}, p = {p}");
    if equality != cycle {
        write!(
            detail,
            "; equality {} but the graph {} a directed cycle",
            if equality { "holds" } else { "fails" },
            if cycle { "is" } else { "is not" }
        )
        .unwrap();
    }
    TheoremReport::new("3", describe(g), twice <= *p && equality == cycle, equality, detail)
}

/// For an undirected balanced bipartite graph with `d > 0`:
/// `p ≥ d·Σ_{k=0}^{n} 1/(k!)²`, with equality exactly for `K_{n,n}`. Also
/// checks `d = per(M)²` and `p = Σ per(M(S,S'))²`.
pub fn check_theorem6(b: &BipartiteGraph) -> Result<TheoremReport> {
    too_large("Theorem 6 part size", b.left().max(b.right()), MAX_THEOREM6_PART)?;
    let u = b.to_undirected()?;
    let d = count_derangements(u.digraph())?;
    let p = count_permutations(u.digraph())?;
    let instance = describe_bipartite(b);
    if d.is_zero() {
        return Ok(TheoremReport::new(
            "6",
            instance,
            true,
            false,
            format!("no derangements (d = 0, p = {p})"),
        ));
    }
    let n = b.left();
    let mut problems = String::new();
    let pm = count_perfect_matchings(b)?;
    if &pm * &pm != d {
        write!(problems, "; d differs from per(M)^2 = {}", &pm * &pm).unwrap();
    }
    let sum = bipartite_permutation_sum(b)?;
    if sum != p {
        write!(problems, "; p differs from the submatrix sum {sum}").unwrap();
    }
    let lhs = ExactRatio::from_integer(p.clone());
    let rhs = &inverse_factorial_power_sum(n, 2) * &d;
    let equality = lhs == rhs;
    if equality != b.is_complete() {
        write!(problems, "; equality does not match completeness").unwrap();
    }
    Ok(TheoremReport::new(
        "6",
        instance,
        problems.is_empty() && lhs >= rhs,
        equality,
        format!("d = {d}, p = {p}, d * sum 1/(k!)^2 = {rhs}{problems}"),
    ))
}

/// Injectivity, fixed points in the image, round trips for every root, the
/// special vertex missing the identity, and `p ≥ 2d + 1` off cycles.
pub fn check_injection(g: &Digraph) -> Result<TheoremReport> {
    let n = g.n();
    too_large("injection check vertex count", n, MAX_INJECTION_VERTICES)?;
    let ders = enumerate_permutations(g, true)?;
    let d = ders.len();
    let p = count_permutations(g)?;
    let cycle = g.is_directed_cycle();
    let special = if cycle { None } else { Some(choose_special_vertex(g)?) };

    let outcome = (|| -> std::result::Result<(), String> {
        for v in 0..n {
            let mut seen = HashSet::with_capacity(d);
            for der in &ders {
                let img = apply_injection(g, der, v).map_err(|e| format!("F_{v}({der}): {e}"))?;
                if img.is_derangement() || img.check_on(g).is_err() {
                    return Err(format!("F_{v}({der}) = {img} is not a permutation with a fixed point"));
                }
                if special == Some(v) && img.is_identity() {
                    return Err(format!("the identity is F_{v}({der}) at the special vertex"));
                }
                let back = invert_injection(g, &img, v).map_err(|e| format!("inverting {img} at {v}: {e}"))?;
                if back != *der {
                    return Err(format!("F_{v}({der}) = {img} inverts to {back}"));
                }
                if !seen.insert(img.clone()) {
                    return Err(format!("F_{v} is not injective at {img}"));
                }
            }
        }
        let twice = BigUint::from(2 * d);
        let counts_ok = if cycle { p == twice } else { p > twice };
        if !counts_ok {
            return Err(format!("p = {p} against 2d = {twice}"));
        }
        Ok(())
    })();

    let mut detail = format!("d = {d}, p = {p}");
    if let Some(u) = special {
        write!(detail, ", special vertex {u}").unwrap();
    }
    if let Err(e) = &outcome {
        write!(detail, "; {e}").unwrap();
    }
    Ok(TheoremReport::new("injection", describe(g), outcome.is_ok(), cycle, detail))
}

/// Permutations (or derangements) on `g` counted by direct backtracking.
pub fn count_by_backtracking(g: &Digraph, derangements_only: bool) -> u64 {
    fn rec(g: &Digraph, v: usize, used: u64, fixed_ok: bool) -> u64 {
        if v == g.n() {
            return 1;
        }
        let mut options = g.row(v) & !used;
        if fixed_ok && used >> v & 1 == 0 {
            options |= 1 << v;
        }
        let mut total = 0;
        while options != 0 {
            let w = options.trailing_zeros() as usize;
            options &= options - 1;
            total += rec(g, v + 1, used | 1 << w, fixed_ok);
        }
        total
    }
    rec(g, 0, 0, !derangements_only)
}

/// `d(D_{k,l}) = (k!)^l`, `p(D_{k,l}) = Σ_i (C(k,i)(k-i)!)^l` and
/// `(d/p) = 1 / Σ_i (i!)^{-l}`, with backtracking counts for `kl ≤ 12`.
pub fn check_blowup_formulas(k: usize, l: usize) -> Result<TheoremReport> {
    if k == 0 || l < 2 || k * l > MAX_BLOWUP_VERTICES {
        return Err(Error::BadParams(format!(
            "blowup check needs k >= 1, l >= 2, kl <= {MAX_BLOWUP_VERTICES} (got k={k}, l={l})"
        )));
    }
    let g = blowup(k, l)?;
    let d = count_derangements(&g)?;
    let p = count_permutations(&g)?;
    let ratio = dp_ratio(&g)?;
    let l32 = l as u32;
    let formula_d = factorial(k).pow(l32);
    let formula_p: BigUint = (0..=k)
        .map(|i| (binomial(k, i) * factorial(k - i)).pow(l32))
        .sum();
    let formula_ratio = inverse_factorial_power_sum(k, l32).recip();

    let mut detail = format!("d = {d}, p = {p}, ratio = {ratio}");
    let mut ok = true;
    if d != formula_d || p != formula_p || ratio != formula_ratio {
        ok = false;
        write!(detail, "; formulas give d = {formula_d}, p = {formula_p}, ratio = {formula_ratio}").unwrap();
    }
    if k * l <= MAX_BLOWUP_ENUMERATION {
        let (ed, ep) = (count_by_backtracking(&g, true), count_by_backtracking(&g, false));
        if BigUint::from(ed) != d || BigUint::from(ep) != p {
            ok = false;
            write!(detail, "; enumeration gives d = {ed}, p = {ep}").unwrap();
        }
    }
    Ok(TheoremReport::new(
        "blowup",
        format!("D({k},{l})"),
        ok,
        2u32 * &d == p,
        detail,
    ))
}

/// `C(n,k)·per(M) = Σ per(M(S,S'))·per(M(S̄,S̄'))` for every `k`.
pub fn check_subpermanent(m: &IntMatrix) -> Result<Vec<TheoremReport>> {
    (0..=m.n())
        .map(|k| {
            let (lhs, rhs) = subpermanent_sides(m, k)?;
            Ok(TheoremReport::new(
                "subpermanent",
                format!("{}x{} matrix, k = {k}", m.n(), m.n()),
                lhs == rhs,
                lhs == rhs,
                format!("lhs = {lhs}, rhs = {rhs}"),
            ))
        })
        .collect()
}

/// Some vertex lies on at least twice as many cycles as there are Hamilton
/// cycles, unless `g` is a directed cycle.
pub fn check_corollary(g: &Digraph) -> Result<TheoremReport> {
    let census = hamilton_census(g)?;
    let best = census.cycles_through.iter().max().cloned().unwrap_or_default();
    let twice = &census.ham_count * 2u32;
    let detail = if g.is_directed_cycle() {
        "directed cycle, excluded".to_string()
    } else {
        format!("hamilton cycles = {}, most cycles through a vertex = {best}", census.ham_count)
    };
    Ok(TheoremReport::new(
        "corollary",
        describe(g),
        census.corollary_ok,
        !census.ham_count.is_zero() && best == twice,
        detail,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Digraphs,
    Bipartite,
    SampledUndirected,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Self::Digraphs => "digraphs",
            Self::Bipartite => "bipartite",
            Self::SampledUndirected => "sampled-undirected",
        }
    }

    /// Largest `n` enumerated exhaustively when no sample count is given.
    pub fn exhaustive_limit(self) -> usize {
        match self {
            Self::Digraphs => 4,
            Self::Bipartite => 4,
            Self::SampledUndirected => 0,
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "digraphs" => Ok(Self::Digraphs),
            "bipartite" => Ok(Self::Bipartite),
            "sampled-undirected" => Ok(Self::SampledUndirected),
            _ => Err(Error::BadParams(format!("unknown family `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordFormat {
    Csv,
    JsonLines,
}

/// Scan parameters. For bipartite scans `n` is the part size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub family: Family,
    pub n: usize,
    pub samples: Option<usize>,
    pub seed: u64,
}

pub const DEFAULT_SAMPLES: usize = 1000;

/// One scanned graph. Counts are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveyRecord {
    pub n: usize,
    pub arcs: usize,
    pub adjacency_hex: String,
    pub derangements: String,
    pub permutations: String,
    pub ratio_exact: String,
    pub ratio_float: String,
}

impl SurveyRecord {
    pub fn new(g: &Digraph, d: &BigUint, p: &BigUint) -> Self {
        let ratio = ExactRatio::new(d.clone(), p.clone());
        Self {
            n: g.n(),
            arcs: g.arc_count(),
            adjacency_hex: g.adjacency_hex(),
            derangements: d.to_string(),
            permutations: p.to_string(),
            ratio_exact: ratio.to_string(),
            ratio_float: ratio.to_decimal(DECIMAL_DIGITS),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reference {
    pub graph: String,
    pub ratio: String,
    pub ratio_float: String,
}

/// Aggregates of a scan. Theorem violations are counterexamples;
/// exceedances of the reference ratio are findings about an open question.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub family: String,
    pub n: usize,
    pub exhaustive: bool,
    pub seed: u64,
    pub graphs: u64,
    pub max_ratio: String,
    pub max_ratio_float: String,
    pub argmax: String,
    pub argmax_count: u64,
    pub distinct_ratios: usize,
    pub min_intersecting_fraction: Option<String>,
    pub counterexamples: u64,
    pub witnesses: Vec<TheoremReport>,
    pub reference: Option<Reference>,
    pub reference_exceedances: u64,
    pub exceedance_examples: Vec<String>,
}

const MAX_LISTED: usize = 20;
const CHUNK: u64 = 1 << 12;

struct Outcome {
    record: SurveyRecord,
    ratio: ExactRatio,
    violations: Vec<TheoremReport>,
    min_intersecting: Option<ExactRatio>,
}

/// Undirected reference for the extremal question: `K_{n/2,n/2}` for even
/// `n`, `K_n` for odd `n`.
fn undirected_reference(n: usize) -> Result<(String, ExactRatio)> {
    if n.is_multiple_of(2) {
        let k = complete_bipartite(n / 2)?;
        Ok((format!("K({0},{0})", n / 2), dp_ratio(k.digraph())?))
    } else {
        Ok((format!("K({n})"), dp_ratio(complete_graph(n)?.digraph())?))
    }
}

fn min_fraction(tallies: &[IntersectionTally]) -> Option<ExactRatio> {
    tallies
        .iter()
        .map(|t| ExactRatio::new(t.hits.clone(), t.total()))
        .min()
}

fn failures(reports: impl IntoIterator<Item = TheoremReport>) -> impl Iterator<Item = TheoremReport> {
    reports.into_iter().filter(|r| !r.holds)
}

fn examine_digraph(g: &Digraph) -> Result<Outcome> {
    let d = count_derangements(g)?;
    let p = count_permutations(g)?;
    let mut violations: Vec<_> = failures([theorem3_report(g, &d, &p)]).collect();
    if g.n() <= 5 {
        violations.extend(failures([check_injection(g)?]));
    }
    if g.n() <= 8 {
        violations.extend(failures([check_corollary(g)?]));
    }
    Ok(Outcome {
        record: SurveyRecord::new(g, &d, &p),
        ratio: ExactRatio::new(d, p),
        violations,
        min_intersecting: None,
    })
}

fn examine_bipartite(b: &BipartiteGraph) -> Result<Outcome> {
    let u = b.to_undirected()?;
    let g = u.digraph();
    let d = count_derangements(g)?;
    let p = count_permutations(g)?;
    let mut violations: Vec<_> = failures([theorem3_report(g, &d, &p)]).collect();
    let mut min_intersecting = None;
    if b.left() <= MAX_THEOREM1_PART {
        let reports = check_theorem1(b)?;
        let tallies = enumerate_bipartite_matchings(b)?
            .iter()
            .map(|m| bipartite_intersection_tally(b, m))
            .collect::<Result<Vec<_>>>()?;
        min_intersecting = min_fraction(&tallies);
        violations.extend(failures(reports));
        violations.extend(failures([check_theorem6(b)?]));
    }
    Ok(Outcome {
        record: SurveyRecord::new(g, &d, &p),
        ratio: ExactRatio::new(d, p),
        violations,
        min_intersecting,
    })
}

fn examine_undirected(u: &UndirectedGraph) -> Result<Outcome> {
    let g = u.digraph();
    let d = count_derangements(g)?;
    let p = count_permutations(g)?;
    let mut violations: Vec<_> = failures([theorem3_report(g, &d, &p)]).collect();
    let mut min_intersecting = None;
    let n = u.n();
    if n.is_multiple_of(2) && n <= MAX_THEOREM2_VERTICES {
        let tallies = all_intersection_tallies(u)?;
        if !tallies.is_empty() {
            let scale = BigUint::one() << (n / 2 - 1);
            for (m, t) in &tallies {
                if t.misses > &scale * &t.hits {
                    violations.push(TheoremReport::new(
                        "2",
                        format!("{} {}", describe(g), matching_label(m.edges())),
                        false,
                        false,
                        format!("hits = {}, misses = {}", t.hits, t.misses),
                    ));
                }
            }
            let plain: Vec<IntersectionTally> = tallies.into_iter().map(|(_, t)| t).collect();
            min_intersecting = min_fraction(&plain);
        }
    }
    Ok(Outcome {
        record: SurveyRecord::new(g, &d, &p),
        ratio: ExactRatio::new(d, p),
        violations,
        min_intersecting,
    })
}

fn bipartite_from_index(n: usize, idx: u64) -> Result<BipartiteGraph> {
    let mask = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    let rows = (0..n).map(|i| idx >> (i * n) & mask).collect();
    BipartiteGraph::from_rows(n, n, rows)
}

/// Graph `index` of a scan, examined. Sampled scans draw the density `q`
/// uniformly from `[0, 1)` before the Bernoulli slots of the same stream.
fn examine(config: &ScanConfig, exhaustive: bool, index: u64) -> Result<Outcome> {
    let n = config.n;
    if exhaustive {
        return match config.family {
            Family::Digraphs => examine_digraph(&Digraph::from_index(n, index)?),
            Family::Bipartite => examine_bipartite(&bipartite_from_index(n, index)?),
            Family::SampledUndirected => unreachable!("sampled family is never exhaustive"),
        };
    }
    let mut rng = stream(config.seed, index);
    let q: f64 = rng.gen();
    match config.family {
        Family::Digraphs => examine_digraph(&draw(&ModelSpec::Digraph { n, q }, &mut rng)?.as_digraph()?),
        Family::SampledUndirected => {
            let g = draw(&ModelSpec::Graph { n, q }, &mut rng)?.as_digraph()?;
            examine_undirected(&UndirectedGraph::from_digraph(g)?)
        }
        Family::Bipartite => {
            let rows = (0..n)
                .map(|_| (0..n).fold(0u64, |r, j| if rng.gen::<f64>() < q { r | 1 << j } else { r }))
                .collect();
            examine_bipartite(&BipartiteGraph::from_rows(n, n, rows)?)
        }
    }
}

enum Sink<W: Write> {
    Csv(Box<csv::Writer<W>>),
    Json(W),
}

impl<W: Write> Sink<W> {
    fn write(&mut self, record: &SurveyRecord) -> Result<()> {
        match self {
            Self::Csv(w) => w.serialize(record).map_err(std::io::Error::from)?,
            Self::Json(w) => {
                serde_json::to_writer(&mut *w, record)?;
                w.write_all(b"\n")?;
            }
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        match self {
            Self::Csv(w) => w.flush()?,
            Self::Json(w) => w.flush()?,
        }
        Ok(())
    }
}

/// Runs a scan, writing one record per graph to `out` in index order, and
/// returns the summary. Output is identical for identical configurations
/// whatever the thread count.
pub fn scan<W: Write>(config: &ScanConfig, format: RecordFormat, out: W) -> Result<ScanSummary> {
    let n = config.n;
    let family = config.family;
    let exhaustive = config.samples.is_none() && family != Family::SampledUndirected;
    let vertices = if family == Family::Bipartite { 2 * n } else { n };
    if n == 0 {
        return Err(Error::BadParams("scans need n >= 1".into()));
    }
    if exhaustive {
        too_large("exhaustive scan size", n, family.exhaustive_limit())?;
    }
    too_large("scan vertex count", vertices, MAX_MC_VERTICES)?;
    let total: u64 = if exhaustive {
        match family {
            Family::Digraphs => 1 << (n * (n - 1)),
            _ => 1 << (n * n),
        }
    } else {
        config.samples.unwrap_or(DEFAULT_SAMPLES) as u64
    };
    if total == 0 {
        return Err(Error::BadParams("at least one sample is required".into()));
    }
    let reference = if family == Family::Digraphs {
        None
    } else {
        Some(undirected_reference(vertices)?)
    };

    let mut sink = match format {
        RecordFormat::Csv => Sink::Csv(Box::new(csv::Writer::from_writer(out))),
        RecordFormat::JsonLines => Sink::Json(out),
    };

    let mut max: Option<(ExactRatio, String, u64)> = None;
    let mut distinct = BTreeSet::new();
    let mut min_intersecting: Option<ExactRatio> = None;
    let mut counterexamples = 0u64;
    let mut witnesses = Vec::new();
    let mut exceedances = 0u64;
    let mut exceedance_examples = Vec::new();

    let mut start = 0;
    while start < total {
        let end = (start + CHUNK).min(total);
        let outcomes = (start..end)
            .into_par_iter()
            .map(|i| examine(config, exhaustive, i))
            .collect::<Result<Vec<_>>>()?;
        for o in outcomes {
            sink.write(&o.record)?;
            match &mut max {
                Some((best, _, count)) if o.ratio == *best => *count += 1,
                Some((best, _, _)) if o.ratio < *best => {}
                _ => max = Some((o.ratio.clone(), o.record.adjacency_hex.clone(), 1)),
            }
            if let Some((_, r)) = &reference {
                if o.ratio > *r {
                    exceedances += 1;
                    if exceedance_examples.len() < MAX_LISTED {
                        exceedance_examples.push(o.record.adjacency_hex.clone());
                    }
                }
            }
            if let Some(f) = o.min_intersecting {
                if min_intersecting.as_ref().is_none_or(|m| f < *m) {
                    min_intersecting = Some(f);
                }
            }
            if !o.violations.is_empty() {
                counterexamples += 1;
                for v in o.violations {
                    if witnesses.len() < MAX_LISTED {
                        witnesses.push(v);
                    }
                }
            }
            distinct.insert(o.ratio);
        }
        start = end;
    }
    sink.flush()?;

    let (best, argmax, argmax_count) = max.expect("at least one graph is scanned");
    Ok(ScanSummary {
        family: family.name().into(),
        n,
        exhaustive,
        seed: config.seed,
        graphs: total,
        max_ratio: best.to_string(),
        max_ratio_float: best.to_decimal(DECIMAL_DIGITS),
        argmax,
        argmax_count,
        distinct_ratios: distinct.len(),
        min_intersecting_fraction: min_intersecting.map(|f| f.to_string()),
        counterexamples,
        witnesses,
        reference: reference.map(|(graph, r)| Reference {
            graph,
            ratio: r.to_string(),
            ratio_float: r.to_decimal(DECIMAL_DIGITS),
        }),
        reference_exceedances: exceedances,
        exceedance_examples,
    })
}
