use super::{full_mask, AnyGraph, Digraph, PerfectMatching, UndirectedGraph, MAX_VERTICES};
use crate::error::{Error, Result};

/// The named graph families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    /// Directed `n`-cycle `0 → 1 → … → n-1 → 0`.
    Cycle { n: usize },
    /// `K_n` as a symmetric digraph.
    Complete { n: usize },
    /// `K_{n,n}` with parts `0..n` and `n..2n`.
    CompleteBipartite { n: usize },
    /// `D_{k,l}`: `l` layers of `k` vertices, complete arcs from each layer
    /// to the next (cyclically).
    Blowup { k: usize, l: usize },
    /// The 3-regular graph on `4n` vertices with `2^n + 1` perfect
    /// matchings, one of which misses all the others.
    MatchingGadget { n: usize },
}

pub fn construct(c: Construction) -> Result<AnyGraph> {
    Ok(match c {
        Construction::Cycle { n } => AnyGraph::Directed(directed_cycle(n)?),
        Construction::Complete { n } => AnyGraph::Undirected(complete_graph(n)?),
        Construction::CompleteBipartite { n } => AnyGraph::Undirected(complete_bipartite(n)?),
        Construction::Blowup { k, l } => AnyGraph::Directed(blowup(k, l)?),
        Construction::MatchingGadget { n } => AnyGraph::Undirected(isolated_matching_graph(n)?.0),
    })
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadParams(msg.into())
}

pub fn directed_cycle(n: usize) -> Result<Digraph> {
    if n < 2 {
        return Err(bad("a directed cycle needs n >= 2"));
    }
    let arcs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Digraph::new(n, &arcs)
}

pub fn complete_graph(n: usize) -> Result<UndirectedGraph> {
    if n == 0 || n > MAX_VERTICES {
        return Err(bad(format!("K_n needs 1 <= n <= {MAX_VERTICES}")));
    }
    let rows = (0..n).map(|i| full_mask(n) & !(1 << i)).collect();
    UndirectedGraph::from_digraph(Digraph::from_rows(n, rows)?)
}

pub fn complete_bipartite(n: usize) -> Result<UndirectedGraph> {
    if n == 0 || 2 * n > MAX_VERTICES {
        return Err(bad(format!("K_(n,n) needs 1 <= 2n <= {MAX_VERTICES}")));
    }
    let rows = (0..2 * n)
        .map(|i| if i < n { full_mask(n) << n } else { full_mask(n) })
        .collect();
    UndirectedGraph::from_digraph(Digraph::from_rows(2 * n, rows)?)
}

/// `D_{k,l}` with layer-major labels: vertex `i` of layer `j` is `j*k + i`.
pub fn blowup(k: usize, l: usize) -> Result<Digraph> {
    if k == 0 || l < 2 || k * l > MAX_VERTICES {
        return Err(bad(format!(
            "blowup needs k >= 1, l >= 2, kl <= {MAX_VERTICES} (got k={k}, l={l})"
        )));
    }
    let layer = full_mask(k);
    let rows = (0..k * l)
        .map(|v| layer << (((v / k + 1) % l) * k))
        .collect();
    Digraph::from_rows(k * l, rows)
}

/// The graph `H` on `v_1..v_{2n}` (labels `0..2n`) and `u_1..u_{2n}`
/// (labels `2n..4n`): each `{v_{2i-1}, v_{2i}}` is completely joined to
/// `{u_{2i-1}, u_{2i}}`, plus edges `v_{2i-1}v_{2i}` and `u_{2i}u_{2i+1}`
/// (indices mod `2n`). Returned together with its matching
/// `M_0 = {v_{2i-1}v_{2i}} ∪ {u_{2i}u_{2i+1}}`.
pub fn isolated_matching_graph(n: usize) -> Result<(UndirectedGraph, PerfectMatching)> {
    if n == 0 || 4 * n > MAX_VERTICES {
        return Err(bad(format!("H needs 1 <= 4n <= {MAX_VERTICES}")));
    }
    let m = 2 * n;
    // 1-based labels from the construction
    let v = |i: usize| i - 1;
    let u = |i: usize| m + (i - 1) % m;
    let mut edges = Vec::new();
    let mut matching = Vec::new();
    for i in 1..=n {
        for a in [2 * i - 1, 2 * i] {
            for b in [2 * i - 1, 2 * i] {
                edges.push((v(a), u(b)));
            }
        }
        edges.push((v(2 * i - 1), v(2 * i)));
        edges.push((u(2 * i), u(2 * i + 1)));
        matching.push((v(2 * i - 1), v(2 * i)));
        matching.push((u(2 * i), u(2 * i + 1)));
    }
    let g = UndirectedGraph::new(2 * m, &edges)?;
    let m0 = PerfectMatching::from_edges(2 * m, &matching)?;
    Ok((g, m0))
}
