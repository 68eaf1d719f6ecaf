//! Bitset graph types: loopless digraphs, undirected graphs stored as
//! symmetric digraphs, and bipartite graphs given by their biadjacency rows.
//!
//! Every graph has at most 64 vertices (per part, for bipartite graphs) so
//! that a neighbourhood fits in a single `u64`.

mod construct;
mod io;

pub use construct::{
    blowup, complete_bipartite, complete_graph, construct, directed_cycle,
    isolated_matching_graph, Construction,
};
pub use io::{parse_graph, parse_graph_json, serialize_graph, serialize_graph_json};

use crate::error::{Error, Result};
use crate::permanent::IntMatrix;

pub const MAX_VERTICES: usize = 64;

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::BadParams("a graph needs at least one vertex".into()));
    }
    if n > MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "vertex count",
            size: n,
            max: MAX_VERTICES,
        });
    }
    Ok(())
}

/// A loopless directed graph. Bit `j` of `rows[i]` is set iff the arc
/// `(i, j)` is present.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    rows: Vec<u64>,
}

impl Digraph {
    /// Builds a digraph from a list of arcs. Duplicate arcs collapse.
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(u, v) in arcs {
            g.insert_arc(u, v)?;
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Result<Self> {
        check_order(n)?;
        Ok(Self {
            n,
            rows: vec![0; n],
        })
    }

    pub fn from_rows(n: usize, rows: Vec<u64>) -> Result<Self> {
        check_order(n)?;
        if rows.len() != n {
            return Err(Error::BadParams(format!(
                "expected {n} adjacency rows, got {}",
                rows.len()
            )));
        }
        let mask = full_mask(n);
        for (i, &row) in rows.iter().enumerate() {
            if row & !mask != 0 {
                return Err(Error::OutOfRange {
                    vertex: 63 - (row & !mask).leading_zeros() as usize,
                    n,
                });
            }
            if row >> i & 1 == 1 {
                return Err(Error::SelfLoop(i));
            }
        }
        Ok(Self { n, rows })
    }

    /// The loopless digraph whose arc set is encoded by `index`: bit `b`
    /// selects the `b`-th off-diagonal slot in row-major order. Ranging
    /// `index` over `0..2^(n(n-1))` enumerates every labeled digraph once.
    pub fn from_index(n: usize, index: u64) -> Result<Self> {
        check_order(n)?;
        let slots = n * (n - 1);
        if slots < 64 && index >> slots != 0 {
            return Err(Error::BadParams(format!(
                "index {index} exceeds 2^{slots} for {n} vertices"
            )));
        }
        let mut rows = vec![0u64; n];
        let mut b = 0;
        for (i, row) in rows.iter_mut().enumerate() {
            for j in 0..n {
                if i != j {
                    if b < 64 && index >> b & 1 == 1 {
                        *row |= 1 << j;
                    }
                    b += 1;
                }
            }
        }
        Ok(Self { n, rows })
    }

    fn insert_arc(&mut self, u: usize, v: usize) -> Result<()> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::OutOfRange { vertex: w, n: self.n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.rows[u] |= 1 << v;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    #[inline]
    pub fn row(&self, u: usize) -> u64 {
        self.rows[u]
    }

    /// In-neighbourhood of `v` as a mask.
    pub fn column(&self, v: usize) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, &r)| r >> v & 1 == 1)
            .fold(0, |m, (u, _)| m | 1 << u)
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u] >> v & 1 == 1
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(u, &r)| bits(r).map(move |v| (u, v)))
    }

    pub fn arc_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.rows[u].count_ones() as usize
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.column(v).count_ones() as usize
    }

    pub fn is_symmetric(&self) -> bool {
        self.arcs().all(|(u, v)| self.has_arc(v, u))
    }

    /// True iff the arcs form exactly one directed cycle through all `n ≥ 2`
    /// vertices.
    pub fn is_directed_cycle(&self) -> bool {
        let n = self.n;
        if n < 2 || self.arc_count() != n {
            return false;
        }
        if (0..n).any(|v| self.out_degree(v) != 1 || self.in_degree(v) != 1) {
            return false;
        }
        let mut seen = 1u64;
        let mut v = self.rows[0].trailing_zeros() as usize;
        let mut steps = 1;
        while v != 0 {
            seen |= 1 << v;
            v = self.rows[v].trailing_zeros() as usize;
            steps += 1;
        }
        steps == n && seen == full_mask(n)
    }

    /// The subgraph induced on `vertices`, relabeled so that `vertices[i]`
    /// becomes local vertex `i`.
    pub fn induced(&self, vertices: &[usize]) -> Result<Digraph> {
        check_order(vertices.len())?;
        let mut rows = vec![0u64; vertices.len()];
        for (i, &u) in vertices.iter().enumerate() {
            if u >= self.n {
                return Err(Error::OutOfRange { vertex: u, n: self.n });
            }
            for (j, &w) in vertices.iter().enumerate() {
                if self.has_arc(u, w) {
                    rows[i] |= 1 << j;
                }
            }
        }
        Digraph::from_rows(vertices.len(), rows)
    }

    /// The 0/1 adjacency matrix `A`.
    pub fn adjacency_matrix(&self) -> IntMatrix {
        IntMatrix::from_masks(self.n, &self.rows)
    }

    /// Row masks as fixed-width hex words joined by `:`, e.g. `6:5:3`.
    pub fn adjacency_hex(&self) -> String {
        let width = self.n.div_ceil(4).max(1);
        self.rows
            .iter()
            .map(|r| format!("{r:0width$x}"))
            .collect::<Vec<_>>()
            .join(":")
    }
}

/// An undirected simple graph, stored as a symmetric digraph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UndirectedGraph(Digraph);

impl UndirectedGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Digraph::empty(n)?;
        for &(u, v) in edges {
            g.insert_arc(u, v)?;
            g.insert_arc(v, u)?;
        }
        Ok(Self(g))
    }

    pub fn from_digraph(g: Digraph) -> Result<Self> {
        if !g.is_symmetric() {
            return Err(Error::BadParams("adjacency is not symmetric".into()));
        }
        Ok(Self(g))
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn digraph(&self) -> &Digraph {
        &self.0
    }

    pub fn into_digraph(self) -> Digraph {
        self.0
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.0.has_arc(u, v)
    }

    #[inline]
    pub fn neighbours(&self, u: usize) -> u64 {
        self.0.rows[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.0.out_degree(u)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.arcs().filter(|&(u, v)| u < v)
    }

    pub fn edge_count(&self) -> usize {
        self.0.arc_count() / 2
    }

    /// The graph as a bipartite graph, if it is one. Each component is
    /// 2-coloured from its smallest vertex, which goes left; left and right
    /// vertices keep their relative order.
    pub fn bipartition(&self) -> Option<BipartiteGraph> {
        let n = self.n();
        let mut colour = vec![None; n];
        for root in 0..n {
            if colour[root].is_some() {
                continue;
            }
            colour[root] = Some(false);
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                let c = colour[u]?;
                let mut nb = self.neighbours(u);
                while nb != 0 {
                    let v = nb.trailing_zeros() as usize;
                    nb &= nb - 1;
                    match colour[v] {
                        None => {
                            colour[v] = Some(!c);
                            stack.push(v);
                        }
                        Some(cv) if cv == c => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let side = |want: bool| -> Vec<usize> { (0..n).filter(|&v| colour[v] == Some(want)).collect() };
        let (left, right) = (side(false), side(true));
        let edges: Vec<_> = left
            .iter()
            .enumerate()
            .flat_map(|(i, &u)| {
                right.iter().enumerate().filter(move |&(_, &v)| self.has_edge(u, v)).map(move |(j, _)| (i, j))
            })
            .collect();
        BipartiteGraph::new(left.len(), right.len(), &edges).ok()
    }

    /// A copy with the given edges removed.
    pub fn without_edges(&self, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = self.0.clone();
        for (u, v) in edges {
            g.rows[u] &= !(1 << v);
            g.rows[v] &= !(1 << u);
        }
        Self(g)
    }
}

/// A perfect matching of a general graph, as a mate array.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PerfectMatching {
    mate: Vec<usize>,
}

impl PerfectMatching {
    /// Checks that `edges` are pairwise disjoint and cover `0..n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut mate = vec![usize::MAX; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::OutOfRange { vertex: u.max(v), n });
            }
            if u == v || mate[u] != usize::MAX || mate[v] != usize::MAX {
                return Err(Error::NotPerfectMatching(format!(
                    "edge ({u}, {v}) overlaps another edge"
                )));
            }
            mate[u] = v;
            mate[v] = u;
        }
        if let Some(v) = mate.iter().position(|&m| m == usize::MAX) {
            return Err(Error::NotPerfectMatching(format!("vertex {v} is uncovered")));
        }
        Ok(Self { mate })
    }

    pub(crate) fn from_mate(mate: Vec<usize>) -> Self {
        Self { mate }
    }

    pub fn n(&self) -> usize {
        self.mate.len()
    }

    pub fn mate(&self, v: usize) -> usize {
        self.mate[v]
    }

    /// Edges `(u, v)` with `u < v`, sorted by `u`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(u, &v)| u < v)
            .map(|(u, &v)| (u, v))
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        u < self.mate.len() && self.mate[u] == v
    }

    pub fn intersects(&self, other: &PerfectMatching) -> bool {
        self.mate.iter().zip(&other.mate).any(|(a, b)| a == b)
    }

    pub fn check_in(&self, g: &UndirectedGraph) -> Result<()> {
        if self.n() != g.n() {
            return Err(Error::NotPerfectMatching(format!(
                "matching covers {} vertices, graph has {}",
                self.n(),
                g.n()
            )));
        }
        match self.edges().find(|&(u, v)| !g.has_edge(u, v)) {
            Some((u, v)) => Err(Error::NotPerfectMatching(format!(
                "edge ({u}, {v}) is not in the graph"
            ))),
            None => Ok(()),
        }
    }
}

/// A perfect matching of a balanced bipartite graph: left `i` is matched
/// to right `right_of[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteMatching {
    right_of: Vec<usize>,
}

impl BipartiteMatching {
    pub fn new(right_of: Vec<usize>) -> Result<Self> {
        let n = right_of.len();
        let mut seen = 0u128;
        for &r in &right_of {
            if r >= n || seen >> r & 1 == 1 {
                return Err(Error::NotPerfectMatching(format!(
                    "{right_of:?} is not a bijection"
                )));
            }
            seen |= 1 << r;
        }
        Ok(Self { right_of })
    }

    pub fn right_of(&self) -> &[usize] {
        &self.right_of
    }

    pub fn intersects(&self, other: &BipartiteMatching) -> bool {
        self.right_of
            .iter()
            .zip(&other.right_of)
            .any(|(a, b)| a == b)
    }

    pub fn check_in(&self, b: &BipartiteGraph) -> Result<()> {
        if b.left() != b.right() || b.left() != self.right_of.len() {
            return Err(Error::NotPerfectMatching(
                "matching size does not match the parts".into(),
            ));
        }
        match (0..b.left()).find(|&i| !b.has_edge(i, self.right_of[i])) {
            Some(i) => Err(Error::NotPerfectMatching(format!(
                "edge ({i}, {}) is not in the graph",
                self.right_of[i]
            ))),
            None => Ok(()),
        }
    }
}

/// A bipartite graph given by biadjacency rows: bit `j` of `rows[i]` is set
/// iff left vertex `i` is adjacent to right vertex `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    rows: Vec<u64>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut rows = vec![0u64; left];
        for &(i, j) in edges {
            if i >= left {
                return Err(Error::OutOfRange { vertex: i, n: left });
            }
            if j >= right {
                return Err(Error::OutOfRange { vertex: j, n: right });
            }
            rows[i] |= 1 << j;
        }
        Self::from_rows(left, right, rows)
    }

    pub fn from_rows(left: usize, right: usize, rows: Vec<u64>) -> Result<Self> {
        for side in [left, right] {
            if side > MAX_VERTICES {
                return Err(Error::TooLarge {
                    what: "bipartite part size",
                    size: side,
                    max: MAX_VERTICES,
                });
            }
        }
        if rows.len() != left {
            return Err(Error::BadParams(format!(
                "expected {left} biadjacency rows, got {}",
                rows.len()
            )));
        }
        let mask = full_mask(right);
        if let Some(r) = rows.iter().find(|&&r| r & !mask != 0) {
            return Err(Error::OutOfRange {
                vertex: 63 - (r & !mask).leading_zeros() as usize,
                n: right,
            });
        }
        Ok(Self { left, right, rows })
    }

    /// `K_{n,n}`.
    pub fn complete(n: usize) -> Result<Self> {
        Self::from_rows(n, n, vec![full_mask(n); n])
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn is_balanced(&self) -> bool {
        self.left == self.right
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    #[inline]
    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.left && j < self.right && self.rows[i] >> j & 1 == 1
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| bits(r).map(move |j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.rows.iter().all(|&r| r == full_mask(self.right))
    }

    /// The biadjacency matrix `M` (rows = left, columns = right).
    /// Unbalanced graphs are padded with zero rows or columns to a square.
    pub fn biadjacency(&self) -> IntMatrix {
        let n = self.left.max(self.right);
        let mut rows = self.rows.clone();
        rows.resize(n, 0);
        IntMatrix::from_masks(n, &rows)
    }

    /// The same graph as an undirected graph on `left + right` vertices:
    /// left `i` becomes `i`, right `j` becomes `left + j`.
    pub fn to_undirected(&self) -> Result<UndirectedGraph> {
        let n = self.left + self.right;
        check_order(n)?;
        let edges: Vec<_> = self.edges().map(|(i, j)| (i, self.left + j)).collect();
        UndirectedGraph::new(n, &edges)
    }
}

/// Any of the three graph kinds, as read from a file or built by a
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyGraph {
    Directed(Digraph),
    Undirected(UndirectedGraph),
    Bipartite(BipartiteGraph),
}

impl AnyGraph {
    /// The digraph on which derangements and permutations are counted.
    /// Undirected and bipartite graphs are viewed as symmetric digraphs.
    pub fn as_digraph(&self) -> Result<Digraph> {
        match self {
            AnyGraph::Directed(g) => Ok(g.clone()),
            AnyGraph::Undirected(g) => Ok(g.digraph().clone()),
            AnyGraph::Bipartite(b) => Ok(b.to_undirected()?.into_digraph()),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            AnyGraph::Directed(_) => "digraph",
            AnyGraph::Undirected(_) => "graph",
            AnyGraph::Bipartite(_) => "bipartite",
        }
    }
}

/// The bipartite graph `G'` on `[n] ⊔ [n]` whose perfect matchings are the
/// permutations on `g`: `{u_l, v_r}` is an edge iff `(u, v)` is an arc or
/// `u = v`.
pub fn permutation_model(g: &Digraph) -> BipartiteGraph {
    let rows = g
        .rows
        .iter()
        .enumerate()
        .map(|(i, &r)| r | 1 << i)
        .collect();
    BipartiteGraph {
        left: g.n,
        right: g.n,
        rows,
    }
}

/// The bipartite graph whose biadjacency matrix is the adjacency matrix of
/// `g`; its perfect matchings are the derangements on `g`.
pub fn derangement_model(g: &Digraph) -> BipartiteGraph {
    BipartiteGraph {
        left: g.n,
        right: g.n,
        rows: g.rows.clone(),
    }
}

/// One way of splitting the vertices so that every edge of a fixed perfect
/// matching `M` crosses. `left[i]` and `right[i]` are the endpoints of the
/// `i`-th edge of `M`, so `M` is the diagonal of `cross`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub cross: BipartiteGraph,
}

impl Bipartition {
    pub fn left_mask(&self) -> u64 {
        self.left.iter().fold(0, |m, &v| m | 1 << v)
    }

    /// Whether every edge of `m` joins the two sides.
    pub fn separates(&self, m: &PerfectMatching) -> bool {
        let left = self.left_mask();
        m.edges()
            .all(|(u, v)| (left >> u & 1 == 1) != (left >> v & 1 == 1))
    }

    /// Translates a matching of the original graph whose edges all cross
    /// into a matching of `cross`.
    pub fn to_cross_matching(&self, m: &PerfectMatching) -> Option<BipartiteMatching> {
        let mut right_index = vec![usize::MAX; m.n()];
        for (j, &v) in self.right.iter().enumerate() {
            right_index[v] = j;
        }
        let right_of: Vec<usize> = self.left.iter().map(|&u| right_index[m.mate(u)]).collect();
        if right_of.contains(&usize::MAX) {
            return None;
        }
        BipartiteMatching::new(right_of).ok()
    }
}

pub const MAX_BIPARTITION_VERTICES: usize = 24;

/// All `2^(n-1)` bipartitions placing the endpoints of each edge of `m` on
/// opposite sides, with vertex 0 always on the left. Each keeps only the
/// edges of `g` that cross.
pub fn bipartitions_over_matching(
    g: &UndirectedGraph,
    m: &PerfectMatching,
) -> Result<Vec<Bipartition>> {
    m.check_in(g)?;
    let vertices = g.n();
    if !vertices.is_multiple_of(2) {
        return Err(Error::NotPerfectMatching("odd vertex count".into()));
    }
    too_large_bipartition(vertices)?;
    let pairs: Vec<(usize, usize)> = m.edges().collect();
    let half = pairs.len();
    let mut out = Vec::with_capacity(1 << (half - 1));
    for flips in 0u64..1 << (half - 1) {
        let (left, right): (Vec<usize>, Vec<usize>) = pairs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                if i > 0 && flips >> (i - 1) & 1 == 1 {
                    (b, a)
                } else {
                    (a, b)
                }
            })
            .unzip();
        let rows = left
            .iter()
            .map(|&u| {
                right
                    .iter()
                    .enumerate()
                    .filter(|(_, &w)| g.has_edge(u, w))
                    .fold(0u64, |r, (j, _)| r | 1 << j)
            })
            .collect();
        let cross = BipartiteGraph::from_rows(half, half, rows)?;
        out.push(Bipartition { left, right, cross });
    }
    Ok(out)
}

fn too_large_bipartition(vertices: usize) -> Result<()> {
    crate::error::too_large("bipartition enumeration", vertices, MAX_BIPARTITION_VERTICES)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_digraph_collapses_duplicates() {
        let g = Digraph::new(3, &[(0, 1), (1, 2), (2, 0), (0, 1)]).unwrap();
        assert_eq!(g.arc_count(), 3);
        assert!(g.is_directed_cycle());
    }

    #[test]
    fn bipartition_recovers_parts() {
        let b = BipartiteGraph::new(3, 2, &[(0, 0), (1, 1), (2, 0), (2, 1)]).unwrap();
        assert_eq!(b.to_undirected().unwrap().bipartition(), Some(b));
        // Interleaved labels: 0-1, 1-2, 2-3 is a path with parts {0,2}, {1,3}.
        let path = UndirectedGraph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let p = path.bipartition().unwrap();
        assert_eq!(p.edges().collect::<Vec<_>>(), vec![(0, 0), (1, 0), (1, 1)]);
        let triangle = UndirectedGraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(triangle.bipartition(), None);
    }

    #[test]
    fn new_digraph_errors() {
        assert!(matches!(Digraph::new(2, &[(0, 0)]), Err(Error::SelfLoop(0))));
        assert!(matches!(
            Digraph::new(4, &[(0, 1), (3, 4)]),
            Err(Error::OutOfRange { vertex: 4, n: 4 })
        ));
        assert!(Digraph::new(0, &[]).is_err());
        assert!(Digraph::new(65, &[]).is_err());
        assert!(Digraph::new(64, &[(0, 63)]).is_ok());
    }

    #[test]
    fn from_index_enumerates_distinct_loopless_graphs() {
        let mut seen = std::collections::HashSet::new();
        for idx in 0..1 << 6 {
            let g = Digraph::from_index(3, idx).unwrap();
            assert_eq!(g.arc_count(), idx.count_ones() as usize);
            assert!(seen.insert(g));
        }
        assert!(Digraph::from_index(3, 1 << 6).is_err());
    }

    #[test]
    fn directed_cycle_predicate() {
        assert!(Digraph::new(2, &[(0, 1), (1, 0)]).unwrap().is_directed_cycle());
        assert!(!Digraph::empty(1).unwrap().is_directed_cycle());
        // two disjoint 2-cycles
        let g = Digraph::new(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
        assert!(!g.is_directed_cycle());
        let g = Digraph::new(3, &[(0, 1), (1, 2), (2, 0), (0, 2)]).unwrap();
        assert!(!g.is_directed_cycle());
    }

    #[test]
    fn models() {
        let c2 = Digraph::new(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(permutation_model(&c2).rows(), &[0b11, 0b11]);
        let e = Digraph::empty(3).unwrap();
        assert_eq!(permutation_model(&e).rows(), &[1, 2, 4]);
        assert_eq!(derangement_model(&e).rows(), &[0, 0, 0]);
    }

    #[test]
    fn models_differ_by_identity() {
        for idx in 0..1 << 12 {
            let g = Digraph::from_index(4, idx).unwrap();
            let p = permutation_model(&g);
            let d = derangement_model(&g);
            for i in 0..4 {
                assert_eq!(d.row(i) >> i & 1, 0);
                assert_eq!(p.row(i), d.row(i) | 1 << i);
            }
        }
    }

    #[test]
    fn matching_validation() {
        assert!(PerfectMatching::from_edges(4, &[(0, 1), (1, 2)]).is_err());
        assert!(PerfectMatching::from_edges(4, &[(0, 1)]).is_err());
        let m = PerfectMatching::from_edges(4, &[(2, 3), (1, 0)]).unwrap();
        assert_eq!(m.edges().collect::<Vec<_>>(), vec![(0, 1), (2, 3)]);
        let path = UndirectedGraph::new(4, &[(0, 1), (1, 2)]).unwrap();
        assert!(m.check_in(&path).is_err());
    }

    #[test]
    fn bipartitions_of_four_cycle() {
        let c4 = UndirectedGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let m = PerfectMatching::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let other = PerfectMatching::from_edges(4, &[(1, 2), (3, 0)]).unwrap();
        let parts = bipartitions_over_matching(&c4, &m).unwrap();
        assert_eq!(parts.len(), 2);
        // Only the assignment {0,3}|{1,2} keeps all four edges.
        let full: Vec<_> = parts.iter().filter(|b| b.cross.edge_count() == 4).collect();
        assert_eq!(full.len(), 1);
        assert!(full[0].separates(&m) && full[0].separates(&other));
        for b in &parts {
            assert!(b.separates(&m));
            assert!((0..2).all(|i| b.cross.has_edge(i, i)));
        }
    }

    #[test]
    fn bipartitions_of_k4_are_four_cycles() {
        let k4 = complete_graph(4).unwrap();
        let m = PerfectMatching::from_edges(4, &[(0, 2), (1, 3)]).unwrap();
        let parts = bipartitions_over_matching(&k4, &m).unwrap();
        assert_eq!(parts.len(), 2);
        for b in &parts {
            assert!(b.cross.is_complete());
            let u = b.cross.to_undirected().unwrap();
            assert_eq!(u.edge_count(), 4);
            assert!((0..4).all(|v| u.degree(v) == 2));
        }
        let masks: std::collections::HashSet<_> = parts.iter().map(|b| b.left_mask()).collect();
        assert_eq!(masks.len(), 2);
    }

    #[test]
    fn single_edge_has_one_bipartition() {
        let g = UndirectedGraph::new(2, &[(0, 1)]).unwrap();
        let m = PerfectMatching::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(bipartitions_over_matching(&g, &m).unwrap().len(), 1);
    }

    #[test]
    fn bipartitions_reject_foreign_matching() {
        let g = UndirectedGraph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let m = PerfectMatching::from_edges(4, &[(0, 3), (1, 2)]).unwrap();
        assert!(matches!(
            bipartitions_over_matching(&g, &m),
            Err(Error::NotPerfectMatching(_))
        ));
    }

    #[test]
    fn bipartite_embedding() {
        let b = BipartiteGraph::new(2, 3, &[(0, 2), (1, 0)]).unwrap();
        let u = b.to_undirected().unwrap();
        assert_eq!(u.edges().collect::<Vec<_>>(), vec![(0, 4), (1, 2)]);
        assert!(BipartiteGraph::new(2, 2, &[(0, 2)]).is_err());
    }

    #[test]
    fn adjacency_hex_is_fixed_width() {
        let g = directed_cycle(5).unwrap();
        assert_eq!(g.adjacency_hex(), "02:04:08:10:01");
    }
}
