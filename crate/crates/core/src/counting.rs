//! Derangements, permutations and perfect matchings: counting through
//! permanents, and explicit enumeration for the small cases the checks need.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{too_large, Error, Result};
use crate::exact::{BigCount, ExactRatio};
use crate::graph::{
    bits, full_mask, BipartiteGraph, BipartiteMatching, Digraph, PerfectMatching, UndirectedGraph,
};
use crate::permanent::{permanent_ryser, IntMatrix, MAX_RYSER};

pub const MAX_ENUMERATION: usize = 10;
pub const MAX_GENERAL_MATCHING: usize = 24;
pub const MAX_FIXED_POINT_SPLIT: usize = 12;
pub const MAX_BIPARTITE_SUM: usize = 8;

/// A bijection on `0..n`; `images[v]` is the image of `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::BadParams(format!("{images:?} is not a bijection")));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn image(&self, v: usize) -> usize {
        self.images[v]
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.images[v] == v).collect()
    }

    pub fn fixed_mask(&self) -> u64 {
        self.fixed_points().into_iter().fold(0, |m, v| m | 1 << v)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(v, &w)| v == w)
    }

    pub fn is_derangement(&self) -> bool {
        self.images.iter().enumerate().all(|(v, &w)| v != w)
    }

    /// Fails with `NotOnGraph` unless every non-fixed vertex moves along an
    /// arc of `g`.
    pub fn check_on(&self, g: &Digraph) -> Result<()> {
        if self.n() != g.n() {
            return Err(Error::NotOnGraph(format!(
                "permutation has {} points, graph has {} vertices",
                self.n(),
                g.n()
            )));
        }
        match (0..self.n()).find(|&v| self.images[v] != v && !g.has_arc(v, self.images[v])) {
            Some(v) => Err(Error::NotOnGraph(format!(
                "({v}, {}) is not an arc",
                self.images[v]
            ))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Comma-separated images: `"1,2,0"` means σ(0)=1, σ(1)=2, σ(2)=0.
    fn from_str(s: &str) -> Result<Self> {
        let images = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::BadParams(format!("bad permutation entry `{t}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(images)
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Perfect matchings split by whether they share an edge with a fixed
/// matching `M` (which always counts itself as a hit).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionTally {
    #[serde(serialize_with = "ser_big")]
    pub hits: BigCount,
    #[serde(serialize_with = "ser_big")]
    pub misses: BigCount,
}

impl IntersectionTally {
    pub fn total(&self) -> BigCount {
        &self.hits + &self.misses
    }
}

pub(crate) fn ser_big<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// Number of derangements on `g`: `per(A)`.
pub fn count_derangements(g: &Digraph) -> Result<BigCount> {
    too_large("derangement count", g.n(), MAX_RYSER)?;
    permanent_ryser(&g.adjacency_matrix())
}

/// Number of permutations on `g`: `per(A + I)`.
pub fn count_permutations(g: &Digraph) -> Result<BigCount> {
    too_large("permutation count", g.n(), MAX_RYSER)?;
    permanent_ryser(&g.adjacency_matrix().plus_identity())
}

/// `(d/p)_G` as a reduced fraction.
pub fn dp_ratio(g: &Digraph) -> Result<ExactRatio> {
    Ok(ExactRatio::new(count_derangements(g)?, count_permutations(g)?))
}

/// Every permutation (or only the derangements) on `g`, in lexicographic
/// order of the image sequence.
pub fn enumerate_permutations(g: &Digraph, derangements_only: bool) -> Result<Vec<Permutation>> {
    too_large("permutation enumeration", g.n(), MAX_ENUMERATION)?;
    let n = g.n();
    let options: Vec<u64> = (0..n)
        .map(|v| if derangements_only { g.row(v) } else { g.row(v) | 1 << v })
        .collect();
    let mut out = Vec::new();
    let mut images = vec![0usize; n];
    fn rec(v: usize, used: u64, options: &[u64], images: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        if v == options.len() {
            out.push(Permutation {
                images: images.clone(),
            });
            return;
        }
        for w in bits(options[v] & !used) {
            images[v] = w;
            rec(v + 1, used | 1 << w, options, images, out);
        }
    }
    rec(0, 0, &options, &mut images, &mut out);
    Ok(out)
}

/// Perfect matchings of a bipartite graph: `per(M)` of the biadjacency
/// matrix. Unbalanced graphs have none.
pub fn count_perfect_matchings(b: &BipartiteGraph) -> Result<BigCount> {
    if !b.is_balanced() {
        return Ok(BigUint::zero());
    }
    too_large("bipartite matching count", b.left(), MAX_RYSER)?;
    permanent_ryser(&b.biadjacency())
}

/// Perfect matchings of a general graph, branching on the lowest unmatched
/// vertex with memoization on the unmatched set.
pub fn count_perfect_matchings_general(g: &UndirectedGraph) -> Result<BigCount> {
    too_large("general matching count", g.n(), MAX_GENERAL_MATCHING)?;
    if g.n() % 2 == 1 {
        return Ok(BigUint::zero());
    }
    fn rec(free: u64, g: &UndirectedGraph, memo: &mut HashMap<u64, u64>) -> u64 {
        if free == 0 {
            return 1;
        }
        if let Some(&c) = memo.get(&free) {
            return c;
        }
        let v = free.trailing_zeros() as usize;
        let rest = free & !(1 << v);
        let c = bits(g.neighbours(v) & rest)
            .map(|w| rec(rest & !(1 << w), g, memo))
            .sum();
        memo.insert(free, c);
        c
    }
    // at most 23!! < 2^64 matchings on 24 vertices
    Ok(rec(full_mask(g.n()), g, &mut HashMap::new()).into())
}

/// All perfect matchings of a general graph, in the branching order
/// (lowest unmatched vertex first, partners ascending).
pub fn enumerate_perfect_matchings_general(g: &UndirectedGraph) -> Result<Vec<PerfectMatching>> {
    too_large("general matching enumeration", g.n(), MAX_GENERAL_MATCHING)?;
    let mut out = Vec::new();
    if g.n() % 2 == 1 {
        return Ok(out);
    }
    fn rec(free: u64, g: &UndirectedGraph, mate: &mut Vec<usize>, out: &mut Vec<PerfectMatching>) {
        if free == 0 {
            out.push(PerfectMatching::from_mate(mate.clone()));
            return;
        }
        let v = free.trailing_zeros() as usize;
        let rest = free & !(1 << v);
        for w in bits(g.neighbours(v) & rest) {
            mate[v] = w;
            mate[w] = v;
            rec(rest & !(1 << w), g, mate, out);
        }
    }
    rec(full_mask(g.n()), g, &mut vec![0; g.n()], &mut out);
    Ok(out)
}

/// All perfect matchings of a balanced bipartite graph, lexicographic in
/// `right_of`.
pub fn enumerate_bipartite_matchings(b: &BipartiteGraph) -> Result<Vec<BipartiteMatching>> {
    if !b.is_balanced() {
        return Ok(Vec::new());
    }
    too_large("bipartite matching enumeration", b.left(), MAX_ENUMERATION)?;
    let mut out = Vec::new();
    let mut right_of = vec![0usize; b.left()];
    fn rec(i: usize, used: u64, b: &BipartiteGraph, right_of: &mut Vec<usize>, out: &mut Vec<BipartiteMatching>) {
        if i == b.left() {
            out.push(BipartiteMatching::new(right_of.clone()).expect("bijection by construction"));
            return;
        }
        for j in bits(b.row(i) & !used) {
            right_of[i] = j;
            rec(i + 1, used | 1 << j, b, right_of, out);
        }
    }
    rec(0, 0, b, &mut right_of, &mut out);
    Ok(out)
}

/// Hits and misses of `m` among all perfect matchings of `g`. Misses are
/// the perfect matchings of `g` with the edges of `m` deleted.
pub fn matching_intersection_tally(g: &UndirectedGraph, m: &PerfectMatching) -> Result<IntersectionTally> {
    m.check_in(g)?;
    let total = count_perfect_matchings_general(g)?;
    let misses = count_perfect_matchings_general(&g.without_edges(m.edges()))?;
    Ok(IntersectionTally {
        hits: total - &misses,
        misses,
    })
}

pub const MAX_TALLY_TABLE: usize = 20;

/// `table[U]` is the number of perfect matchings of `g[U]`.
fn subset_matching_counts(g: &UndirectedGraph) -> Vec<u64> {
    let mut table = vec![0u64; 1 << g.n()];
    table[0] = 1;
    for mask in 1u64..1 << g.n() {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let low = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << low);
        table[mask as usize] = bits(g.neighbours(low) & rest)
            .map(|w| table[(rest & !(1 << w)) as usize])
            .sum();
    }
    table
}

/// Tallies for every perfect matching of `g`, in enumeration order. Misses
/// of `M` are `Σ_{S ⊆ M} (-1)^|S| pm(G - V(S))`, read from a table of
/// matching counts over all vertex subsets.
pub fn all_intersection_tallies(g: &UndirectedGraph) -> Result<Vec<(PerfectMatching, IntersectionTally)>> {
    let n = g.n();
    too_large("matching tally table", n, MAX_TALLY_TABLE)?;
    let matchings = enumerate_perfect_matchings_general(g)?;
    if matchings.is_empty() {
        return Ok(Vec::new());
    }
    let table = subset_matching_counts(g);
    let full = full_mask(n);
    let total = table[full as usize];
    Ok(matchings
        .into_iter()
        .map(|m| {
            let edges: Vec<u64> = m.edges().map(|(a, b)| 1 << a | 1 << b).collect();
            let mut misses = 0i128;
            for s in 0u32..1 << edges.len() {
                let covered = bits(s as u64).fold(0, |acc, i| acc | edges[i]);
                let term = table[(full & !covered) as usize] as i128;
                misses += if s.count_ones() % 2 == 0 { term } else { -term };
            }
            let misses = misses as u64;
            let tally = IntersectionTally {
                hits: (total - misses).into(),
                misses: misses.into(),
            };
            (m, tally)
        })
        .collect())
}

/// Bipartite version of [`matching_intersection_tally`].
pub fn bipartite_intersection_tally(b: &BipartiteGraph, m: &BipartiteMatching) -> Result<IntersectionTally> {
    m.check_in(b)?;
    let total = count_perfect_matchings(b)?;
    let mut rows = b.rows().to_vec();
    for (i, &j) in m.right_of().iter().enumerate() {
        rows[i] &= !(1 << j);
    }
    let misses = count_perfect_matchings(&BipartiteGraph::from_rows(b.left(), b.right(), rows)?)?;
    Ok(IntersectionTally {
        hits: total - &misses,
        misses,
    })
}

/// Entry `m` is the number of permutations on `g` with exactly `m` fixed
/// points: the sum of `per(A(S,S))` over the moved sets `S` of size `n - m`.
pub fn permutations_by_fixed_points(g: &Digraph) -> Result<Vec<BigCount>> {
    let n = g.n();
    too_large("fixed-point split", n, MAX_FIXED_POINT_SPLIT)?;
    let a = g.adjacency_matrix();
    let mut out = vec![BigUint::zero(); n + 1];
    for s in 0u64..1 << n {
        let moved: Vec<usize> = bits(s).collect();
        out[n - moved.len()] += permanent_ryser(&a.submatrix(&moved, &moved))?;
    }
    Ok(out)
}

/// `p_G = Σ_{S,S' ⊆ [n]} per(M(S,S'))²` for an undirected bipartite graph
/// with biadjacency `M`; non-square submatrices contribute nothing.
pub fn bipartite_permutation_sum(b: &BipartiteGraph) -> Result<BigCount> {
    if !b.is_balanced() {
        return Err(Error::Unbalanced {
            left: b.left(),
            right: b.right(),
        });
    }
    let n = b.left();
    too_large("bipartite permutation sum", n, MAX_BIPARTITE_SUM)?;
    let m = b.biadjacency();
    let mut by_size: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n + 1];
    for s in 0u64..1 << n {
        by_size[s.count_ones() as usize].push(bits(s).collect());
    }
    let mut total = BigUint::zero();
    for group in &by_size {
        for s in group {
            for t in group {
                let p = permanent_ryser(&m.submatrix(s, t))?;
                total += &p * &p;
            }
        }
    }
    Ok(total)
}

/// `Σ_{k=0}^{n} 1/(k!)^l` as an exact fraction.
pub fn inverse_factorial_power_sum(n: usize, l: u32) -> ExactRatio {
    let mut fact = BigUint::one();
    (0..=n)
        .map(|k| {
            if k > 0 {
                fact *= k;
            }
            ExactRatio::new(BigUint::one(), fact.pow(l))
        })
        .sum()
}

/// `A + I` for the adjacency matrix `A` of `g`.
pub fn adjacency_plus_identity(g: &Digraph) -> IntMatrix {
    g.adjacency_matrix().plus_identity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{blowup, complete_bipartite, complete_graph, directed_cycle, isolated_matching_graph};
    use proptest::prelude::*;
    use crate::permanent::permanent_naive;

    fn big(x: u64) -> BigUint {
        x.into()
    }

    /// Oracle: try every bijection of `0..n` directly.
    fn brute(g: &Digraph) -> (u64, u64, Vec<u64>) {
        let n = g.n();
        let mut p: Vec<usize> = (0..n).collect();
        let (mut d, mut total) = (0, 0);
        let mut by_fixed = vec![0u64; n + 1];
        loop {
            let ok = (0..n).all(|v| p[v] == v || g.has_arc(v, p[v]));
            if ok {
                total += 1;
                let f = (0..n).filter(|&v| p[v] == v).count();
                by_fixed[f] += 1;
                if f == 0 {
                    d += 1;
                }
            }
            if !crate::permanent::next_permutation(&mut p) {
                break;
            }
        }
        (d, total, by_fixed)
    }

    #[test]
    fn permutation_parsing() {
        let p: Permutation = "1,2,0".parse().unwrap();
        assert_eq!(p.images(), &[1, 2, 0]);
        assert_eq!(p.to_string(), "1,2,0");
        assert!("1,1,0".parse::<Permutation>().is_err());
        assert!("0,x".parse::<Permutation>().is_err());
        assert!(p.is_derangement());
        let c3 = directed_cycle(3).unwrap();
        p.check_on(&c3).unwrap();
        assert!(matches!(
            "2,0,1".parse::<Permutation>().unwrap().check_on(&c3),
            Err(Error::NotOnGraph(_))
        ));
    }

    #[test]
    fn cycle_counts() {
        for n in 2..12 {
            let c = directed_cycle(n).unwrap();
            assert_eq!(count_derangements(&c).unwrap(), big(1));
            assert_eq!(count_permutations(&c).unwrap(), big(2));
            assert_eq!(dp_ratio(&c).unwrap().to_string(), "1/2");
        }
    }

    #[test]
    fn named_counts() {
        assert_eq!(count_derangements(&blowup(2, 5).unwrap()).unwrap(), big(32));
        assert_eq!(brute(&blowup(2, 5).unwrap()).0, 32);
        let k4 = complete_graph(4).unwrap();
        assert_eq!(count_derangements(k4.digraph()).unwrap(), big(9));
        assert_eq!(brute(k4.digraph()).0, 9);
        assert_eq!(count_permutations(&Digraph::empty(5).unwrap()).unwrap(), big(1));
        let k22 = complete_bipartite(2).unwrap();
        assert_eq!(count_permutations(k22.digraph()).unwrap(), big(9));
        assert_eq!(brute(k22.digraph()).1, 9);
        assert_eq!(dp_ratio(k22.digraph()).unwrap().to_string(), "4/9");
        let star = UndirectedGraph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(dp_ratio(star.digraph()).unwrap().to_string(), "0/1");
        assert!(dp_ratio(star.digraph()).unwrap().is_zero());
    }

    #[test]
    fn counts_match_brute_force_on_all_3_and_4_vertex_digraphs() {
        for n in [3usize, 4] {
            for idx in 0..1u64 << (n * (n - 1)) {
                let g = Digraph::from_index(n, idx).unwrap();
                let (d, p, by_fixed) = brute(&g);
                assert_eq!(count_derangements(&g).unwrap(), big(d));
                assert_eq!(count_permutations(&g).unwrap(), big(p));
                let split = permutations_by_fixed_points(&g).unwrap();
                assert_eq!(split, by_fixed.into_iter().map(big).collect::<Vec<_>>());
                assert_eq!(enumerate_permutations(&g, true).unwrap().len() as u64, d);
                assert_eq!(enumerate_permutations(&g, false).unwrap().len() as u64, p);
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        let c3 = directed_cycle(3).unwrap();
        let der = enumerate_permutations(&c3, true).unwrap();
        assert_eq!(der, vec![Permutation::new(vec![1, 2, 0]).unwrap()]);
        let all = enumerate_permutations(&c3, false).unwrap();
        assert_eq!(
            all.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            vec!["0,1,2", "1,2,0"]
        );
        let d22 = blowup(2, 2).unwrap();
        assert_eq!(enumerate_permutations(&d22, true).unwrap().len(), 4);
        let k5 = complete_graph(5).unwrap();
        let all = enumerate_permutations(k5.digraph(), false).unwrap();
        assert_eq!(all.len(), 120);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(enumerate_permutations(complete_graph(11).unwrap().digraph(), false).is_err());
    }

    #[test]
    fn fixed_point_split_examples() {
        let split = |g: &Digraph| -> Vec<u64> {
            permutations_by_fixed_points(g)
                .unwrap()
                .iter()
                .map(|x| x.try_into().unwrap())
                .collect()
        };
        assert_eq!(split(&directed_cycle(3).unwrap()), vec![1, 0, 0, 1]);
        assert_eq!(split(complete_bipartite(2).unwrap().digraph()), vec![4, 0, 4, 0, 1]);
        for (k, l) in [(2, 3), (2, 4), (3, 3), (1, 5)] {
            let s = split(&blowup(k, l).unwrap());
            for (m, c) in s.iter().enumerate() {
                if m % l != 0 {
                    assert_eq!(*c, 0, "D_({k},{l}) with {m} fixed points");
                }
            }
        }
    }

    #[test]
    fn matching_counts() {
        for n in 1..=6 {
            let k = BipartiteGraph::complete(n).unwrap();
            assert_eq!(count_perfect_matchings(&k).unwrap(), crate::exact::factorial(n));
        }
        for k in 2..=8 {
            let n = 2 * k;
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            let c = UndirectedGraph::new(n, &edges).unwrap();
            assert_eq!(count_perfect_matchings_general(&c).unwrap(), big(2));
            assert_eq!(enumerate_perfect_matchings_general(&c).unwrap().len(), 2);
        }
        let (h, _) = isolated_matching_graph(4).unwrap();
        assert_eq!(count_perfect_matchings_general(&h).unwrap(), big(17));
        assert_eq!(
            count_perfect_matchings_general(&complete_graph(16).unwrap()).unwrap(),
            big((1..16u64).step_by(2).product())
        );
        assert_eq!(count_perfect_matchings(&BipartiteGraph::complete(3).unwrap()).unwrap(), big(6));
        let unbalanced = BipartiteGraph::new(2, 3, &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(count_perfect_matchings(&unbalanced).unwrap(), big(0));
        assert_eq!(count_perfect_matchings_general(&complete_graph(5).unwrap()).unwrap(), big(0));
    }

    #[test]
    fn tally_examples() {
        let c4 = UndirectedGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        for m in enumerate_perfect_matchings_general(&c4).unwrap() {
            let t = matching_intersection_tally(&c4, &m).unwrap();
            assert_eq!((t.hits, t.misses), (big(1), big(1)));
        }
        let k4 = complete_graph(4).unwrap();
        for m in enumerate_perfect_matchings_general(&k4).unwrap() {
            let t = matching_intersection_tally(&k4, &m).unwrap();
            assert_eq!((t.hits, t.misses), (big(1), big(2)));
        }
        let (h, m0) = isolated_matching_graph(4).unwrap();
        let t = matching_intersection_tally(&h, &m0).unwrap();
        assert_eq!((t.hits, t.misses), (big(1), big(16)));
        let bad = PerfectMatching::from_edges(4, &[(0, 2), (1, 3)]).unwrap();
        assert!(matches!(
            matching_intersection_tally(&c4, &bad),
            Err(Error::NotPerfectMatching(_))
        ));
    }

    #[test]
    fn tallies_agree_with_pairwise_enumeration() {
        let g = UndirectedGraph::new(
            8,
            &[(0, 1), (0, 3), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 4), (1, 6), (2, 5), (0, 7)],
        )
        .unwrap();
        let all = enumerate_perfect_matchings_general(&g).unwrap();
        assert_eq!(BigUint::from(all.len()), count_perfect_matchings_general(&g).unwrap());
        for m in &all {
            let hits = all.iter().filter(|x| x.intersects(m)).count();
            let t = matching_intersection_tally(&g, m).unwrap();
            assert_eq!(t.hits, BigUint::from(hits));
            assert_eq!(t.misses, BigUint::from(all.len() - hits));
        }
        let b = BipartiteGraph::new(3, 3, &[(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0), (0, 2)]).unwrap();
        let all = enumerate_bipartite_matchings(&b).unwrap();
        for m in &all {
            let hits = all.iter().filter(|x| x.intersects(m)).count();
            let t = bipartite_intersection_tally(&b, m).unwrap();
            assert_eq!(t.hits, BigUint::from(hits));
            assert_eq!(t.total(), BigUint::from(all.len()));
        }
    }

    #[test]
    fn table_tallies_on_isolated_matching_graph() {
        let (h, m0) = isolated_matching_graph(4).unwrap();
        let all = all_intersection_tallies(&h).unwrap();
        assert_eq!(all.len(), 17);
        let (_, t) = all.iter().find(|(m, _)| *m == m0).unwrap();
        assert_eq!((t.hits.clone(), t.misses.clone()), (big(1), big(16)));
        assert!(all_intersection_tallies(&complete_graph(5).unwrap()).unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn table_tallies_match_per_matching_tallies(
            n in (1usize..=5).prop_map(|h| 2 * h),
            seed in any::<u64>(),
        ) {
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|&(u, v)| (seed.rotate_left((u * n + v) as u32) ^ seed) & 3 != 0)
                .collect();
            let g = UndirectedGraph::new(n, &edges).unwrap();
            let all = all_intersection_tallies(&g).unwrap();
            for (m, t) in &all {
                prop_assert_eq!(t, &matching_intersection_tally(&g, m).unwrap());
                let hits = all.iter().filter(|(x, _)| x.intersects(m)).count();
                prop_assert_eq!(&t.hits, &BigUint::from(hits));
            }
        }
    }

    #[test]
    fn bipartite_permutation_sum_examples() {
        let k11 = BipartiteGraph::complete(1).unwrap();
        assert_eq!(bipartite_permutation_sum(&k11).unwrap(), big(2));
        let k22 = BipartiteGraph::complete(2).unwrap();
        assert_eq!(bipartite_permutation_sum(&k22).unwrap(), big(9));
        // path l0 - r0 - l1 - r1
        let p4 = BipartiteGraph::new(2, 2, &[(0, 0), (1, 0), (1, 1)]).unwrap();
        let sym = p4.to_undirected().unwrap();
        assert_eq!(bipartite_permutation_sum(&p4).unwrap(), big(brute(sym.digraph()).1));
        assert!(matches!(
            bipartite_permutation_sum(&BipartiteGraph::new(1, 2, &[]).unwrap()),
            Err(Error::Unbalanced { .. })
        ));
    }

    #[test]
    fn derangements_are_squared_matchings_on_bipartite_graphs() {
        for rows in 0u64..1 << 9 {
            let b = BipartiteGraph::from_rows(3, 3, vec![rows & 7, rows >> 3 & 7, rows >> 6]).unwrap();
            let pm = count_perfect_matchings(&b).unwrap();
            let sym = b.to_undirected().unwrap();
            assert_eq!(count_derangements(sym.digraph()).unwrap(), &pm * &pm);
            assert_eq!(bipartite_permutation_sum(&b).unwrap(), count_permutations(sym.digraph()).unwrap());
        }
    }

    #[test]
    fn derangement_count_is_naive_permanent() {
        let g = blowup(3, 3).unwrap();
        assert_eq!(count_derangements(&g).unwrap(), permanent_naive(&g.adjacency_matrix()).unwrap());
        assert_eq!(
            count_permutations(&g).unwrap(),
            permanent_naive(&adjacency_plus_identity(&g)).unwrap()
        );
    }

    #[test]
    fn inverse_factorial_sums() {
        assert_eq!(inverse_factorial_power_sum(2, 2).to_string(), "9/4");
        assert_eq!(inverse_factorial_power_sum(3, 1).to_string(), "8/3");
    }
}
