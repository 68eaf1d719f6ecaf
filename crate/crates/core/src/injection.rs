//! An explicit injection from the derangements of a digraph into its
//! permutations that have a fixed point.
//!
//! For a chosen vertex `v`, a derangement `D` keeps every cycle that avoids
//! `v`. The cycle `C` through `v` is a Hamilton cycle of the subgraph
//! induced on its vertices; write it `v_0 = v, v_1, …, v_{k-1}`. A *chord*
//! `(v_i, v_j)` is an arc of that subgraph not on `C`; it closes the cycle
//! `C_ij = v_0 … v_i v_j … v_{k-1}` and skips the nonempty segment
//! `L_ij = v_{i+1} … v_{j-1}`. It is *forward* when `v_0 ∉ L_ij`. The
//! forward chords are partially ordered by inclusion of their `L` sets; the
//! first minimal one is the minimal chord with the smallest start `i`.
//!
//! `C` maps to `C_st` plus the fixed points `L_st` for the first minimal
//! forward chord `(v_s, v_t)`, or to all fixed points when there is no
//! forward chord (in which case `C` is the only Hamilton cycle of the
//! subgraph). The map is inverted by walking the image cycle from `v` to
//! the first vertex with an arc into the fixed set and then threading the
//! fixed set back in, one forced arc at a time.

use num_bigint::BigUint;
use serde::Serialize;
use std::collections::HashSet;

use crate::counting::{ser_big, Permutation};
use crate::error::{too_large, Error, Result};
use crate::graph::{bits, full_mask, Digraph};

pub const MAX_CENSUS: usize = 12;

/// Orbits of a permutation: each cycle starts at its minimum vertex and
/// cycles are sorted by that minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub cycles: Vec<Vec<usize>>,
    pub fixed: Vec<usize>,
}

impl CycleDecomposition {
    pub fn cycle_containing(&self, v: usize) -> Option<&Vec<usize>> {
        self.cycles.iter().find(|c| c.contains(&v))
    }
}

pub fn cycle_decomposition(g: &Digraph, p: &Permutation) -> Result<CycleDecomposition> {
    p.check_on(g)?;
    Ok(decompose(p))
}

fn decompose(p: &Permutation) -> CycleDecomposition {
    let n = p.n();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    let mut fixed = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        if p.image(start) == start {
            seen[start] = true;
            fixed.push(start);
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x);
            x = p.image(x);
        }
        cycles.push(cycle);
    }
    CycleDecomposition { cycles, fixed }
}

/// A chord `(v_i, v_j)` of a rooted Hamilton cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChordRecord {
    /// Position `i` of the tail on the cycle.
    pub i: usize,
    /// Position `j` of the head on the cycle.
    pub j: usize,
    pub tail: usize,
    pub head: usize,
    /// `L_ij`, the skipped vertices in cycle order.
    pub leftover: Vec<usize>,
    /// `C_ij` in cycle order starting from the root.
    pub completed: Vec<usize>,
    #[serde(skip)]
    leftover_positions: u64,
}

impl ChordRecord {
    /// `self ≺ other`: the skipped set is a proper subset of the other's.
    pub fn precedes(&self, other: &ChordRecord) -> bool {
        self.leftover_positions != other.leftover_positions
            && self.leftover_positions & other.leftover_positions == self.leftover_positions
    }

    pub fn leftover_positions(&self) -> u64 {
        self.leftover_positions
    }
}

/// Checks that `cycle` lists every vertex of `g` once and that consecutive
/// vertices (cyclically) are joined by arcs.
fn check_hamilton(g: &Digraph, cycle: &[usize]) -> Result<()> {
    let n = g.n();
    if n < 2 || cycle.len() != n {
        return Err(Error::NotHamilton(format!(
            "{} vertices listed for a graph on {n}",
            cycle.len()
        )));
    }
    let mut seen = 0u64;
    for &v in cycle {
        if v >= n || seen >> v & 1 == 1 {
            return Err(Error::NotHamilton(format!("vertex {v} repeated or out of range")));
        }
        seen |= 1 << v;
    }
    for k in 0..n {
        let (a, b) = (cycle[k], cycle[(k + 1) % n]);
        if !g.has_arc(a, b) {
            return Err(Error::NotHamilton(format!("({a}, {b}) is not an arc")));
        }
    }
    Ok(())
}

/// Forward chords of the Hamilton cycle `cycle` (rooted at `cycle[0]`),
/// ordered by `(i, j)` with a head at the root treated as position `n`.
pub fn forward_chords(g: &Digraph, cycle: &[usize]) -> Result<Vec<ChordRecord>> {
    check_hamilton(g, cycle)?;
    Ok(forward_chords_unchecked(g, cycle))
}

fn forward_chords_unchecked(g: &Digraph, cycle: &[usize]) -> Vec<ChordRecord> {
    let n = cycle.len();
    let mut pos = vec![0usize; g.n()];
    for (k, &v) in cycle.iter().enumerate() {
        pos[v] = k;
    }
    let mut chords: Vec<ChordRecord> = g
        .arcs()
        .filter_map(|(a, b)| {
            let (i, j) = (pos[a], pos[b]);
            if j == (i + 1) % n {
                return None;
            }
            // L_ij = i+1 .. j-1 walking forward; it avoids position 0 iff
            // the walk does not wrap past it
            let end = if j == 0 { n } else { j };
            if end < i {
                return None;
            }
            let leftover_positions = full_mask(end) & !full_mask(i + 1);
            Some(ChordRecord {
                i,
                j,
                tail: a,
                head: b,
                leftover: cycle[i + 1..end].to_vec(),
                completed: cycle[..=i].iter().chain(&cycle[end..]).copied().collect(),
                leftover_positions,
            })
        })
        .collect();
    chords.sort_by_key(|c| (c.i, if c.j == 0 { n } else { c.j }));
    chords
}

/// The minimal forward chord with the smallest start position, if any
/// forward chord exists.
pub fn first_minimal_forward_chord(g: &Digraph, cycle: &[usize]) -> Result<Option<ChordRecord>> {
    check_hamilton(g, cycle)?;
    first_minimal(forward_chords_unchecked(g, cycle))
}

fn first_minimal(chords: Vec<ChordRecord>) -> Result<Option<ChordRecord>> {
    let minimal: Vec<&ChordRecord> = chords
        .iter()
        .filter(|c| !chords.iter().any(|d| d.precedes(c)))
        .collect();
    let Some(first) = minimal.first() else {
        return Ok(None);
    };
    if minimal.iter().filter(|c| c.i == first.i).count() > 1 {
        return Err(Error::UniquenessViolation(format!(
            "two minimal forward chords start at position {}",
            first.i
        )));
    }
    Ok(Some((*first).clone()))
}

/// The Hamilton-cycle map `f_v` on a digraph with Hamilton cycle `cycle`
/// rooted at `v = cycle[0]`: the permutation made of `C_st` and the fixed
/// points `L_st`, or the identity when there is no forward chord.
pub fn hamilton_image(g: &Digraph, cycle: &[usize]) -> Result<Permutation> {
    check_hamilton(g, cycle)?;
    hamilton_image_unchecked(g, cycle)
}

fn hamilton_image_unchecked(g: &Digraph, cycle: &[usize]) -> Result<Permutation> {
    let mut images: Vec<usize> = (0..g.n()).collect();
    if let Some(chord) = first_minimal(forward_chords_unchecked(g, cycle))? {
        let c = &chord.completed;
        for k in 0..c.len() {
            images[c[k]] = c[(k + 1) % c.len()];
        }
    }
    Permutation::new(images)
}

/// Applies `f_v` to one cycle of a permutation inside `g`, writing the
/// result into `images`. `cycle` must start at `v`.
fn map_cycle(g: &Digraph, cycle: &[usize], images: &mut [usize]) -> Result<()> {
    let mut vertices = cycle.to_vec();
    vertices.sort_unstable();
    let local = |x: usize| vertices.binary_search(&x).unwrap();
    let h = g.induced(&vertices)?;
    let local_cycle: Vec<usize> = cycle.iter().map(|&x| local(x)).collect();
    let image = hamilton_image_unchecked(&h, &local_cycle)?;
    for (k, &x) in vertices.iter().enumerate() {
        images[x] = vertices[image.image(k)];
    }
    Ok(())
}

/// The cycle of `p` through `v`, starting at `v`.
fn orbit_from(p: &Permutation, v: usize) -> Vec<usize> {
    let mut out = vec![v];
    let mut x = p.image(v);
    while x != v {
        out.push(x);
        x = p.image(x);
    }
    out
}

/// `F_v(D)`: cycles of `d` avoiding `v` are kept, the cycle through `v` is
/// replaced by its image under `f_v` in the subgraph induced on its
/// vertices. The result always has a fixed point.
pub fn apply_injection(g: &Digraph, d: &Permutation, v: usize) -> Result<Permutation> {
    d.check_on(g)?;
    if !d.is_derangement() {
        return Err(Error::NotDerangement(format!("{d} has fixed points")));
    }
    if v >= g.n() {
        return Err(Error::OutOfRange { vertex: v, n: g.n() });
    }
    let mut images = d.images().to_vec();
    map_cycle(g, &orbit_from(d, v), &mut images)?;
    Permutation::new(images)
}

/// Hamilton cycles of `g` through all vertices, rooted at `root`, stopping
/// after `limit` are found.
pub fn hamilton_cycles(g: &Digraph, root: usize, limit: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut out = Vec::new();
    if n < 2 || root >= n {
        return out;
    }
    fn rec(g: &Digraph, path: &mut Vec<usize>, used: u64, root: usize, limit: usize, out: &mut Vec<Vec<usize>>) {
        if out.len() >= limit {
            return;
        }
        let last = *path.last().unwrap();
        if path.len() == g.n() {
            if g.has_arc(last, root) {
                out.push(path.clone());
            }
            return;
        }
        for w in bits(g.row(last) & !used) {
            path.push(w);
            rec(g, path, used | 1 << w, root, limit, out);
            path.pop();
        }
    }
    rec(g, &mut vec![root], 1 << root, root, limit, &mut out);
    out
}

/// Recovers the derangement `D` with `F_v(D) = p`, or `NotInImage`.
pub fn invert_injection(g: &Digraph, p: &Permutation, v: usize) -> Result<Permutation> {
    p.check_on(g)?;
    if v >= g.n() {
        return Err(Error::OutOfRange { vertex: v, n: g.n() });
    }
    let fixed = p.fixed_mask();
    if fixed == 0 {
        return Err(Error::NotInImage(format!("{p} has no fixed point")));
    }
    let mut images = p.images().to_vec();

    if p.image(v) == v {
        // the broken cycle went to fixed points only; it was the unique
        // Hamilton cycle of the subgraph on fix(P)
        let vertices: Vec<usize> = bits(fixed).collect();
        let h = g.induced(&vertices)?;
        let root = vertices.binary_search(&v).unwrap();
        let found = hamilton_cycles(&h, root, 2);
        if found.len() != 1 {
            return Err(Error::NotInImage(format!(
                "the subgraph on the fixed points has {} Hamilton cycles",
                if found.is_empty() { "no" } else { "several" }
            )));
        }
        let cycle = &found[0];
        for k in 0..cycle.len() {
            images[vertices[cycle[k]]] = vertices[cycle[(k + 1) % cycle.len()]];
        }
    } else {
        let short = orbit_from(p, v);
        // v_s: first vertex along the image cycle with an arc into fix(P)
        let s = short
            .iter()
            .position(|&x| g.row(x) & fixed != 0)
            .ok_or_else(|| Error::NotInImage("no arc from the cycle into the fixed points".into()))?;
        let into = g.row(short[s]) & fixed;
        if into.count_ones() != 1 {
            return Err(Error::NotInImage(format!(
                "vertex {} has {} arcs into the fixed points",
                short[s],
                into.count_ones()
            )));
        }
        let mut segment = vec![into.trailing_zeros() as usize];
        let mut placed = into;
        while placed != fixed {
            let remaining = fixed & !placed;
            let arcs: Vec<(usize, usize)> = bits(placed)
                .flat_map(|a| bits(g.row(a) & remaining).map(move |b| (a, b)))
                .collect();
            if arcs.len() != 1 {
                return Err(Error::NotInImage(format!(
                    "{} arcs lead from the placed prefix into the rest of the fixed points",
                    arcs.len()
                )));
            }
            segment.push(arcs[0].1);
            placed |= 1 << arcs[0].1;
        }
        let cycle: Vec<usize> = short[..=s]
            .iter()
            .chain(&segment)
            .chain(&short[s + 1..])
            .copied()
            .collect();
        for k in 0..cycle.len() {
            images[cycle[k]] = cycle[(k + 1) % cycle.len()];
        }
    }

    let candidate = Permutation::new(images)?;
    if candidate.check_on(g).is_err() || !candidate.is_derangement() {
        return Err(Error::NotInImage("reconstruction is not a derangement on the graph".into()));
    }
    if apply_injection(g, &candidate, v)? != *p {
        return Err(Error::NotInImage("reconstruction does not map back".into()));
    }
    Ok(candidate)
}

/// A vertex `v` for which the identity is not in the image of `F_v`: the
/// tail of a chord when `g` has exactly one Hamilton cycle, otherwise 0.
pub fn choose_special_vertex(g: &Digraph) -> Result<usize> {
    if g.is_directed_cycle() {
        return Err(Error::IsDirectedCycle);
    }
    let found = hamilton_cycles(g, 0, 2);
    if let [cycle] = found.as_slice() {
        let n = cycle.len();
        let mut next = vec![0usize; n];
        for k in 0..n {
            next[cycle[k]] = cycle[(k + 1) % n];
        }
        if let Some((u, _)) = g.arcs().find(|&(a, b)| next[a] != b) {
            return Ok(u);
        }
    }
    Ok(0)
}

/// Hamilton cycles and, per vertex, all simple directed cycles through it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HamiltonCensus {
    #[serde(serialize_with = "ser_big")]
    pub ham_count: BigUint,
    #[serde(serialize_with = "ser_big_vec")]
    pub cycles_through: Vec<BigUint>,
    pub corollary_ok: bool,
}

fn ser_big_vec<S: serde::Serializer>(xs: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

/// Number of simple directed cycles (length ≥ 2) on each vertex set,
/// indexed by mask. Counts paths from the minimum vertex of the set.
pub(crate) fn cycles_by_vertex_set(g: &Digraph) -> Vec<u64> {
    let n = g.n();
    let size = 1usize << n;
    let mut per_set = vec![0u64; size];
    // paths[mask * n + end]: paths from min(mask) to end covering mask
    let mut paths = vec![0u64; size * n];
    for s in 0..n {
        paths[(1 << s) * n + s] = 1;
    }
    for mask in 1..size {
        let start = mask.trailing_zeros() as usize;
        for end in bits(mask as u64) {
            let c = paths[mask * n + end];
            if c == 0 {
                continue;
            }
            if mask.count_ones() >= 2 && g.has_arc(end, start) {
                per_set[mask] += c;
            }
            // extend only by vertices above the start
            for w in bits(g.row(end) & !(mask as u64) & !full_mask(start + 1)) {
                paths[(mask | 1 << w) * n + w] += c;
            }
        }
    }
    per_set
}

pub fn hamilton_census(g: &Digraph) -> Result<HamiltonCensus> {
    let n = g.n();
    too_large("Hamilton census", n, MAX_CENSUS)?;
    let per_set = cycles_by_vertex_set(g);
    let mut through = vec![0u64; n];
    for (mask, &c) in per_set.iter().enumerate() {
        if c > 0 {
            for v in bits(mask as u64) {
                through[v] += c;
            }
        }
    }
    let ham = per_set[(1usize << n) - 1];
    let corollary_ok = g.is_directed_cycle() || through.iter().any(|&t| t >= 2 * ham);
    Ok(HamiltonCensus {
        ham_count: ham.into(),
        cycles_through: through.into_iter().map(BigUint::from).collect(),
        corollary_ok,
    })
}

/// Images of every derangement under `F_v`; fails if two collide.
pub fn injection_images(g: &Digraph, derangements: &[Permutation], v: usize) -> Result<Vec<Permutation>> {
    let mut seen = HashSet::with_capacity(derangements.len());
    let mut out = Vec::with_capacity(derangements.len());
    for d in derangements {
        let img = apply_injection(g, d, v)?;
        if !seen.insert(img.clone()) {
            return Err(Error::Counterexample(format!(
                "F_{v} maps two derangements to {img}"
            )));
        }
        out.push(img);
    }
    Ok(out)
}
