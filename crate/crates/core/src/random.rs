//! Random graph models, subfactorials, exact expectations for digraphs with
//! a fixed number of arcs, and Monte Carlo estimates of `(d/p)`.
//!
//! Sample `index` under `seed` draws from a ChaCha8 stream keyed by `seed`
//! with stream id `index`, so samples are independent of how they are
//! scheduled. Bernoulli models take one uniform `f64` per slot in
//! row-major order (`u < v` for graphs, `u ≠ v` for digraphs) and keep the
//! slot when the draw is below `q`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::counting::dp_ratio;
use crate::error::{too_large, Error, Result};
use crate::exact::{binomial, factorial, BigCount, ExactRatio};
use crate::graph::{AnyGraph, Digraph, UndirectedGraph};

pub const MAX_SAMPLE_VERTICES: usize = 30;
pub const MAX_MC_VERTICES: usize = 24;
pub const MAX_EXPECTATION_VERTICES: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelSpec {
    /// `G(n, q)`: each unordered pair is an edge with probability `q`.
    Graph { n: usize, q: f64 },
    /// `DG(n, q)`: each ordered pair is an arc with probability `q`.
    Digraph { n: usize, q: f64 },
    /// `DG(n, m)`: a uniform digraph with exactly `m` arcs.
    DigraphFixedArcs { n: usize, m: usize },
}

impl ModelSpec {
    pub fn n(&self) -> usize {
        match *self {
            Self::Graph { n, .. } | Self::Digraph { n, .. } | Self::DigraphFixedArcs { n, .. } => n,
        }
    }

    /// Arc density: `q`, or `m / n(n-1)` for the fixed-arc model.
    pub fn density(&self) -> f64 {
        match *self {
            Self::Graph { q, .. } | Self::Digraph { q, .. } => q,
            Self::DigraphFixedArcs { n, m } if n >= 2 => m as f64 / (n * (n - 1)) as f64,
            Self::DigraphFixedArcs { .. } => 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::BadParams("n must be at least 1".into()));
        }
        too_large("random model vertex count", n, MAX_SAMPLE_VERTICES)?;
        match *self {
            Self::Graph { q, .. } | Self::Digraph { q, .. } if !(0.0..=1.0).contains(&q) => {
                Err(Error::BadParams(format!("q = {q} is not in [0, 1]")))
            }
            Self::DigraphFixedArcs { n, m } if m > n * (n - 1) => Err(Error::BadParams(format!(
                "m = {m} exceeds the {} arc slots",
                n * (n - 1)
            ))),
            _ => Ok(()),
        }
    }
}

pub(crate) fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Row-major slot `s` of the `n(n-1)` ordered pairs `u ≠ v`.
fn arc_slot(n: usize, s: usize) -> (usize, usize) {
    let u = s / (n - 1);
    let r = s % (n - 1);
    (u, if r < u { r } else { r + 1 })
}

pub fn sample(model: &ModelSpec, seed: u64) -> Result<AnyGraph> {
    sample_indexed(model, seed, 0)
}

pub fn sample_indexed(model: &ModelSpec, seed: u64, index: u64) -> Result<AnyGraph> {
    model.validate()?;
    draw(model, &mut stream(seed, index))
}

/// Draws one graph from `model`, assumed valid, continuing `rng`.
pub(crate) fn draw(model: &ModelSpec, rng: &mut ChaCha8Rng) -> Result<AnyGraph> {
    Ok(match *model {
        ModelSpec::Graph { n, q } => {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen::<f64>() < q {
                        edges.push((u, v));
                    }
                }
            }
            AnyGraph::Undirected(UndirectedGraph::new(n, &edges)?)
        }
        ModelSpec::Digraph { n, q } => {
            let mut arcs = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.gen::<f64>() < q {
                        arcs.push((u, v));
                    }
                }
            }
            AnyGraph::Directed(Digraph::new(n, &arcs)?)
        }
        ModelSpec::DigraphFixedArcs { n, m } => {
            let arcs: Vec<_> = if n < 2 {
                Vec::new()
            } else {
                index::sample(rng, n * (n - 1), m)
                    .into_iter()
                    .map(|s| arc_slot(n, s))
                    .collect()
            };
            AnyGraph::Directed(Digraph::new(n, &arcs)?)
        }
    })
}

/// Subfactorial `Der(n)`.
pub fn derangement_number(n: usize) -> BigCount {
    let (mut prev, mut cur) = (BigUint::one(), BigUint::zero());
    if n == 0 {
        return prev;
    }
    for k in 2..=n {
        let next = (&prev + &cur) * (k - 1);
        prev = cur;
        cur = next;
    }
    cur
}

/// `f(t) = C(n(n-1) - t, m - t) / C(n(n-1), m)`: the probability that a
/// fixed set of `t` arcs lies in a uniform `m`-arc digraph.
pub fn inclusion_probability_f(n: usize, m: usize, t: usize) -> Result<ExactRatio> {
    let slots = n * n.saturating_sub(1);
    if m > slots {
        return Err(Error::BadParams(format!("m = {m} exceeds the {slots} arc slots")));
    }
    if t > m {
        return Ok(ExactRatio::zero());
    }
    Ok(ExactRatio::new(binomial(slots - t, m - t), binomial(slots, m)))
}

/// `(E[X], E[Y])` for `DG(n, m)`: expected derangements and permutations.
pub fn expected_counts_dgnm(n: usize, m: usize) -> Result<(ExactRatio, ExactRatio)> {
    too_large("expectation vertex count", n, MAX_EXPECTATION_VERTICES)?;
    let ex = &inclusion_probability_f(n, m, n)? * &derangement_number(n);
    let ey = (0..=n)
        .map(|k| {
            let weight = binomial(n, k) * derangement_number(n - k);
            Ok(&inclusion_probability_f(n, m, n - k)? * &weight)
        })
        .sum::<Result<ExactRatio>>()?;
    Ok((ex, ey))
}

/// `e^{-1/q}`, with the `q → 0` limit 0.
pub fn limiting_ratio(q: f64) -> f64 {
    if q <= 0.0 {
        0.0
    } else {
        (-1.0 / q).exp()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McSummary {
    pub n: usize,
    pub q: f64,
    pub samples: usize,
    pub mean: f64,
    pub stddev: f64,
    pub target: f64,
    #[serde(skip)]
    pub ratios: Vec<ExactRatio>,
}

/// Averages the exact `(d/p)` of `samples` independent draws. Any sample
/// above `1/2` aborts with `Counterexample`.
pub fn mc_dp_ratio(model: &ModelSpec, samples: usize, seed: u64) -> Result<McSummary> {
    model.validate()?;
    too_large("Monte Carlo vertex count", model.n(), MAX_MC_VERTICES)?;
    if samples == 0 {
        return Err(Error::BadParams("at least one sample is required".into()));
    }
    let ratios = (0..samples as u64)
        .into_par_iter()
        .map(|i| dp_ratio(&sample_indexed(model, seed, i)?.as_digraph()?))
        .collect::<Result<Vec<_>>>()?;
    let half = ExactRatio::new(1u32.into(), 2u32.into());
    if let Some((i, r)) = ratios.iter().enumerate().find(|(_, r)| **r > half) {
        return Err(Error::Counterexample(format!("sample {i} has (d/p) = {r} > 1/2")));
    }
    let values: Vec<f64> = ratios.iter().map(ExactRatio::to_f64).collect();
    let mean = values.iter().sum::<f64>() / samples as f64;
    let stddev = if samples > 1 {
        (values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples - 1) as f64).sqrt()
    } else {
        0.0
    };
    let q = model.density();
    Ok(McSummary {
        n: model.n(),
        q,
        samples,
        mean,
        stddev,
        target: limiting_ratio(q),
        ratios,
    })
}

/// `(d/p)` of the complete loopless digraph on `n` vertices: `Der(n) / n!`.
pub fn complete_digraph_ratio(n: usize) -> ExactRatio {
    ExactRatio::new(derangement_number(n), factorial(n))
}
