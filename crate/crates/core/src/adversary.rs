//! Edge-addition strategies and exhaustive resilience oracles.
//!
//! The oracles are exact and only run at tiny `n`; they are the ground
//! truth the strategies are checked against.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::{color_within, Coloring, DEFAULT_EXACT_CHI_LIMIT};
use crate::error::{Error, Result};
use crate::graph::io::edge_set_to_edge_list;
use crate::graph::{EdgeSet, Graph};

/// Bounded-degree generation retries before falling back to dropping
/// invalid pairs.
pub const BOUNDED_DEGREE_ATTEMPTS: usize = 100;
/// Default number of search nodes a local-resilience search may visit.
pub const DEFAULT_LOCAL_SEARCH_BUDGET: u64 = 50_000_000;

/// How much the adversary may add.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum AdversaryBudget {
    /// At most `m` edges in total.
    Global { m: usize },
    /// An added graph of maximum degree at most `delta`.
    Local { delta: usize },
}

impl AdversaryBudget {
    pub fn admits(&self, e: &EdgeSet, n: usize) -> bool {
        match *self {
            AdversaryBudget::Global { m } => e.len() <= m,
            AdversaryBudget::Local { delta } => e.degrees(n).into_iter().all(|d| d <= delta),
        }
    }
}

fn check_vertices(g: &Graph, vertices: &[usize]) -> Result<()> {
    match vertices.iter().find(|&&v| v >= g.n()) {
        Some(&v) => Err(Error::VertexOutOfRange {
            vertex: v,
            n: g.n(),
        }),
        None => Ok(()),
    }
}

/// Missing pairs inside `target`; adding them makes `target` a clique.
pub fn plant_clique(g: &Graph, target: &[usize]) -> Result<EdgeSet> {
    check_vertices(g, target)?;
    let mut e = EdgeSet::new();
    for (i, &u) in target.iter().enumerate() {
        for &v in &target[i + 1..] {
            if u != v && !g.has_edge(u, v) {
                e.insert(u, v)?;
            }
        }
    }
    Ok(e)
}

/// Clique size `ceil(n / log_b(np))`, or `None` when `log_b(np) <= 0`.
pub fn tightness_clique_size(n: usize, p: f64) -> Option<usize> {
    let log_b_np = (n as f64 * p).ln() / -(-p).ln_1p();
    (log_b_np > 0.0).then(|| ((n as f64 / log_b_np).ceil() as usize).min(n))
}

/// `m` distinct non-edges of `g` chosen uniformly, deterministic in `seed`.
pub fn random_budget(g: &Graph, m: usize, seed: u64) -> Result<EdgeSet> {
    let non_edges: Vec<(usize, usize)> = g.non_edges().collect();
    if m > non_edges.len() {
        return Err(Error::BudgetTooLarge {
            requested: m,
            available: non_edges.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = rand::seq::index::sample(&mut rng, non_edges.len(), m);
    EdgeSet::from_pairs(picked.into_iter().map(|i| non_edges[i]))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundedDegreeGraph {
    pub edges: EdgeSet,
    /// Recounted maximum degree.
    pub max_degree: usize,
    pub attempts: usize,
    /// Whether some attempt paired all stubs without a loop or repeat.
    pub clean: bool,
}

/// Random graph on `n` vertices with maximum degree at most `delta`, by
/// stub matching: each vertex gets `delta` stubs, stubs are shuffled and
/// paired in order. An attempt with a self-loop or repeated pair is retried;
/// after [`BOUNDED_DEGREE_ATTEMPTS`] the last attempt is kept with those
/// pairs dropped.
pub fn bounded_degree_h(n: usize, delta: usize, seed: u64) -> Result<BoundedDegreeGraph> {
    if n > 0 && delta > n - 1 {
        return Err(Error::InvalidParameter(format!(
            "delta = {delta} exceeds n - 1 = {}",
            n - 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, delta)).collect();
    let mut edges = EdgeSet::new();
    let mut clean = false;
    let mut attempts = 0;
    while attempts < BOUNDED_DEGREE_ATTEMPTS {
        attempts += 1;
        stubs.shuffle(&mut rng);
        edges = EdgeSet::new();
        clean = true;
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || !edges.insert(u, v)? {
                clean = false;
            }
        }
        if clean {
            break;
        }
    }
    let max_degree = edges.degrees(n).into_iter().max().unwrap_or(0);
    assert!(max_degree <= delta, "degree cap violated");
    Ok(BoundedDegreeGraph {
        edges,
        max_degree,
        attempts,
        clean,
    })
}

/// A minimal witness found by an oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResilienceWitness {
    /// Edge count (global) or maximum degree (local) of the witness.
    pub value: usize,
    pub edges: EdgeSet,
}

/// Colorings of `g` with at most `cap` colors, used to skip candidate edge
/// sets that leave one of them proper.
struct ColoringCache {
    cap: usize,
    limit: usize,
    colorings: Vec<Coloring>,
}

impl ColoringCache {
    /// Whether `g ∪ pairs` needs more than `cap` colors.
    fn breaks(&mut self, g: &Graph, pairs: &[(usize, usize)]) -> Result<bool> {
        let survives = |c: &Coloring| pairs.iter().all(|&(u, v)| c.colors[u] != c.colors[v]);
        if self.colorings.iter().any(survives) {
            return Ok(false);
        }
        let e = EdgeSet::from_pairs(pairs.iter().copied())?;
        match color_within(&g.union(&e)?, self.cap, self.limit)? {
            Some(c) => {
                self.colorings.push(c);
                Ok(false)
            }
            None => Ok(true),
        }
    }
}

/// Advances `idx` (strictly increasing, values `< n`) to the next
/// combination in colexicographic order; false when exhausted.
fn next_colex(idx: &mut [usize], n: usize) -> bool {
    let m = idx.len();
    for j in 0..m {
        let ceiling = if j + 1 < m { idx[j + 1] } else { n };
        if idx[j] + 1 < ceiling {
            idx[j] += 1;
            for (i, slot) in idx.iter_mut().enumerate().take(j) {
                *slot = i;
            }
            return true;
        }
    }
    false
}

/// Least `m <= m_max` such that adding some `m` non-edges pushes the
/// chromatic number above `chi_cap`, with a witness; `None` if no such `m`.
///
/// Subsets are tried by size, ascending, in colexicographic order within a
/// size, so the first hit is minimal.
pub fn global_resilience_oracle(
    g: &Graph,
    chi_cap: usize,
    m_max: usize,
) -> Result<Option<ResilienceWitness>> {
    global_resilience_oracle_with_limit(g, chi_cap, m_max, DEFAULT_EXACT_CHI_LIMIT)
}

pub fn global_resilience_oracle_with_limit(
    g: &Graph,
    chi_cap: usize,
    m_max: usize,
    limit: usize,
) -> Result<Option<ResilienceWitness>> {
    let Some(base) = color_within(g, chi_cap, limit)? else {
        return Ok(Some(ResilienceWitness {
            value: 0,
            edges: EdgeSet::new(),
        }));
    };
    if chi_cap >= g.n() {
        return Ok(None);
    }
    let non_edges: Vec<(usize, usize)> = g.non_edges().collect();
    let mut cache = ColoringCache {
        cap: chi_cap,
        limit,
        colorings: vec![base],
    };
    for m in 1..=m_max.min(non_edges.len()) {
        let mut idx: Vec<usize> = (0..m).collect();
        loop {
            let pairs: Vec<(usize, usize)> = idx.iter().map(|&i| non_edges[i]).collect();
            if cache.breaks(g, &pairs)? {
                return Ok(Some(ResilienceWitness {
                    value: m,
                    edges: EdgeSet::from_pairs(pairs)?,
                }));
            }
            if !next_colex(&mut idx, non_edges.len()) {
                break;
            }
        }
    }
    Ok(None)
}

/// Least `delta <= delta_max` such that adding some graph of maximum degree
/// `delta` pushes the chromatic number above `chi_cap`, with a witness.
///
/// Chromatic number only grows with added edges, so only maximal
/// degree-bounded additions are tested. Fails when the search visits more
/// than `budget` nodes.
pub fn local_resilience_oracle(
    g: &Graph,
    chi_cap: usize,
    delta_max: usize,
    budget: u64,
) -> Result<Option<ResilienceWitness>> {
    let limit = DEFAULT_EXACT_CHI_LIMIT;
    let Some(base) = color_within(g, chi_cap, limit)? else {
        return Ok(Some(ResilienceWitness {
            value: 0,
            edges: EdgeSet::new(),
        }));
    };
    if chi_cap >= g.n() {
        return Ok(None);
    }
    let non_edges: Vec<(usize, usize)> = g.non_edges().collect();
    let mut cache = ColoringCache {
        cap: chi_cap,
        limit,
        colorings: vec![base],
    };
    let mut visited = 0u64;
    for delta in 1..=delta_max.min(g.n() - 1) {
        let mut search = LocalSearch {
            g,
            non_edges: &non_edges,
            delta,
            degree: vec![0; g.n()],
            chosen: Vec::new(),
            visited: &mut visited,
            budget,
            cache: &mut cache,
        };
        if let Some(pairs) = search.rec(0)? {
            return Ok(Some(ResilienceWitness {
                value: delta,
                edges: EdgeSet::from_pairs(pairs)?,
            }));
        }
    }
    Ok(None)
}

struct LocalSearch<'a> {
    g: &'a Graph,
    non_edges: &'a [(usize, usize)],
    delta: usize,
    degree: Vec<usize>,
    chosen: Vec<(usize, usize)>,
    visited: &'a mut u64,
    budget: u64,
    cache: &'a mut ColoringCache,
}

impl LocalSearch<'_> {
    fn rec(&mut self, i: usize) -> Result<Option<Vec<(usize, usize)>>> {
        *self.visited += 1;
        if *self.visited > self.budget {
            return Err(Error::SearchBudget {
                budget: self.budget,
            });
        }
        if i == self.non_edges.len() {
            let maximal = self
                .non_edges
                .iter()
                .filter(|pair| !self.chosen.contains(pair))
                .all(|&(u, v)| self.degree[u] >= self.delta || self.degree[v] >= self.delta);
            if maximal && self.cache.breaks(self.g, &self.chosen)? {
                return Ok(Some(self.chosen.clone()));
            }
            return Ok(None);
        }
        let (u, v) = self.non_edges[i];
        if self.degree[u] < self.delta && self.degree[v] < self.delta {
            self.degree[u] += 1;
            self.degree[v] += 1;
            self.chosen.push((u, v));
            let hit = self.rec(i + 1)?;
            self.chosen.pop();
            self.degree[u] -= 1;
            self.degree[v] -= 1;
            if hit.is_some() {
                return Ok(hit);
            }
        }
        self.rec(i + 1)
    }
}

/// JSON wrapper around an edge set produced by a strategy or an oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeCertificate {
    pub strategy: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub seed: Option<u64>,
    pub n: usize,
    /// The edges in edge-list format.
    pub edge_list: String,
}

impl EdgeCertificate {
    pub fn new(
        strategy: &str,
        parameters: BTreeMap<String, serde_json::Value>,
        seed: Option<u64>,
        n: usize,
        edges: &EdgeSet,
    ) -> Self {
        EdgeCertificate {
            strategy: strategy.to_string(),
            parameters,
            seed,
            n,
            edge_list: edge_set_to_edge_list(edges, n),
        }
    }

    pub fn edges(&self) -> Result<EdgeSet> {
        let g = crate::graph::io::parse_edge_list(&self.edge_list)?;
        EdgeSet::from_pairs(g.edges())
    }
}
