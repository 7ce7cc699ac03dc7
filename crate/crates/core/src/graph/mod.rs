//! Dense undirected simple graphs with bit-packed adjacency rows.
//!
//! Vertices are always `0..n`. A [`Graph`] is immutable once built; the
//! set-algebra operations (`union`, `induced_subgraph`, `complement`) return
//! new values.

pub mod io;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::{words_for, Bitset, Ones};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    edge_count: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edge_count", &self.edge_count)
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
            edge_count: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set_edge(u, v);
            }
        }
        g
    }

    /// Cycle `0-1-...-(n-1)-0`. Requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut g = Graph::empty(n);
        for u in 0..n {
            g.set_edge(u, (u + 1) % n);
        }
        g
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::with_capacity(15);
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, edges).expect("petersen edges are valid")
    }

    /// Builds a graph from a list of pairs. Duplicate pairs collapse.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.check_pair(u, v)?;
            g.set_edge(u, v);
        }
        Ok(g)
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: x,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        Ok(())
    }

    /// Inserts `{u, v}`; returns whether it was new.
    fn set_edge(&mut self, u: usize, v: usize) -> bool {
        debug_assert!(u != v && u < self.n && v < self.n);
        if self.has_edge(u, v) {
            return false;
        }
        self.rows[u * self.words + v / 64] |= 1u64 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1u64 << (u % 64);
        self.edge_count += 1;
        true
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Number of unordered pairs that are not edges.
    pub fn non_edge_count(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2 - self.edge_count
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (self.rows[u * self.words + v / 64] >> (v % 64)) & 1 == 1
    }

    /// Adjacency row of `v` as packed words.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn neighbors(&self, v: usize) -> Ones<'_> {
        Ones::over(self.row(v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Non-edges `(u, v)` with `u < v`, in row-major order.
    pub fn non_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n)
                .filter(move |&v| !self.has_edge(u, v))
                .map(move |v| (u, v))
        })
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for (u, v) in self.non_edges() {
            g.set_edge(u, v);
        }
        g
    }

    /// `g ∪ e`. Pairs already present are not double-counted.
    pub fn union(&self, e: &EdgeSet) -> Result<Graph> {
        let mut g = self.clone();
        for (u, v) in e.iter() {
            g.check_pair(u, v)?;
            g.set_edge(u, v);
        }
        Ok(g)
    }

    /// Edge-wise union of two graphs on the same vertex set.
    pub fn union_graph(&self, other: &Graph) -> Result<Graph> {
        if other.n != self.n {
            return Err(Error::InvalidParameter(format!(
                "union of graphs on {} and {} vertices",
                self.n, other.n
            )));
        }
        let mut g = self.clone();
        for (u, v) in other.edges() {
            g.set_edge(u, v);
        }
        Ok(g)
    }

    /// Subgraph induced by `vertices`, relabeled `0..|vertices|` in the given
    /// order. Returns the graph and the map from new labels to old labels.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let mut seen = Bitset::new(self.n);
        for &v in vertices {
            if v >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: self.n,
                });
            }
            if seen.contains(v) {
                return Err(Error::InvalidParameter(format!("vertex {v} listed twice")));
            }
            seen.insert(v);
        }
        let mut g = Graph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set_edge(i, j);
                }
            }
        }
        Ok((g, vertices.to_vec()))
    }

    /// Number of edges with both endpoints in `vertices`.
    pub fn edges_within(&self, vertices: &[usize]) -> usize {
        let mut count = 0;
        for (i, &u) in vertices.iter().enumerate() {
            for &v in &vertices[i + 1..] {
                if self.has_edge(u, v) {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn is_independent(&self, vertices: &[usize]) -> bool {
        vertices.iter().all(|&v| v < self.n) && self.edges_within(vertices) == 0
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        let t = vertices.len();
        self.edges_within(vertices) == t * t.saturating_sub(1) / 2
    }

    /// Recount of edges from adjacency; equals `edge_count` for a valid graph.
    pub fn recount_edges(&self) -> usize {
        let twice: usize = (0..self.n).map(|v| self.degree(v)).sum();
        twice / 2
    }
}

/// Parameters of a G(n, p) draw.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GnpParams {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl GnpParams {
    pub fn new(n: usize, p: f64, seed: u64) -> Result<Self> {
        let params = GnpParams { n, p, seed };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "p = {} is outside (0, 1)",
                self.p
            )));
        }
        Ok(())
    }

    /// Warnings for parameters outside the regime `n^(-1/3) <= p <= 1/2`
    /// where the resilience results are stated. Never an error.
    pub fn regime_warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        let lower = (self.n as f64).powf(-1.0 / 3.0);
        if self.p < lower {
            warnings.push(format!(
                "p = {} is below n^(-1/3) = {:.4}; results are stated for denser graphs",
                self.p, lower
            ));
        }
        if self.p > 0.5 {
            warnings.push(format!(
                "p = {} exceeds 1/2; pair-coverage caps are calibrated for p <= 1/2",
                self.p
            ));
        }
        warnings
    }
}

/// Draws G(n, p).
///
/// The stream is `ChaCha8Rng::seed_from_u64(seed)`; pairs `(i, j)` with
/// `i < j` are visited row-major and each becomes an edge iff the next
/// `f64` sample in `[0, 1)` is `< p`. Same parameters, same graph.
pub fn generate_gnp(params: &GnpParams) -> Result<Graph> {
    params.validate()?;
    for w in params.regime_warnings() {
        log::warn!("{w}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut g = Graph::empty(params.n);
    for i in 0..params.n {
        for j in i + 1..params.n {
            if rng.gen::<f64>() < params.p {
                g.set_edge(i, j);
            }
        }
    }
    Ok(g)
}

/// A set of unordered vertex pairs, stored normalized as `(min, max)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeSet {
    pairs: BTreeSet<(usize, usize)>,
}

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet::default()
    }

    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut e = EdgeSet::new();
        for (u, v) in pairs {
            e.insert(u, v)?;
        }
        Ok(e)
    }

    /// Inserts `{u, v}`; returns whether it was new.
    pub fn insert(&mut self, u: usize, v: usize) -> Result<bool> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        Ok(self.pairs.insert((u.min(v), u.max(v))))
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.pairs.contains(&(u.min(v), u.max(v)))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    /// Largest endpoint plus one, or 0 when empty.
    pub fn span(&self) -> usize {
        self.pairs.iter().map(|&(_, v)| v + 1).max().unwrap_or(0)
    }

    /// The pairs as a graph on `n` vertices.
    pub fn to_graph(&self, n: usize) -> Result<Graph> {
        Graph::from_edges(n, self.iter())
    }

    /// Per-vertex degree of the pair set, for a host on `n` vertices.
    pub fn degrees(&self, n: usize) -> Vec<usize> {
        let mut deg = vec![0; n];
        for (u, v) in self.iter() {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Pairs with both endpoints in `vertices`, relabeled by position.
    pub fn restrict_to(&self, vertices: &[usize], host_n: usize) -> EdgeSet {
        let mut position = vec![usize::MAX; host_n.max(self.span())];
        for (i, &v) in vertices.iter().enumerate() {
            position[v] = i;
        }
        let mut out = EdgeSet::new();
        for (u, v) in self.iter() {
            let (a, b) = (position[u], position[v]);
            if a != usize::MAX && b != usize::MAX {
                out.pairs.insert((a.min(b), a.max(b)));
            }
        }
        out
    }
}

impl FromIterator<(usize, usize)> for EdgeSet {
    /// Panics on a self-loop.
    fn from_iter<T: IntoIterator<Item = (usize, usize)>>(iter: T) -> Self {
        EdgeSet::from_pairs(iter).expect("self-loop in edge set")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_degenerate_probabilities() {
        let g = generate_gnp(&GnpParams::new(5, 1e-12, 42).unwrap()).unwrap();
        assert_eq!(g.edge_count(), 0);
        let g = generate_gnp(&GnpParams::new(4, 0.999999, 1).unwrap()).unwrap();
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn gnp_edge_count_within_four_sigma() {
        let g = generate_gnp(&GnpParams::new(1000, 0.5, 7).unwrap()).unwrap();
        let pairs = 1000.0 * 999.0 / 2.0;
        let sd = (pairs * 0.25f64).sqrt();
        let diff = (g.edge_count() as f64 - pairs / 2.0).abs();
        assert!(
            diff <= 4.0 * sd,
            "edge count {} off by {diff}",
            g.edge_count()
        );
        assert_eq!(g.recount_edges(), g.edge_count());
    }

    #[test]
    fn gnp_is_deterministic() {
        let params = GnpParams::new(80, 0.3, 99).unwrap();
        assert_eq!(
            generate_gnp(&params).unwrap(),
            generate_gnp(&params).unwrap()
        );
        let other = GnpParams {
            seed: 100,
            ..params
        };
        assert_ne!(
            generate_gnp(&params).unwrap(),
            generate_gnp(&other).unwrap()
        );
    }

    #[test]
    fn gnp_rejects_bad_params() {
        assert!(GnpParams::new(0, 0.5, 1).is_err());
        assert!(GnpParams::new(5, 0.0, 1).is_err());
        assert!(GnpParams::new(5, 1.0, 1).is_err());
        assert!(GnpParams::new(5, f64::NAN, 1).is_err());
    }

    #[test]
    fn regime_warnings_only_warn() {
        let p = GnpParams::new(1000, 0.01, 1).unwrap();
        assert_eq!(p.regime_warnings().len(), 1);
        let p = GnpParams::new(1000, 0.7, 1).unwrap();
        assert_eq!(p.regime_warnings().len(), 1);
        let p = GnpParams::new(1000, 0.3, 1).unwrap();
        assert!(p.regime_warnings().is_empty());
    }

    #[test]
    fn union_examples() {
        let e01 = EdgeSet::from_pairs([(0, 1)]).unwrap();
        let g = Graph::empty(3).union(&e01).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(1, 0));

        let k3 = Graph::complete(3);
        let g = k3.union(&e01).unwrap();
        assert_eq!(g, k3);
        assert_eq!(g.edge_count(), 3);

        let chords = EdgeSet::from_pairs([(0, 2), (1, 3)]).unwrap();
        let g = Graph::cycle(5).union(&chords).unwrap();
        assert_eq!(g.edge_count(), 7);
    }

    #[test]
    fn union_leaves_original_and_rejects_bad_endpoints() {
        let c5 = Graph::cycle(5);
        let _ = c5.union(&EdgeSet::from_pairs([(0, 2)]).unwrap()).unwrap();
        assert_eq!(c5.edge_count(), 5);
        let bad = EdgeSet::from_pairs([(0, 5)]).unwrap();
        assert!(matches!(
            c5.union(&bad),
            Err(Error::VertexOutOfRange { vertex: 5, .. })
        ));
    }

    #[test]
    fn induced_subgraph_examples() {
        let (g, map) = Graph::petersen().induced_subgraph(&[]).unwrap();
        assert_eq!(g.n(), 0);
        assert!(map.is_empty());

        let (g, _) = Graph::complete(5).induced_subgraph(&[4, 1, 2]).unwrap();
        assert_eq!(g, Graph::complete(3));

        let (g, map) = Graph::cycle(5).induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));
        assert_eq!(map, vec![0, 1, 2]);

        assert!(Graph::cycle(5).induced_subgraph(&[0, 7]).is_err());
    }

    #[test]
    fn petersen_shape() {
        let g = Graph::petersen();
        assert_eq!(g.edge_count(), 15);
        assert!(g.degrees().iter().all(|&d| d == 3));
    }

    #[test]
    fn edge_set_normalizes() {
        let mut e = EdgeSet::new();
        assert!(e.insert(3, 1).unwrap());
        assert!(!e.insert(1, 3).unwrap());
        assert!(e.insert(2, 2).is_err());
        assert_eq!(e.iter().collect::<Vec<_>>(), vec![(1, 3)]);
        let r = e.restrict_to(&[3, 1], 4);
        assert_eq!(r.iter().collect::<Vec<_>>(), vec![(0, 1)]);
    }
}
