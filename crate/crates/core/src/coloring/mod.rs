//! Proper vertex colorings: verification, DSATUR, smallest-last degeneracy
//! coloring, exact chromatic number, and the stripping procedure in
//! [`strip`].

pub mod strip;

use serde::{Deserialize, Serialize};

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::iset::max_independent_set_with_limit;

pub use strip::{strip_color, ColoringTrace, FallbackPolicy, ResidualRule, StripKnobs, StripRoute};

/// Default `n` above which [`chromatic_exact`] refuses to run.
pub const DEFAULT_EXACT_CHI_LIMIT: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    /// Color of each vertex.
    pub colors: Vec<usize>,
    pub num_colors: usize,
}

impl Coloring {
    /// Wraps a color vector; `num_colors` is one more than the largest color.
    pub fn new(colors: Vec<usize>) -> Self {
        let num_colors = colors.iter().max().map_or(0, |&c| c + 1);
        Coloring { colors, num_colors }
    }

    /// Vertices of each color class.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.num_colors];
        for (v, &c) in self.colors.iter().enumerate() {
            classes[c].push(v);
        }
        classes
    }
}

/// True iff `c` is proper on `g` and uses exactly the colors
/// `0..c.num_colors`.
pub fn verify_coloring(g: &Graph, c: &Coloring) -> Result<bool> {
    if c.colors.len() < g.n() {
        return Err(Error::MissingColor {
            vertex: c.colors.len(),
        });
    }
    if c.colors.len() > g.n() {
        return Err(Error::InvalidParameter(format!(
            "coloring labels {} vertices, graph has {}",
            c.colors.len(),
            g.n()
        )));
    }
    let mut used = vec![false; c.num_colors];
    for &col in &c.colors {
        if col >= c.num_colors {
            return Ok(false);
        }
        used[col] = true;
    }
    if used.iter().any(|&u| !u) {
        return Ok(false);
    }
    Ok(g.edges().all(|(u, v)| c.colors[u] != c.colors[v]))
}

fn first_free(taken: &[u64]) -> usize {
    taken
        .iter()
        .enumerate()
        .find(|(_, &w)| w != u64::MAX)
        .map_or(taken.len() * 64, |(i, &w)| {
            i * 64 + (!w).trailing_zeros() as usize
        })
}

fn set_bit(words: &mut Vec<u64>, c: usize) -> bool {
    if words.len() <= c / 64 {
        words.resize(c / 64 + 1, 0);
    }
    let mask = 1u64 << (c % 64);
    let fresh = words[c / 64] & mask == 0;
    words[c / 64] |= mask;
    fresh
}

/// DSATUR: color next the uncolored vertex with the most distinct neighbor
/// colors, then the highest degree, then the lowest index; give it the
/// smallest free color.
pub fn dsatur(g: &Graph) -> Coloring {
    let n = g.n();
    let degree = g.degrees();
    let mut colors = vec![usize::MAX; n];
    let mut taken: Vec<Vec<u64>> = vec![Vec::new(); n];
    let mut saturation = vec![0usize; n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| colors[v] == usize::MAX)
            .max_by_key(|&v| (saturation[v], degree[v], std::cmp::Reverse(v)))
            .expect("an uncolored vertex remains");
        let c = first_free(&taken[v]);
        colors[v] = c;
        for u in g.neighbors(v) {
            if colors[u] == usize::MAX && set_bit(&mut taken[u], c) {
                saturation[u] += 1;
            }
        }
    }
    let out = Coloring::new(colors);
    debug_assert!(verify_coloring(g, &out).unwrap_or(false));
    out
}

/// Smallest-last ordering: repeatedly delete a minimum-degree vertex (ties
/// to the lowest index). Returns the deletion order and the degeneracy (the
/// largest degree seen at deletion).
pub fn smallest_last_order(g: &Graph) -> (Vec<usize>, usize) {
    let n = g.n();
    let mut alive = Bitset::full(n);
    let mut degree = g.degrees();
    let mut order = Vec::with_capacity(n);
    let mut degeneracy = 0;
    for _ in 0..n {
        let v = alive
            .iter()
            .min_by_key(|&v| (degree[v], v))
            .expect("alive is non-empty");
        degeneracy = degeneracy.max(degree[v]);
        alive.remove(v);
        order.push(v);
        for u in g.neighbors(v) {
            if alive.contains(u) {
                degree[u] -= 1;
            }
        }
    }
    (order, degeneracy)
}

/// Greedy coloring in reverse smallest-last order; uses at most
/// `degeneracy + 1` colors. Returns the coloring and the degeneracy.
pub fn degeneracy_color(g: &Graph) -> (Coloring, usize) {
    let (order, degeneracy) = smallest_last_order(g);
    let mut colors = vec![usize::MAX; g.n()];
    for &v in order.iter().rev() {
        let mut taken = Vec::new();
        for u in g.neighbors(v) {
            if colors[u] != usize::MAX {
                set_bit(&mut taken, colors[u]);
            }
        }
        colors[v] = first_free(&taken);
    }
    let out = Coloring::new(colors);
    debug_assert!(out.num_colors <= degeneracy + 1 || g.n() == 0);
    debug_assert!(verify_coloring(g, &out).unwrap_or(false));
    (out, degeneracy)
}

/// Vertices of a maximum clique (via the complement's independence number).
pub fn max_clique(g: &Graph) -> Vec<usize> {
    max_independent_set_with_limit(&g.complement(), usize::MAX).expect("no size limit")
}

/// Exact chromatic number with the default size limit.
pub fn chromatic_exact(g: &Graph) -> Result<usize> {
    Ok(chromatic_exact_coloring(g, DEFAULT_EXACT_CHI_LIMIT)?.num_colors)
}

/// An optimal coloring: a maximum clique bounds below, DSATUR bounds above,
/// and a DSATUR-ordered branch and bound closes the gap.
pub fn chromatic_exact_coloring(g: &Graph, limit: usize) -> Result<Coloring> {
    check_limit(g, limit)?;
    let upper = dsatur(g);
    let clique = max_clique(g);
    if upper.num_colors <= clique.len() {
        return Ok(upper);
    }
    let mut search = ExactSearch::new(g, &clique, upper.num_colors, false);
    search.run();
    Ok(search.best.unwrap_or(upper))
}

/// A proper coloring with at most `k` colors, if one exists.
pub fn color_within(g: &Graph, k: usize, limit: usize) -> Result<Option<Coloring>> {
    check_limit(g, limit)?;
    if g.n() == 0 {
        return Ok(Some(Coloring::new(Vec::new())));
    }
    if k == 0 {
        return Ok(None);
    }
    let upper = dsatur(g);
    if upper.num_colors <= k {
        return Ok(Some(upper));
    }
    let clique = max_clique(g);
    if clique.len() > k {
        return Ok(None);
    }
    let mut search = ExactSearch::new(g, &clique, k + 1, true);
    search.run();
    Ok(search.best)
}

fn check_limit(g: &Graph, limit: usize) -> Result<()> {
    if g.n() > limit {
        return Err(Error::SizeLimit {
            what: "exact chromatic number",
            n: g.n(),
            limit,
        });
    }
    Ok(())
}

struct ExactSearch<'a> {
    g: &'a Graph,
    degree: Vec<usize>,
    colors: Vec<usize>,
    /// `conflicts[v][c]`: colored neighbors of `v` with color `c`.
    conflicts: Vec<Vec<u32>>,
    saturation: Vec<usize>,
    lower: usize,
    /// Colorings must use strictly fewer colors than this.
    bound: usize,
    best: Option<Coloring>,
    first_only: bool,
    done: bool,
}

impl<'a> ExactSearch<'a> {
    fn new(g: &'a Graph, clique: &[usize], bound: usize, first_only: bool) -> Self {
        let n = g.n();
        let mut s = ExactSearch {
            g,
            degree: g.degrees(),
            colors: vec![usize::MAX; n],
            conflicts: vec![vec![0; bound.max(1)]; n],
            saturation: vec![0; n],
            lower: clique.len(),
            bound,
            best: None,
            first_only,
            done: false,
        };
        // Clique vertices take distinct colors up front; this breaks the
        // color-permutation symmetry.
        for (c, &v) in clique.iter().enumerate() {
            s.assign(v, c);
        }
        s
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.colors[v] = c;
        for u in self.g.neighbors(v) {
            if self.conflicts[u][c] == 0 {
                self.saturation[u] += 1;
            }
            self.conflicts[u][c] += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.colors[v];
        self.colors[v] = usize::MAX;
        for u in self.g.neighbors(v) {
            self.conflicts[u][c] -= 1;
            if self.conflicts[u][c] == 0 {
                self.saturation[u] -= 1;
            }
        }
    }

    fn run(&mut self) {
        let colored = self.colors.iter().filter(|&&c| c != usize::MAX).count();
        self.rec(colored, self.lower);
    }

    fn rec(&mut self, colored: usize, used: usize) {
        if self.done || used >= self.bound {
            return;
        }
        if colored == self.g.n() {
            self.best = Some(Coloring::new(self.colors.clone()));
            self.bound = used;
            if self.first_only || used <= self.lower {
                self.done = true;
            }
            return;
        }
        let v = (0..self.g.n())
            .filter(|&v| self.colors[v] == usize::MAX)
            .max_by_key(|&v| (self.saturation[v], self.degree[v], std::cmp::Reverse(v)))
            .expect("an uncolored vertex remains");
        for c in 0..used {
            if self.conflicts[v][c] == 0 {
                self.assign(v, c);
                self.rec(colored + 1, used);
                self.unassign(v);
                if self.done || used >= self.bound {
                    return;
                }
            }
        }
        if used + 1 < self.bound {
            self.assign(v, used);
            self.rec(colored + 1, used + 1);
            self.unassign(v);
        }
    }
}
