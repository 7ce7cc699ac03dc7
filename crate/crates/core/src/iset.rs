//! Exact independent-set machinery: maximum independent set, fixed-size
//! enumeration with pair coverage, the capped family obtained by deleting
//! every set through an over-covered pair, the minimum-planted-pairs
//! selector, and the greedy minimum-degree (Turán) extraction.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph};

/// Default `n` above which [`max_independent_set`] refuses to run.
pub const DEFAULT_EXACT_ALPHA_LIMIT: usize = 120;
/// Default cap on the number of sets an enumeration may produce.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 5_000_000;

/// `ceil(n^2 / (2e + n))`, the guaranteed size of [`turan_extract`].
pub fn turan_bound(n: usize, edges: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let denom = 2 * edges + n;
    (n * n).div_ceil(denom)
}

/// Greedy minimum-degree extraction: repeatedly take a vertex of minimum
/// degree in what remains (ties to the lowest index), then delete it and its
/// neighbors. Always returns at least `turan_bound(n, e)` vertices, sorted.
pub fn turan_extract(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut alive = Bitset::full(n);
    let mut degree = g.degrees();
    let mut chosen = Vec::new();
    while !alive.is_empty() {
        let v = alive
            .iter()
            .min_by_key(|&v| (degree[v], v))
            .expect("alive is non-empty");
        chosen.push(v);
        let mut removed: Vec<usize> = g.neighbors(v).filter(|&u| alive.contains(u)).collect();
        removed.push(v);
        for &u in &removed {
            alive.remove(u);
        }
        for &u in &removed {
            for w in g.neighbors(u) {
                if alive.contains(w) {
                    degree[w] -= 1;
                }
            }
        }
    }
    chosen.sort_unstable();
    debug_assert!(g.is_independent(&chosen));
    debug_assert!(chosen.len() >= turan_bound(n, g.edge_count()));
    chosen
}

/// Maximum independent set with the default size limit.
pub fn max_independent_set(g: &Graph) -> Result<Vec<usize>> {
    max_independent_set_with_limit(g, DEFAULT_EXACT_ALPHA_LIMIT)
}

/// Exact maximum independent set by branch and bound.
///
/// Vertices are relabeled by descending degree (ties by index) and the
/// bound at each node is a greedy cover of the candidates by cliques of `g`:
/// an independent set meets each clique at most once.
pub fn max_independent_set_with_limit(g: &Graph, limit: usize) -> Result<Vec<usize>> {
    let n = g.n();
    if n > limit {
        return Err(Error::SizeLimit {
            what: "maximum independent set",
            n,
            limit,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let degrees = g.degrees();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(degrees[v]), v));
    let (h, _) = g.induced_subgraph(&order)?;

    let seed: Vec<usize> = {
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        turan_extract(g).into_iter().map(|v| pos[v]).collect()
    };
    let mut search = MisSearch {
        g: &h,
        best: seed,
        current: Vec::new(),
    };
    search.expand(Bitset::full(n));

    let mut out: Vec<usize> = search.best.iter().map(|&i| order[i]).collect();
    out.sort_unstable();
    debug_assert!(g.is_independent(&out));
    Ok(out)
}

struct MisSearch<'a> {
    g: &'a Graph,
    best: Vec<usize>,
    current: Vec<usize>,
}

impl MisSearch<'_> {
    /// Greedy clique cover of `cand`; returns vertices in cover order with
    /// the running class count (an upper bound on the independent set that
    /// the prefix can contribute).
    fn cover(&self, cand: &Bitset) -> Vec<(usize, usize)> {
        let mut rest = cand.clone();
        let mut out = Vec::with_capacity(cand.len());
        let mut class = 0;
        while !rest.is_empty() {
            class += 1;
            let mut avail = rest.clone();
            while let Some(v) = avail.first() {
                rest.remove(v);
                avail.remove(v);
                avail.intersect_with(self.g.row(v));
                out.push((v, class));
            }
        }
        out
    }

    fn expand(&mut self, mut cand: Bitset) {
        let cover = self.cover(&cand);
        for &(v, bound) in cover.iter().rev() {
            if self.current.len() + bound <= self.best.len() {
                return;
            }
            self.current.push(v);
            let mut next = cand.clone();
            next.remove(v);
            next.difference_with(self.g.row(v));
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            cand.remove(v);
        }
    }
}

/// Per-pair counts over a host vertex set, stored as a dense triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCoverage {
    n: usize,
    counts: Vec<u32>,
}

impl PairCoverage {
    pub fn new(n: usize) -> Self {
        PairCoverage {
            n,
            counts: vec![0; n * n.saturating_sub(1) / 2],
        }
    }

    fn index(&self, u: usize, v: usize) -> usize {
        let (a, b) = (u.min(v), u.max(v));
        debug_assert!(a != b && b < self.n);
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.counts[self.index(u, v)]
    }

    fn add_set(&mut self, set: &[usize]) {
        for (i, &u) in set.iter().enumerate() {
            for &v in &set[i + 1..] {
                let idx = self.index(u, v);
                self.counts[idx] += 1;
            }
        }
    }

    pub fn from_sets(n: usize, sets: &[Vec<usize>]) -> Self {
        let mut c = PairCoverage::new(n);
        for s in sets {
            c.add_set(s);
        }
        c
    }

    /// `(u, v, count)` for every pair with positive count, row-major.
    pub fn iter_nonzero(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n).filter_map(move |v| {
                let c = self.get(u, v);
                (c > 0).then_some((u, v, c))
            })
        })
    }

    pub fn max(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Number of pairs at each coverage value, zero included.
    pub fn histogram(&self) -> BTreeMap<u32, usize> {
        let mut h = BTreeMap::new();
        for &c in &self.counts {
            *h.entry(c).or_insert(0) += 1;
        }
        h
    }
}

/// A family of size-`k` independent sets of a host graph.
#[derive(Clone, Debug, PartialEq)]
pub struct IsetFamily {
    pub host_n: usize,
    pub k: usize,
    /// Sorted vertex lists, lexicographically ordered.
    pub sets: Vec<Vec<usize>>,
    /// Pair coverage of `sets`.
    pub coverage: PairCoverage,
    pub cap: Option<f64>,
    /// Sum of coverage over pairs whose coverage exceeded `cap` in the full
    /// enumeration, before deletion.
    pub excess_mass: u64,
    /// Size of the full enumeration the family was derived from.
    pub total_enumerated: usize,
    /// Sets removed because they contain an over-covered pair.
    pub deleted: usize,
}

impl IsetFamily {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Full invariant check against the host graph.
    pub fn verify(&self, g: &Graph) -> bool {
        if g.n() != self.host_n {
            return false;
        }
        let sets_ok = self
            .sets
            .iter()
            .all(|s| s.len() == self.k && s.windows(2).all(|w| w[0] < w[1]) && g.is_independent(s));
        let sorted_unique = self.sets.windows(2).all(|w| w[0] < w[1]);
        let coverage_ok = PairCoverage::from_sets(self.host_n, &self.sets) == self.coverage;
        let cap_ok = self
            .cap
            .is_none_or(|cap| f64::from(self.coverage.max()) <= cap);
        let accounting = self.sets.len() + self.deleted == self.total_enumerated;
        sets_ok && sorted_unique && coverage_ok && cap_ok && accounting
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&FamilyRecord::from(self))?)
    }
}

/// Serialized form of an [`IsetFamily`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub k: usize,
    pub sets: Vec<Vec<usize>>,
    /// `[coverage value, number of pairs]`, ascending by value.
    pub coverage_histogram: Vec<(u32, usize)>,
    pub cap: Option<f64>,
    pub excess_mass: u64,
    pub total_enumerated: usize,
    pub deleted: usize,
}

impl From<&IsetFamily> for FamilyRecord {
    fn from(f: &IsetFamily) -> Self {
        FamilyRecord {
            k: f.k,
            sets: f.sets.clone(),
            coverage_histogram: f.coverage.histogram().into_iter().collect(),
            cap: f.cap,
            excess_mass: f.excess_mass,
            total_enumerated: f.total_enumerated,
            deleted: f.deleted,
        }
    }
}

/// All independent sets of size exactly `k`, lexicographic order. Fails if
/// more than `limit` exist.
pub fn enumerate_isets(g: &Graph, k: usize, limit: usize) -> Result<IsetFamily> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "set size k must be at least 1".into(),
        ));
    }
    let mut sets = Vec::new();
    if k <= g.n() {
        let mut chosen = Vec::with_capacity(k);
        enumerate_rec(g, k, Bitset::full(g.n()), &mut chosen, &mut sets, limit)?;
    }
    let coverage = PairCoverage::from_sets(g.n(), &sets);
    let total = sets.len();
    Ok(IsetFamily {
        host_n: g.n(),
        k,
        sets,
        coverage,
        cap: None,
        excess_mass: 0,
        total_enumerated: total,
        deleted: 0,
    })
}

fn enumerate_rec(
    g: &Graph,
    k: usize,
    mut cand: Bitset,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) -> Result<()> {
    let need = k - chosen.len();
    if need == 0 {
        if out.len() >= limit {
            return Err(Error::EnumerationLimit { limit });
        }
        out.push(chosen.clone());
        return Ok(());
    }
    while let Some(v) = cand.first() {
        if cand.len() < need {
            break;
        }
        cand.remove(v);
        chosen.push(v);
        if need == 1 {
            if out.len() >= limit {
                return Err(Error::EnumerationLimit { limit });
            }
            out.push(chosen.clone());
        } else {
            let mut next = cand.clone();
            next.difference_with(g.row(v));
            if next.len() >= need - 1 {
                enumerate_rec(g, k, next, chosen, out, limit)?;
            }
        }
        chosen.pop();
    }
    Ok(())
}

/// The capped family: enumerate every size-`k` independent set, then delete
/// every set that contains a pair covered more than `cap` times in that full
/// enumeration. The result covers every pair at most `cap` times.
pub fn uniform_family(g: &Graph, k: usize, cap: f64, limit: usize) -> Result<IsetFamily> {
    if !(cap >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "cap = {cap} must be non-negative"
        )));
    }
    let all = enumerate_isets(g, k, limit)?;
    let over = |u: usize, v: usize| f64::from(all.coverage.get(u, v)) > cap;
    let excess_mass = all
        .coverage
        .iter_nonzero()
        .filter(|&(_, _, c)| f64::from(c) > cap)
        .map(|(_, _, c)| u64::from(c))
        .sum();
    let total = all.sets.len();
    let kept: Vec<Vec<usize>> = all
        .sets
        .into_iter()
        .filter(|s| {
            !s.iter()
                .enumerate()
                .any(|(i, &u)| s[i + 1..].iter().any(|&v| over(u, v)))
        })
        .collect();
    let coverage = PairCoverage::from_sets(g.n(), &kept);
    Ok(IsetFamily {
        host_n: g.n(),
        k,
        deleted: total - kept.len(),
        sets: kept,
        coverage,
        cap: Some(cap),
        excess_mass,
        total_enumerated: total,
    })
}

/// Outcome of [`sparse_iset`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseChoice {
    /// Position of the chosen set in the family.
    pub index: usize,
    pub set: Vec<usize>,
    /// Pairs of the edge set lying inside the chosen set.
    pub planted_inside: usize,
    /// Mean of the planted-pair count over the whole family.
    pub family_mean: f64,
    /// `ceil(floor(cap) * |e| / |family|)`, when the family is capped.
    pub averaging_bound: Option<usize>,
}

/// Member set containing the fewest pairs of `e` (first one on ties).
pub fn sparse_iset(family: &IsetFamily, e: &EdgeSet) -> Result<SparseChoice> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    for (u, v) in e.iter() {
        if v >= family.host_n {
            return Err(Error::VertexOutOfRange {
                vertex: u.max(v),
                n: family.host_n,
            });
        }
    }
    let pairs: Vec<(usize, usize)> = e.iter().collect();
    let mut member = Bitset::new(family.host_n);
    let mut best = (usize::MAX, 0);
    let mut total = 0usize;
    for (i, set) in family.sets.iter().enumerate() {
        for &v in set {
            member.insert(v);
        }
        let count = pairs
            .iter()
            .filter(|&&(u, v)| member.contains(u) && member.contains(v))
            .count();
        for &v in set {
            member.remove(v);
        }
        total += count;
        if count < best.0 {
            best = (count, i);
        }
    }
    let (planted_inside, index) = best;
    let averaging_bound = family.cap.map(|cap| {
        let cap = cap.floor() as usize;
        (cap * e.len()).div_ceil(family.len())
    });
    if let Some(bound) = averaging_bound {
        assert!(
            planted_inside <= bound,
            "averaging bound violated: {planted_inside} > {bound}"
        );
    }
    Ok(SparseChoice {
        index,
        set: family.sets[index].clone(),
        planted_inside,
        family_mean: total as f64 / family.len() as f64,
        averaging_bound,
    })
}
