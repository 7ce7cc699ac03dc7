//! Small-subset density audit: every vertex set `S` with
//! `|S| <= eps n / (16 ln(np))` should span at most
//! `(eps n p / (8 ln(np))) |S|` edges.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{derive_seed, thread_pool};
use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest `n` audited exhaustively by default.
pub const DEFAULT_EXHAUSTIVE_N_LIMIT: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum AuditMode {
    Exhaustive,
    /// `count` uniform subsets per audited size.
    Sampled {
        count: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub subset: Vec<usize>,
    pub size: usize,
    pub edges: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub n: usize,
    pub p: f64,
    pub epsilon: f64,
    /// `eps n / (16 ln(np))`.
    pub s_max: f64,
    /// `eps n p / (8 ln(np))`.
    pub bound_per_vertex: f64,
    /// Sizes `1..=floor(s_max)` where `C(s, 2) <= bound * s`, passed without
    /// checking.
    pub trivial_sizes: Vec<usize>,
    /// Sizes actually checked.
    pub audited_sizes: Vec<usize>,
    pub subsets_checked: u64,
    /// Sorted by size, then lexicographically.
    pub violations: Vec<Violation>,
    /// True iff every subset of size at most `s_max` was covered.
    pub exhaustive: bool,
}

impl DensityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Recounts every listed violation against `g`.
    pub fn recheck(&self, g: &Graph) -> bool {
        self.violations.iter().all(|v| {
            v.subset.len() == v.size
                && g.edges_within(&v.subset) == v.edges
                && v.edges as f64 > self.bound_per_vertex * v.size as f64
        })
    }
}

/// Audits `g` as a draw of G(n, p).
pub fn density_audit(
    g: &Graph,
    p: f64,
    epsilon: f64,
    mode: AuditMode,
    workers: usize,
) -> Result<DensityReport> {
    density_audit_with_limit(g, p, epsilon, mode, workers, DEFAULT_EXHAUSTIVE_N_LIMIT)
}

pub fn density_audit_with_limit(
    g: &Graph,
    p: f64,
    epsilon: f64,
    mode: AuditMode,
    workers: usize,
    exhaustive_n_limit: usize,
) -> Result<DensityReport> {
    if !(p > 0.0 && p < 1.0) || !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < p < 1 and epsilon > 0, got p = {p}, epsilon = {epsilon}"
        )));
    }
    let n = g.n();
    let nf = n as f64;
    let ln_np = (nf * p).ln();
    if !(ln_np > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "np = {} must exceed 1",
            nf * p
        )));
    }
    if mode == AuditMode::Exhaustive && n > exhaustive_n_limit {
        return Err(Error::SizeLimit {
            what: "exhaustive density audit",
            n,
            limit: exhaustive_n_limit,
        });
    }
    let s_max = epsilon * nf / (16.0 * ln_np);
    let bound = epsilon * nf * p / (8.0 * ln_np);
    let top = (s_max.floor() as usize).min(n);
    let (trivial_sizes, audited_sizes): (Vec<usize>, Vec<usize>) =
        (1..=top).partition(|&s| (s * (s - 1) / 2) as f64 <= bound * s as f64);

    let pool = thread_pool(workers.max(1))?;
    let mut violations = Vec::new();
    let mut checked = 0u64;
    for &s in &audited_sizes {
        let limit_edges = bound * s as f64;
        let (found, count) = match mode {
            AuditMode::Exhaustive => pool.install(|| exhaustive_size(g, s, limit_edges)),
            AuditMode::Sampled { count, seed } => {
                pool.install(|| sampled_size(g, s, limit_edges, count, seed))
            }
        };
        violations.extend(found);
        checked += count;
    }
    Ok(DensityReport {
        n,
        p,
        epsilon,
        s_max,
        bound_per_vertex: bound,
        trivial_sizes,
        audited_sizes,
        subsets_checked: checked,
        violations,
        exhaustive: mode == AuditMode::Exhaustive,
    })
}

/// All `s`-subsets, split by smallest element across the pool.
fn exhaustive_size(g: &Graph, s: usize, limit_edges: f64) -> (Vec<Violation>, u64) {
    let n = g.n();
    let parts: Vec<(Vec<Violation>, u64)> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut count = 0;
            let mut cand = Bitset::new(n);
            for v in first + 1..n {
                cand.insert(v);
            }
            let mut chosen = vec![first];
            let mut members = Bitset::new(n);
            members.insert(first);
            walk(
                g,
                s,
                limit_edges,
                &cand,
                &mut chosen,
                &mut members,
                0,
                &mut out,
                &mut count,
            );
            (out, count)
        })
        .collect();
    let mut all = Vec::new();
    let mut total = 0;
    for (v, c) in parts {
        all.extend(v);
        total += c;
    }
    (all, total)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    g: &Graph,
    s: usize,
    limit_edges: f64,
    cand: &Bitset,
    chosen: &mut Vec<usize>,
    members: &mut Bitset,
    edges: usize,
    out: &mut Vec<Violation>,
    count: &mut u64,
) {
    if chosen.len() == s {
        *count += 1;
        if edges as f64 > limit_edges {
            out.push(Violation {
                subset: chosen.clone(),
                size: s,
                edges,
            });
        }
        return;
    }
    let need = s - chosen.len();
    let mut rest = cand.clone();
    while let Some(v) = rest.first() {
        if rest.len() < need {
            break;
        }
        rest.remove(v);
        let added = members.intersection_len(g.row(v));
        chosen.push(v);
        members.insert(v);
        walk(
            g,
            s,
            limit_edges,
            &rest,
            chosen,
            members,
            edges + added,
            out,
            count,
        );
        members.remove(v);
        chosen.pop();
    }
}

fn sampled_size(
    g: &Graph,
    s: usize,
    limit_edges: f64,
    count: usize,
    seed: u64,
) -> (Vec<Violation>, u64) {
    let n = g.n();
    let mut found: Vec<Violation> = (0..count)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[seed, s as u64, i as u64]));
            let mut subset = rand::seq::index::sample(&mut rng, n, s).into_vec();
            subset.sort_unstable();
            let edges = g.edges_within(&subset);
            (edges as f64 > limit_edges).then_some(Violation {
                subset,
                size: s,
                edges,
            })
        })
        .collect();
    found.sort();
    found.dedup();
    (found, count as u64)
}
