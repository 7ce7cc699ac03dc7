//! The stripping coloring of `base ∪ added`.
//!
//! While more than a residual threshold of vertices remain: find in the
//! remaining part of `base` an independent set of the working size that
//! contains few `added` pairs, extract from it (greedy minimum degree in the
//! union) a set independent in the union, give it a fresh color, remove it.
//! The residue is colored in smallest-last order.
//!
//! At desk scale the working size is clamped to the independence number of
//! the remaining base graph, and the set search falls back from the capped
//! family to the full enumeration to a greedy set. Every strip records which
//! route it took, so the trace shows how faithful a run was.

use serde::{Deserialize, Serialize};

use super::{degeneracy_color, verify_coloring, Coloring};
use crate::analytics::{expected_counts, AnalyticProfile};
use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph};
use crate::iset::{
    enumerate_isets, max_independent_set_with_limit, sparse_iset, turan_extract, uniform_family,
    DEFAULT_ENUMERATION_LIMIT, DEFAULT_EXACT_ALPHA_LIMIT,
};

/// Where stripping stops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ResidualRule {
    /// `eps * n / (16 ln(np))`, for an arbitrary added edge set.
    #[default]
    Global,
    /// `n / ln^2 n`, for an added graph of bounded maximum degree.
    Local,
}

/// What to do when the enumeration guard trips.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FallbackPolicy {
    /// Continue with a greedy independent set; the strip is flagged.
    #[default]
    Greedy,
    /// Propagate the enumeration error.
    Fail,
}

/// Every tunable of [`strip_color`], with the defaults in one place.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripKnobs {
    pub rule: ResidualRule,
    /// Maximum number of sets a per-strip enumeration may produce.
    pub enumeration_limit: usize,
    /// Remaining-vertex count at or below which the exact route is tried.
    pub exact_alpha_limit: usize,
    /// The pair-coverage cap is `cap_multiplier * mu0`.
    pub cap_multiplier: f64,
    pub fallback: FallbackPolicy,
    /// Overrides the working set size taken from the profile.
    pub working_size: Option<usize>,
}

impl Default for StripKnobs {
    fn default() -> Self {
        StripKnobs {
            rule: ResidualRule::Global,
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
            exact_alpha_limit: DEFAULT_EXACT_ALPHA_LIMIT,
            cap_multiplier: 4.0,
            fallback: FallbackPolicy::Greedy,
            working_size: None,
        }
    }
}

/// How a strip's independent set was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StripRoute {
    /// Capped family plus minimum-planted-pairs selection.
    UniformFamily,
    /// Capped family came out empty; selection over every set of the size.
    DirectEnumeration,
    /// Remaining graph too large for exact search, or enumeration too big.
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripRecord {
    /// Vertices remaining before the strip.
    pub remaining: usize,
    pub bucket: usize,
    pub route: StripRoute,
    /// Size requested from the set search (after clamping).
    pub target_size: usize,
    /// Size of the base-independent set found.
    pub found_size: usize,
    /// Added pairs inside that set.
    pub planted_inside: usize,
    /// Size of the color class extracted from it.
    pub class_size: usize,
    /// Size after growing the class to a maximal independent set.
    pub extended_size: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FidelityFlags {
    pub uniform_family: usize,
    pub direct_enumeration: usize,
    pub greedy: usize,
    /// Strips whose working size was lowered to the remaining independence
    /// number.
    pub clamped: usize,
    /// Strips where the enumeration guard tripped.
    pub enumeration_overflow: usize,
}

/// Per-phase accounting of [`strip_color`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColoringTrace {
    /// Colors spent while the remaining count was in `(n/2^i, n/2^(i-1)]`,
    /// for `i = 1..=i0`.
    pub bucket_counts: Vec<usize>,
    pub i0: usize,
    pub residual_colors: usize,
    pub residual_vertices: usize,
    /// Working independent-set size.
    pub k_used: usize,
    /// `max(2, round(2 log_b(np / ln^3 n)))` when defined.
    pub k_formula: Option<usize>,
    pub residual_threshold: f64,
    pub rule: ResidualRule,
    pub fidelity: FidelityFlags,
    pub strips: Vec<StripRecord>,
}

impl ColoringTrace {
    pub fn stripped_colors(&self) -> usize {
        self.bucket_counts.iter().sum()
    }

    pub fn total_colors(&self) -> usize {
        self.stripped_colors() + self.residual_colors
    }
}

/// Residual vertex count at which stripping stops; never negative.
pub fn residual_threshold(rule: ResidualRule, n: usize, p: f64, epsilon: f64) -> f64 {
    let nf = n as f64;
    let t = match rule {
        ResidualRule::Global => epsilon * nf / (16.0 * (nf * p).ln()),
        ResidualRule::Local => nf / nf.ln().powi(2),
    };
    if t.is_finite() && t > 0.0 {
        t
    } else {
        0.0
    }
}

/// Smallest `i0` with `2^i0 * max(threshold, 1/2) >= n`: every remaining
/// count above the threshold then falls in a bucket `1..=i0`.
fn bucket_count(n: usize, threshold: f64) -> usize {
    let t = threshold.max(0.5);
    let mut i0 = 0;
    while t * 2f64.powi(i0 as i32) < n as f64 {
        i0 += 1;
    }
    i0
}

/// Bucket `i >= 1` with `n / 2^i < s <= n / 2^(i-1)`.
fn bucket_of(n: usize, s: usize) -> usize {
    let mut i = 1;
    while (s as u128) << i <= n as u128 {
        i += 1;
    }
    i
}

/// Colors `base ∪ added` by stripping; see the module docs.
pub fn strip_color(
    base: &Graph,
    added: &EdgeSet,
    epsilon: f64,
    profile: &AnalyticProfile,
    knobs: &StripKnobs,
) -> Result<(Coloring, ColoringTrace)> {
    let n = base.n();
    if profile.n != n {
        return Err(Error::InvalidParameter(format!(
            "profile is for n = {}, graph has {n} vertices",
            profile.n
        )));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon = {epsilon} must be positive"
        )));
    }
    let k_used = match knobs.working_size {
        Some(k) => k,
        None => profile.k0.ok_or(Error::MissingProfileValue("k0"))?,
    };
    if k_used == 0 {
        return Err(Error::InvalidParameter(
            "working size must be at least 1".into(),
        ));
    }
    let union = base.union(added)?;
    let threshold = residual_threshold(knobs.rule, n, profile.p, epsilon);
    let i0 = bucket_count(n, threshold);

    let mut trace = ColoringTrace {
        bucket_counts: vec![0; i0],
        i0,
        residual_colors: 0,
        residual_vertices: 0,
        k_used,
        k_formula: profile.k,
        residual_threshold: threshold,
        rule: knobs.rule,
        fidelity: FidelityFlags::default(),
        strips: Vec::new(),
    };
    let mut colors = vec![usize::MAX; n];
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut next_color = 0;

    while remaining.len() as f64 > threshold && !remaining.is_empty() {
        let s = remaining.len();
        let bucket = bucket_of(n, s);
        debug_assert!(bucket <= i0);
        let found = find_sparse_set(
            base,
            added,
            &remaining,
            k_used,
            profile.p,
            knobs,
            &mut trace.fidelity,
        )?;

        let (union_sub, _) = union.induced_subgraph(&found.set)?;
        let mut class: Vec<usize> = turan_extract(&union_sub)
            .into_iter()
            .map(|i| found.set[i])
            .collect();
        let extracted = class.len();
        extend_independent(&union, &remaining, &mut class);
        debug_assert!(union.is_independent(&class));
        for &v in &class {
            colors[v] = next_color;
        }
        next_color += 1;
        trace.bucket_counts[bucket - 1] += 1;
        trace.strips.push(StripRecord {
            remaining: s,
            bucket,
            route: found.route,
            target_size: found.target_size,
            found_size: found.set.len(),
            planted_inside: found.planted_inside,
            class_size: extracted,
            extended_size: class.len(),
        });
        remaining.retain(|&v| colors[v] == usize::MAX);
    }

    if !remaining.is_empty() {
        let (sub, map) = union.induced_subgraph(&remaining)?;
        let (residual, _) = degeneracy_color(&sub);
        for (i, &c) in residual.colors.iter().enumerate() {
            colors[map[i]] = next_color + c;
        }
        trace.residual_colors = residual.num_colors;
        trace.residual_vertices = remaining.len();
    }

    let coloring = Coloring::new(colors);
    debug_assert_eq!(coloring.num_colors, trace.total_colors());
    debug_assert!(verify_coloring(&union, &coloring).unwrap_or(false));
    Ok((coloring, trace))
}

/// Grows `class` to a maximal independent set of `union` within `pool`,
/// lowest index first. Added vertices carry no pairs into the class.
fn extend_independent(union: &Graph, pool: &[usize], class: &mut Vec<usize>) {
    let mut members = Bitset::new(union.n());
    for &v in class.iter() {
        members.insert(v);
    }
    for &v in pool {
        if !members.contains(v) && members.intersection_len(union.row(v)) == 0 {
            members.insert(v);
            class.push(v);
        }
    }
    class.sort_unstable();
}

struct FoundSet {
    set: Vec<usize>,
    route: StripRoute,
    target_size: usize,
    planted_inside: usize,
}

fn find_sparse_set(
    base: &Graph,
    added: &EdgeSet,
    remaining: &[usize],
    k_used: usize,
    p: f64,
    knobs: &StripKnobs,
    flags: &mut FidelityFlags,
) -> Result<FoundSet> {
    let s = remaining.len();
    let (sub, map) = base.induced_subgraph(remaining)?;
    let added_sub = added.restrict_to(remaining, base.n());
    let to_host = |set: &[usize]| set.iter().map(|&i| map[i]).collect::<Vec<_>>();
    let planted = |set: &[usize]| {
        added_sub
            .iter()
            .filter(|&(u, v)| set.binary_search(&u).is_ok() && set.binary_search(&v).is_ok())
            .count()
    };

    if s <= knobs.exact_alpha_limit {
        let mis = max_independent_set_with_limit(&sub, knobs.exact_alpha_limit)?;
        let target = k_used.min(mis.len());
        if target < k_used {
            flags.clamped += 1;
        }
        if target < 2 {
            // No pair fits inside a set this small.
            flags.direct_enumeration += 1;
            return Ok(FoundSet {
                set: to_host(&mis[..target.max(1)]),
                route: StripRoute::DirectEnumeration,
                target_size: target,
                planted_inside: 0,
            });
        }
        let counts = expected_counts(s, p, target)?;
        let cap = knobs.cap_multiplier * counts.mu0();
        let attempt =
            uniform_family(&sub, target, cap, knobs.enumeration_limit).and_then(|family| {
                if family.is_empty() {
                    enumerate_isets(&sub, target, knobs.enumeration_limit)
                        .map(|all| (all, StripRoute::DirectEnumeration))
                } else {
                    Ok((family, StripRoute::UniformFamily))
                }
            });
        match attempt {
            Ok((family, route)) => {
                let choice = sparse_iset(&family, &added_sub)?;
                match route {
                    StripRoute::UniformFamily => flags.uniform_family += 1,
                    _ => flags.direct_enumeration += 1,
                }
                return Ok(FoundSet {
                    set: to_host(&choice.set),
                    route,
                    target_size: target,
                    planted_inside: choice.planted_inside,
                });
            }
            Err(Error::EnumerationLimit { limit }) => {
                flags.enumeration_overflow += 1;
                if knobs.fallback == FallbackPolicy::Fail {
                    return Err(Error::EnumerationLimit { limit });
                }
            }
            Err(e) => return Err(e),
        }
    }

    flags.greedy += 1;
    let greedy = turan_extract(&sub);
    Ok(FoundSet {
        planted_inside: planted(&greedy),
        target_size: k_used,
        set: to_host(&greedy),
        route: StripRoute::Greedy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::dsatur;
    use crate::graph::{generate_gnp, GnpParams};
    use crate::iset::max_independent_set;

    #[test]
    fn buckets_are_dyadic() {
        assert_eq!(bucket_of(100, 100), 1);
        assert_eq!(bucket_of(100, 51), 1);
        assert_eq!(bucket_of(100, 50), 2);
        assert_eq!(bucket_of(100, 26), 2);
        assert_eq!(bucket_of(100, 25), 3);
        assert_eq!(bucket_of(100, 1), 7);
        assert_eq!(bucket_count(100, 0.0), 8);
        assert_eq!(bucket_count(100, 25.0), 2);
        assert_eq!(bucket_count(100, 30.0), 2);
        assert_eq!(bucket_count(100, 100.0), 0);
    }

    #[test]
    fn thresholds() {
        let t = residual_threshold(ResidualRule::Global, 100, 0.5, 1.0);
        assert!((t - 100.0 / (16.0 * 50f64.ln())).abs() < 1e-12);
        let t = residual_threshold(ResidualRule::Local, 100, 0.5, 1.0);
        assert!((t - 100.0 / 100f64.ln().powi(2)).abs() < 1e-12);
        assert_eq!(residual_threshold(ResidualRule::Global, 2, 0.5, 1.0), 0.0);
    }

    #[test]
    fn empty_base_one_color() {
        let g = Graph::empty(10);
        let prof = AnalyticProfile::new(10, 0.5, 1.0).unwrap();
        let (c, trace) =
            strip_color(&g, &EdgeSet::new(), 1.0, &prof, &StripKnobs::default()).unwrap();
        assert_eq!(c.num_colors, 1);
        assert_eq!(trace.total_colors(), 1);
    }

    #[test]
    fn gnp60_within_bounds() {
        let g = generate_gnp(&GnpParams::new(60, 0.5, 11).unwrap()).unwrap();
        let prof = AnalyticProfile::new(60, 0.5, 1.0).unwrap();
        let (c, trace) =
            strip_color(&g, &EdgeSet::new(), 1.0, &prof, &StripKnobs::default()).unwrap();
        assert!(verify_coloring(&g, &c).unwrap());
        let alpha = max_independent_set(&g).unwrap().len();
        assert!(c.num_colors >= 60usize.div_ceil(alpha));
        assert!(c.num_colors <= 3 * dsatur(&g).num_colors);
        assert_eq!(trace.total_colors(), c.num_colors);
    }

    #[test]
    fn planted_clique_forces_colors() {
        let g = generate_gnp(&GnpParams::new(60, 0.5, 11).unwrap()).unwrap();
        let mut e = EdgeSet::new();
        for u in 0..10 {
            for v in u + 1..10 {
                if !g.has_edge(u, v) {
                    e.insert(u, v).unwrap();
                }
            }
        }
        let prof = AnalyticProfile::new(60, 0.5, 1.0).unwrap();
        let (c, trace) = strip_color(&g, &e, 1.0, &prof, &StripKnobs::default()).unwrap();
        let union = g.union(&e).unwrap();
        assert!(verify_coloring(&union, &c).unwrap());
        assert!(c.num_colors >= 10);
        assert_eq!(trace.total_colors(), c.num_colors);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = Graph::empty(10);
        let prof = AnalyticProfile::new(11, 0.5, 1.0).unwrap();
        assert!(strip_color(&g, &EdgeSet::new(), 1.0, &prof, &StripKnobs::default()).is_err());
        let prof = AnalyticProfile::new(10, 0.5, 1.0).unwrap();
        assert!(strip_color(&g, &EdgeSet::new(), 0.0, &prof, &StripKnobs::default()).is_err());
        let prof = AnalyticProfile::new(4, 0.5, 5.0).unwrap();
        assert!(matches!(
            strip_color(
                &Graph::empty(4),
                &EdgeSet::new(),
                1.0,
                &prof,
                &StripKnobs::default()
            ),
            Err(Error::MissingProfileValue("k0"))
        ));
    }

    #[test]
    fn fail_policy_propagates_overflow() {
        let g = generate_gnp(&GnpParams::new(30, 0.3, 4).unwrap()).unwrap();
        let prof = AnalyticProfile::new(30, 0.3, 1.0).unwrap();
        let knobs = StripKnobs {
            enumeration_limit: 1,
            fallback: FallbackPolicy::Fail,
            working_size: Some(3),
            ..StripKnobs::default()
        };
        assert!(matches!(
            strip_color(&g, &EdgeSet::new(), 1.0, &prof, &knobs),
            Err(Error::EnumerationLimit { .. })
        ));
        let knobs = StripKnobs {
            fallback: FallbackPolicy::Greedy,
            ..knobs
        };
        let (c, trace) = strip_color(&g, &EdgeSet::new(), 1.0, &prof, &knobs).unwrap();
        assert!(verify_coloring(&g, &c).unwrap());
        assert!(trace.fidelity.enumeration_overflow > 0);
        assert!(trace.fidelity.greedy > 0);
    }

    #[test]
    fn local_rule_and_determinism() {
        let g = generate_gnp(&GnpParams::new(80, 0.5, 3).unwrap()).unwrap();
        let prof = AnalyticProfile::new(80, 0.5, 1.0).unwrap();
        let knobs = StripKnobs {
            rule: ResidualRule::Local,
            ..StripKnobs::default()
        };
        let a = strip_color(&g, &EdgeSet::new(), 0.5, &prof, &knobs).unwrap();
        let b = strip_color(&g, &EdgeSet::new(), 0.5, &prof, &knobs).unwrap();
        assert_eq!(a, b);
        assert!(a.1.residual_vertices as f64 <= a.1.residual_threshold);
    }
}
