//! Empirical distribution of the capped family size across G(n, p) draws.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{derive_seed, thread_pool};
use crate::analytics::AnalyticProfile;
use crate::error::{Error, Result};
use crate::graph::{generate_gnp, GnpParams};
use crate::iset::uniform_family;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub min: f64,
    pub q10: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub q90: f64,
    pub max: f64,
}

/// Linear interpolation between order statistics.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

impl Quantiles {
    fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Some(Quantiles {
            min: v[0],
            q10: quantile(&v, 0.10),
            q25: quantile(&v, 0.25),
            median: quantile(&v, 0.5),
            q75: quantile(&v, 0.75),
            q90: quantile(&v, 0.90),
            max: v[v.len() - 1],
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationSummary {
    pub n: usize,
    pub p: f64,
    pub theta: f64,
    pub k0: usize,
    pub mu: f64,
    pub mu0: f64,
    pub cap: f64,
    pub trials: usize,
    pub seed: u64,
    /// `|family| / mu`, per trial.
    pub ratios: Vec<f64>,
    /// `excess_mass / mu`, per trial.
    pub excess_ratios: Vec<f64>,
    pub mean_ratio: Option<f64>,
    pub mean_excess_ratio: Option<f64>,
    pub ratio_quantiles: Option<Quantiles>,
    /// Fraction of trials with `|family| / mu <= 3/5`.
    pub frac_at_most_three_fifths: Option<f64>,
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

/// Draws `trials` graphs (trial `t` uses seed `derive_seed([seed, t])`),
/// builds the capped family of size-`k0` sets with cap
/// `cap_multiplier * mu0` on each, and summarizes `|family| / mu`.
#[allow(clippy::too_many_arguments)]
pub fn concentration_sample(
    n: usize,
    p: f64,
    theta: f64,
    cap_multiplier: f64,
    trials: usize,
    seed: u64,
    enumeration_limit: usize,
    workers: usize,
) -> Result<ConcentrationSummary> {
    let profile = AnalyticProfile::new(n, p, theta)?;
    let k0 = profile.k0.ok_or(Error::MissingProfileValue("k0"))?;
    let counts = profile.counts.ok_or(Error::MissingProfileValue("mu"))?;
    let (mu, mu0) = (counts.mu(), counts.mu0());
    let cap = cap_multiplier * mu0;

    let pool = thread_pool(workers.max(1))?;
    let per_trial: Vec<(f64, f64)> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let params = GnpParams::new(n, p, derive_seed(&[seed, t as u64]))?;
                let g = generate_gnp(&params)?;
                let family = uniform_family(&g, k0, cap, enumeration_limit)?;
                Ok((family.len() as f64 / mu, family.excess_mass as f64 / mu))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let ratios: Vec<f64> = per_trial.iter().map(|r| r.0).collect();
    let excess_ratios: Vec<f64> = per_trial.iter().map(|r| r.1).collect();
    let low = ratios.iter().filter(|&&r| r <= 0.6).count();
    Ok(ConcentrationSummary {
        n,
        p,
        theta,
        k0,
        mu,
        mu0,
        cap,
        trials,
        seed,
        mean_ratio: mean(&ratios),
        mean_excess_ratio: mean(&excess_ratios),
        ratio_quantiles: Quantiles::of(&ratios),
        frac_at_most_three_fifths: (trials > 0).then(|| low as f64 / trials as f64),
        ratios,
        excess_ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iset::DEFAULT_ENUMERATION_LIMIT;

    #[test]
    fn zero_trials_is_empty() {
        let s = concentration_sample(20, 0.5, 1.0, 4.0, 0, 1, 1000, 1).unwrap();
        assert!(s.ratios.is_empty());
        assert_eq!(s.mean_ratio, None);
        assert_eq!(s.frac_at_most_three_fifths, None);
    }

    #[test]
    fn degenerate_empty_graph_ratio_is_one() {
        // theta = 5 at n = 4 gives k0 = 2; p ~ 0 leaves the graph empty, so
        // the family is all 6 pairs and mu = 6(1-p).
        let s = concentration_sample(4, 1e-12, 5.0, 4.0, 3, 1, 1000, 1).unwrap();
        assert_eq!(s.k0, 2);
        for r in &s.ratios {
            assert!((r - 1.0).abs() < 1e-9);
        }
        assert_eq!(s.mean_excess_ratio, Some(0.0));
    }

    #[test]
    fn independent_of_worker_count() {
        let a =
            concentration_sample(30, 0.5, 1.0, 4.0, 12, 5, DEFAULT_ENUMERATION_LIMIT, 1).unwrap();
        let b =
            concentration_sample(30, 0.5, 1.0, 4.0, 12, 5, DEFAULT_ENUMERATION_LIMIT, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn quantile_interpolates() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&v, 0.5), 2.5);
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 1.0), 4.0);
    }
}
