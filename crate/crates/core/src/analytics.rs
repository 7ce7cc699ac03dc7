//! Closed-form quantities for G(n, p) at finite n.
//!
//! Everything is evaluated in natural-log space with compensated summation,
//! so `C(n, k)(1-p)^C(k,2)` never overflows even at n in the thousands.
//! Logarithms are natural unless a name says `log_b`, where `b = 1/(1-p)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed when comparing a log-value against `ln(theta)`, absorbing
/// rounding in the incremental binomial sums.
const LOG_TIE_SLACK: f64 = 1e-12;

/// Denominator constant of the lower-tail bound `exp(-mu^2 / (300 mu0^2 n^2 p))`.
pub const LOWER_TAIL_DENOMINATOR: f64 = 300.0;
/// Denominator constant of the two-sided bound `2 exp(-delta^2 mu^2 / (40 mu0^2 n^2 p))`.
pub const TWO_SIDED_DENOMINATOR: f64 = 40.0;

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    let mut acc = CompensatedSum::new();
    for i in 0..k {
        acc.add(((n - i) as f64).ln());
        acc.add(-((i + 1) as f64).ln());
    }
    acc.value()
}

fn pairs(k: u64) -> f64 {
    (k * k.saturating_sub(1) / 2) as f64
}

fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "p = {p} is outside (0, 1)"
        )))
    }
}

/// The qualifying threshold size and the log of its expected count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct K0 {
    pub k0: usize,
    /// `ln( C(n, k0) (1-p)^C(k0, 2) )`.
    pub ln_value: f64,
}

impl K0 {
    pub fn value(&self) -> f64 {
        self.ln_value.exp()
    }
}

/// Largest `k` in `[1, n]` with `C(n, k)(1-p)^C(k,2) >= theta`, or `None`.
pub fn compute_k0(n: usize, p: f64, theta: f64) -> Result<Option<K0>> {
    check_probability(p)?;
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "theta = {theta} must be positive"
        )));
    }
    let ln_q = (-p).ln_1p();
    let ln_theta = theta.ln();
    let mut ln_binom = CompensatedSum::new();
    let mut best = None;
    for k in 1..=n as u64 {
        ln_binom.add(((n as u64 - k + 1) as f64).ln());
        ln_binom.add(-(k as f64).ln());
        let mut v = ln_binom;
        v.add(pairs(k) * ln_q);
        let ln_value = v.value();
        if ln_value >= ln_theta - LOG_TIE_SLACK {
            best = Some(K0 {
                k0: k as usize,
                ln_value,
            });
        }
    }
    Ok(best)
}

/// `mu = C(n, k0)(1-p)^C(k0,2)` and `mu0 = C(n-2, k0-2)(1-p)^C(k0,2)`, in
/// log form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedCounts {
    pub ln_mu: f64,
    pub ln_mu0: f64,
}

impl ExpectedCounts {
    pub fn mu(&self) -> f64 {
        self.ln_mu.exp()
    }

    pub fn mu0(&self) -> f64 {
        self.ln_mu0.exp()
    }

    pub fn ratio_mu0_over_mu(&self) -> f64 {
        (self.ln_mu0 - self.ln_mu).exp()
    }
}

pub fn expected_counts(n: usize, p: f64, k0: usize) -> Result<ExpectedCounts> {
    check_probability(p)?;
    if k0 < 2 || k0 > n {
        return Err(Error::InvalidParameter(format!(
            "k0 = {k0} must satisfy 2 <= k0 <= n = {n}"
        )));
    }
    let shared = pairs(k0 as u64) * (-p).ln_1p();
    let mut mu = CompensatedSum::new();
    mu.add(ln_choose(n as u64, k0 as u64));
    mu.add(shared);
    let mut mu0 = CompensatedSum::new();
    mu0.add(ln_choose(n as u64 - 2, k0 as u64 - 2));
    mu0.add(shared);
    Ok(ExpectedCounts {
        ln_mu: mu.value(),
        ln_mu0: mu0.value(),
    })
}

/// Predicted color count `(1+eps) n / (2 log_b(np))` and the working set
/// size `max(2, round(2 log_b(np / ln^3 n)))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChromaticPrediction {
    /// `None` when `log_b(np) <= 0`.
    pub target: Option<f64>,
    /// `None` unless `np > ln^3 n` and `np > 1`.
    pub k: Option<usize>,
}

pub fn predicted_chromatic(n: usize, p: f64, epsilon: f64) -> Result<ChromaticPrediction> {
    check_probability(p)?;
    let ln_b = -(-p).ln_1p();
    let np = n as f64 * p;
    let log_b_np = np.ln() / ln_b;
    let target = (log_b_np > 0.0 && log_b_np.is_finite())
        .then(|| (1.0 + epsilon) * n as f64 / (2.0 * log_b_np));
    let ln_n = (n as f64).ln();
    let cube = ln_n.powi(3);
    let k = (target.is_some() && np > cube).then(|| {
        let raw = 2.0 * (np / cube).ln() / ln_b;
        (raw.round() as usize).max(2)
    });
    Ok(ChromaticPrediction { target, k })
}

/// Lower-tail and two-sided concentration bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailBounds {
    /// `mu^2 / (300 mu0^2 n^2 p)`.
    pub lower_tail_exponent: f64,
    /// `delta^2 mu^2 / (40 mu0^2 n^2 p)`.
    pub two_sided_exponent: f64,
    /// `min(1, exp(-lower_tail_exponent))`.
    pub lower_tail: f64,
    /// `min(1, 2 exp(-two_sided_exponent))`.
    pub two_sided: f64,
}

/// Evaluates the bounds from `ln(mu / mu0)` directly.
pub fn tail_bounds_from_ratio(
    ln_mu_over_mu0: f64,
    n: usize,
    p: f64,
    delta: f64,
) -> Result<TailBounds> {
    check_probability(p)?;
    if !(delta >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "delta = {delta} must be non-negative"
        )));
    }
    let ln_base = 2.0 * ln_mu_over_mu0 - 2.0 * (n as f64).ln() - p.ln();
    let lower_tail_exponent = (ln_base - LOWER_TAIL_DENOMINATOR.ln()).exp();
    let two_sided_exponent = if delta == 0.0 {
        0.0
    } else {
        (ln_base + 2.0 * delta.ln() - TWO_SIDED_DENOMINATOR.ln()).exp()
    };
    Ok(TailBounds {
        lower_tail_exponent,
        two_sided_exponent,
        lower_tail: (-lower_tail_exponent).exp().min(1.0),
        two_sided: (std::f64::consts::LN_2 - two_sided_exponent).exp().min(1.0),
    })
}

pub fn tail_bounds(profile: &AnalyticProfile, delta: f64) -> Result<TailBounds> {
    let counts = profile.counts.ok_or(Error::MissingProfileValue("k0"))?;
    tail_bounds_from_ratio(counts.ln_mu - counts.ln_mu0, profile.n, profile.p, delta)
}

/// Every closed-form quantity for one `(n, p, theta)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticProfile {
    pub n: usize,
    pub p: f64,
    pub b: f64,
    pub ln_b: f64,
    pub theta: f64,
    pub ln_theta: f64,
    pub k0: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counts: Option<ExpectedCounts>,
    /// Linear `mu`, when it fits in an `f64`.
    pub mu: Option<f64>,
    pub mu0: Option<f64>,
    pub k: Option<usize>,
    /// `n / (2 log_b(np))`.
    pub chi_predicted: Option<f64>,
    pub warnings: Vec<String>,
}

impl AnalyticProfile {
    pub fn new(n: usize, p: f64, theta: f64) -> Result<Self> {
        check_probability(p)?;
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        let ln_b = -(-p).ln_1p();
        let k0 = compute_k0(n, p, theta)?.map(|k| k.k0);
        let counts = match k0 {
            Some(k) if k >= 2 => Some(expected_counts(n, p, k)?),
            _ => None,
        };
        let finite = |x: f64| x.is_finite().then_some(x);
        let prediction = predicted_chromatic(n, p, 0.0)?;
        let mut warnings = Vec::new();
        if p > 0.5 {
            warnings.push(format!(
                "p = {p} > 1/2: the cap 4*mu0 no longer dominates 2*mu0/(1-p)"
            ));
        } else if let Some(c) = counts {
            debug_assert!(4.0 * c.mu0() >= 2.0 * c.mu0() / (1.0 - p));
        }
        if k0 == Some(1) {
            warnings.push("k0 = 1: pair statistics are undefined".into());
        }
        Ok(AnalyticProfile {
            n,
            p,
            b: ln_b.exp(),
            ln_b,
            theta,
            ln_theta: theta.ln(),
            k0,
            counts,
            mu: counts.and_then(|c| finite(c.mu())),
            mu0: counts.and_then(|c| finite(c.mu0())),
            k: prediction.k,
            chi_predicted: prediction.target,
            warnings,
        })
    }

    /// Profile with the literal `theta = n^4`.
    pub fn with_n_fourth(n: usize, p: f64) -> Result<Self> {
        Self::new(n, p, (n as f64).powi(4))
    }

    pub fn ln_mu(&self) -> Option<f64> {
        self.counts.map(|c| c.ln_mu)
    }

    pub fn ln_mu0(&self) -> Option<f64> {
        self.counts.map(|c| c.ln_mu0)
    }

    /// `multiplier * mu0`, the pair-coverage cap (4 in the standard setting).
    pub fn cap(&self, multiplier: f64) -> Option<f64> {
        self.counts.map(|c| multiplier * c.mu0())
    }

    /// Whether `4 mu0 >= 2 mu0 / (1-p)`, i.e. `p <= 1/2`.
    pub fn cap_dominates(&self) -> bool {
        self.p <= 0.5
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
