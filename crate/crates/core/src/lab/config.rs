//! Sweep configuration, read from a plain `key = value` file.
//!
//! ```text
//! # lines starting with '#' are comments
//! n = 30, 60
//! p = 0.5
//! seeds = 1..10            # inclusive range, or a list: 1, 2, 3
//! strategy = none; plant_clique; random:m=50; bounded_degree:delta=3
//! epsilon = 1.0
//! theta = 1
//! rule = global            # or local
//! enumeration_limit = 5000000
//! exact_alpha_limit = 120
//! cap_multiplier = 4
//! fallback = greedy        # or fail
//! working_size = 7         # optional
//! exact_chi_limit = 30
//! workers = 4
//! csv = results.csv
//! json = results.json
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::adversary::{bounded_degree_h, plant_clique, random_budget, tightness_clique_size};
use crate::coloring::{FallbackPolicy, ResidualRule, StripKnobs};
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph};

/// An edge-addition strategy applied to each base graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Strategy {
    None,
    /// Clique on vertices `0..t`; `t` defaults to `ceil(n / log_b(np))`.
    PlantClique {
        t: Option<usize>,
    },
    Random {
        m: usize,
    },
    BoundedDegree {
        delta: usize,
    },
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::None => "none",
            Strategy::PlantClique { .. } => "plant_clique",
            Strategy::Random { .. } => "random",
            Strategy::BoundedDegree { .. } => "bounded_degree",
        }
    }

    /// Edges to add to `g` (a G(n, p) draw), with the resolved parameters.
    pub fn apply(
        &self,
        g: &Graph,
        p: f64,
        seed: u64,
    ) -> Result<(EdgeSet, BTreeMap<String, serde_json::Value>)> {
        let mut params = BTreeMap::new();
        let edges = match *self {
            Strategy::None => EdgeSet::new(),
            Strategy::PlantClique { t } => {
                let t = match t {
                    Some(t) => t.min(g.n()),
                    None => tightness_clique_size(g.n(), p).ok_or_else(|| {
                        Error::InvalidParameter(format!("log_b(np) <= 0 at n = {}, p = {p}", g.n()))
                    })?,
                };
                params.insert("t".into(), t.into());
                plant_clique(g, &(0..t).collect::<Vec<_>>())?
            }
            Strategy::Random { m } => {
                params.insert("m".into(), m.into());
                random_budget(g, m, seed)?
            }
            Strategy::BoundedDegree { delta } => {
                params.insert("delta".into(), delta.into());
                let h = bounded_degree_h(g.n(), delta, seed)?;
                params.insert("max_degree".into(), h.max_degree.into());
                EdgeSet::from_pairs(h.edges.iter().filter(|&(u, v)| !g.has_edge(u, v)))?
            }
        };
        Ok((edges, params))
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::None => write!(f, "none"),
            Strategy::PlantClique { t: None } => write!(f, "plant_clique"),
            Strategy::PlantClique { t: Some(t) } => write!(f, "plant_clique:t={t}"),
            Strategy::Random { m } => write!(f, "random:m={m}"),
            Strategy::BoundedDegree { delta } => write!(f, "bounded_degree:delta={delta}"),
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    /// `name` or `name:key=value`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once(':') {
            Some((name, arg)) => (name.trim(), Some(arg.trim())),
            None => (s, None),
        };
        let value = |key: &str| -> Result<Option<usize>> {
            match arg {
                None => Ok(None),
                Some(a) => {
                    let (k, v) = a.split_once('=').ok_or_else(|| {
                        Error::InvalidParameter(format!("expected {key}=<value> in `{s}`"))
                    })?;
                    if k.trim() != key {
                        return Err(Error::InvalidParameter(format!(
                            "unknown parameter `{}` in `{s}`",
                            k.trim()
                        )));
                    }
                    v.trim()
                        .parse()
                        .map(Some)
                        .map_err(|_| Error::InvalidParameter(format!("bad value in `{s}`")))
                }
            }
        };
        let required = |key: &str| -> Result<usize> {
            value(key)?.ok_or_else(|| {
                Error::InvalidParameter(format!("strategy `{name}` needs {key}=<value>"))
            })
        };
        match name {
            "none" => match arg {
                None => Ok(Strategy::None),
                Some(_) => Err(Error::InvalidParameter(
                    "strategy `none` takes no parameters".into(),
                )),
            },
            "plant_clique" => Ok(Strategy::PlantClique { t: value("t")? }),
            "random" => Ok(Strategy::Random { m: required("m")? }),
            "bounded_degree" => Ok(Strategy::BoundedDegree {
                delta: required("delta")?,
            }),
            other => Err(Error::UnknownStrategy(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub ns: Vec<usize>,
    pub ps: Vec<f64>,
    pub seeds: Vec<u64>,
    pub strategies: Vec<Strategy>,
    pub epsilon: f64,
    pub theta: f64,
    pub knobs: StripKnobs,
    /// `chromatic_exact` runs on rows with `n` at most this.
    pub exact_chi_limit: usize,
    /// Worker threads; does not affect results.
    #[serde(skip)]
    pub workers: usize,
    #[serde(skip)]
    pub csv_out: Option<PathBuf>,
    #[serde(skip)]
    pub json_out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            ns: vec![30],
            ps: vec![0.5],
            seeds: vec![1],
            strategies: vec![Strategy::None],
            epsilon: 1.0,
            theta: 1.0,
            knobs: StripKnobs::default(),
            exact_chi_limit: 30,
            workers: 1,
            csv_out: None,
            json_out: None,
        }
    }
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::InvalidParameter(format!("`{key}`: cannot parse `{t}`")))
        })
        .collect()
}

fn parse_one<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("`{key}`: cannot parse `{}`", value.trim())))
}

fn parse_seeds(value: &str) -> Result<Vec<u64>> {
    if let Some((a, b)) = value.split_once("..") {
        let a: u64 = parse_one("seeds", a)?;
        let b: u64 = parse_one("seeds", b)?;
        if a > b {
            return Err(Error::InvalidParameter(format!(
                "empty seed range {a}..{b}"
            )));
        }
        Ok((a..=b).collect())
    } else {
        parse_list("seeds", value)
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("expected key = value, got `{line}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "n" => cfg.ns = parse_list(key, value)?,
                "p" => cfg.ps = parse_list(key, value)?,
                "seeds" => cfg.seeds = parse_seeds(value)?,
                "strategy" => {
                    cfg.strategies = value
                        .split(';')
                        .filter(|s| !s.trim().is_empty())
                        .map(str::parse)
                        .collect::<Result<_>>()?
                }
                "epsilon" => cfg.epsilon = parse_one(key, value)?,
                "theta" => cfg.theta = parse_one(key, value)?,
                "rule" => {
                    cfg.knobs.rule = match value {
                        "global" => ResidualRule::Global,
                        "local" => ResidualRule::Local,
                        _ => {
                            return Err(Error::InvalidParameter(format!("unknown rule `{value}`")))
                        }
                    }
                }
                "enumeration_limit" => cfg.knobs.enumeration_limit = parse_one(key, value)?,
                "exact_alpha_limit" => cfg.knobs.exact_alpha_limit = parse_one(key, value)?,
                "cap_multiplier" => cfg.knobs.cap_multiplier = parse_one(key, value)?,
                "fallback" => {
                    cfg.knobs.fallback = match value {
                        "greedy" => FallbackPolicy::Greedy,
                        "fail" => FallbackPolicy::Fail,
                        _ => {
                            return Err(Error::InvalidParameter(format!(
                                "unknown fallback `{value}`"
                            )))
                        }
                    }
                }
                "working_size" => cfg.knobs.working_size = Some(parse_one(key, value)?),
                "exact_chi_limit" => cfg.exact_chi_limit = parse_one(key, value)?,
                "workers" => cfg.workers = parse_one(key, value)?,
                "csv" => cfg.csv_out = Some(PathBuf::from(value)),
                "json" => cfg.json_out = Some(PathBuf::from(value)),
                other => {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ns.is_empty()
            || self.ps.is_empty()
            || self.seeds.is_empty()
            || self.strategies.is_empty()
        {
            return Err(Error::InvalidParameter(
                "n, p, seeds and strategy lists must be non-empty".into(),
            ));
        }
        if self.seeds.iter().collect::<BTreeSet<_>>().len() != self.seeds.len() {
            return Err(Error::InvalidParameter("seeds must be distinct".into()));
        }
        if let Some(&p) = self.ps.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
            return Err(Error::InvalidParameter(format!(
                "p = {p} is outside (0, 1)"
            )));
        }
        if self.ns.contains(&0) {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if !(self.epsilon > 0.0) || !(self.theta > 0.0) {
            return Err(Error::InvalidParameter(
                "epsilon and theta must be positive".into(),
            ));
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form
    /// (worker count and output paths excluded).
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategy_parse_display_roundtrip() {
        for s in [
            "none",
            "plant_clique",
            "plant_clique:t=18",
            "random:m=50",
            "bounded_degree:delta=3",
        ] {
            let parsed: Strategy = s.parse().unwrap();
            assert_eq!(parsed.to_string(), s);
        }
        assert!(matches!(
            "clique".parse::<Strategy>(),
            Err(Error::UnknownStrategy(_))
        ));
        assert!("random".parse::<Strategy>().is_err());
        assert!("random:x=3".parse::<Strategy>().is_err());
        assert!("none:t=1".parse::<Strategy>().is_err());
    }

    #[test]
    fn parse_full_config() {
        let text = "\
# sweep
n = 30, 60
p = 0.5
seeds = 1..3
strategy = none; plant_clique:t=5
epsilon = 0.5
rule = local
fallback = fail
workers = 3
csv = out.csv
";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.ns, vec![30, 60]);
        assert_eq!(cfg.seeds, vec![1, 2, 3]);
        assert_eq!(cfg.strategies.len(), 2);
        assert_eq!(cfg.knobs.rule, ResidualRule::Local);
        assert_eq!(cfg.knobs.fallback, FallbackPolicy::Fail);
        assert_eq!(cfg.workers, 3);
        assert_eq!(cfg.csv_out, Some(PathBuf::from("out.csv")));

        let other_workers =
            ExperimentConfig::parse(&text.replace("workers = 3", "workers = 1")).unwrap();
        assert_eq!(cfg.hash(), other_workers.hash());
        let other_eps = ExperimentConfig::parse(&text.replace("0.5\nrule", "0.6\nrule")).unwrap();
        assert_ne!(cfg.hash(), other_eps.hash());
    }

    #[test]
    fn invalid_configs() {
        assert!(ExperimentConfig::parse("n =\n").is_err());
        assert!(ExperimentConfig::parse("seeds = 1, 1\n").is_err());
        assert!(ExperimentConfig::parse("strategy = teleport\n").is_err());
        assert!(ExperimentConfig::parse("p = 1.5\n").is_err());
        assert!(ExperimentConfig::parse("colour = red\n").is_err());
        assert!(ExperimentConfig::parse("just words\n").is_err());
    }

    #[test]
    fn strategies_apply() {
        let g = Graph::empty(20);
        let (e, params) = Strategy::PlantClique { t: Some(4) }
            .apply(&g, 0.5, 1)
            .unwrap();
        assert_eq!(e.len(), 6);
        assert_eq!(params["t"], 4);
        let (e, _) = Strategy::Random { m: 7 }.apply(&g, 0.5, 1).unwrap();
        assert_eq!(e.len(), 7);
        let (e, params) = Strategy::BoundedDegree { delta: 2 }
            .apply(&g, 0.5, 1)
            .unwrap();
        assert!(e.degrees(20).iter().all(|&d| d <= 2));
        assert!(params["max_degree"].as_u64().unwrap() <= 2);
        assert!(Strategy::None.apply(&g, 0.5, 1).unwrap().0.is_empty());
    }
}
