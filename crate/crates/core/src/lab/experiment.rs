//! Seeded sweeps over `(n, p, seed, strategy)`.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Strategy};
use super::{derive_seed, hash_str, thread_pool, SCHEMA_VERSION, VERSION};
use crate::analytics::{predicted_chromatic, AnalyticProfile};
use crate::coloring::{
    chromatic_exact_coloring, dsatur, strip_color, verify_coloring, ColoringTrace,
};
use crate::error::Result;
use crate::graph::{generate_gnp, GnpParams};

/// One CSV row. `elapsed_ms` is the only field that varies between runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub schema: u32,
    pub version: String,
    pub config_hash: String,
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub strategy: String,
    /// Seed of the G(n, p) draw: `derive_seed([seed, n, p bits])`.
    pub graph_seed: u64,
    /// Seed handed to the strategy: `derive_seed([seed, n, p bits, strategy])`.
    pub strategy_seed: u64,
    pub base_edges: usize,
    pub edges_added: usize,
    pub dsatur_base: usize,
    pub dsatur_union: usize,
    pub strip_colors: Option<usize>,
    pub exact_chi: Option<usize>,
    pub target: Option<f64>,
    pub k0: Option<usize>,
    pub k_formula: Option<usize>,
    pub i0: Option<usize>,
    /// Colors per dyadic bucket, `;`-separated.
    pub bucket_counts: Option<String>,
    pub residual_colors: Option<usize>,
    pub greedy_strips: Option<usize>,
    pub all_proper: bool,
    pub error: Option<String>,
    pub elapsed_ms: f64,
}

/// A row plus its full stripping trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowDetail {
    pub row: ResultRow,
    pub trace: Option<ColoringTrace>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub config: ExperimentConfig,
    pub rows: Vec<RowDetail>,
}

impl ResultTable {
    pub fn error_count(&self) -> usize {
        self.rows.iter().filter(|r| r.row.error.is_some()).count()
    }

    pub fn csv_rows(&self) -> Vec<ResultRow> {
        self.rows.iter().map(|r| r.row.clone()).collect()
    }

    /// CSV with a header; with `timing = false` every `elapsed_ms` is written
    /// as 0 so runs compare byte-for-byte.
    pub fn to_csv(&self, timing: bool) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            let mut row = r.row.clone();
            if !timing {
                row.elapsed_ms = 0.0;
            }
            w.serialize(row)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn rows_from_csv(text: &str) -> Result<Vec<ResultRow>> {
        csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .map(|r| r.map_err(Into::into))
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write(&self, csv_path: Option<&Path>, json_path: Option<&Path>) -> Result<()> {
        if let Some(path) = csv_path {
            std::fs::write(path, self.to_csv(true)?)?;
        }
        if let Some(path) = json_path {
            std::fs::write(path, self.to_json()?)?;
        }
        Ok(())
    }
}

/// Runs every `(n, p, seed, strategy)` combination. Rows are computed in
/// parallel but emitted in configuration order; a failing row records its
/// error and the sweep continues.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ResultTable> {
    config.validate()?;
    let hash = config.hash();
    let mut jobs = Vec::new();
    for &n in &config.ns {
        for &p in &config.ps {
            for &seed in &config.seeds {
                for strategy in &config.strategies {
                    jobs.push((n, p, seed, strategy));
                }
            }
        }
    }
    let pool = thread_pool(config.workers.max(1))?;
    let rows = pool.install(|| {
        jobs.par_iter()
            .map(|&(n, p, seed, strategy)| run_row(config, &hash, n, p, seed, strategy))
            .collect()
    });
    Ok(ResultTable {
        config: config.clone(),
        rows,
    })
}

fn run_row(
    config: &ExperimentConfig,
    hash: &str,
    n: usize,
    p: f64,
    seed: u64,
    strategy: &Strategy,
) -> RowDetail {
    let start = Instant::now();
    let graph_seed = derive_seed(&[seed, n as u64, p.to_bits()]);
    let strategy_seed =
        derive_seed(&[seed, n as u64, p.to_bits(), hash_str(&strategy.to_string())]);
    let mut row = ResultRow {
        schema: SCHEMA_VERSION,
        version: VERSION.to_string(),
        config_hash: hash.to_string(),
        n,
        p,
        seed,
        strategy: strategy.to_string(),
        graph_seed,
        strategy_seed,
        base_edges: 0,
        edges_added: 0,
        dsatur_base: 0,
        dsatur_union: 0,
        strip_colors: None,
        exact_chi: None,
        target: None,
        k0: None,
        k_formula: None,
        i0: None,
        bucket_counts: None,
        residual_colors: None,
        greedy_strips: None,
        all_proper: false,
        error: None,
        elapsed_ms: 0.0,
    };
    let trace = match fill_row(config, &mut row, strategy) {
        Ok(trace) => trace,
        Err(e) => {
            row.error = Some(e.to_string());
            None
        }
    };
    row.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    RowDetail { row, trace }
}

fn fill_row(
    config: &ExperimentConfig,
    row: &mut ResultRow,
    strategy: &Strategy,
) -> Result<Option<ColoringTrace>> {
    let (n, p) = (row.n, row.p);
    let base = generate_gnp(&GnpParams::new(n, p, row.graph_seed)?)?;
    row.base_edges = base.edge_count();
    let (added, _) = strategy.apply(&base, p, row.strategy_seed)?;
    let union = base.union(&added)?;
    row.edges_added = union.edge_count() - base.edge_count();
    row.target = predicted_chromatic(n, p, config.epsilon)?.target;

    let base_col = dsatur(&base);
    let union_col = dsatur(&union);
    row.dsatur_base = base_col.num_colors;
    row.dsatur_union = union_col.num_colors;
    let mut proper = verify_coloring(&base, &base_col)? && verify_coloring(&union, &union_col)?;

    if n <= config.exact_chi_limit {
        let exact = chromatic_exact_coloring(&union, config.exact_chi_limit)?;
        proper &= verify_coloring(&union, &exact)?;
        row.exact_chi = Some(exact.num_colors);
    }

    let profile = AnalyticProfile::new(n, p, config.theta)?;
    row.k0 = profile.k0;
    row.k_formula = profile.k;
    row.all_proper = proper;
    let (coloring, trace) = strip_color(&base, &added, config.epsilon, &profile, &config.knobs)?;
    proper &= verify_coloring(&union, &coloring)?;
    row.all_proper = proper;
    row.strip_colors = Some(coloring.num_colors);
    row.i0 = Some(trace.i0);
    row.bucket_counts = Some(
        trace
            .bucket_counts
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(";"),
    );
    row.residual_colors = Some(trace.residual_colors);
    row.greedy_strips = Some(trace.fidelity.greedy);
    Ok(Some(trace))
}
