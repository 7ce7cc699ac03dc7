//! Experiment harness: density audits, concentration sampling, seeded
//! sweeps and their CSV/JSON output.

pub mod audit;
pub mod concentration;
pub mod config;
pub mod experiment;

pub use audit::{density_audit, AuditMode, DensityReport, Violation};
pub use concentration::{concentration_sample, ConcentrationSummary};
pub use config::{ExperimentConfig, Strategy};
pub use experiment::{run_experiment, ResultRow, ResultTable};

/// Artifact version stamped on every result row.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Result schema version; bump when row columns change.
pub const SCHEMA_VERSION: u32 = 1;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds `parts` into one seed. Order matters; the result depends on nothing
/// else, so per-row streams are independent of scheduling.
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts.iter().fold(0x9e37_79b9_7f4a_7c15, |acc, &x| {
        mix(acc.wrapping_add(0x9e37_79b9_7f4a_7c15) ^ mix(x))
    })
}

/// FNV-1a of a string, for folding names into [`derive_seed`].
pub fn hash_str(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

pub(crate) fn thread_pool(workers: usize) -> crate::error::Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| crate::error::Error::InvalidParameter(format!("thread pool: {e}")))
}
