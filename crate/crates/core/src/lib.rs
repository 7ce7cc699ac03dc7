//! Chromatic-number resilience of dense random graphs.
//!
//! The crate draws G(n, p) graphs, evaluates the asymptotic profile
//! (`k0`, `mu`, `mu0`, tail exponents), builds capped independent-set
//! families, colors `G ∪ H` by repeatedly stripping sparse independent sets,
//! and measures how many added edges it takes to push the chromatic number
//! above a cap. The [`lab`] module runs seeded sweeps and writes CSV/JSON.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adversary;
pub mod analytics;
pub mod bitset;
pub mod coloring;
pub mod error;
pub mod graph;
pub mod iset;
pub mod lab;

pub use adversary::{
    bounded_degree_h, global_resilience_oracle, local_resilience_oracle, plant_clique,
    random_budget, AdversaryBudget, EdgeCertificate, ResilienceWitness,
};
pub use analytics::{compute_k0, expected_counts, predicted_chromatic, AnalyticProfile};
pub use coloring::{
    chromatic_exact, degeneracy_color, dsatur, strip_color, verify_coloring, Coloring,
    ColoringTrace, StripKnobs,
};
pub use error::{Error, Result};
pub use graph::{generate_gnp, EdgeSet, GnpParams, Graph};
pub use iset::{
    enumerate_isets, max_independent_set, sparse_iset, turan_extract, uniform_family, IsetFamily,
};
pub use lab::{run_experiment, ExperimentConfig, Strategy};
