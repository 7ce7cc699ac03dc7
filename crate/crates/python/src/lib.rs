//! Python bindings for `chromres`. Structured results (profiles, families,
//! traces, reports) come back as plain dicts and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use chromres::adversary;
use chromres::analytics::{self, AnalyticProfile};
use chromres::coloring::{self, Coloring, ResidualRule, StripKnobs};
use chromres::graph::{self as cg, io, EdgeSet, GnpParams};
use chromres::iset::{self, IsetFamily, DEFAULT_ENUMERATION_LIMIT};
use chromres::lab::{self, AuditMode, ExperimentConfig};

fn err(e: chromres::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Serializes through `json.loads` so callers get native dicts and lists.
fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn edge_set(pairs: Vec<(usize, usize)>) -> PyResult<EdgeSet> {
    EdgeSet::from_pairs(pairs).map_err(err)
}

fn pairs(e: &EdgeSet) -> Vec<(usize, usize)> {
    e.iter().collect()
}

/// Simple undirected graph on vertices `0..n`.
#[pyclass(name = "Graph", module = "chromres", frozen)]
struct PyGraph {
    inner: cg::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph {
            inner: cg::Graph::from_edges(n, edges).map_err(err)?,
        })
    }

    /// Draws G(n, p) with the given seed.
    #[staticmethod]
    #[pyo3(signature = (n, p, seed = 0))]
    fn gnp(n: usize, p: f64, seed: u64) -> PyResult<Self> {
        let params = GnpParams::new(n, p, seed).map_err(err)?;
        Ok(PyGraph {
            inner: cg::generate_gnp(&params).map_err(err)?,
        })
    }

    #[staticmethod]
    fn cycle(n: usize) -> Self {
        PyGraph {
            inner: cg::Graph::cycle(n),
        }
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        PyGraph {
            inner: cg::Graph::complete(n),
        }
    }

    #[staticmethod]
    fn petersen() -> Self {
        PyGraph {
            inner: cg::Graph::petersen(),
        }
    }

    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: io::parse_edge_list(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_dimacs(text: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: io::parse_dimacs(text).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.inner.n() && v < self.inner.n() && self.inner.has_edge(u, v)
    }

    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees()
    }

    fn complement(&self) -> Self {
        PyGraph {
            inner: self.inner.complement(),
        }
    }

    /// New graph with the extra pairs added.
    fn union(&self, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph {
            inner: self.inner.union(&edge_set(edges)?).map_err(err)?,
        })
    }

    /// Returns the relabeled subgraph and the map back to original labels.
    fn induced_subgraph(&self, vertices: Vec<usize>) -> PyResult<(Self, Vec<usize>)> {
        let (g, map) = self.inner.induced_subgraph(&vertices).map_err(err)?;
        Ok((PyGraph { inner: g }, map))
    }

    fn to_edge_list(&self) -> String {
        io::to_edge_list(&self.inner)
    }

    fn to_dimacs(&self) -> String {
        io::to_dimacs(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, edges={})",
            self.inner.n(),
            self.inner.edge_count()
        )
    }
}

fn check_colors(g: &PyGraph, c: &Coloring) -> PyResult<()> {
    if coloring::verify_coloring(&g.inner, c).map_err(err)? {
        Ok(())
    } else {
        Err(PyValueError::new_err("internal error: improper coloring"))
    }
}

/// Analytic profile (k0, mu, mu0, predicted chromatic number) as a dict.
#[pyfunction]
#[pyo3(signature = (n, p, theta = 1.0, n_fourth = false))]
fn profile(py: Python<'_>, n: usize, p: f64, theta: f64, n_fourth: bool) -> PyResult<Py<PyAny>> {
    let prof = if n_fourth {
        AnalyticProfile::with_n_fourth(n, p)
    } else {
        AnalyticProfile::new(n, p, theta)
    }
    .map_err(err)?;
    to_py(py, &prof)
}

#[pyfunction]
#[pyo3(signature = (n, p, theta = 1.0))]
fn compute_k0(n: usize, p: f64, theta: f64) -> PyResult<Option<usize>> {
    Ok(analytics::compute_k0(n, p, theta)
        .map_err(err)?
        .map(|k| k.k0))
}

#[pyfunction]
#[pyo3(signature = (n, p, epsilon = 1.0))]
fn predicted_chromatic(n: usize, p: f64, epsilon: f64) -> PyResult<(Option<f64>, Option<usize>)> {
    let pr = analytics::predicted_chromatic(n, p, epsilon).map_err(err)?;
    Ok((pr.target, pr.k))
}

#[pyfunction]
#[pyo3(signature = (g, limit = iset::DEFAULT_EXACT_ALPHA_LIMIT))]
fn max_independent_set(g: &PyGraph, limit: usize) -> PyResult<Vec<usize>> {
    iset::max_independent_set_with_limit(&g.inner, limit).map_err(err)
}

#[pyfunction]
fn turan_extract(g: &PyGraph) -> Vec<usize> {
    iset::turan_extract(&g.inner)
}

fn family_dict(py: Python<'_>, f: &IsetFamily) -> PyResult<Py<PyAny>> {
    to_py(py, &iset::FamilyRecord::from(f))
}

#[pyfunction]
#[pyo3(signature = (g, k, limit = DEFAULT_ENUMERATION_LIMIT))]
fn enumerate_isets(py: Python<'_>, g: &PyGraph, k: usize, limit: usize) -> PyResult<Py<PyAny>> {
    family_dict(py, &iset::enumerate_isets(&g.inner, k, limit).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (g, k, cap, limit = DEFAULT_ENUMERATION_LIMIT))]
fn uniform_family(
    py: Python<'_>,
    g: &PyGraph,
    k: usize,
    cap: f64,
    limit: usize,
) -> PyResult<Py<PyAny>> {
    family_dict(
        py,
        &iset::uniform_family(&g.inner, k, cap, limit).map_err(err)?,
    )
}

/// Builds the size-`k` family (capped when `cap` is given) and returns the
/// member containing the fewest of `edges`.
#[pyfunction]
#[pyo3(signature = (g, k, edges, cap = None, limit = DEFAULT_ENUMERATION_LIMIT))]
fn sparse_iset(
    py: Python<'_>,
    g: &PyGraph,
    k: usize,
    edges: Vec<(usize, usize)>,
    cap: Option<f64>,
    limit: usize,
) -> PyResult<Py<PyAny>> {
    let family = match cap {
        Some(cap) => iset::uniform_family(&g.inner, k, cap, limit),
        None => iset::enumerate_isets(&g.inner, k, limit),
    }
    .map_err(err)?;
    to_py(
        py,
        &iset::sparse_iset(&family, &edge_set(edges)?).map_err(err)?,
    )
}

#[pyfunction]
fn dsatur(g: &PyGraph) -> PyResult<Vec<usize>> {
    let c = coloring::dsatur(&g.inner);
    check_colors(g, &c)?;
    Ok(c.colors)
}

/// Smallest-last coloring; returns `(colors, degeneracy)`.
#[pyfunction]
fn degeneracy_color(g: &PyGraph) -> PyResult<(Vec<usize>, usize)> {
    let (c, d) = coloring::degeneracy_color(&g.inner);
    check_colors(g, &c)?;
    Ok((c.colors, d))
}

#[pyfunction]
#[pyo3(signature = (g, limit = coloring::DEFAULT_EXACT_CHI_LIMIT))]
fn chromatic_exact(g: &PyGraph, limit: usize) -> PyResult<(usize, Vec<usize>)> {
    let c = coloring::chromatic_exact_coloring(&g.inner, limit).map_err(err)?;
    check_colors(g, &c)?;
    Ok((c.num_colors, c.colors))
}

#[pyfunction]
fn verify_coloring(g: &PyGraph, colors: Vec<usize>) -> PyResult<bool> {
    coloring::verify_coloring(&g.inner, &Coloring::new(colors)).map_err(err)
}

/// Colors `base ∪ added` by stripping sparse independent sets; returns
/// `(colors, trace)`.
#[pyfunction]
#[pyo3(signature = (base, added, p, epsilon = 1.0, theta = 1.0, rule = "global", working_size = None))]
#[allow(clippy::too_many_arguments)]
fn strip_color(
    py: Python<'_>,
    base: &PyGraph,
    added: Vec<(usize, usize)>,
    p: f64,
    epsilon: f64,
    theta: f64,
    rule: &str,
    working_size: Option<usize>,
) -> PyResult<(Vec<usize>, Py<PyAny>)> {
    let rule = match rule {
        "global" => ResidualRule::Global,
        "local" => ResidualRule::Local,
        other => return Err(PyValueError::new_err(format!("unknown rule `{other}`"))),
    };
    let knobs = StripKnobs {
        rule,
        working_size,
        ..StripKnobs::default()
    };
    let prof = AnalyticProfile::new(base.inner.n(), p, theta).map_err(err)?;
    let (c, trace) = coloring::strip_color(&base.inner, &edge_set(added)?, epsilon, &prof, &knobs)
        .map_err(err)?;
    Ok((c.colors, to_py(py, &trace)?))
}

#[pyfunction]
fn plant_clique(g: &PyGraph, vertices: Vec<usize>) -> PyResult<Vec<(usize, usize)>> {
    Ok(pairs(
        &adversary::plant_clique(&g.inner, &vertices).map_err(err)?,
    ))
}

#[pyfunction]
#[pyo3(signature = (g, m, seed = 0))]
fn random_budget(g: &PyGraph, m: usize, seed: u64) -> PyResult<Vec<(usize, usize)>> {
    Ok(pairs(
        &adversary::random_budget(&g.inner, m, seed).map_err(err)?,
    ))
}

/// Random graph with maximum degree at most `delta`; returns
/// `(edges, max_degree)`.
#[pyfunction]
#[pyo3(signature = (n, delta, seed = 0))]
fn bounded_degree_h(n: usize, delta: usize, seed: u64) -> PyResult<(Vec<(usize, usize)>, usize)> {
    let h = adversary::bounded_degree_h(n, delta, seed).map_err(err)?;
    Ok((pairs(&h.edges), h.max_degree))
}

/// `(value, witness edges)` from an oracle.
type Witness = Option<(usize, Vec<(usize, usize)>)>;

/// Least number of added edges pushing chi above `chi_cap`, with a witness.
#[pyfunction]
fn global_resilience(g: &PyGraph, chi_cap: usize, m_max: usize) -> PyResult<Witness> {
    let w = adversary::global_resilience_oracle(&g.inner, chi_cap, m_max).map_err(err)?;
    Ok(w.map(|w| (w.value, pairs(&w.edges))))
}

/// Least maximum degree of an added graph pushing chi above `chi_cap`.
#[pyfunction]
#[pyo3(signature = (g, chi_cap, delta_max, budget = adversary::DEFAULT_LOCAL_SEARCH_BUDGET))]
fn local_resilience(
    g: &PyGraph,
    chi_cap: usize,
    delta_max: usize,
    budget: u64,
) -> PyResult<Witness> {
    let w =
        adversary::local_resilience_oracle(&g.inner, chi_cap, delta_max, budget).map_err(err)?;
    Ok(w.map(|w| (w.value, pairs(&w.edges))))
}

/// Density audit; exhaustive unless `samples` is given.
#[pyfunction]
#[pyo3(signature = (g, p, epsilon = 1.0, samples = None, seed = 0, workers = 1))]
fn density_audit(
    py: Python<'_>,
    g: &PyGraph,
    p: f64,
    epsilon: f64,
    samples: Option<usize>,
    seed: u64,
    workers: usize,
) -> PyResult<Py<PyAny>> {
    let mode = match samples {
        Some(count) => AuditMode::Sampled { count, seed },
        None => AuditMode::Exhaustive,
    };
    let report = py
        .detach(|| lab::density_audit(&g.inner, p, epsilon, mode, workers))
        .map_err(err)?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (n, p, theta = 1.0, cap_multiplier = 4.0, trials = 100, seed = 1, workers = 1))]
#[allow(clippy::too_many_arguments)]
fn concentration_sample(
    py: Python<'_>,
    n: usize,
    p: f64,
    theta: f64,
    cap_multiplier: f64,
    trials: usize,
    seed: u64,
    workers: usize,
) -> PyResult<Py<PyAny>> {
    let s = py
        .detach(|| {
            lab::concentration_sample(
                n,
                p,
                theta,
                cap_multiplier,
                trials,
                seed,
                DEFAULT_ENUMERATION_LIMIT,
                workers,
            )
        })
        .map_err(err)?;
    to_py(py, &s)
}

/// Runs a sweep from key=value config text; returns the result table
/// (config and rows with traces) as a dict.
#[pyfunction]
#[pyo3(signature = (config, workers = 1))]
fn run_experiment(py: Python<'_>, config: &str, workers: usize) -> PyResult<Py<PyAny>> {
    let mut cfg = ExperimentConfig::parse(config).map_err(err)?;
    cfg.workers = workers;
    let table = py.detach(|| lab::run_experiment(&cfg)).map_err(err)?;
    to_py(py, &table)
}

#[pymodule]
#[pyo3(name = "chromres")]
fn chromres_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", lab::VERSION)?;
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(profile, m)?)?;
    m.add_function(wrap_pyfunction!(compute_k0, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_chromatic, m)?)?;
    m.add_function(wrap_pyfunction!(max_independent_set, m)?)?;
    m.add_function(wrap_pyfunction!(turan_extract, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_isets, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_family, m)?)?;
    m.add_function(wrap_pyfunction!(sparse_iset, m)?)?;
    m.add_function(wrap_pyfunction!(dsatur, m)?)?;
    m.add_function(wrap_pyfunction!(degeneracy_color, m)?)?;
    m.add_function(wrap_pyfunction!(chromatic_exact, m)?)?;
    m.add_function(wrap_pyfunction!(verify_coloring, m)?)?;
    m.add_function(wrap_pyfunction!(strip_color, m)?)?;
    m.add_function(wrap_pyfunction!(plant_clique, m)?)?;
    m.add_function(wrap_pyfunction!(random_budget, m)?)?;
    m.add_function(wrap_pyfunction!(bounded_degree_h, m)?)?;
    m.add_function(wrap_pyfunction!(global_resilience, m)?)?;
    m.add_function(wrap_pyfunction!(local_resilience, m)?)?;
    m.add_function(wrap_pyfunction!(density_audit, m)?)?;
    m.add_function(wrap_pyfunction!(concentration_sample, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
