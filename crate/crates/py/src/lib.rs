use std::collections::BTreeMap;

use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use rug::Integer;
use serde::Serialize;

use subrank_core::combinatorics;
use subrank_core::cw;
use subrank_core::exact_bounds::{self, ScanOptions, VerifyPolicy};
use subrank_core::gf2::{self, Gf2Subspace, Gf2Vector};
use subrank_core::hypergraph::{self, AlphaMaps, Partition};
use subrank_core::suites::{self, Suite, SuiteOptions};

fn err(e: subrank_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn big(py: Python<'_>, n: &Integer) -> PyResult<Py<PyAny>> {
    let int = py.get_type::<pyo3::types::PyInt>();
    Ok(int.call1((n.to_string_radix(16), 16))?.unbind())
}

fn json_to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any().unbind()
            } else if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.into_any().unbind()
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any().unbind()
            }
        }
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(xs) => {
            let items = xs.iter().map(|x| json_to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any().unbind()
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, json_to_py(py, x)?)?;
            }
            d.into_any().unbind()
        }
    })
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &v)
}

fn subspace(n: usize, basis: Vec<u64>) -> PyResult<Gf2Subspace> {
    if n == 0 || n > 64 {
        return Err(PyOverflowError::new_err("basis words need 1 <= n <= 64"));
    }
    let vectors: Vec<Gf2Vector> = basis.into_iter().map(|w| Gf2Vector::from_word(n, w)).collect();
    gf2::canonicalize(n, &vectors).map_err(err)
}

/// A k-partite k-uniform hypergraph on vertex sets `[n_1] x ... x [n_k]`.
#[pyclass(module = "subrank", name = "KGraph", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyKGraph {
    inner: hypergraph::KGraph,
}

#[pymethods]
impl PyKGraph {
    /// Edges are 1-based vertex tuples. Part sizes default to the largest
    /// vertex seen in each coordinate.
    #[new]
    #[pyo3(signature = (edges, sizes=None))]
    fn new(edges: Vec<Vec<u32>>, sizes: Option<Vec<u32>>) -> PyResult<Self> {
        let inner = match sizes {
            Some(s) => hypergraph::KGraph::new(s, edges),
            None => hypergraph::KGraph::from_edges(edges),
        }
        .map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: hypergraph::KGraph::parse(text).map_err(err)?,
        })
    }

    /// The type graph of a partition `lambda` of an even `k`.
    #[staticmethod]
    fn type_graph(parts: Vec<u32>) -> PyResult<Self> {
        let lambda = Partition::new(parts).map_err(err)?;
        Ok(Self {
            inner: hypergraph::type_graph(&lambda),
        })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn sizes(&self) -> Vec<u32> {
        self.inner.sizes().to_vec()
    }

    #[getter]
    fn edges(&self) -> Vec<Vec<u32>> {
        self.inner.edges().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __contains__(&self, edge: Vec<u32>) -> bool {
        self.inner.contains(&edge)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "KGraph(order={}, sizes={:?}, edges={})",
            self.inner.order(),
            self.inner.sizes(),
            self.inner.len()
        )
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn kronecker(&self, other: &Self) -> PyResult<Self> {
        Ok(Self {
            inner: hypergraph::kronecker(&self.inner, &other.inner).map_err(err)?,
        })
    }

    fn power(&self, n: u32) -> PyResult<Self> {
        Ok(Self {
            inner: hypergraph::kronecker_power(&self.inner, n).map_err(err)?,
        })
    }

    fn is_induced_matching(&self, edges: Vec<Vec<u32>>) -> PyResult<bool> {
        hypergraph::is_induced_matching(&edges, &self.inner).map_err(err)
    }

    /// Largest induced matching, as a dict with `value`, `witness`, `exact`
    /// and `nodes`. The GIL is released during the search.
    #[pyo3(signature = (budget=hypergraph::DEFAULT_BUDGET))]
    fn subrank(&self, py: Python<'_>, budget: u64) -> PyResult<Py<PyAny>> {
        let g = self.inner.clone();
        let res = py.detach(move || hypergraph::subrank(&g, budget));
        to_py(py, &res)
    }

    #[pyo3(signature = (n, budget=hypergraph::DEFAULT_BUDGET))]
    fn power_rate(&self, py: Python<'_>, n: u32, budget: u64) -> PyResult<Py<PyAny>> {
        let g = self.inner.clone();
        let res = py
            .detach(move || hypergraph::subrank_power_rate(&g, n, budget))
            .map_err(err)?;
        to_py(py, &res)
    }
}

/// Entropy lower bound on log2 of the asymptotic subrank of a tight 3-graph.
/// `alpha` is one `{vertex: value}` map per coordinate; it defaults to the
/// canonical maps when `graph` is a recognized type graph.
#[pyfunction]
#[pyo3(signature = (graph, alpha=None))]
fn cw3_lower_bound(py: Python<'_>, graph: &PyKGraph, alpha: Option<Vec<BTreeMap<u32, i64>>>) -> PyResult<Py<PyAny>> {
    let alpha = match alpha {
        Some(maps) => AlphaMaps::new(maps),
        None => match cw::recognize_type_graph(&graph.inner) {
            Some(lambda) => cw::alpha_for_type_graph(&lambda),
            None => {
                return Err(PyValueError::new_err(
                    "alpha is required for graphs that are not type graphs",
                ))
            }
        },
    };
    let g = graph.inner.clone();
    let res = py.detach(move || cw::cw3_lower_bound(&g, &alpha)).map_err(err)?;
    to_py(py, &res)
}

/// Certify the rank inequality for one `(k, r)` cell.
#[pyfunction]
#[pyo3(signature = (k, r, exact_fallback=true))]
fn verify_rank_inequality(py: Python<'_>, k: u32, r: u32, exact_fallback: bool) -> PyResult<Py<PyAny>> {
    let policy = VerifyPolicy {
        exact_fallback,
        ..VerifyPolicy::default()
    };
    let cert = py
        .detach(move || exact_bounds::verify_rank_inequality(k, r, &policy))
        .map_err(err)?;
    to_py(py, &cert)
}

/// Scan all even `k` in `[k_min, k_max]`. Timing fields are zeroed unless
/// `record_timing` is set.
#[pyfunction]
#[pyo3(signature = (k_max, k_min=4, jobs=1, record_timing=false))]
fn scan(py: Python<'_>, k_max: u32, k_min: u32, jobs: usize, record_timing: bool) -> PyResult<Py<PyAny>> {
    let mut opts = ScanOptions::new(k_max);
    opts.k_min = k_min;
    opts.jobs = jobs;
    opts.record_timing = record_timing;
    let report = py
        .detach(move || exact_bounds::scan_conjecture(&opts, None))
        .map_err(err)?;
    to_py(py, &report)
}

/// Number of pairs `(x, y)` of weight-`k/2` words with `x - y` in `V`, where
/// `V` is the span of `basis` (`(k-1)`-bit integers). The restricted count
/// also requires the last coordinate of `x` and `y` to be zero.
#[pyfunction]
#[pyo3(signature = (k, basis, restricted=true))]
fn pair_count(py: Python<'_>, k: usize, basis: Vec<u64>, restricted: bool) -> PyResult<Py<PyAny>> {
    if k < 2 {
        return Err(PyValueError::new_err("k must be >= 2"));
    }
    let v = subspace(k - 1, basis)?;
    let n = if restricted {
        gf2::restricted_pair_count(k, &v)
    } else {
        gf2::unrestricted_pair_count(k, &v)
    }
    .map_err(err)?;
    big(py, &n)
}

/// Weight distribution of the span of `basis` in `F_2^n`.
#[pyfunction]
fn weight_distribution(py: Python<'_>, n: usize, basis: Vec<u64>) -> PyResult<Vec<Py<PyAny>>> {
    let v = subspace(n, basis)?;
    let wd = v.weight_distribution_auto(1 << 24).map_err(err)?;
    wd.counts().iter().map(|c| big(py, c)).collect()
}

#[pyfunction]
fn krawchouk(py: Python<'_>, n: i64, k: i64, t: i64) -> PyResult<Py<PyAny>> {
    big(py, &combinatorics::krawchouk_value(n, k, t))
}

#[pyfunction]
fn binomial(py: Python<'_>, n: i64, m: i64) -> PyResult<Py<PyAny>> {
    big(py, &combinatorics::binomial(n, m))
}

/// Run a named verification suite and return `{options, rows, summary}`.
#[pyfunction]
#[pyo3(signature = (suite, n_max=None, k_max=None, samples=None, seed=0, jobs=1))]
fn run_suite(
    py: Python<'_>,
    suite: &str,
    n_max: Option<u32>,
    k_max: Option<u32>,
    samples: Option<u32>,
    seed: u64,
    jobs: usize,
) -> PyResult<Py<PyAny>> {
    let suite: Suite = suite.parse().map_err(err)?;
    let mut opts = SuiteOptions::new(suite);
    opts.n_max = n_max;
    opts.k_max = k_max;
    opts.samples = samples;
    opts.seed = seed;
    let report = py
        .detach(move || suites::run_suite_with_jobs(&opts, jobs))
        .map_err(err)?;
    to_py(py, &report)
}

#[pyfunction]
fn code_version() -> &'static str {
    subrank_core::report::code_version()
}

#[pymodule]
fn subrank(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyKGraph>()?;
    m.add_function(wrap_pyfunction!(cw3_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(verify_rank_inequality, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(pair_count, m)?)?;
    m.add_function(wrap_pyfunction!(weight_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(krawchouk, m)?)?;
    m.add_function(wrap_pyfunction!(binomial, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(code_version, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
