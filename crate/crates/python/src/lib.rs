//! Python bindings: graphs, mu-separation, the screening learners and
//! Hawkes simulation.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use causal_screen::experiments;
use causal_screen::graph::io::GraphJson;
use causal_screen::graph;
use causal_screen::hawkes::{self, ExponentialKernel, HawkesModel, Intervention, SimulationOptions};
use causal_screen::screening::{self, PairOrder, ScreeningOptions};
use causal_screen::{AlgorithmId, Dmg, GraphOracle, IndependenceOracle, NodeId, NodeSet, SeparationQuery};

fn err(e: causal_screen::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Directed mixed graph with a loop at every node.
#[pyclass(name = "Graph", module = "causal_screen_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph(Dmg);

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (nodes, directed = Vec::new(), bidirected = Vec::new()))]
    fn new(nodes: Vec<String>, directed: Vec<(String, String)>, bidirected: Vec<(String, String)>) -> PyResult<Self> {
        GraphJson { nodes, directed, bidirected }.to_graph().map(PyGraph).map_err(err)
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Dmg::from_json_str(s).map(PyGraph).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    fn to_dot(&self) -> String {
        self.0.to_dot()
    }

    #[getter]
    fn nodes(&self) -> Vec<String> {
        self.0.labels().to_vec()
    }

    /// Non-loop directed edges as `(tail, head)` label pairs.
    fn directed_edges(&self) -> Vec<(String, String)> {
        GraphJson::from_graph(&self.0).directed
    }

    fn bidirected_edges(&self) -> Vec<(String, String)> {
        GraphJson::from_graph(&self.0).bidirected
    }

    fn has_edge(&self, tail: &str, head: &str) -> PyResult<bool> {
        let (t, h) = (self.id(tail)?, self.id(head)?);
        Ok(self.0.has_directed(t.index(), h.index()))
    }

    fn __len__(&self) -> usize {
        self.0.node_count()
    }

    fn __eq__(&self, other: &PyGraph) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph({} nodes, {} directed, {} bidirected)",
            self.0.node_count(),
            self.0.directed_count(),
            self.0.bidirected_count()
        )
    }
}

impl PyGraph {
    fn id(&self, label: &str) -> PyResult<NodeId> {
        self.0.node_by_label(label).map_err(err)
    }

    fn set(&self, labels: &[String]) -> PyResult<NodeSet> {
        self.0.resolve_labels(labels).map_err(err)
    }

    fn observed(&self, labels: Option<Vec<String>>) -> PyResult<NodeSet> {
        match labels {
            Some(l) => self.set(&l),
            None => Ok(self.0.all_nodes()),
        }
    }
}

/// Is `b` mu-separated from `a` given `c`?
#[pyfunction]
#[pyo3(signature = (g, a, b, c = Vec::new()))]
fn mu_separated(g: &PyGraph, a: Vec<String>, b: Vec<String>, c: Vec<String>) -> PyResult<bool> {
    let q = SeparationQuery::new(g.set(&a)?, g.set(&b)?, g.set(&c)?);
    causal_screen::mu_separated(&g.0, &q).map_err(err)
}

#[pyfunction]
fn directed_trek_exists(g: &PyGraph, alpha: &str, beta: &str) -> PyResult<bool> {
    graph::directed_trek_exists(&g.0, g.id(alpha)?, g.id(beta)?).map_err(err)
}

#[pyfunction]
fn latent_projection(g: &PyGraph, observed: Vec<String>) -> PyResult<PyGraph> {
    graph::latent_projection(&g.0, &g.set(&observed)?).map(PyGraph).map_err(err)
}

/// Parent graph of a DG on the observed nodes.
#[pyfunction]
fn parent_graph(g: &PyGraph, observed: Vec<String>) -> PyResult<PyGraph> {
    graph::parent_graph(&g.0, &g.set(&observed)?).map(PyGraph).map_err(err)
}

/// Canonical DG: every bidirected edge replaced by a latent parent.
#[pyfunction]
fn canonical_dg(g: &PyGraph) -> PyGraph {
    PyGraph(graph::canonical_dg(&g.0).0)
}

#[pyclass(name = "LearnResult", module = "causal_screen_py", frozen)]
struct PyLearnResult(causal_screen::LearnResult);

#[pymethods]
impl PyLearnResult {
    #[getter]
    fn graph(&self) -> PyGraph {
        PyGraph(self.0.graph.clone())
    }

    #[getter]
    fn oracle_calls(&self) -> u64 {
        self.0.oracle_calls
    }

    #[getter]
    fn algorithm(&self) -> &'static str {
        self.0.algorithm.name()
    }

    fn edges(&self) -> Vec<(String, String)> {
        GraphJson::from_graph(&self.0.graph).directed
    }

    #[pyo3(signature = (certificates = false, trace = false))]
    fn to_json(&self, certificates: bool, trace: bool) -> String {
        self.0.to_json(certificates, trace).to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "LearnResult({}: {} edges, {} oracle calls)",
            self.0.algorithm,
            self.0.graph.directed_count(),
            self.0.oracle_calls
        )
    }
}

/// Runs a learner against the mu-separation oracle of `truth` restricted to
/// `observed` (all nodes when omitted).
#[pyfunction]
#[pyo3(signature = (truth, observed = None, algorithm = "cs", order = "lex", fixpoint = false))]
fn learn(
    py: Python<'_>,
    truth: &PyGraph,
    observed: Option<Vec<String>>,
    algorithm: &str,
    order: &str,
    fixpoint: bool,
) -> PyResult<PyLearnResult> {
    let algo: AlgorithmId = algorithm.parse().map_err(err)?;
    let order: PairOrder = order.parse().map_err(err)?;
    let o = truth.observed(observed)?;
    let oracle = GraphOracle::new(truth.0.clone(), &o).map_err(err)?;
    let options = ScreeningOptions { order, parent_fixpoint: fixpoint };
    let result = py.detach(|| screening::run(algo, &oracle, options)).map_err(err)?;
    debug_assert_eq!(result.oracle_calls, oracle.calls());
    Ok(PyLearnResult(result))
}

/// Multivariate Hawkes process with exponential kernels. `kernels[target][source]`
/// is an `(a, b)` pair for `a * exp(-b * u)`.
#[pyclass(name = "HawkesModel", module = "causal_screen_py", frozen)]
struct PyHawkes(HawkesModel);

#[pymethods]
impl PyHawkes {
    #[new]
    #[pyo3(signature = (mu, kernels, horizon, labels = None))]
    fn new(mu: Vec<f64>, kernels: Vec<Vec<(f64, f64)>>, horizon: f64, labels: Option<Vec<String>>) -> PyResult<Self> {
        let kernels = kernels
            .into_iter()
            .map(|row| row.into_iter().map(|(a, b)| ExponentialKernel { a, b }).collect())
            .collect();
        let mut m = HawkesModel::new(mu, kernels, horizon).map_err(err)?;
        if let Some(l) = labels {
            m = m.with_labels(l).map_err(err)?;
        }
        Ok(PyHawkes(m))
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        HawkesModel::from_json_str(s).map(PyHawkes).map_err(err)
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.0.labels()
    }

    #[getter]
    fn spectral_radius(&self) -> f64 {
        hawkes::stationarity_check(&self.0).spectral_radius
    }

    fn causal_graph(&self) -> PyGraph {
        PyGraph(hawkes::causal_graph(&self.0))
    }

    /// Event times per node. `intervene=(node, times)` forces that node to
    /// fire exactly at `times`.
    #[pyo3(signature = (seed = 0, intervene = None, force = false))]
    fn simulate(
        &self,
        py: Python<'_>,
        seed: u64,
        intervene: Option<(String, Vec<f64>)>,
        force: bool,
    ) -> PyResult<Vec<Vec<f64>>> {
        let opts = SimulationOptions { force, ..SimulationOptions::default() };
        let h = match intervene {
            Some((node, times)) => {
                let iv = Intervention::new(self.0.node_by_label(&node).map_err(err)?, times);
                py.detach(|| hawkes::simulate_intervened(&self.0, &iv, seed, opts))
            }
            None => py.detach(|| hawkes::simulate(&self.0, seed, opts)),
        }
        .map_err(err)?;
        Ok(h.times)
    }

    /// Kolmogorov-Smirnov statistic and pass flag of the time-rescaling test
    /// on a history produced by `simulate`.
    fn time_rescaling(&self, times: Vec<Vec<f64>>) -> PyResult<(f64, bool)> {
        let h = hawkes::EventHistory::new(times, self.0.horizon).map_err(err)?;
        let ks = hawkes::time_rescaling_test(&self.0, &h).map_err(err)?;
        Ok((ks.statistic, ks.pass))
    }
}

#[pyfunction]
fn spearman(x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    experiments::spearman(&x, &y).map_err(err)
}

#[pymodule]
fn causal_screen_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyLearnResult>()?;
    m.add_class::<PyHawkes>()?;
    m.add_function(wrap_pyfunction!(mu_separated, m)?)?;
    m.add_function(wrap_pyfunction!(directed_trek_exists, m)?)?;
    m.add_function(wrap_pyfunction!(latent_projection, m)?)?;
    m.add_function(wrap_pyfunction!(parent_graph, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_dg, m)?)?;
    m.add_function(wrap_pyfunction!(learn, m)?)?;
    m.add_function(wrap_pyfunction!(spearman, m)?)?;
    Ok(())
}
